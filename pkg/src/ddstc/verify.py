"""Verification suites aggregated by the ``verify`` subcommand."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra, baselines
from .codebook import (
    MAX_PAIRS,
    Codebook,
    check_scaled_unitary,
    diversity_and_gain,
)
from .design import build_design, verify_group_decodable
from .harness import build_code
from .protocol import SimConfig, run_block
from .relays import (
    RelaySystem,
    reconstruct_design,
    unitarity_violation,
    verify_compatibility,
)
from .signalset import verify_signalset

SAMPLED_PAIRS = 20000


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    worst: float
    info: bool = False  # reported but not counted towards the exit status

    def to_csv(self) -> str:
        kind = "info" if self.info else "check"
        return f"{kind},{self.name},{str(self.passed).lower()},{self.worst:.10g}"


def algebra_match(lam: int, n: int = 100, seed: int = 0) -> float:
    """Max deviation between the built design and the scaled left regular
    representation of a generic algebra element."""
    D, _ = build_design(lam)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        z = rng.standard_normal(D.T) + 1j * rng.standard_normal(D.T)
        rep = algebra.left_regular_rep(algebra.AlgebraElement.from_complex(lam - 1, z))
        worst = max(worst, float(np.abs(D.evaluate_complex(z) - D.scale * rep).max()))
    return worst


def noiseless_chain(C: Codebook, RS: RelaySystem, seed: int = 0) -> float:
    """Relative deviation from ``y_t = U_t y_{t-1} / a_{t-1}`` on a noiseless block."""
    cfg = SimConfig.for_system(RS, 20.0, noise_scale=0.0, block_channel_uses=100 * RS.T)
    res = run_block(C, RS, cfg, np.random.default_rng(seed), "joint", keep_trace=True)
    Y, tx = res.trace["y"], res.trace["tx"]
    a_prev = np.concatenate([[1.0], C.a[tx[:-1]]])
    pred = np.einsum("tab,bt->at", C.matrices[tx], Y[:, :-1]) / a_prev
    return float(np.abs(Y[:, 1:] - pred).max() / np.abs(Y).max())


def _common(C: Codebook, RS: RelaySystem) -> list[Check]:
    checks = []
    u = check_scaled_unitary(C)
    checks.append(Check("scaled_unitary", u.max_offdiag < 1e-10 and u.max_diag_spread < 1e-10,
                        max(u.max_offdiag, u.max_diag_spread)))
    checks.append(Check("mean_a2", abs(u.mean_a2 - 1) < 1e-12, abs(u.mean_a2 - 1)))
    n_pairs = C.Q * (C.Q - 1) // 2
    div = diversity_and_gain(C, sample=SAMPLED_PAIRS if n_pairs > MAX_PAIRS else None)
    checks.append(Check("full_diversity" + ("_sampled" if div.sampled else ""),
                        div.fully_diverse, div.min_abs_det))
    checks.append(Check("relay_unitary", unitarity_violation(RS.relay_matrices) < 1e-12,
                        unitarity_violation(RS.relay_matrices)))
    comp = verify_compatibility(RS, C)
    checks.append(Check("relay_compatibility", comp.max_violation < 1e-10, comp.max_violation))
    x0 = unitarity_violation(RS.X0)
    checks.append(Check("x0_unitary", x0 < 1e-12, x0))
    chain = noiseless_chain(C, RS)
    checks.append(Check("noiseless_chain", chain < 1e-10, chain))
    return checks


def verify_proposed(lam: int, rate: float = 1.0) -> list[Check]:
    C, RS = build_code("proposed", lam, rate)
    checks = [Check("algebra_match", (w := algebra_match(lam)) < 1e-12, w)]
    g = verify_group_decodable(C.design.weights, C.partition)
    checks.append(Check("group_decodable", g.ok, g.max_violation))
    s = verify_signalset(C.signal_set)
    checks.append(Check("signalset", s.ok, float(len(s.violations))))
    checks += _common(C, RS)
    x0_dev = float(np.abs(RS.X0 - np.eye(RS.T)).max())
    checks.append(Check("x0_identity", x0_dev == 0.0, x0_dev))
    rec = reconstruct_design(RS)
    dev = float(np.abs(rec.weights - C.design.weights).max())
    checks.append(Check("reconstruct_design", dev < 1e-12, dev))
    return checks


def verify_baseline(code: str, rate: float = 1.0) -> list[Check]:
    C, RS = build_code(code, 2, rate)
    checks = _common(C, RS)
    if code == "circulant":
        n = len(baselines.circulant_group_partitions())
        checks.append(Check("group_decodable", n > 0, float(n), info=True))
    else:
        checks.append(Check("group_decodable", False, 0.0, info=True))
    return checks


def run_checks(code: str, lam: int, rate: float) -> list[Check]:
    if code == "proposed":
        return verify_proposed(lam, rate)
    return verify_baseline(code, rate)


def all_passed(checks: list[Check]) -> bool:
    return all(c.passed for c in checks if not c.info)
