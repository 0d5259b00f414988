"""Finite codebooks of scaled-unitary T x T codewords and their verification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .design import GroupPartition, LinearDesign, verify_group_decodable
from .signalset import SignalSet, label_bits

UNITARY_TOL = 1e-10
POWER_TOL = 1e-12
DET_TOL = 1e-12
MAX_PAIRS = 2 ** 16


class DiversityBudgetExceeded(RuntimeError):
    """Raised when an exhaustive pairwise scan would exceed the pair budget."""


@dataclass(eq=False)
class Codebook:
    name: str
    matrices: np.ndarray  # (Q, T, T)
    design: LinearDesign | None = None
    signal_set: SignalSet | None = None
    partition: GroupPartition | None = None
    group_decodable: bool = False
    group_matrices: np.ndarray | None = None  # (4, m, T, T): S_k at every group point
    group_indices: np.ndarray | None = None  # (Q, 4): per-group point index of each codeword
    gain: float = 1.0  # real factor applied to the unscaled design
    a: np.ndarray = field(init=False)

    def __post_init__(self):
        self.matrices = np.asarray(self.matrices, dtype=complex)
        if self.matrices.ndim != 3:
            self.matrices = self.matrices.reshape((0, 0, 0))
        gram = np.einsum("qji,qjk->qik", np.conj(self.matrices), self.matrices)
        self.a = np.sqrt(np.real(np.einsum("qii->q", gram)) / max(self.T, 1))

    @property
    def Q(self) -> int:
        return self.matrices.shape[0]

    @property
    def T(self) -> int:
        return self.matrices.shape[1]

    @property
    def bits_per_codeword(self) -> int:
        Q = self.Q
        if Q < 1 or Q & (Q - 1):
            raise ValueError(f"codebook size {Q} is not a power of two")
        return Q.bit_length() - 1

    @property
    def rate_per_T(self) -> float:
        return math.log2(self.Q) / self.T

    @property
    def rate_per_2T(self) -> float:
        return math.log2(self.Q) / (2 * self.T)

    def __len__(self) -> int:
        return self.Q


def scale_of(U: np.ndarray) -> float:
    """``a`` such that ``U^H U = a^2 I`` (read off the mean diagonal)."""
    U = np.asarray(U)
    return float(np.sqrt(np.real(np.trace(U.conj().T @ U)) / U.shape[0]))


def materialize(D: LinearDesign, S: SignalSet, partition: GroupPartition,
                normalize: bool = True, name: str = "proposed") -> Codebook:
    """Enumerate the four-fold Cartesian product of ``S`` through ``D``.

    Codeword ``label`` uses per-group points ``label_bits(S)[label]``.  With
    ``normalize`` the design is rescaled so that ``E[a^2] = 1`` (a no-op for
    four relays, where the design scale already gives unit average power).
    """
    if len(partition.groups) != S.n_groups:
        raise ValueError("partition and signal set disagree on the number of groups")
    if D.K != S.n_groups * S.L or any(len(g) != S.L for g in partition.groups):
        raise ValueError(f"design has K={D.K} real variables; signal set needs {S.n_groups * S.L}")
    gain = D.scale
    total = S.n_groups * S.group_power()
    if normalize and total > 0:
        # unscaled designs satisfy S^H S = sum |x_i|^2 I on these signal sets
        gain = 1.0 / math.sqrt(total)
    # S_k(p) for each group k and point p
    G = np.stack([
        gain * np.tensordot(S.points, D.weights[list(g)], axes=([1], [0]))
        for g in partition.groups
    ])
    idx = label_bits(S)
    U = np.zeros((S.Q, D.T, D.T), dtype=complex)
    for k in range(S.n_groups):
        U += G[k][idx[:, k]]
    check = verify_group_decodable(D.weights, partition)
    return Codebook(name, U, D, S, partition, check.ok, G, idx, gain)


@dataclass
class UnitaryReport:
    ok: bool
    max_offdiag: float
    max_diag_spread: float
    mean_a2: float
    violations: list = field(default_factory=list)


def check_scaled_unitary(C: Codebook, tol: float = UNITARY_TOL,
                         power_tol: float = POWER_TOL) -> UnitaryReport:
    if C.Q == 0:
        return UnitaryReport(True, 0.0, 0.0, 1.0)
    gram = np.einsum("qji,qjk->qik", np.conj(C.matrices), C.matrices)
    diag = np.real(np.einsum("qii->qi", gram))
    off = gram.copy()
    off[:, np.arange(C.T), np.arange(C.T)] = 0
    offmax = np.abs(off).max(axis=(1, 2))
    spread = diag.max(axis=1) - diag.min(axis=1)
    bad = np.flatnonzero((offmax >= tol) | (spread >= tol))
    mean_a2 = float(np.mean(C.a ** 2))
    ok = bad.size == 0 and abs(mean_a2 - 1) < power_tol
    return UnitaryReport(ok, float(offmax.max()), float(spread.max()), mean_a2,
                         [int(i) for i in bad[:20]])


@dataclass
class DiversityReport:
    fully_diverse: bool
    coding_gain: float  # min |det(dS^H dS)|
    min_abs_det: float  # min |det dS|
    max_det: float
    worst_pair: tuple[int, int] | None
    pairs_checked: int
    sampled: bool = False


def _pair_dets(M: np.ndarray, i: np.ndarray, j: np.ndarray, chunk: int = 1 << 14) -> np.ndarray:
    out = np.empty(i.size)
    for s in range(0, i.size, chunk):
        d = M[i[s:s + chunk]] - M[j[s:s + chunk]]
        out[s:s + chunk] = np.abs(np.linalg.det(d))
    return out


def diversity_and_gain(C: Codebook, max_pairs: int = MAX_PAIRS, sample: int | None = None,
                       rng: np.random.Generator | None = None, tol: float = DET_TOL) -> DiversityReport:
    """Minimum of ``|det(dS^H dS)|`` over codeword pairs, lexicographic order.

    Exhaustive when the pair count fits ``max_pairs``; otherwise raises
    :class:`DiversityBudgetExceeded` unless ``sample`` random pairs are requested.
    """
    Q = C.Q
    n_pairs = Q * (Q - 1) // 2
    sampled = False
    if n_pairs > max_pairs:
        if sample is None:
            raise DiversityBudgetExceeded(
                f"{n_pairs} pairs exceed the budget of {max_pairs}; pass sample=N to sample pairs"
            )
        rng = rng if rng is not None else np.random.default_rng(0)
        i = rng.integers(0, Q, size=sample)
        j = rng.integers(0, Q - 1, size=sample)
        j = j + (j >= i)
        i, j = np.minimum(i, j), np.maximum(i, j)
        sampled = True
    else:
        i, j = np.triu_indices(Q, k=1)
    if i.size == 0:
        return DiversityReport(True, math.inf, math.inf, 0.0, None, 0, sampled)
    dets = _pair_dets(C.matrices, i, j)
    w = int(np.argmin(dets))
    min_det = float(dets[w])
    max_det = float(dets.max())
    diverse = min_det > tol * max(max_det, 1.0)
    return DiversityReport(diverse, min_det ** 2, min_det, max_det ** 2,
                           (int(i[w]), int(j[w])), int(i.size), sampled)


@dataclass
class Complexity:
    joint: int
    per_group: int | None
    joint_evaluations: int
    group_evaluations: int | None


def complexity_report(C: Codebook) -> Complexity:
    if C.group_decodable and C.group_matrices is not None:
        m = C.group_matrices.shape[1]
        return Complexity(C.Q, m, C.Q, C.group_matrices.shape[0] * m)
    return Complexity(C.Q, None, C.Q, None)


def determinant_bound_check(C: Codebook, n_pairs: int = 1000,
                            rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Check the block-diagonalisation of ``dS^H dS`` and its lower bound.

    With ``dS = [[dA, -dB^H], [dB, dA^H]]`` (design scale removed) returns
    ``(max relative error of det(dS^H dS) = det(dA^H dA + dB^H dB) det(dA dA^H + dB dB^H),
    min of det(dS^H dS) / max(|det dA|^2, |det dB|^2)^2)``; the second should be >= 1.
    """
    if C.design is None:
        raise ValueError("codebook has no underlying design")
    rng = rng if rng is not None else np.random.default_rng(0)
    h = C.T // 2
    i = rng.integers(0, C.Q, n_pairs)
    j = rng.integers(0, C.Q, n_pairs)
    keep = i != j
    i, j = i[keep], j[keep]
    dS = (C.matrices[i] - C.matrices[j]) / C.gain
    dA, dB = dS[:, :h, :h], dS[:, h:, :h]
    H = lambda X: np.conj(np.swapaxes(X, 1, 2))  # noqa: E731
    full = np.real(np.linalg.det(H(dS) @ dS))
    blocks = np.real(np.linalg.det(H(dA) @ dA + H(dB) @ dB) * np.linalg.det(dA @ H(dA) + dB @ H(dB)))
    rel = np.abs(full - blocks) / np.maximum(np.abs(full), 1e-300)
    bound = np.maximum(np.abs(np.linalg.det(dA)) ** 2, np.abs(np.linalg.det(dB)) ** 2) ** 2
    ratio = full[bound > 0] / bound[bound > 0]
    return float(rel.max()), float(ratio.min()) if ratio.size else math.inf

