"""Monte Carlo sweep engine: code factory, seeded block streams, stopping rule.

Block ``b`` of a run draws all of its randomness from
``PCG64(SeedSequence(seed, spawn_key=(b,)))``, so per-block counts depend only
on ``(seed, b)``.  Blocks are evaluated in fixed batches and the stopping rule
is applied to the cumulative counts in block order, which makes every result
independent of the number of workers.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import lru_cache

import numpy as np

from . import baselines
from .codebook import Codebook, materialize
from .design import build_design
from .protocol import SimConfig, run_block
from .relays import RelaySystem, build_relays
from .signalset import build_signalset

log = logging.getLogger(__name__)

CODES = ("proposed", "cyclic", "circulant")
DECODERS = ("auto", "joint", "group")
BATCH_BLOCKS = 256
CSV_HEADER = "code,rate_bpcu,snr_db,blocks,cycles,codeword_errors,bit_errors,cer,ber,seed,decoder"


def proposed_size(lam: int, rate: float) -> int:
    """Codebook size for ``rate`` bits per channel use over 2T channel uses."""
    R = 2 ** lam
    bits = rate * 2 * R
    if abs(bits - round(bits)) > 1e-9 or round(bits) % 4:
        raise ValueError(f"rate {rate} with {R} relays does not give a four-group codebook")
    return 2 ** round(bits)


@lru_cache(maxsize=16)
def build_code(code: str, lam: int = 2, rate: float = 1.0) -> tuple[Codebook, RelaySystem]:
    rate = baselines.parse_rate(rate)
    if code == "proposed":
        D, part = build_design(lam)
        S = build_signalset(lam, proposed_size(lam, rate))
        return materialize(D, S, part), build_relays(lam)
    if lam != 2:
        raise ValueError(f"the {code} baseline is defined for 4 relays only (lambda=2)")
    if code == "cyclic":
        return baselines.cyclic_codebook(rate), baselines.cyclic_relay_system()
    if code == "circulant":
        return baselines.circulant_codebook(rate)
    raise ValueError(f"unknown code '{code}'; choose from {', '.join(CODES)}")


def resolve_decoder(decoder: str, C: Codebook) -> str:
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder '{decoder}'")
    if decoder == "auto":
        return "group" if C.group_decodable else "joint"
    if decoder == "group" and not C.group_decodable:
        raise ValueError(f"code '{C.name}' is not group decodable")
    return decoder


@dataclass(frozen=True)
class ExperimentSpec:
    code: str = "proposed"
    lam: int = 2
    rate: float = 1.0
    snr_start: float = 10.0
    snr_stop: float = 30.0
    snr_step: float = 5.0
    min_errors: int = 500
    max_blocks: int = 10 ** 6
    seed: int = 0
    decoder: str = "auto"
    block_channel_uses: int = 800

    def __post_init__(self):
        if self.code not in CODES:
            raise ValueError(f"unknown code '{self.code}'")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder '{self.decoder}'")
        if not self.snr_step > 0:
            raise ValueError("snr step must be positive")
        if self.snr_stop < self.snr_start:
            raise ValueError("snr grid is empty")
        if self.min_errors < 1 or self.max_blocks < 1:
            raise ValueError("min_errors and max_blocks must be positive")

    def snr_points(self) -> list[float]:
        n = int(math.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9)) + 1
        return [round(self.snr_start + k * self.snr_step, 10) for k in range(n)]


@dataclass(frozen=True)
class ResultRow:
    code: str
    rate_bpcu: float
    snr_db: float
    blocks: int
    cycles: int
    codeword_errors: int
    bit_errors: int
    cer: float
    ber: float
    seed: int
    decoder: str

    def to_csv(self) -> str:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(f"{v:.10g}" if isinstance(v, float) else str(v))
        return ",".join(out)


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def run_blocks(code: str, lam: int, rate: float, decoder: str, snr_db: float,
               block_channel_uses: int, seed: int, start: int, stop: int) -> np.ndarray:
    """Per-block counts (cycles, codeword_errors, bit_errors, bits) for blocks [start, stop)."""
    C, RS = build_code(code, lam, rate)
    cfg = SimConfig.for_system(RS, snr_db, block_channel_uses=block_channel_uses, seed=seed)
    out = np.zeros((stop - start, 4), dtype=np.int64)
    for k, b in enumerate(range(start, stop)):
        r = run_block(C, RS, cfg, block_rng(seed, b), decoder)
        out[k] = (r.cycles, r.codeword_errors, r.bit_errors, r.bits)
    return out


def _split(start: int, stop: int, parts: int) -> list[tuple[int, int]]:
    edges = np.linspace(start, stop, parts + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def simulate_point(spec: ExperimentSpec, snr_db: float,
                   pool: ProcessPoolExecutor | None = None, workers: int = 1) -> ResultRow:
    C, _ = build_code(spec.code, spec.lam, spec.rate)
    decoder = resolve_decoder(spec.decoder, C)
    args = (spec.code, spec.lam, float(spec.rate), decoder, float(snr_db),
            spec.block_channel_uses, spec.seed)
    counts = np.zeros((0, 4), dtype=np.int64)
    done = 0
    while done < spec.max_blocks:
        stop = min(done + BATCH_BLOCKS, spec.max_blocks)
        if pool is None:
            parts = [run_blocks(*args, done, stop)]
        else:
            futs = [pool.submit(run_blocks, *args, a, b) for a, b in _split(done, stop, workers)]
            parts = [f.result() for f in futs]
        counts = np.concatenate([counts] + parts)
        done = stop
        if counts[:, 1].sum() >= spec.min_errors:
            break
    cum = np.cumsum(counts[:, 1])
    hit = np.flatnonzero(cum >= spec.min_errors)
    n_blocks = int(hit[0]) + 1 if hit.size else counts.shape[0]
    cycles, cw_err, bit_err, bits = (int(v) for v in counts[:n_blocks].sum(axis=0))
    row = ResultRow(spec.code, float(spec.rate), float(snr_db), n_blocks, cycles, cw_err, bit_err,
                    cw_err / cycles if cycles else 0.0, bit_err / bits if bits else 0.0,
                    spec.seed, decoder)
    log.info("%s rate=%g snr=%g dB: %d blocks, %d errors, cer=%.3e",
             spec.code, spec.rate, snr_db, n_blocks, cw_err, row.cer)
    return row


def sweep(spec: ExperimentSpec, workers: int = 1, emit=None) -> list[ResultRow]:
    """Run every grid point in order; ``emit(row)`` is called as soon as a row is ready."""
    rows = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for snr in spec.snr_points():
            row = simulate_point(spec, snr, pool, workers)
            rows.append(row)
            if emit is not None:
                emit(row)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return rows


def format_csv(rows: list[ResultRow]) -> str:
    return "\n".join([CSV_HEADER] + [r.to_csv() for r in rows]) + "\n"


def crossing_db(snr: list[float], cer: list[float], target: float) -> float | None:
    """SNR where the error curve first drops to ``target`` (log-linear interpolation)."""
    for k in range(len(snr) - 1):
        c0, c1 = cer[k], cer[k + 1]
        if c0 >= target >= c1 and c0 > 0:
            if c1 <= 0:
                return snr[k + 1]
            l0, l1, lt = math.log10(c0), math.log10(c1), math.log10(target)
            if l0 == l1:
                return snr[k]
            return snr[k] + (snr[k + 1] - snr[k]) * (l0 - lt) / (l0 - l1)
    return None
