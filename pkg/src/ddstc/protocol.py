"""Two-stage amplify-and-forward differential relay protocol and its decoders.

One cycle spends T channel uses on the source broadcast and T on the relay
transmission.  With compatible relays and codewords the destination sees
``y_t = U_t y_{t-1} / a_{t-1} + noise`` and decodes without channel knowledge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codebook import Codebook
from .relays import RelaySystem

A_DECIMALS = 12
# decision tables are built per distinct scale value up to this many values
MAX_TABLE_SCALES = 64


@dataclass(frozen=True)
class SimConfig:
    snr_db: float
    R: int
    T: int
    M: int
    pi1: float = 1.0
    pi2: float | None = None
    block_channel_uses: int = 800
    seed: int = 0
    noise_scale: float = 1.0  # test hook: 0 disables all noise
    genie_scale: bool = False  # use the true a_{t-1} instead of the decided one

    def __post_init__(self):
        if self.pi2 is None:
            object.__setattr__(self, "pi2", 1.0 / self.R)
        if self.block_channel_uses % (2 * self.T):
            raise ValueError(
                f"block_channel_uses={self.block_channel_uses} is not a multiple of 2T={2 * self.T}"
            )
        if self.block_channel_uses < 4 * self.T:
            raise ValueError("a block needs at least two cycles")

    @property
    def P(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def cycles_per_block(self) -> int:
        return self.block_channel_uses // (2 * self.T)

    @property
    def relay_gain(self) -> float:
        P = self.P
        return math.sqrt(self.pi2 * P / (self.pi1 * P + 1))

    @property
    def effective_gain(self) -> float:
        """Multiplier of ``X h`` in the received vector."""
        P = self.P
        return math.sqrt(self.pi1 * self.pi2 * self.T * P ** 2 / (self.pi1 * P + 1))

    @classmethod
    def for_system(cls, RS: RelaySystem, snr_db: float, **kw) -> "SimConfig":
        return cls(snr_db=snr_db, R=RS.R, T=RS.T, M=RS.M, **kw)


@dataclass(frozen=True, eq=False)
class ChannelState:
    f: np.ndarray
    g: np.ndarray
    M: int

    @property
    def h(self) -> np.ndarray:
        f = np.where(np.arange(self.f.size) < self.M, self.f, np.conj(self.f))
        return f * self.g


def crandn(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) samples."""
    z = rng.standard_normal(tuple(shape) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)


def draw_channel(cfg: SimConfig, rng: np.random.Generator) -> ChannelState:
    return ChannelState(crandn(rng, (cfg.R,)), crandn(rng, (cfg.R,)), cfg.M)


def differential_encode(U: np.ndarray, s_prev: np.ndarray, a_prev: float) -> np.ndarray:
    if a_prev <= 0:
        raise ValueError(f"a_prev must be positive, got {a_prev}")
    return U @ s_prev / a_prev


def relay_and_receive(s: np.ndarray, ch: ChannelState, RS: RelaySystem, cfg: SimConfig,
                      rng: np.random.Generator) -> np.ndarray:
    """Received vector(s) at the destination for transmitted ``s`` of shape (T,) or (T, n)."""
    s = np.asarray(s, dtype=complex)
    single = s.ndim == 1
    S = s[:, None] if single else s
    T, n = S.shape
    if T != RS.T or ch.f.size != RS.R:
        raise ValueError("dimension mismatch between signal, channel and relays")
    v = crandn(rng, (RS.R, T, n)) * cfg.noise_scale
    w = crandn(rng, (T, n)) * cfg.noise_scale
    r = math.sqrt(cfg.pi1 * T * cfg.P) * ch.f[:, None, None] * S[None] + v
    r[RS.M:] = np.conj(r[RS.M:])
    t = cfg.relay_gain * np.einsum("jab,jbn->jan", RS.relay_matrices, r)
    y = np.einsum("j,jan->an", ch.g, t) + w
    return y[:, 0] if single else y


# ---------------------------------------------------------------- decoders

def _joint_metrics(Y: np.ndarray, Yp: np.ndarray, a_prev, C: Codebook) -> np.ndarray:
    """(Q, n) metrics ||y - U y_prev / a||^2."""
    pred = np.einsum("qab,bn->qan", C.matrices, Yp) / a_prev
    d = Y[None] - pred
    return np.einsum("qan,qan->qn", d.real, d.real) + np.einsum("qan,qan->qn", d.imag, d.imag)


def _group_metrics(Y: np.ndarray, Yp: np.ndarray, a_prev, C: Codebook) -> np.ndarray:
    """(4, m, n) metrics ||y - S_k(p) y_prev / a||^2."""
    pred = np.einsum("kpab,bn->kpan", C.group_matrices, Yp) / a_prev
    d = Y[None, None] - pred
    return np.sum(d.real ** 2 + d.imag ** 2, axis=2)


def _require_group(C: Codebook) -> None:
    if not C.group_decodable or C.group_matrices is None:
        raise ValueError(f"codebook '{C.name}' is not group decodable; use the joint decoder")


def decode_batch(Y: np.ndarray, Yp: np.ndarray, a_prev, C: Codebook,
                 decoder: str = "joint") -> tuple[np.ndarray, int]:
    """Decide codeword indices for columns of ``Y`` given ``Yp``.

    ``a_prev`` is a scalar or one value per column.  Returns the indices and
    the number of metric evaluations spent per decision.
    """
    if C.Q == 0:
        raise ValueError("empty codebook")
    Y = np.asarray(Y, dtype=complex)
    Yp = np.asarray(Yp, dtype=complex)
    a_prev = np.asarray(a_prev, dtype=float)
    if np.any(a_prev <= 0):
        raise ValueError("a_prev must be positive")
    if decoder == "joint":
        return np.argmin(_joint_metrics(Y, Yp, a_prev, C), axis=0), C.Q
    if decoder == "group":
        _require_group(C)
        met = _group_metrics(Y, Yp, a_prev, C)
        best = np.argmin(met, axis=1)  # (4, n)
        m = met.shape[1]
        return np.ravel_multi_index(tuple(best), (m,) * best.shape[0]), met.shape[0] * m
    raise ValueError(f"unknown decoder '{decoder}'")


@dataclass(frozen=True, eq=False)
class Codeword:
    matrix: np.ndarray
    a: float
    index: int


def _codeword(C: Codebook, i: int) -> Codeword:
    return Codeword(C.matrices[i], float(C.a[i]), int(i))


def joint_decode(y_cur, y_prev, a_prev: float, C: Codebook) -> Codeword:
    """Exhaustive search over the codebook; ties go to the lowest index."""
    idx, _ = decode_batch(np.asarray(y_cur)[:, None], np.asarray(y_prev)[:, None], a_prev, C, "joint")
    return _codeword(C, int(idx[0]))


def group_decode(y_cur, y_prev, a_prev: float, C: Codebook) -> Codeword:
    """Independent per-group searches, assembled into one codeword."""
    idx, _ = decode_batch(np.asarray(y_cur)[:, None], np.asarray(y_prev)[:, None], a_prev, C, "group")
    return _codeword(C, int(idx[0]))


# ---------------------------------------------------------------- blocks

@dataclass
class BlockResult:
    cycles: int = 0
    codeword_errors: int = 0
    bit_errors: int = 0
    bits: int = 0
    trace: dict | None = field(default=None, repr=False)


def _scale_table(C: Codebook) -> tuple[np.ndarray, np.ndarray, int]:
    """Distinct scale values (plus 1 for the initial cycle), codeword -> value map."""
    vals = np.round(np.append(C.a, 1.0), A_DECIMALS)
    uniq, inv = np.unique(vals, return_inverse=True)
    return uniq, inv[:-1], int(inv[-1])


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return count


def transmit_sequence(C: Codebook, RS: RelaySystem, tx: np.ndarray) -> np.ndarray:
    """Source vectors s_0..s_n for codeword indices ``tx`` (shape (T, n+1))."""
    S = np.empty((RS.T, tx.size + 1), dtype=complex)
    S[:, 0] = RS.s0
    a_prev = 1.0
    for t, i in enumerate(tx, start=1):
        S[:, t] = C.matrices[i] @ S[:, t - 1] / a_prev
        a_prev = C.a[i]
    return S


def run_block(C: Codebook, RS: RelaySystem, cfg: SimConfig, rng: np.random.Generator,
              decoder: str = "joint", keep_trace: bool = False) -> BlockResult:
    """Simulate one quasi-static block: s_0 then uniformly random codewords."""
    if C.T != RS.T or cfg.T != RS.T:
        raise ValueError("codebook, relays and config disagree on T")
    n = cfg.cycles_per_block
    ch = draw_channel(cfg, rng)
    tx = rng.integers(0, C.Q, size=n - 1)
    S = transmit_sequence(C, RS, tx)
    Y = relay_and_receive(S, ch, RS, cfg, rng)
    Ycur, Yprev = Y[:, 1:], Y[:, :-1]

    if cfg.genie_scale:
        a_prev = np.concatenate([[1.0], C.a[tx[:-1]]])
        dec, _ = decode_batch(Ycur, Yprev, a_prev, C, decoder)
    else:
        dec = _decide_chain(Ycur, Yprev, C, decoder)

    wrong = dec != tx
    bits = C.bits_per_codeword
    res = BlockResult(n - 1, int(wrong.sum()), int(_popcount(dec[wrong] ^ tx[wrong]).sum()),
                      (n - 1) * bits)
    if keep_trace:
        res.trace = {"s": S, "y": Y, "tx": tx, "decoded": dec, "channel": ch}
    return res


def _decide_chain(Ycur: np.ndarray, Yprev: np.ndarray, C: Codebook, decoder: str) -> np.ndarray:
    """Decision-directed decoding where a_{t-1} comes from the previous decision."""
    n = Ycur.shape[1]
    scales, scale_of_cw, start = _scale_table(C)
    if scales.size <= MAX_TABLE_SCALES:
        # decisions for every candidate a_{t-1}, then follow the chain
        table = np.stack([decode_batch(Ycur, Yprev, a, C, decoder)[0] for a in scales])
        dec = np.empty(n, dtype=np.int64)
        k = start
        for t in range(n):
            dec[t] = table[k, t]
            k = scale_of_cw[dec[t]]
        return dec
    dec = np.empty(n, dtype=np.int64)
    a = 1.0
    for t in range(n):
        dec[t] = decode_batch(Ycur[:, t:t + 1], Yprev[:, t:t + 1], a, C, decoder)[0][0]
        a = C.a[dec[t]]
    return dec
