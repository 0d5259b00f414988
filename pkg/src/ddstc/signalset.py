"""Per-group multidimensional signal sets with one nonzero coordinate per point.

Point ``p_i`` (1-based ``i = 2q + r``, ``r`` in {1, 2}) carries ``+r_{q+1}``
(``r = 1``) or ``-r_{q+1}`` (``r = 2``) at coordinate ``q mod L``; all four
groups share the same point set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

POWER_TOL = 1e-9
EQ_TOL = 1e-12


def _eight_relay_radii() -> np.ndarray:
    s3 = math.sqrt(3.0)
    rel = np.empty(8)
    rel[0], rel[1], rel[4], rel[5] = 1.0, s3, 3.0, 2.0 + s3
    rel[2] = rel[1] + (rel[4] - rel[1]) / 3
    rel[3] = rel[1] + 2 * (rel[4] - rel[1]) / 3
    rel[6] = rel[2] + 2.0
    rel[7] = rel[3] + 2.0
    # r1 fixed by the power constraint sum r_i^2 = 8 (0.32353...)
    return rel * math.sqrt(8.0 / np.sum(rel ** 2))


def default_radii(m: int) -> np.ndarray:
    """Radii ``r_1 < ... < r_{m/2}`` with ``sum r_i^2 = m/2``.

    m = 4 and m = 8 use ``r_i^2 = (4i - 3) / c`` (c = 3 and 7), which are the
    exact values behind the printed 4-relay radii; m = 16 uses the 8-relay
    construction with ``r_1`` solved from the power constraint.  Other even m
    get equally spaced radii ``r_i = c i``.
    """
    if m < 2 or m % 2:
        raise ValueError(f"m must be an even integer >= 2, got {m}")
    n = m // 2
    if m in (4, 8):
        i = np.arange(1, n + 1)
        return np.sqrt((4 * i - 3) / (2 * n - 1))
    if m == 16:
        return _eight_relay_radii()
    i = np.arange(1, n + 1)
    return i * math.sqrt(n / np.sum(i ** 2))


def _check_radii(radii: np.ndarray, m: int) -> None:
    if radii.shape != (m // 2,):
        raise ValueError(f"expected {m // 2} radii, got {radii.shape[0]}")
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be strictly increasing")
    if abs(np.sum(radii ** 2) - m / 2) > POWER_TOL:
        raise ValueError(f"sum of squared radii must equal {m / 2}, got {np.sum(radii ** 2):.12g}")


def fourth_root(Q: int) -> int:
    m = round(Q ** 0.25)
    for cand in (m - 1, m, m + 1):
        if cand > 0 and cand ** 4 == Q:
            return cand
    raise ValueError(f"Q={Q} is not a fourth power")


@dataclass(frozen=True, eq=False)
class SignalSet:
    lam: int
    points: np.ndarray  # (m, L) per-group points, identical for all four groups
    radii: np.ndarray
    c1: float = 0.0
    c2: float = 0.0
    n_groups: int = field(default=4)

    @property
    def L(self) -> int:
        return self.points.shape[1]

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def Q(self) -> int:
        return self.m ** self.n_groups

    def group_power(self) -> float:
        return float(np.mean(np.sum(self.points ** 2, axis=1)))


def build_signalset(lam: int, Q: int, radii=None) -> SignalSet:
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    m = fourth_root(Q)
    if m % 2:
        raise ValueError(f"Q^(1/4) = {m} must be even")
    r = default_radii(m) if radii is None else np.asarray(radii, dtype=float)
    _check_radii(r, m)
    L = 2 ** (lam - 1)
    pts = np.zeros((m, L))
    for idx in range(m):
        q, rem = divmod(idx, 2)
        pts[idx, q % L] = r[q] if rem == 0 else -r[q]
    pts.setflags(write=False)
    r = r.copy()
    r.setflags(write=False)
    return SignalSet(lam, pts, r)


@dataclass
class SignalSetReport:
    single_coordinate: bool
    support_ok: bool
    no_pm_equal: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.single_coordinate and self.support_ok and self.no_pm_equal


def verify_signalset(S: SignalSet | np.ndarray, tol: float = EQ_TOL) -> SignalSetReport:
    """Check the point-wise and pair-wise conditions for scaled-unitary, fully
    diverse codewords over the ABBA block."""
    pts = S.points if isinstance(S, SignalSet) else np.asarray(S, dtype=float)
    rep = SignalSetReport(True, True, True)
    nz = np.abs(pts) > tol
    for i in np.flatnonzero(nz.sum(axis=1) > 1):
        rep.single_coordinate = False
        rep.violations.append(("single_coordinate", int(i)))
    for i, j in product(range(len(pts)), repeat=2):
        if i == j:
            continue
        d = pts[i] - pts[j]
        support = int(np.sum(np.abs(d) > tol))
        if not 1 <= support <= 2:
            rep.support_ok = False
            rep.violations.append(("support", i, j))
        dd = np.abs(d[np.abs(d) > tol])
        close = np.abs(dd[:, None] - dd[None, :]) <= tol
        np.fill_diagonal(close, False)
        if close.any():
            rep.no_pm_equal = False
            rep.violations.append(("plus_minus", i, j))
    return rep


def bits_per_group(S: SignalSet) -> int:
    m = S.m
    if m & (m - 1):
        raise ValueError(f"per-group size {m} is not a power of two")
    return m.bit_length() - 1


def label_to_tuple(S: SignalSet, label: int) -> tuple[int, ...]:
    """Split a label into per-group point indices; group 1 takes the most significant field."""
    b = bits_per_group(S)
    if not 0 <= label < S.Q:
        raise ValueError(f"label {label} out of range [0, {S.Q})")
    mask = (1 << b) - 1
    return tuple((label >> (b * (S.n_groups - 1 - k))) & mask for k in range(S.n_groups))


def tuple_to_label(S: SignalSet, idx) -> int:
    b = bits_per_group(S)
    label = 0
    for k in idx:
        if not 0 <= k < S.m:
            raise ValueError(f"point index {k} out of range")
        label = (label << b) | int(k)
    return label


def label_bits(S: SignalSet) -> np.ndarray:
    """Table of shape (Q, 4): row ``label`` holds the per-group point indices."""
    b = bits_per_group(S)
    labels = np.arange(S.Q)
    shifts = b * np.arange(S.n_groups - 1, -1, -1)
    return (labels[:, None] >> shifts[None, :]) & ((1 << b) - 1)


def to_csv_rows(S: SignalSet) -> list[str]:
    header = "group_dim,point_index," + ",".join(f"coord_{j + 1}" for j in range(S.L))
    rows = [header]
    for i, p in enumerate(S.points):
        rows.append(f"{S.L},{i + 1}," + ",".join(f"{v:.10g}" for v in p))
    return rows
