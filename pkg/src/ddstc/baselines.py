"""Comparison codes for four relays: cyclic diagonal codes and circulant codes."""

from __future__ import annotations

import numpy as np

from .codebook import Codebook
from .design import LinearDesign, find_group_partitions
from .relays import RelaySystem

CYCLIC_PARAMS = {
    1.0: (256, (1, 11, 67, 101)),
    1.5: (4096, (1, 43, 877, 2039)),
}
CIRCULANT_PSK = {1.0: 64, 1.5: 1024}
CIRCULANT_ROTATIONS = (0.0, 1.5, 3.0, 4.5)  # radians
T = 4


def parse_rate(rate) -> float:
    if isinstance(rate, str):
        rate = rate.strip().lower().removesuffix("bpcu")
    try:
        return float(rate)
    except (TypeError, ValueError):
        raise ValueError(f"unsupported rate tag {rate!r}") from None


def _lookup(table: dict, rate):
    r = parse_rate(rate)
    if r not in table:
        raise ValueError(f"unsupported rate {rate!r}; choose from {sorted(table)}")
    return table[r]


def cyclic_codebook(rate) -> Codebook:
    """Powers ``V^i`` of ``V = diag(zeta^u_1, ..., zeta^u_4)``, ``zeta = exp(2 pi i / N)``."""
    N, u = _lookup(CYCLIC_PARAMS, rate)
    i = np.arange(N)[:, None]
    phases = np.exp(2j * np.pi * ((i * np.array(u)[None, :]) % N) / N)
    U = np.zeros((N, T, T), dtype=complex)
    U[:, np.arange(T), np.arange(T)] = phases
    return Codebook("cyclic", U)


def cyclic_relay_system() -> RelaySystem:
    """Diagonal DFT relays; the initial matrix is the unitary DFT."""
    k = np.arange(T)
    A = np.stack([np.diag(1j ** (k * j)) for j in range(T)])
    return RelaySystem(A, T, np.full(T, 0.5, dtype=complex))


def shift_matrix(n: int = T) -> np.ndarray:
    """Cyclic shift: e_k -> e_{k+1 mod n}."""
    return np.roll(np.eye(n), 1, axis=0)


def circulant_design() -> LinearDesign:
    """``sum_k u_k Pi^(k-1)`` in the four complex slot variables."""
    Pi = shift_matrix()
    P = np.stack([np.linalg.matrix_power(Pi, k) for k in range(T)]).astype(complex)
    return LinearDesign.from_complex_parts(P, np.zeros_like(P))


def circulant_codebook(rate) -> tuple[Codebook, RelaySystem]:
    """Codewords ``u A_k`` with ``u`` from a rotated PSK; index = (k-1) n + q."""
    n = _lookup(CIRCULANT_PSK, rate)
    Pi = shift_matrix()
    A = np.stack([np.linalg.matrix_power(Pi, k) for k in range(T)]).astype(complex)
    q = np.arange(n)
    U = np.concatenate([
        np.exp(1j * (2 * np.pi * q / n + theta))[:, None, None] * A[k][None]
        for k, theta in enumerate(CIRCULANT_ROTATIONS)
    ])
    e1 = np.zeros(T, dtype=complex)
    e1[0] = 1
    return Codebook("circulant", U), RelaySystem(A, T, e1)


def circulant_group_partitions() -> list:
    """Four-way splits of the circulant design's real variables that decouple the metric."""
    return find_group_partitions(circulant_design().weights, 4)
