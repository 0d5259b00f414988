"""Relay matrices, initial vector and compatibility checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .codebook import Codebook
from .design import LinearDesign

COMPAT_TOL = 1e-10
SAMPLE_ABOVE = 4096
SAMPLE_SIZE = 1000


@dataclass(frozen=True, eq=False)
class RelaySystem:
    relay_matrices: np.ndarray  # (R, T, T)
    M: int
    s0: np.ndarray

    def __post_init__(self):
        A = np.array(self.relay_matrices, dtype=complex)
        s0 = np.array(self.s0, dtype=complex)
        if A.ndim != 3 or A.shape[1] != A.shape[2] or s0.shape != (A.shape[1],):
            raise ValueError("relay matrices must be (R, T, T) with a length-T initial vector")
        if not 0 <= self.M <= A.shape[0]:
            raise ValueError(f"M={self.M} out of range for R={A.shape[0]}")
        A.setflags(write=False)
        s0.setflags(write=False)
        object.__setattr__(self, "relay_matrices", A)
        object.__setattr__(self, "s0", s0)

    @property
    def R(self) -> int:
        return self.relay_matrices.shape[0]

    @property
    def T(self) -> int:
        return self.relay_matrices.shape[1]

    def stack(self, s: np.ndarray) -> np.ndarray:
        """``[A_1 s ... A_M s, A_{M+1} s* ... A_R s*]`` for ``s`` of shape (T,) or (T, n).

        Returns shape (T, R) or (n, T, R).
        """
        s = np.asarray(s, dtype=complex)
        A = self.relay_matrices
        if s.ndim == 1:
            cols = [A[j] @ (s if j < self.M else np.conj(s)) for j in range(self.R)]
            return np.stack(cols, axis=1)
        cols = [A[j] @ (s if j < self.M else np.conj(s)) for j in range(self.R)]
        return np.stack(cols, axis=2).transpose(1, 0, 2)

    @property
    def X0(self) -> np.ndarray:
        return self.stack(self.s0)


def build_relays(lam: int) -> RelaySystem:
    """Relays from the left regular representation of A_2^(2^(lam-1)).

    The first ``M = R/2`` matrices represent the central delta products, the
    rest represent ``g2`` times the same products (binary-counter order).
    """
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    a = lam - 1
    fam = algebra.center_family(a) + algebra.g2_family(a)
    A = np.stack([algebra.rep_of_basis(b, a) for b in fam])
    s0 = np.zeros(A.shape[1], dtype=complex)
    s0[0] = 1
    return RelaySystem(A, 1 << a, s0)


def alternate_relay_family(lam: int) -> np.ndarray:
    """``g1 g2`` times the delta products: another family satisfying the conjugate condition."""
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    a = lam - 1
    return np.stack([algebra.rep_of_basis(b, a) for b in algebra.g1g2_family(a)])


@dataclass
class CompatibilityReport:
    ok: bool
    max_violation: float
    worst: tuple[int, int] | None
    codewords_checked: int
    sampled: bool = False
    unitary_violation: float = 0.0
    violations: list = field(default_factory=list)


def unitarity_violation(A: np.ndarray) -> float:
    A = np.asarray(A)
    eye = np.eye(A.shape[-1])
    return float(np.abs(np.conj(np.swapaxes(A, -1, -2)) @ A - eye).max())


def verify_compatibility(RS: RelaySystem, C: Codebook, tol: float = COMPAT_TOL,
                         rng: np.random.Generator | None = None) -> CompatibilityReport:
    """``A_i U = U A_i`` for i <= M and ``A_i conj(U) = U A_i`` otherwise."""
    if C.Q and C.T != RS.T:
        raise ValueError(f"codebook T={C.T} does not match relay T={RS.T}")
    U = C.matrices
    idx = np.arange(C.Q)
    sampled = False
    if C.Q > SAMPLE_ABOVE:
        rng = rng if rng is not None else np.random.default_rng(0)
        idx = np.sort(rng.choice(C.Q, SAMPLE_SIZE, replace=False))
        U = U[idx]
        sampled = True
    worst_val, worst = 0.0, None
    for j, A in enumerate(RS.relay_matrices):
        left = A @ (U if j < RS.M else np.conj(U))
        v = np.abs(left - U @ A).max(axis=(1, 2)) if U.size else np.zeros(0)
        if v.size and v.max() > worst_val:
            k = int(np.argmax(v))
            worst_val, worst = float(v[k]), (j, int(idx[k]))
    uv = unitarity_violation(RS.relay_matrices) if RS.R else 0.0
    ok = worst_val < tol and uv < 1e-12
    return CompatibilityReport(ok, worst_val, worst if worst_val >= tol else None,
                               int(idx.size), sampled, uv)


def reconstruct_design(RS: RelaySystem) -> LinearDesign:
    """The linear design ``X(s)`` in the complex entries of ``s``."""
    T = RS.T
    P = np.zeros((T, T, RS.R), dtype=complex)
    C = np.zeros((T, T, RS.R), dtype=complex)
    for j, A in enumerate(RS.relay_matrices):
        # column j is A_j s (or A_j conj(s)); coefficient of s_k is A_j[:, k]
        target = P if j < RS.M else C
        target[:, :, j] = A.T
    return LinearDesign.from_complex_parts(P, C)


def is_signed_permutation(A: np.ndarray, tol: float = 0.0) -> bool:
    A = np.asarray(A)
    mag = np.abs(A)
    ones = np.abs(mag - 1) <= tol
    zeros = mag <= tol
    if not np.all(ones | zeros):
        return False
    if not (np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1)):
        return False
    vals = A[ones]
    return bool(np.all(np.abs(vals.imag) <= tol))


def to_csv_rows(RS: RelaySystem) -> list[str]:
    rows = ["relay,row,col,re,im"]
    for j, A in enumerate(RS.relay_matrices):
        for r in range(RS.T):
            for c in range(RS.T):
                z = A[r, c]
                rows.append(f"{j + 1},{r + 1},{c + 1},{z.real:.10g},{z.imag:.10g}")
    return rows
