"""Extended Clifford algebra A_2^L and its left regular representation.

The algebra is generated over the reals by ``g1, g2`` (squares -1, mutually
anti-commuting) and ``d1..da`` (squares +1, central).  A real basis element
is a pair ``(clifford, delta)``: ``clifford`` is a 2-bit code (bit 0 = g1,
bit 1 = g2, so 0 -> 1, 1 -> g1, 2 -> g2, 3 -> g1 g2) and ``delta`` is an
a-bit mask selecting a product of distinct deltas.  Products are stored in
canonical order g1 g2 d_i1 d_i2 ... with ascending delta indices.

Viewed as a complex vector space (g1 playing the role of i, scalars acting
on the right) the algebra has the ordered basis::

    d_0, d_1, ..., d_{L-1}, g2 d_0, g2 d_1, ..., g2 d_{L-1}

where ``d_m`` is the delta product for mask ``m`` in binary-counter order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

G1 = 1
G2 = 2
MAX_DELTAS = 8


class BasisElement(NamedTuple):
    clifford: int
    delta: int

    def __str__(self) -> str:
        parts = []
        if self.clifford & G1:
            parts.append("g1")
        if self.clifford & G2:
            parts.append("g2")
        bit = 0
        mask = self.delta
        while mask:
            if mask & 1:
                parts.append(f"d{bit + 1}")
            mask >>= 1
            bit += 1
        return "*".join(parts) if parts else "1"


ONE = BasisElement(0, 0)


def basis_mul(b1: BasisElement, b2: BasisElement) -> tuple[int, BasisElement]:
    """Multiply two basis elements, returning ``(sign, basis element)``."""
    c1, c2 = b1.clifford, b2.clifford
    sign = 1
    # moving g1 of the right factor past g2 of the left factor
    if (c1 & G2) and (c2 & G1):
        sign = -sign
    # g_k g_k = -1
    if bin(c1 & c2).count("1") % 2:
        sign = -sign
    return sign, BasisElement(c1 ^ c2, b1.delta ^ b2.delta)


def _check_a(a: int) -> None:
    if not 0 <= a <= MAX_DELTAS:
        raise ValueError(f"number of delta generators must be in [0, {MAX_DELTAS}], got {a}")


def dimension(a: int) -> int:
    """Real dimension 4 * 2**a."""
    return 4 << a


def basis_index(b: BasisElement, a: int) -> int:
    return b.clifford * (1 << a) + b.delta


def real_basis(a: int) -> list[BasisElement]:
    L = 1 << a
    return [BasisElement(c, d) for c in range(4) for d in range(L)]


def complex_basis(a: int) -> list[BasisElement]:
    """Ordered C-basis: all delta masks, then g2 times the same masks."""
    L = 1 << a
    return [BasisElement(0, d) for d in range(L)] + [BasisElement(G2, d) for d in range(L)]


@lru_cache(maxsize=None)
def _structure(a: int) -> tuple[np.ndarray, np.ndarray]:
    """Multiplication table: ``sign[i, j]`` and ``index[i, j]`` for e_i e_j."""
    basis = real_basis(a)
    n = len(basis)
    sign = np.empty((n, n), dtype=np.int8)
    index = np.empty((n, n), dtype=np.intp)
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            s, b = basis_mul(bi, bj)
            sign[i, j] = s
            index[i, j] = basis_index(b, a)
    sign.setflags(write=False)
    index.setflags(write=False)
    return sign, index


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Dense real coefficient vector over the real basis of A_2^(2^a)."""

    a: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_a(self.a)
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (dimension(self.a),):
            raise ValueError(f"expected {dimension(self.a)} coefficients, got shape {c.shape}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, a: int) -> "AlgebraElement":
        return cls(a, np.zeros(dimension(a)))

    @classmethod
    def basis(cls, b: BasisElement, a: int, coeff: float = 1.0) -> "AlgebraElement":
        c = np.zeros(dimension(a))
        c[basis_index(b, a)] = coeff
        return cls(a, c)

    @classmethod
    def random(cls, a: int, rng: np.random.Generator) -> "AlgebraElement":
        return cls(a, rng.standard_normal(dimension(a)))

    @classmethod
    def from_complex(cls, a: int, z) -> "AlgebraElement":
        """Element ``sum_j b_j z_j`` for complex coordinates ``z`` on the C-basis."""
        z = np.asarray(z, dtype=complex)
        L = 1 << a
        if z.shape != (2 * L,):
            raise ValueError(f"expected {2 * L} complex coordinates, got shape {z.shape}")
        c = np.zeros(dimension(a))
        # d_m z = d_m (zI + g1 zQ)
        c[0 * L:1 * L] = z[:L].real
        c[1 * L:2 * L] = z[:L].imag
        # g2 d_m (zI + g1 zQ) = zI g2 d_m - zQ g1 g2 d_m
        c[2 * L:3 * L] = z[L:].real
        c[3 * L:4 * L] = -z[L:].imag
        return cls(a, c)

    def complex_coords(self) -> np.ndarray:
        """Coordinates on the ordered C-basis (inverse of :meth:`from_complex`)."""
        L = 1 << self.a
        c = self.coeffs
        return np.concatenate([c[:L] + 1j * c[L:2 * L], c[2 * L:3 * L] - 1j * c[3 * L:]])

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.a != self.a:
                raise ValueError("elements belong to different algebras")
            return other
        if np.isscalar(other) and np.isreal(other):
            return AlgebraElement.basis(ONE, self.a, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.a, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.a, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.a, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other) and np.isreal(other):
            return AlgebraElement(self.a, self.coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return elem_mul(self, other)

    def __rmul__(self, other):
        if np.isscalar(other) and np.isreal(other):
            return AlgebraElement(self.a, self.coeffs * float(other))
        return NotImplemented

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        return self.a == other.a and bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def __repr__(self) -> str:
        terms = [
            f"{v:+g}*{b}" for b, v in zip(real_basis(self.a), self.coeffs) if v != 0
        ]
        return f"AlgebraElement(a={self.a}, {' '.join(terms) or '0'})"


def elem_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.a != y.a:
        raise ValueError("elements belong to different algebras")
    sign, index = _structure(x.a)
    terms = np.outer(x.coeffs, y.coeffs) * sign
    out = np.bincount(index.ravel(), weights=terms.ravel(), minlength=dimension(x.a))
    return AlgebraElement(x.a, out)


def sigma(x: AlgebraElement) -> AlgebraElement:
    """Replace g1 by -g1: negate every coefficient whose basis element contains g1."""
    L = 1 << x.a
    c = x.coeffs.copy()
    c[1 * L:2 * L] *= -1
    c[3 * L:4 * L] *= -1
    return AlgebraElement(x.a, c)


def _to_complex_coords(coeffs: np.ndarray, a: int) -> np.ndarray:
    """Complex coordinates for a stack of real coefficient vectors (last axis)."""
    L = 1 << a
    c = coeffs
    return np.concatenate(
        [c[..., :L] + 1j * c[..., L:2 * L], c[..., 2 * L:3 * L] - 1j * c[..., 3 * L:]], axis=-1
    )


@lru_cache(maxsize=None)
def _rep_tensor(a: int) -> np.ndarray:
    """``rep[k]`` is the left regular representation of the k-th real basis element."""
    sign, index = _structure(a)
    n = dimension(a)
    cols = [basis_index(b, a) for b in complex_basis(a)]
    # product e_k * b_j as a real coefficient vector, for every k and C-basis column j
    prod = np.zeros((n, len(cols), n))
    for j, cj in enumerate(cols):
        prod[np.arange(n), j, index[:, cj]] = sign[:, cj]
    rep = np.swapaxes(_to_complex_coords(prod, a), 1, 2)
    rep.setflags(write=False)
    return rep


def left_regular_rep(x: AlgebraElement, basis: list[BasisElement] | None = None) -> np.ndarray:
    """Matrix of ``y -> x y`` on the ordered C-basis.

    Column ``j`` holds the complex coordinates of ``x * b_j``.  The map is a
    ring homomorphism and ``left_regular_rep(sigma(x)) == conj(left_regular_rep(x))``.
    """
    if basis is not None:
        if list(basis) != complex_basis(x.a):
            raise ValueError(
                f"basis does not match the algebra with a={x.a} (expected {2 << x.a} elements "
                "in canonical order)"
            )
    return np.tensordot(x.coeffs, _rep_tensor(x.a), axes=1)


def rep_of_basis(b: BasisElement, a: int) -> np.ndarray:
    return _rep_tensor(a)[basis_index(b, a)].copy()


def generic_element(a: int, z) -> AlgebraElement:
    """Generic element ``x_1 b_1 + ... + x_R b_R`` with complex ``x`` (alias of from_complex)."""
    return AlgebraElement.from_complex(a, z)


def center_family(a: int) -> list[BasisElement]:
    """Delta products (including 1) in binary-counter order; these are central."""
    return [BasisElement(0, d) for d in range(1 << a)]


def g2_family(a: int) -> list[BasisElement]:
    """g2 times each delta product; each ``g`` satisfies ``g sigma(x) = x g``."""
    return [BasisElement(G2, d) for d in range(1 << a)]


def g1g2_family(a: int) -> list[BasisElement]:
    return [BasisElement(G1 | G2, d) for d in range(1 << a)]
