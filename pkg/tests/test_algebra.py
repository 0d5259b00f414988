import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddstc import algebra
from ddstc.algebra import (
    G1, G2, ONE, AlgebraElement, BasisElement, basis_mul, elem_mul, left_regular_rep, sigma,
)

g1 = BasisElement(G1, 0)
g2 = BasisElement(G2, 0)
g1g2 = BasisElement(G1 | G2, 0)
d1 = BasisElement(0, 1)


def el(b, a=1, c=1.0):
    return AlgebraElement.basis(b, a, c)


def test_basis_mul_examples():
    assert basis_mul(g1, g1) == (-1, ONE)
    assert basis_mul(d1, d1) == (1, ONE)
    assert basis_mul(g2, g1) == (-1, g1g2)
    assert basis_mul(g1, g2) == (1, g1g2)
    assert basis_mul(g1g2, g1g2) == (-1, ONE)


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_basis_count_and_closure(a):
    basis = algebra.real_basis(a)
    assert len(set(basis)) == 4 * 2 ** a == algebra.dimension(a)
    for b1, b2 in itertools.product(basis, repeat=2):
        s, b = basis_mul(b1, b2)
        assert s in (1, -1) and b in basis


def test_elem_mul_examples():
    one = el(ONE)
    x = (one + el(g1)) * (one - el(g1))
    assert x.allclose(2 * one)
    assert elem_mul(el(d1), el(g2)).allclose(el(BasisElement(G2, 1)))


@pytest.mark.parametrize("a", [0, 1, 2])
def test_associativity_exhaustive(a):
    basis = algebra.real_basis(a)
    for b1, b2, b3 in itertools.product(basis, repeat=3):
        s12, b12 = basis_mul(b1, b2)
        s23, b23 = basis_mul(b2, b3)
        sl, bl = basis_mul(b12, b3)
        sr, br = basis_mul(b1, b23)
        assert (s12 * sl, bl) == (s23 * sr, br)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2 ** 32 - 1))
def test_associativity_random(a, seed):
    r = np.random.default_rng(seed)
    x, y, z = (AlgebraElement.random(a, r) for _ in range(3))
    assert ((x * y) * z).allclose(x * (y * z), atol=1e-10)


def test_sigma_examples():
    assert sigma(el(g1)).allclose(-el(g1))
    assert sigma(el(d1)).allclose(el(d1))
    g1g2d1 = BasisElement(G1 | G2, 1)
    assert sigma(el(g1g2d1)).allclose(-el(g1g2d1))


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_sigma_involution(a, rng):
    x = AlgebraElement.random(a, rng)
    assert sigma(sigma(x)).allclose(x, atol=0)


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_complex_basis_order(a):
    cb = algebra.complex_basis(a)
    assert len(cb) == 2 ** (a + 1)
    assert cb[0] == ONE
    assert cb[1 << a] == g2


def test_rep_of_one_is_identity():
    for a in range(4):
        assert np.array_equal(left_regular_rep(AlgebraElement.basis(ONE, a)), np.eye(2 << a))


def test_rep_rejects_mismatched_basis():
    x = AlgebraElement.basis(ONE, 1)
    with pytest.raises(ValueError):
        left_regular_rep(x, algebra.complex_basis(2))


def test_rep_of_generic_element_a1():
    # x1 + x2 d1 + x3 g2 + x4 g2 d1 with complex x_k = x_kI + g1 x_kQ
    z = np.array([1 + 2j, 3 - 1j, -0.5 + 0.25j, 2j])
    x1, x2, x3, x4 = z
    c = np.conj
    expected = np.array([
        [x1, x2, -c(x3), -c(x4)],
        [x2, x1, -c(x4), -c(x3)],
        [x3, x4, c(x1), c(x2)],
        [x4, x3, c(x2), c(x1)],
    ])
    assert np.allclose(left_regular_rep(algebra.generic_element(1, z)), expected, atol=1e-14)


@pytest.mark.parametrize("a", [1, 2, 3])
def test_homomorphism(a, rng):
    worst = 0.0
    for _ in range(200):
        x, y = AlgebraElement.random(a, rng), AlgebraElement.random(a, rng)
        d = left_regular_rep(x * y) - left_regular_rep(x) @ left_regular_rep(y)
        worst = max(worst, np.abs(d).max())
    assert worst < 1e-12


@pytest.mark.parametrize("a", [1, 2, 3])
def test_conjugation_and_families(a, rng):
    center = [algebra.rep_of_basis(b, a) for b in algebra.center_family(a)]
    anti = [algebra.rep_of_basis(b, a) for b in algebra.g2_family(a)]
    for _ in range(100):
        X = left_regular_rep(x := AlgebraElement.random(a, rng))
        assert np.abs(left_regular_rep(sigma(x)) - np.conj(X)).max() < 1e-12
        for D in center:
            assert np.abs(D @ X - X @ D).max() < 1e-12
        for G in anti:
            assert np.abs(G @ np.conj(X) - X @ G).max() < 1e-12


def test_g1g2_family_is_not_anticommuting(rng):
    # g1 g2 sigma(g2) = -g1 while g2 g1 g2 = g1
    X = left_regular_rep(AlgebraElement.random(1, rng))
    A = algebra.rep_of_basis(BasisElement(G1 | G2, 0), 1)
    assert np.abs(A @ np.conj(X) - X @ A).max() > 1e-3
