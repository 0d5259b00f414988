import numpy as np
import pytest

from ddstc.codebook import Codebook
from ddstc.design import build_design
from ddstc.harness import build_code
from ddstc.relays import (
    RelaySystem, alternate_relay_family, build_relays, is_signed_permutation, reconstruct_design,
    to_csv_rows, unitarity_violation, verify_compatibility,
)
from reference import RELAYS_4


def random_unitary(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_four_relay_matrices():
    RS = build_relays(2)
    assert RS.M == 2
    assert np.array_equal(RS.relay_matrices, RELAYS_4)


def test_two_relay_matrices():
    RS = build_relays(1)
    assert np.array_equal(RS.relay_matrices, [np.eye(2), [[0, -1], [1, 0]]])


@pytest.mark.parametrize("lam", [1, 2, 3, 4, 5])
def test_structure(lam):
    RS = build_relays(lam)
    assert RS.R == RS.T == 2 ** lam and RS.M == RS.R // 2
    assert unitarity_violation(RS.relay_matrices) < 1e-12
    assert all(is_signed_permutation(A) for A in RS.relay_matrices)
    assert np.linalg.norm(RS.s0) == 1
    assert np.array_equal(RS.X0, np.eye(RS.T))


@pytest.mark.parametrize("lam,rate", [(1, 2.0), (2, 1.0), (2, 1.5), (3, 0.5)])
def test_compatibility_with_codebook(lam, rate):
    C, RS = build_code("proposed", lam, rate)
    rep = verify_compatibility(RS, C)
    assert rep.ok and rep.max_violation < 1e-10
    assert rep.sampled == (C.Q > 4096)


def test_eight_relay_full_size_sampled():
    C, RS = build_code("proposed", 3, 1.0)
    assert C.Q == 65536
    rep = verify_compatibility(RS, C)
    assert rep.ok and rep.sampled and rep.codewords_checked == 1000


def test_random_unitary_breaks_compatibility(rng):
    C, RS = build_code("proposed", 2, 1.0)
    A = RS.relay_matrices.copy()
    A[1] = random_unitary(4, rng)
    rep = verify_compatibility(RelaySystem(A, RS.M, RS.s0), C)
    assert not rep.ok and rep.worst[0] == 1


def test_scalar_codebook_commutes_with_anything(rng):
    U = np.stack([z * np.eye(3) for z in np.exp(2j * np.pi * np.arange(5) / 5)])
    A = np.stack([random_unitary(3, rng) for _ in range(3)])
    rep = verify_compatibility(RelaySystem(A, 3, np.eye(3)[0]), Codebook("scalar", U))
    assert rep.ok


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_reconstruct_design(lam, rng):
    D, _ = build_design(lam)
    rec = reconstruct_design(build_relays(lam))
    assert np.array_equal(rec.weights, D.weights)
    for _ in range(100):
        x = rng.standard_normal(D.K)
        assert np.abs(rec.evaluate(x) * D.scale - D.evaluate(x)).max() < 1e-12


def test_alternate_family_basic():
    fam = alternate_relay_family(1)
    assert np.array_equal(fam[0], [[0, -1j], [-1j, 0]])
    for lam in (1, 2, 3):
        fam = alternate_relay_family(lam)
        assert len(fam) == 2 ** lam // 2
        assert unitarity_violation(fam) < 1e-12


@pytest.mark.xfail(strict=True, reason="g1 g2 sigma(x) = x g1 g2 fails already for x = g2")
def test_alternate_family_satisfies_conjugate_condition():
    C, _ = build_code("proposed", 1, 2.0)
    for A in alternate_relay_family(1):
        assert np.abs(A @ np.conj(C.matrices) - C.matrices @ A).max() < 1e-10


def test_csv_export():
    rows = to_csv_rows(build_relays(1))
    assert rows[0] == "relay,row,col,re,im"
    assert len(rows) == 1 + 2 * 4
    assert "2,1,2,-1,0" in rows


def test_invalid_relay_system():
    with pytest.raises(ValueError):
        RelaySystem(np.zeros((2, 3, 3)), 3, np.zeros(3))
    with pytest.raises(ValueError):
        RelaySystem(np.zeros((2, 3, 3)), 1, np.zeros(2))
    with pytest.raises(ValueError):
        build_relays(0)
