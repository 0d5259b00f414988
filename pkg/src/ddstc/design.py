"""Rate-one linear designs for 2**lam relays (ABBA iterations + doubling).

A design in ``n`` complex variables is stored by its real weight matrices.
Real variable ``2k`` is the in-phase part of ``x_{k+1}`` and ``2k + 1`` its
quadrature part, so ``S(s) = scale * sum_i s_i B_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_LAMBDA = 6
_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class LinearDesign:
    weights: np.ndarray  # (K, T, T) complex
    scale: float = 1.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex)
        if w.ndim != 3 or w.shape[1] != w.shape[2]:
            raise ValueError(f"weights must have shape (K, T, T), got {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def T(self) -> int:
        return self.weights.shape[1]

    @property
    def K(self) -> int:
        return self.weights.shape[0]

    @property
    def n_complex(self) -> int:
        return self.K // 2

    @classmethod
    def from_complex_parts(cls, direct, conjugate, scale: float = 1.0) -> "LinearDesign":
        """Build from ``D(x) = sum_k P_k x_k + C_k conj(x_k)``."""
        P = np.asarray(direct, dtype=complex)
        C = np.asarray(conjugate, dtype=complex)
        w = np.empty((2 * P.shape[0],) + P.shape[1:], dtype=complex)
        w[0::2] = P + C
        w[1::2] = 1j * (P - C)
        return cls(w, scale)

    def complex_parts(self) -> tuple[np.ndarray, np.ndarray]:
        BI, BQ = self.weights[0::2], self.weights[1::2]
        return (BI - 1j * BQ) / 2, (BI + 1j * BQ) / 2

    def evaluate(self, s) -> np.ndarray:
        """Evaluate at real variables ``s`` (shape ``(..., K)``)."""
        s = np.asarray(s, dtype=float)
        return self.scale * np.tensordot(s, self.weights, axes=([-1], [0]))

    def evaluate_complex(self, x) -> np.ndarray:
        """Evaluate at complex variables ``x`` (shape ``(..., K/2)``)."""
        return self.evaluate(complex_to_real(x))

    def token_grid(self) -> list[list[str]]:
        """Symbolic entries such as ``x3``, ``-x5*`` or ``0`` (scale omitted)."""
        P, C = self.complex_parts()
        grid = []
        for r in range(self.T):
            row = []
            for c in range(self.T):
                tokens = []
                for k in range(self.n_complex):
                    for coeff, star in ((P[k, r, c], ""), (C[k, r, c], "*")):
                        if abs(coeff) < _ATOL:
                            continue
                        if abs(coeff - 1) < _ATOL:
                            sign = ""
                        elif abs(coeff + 1) < _ATOL:
                            sign = "-"
                        else:
                            raise ValueError(f"entry ({r}, {c}) has non-unit coefficient {coeff}")
                        tokens.append(f"{sign}x{k + 1}{star}")
                if len(tokens) > 1:
                    raise ValueError(f"entry ({r}, {c}) mixes several variables")
                row.append(tokens[0] if tokens else "0")
            grid.append(row)
        return grid

    def format_grid(self) -> str:
        grid = self.token_grid()
        width = max(len(t) for row in grid for t in row)
        lines = [" ".join(t.rjust(width) for t in row) for row in grid]
        return f"scale = {self.scale:.10g}\n" + "\n".join(lines)


def complex_to_real(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    s = np.empty(x.shape[:-1] + (2 * x.shape[-1],))
    s[..., 0::2] = x.real
    s[..., 1::2] = x.imag
    return s


def single_variable() -> LinearDesign:
    """The 1x1 design [x1]."""
    return LinearDesign.from_complex_parts([[[1]]], [[[0]]])


def abba(D: LinearDesign) -> LinearDesign:
    """[[A, B], [B, A]] with B a copy of A in fresh variables appended after A's."""
    P, C = D.complex_parts()
    eye = np.eye(2)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    Pn = np.concatenate([np.kron(eye, P), np.kron(swap, P)])
    Cn = np.concatenate([np.kron(eye, C), np.kron(swap, C)])
    return LinearDesign.from_complex_parts(Pn, Cn, D.scale)


def doubling(D: LinearDesign) -> LinearDesign:
    """[[A, -B^H], [B, A^H]] with B a copy of A in fresh variables."""
    P, C = D.complex_parts()
    L, n, _ = P.shape
    Z = np.zeros((L, n, n), dtype=complex)
    PH = np.conj(np.swapaxes(P, 1, 2))
    CH = np.conj(np.swapaxes(C, 1, 2))

    def block(tl, tr, bl, br):
        return np.concatenate(
            [np.concatenate([tl, tr], axis=2), np.concatenate([bl, br], axis=2)], axis=1
        )

    # A^H(x) = sum_k CH_k x_k + PH_k conj(x_k)
    Pn = np.concatenate([block(P, Z, Z, CH), block(Z, -CH, P, Z)])
    Cn = np.concatenate([block(C, Z, Z, PH), block(Z, -PH, C, Z)])
    return LinearDesign.from_complex_parts(Pn, Cn, D.scale)


@dataclass(frozen=True)
class GroupPartition:
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = sorted(i for g in self.groups for i in g)
        if flat != list(range(len(flat))):
            raise ValueError("groups must be disjoint and cover 0..K-1")

    @property
    def K(self) -> int:
        return sum(len(g) for g in self.groups)

    def group_of(self) -> np.ndarray:
        out = np.empty(self.K, dtype=int)
        for k, g in enumerate(self.groups):
            out[list(g)] = k
        return out


def canonical_partition(n_complex: int) -> GroupPartition:
    """In-phase / quadrature parts of the first and second halves of the variables."""
    L = n_complex // 2
    first, second = range(L), range(L, 2 * L)
    return GroupPartition((
        tuple(2 * k for k in first),
        tuple(2 * k + 1 for k in first),
        tuple(2 * k for k in second),
        tuple(2 * k + 1 for k in second),
    ))


def build_design(lam: int, max_lambda: int = MAX_LAMBDA) -> tuple[LinearDesign, GroupPartition]:
    if not isinstance(lam, (int, np.integer)) or lam < 1:
        raise ValueError(f"lambda must be a positive integer, got {lam!r}")
    if lam > max_lambda:
        raise ValueError(f"lambda={lam} exceeds the configured limit {max_lambda}")
    D = single_variable()
    for _ in range(lam - 1):
        D = abba(D)
    D = doubling(D)
    R = 2 ** lam
    P, C = D.complex_parts()
    D = LinearDesign.from_complex_parts(P, C, scale=1 / np.sqrt(R))
    return D, canonical_partition(D.n_complex)


def weight_matrices(D: LinearDesign) -> np.ndarray:
    """``B_i = S(e_i) / scale``."""
    eye = np.eye(D.K)
    return np.array([D.evaluate(e) / D.scale for e in eye])


@dataclass(frozen=True)
class GroupCheck:
    ok: bool
    max_violation: float
    worst_pair: tuple[int, int] | None


def verify_group_decodable(weights, partition: GroupPartition, atol: float = 1e-12) -> GroupCheck:
    """Check B_i^H B_j + B_j^H B_i = 0 for all i, j in different groups."""
    B = np.asarray(weights, dtype=complex)
    BH = np.conj(np.swapaxes(B, 1, 2))
    gram = np.einsum("iab,jbc->ijac", BH, B)
    sym = gram + np.swapaxes(gram, 0, 1)
    viol = np.abs(sym).max(axis=(2, 3))
    g = partition.group_of()
    viol = np.where(g[:, None] != g[None, :], viol, 0.0)
    worst = np.unravel_index(np.argmax(viol), viol.shape)
    maxv = float(viol[worst])
    return GroupCheck(maxv < atol, maxv, (int(worst[0]), int(worst[1])) if maxv >= atol else None)


def find_group_partitions(weights, g: int, atol: float = 1e-12, limit: int | None = None):
    """Exhaustively list partitions of the K variables into g equal groups that
    satisfy the pairwise orthogonality condition.  Feasible only for small K."""
    B = np.asarray(weights, dtype=complex)
    K = B.shape[0]
    if K % g:
        return []
    size = K // g
    BH = np.conj(np.swapaxes(B, 1, 2))
    gram = np.einsum("iab,jbc->ijac", BH, B)
    orth = np.abs(gram + np.swapaxes(gram, 0, 1)).max(axis=(2, 3)) < atol
    found: list[GroupPartition] = []

    def extend(groups, remaining):
        if limit is not None and len(found) >= limit:
            return
        if not remaining:
            found.append(GroupPartition(tuple(tuple(x) for x in groups)))
            return
        first, rest = remaining[0], remaining[1:]
        fill(groups, [first], rest, size - 1)

    def fill(groups, current, pool, need):
        if need == 0:
            others = [i for i in pool]
            members = [j for grp in groups for j in grp]
            if all(orth[i, j] for i in current for j in others) and all(
                orth[i, j] for i in current for j in members
            ):
                extend(groups + [current], others)
            return
        for idx, cand in enumerate(pool):
            if cand < current[-1]:
                continue
            fill(groups, current + [cand], pool[:idx] + pool[idx + 1:], need - 1)

    extend([], list(range(K)))
    return found
