"""Smith normal form over Z and the homology it computes."""
from dataclasses import dataclass, field

import numpy as np

from .. import _matrix as mx
from ..errors import BoundarySquareNonzero, NotASubcomplex
from . import _backend

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^rank + Z/d1 + ... + Z/dk`` with d1 | d2 | ..."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} break the divisibility chain")

    @classmethod
    def from_factors(cls, rank, factors):
        return cls(rank, tuple(sorted(abs(d) for d in factors if abs(d) > 1)))

    @property
    def is_zero(self):
        return self.rank == 0 and not self.torsion

    @property
    def is_free(self):
        return not self.torsion

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        if self.rank == 1:
            parts.append("ℤ")
        elif self.rank > 1:
            parts.append("ℤ" + str(self.rank).translate(_SUPERSCRIPT))
        parts.extend(f"ℤ/{d}" for d in self.torsion)
        return " ⊕ ".join(parts)

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["rank"]), tuple(data.get("torsion", ())))


ZERO = AbelianGroup()


def format_groups(groups):
    """``(ℤ, 0, ℤ)`` style rendering, trailing zero groups dropped."""
    groups = list(groups)
    while len(groups) > 1 and groups[-1].is_zero:
        groups.pop()
    return "(" + ", ".join(str(g) for g in groups) + ")"


@dataclass(frozen=True)
class SnfResult:
    """``U @ M @ V == S`` with ``S`` diagonal and d1 | d2 | ... positive."""

    U: object
    S: object
    V: object
    Uinv: object = field(default=None, repr=False, compare=False)

    @property
    def diagonal(self):
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def invariants(self):
        return [d for d in self.diagonal if d != 0]

    @property
    def rank(self):
        return len(self.invariants)


def _rows(M):
    M = mx.as_matrix(M)
    return M, [[int(v) for v in row] for row in M.tolist()] if M.shape[1] else [[] for _ in range(M.shape[0])]


def smith_normal_form(M):
    M, rows = _rows(M)
    m, n = M.shape
    diag, U, Ui, V = _backend.snf(rows, m, n, True)
    S = mx.zeros(m, n)
    for i, d in enumerate(diag):
        S[i, i] = d
    return SnfResult(mx.from_rows(U, m), S, mx.from_rows(V, n), mx.from_rows(Ui, m))


def invariant_factors(M):
    """Nonzero diagonal of the Smith form, without tracking transforms."""
    M, rows = _rows(M)
    diag, _, _, _ = _backend.snf(rows, M.shape[0], M.shape[1], False)
    return [d for d in diag if d]


def matrix_rank(M):
    return len(invariant_factors(M))


def kernel_basis(M):
    """Columns form a primitive Z-basis of ``ker M``."""
    M, rows = _rows(M)
    m, n = M.shape
    vecs = _backend.kernel(rows, m, n)
    out = mx.zeros(n, len(vecs))
    for j, v in enumerate(vecs):
        for i, x in enumerate(v):
            out[i, j] = int(x)
    return out


def determinant(M):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = mx.as_matrix(M)
    n = M.shape[0]
    if M.shape[1] != n:
        raise ValueError("determinant of a non-square matrix")
    a = [[int(v) for v in row] for row in M.tolist()]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def is_unimodular(M):
    M = mx.as_matrix(M)
    return M.shape[0] == M.shape[1] and abs(determinant(M)) == 1


class LatticeCoordinates:
    """Solve ``B @ x == v`` exactly for a full-column-rank integer basis ``B``."""

    def __init__(self, basis):
        self.basis = mx.as_matrix(basis)
        n, r = self.basis.shape
        snf = smith_normal_form(self.basis)
        if snf.rank != r:
            raise ValueError("lattice basis is not linearly independent")
        self._U = snf.U
        self._V = snf.V
        self._diag = snf.diagonal

    @property
    def dim(self):
        return self.basis.shape[1]

    def coordinates(self, v):
        """Coordinates of ``v`` (a column or an ``n x c`` matrix); ``ValueError`` if outside."""
        if not hasattr(v, "ndim"):
            v = np.array(v, dtype=object)
        if v.ndim == 1:
            v = mx.as_matrix([[x] for x in v]) if len(v) else mx.zeros(0, 1)
        v = mx.as_matrix(v, (self.basis.shape[0], 1))
        r = self.dim
        w = mx.matmul(self._U, v)
        y = mx.zeros(r, v.shape[1])
        for i in range(w.shape[0]):
            for c in range(v.shape[1]):
                val = w[i, c]
                if i < r:
                    q, rem = divmod(val, self._diag[i])
                    if rem:
                        raise ValueError("vector is not in the lattice")
                    y[i, c] = q
                elif val:
                    raise ValueError("vector is not in the span")
        return mx.matmul(self._V, y)

    def contains(self, v):
        try:
            self.coordinates(v)
        except ValueError:
            return False
        return True


@dataclass
class ChainComplex:
    """Free chain complex: ``sizes[d]`` generators in degree d, ``boundaries[d]: C_d -> C_{d-1}``."""

    sizes: tuple
    boundaries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.sizes = tuple(int(s) for s in self.sizes)
        full = {}
        for d in range(1, len(self.sizes)):
            mat = self.boundaries.get(d)
            shape = (self.sizes[d - 1], self.sizes[d])
            mat = mx.zeros(*shape) if mat is None else mx.as_matrix(mat, shape)
            if mat.shape != shape:
                raise ValueError(f"boundary {d} has shape {mat.shape}, expected {shape}")
            full[d] = mat
        self.boundaries = full

    @property
    def top(self):
        return len(self.sizes) - 1

    def boundary(self, d):
        """``C_d -> C_{d-1}``, zero matrix outside the stored range."""
        if 1 <= d <= self.top:
            return self.boundaries[d]
        rows = self.sizes[d - 1] if 0 <= d - 1 <= self.top else 0
        cols = self.sizes[d] if 0 <= d <= self.top else 0
        return mx.zeros(rows, cols)

    def size(self, d):
        return self.sizes[d] if 0 <= d <= self.top else 0

    def check(self):
        for d in range(2, self.top + 1):
            if not mx.is_zero(mx.matmul(self.boundaries[d - 1], self.boundaries[d])):
                raise BoundarySquareNonzero(f"degree {d}")
        return self

    @classmethod
    def from_matrices(cls, mats, sizes=None):
        """From ``[d_1, d_2, ...]``; sizes are read off the matrix shapes."""
        mats = [mx.as_matrix(m) for m in mats]
        if sizes is None:
            if not mats:
                raise ValueError("sizes are required for an empty boundary list")
            sizes = [mats[0].shape[0]] + [m.shape[1] for m in mats]
        return cls(tuple(sizes), {d + 1: m for d, m in enumerate(mats)})


def _as_chain_complex(C):
    if isinstance(C, ChainComplex):
        return C
    if hasattr(C, "chain_complex"):
        return C.chain_complex()
    return ChainComplex.from_matrices(C)


def homology(C, top=None):
    """``[H_0, ..., H_top]`` of a chain complex (or anything with ``chain_complex()``)."""
    C = _as_chain_complex(C).check()
    top = C.top if top is None else top
    ranks = {}
    factors = {}
    for d in range(1, C.top + 1):
        inv = invariant_factors(C.boundaries[d])
        ranks[d] = len(inv)
        factors[d] = inv
    groups = []
    for d in range(top + 1):
        cycles = C.size(d) - ranks.get(d, 0)
        bnd = ranks.get(d + 1, 0)
        groups.append(AbelianGroup.from_factors(cycles - bnd, factors.get(d + 1, [])))
    return groups


class HomologyBasis:
    """Explicit generators of ``H_d`` and a coordinate map for cycles."""

    def __init__(self, C, d):
        C = _as_chain_complex(C)
        n = C.size(d)
        self.degree = d
        self.cycles = kernel_basis(C.boundary(d)) if n else mx.zeros(0, 0)
        z = self.cycles.shape[1]
        self._zcoords = LatticeCoordinates(self.cycles) if z else None
        incoming = C.boundary(d + 1)
        if z and incoming.shape[1]:
            bz = self._zcoords.coordinates(incoming)
        else:
            bz = mx.zeros(z, incoming.shape[1])
        snf = smith_normal_form(bz)
        diag = snf.diagonal
        self._U = snf.U
        self._r = len([x for x in diag if x])
        self._diag = diag[: self._r]
        self.group = AbelianGroup.from_factors(z - self._r, self._diag)
        gens = mx.matmul(self.cycles, snf.Uinv) if z else mx.zeros(n, 0)
        self.free_generators = gens[:, self._r:]
        self._torsion_idx = [i for i, x in enumerate(self._diag) if x > 1]
        self.torsion_generators = gens[:, self._torsion_idx]

    def coordinates(self, chains):
        """Free coordinates (a ``rank x c`` matrix) of the classes of cycle columns."""
        chains = mx.as_matrix(chains)
        if self._zcoords is None:
            return mx.zeros(0, chains.shape[1])
        x = self._zcoords.coordinates(chains)
        y = mx.matmul(self._U, x)
        return y[self._r:, :]

    def torsion_coordinates(self, chains):
        chains = mx.as_matrix(chains)
        if self._zcoords is None or not self._torsion_idx:
            return mx.zeros(0, chains.shape[1])
        y = mx.matmul(self._U, self._zcoords.coordinates(chains))
        out = mx.zeros(len(self._torsion_idx), chains.shape[1])
        for k, i in enumerate(self._torsion_idx):
            for c in range(chains.shape[1]):
                out[k, c] = y[i, c] % self._diag[i]
        return out


def homology_basis(C, d):
    return HomologyBasis(C, d)


def relative_homology(K, A):
    """Homology of ``C(K) / C(A)`` for a subcomplex ``A`` of ``K``."""
    check_subcomplex(K, A)
    keep = {d: [i for i, c in enumerate(K.cells(d)) if not A.has_cell(c)] for d in range(K.dim + 1)}
    sizes = [len(keep[d]) for d in range(K.dim + 1)]
    mats = {d: K.boundary(d)[keep[d - 1], :][:, keep[d]] for d in range(1, K.dim + 1)}
    return homology(ChainComplex(tuple(sizes), mats)) if sizes else []


def check_subcomplex(K, A):
    for d in range(A.dim + 1):
        for c in A.cells(d):
            if K.cell_dim(c) != d:
                raise NotASubcomplex(f"cell {c!r} of dimension {d} is not a {d}-cell of the ambient complex")
        if d == 0:
            continue
        for c in A.cells(d):
            if K.boundary_of(c) != A.boundary_of(c):
                raise NotASubcomplex(f"boundary of {c!r} differs from the ambient complex")
