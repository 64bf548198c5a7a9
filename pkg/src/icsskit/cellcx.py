"""Finite cell complexes with integer boundary matrices.

A complex is a list of cell ids per dimension plus, for each d >= 1, an exact
integer matrix whose rows are the (d-1)-cells and whose columns are the
d-cells.  Cell ids are opaque strings, unique across all dimensions.

JSON form::

    {"cells": {"0": [ids], "1": [ids], ...},
     "boundary": {"1": [[cell, [[face, coeff], ...]], ...], ...},
     "labels": {cell: tag, ...}}
"""
import json
import os

from . import _matrix as mx
from .errors import (
    BoundarySquareNonzero,
    CellLimitExceeded,
    DanglingCellReference,
    IdentificationOfUnequalDimensions,
    MalformedInput,
    NotAChainMap,
    NotClosedUnderBoundary,
)
from .intlin import ChainComplex

SEP = "*"
DEFAULT_MAX_CELLS = 200_000


def max_cells():
    raw = os.environ.get("ICSSKIT_MAX_CELLS")
    if not raw:
        return DEFAULT_MAX_CELLS
    try:
        return int(raw)
    except ValueError:
        raise MalformedInput(f"ICSSKIT_MAX_CELLS must be an integer, got {raw!r}") from None


def check_cell_budget(count, what="complex"):
    limit = max_cells()
    if count > limit:
        raise CellLimitExceeded(f"{what} needs {count} cells, above ICSSKIT_MAX_CELLS={limit}")


class CellComplex:
    """Immutable finite cell complex; see the module docstring for the layout."""

    def __init__(self, cells_by_dim, boundary=None, labels=None, check=True):
        cells = [tuple(str(c) for c in level) for level in cells_by_dim]
        while cells and not cells[-1]:
            cells.pop()
        self._cells = tuple(cells)
        self._index = {}
        for d, level in enumerate(self._cells):
            for i, c in enumerate(level):
                if c in self._index:
                    raise MalformedInput(f"duplicate cell id {c!r}")
                self._index[c] = (d, i)
        boundary = boundary or {}
        self._boundary = {}
        for d in range(1, len(self._cells)):
            shape = (len(self._cells[d - 1]), len(self._cells[d]))
            mat = boundary.get(d)
            mat = mx.zeros(*shape) if mat is None else mx.as_matrix(mat, shape).copy()
            if mat.shape != shape:
                raise MalformedInput(f"boundary matrix {d} has shape {mat.shape}, expected {shape}")
            mat.flags.writeable = False
            self._boundary[d] = mat
        for d in boundary:
            if d >= len(self._cells) and not mx.is_zero(mx.as_matrix(boundary[d])):
                raise DanglingCellReference(f"boundary given in degree {d} but there are no {d}-cells")
        self.labels = dict(labels or {})
        for c in self.labels:
            if c not in self._index:
                raise DanglingCellReference(f"label for unknown cell {c!r}")
        if check:
            self.check()

    # structure -----------------------------------------------------------
    @property
    def dim(self):
        return len(self._cells) - 1

    def cells(self, d):
        return self._cells[d] if 0 <= d < len(self._cells) else ()

    def all_cells(self):
        for level in self._cells:
            yield from level

    @property
    def counts(self):
        return tuple(len(level) for level in self._cells)

    @property
    def n_cells(self):
        return len(self._index)

    def is_empty(self):
        return not self._index

    def has_cell(self, c):
        return c in self._index

    def cell_dim(self, c):
        try:
            return self._index[c][0]
        except KeyError:
            raise DanglingCellReference(f"unknown cell {c!r}") from None

    def index(self, c):
        return self._index[c][1]

    def boundary(self, d):
        if d in self._boundary:
            return self._boundary[d]
        return mx.zeros(len(self.cells(d - 1)), len(self.cells(d)))

    def boundary_of(self, c):
        """``{face: coeff}`` for the nonzero terms of the boundary of ``c``."""
        cache = self.__dict__.setdefault("_faces", {})
        if c not in cache:
            d, j = self._index[c]
            if d == 0:
                cache[c] = {}
            else:
                col = self._boundary[d][:, j]
                faces = self._cells[d - 1]
                cache[c] = {faces[i]: int(v) for i, v in enumerate(col) if v != 0}
        return dict(cache[c])

    def chain_complex(self):
        return ChainComplex(self.counts, dict(self._boundary))

    def euler_characteristic(self):
        return sum((-1) ** d * n for d, n in enumerate(self.counts))

    def check(self):
        for d in range(2, len(self._cells)):
            if not mx.is_zero(mx.matmul(self._boundary[d - 1], self._boundary[d])):
                raise BoundarySquareNonzero(f"degree {d}")
        return self

    def __eq__(self, other):
        if not isinstance(other, CellComplex):
            return NotImplemented
        return (
            self._cells == other._cells
            and all((self.boundary(d) == other.boundary(d)).all() for d in range(1, len(self._cells)))
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash(self._cells)

    def __repr__(self):
        return f"CellComplex(counts={self.counts})"

    # serialization -------------------------------------------------------
    def to_json(self):
        out = {"cells": {str(d): list(level) for d, level in enumerate(self._cells)}, "boundary": {}}
        for d in range(1, len(self._cells)):
            entries = []
            for c in self._cells[d]:
                faces = self.boundary_of(c)
                entries.append([c, [[f, coeff] for f, coeff in faces.items()]])
            out["boundary"][str(d)] = entries
        if self.labels:
            out["labels"] = dict(self.labels)
        return out


def from_faces(cells_by_dim, faces, labels=None, check=True):
    """Build from ``faces[cell] = {face: coeff}`` (coefficients accumulate)."""
    cells = [list(level) for level in cells_by_dim]
    index = {}
    for d, level in enumerate(cells):
        for i, c in enumerate(level):
            if c in index:
                raise MalformedInput(f"duplicate cell id {c!r}")
            index[c] = (d, i)
    mats = {d: mx.zeros(len(cells[d - 1]), len(cells[d])) for d in range(1, len(cells))}
    for c, terms in faces.items():
        if c not in index:
            raise DanglingCellReference(f"boundary given for unknown cell {c!r}")
        d, j = index[c]
        items = terms.items() if isinstance(terms, dict) else terms
        for face, coeff in items:
            if face not in index:
                raise DanglingCellReference(f"cell {c!r} references missing face {face!r}")
            fd, i = index[face]
            if fd != d - 1:
                raise DanglingCellReference(f"face {face!r} of {c!r} has dimension {fd}, expected {d - 1}")
            mats[d][i, j] += int(coeff)
    return CellComplex(cells, mats, labels, check=check)


def build_complex(spec):
    """Validated complex from the JSON-shaped dict ``spec``."""
    if not isinstance(spec, dict) or "cells" not in spec:
        raise MalformedInput("complex needs a 'cells' mapping")
    raw_cells = spec["cells"]
    try:
        dims = sorted(int(k) for k in raw_cells)
    except (TypeError, ValueError):
        raise MalformedInput("cell dimensions must be integer keys") from None
    if dims and dims[0] < 0:
        raise MalformedInput("negative cell dimension")
    top = dims[-1] if dims else -1
    cells = [[str(c) for c in raw_cells.get(str(d), raw_cells.get(d, []))] for d in range(top + 1)]
    cellsets = [set(level) for level in cells]
    faces = {}
    for key, entries in (spec.get("boundary") or {}).items():
        d = int(key)
        for entry in entries:
            try:
                cell, terms = entry
            except (TypeError, ValueError):
                raise MalformedInput(f"bad boundary entry {entry!r}") from None
            if not 1 <= d <= top or cell not in cellsets[d]:
                raise DanglingCellReference(f"boundary entry for {cell!r} which is not a {d}-cell")
            faces.setdefault(str(cell), []).extend((str(f), int(c)) for f, c in terms)
    return from_faces(cells, faces, spec.get("labels"))


def dumps(obj):
    """Canonical JSON text (sorted keys) of anything with ``to_json``."""
    data = obj.to_json() if hasattr(obj, "to_json") else obj
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def empty_complex():
    return CellComplex([])


def point(name="pt"):
    return CellComplex([[name]])


def interval(a="v0", b="v1", e="e"):
    """Interval with ``d e = b - a``."""
    return from_faces([[a, b], [e]], {e: {b: 1, a: -1}})


def relabel(K, rename):
    """Rename cells via ``rename(cell) -> new id``."""
    cells = [[rename(c) for c in K.cells(d)] for d in range(K.dim + 1)]
    labels = {rename(c): t for c, t in K.labels.items()}
    return CellComplex(cells, {d: K.boundary(d) for d in range(1, K.dim + 1)}, labels, check=False)


def disjoint_union(complexes):
    """Union of complexes with pairwise disjoint cell ids; order is per-dimension concatenation."""
    top = max((K.dim for K in complexes), default=-1)
    cells = [[c for K in complexes for c in K.cells(d)] for d in range(top + 1)]
    faces = {}
    labels = {}
    for K in complexes:
        for c in K.all_cells():
            if K.cell_dim(c):
                faces[c] = K.boundary_of(c)
        labels.update(K.labels)
    return from_faces(cells, faces, labels, check=False)


def product(K, L, sep=SEP):
    """Cartesian product with ``d(a x b) = da x b + (-1)^|a| a x db``."""
    check_cell_budget(K.n_cells * L.n_cells, "product")
    top = K.dim + L.dim if not (K.is_empty() or L.is_empty()) else -1
    cells = [[] for _ in range(top + 1)]
    for d in range(top + 1):
        for i in range(d + 1):
            for a in K.cells(i):
                for b in L.cells(d - i):
                    cells[d].append(f"{a}{sep}{b}")
    faces = {}
    for d in range(1, top + 1):
        for i in range(d + 1):
            for a in K.cells(i):
                da = K.boundary_of(a)
                for b in L.cells(d - i):
                    terms = {}
                    for fa, ca in da.items():
                        terms[f"{fa}{sep}{b}"] = ca
                    sign = -1 if i % 2 else 1
                    for fb, cb in L.boundary_of(b).items():
                        terms[f"{a}{sep}{fb}"] = sign * cb
                    faces[f"{a}{sep}{b}"] = terms
    return from_faces(cells, faces)


def closure(K, cells):
    """Smallest subcomplex containing ``cells``, as a set of ids."""
    out = set()
    stack = list(cells)
    while stack:
        c = stack.pop()
        if c in out:
            continue
        if not K.has_cell(c):
            raise DanglingCellReference(f"unknown cell {c!r}")
        out.add(c)
        stack.extend(K.boundary_of(c))
    return out


def subcomplex(K, cells):
    """Induced complex on a boundary-closed set of cell ids, in ``K``'s order."""
    keep = set(cells)
    for c in keep:
        if not K.has_cell(c):
            raise DanglingCellReference(f"unknown cell {c!r}")
        for f in K.boundary_of(c):
            if f not in keep:
                raise NotClosedUnderBoundary(f"face {f!r} of {c!r} is missing")
    levels = [[c for c in K.cells(d) if c in keep] for d in range(K.dim + 1)]
    idx = [[K.index(c) for c in level] for level in levels]
    mats = {d: K.boundary(d)[idx[d - 1], :][:, idx[d]] for d in range(1, len(levels))}
    labels = {c: t for c, t in K.labels.items() if c in keep}
    return CellComplex(levels, mats, labels, check=False)


def mapping_cylinder_quotient(K, identify):
    """Quotient of ``K`` identifying the listed pairs of 0-cells.

    Each class keeps its lexicographically smallest id; boundary coefficients
    onto merged cells add up.
    """
    parent = {}

    def find(c):
        while parent.get(c, c) != c:
            c = parent[c]
        return c

    for a, b in identify:
        for c in (a, b):
            if not K.has_cell(c):
                raise DanglingCellReference(f"identification references unknown cell {c!r}")
        if K.cell_dim(a) != K.cell_dim(b):
            raise IdentificationOfUnequalDimensions(
                f"{a!r} has dimension {K.cell_dim(a)}, {b!r} has dimension {K.cell_dim(b)}"
            )
        if K.cell_dim(a) != 0:
            raise IdentificationOfUnequalDimensions(f"only 0-cells can be identified, got {a!r} of dimension {K.cell_dim(a)}")
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            parent[hi] = lo
    if not parent:
        return K
    cells = [[c for c in K.cells(0) if find(c) == c]] + [list(K.cells(d)) for d in range(1, K.dim + 1)]
    faces = {}
    for c in K.cells(1):
        terms = {}
        for f, coeff in K.boundary_of(c).items():
            r = find(f)
            terms[r] = terms.get(r, 0) + coeff
        faces[c] = terms
    for d in range(2, K.dim + 1):
        for c in K.cells(d):
            faces[c] = K.boundary_of(c)
    labels = {c: t for c, t in K.labels.items() if find(c) == c or K.cell_dim(c) > 0}
    return from_faces(cells, faces, labels)


def quotient_representative(identify):
    """Map each identified 0-cell to the id kept by ``mapping_cylinder_quotient``."""
    parent = {}

    def find(c):
        while parent.get(c, c) != c:
            c = parent[c]
        return c

    for a, b in identify:
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            parent[hi] = lo
    return {c: find(c) for c in parent}


def cone(K, apex, cone_id):
    """Cone on ``K``: ``d(cone v) = v - apex`` and ``d(cone c) = c - cone(dc)``.

    Requires every 1-cell boundary to have coefficient sum zero, else the cone
    would not square to zero.
    """
    cells = [[apex] + list(K.cells(0))]
    for d in range(1, K.dim + 2):
        cells.append(list(K.cells(d)) + [cone_id(c) for c in K.cells(d - 1)])
    faces = {}
    for c in K.all_cells():
        d = K.cell_dim(c)
        if d:
            faces[c] = K.boundary_of(c)
        if d == 0:
            faces[cone_id(c)] = {c: 1, apex: -1}
        else:
            if d == 1 and sum(K.boundary_of(c).values()):
                raise MalformedInput(f"cannot cone 1-cell {c!r} whose boundary has nonzero augmentation")
            terms = {c: 1}
            for f, coeff in K.boundary_of(c).items():
                terms[cone_id(f)] = terms.get(cone_id(f), 0) - coeff
            faces[cone_id(c)] = terms
    return from_faces(cells, faces, K.labels)


class CellMap:
    """Cellular chain map ``source -> target``; ``matrices[d]`` is ``#target_d x #source_d``."""

    def __init__(self, source, target, matrices, check=True):
        self.source = source
        self.target = target
        top = max(source.dim, 0)
        self.matrices = {}
        for d in range(top + 1):
            shape = (len(target.cells(d)), len(source.cells(d)))
            mat = matrices.get(d)
            mat = mx.zeros(*shape) if mat is None else mx.as_matrix(mat, shape)
            if mat.shape != shape:
                raise MalformedInput(f"chain map degree {d} has shape {mat.shape}, expected {shape}")
            self.matrices[d] = mat
        if check:
            self.check()

    @classmethod
    def from_assignment(cls, source, target, assignment, check=True):
        """``assignment[cell] = target_cell`` or ``(target_cell, coeff)``.

        Cells sent to lower-dimensional cells, or left out, map to zero chains.
        """
        mats = {d: mx.zeros(len(target.cells(d)), len(source.cells(d))) for d in range(source.dim + 1)}
        for c, img in assignment.items():
            tc, coeff = (img, 1) if isinstance(img, str) else img
            if not source.has_cell(c):
                raise DanglingCellReference(f"map assigns unknown source cell {c!r}")
            if not target.has_cell(tc):
                raise DanglingCellReference(f"map sends {c!r} to unknown target cell {tc!r}")
            d = source.cell_dim(c)
            if target.cell_dim(tc) > d:
                raise MalformedInput(f"map raises the dimension of {c!r}")
            if target.cell_dim(tc) == d:
                mats[d][target.index(tc), source.index(c)] = coeff
        return cls(source, target, mats, check=check)

    def matrix(self, d):
        if d in self.matrices:
            return self.matrices[d]
        return mx.zeros(len(self.target.cells(d)), len(self.source.cells(d)))

    def check(self):
        for d in range(1, self.source.dim + 1):
            lhs = mx.matmul(self.target.boundary(d), self.matrix(d))
            rhs = mx.matmul(self.matrix(d - 1), self.source.boundary(d))
            if not (lhs == rhs).all():
                raise NotAChainMap(f"chain-map condition fails in degree {d}")
        return self

    def push(self, d, chains):
        """Image of ``chains`` (``#source_d x c``) in the target's d-chains."""
        return mx.matmul(self.matrix(d), chains)
