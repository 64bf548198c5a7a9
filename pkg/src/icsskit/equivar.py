"""Signed symmetric-group actions and alternating homology.

S_k acts through its adjacent transpositions ``sigma_i = (i, i+1)``, each a
signed permutation of cells.  The alternating chains are those with
``sigma_i c = -c`` for every generator.
"""
from itertools import permutations

from . import _matrix as mx
from .cellcx import CellComplex, SEP, check_cell_budget, from_faces, subcomplex
from .errors import (
    InvalidAction,
    MalformedInput,
    NotActionClosed,
    NotClosedUnderBoundary,
    NotOrbitClosed,
    RestrictionNotClosed,
)
from .intlin import ChainComplex, homology, kernel_basis, matrix_rank


class SignedAction:
    """``generators[i]`` is the signed cell permutation of ``sigma_{i+1}``.

    Cells missing from a generator's map are fixed with sign +1.
    """

    def __init__(self, k, generators):
        if k < 1:
            raise InvalidAction("k must be at least 1")
        if len(generators) != k - 1:
            raise InvalidAction(f"S_{k} needs {k - 1} adjacent-transposition generators, got {len(generators)}")
        self.k = k
        self.generators = tuple(
            {c: (img, int(sign)) for c, (img, sign) in g.items()} for g in generators
        )

    @classmethod
    def trivial(cls, k=1):
        return cls(k, [{} for _ in range(k - 1)])

    def apply(self, i, cell):
        """``sigma_{i+1}(cell)`` as ``(cell, sign)``."""
        return self.generators[i].get(cell, (cell, 1))

    def apply_word(self, word, cell):
        sign = 1
        for i in word:
            cell, s = self.apply(i, cell)
            sign *= s
        return cell, sign

    def restrict(self, cells):
        cells = set(cells)
        return SignedAction(
            self.k, [{c: v for c, v in g.items() if c in cells} for g in self.generators]
        )


class EquivariantComplex:
    """A cell complex with a signed S_k action by cellular chain automorphisms."""

    def __init__(self, complex, action, check=True):
        self.complex = complex
        self.action = action
        if check:
            self.check()

    @property
    def k(self):
        return self.action.k

    def check(self):
        K, A = self.complex, self.action
        for i, g in enumerate(A.generators):
            seen = set()
            for c, (img, sign) in g.items():
                if not K.has_cell(c) or not K.has_cell(img):
                    raise InvalidAction(f"sigma_{i + 1} references a cell outside the complex ({c!r} -> {img!r})")
                if K.cell_dim(c) != K.cell_dim(img):
                    raise InvalidAction(f"sigma_{i + 1} changes the dimension of {c!r}")
                if sign not in (1, -1):
                    raise InvalidAction(f"sigma_{i + 1} has sign {sign} on {c!r}")
                seen.add(img)
            moved = {c for c, (img, _) in g.items() if img != c}
            if {img for c, (img, _) in g.items() if img != c} != moved or len(seen) != len(g):
                raise InvalidAction(f"sigma_{i + 1} is not a permutation of cells")
        for i in range(len(A.generators)):
            for c in K.all_cells():
                img, sign = A.apply(i, c)
                lhs = {}
                for f, a in K.boundary_of(c).items():
                    fi, fs = A.apply(i, f)
                    lhs[fi] = lhs.get(fi, 0) + a * fs
                rhs = {f: sign * a for f, a in K.boundary_of(img).items()}
                if {f: v for f, v in lhs.items() if v} != rhs:
                    raise InvalidAction(f"sigma_{i + 1} does not commute with the boundary at {c!r}")
        check_relations(self)
        return self

    def orbits(self):
        """Orbits of cells under the generated group, ordered by first cell."""
        K = self.complex
        seen = set()
        out = []
        for c in K.all_cells():
            if c in seen:
                continue
            orbit = [c]
            seen.add(c)
            stack = [c]
            while stack:
                x = stack.pop()
                for i in range(len(self.action.generators)):
                    y, _ = self.action.apply(i, x)
                    if y not in seen:
                        seen.add(y)
                        orbit.append(y)
                        stack.append(y)
            out.append(orbit)
        return out

    def generator_matrix(self, i, d):
        """Signed permutation matrix of ``sigma_{i+1}`` on d-chains."""
        cells = self.complex.cells(d)
        G = mx.zeros(len(cells), len(cells))
        for j, c in enumerate(cells):
            img, sign = self.action.apply(i, c)
            G[self.complex.index(img), j] = sign
        return G

    def subcomplex(self, cells):
        """Restriction to a boundary- and action-closed set of cells."""
        cells = set(cells)
        for i in range(len(self.action.generators)):
            for c in cells:
                if self.action.apply(i, c)[0] not in cells:
                    raise NotActionClosed(f"sigma_{i + 1} moves {c!r} out of the subcomplex")
        try:
            sub = subcomplex(self.complex, cells)
        except NotClosedUnderBoundary as exc:
            raise NotActionClosed(f"subcomplex is not boundary-closed: {exc}") from None
        return EquivariantComplex(sub, self.action.restrict(cells), check=False)

    def to_json(self):
        out = self.complex.to_json()
        gens = []
        for i, g in enumerate(self.action.generators):
            entries = [[c, img, sign] for c in self.complex.all_cells() for img, sign in [self.action.apply(i, c)]]
            gens.append({"sigma": i + 1, "map": entries})
        out["action"] = {"k": self.k, "generators": gens}
        return out


def equivariant_from_json(data):
    from .cellcx import build_complex

    K = build_complex(data)
    raw = data.get("action") or {"k": 1, "generators": []}
    try:
        k = int(raw["k"])
        gens = [{} for _ in range(max(k - 1, 0))]
        for g in raw.get("generators", []):
            i = int(g["sigma"])
            if not 1 <= i < k:
                raise InvalidAction(f"generator index {i} out of range for S_{k}")
            for c, img, sign in g["map"]:
                gens[i - 1][str(c)] = (str(img), int(sign))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad action description: {exc}") from None
    return EquivariantComplex(K, SignedAction(k, gens))


def _compose(action, word, cells):
    return {c: action.apply_word(word, c) for c in cells}


def check_relations(E):
    """Coxeter relations of S_k on cells: involutions, braids, far commutation."""
    A = E.action
    cells = list(E.complex.all_cells())
    n = len(A.generators)
    ident = {c: (c, 1) for c in cells}
    for i in range(n):
        if _compose(A, [i, i], cells) != ident:
            raise InvalidAction(f"sigma_{i + 1} squared is not the identity")
        for j in range(i + 1, n):
            word = [i, j] * (3 if j == i + 1 else 2)
            if _compose(A, word, cells) != ident:
                kind = "braid" if j == i + 1 else "commutation"
                raise InvalidAction(f"{kind} relation fails for sigma_{i + 1}, sigma_{j + 1}")


# alternating chains -------------------------------------------------------

def _orbit_vector(E, orbit):
    """The alternating vector supported on ``orbit`` (entries +-1), or None."""
    A = E.action
    coeff = {orbit[0]: 1}
    stack = [orbit[0]]
    while stack:
        x = stack.pop()
        for i in range(len(A.generators)):
            y, s = A.apply(i, x)
            want = -s * coeff[x]
            if y in coeff:
                if coeff[y] != want:
                    return None
            else:
                coeff[y] = want
                stack.append(y)
    return coeff


def _orbit_vector_lattice(E, orbit):
    """Same vector via ``kernel_basis`` of the stacked ``sigma_i + I`` on the orbit."""
    A = E.action
    pos = {c: j for j, c in enumerate(orbit)}
    rows = []
    for i in range(len(A.generators)):
        block = mx.zeros(len(orbit), len(orbit))
        for c in orbit:
            img, s = A.apply(i, c)
            block[pos[img], pos[c]] += s
            block[pos[c], pos[c]] += 1
        rows.append(block)
    M = mx.vstack(rows, len(orbit))
    ker = kernel_basis(M)
    if ker.shape[1] == 0:
        return None
    if ker.shape[1] > 1:
        raise RestrictionNotClosed("alternating lattice of a single orbit has rank above one")
    col = ker[:, 0]
    lead = next(v for v in col if v)
    sign = 1 if lead > 0 else -1
    return {c: sign * int(col[pos[c]]) for c in orbit if col[pos[c]]}


class AlternatingComplex:
    """Alternating chains of an equivariant complex, relative to a sub-complex if given.

    ``basis[d]`` has one column per orbit with a nonzero alternating vector;
    columns have disjoint supports.  ``boundary[d]`` is ``d`` in those bases.
    """

    def __init__(self, E, relative_to=(), method="orbit"):
        self.E = E
        K = E.complex
        rel = set(relative_to)
        orbit_vec = _orbit_vector if method == "orbit" else _orbit_vector_lattice
        self.top = K.dim
        self.basis = {}
        self.columns = {}
        self._rep = {}
        self._all_rep = {}
        orbits_by_dim = {}
        for orbit in E.orbits():
            orbits_by_dim.setdefault(K.cell_dim(orbit[0]), []).append(orbit)
        for d in range(K.dim + 1):
            cells = K.cells(d)
            cols = []
            for orbit in orbits_by_dim.get(d, []):
                vec = orbit_vec(E, orbit)
                if vec is None:
                    continue
                cols.append((orbit, vec))
            allmat = mx.zeros(len(cells), len(cols))
            for j, (orbit, vec) in enumerate(cols):
                for c, v in vec.items():
                    allmat[K.index(c), j] = v
            self._all_rep[d] = [(K.index(orbit[0]), vec[orbit[0]]) for orbit, vec in cols]
            keep = [j for j, (orbit, _) in enumerate(cols) if orbit[0] not in rel]
            self._full_basis = getattr(self, "_full_basis", {})
            self._full_basis[d] = allmat
            self.basis[d] = allmat[:, keep]
            self.columns[d] = keep
        self.boundary = {}
        for d in range(1, K.dim + 1):
            image = mx.matmul(K.boundary(d), self._full_basis[d])
            try:
                coords = self.full_coordinates(d - 1, image)
            except ValueError:
                raise RestrictionNotClosed(f"boundary leaves the alternating lattice in degree {d}") from None
            self.boundary[d] = coords[self.columns[d - 1], :][:, self.columns[d]]

    def rank(self, d):
        return len(self.columns.get(d, ()))

    def full_coordinates(self, d, chains):
        """Coordinates of alternating d-chains over all orbit columns (relative part included)."""
        chains = mx.as_matrix(chains)
        reps = self._all_rep.get(d, [])
        out = mx.zeros(len(reps), chains.shape[1])
        for j, (row, sign) in enumerate(reps):
            for c in range(chains.shape[1]):
                out[j, c] = chains[row, c] * sign
        basis = self._full_basis.get(d, mx.zeros(chains.shape[0], 0))
        if not (mx.matmul(basis, out) == chains).all():
            raise ValueError("chain is not alternating")
        return out

    def coordinates(self, d, chains):
        """Coordinates in this (possibly relative) complex; relative columns are dropped."""
        return self.full_coordinates(d, chains)[self.columns.get(d, []), :]

    def chain_complex(self):
        sizes = tuple(self.rank(d) for d in range(self.top + 1))
        return ChainComplex(sizes, dict(self.boundary))


def alternating_complex(E, method="orbit"):
    return AlternatingComplex(E, method=method)


def alternating_homology(E, top=None):
    C = alternating_complex(E).chain_complex()
    if not C.sizes:
        return [] if top is None else homology(ChainComplex((0,) * (top + 1)))
    return homology(C, top)


def _closed_cells(E, A):
    cells = set(A.complex.all_cells()) if isinstance(A, EquivariantComplex) else set(A)
    for c in cells:
        if not E.complex.has_cell(c):
            raise NotActionClosed(f"cell {c!r} is not in the ambient complex")
        for f in E.complex.boundary_of(c):
            if f not in cells:
                raise NotActionClosed(f"face {f!r} of {c!r} is missing from the subcomplex")
        for i in range(len(E.action.generators)):
            if E.action.apply(i, c)[0] not in cells:
                raise NotActionClosed(f"sigma_{i + 1} moves {c!r} out of the subcomplex")
    return cells


def relative_alternating_complex(E, A):
    return AlternatingComplex(E, relative_to=_closed_cells(E, A))


def relative_alternating_homology(E, A, top=None):
    C = relative_alternating_complex(E, A).chain_complex()
    if not C.sizes:
        return []
    return homology(C, top)


# constructions ------------------------------------------------------------

def power_complex(K, k, sep=SEP):
    """k-fold Koszul product of ``K`` with S_k permuting factors.

    Swapping adjacent factors of dimensions p and q carries the sign (-1)^(pq).
    """
    if k < 1:
        raise MalformedInput("k must be at least 1")
    check_cell_budget(K.n_cells ** k, "power complex")
    tuples = [()]
    for _ in range(k):
        tuples = [t + (c,) for t in tuples for c in K.all_cells()]
    dims = {c: K.cell_dim(c) for c in K.all_cells()}
    top = k * K.dim if not K.is_empty() else -1
    levels = [[] for _ in range(top + 1)]
    name = sep.join
    for t in tuples:
        levels[sum(dims[c] for c in t)].append(t)
    for level in levels:
        level.sort(key=lambda t: tuple((dims[c], K.index(c)) for c in t))
    faces = {}
    for level in levels:
        for t in level:
            terms = {}
            shift = 0
            for pos, c in enumerate(t):
                sign = -1 if shift % 2 else 1
                for f, a in K.boundary_of(c).items():
                    key = name(t[:pos] + (f,) + t[pos + 1:])
                    terms[key] = terms.get(key, 0) + sign * a
                shift += dims[c]
            faces[name(t)] = terms
    complex_ = from_faces([[name(t) for t in level] for level in levels], faces)
    gens = []
    for i in range(k - 1):
        g = {}
        for level in levels:
            for t in level:
                swapped = t[:i] + (t[i + 1], t[i]) + t[i + 2:]
                sign = -1 if (dims[t[i]] * dims[t[i + 1]]) % 2 else 1
                g[name(t)] = (name(swapped), sign)
        gens.append(g)
    return EquivariantComplex(complex_, SignedAction(k, gens))


def attach_equivariant_cone(E, P, apex=None, edge_name=None):
    """Attach an invariant apex and one 1-cell per member of ``P``, ``d e_p = p - apex``.

    ``P`` must be a union of orbits of 0-cells on which the action has sign +1.
    """
    K, A = E.complex, E.action
    P = list(P)
    pset = set(P)
    for p in P:
        if not K.has_cell(p) or K.cell_dim(p) != 0:
            raise NotOrbitClosed(f"{p!r} is not a 0-cell of the complex")
        for i in range(len(A.generators)):
            img, sign = A.apply(i, p)
            if img not in pset:
                raise NotOrbitClosed(f"sigma_{i + 1} moves {p!r} to {img!r}, outside the cone base")
            if sign != 1:
                raise NotOrbitClosed(f"sigma_{i + 1} acts on {p!r} with sign -1; a cone edge cannot carry it")
    apex = apex or _fresh(K, "^apex")
    edge_name = edge_name or (lambda p: f"^cone[{p}]")
    edges = [edge_name(p) for p in P]
    for new in [apex] + edges:
        if K.has_cell(new):
            raise MalformedInput(f"cone cell id {new!r} already exists")
    levels = [list(K.cells(d)) for d in range(max(K.dim, 1) + 1)]
    levels[0].append(apex)
    levels[1].extend(edges)
    faces = {c: K.boundary_of(c) for c in K.all_cells() if K.cell_dim(c) > 0}
    for p, e in zip(P, edges):
        faces[e] = {p: 1, apex: -1}
    cx = from_faces(levels, faces, K.labels)
    gens = []
    for i, g in enumerate(A.generators):
        g = dict(g)
        for p, e in zip(P, edges):
            img, _ = A.apply(i, p)
            if img != p:
                g[e] = (edge_name(img), 1)
        gens.append(g)
    return EquivariantComplex(cx, SignedAction(A.k, gens))


def _fresh(K, base):
    name, n = base, 0
    while K.has_cell(name):
        n += 1
        name = f"{base}{n}"
    return name


def trivial_equivariant(K):
    """``K`` with the trivial action of S_1."""
    return EquivariantComplex(K, SignedAction.trivial(1), check=False)


# Mayer-Vietoris ----------------------------------------------------------

def _induced_rank(big, sub_cycles, d):
    """Rank over Q of the classes of ``sub_cycles`` in ``H_d`` of chain complex ``big``."""
    bnd = big.boundary(d + 1)
    if sub_cycles.shape[1] == 0:
        return 0
    both = mx.zeros(bnd.shape[0], bnd.shape[1] + sub_cycles.shape[1])
    both[:, : bnd.shape[1]] = bnd
    both[:, bnd.shape[1]:] = sub_cycles
    return matrix_rank(both) - matrix_rank(bnd)


def mayer_vietoris_check(E, first, second):
    """Check the alternating Mayer-Vietoris sequence of ``E = first u second``.

    ``first`` and ``second`` are action-closed subcomplexes (cell sets).  All
    alternating complexes involved are spanned by orbit columns of ``E``, so
    the chain-level sequence is split exact iff the orbit sets add up; the
    homology-level check verifies rank exactness at every position of the
    long exact sequence.  Returns a transcript dict.
    """
    B1 = _closed_cells(E, first)
    B2 = _closed_cells(E, second)
    everything = set(E.complex.all_cells())
    if B1 | B2 != everything:
        raise NotActionClosed("the two pieces do not cover the complex")
    inter = B1 & B2
    full = AlternatingComplex(E)
    Cx = full.chain_complex()

    def piece(cells):
        cols = {d: [j for j, (row, _) in enumerate(full._all_rep[d]) if E.complex.cells(d)[row] in cells]
                for d in range(full.top + 1)}
        sizes = tuple(len(cols[d]) for d in range(full.top + 1))
        mats = {d: Cx.boundary(d)[cols[d - 1], :][:, cols[d]] for d in range(1, full.top + 1)}
        return cols, ChainComplex(sizes, mats)

    (c1, C1), (c2, C2), (ca, CA) = piece(B1), piece(B2), piece(inter)
    top = full.top
    hx = homology(Cx, top)
    h1, h2, ha = homology(C1, top), homology(C2, top), homology(CA, top)
    positions = []
    ok = True
    i_rank, j_rank = {}, {}
    for d in range(top + 1):
        # i: H(A) -> H(B1) + H(B2), a |-> (a, -a)
        za = kernel_basis(CA.boundary(d)) if CA.size(d) else mx.zeros(0, 0)
        n1, n2 = C1.size(d), C2.size(d)
        emb = mx.zeros(n1 + n2, za.shape[1])
        for j in range(za.shape[1]):
            for r, col in enumerate(ca[d]):
                v = za[r, j]
                if v:
                    emb[c1[d].index(col), j] = v
                    emb[n1 + c2[d].index(col), j] = -v
        summed = ChainComplex(
            tuple(C1.size(e) + C2.size(e) for e in range(top + 1)),
            {e: _block_diag(C1.boundary(e), C2.boundary(e)) for e in range(1, top + 1)},
        )
        i_rank[d] = _induced_rank(summed, emb, d)
        # j: H(B1) + H(B2) -> H(X), (b1, b2) |-> b1 + b2
        z1 = kernel_basis(C1.boundary(d)) if n1 else mx.zeros(0, 0)
        z2 = kernel_basis(C2.boundary(d)) if n2 else mx.zeros(0, 0)
        img = mx.zeros(Cx.size(d), z1.shape[1] + z2.shape[1])
        for j in range(z1.shape[1]):
            for r, col in enumerate(c1[d]):
                img[col, j] += z1[r, j]
        for j in range(z2.shape[1]):
            for r, col in enumerate(c2[d]):
                img[col, z1.shape[1] + j] += z2[r, j]
        j_rank[d] = _induced_rank(Cx, img, d)
    for d in range(top + 1):
        mid = h1[d].rank + h2[d].rank
        at_middle = mid == i_rank[d] + j_rank[d]
        prev_a = ha[d - 1].rank - i_rank[d - 1] if d >= 1 else 0
        at_ends = hx[d].rank - j_rank[d] == prev_a
        positions.append({
            "degree": d,
            "H_intersection": str(ha[d]),
            "H_pieces": f"{h1[d]} + {h2[d]}",
            "H_union": str(hx[d]),
            "rank_i": i_rank[d],
            "rank_j": j_rank[d],
            "exact": bool(at_middle and at_ends),
        })
        ok = ok and at_middle and at_ends
    return {"exact": ok, "positions": positions}


def _block_diag(a, b):
    out = mx.zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def signed_permutations(k):
    """All elements of S_k with their signs (used by tests and small oracles)."""
    out = []
    for perm in permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        out.append((perm, -1 if inv % 2 else 1))
    return out
