"""Combinatorial multi-germ models and their multiple point spaces.

A model is a list of branch complexes mapped cell-to-cell into a target.  Each
branch maps injectively and each source cell's closure maps isomorphically
onto its image cell's closure (the normal-crossings condition).  Under this
condition ``D^k`` has one cell per ordered k-tuple of source cells over a
common target cell ``t``, of dimension ``dim t``: the pairwise-distinct tuples
together with their faces.  Faces are lifted uniquely, so the boundary of a
tuple over ``t`` copies the boundary of ``t``.
"""
from dataclasses import dataclass, field
from itertools import permutations

from .cellcx import (
    SEP,
    CellComplex,
    CellMap,
    build_complex,
    check_cell_budget,
    disjoint_union,
    from_faces,
    mapping_cylinder_quotient,
    quotient_representative,
    subcomplex,
)
from .equivar import EquivariantComplex, SignedAction, equivariant_from_json, trivial_equivariant
from .errors import InvalidGermModel, MalformedInput, NotActionClosed, NotNormalCrossings
from .intlin import homology


def _is_point_homology(K):
    hs = homology(K)
    return bool(hs) and hs[0].rank == 1 and not hs[0].torsion and all(h.is_zero for h in hs[1:])


class GermModel:
    """Branches ``U_1..U_s``, a target complex and a cellwise map.

    ``identify`` lists pairs of source 0-cells glued in the source (used by the
    augmented models built in :mod:`icsskit.disent`); every branch is still
    checked separately for contractibility and injectivity.
    """

    def __init__(self, branches, target, cell_map, n, p, simply_connected=None,
                 explicit_levels=None, identify=(), unfolding=None, name=None):
        self.branches = list(branches)
        self.target = target
        self.map = dict(cell_map)
        self.n = int(n)
        self.p = int(p)
        self.simply_connected = simply_connected
        self.explicit_levels = dict(explicit_levels or {})
        self.identify = [tuple(pair) for pair in identify]
        self.unfolding = unfolding
        self.name = name
        self._validate()

    @property
    def s(self):
        return len(self.branches)

    def _validate(self):
        if not self.branches:
            raise InvalidGermModel("a germ model needs at least one branch")
        if self.n >= self.p:
            raise InvalidGermModel(f"need n < p, got n={self.n}, p={self.p}")
        self.branch_of = {}
        for j, U in enumerate(self.branches):
            if U.is_empty():
                raise InvalidGermModel(f"branch {j} is empty")
            if not _is_point_homology(U):
                raise InvalidGermModel(f"branch {j} is not contractible (homology {[str(h) for h in homology(U)]})")
            for c in U.all_cells():
                if SEP in c:
                    raise InvalidGermModel(f"source cell id {c!r} contains the tuple separator {SEP!r}")
                if c in self.branch_of:
                    raise InvalidGermModel(f"cell id {c!r} appears in two branches")
                self.branch_of[c] = j
        for c in self.target.all_cells():
            if SEP in c:
                raise InvalidGermModel(f"target cell id {c!r} contains the tuple separator {SEP!r}")
        for c, t in self.map.items():
            if c not in self.branch_of:
                raise InvalidGermModel(f"map assigns unknown source cell {c!r}")
            if not self.target.has_cell(t):
                raise InvalidGermModel(f"map sends {c!r} to unknown target cell {t!r}")
        for j, U in enumerate(self.branches):
            seen = {}
            for c in U.all_cells():
                if c not in self.map:
                    raise InvalidGermModel(f"source cell {c!r} has no image")
                t = self.map[c]
                if self.target.cell_dim(t) != U.cell_dim(c):
                    raise InvalidGermModel(f"map changes the dimension of {c!r}")
                if t in seen:
                    raise NotNormalCrossings(f"branch {j} sends {seen[t]!r} and {c!r} to the same cell {t!r}")
                seen[t] = c
                pushed = {self.map[f]: a for f, a in U.boundary_of(c).items()}
                if pushed != self.target.boundary_of(t):
                    raise NotNormalCrossings(f"closure of {c!r} does not map isomorphically onto that of {t!r}")
        union = disjoint_union(self.branches)
        for a, b in self.identify:
            for c in (a, b):
                if c not in self.branch_of:
                    raise InvalidGermModel(f"identification references unknown cell {c!r}")
            if self.map[a] != self.map[b]:
                raise InvalidGermModel(f"identified cells {a!r} and {b!r} have different images")
        self.source = mapping_cylinder_quotient(union, self.identify)
        rep = quotient_representative(self.identify)
        self.rep = rep
        self.owners = {}
        for c, j in self.branch_of.items():
            self.owners.setdefault(rep.get(c, c), set()).add(j)
        self.over = {}
        for c in self.source.all_cells():
            self.over.setdefault(self.map[c], []).append(c)
        for t in self.over:
            self.over[t].sort(key=lambda c: (self.source.index(c), c))
        self._lift = {}
        for c in self.source.all_cells():
            self._lift[c] = {self.map[f]: f for f in self.source.boundary_of(c)}
        self._levels = {}

    # multiple point data -------------------------------------------------
    @property
    def d(self):
        """Largest k with ``D^k`` nonempty."""
        if self.explicit_levels:
            nonempty = [k for k, E in self.explicit_levels.items() if not E.complex.is_empty()]
            return max([1] + nonempty)
        return max((len(cs) for cs in self.over.values()), default=0)

    def level(self, k):
        if k not in self._levels:
            self._levels[k] = self._build_level(k)
        return self._levels[k]

    def _build_level(self, k):
        if k < 1:
            raise MalformedInput("multiple point level must be at least 1")
        if k == 1:
            return trivial_equivariant(self.source)
        if k in self.explicit_levels:
            return self.explicit_levels[k]
        if self.explicit_levels and k > max(self.explicit_levels):
            return EquivariantComplex(CellComplex([]), SignedAction.trivial(k), check=False)
        return _closure_level(self, k)

    def to_json(self):
        out = {
            "branches": [U.to_json() for U in self.branches],
            "target": self.target.to_json(),
            "map": sorted([c, t] for c, t in self.map.items()),
            "n": self.n,
            "p": self.p,
        }
        if self.simply_connected is not None:
            out["simply_connected"] = self.simply_connected
        if self.identify:
            out["identify"] = [list(pair) for pair in self.identify]
        if self.explicit_levels:
            out["explicit_levels"] = {str(k): E.to_json() for k, E in sorted(self.explicit_levels.items())}
        if self.unfolding is not None:
            out["unfolding"] = self.unfolding.to_json()
        if self.name:
            out["name"] = self.name
        return out


def germ_from_json(data):
    if not isinstance(data, dict):
        raise MalformedInput("germ model must be a JSON object")
    try:
        branches = [build_complex(b) for b in data["branches"]]
        target = build_complex(data["target"])
        pairs = data["map"]
        cell_map = dict(pairs.items()) if isinstance(pairs, dict) else {str(a): str(b) for a, b in pairs}
        n, p = int(data["n"]), int(data["p"])
    except KeyError as exc:
        raise MalformedInput(f"germ model is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"germ model field has the wrong shape: {exc}") from None
    explicit = {}
    for key, val in (data.get("explicit_levels") or {}).items():
        try:
            k = int(key)
        except ValueError:
            raise MalformedInput(f"explicit level key {key!r} is not an integer") from None
        if k < 2:
            raise MalformedInput("explicit levels start at k = 2")
        E = equivariant_from_json(val)
        if E.k != k and not E.complex.is_empty():
            raise InvalidGermModel(f"explicit level {k} carries an S_{E.k} action")
        explicit[k] = E
    unfolding = germ_from_json(data["unfolding"]) if data.get("unfolding") else None
    return GermModel(
        branches, target, cell_map, n, p,
        simply_connected=data.get("simply_connected"),
        explicit_levels=explicit,
        identify=[tuple(map(str, pair)) for pair in data.get("identify", [])],
        unfolding=unfolding,
        name=data.get("name"),
    )


def _closure_level(g, k):
    count = sum(_falling(len(cs), k) for cs in g.over.values())
    check_cell_budget(count, f"D^{k}")
    name = SEP.join
    T = g.target
    tuples = {}
    for t, cs in g.over.items():
        for tup in permutations(cs, k):
            tuples[name(tup)] = (t, tup)
    faces = {}
    stack = list(tuples)
    while stack:
        cid = stack.pop()
        t, tup = tuples[cid]
        terms = {}
        for ft, a in T.boundary_of(t).items():
            face = tuple(g._lift[c][ft] for c in tup)
            fid = name(face)
            if fid not in tuples:
                tuples[fid] = (ft, face)
                stack.append(fid)
            terms[fid] = terms.get(fid, 0) + a
        faces[cid] = terms
    src_index = {c: g.source.index(c) for c in g.source.all_cells()}
    top = max((T.cell_dim(t) for t, _ in tuples.values()), default=-1)
    levels = [[] for _ in range(top + 1)]
    for cid, (t, tup) in tuples.items():
        levels[T.cell_dim(t)].append(cid)
    for level in levels:
        level.sort(key=lambda cid: (T.index(tuples[cid][0]), tuple(src_index[c] for c in tuples[cid][1])))
    cx = from_faces(levels, {c: f for c, f in faces.items() if f}, check=False)
    gens = []
    for i in range(k - 1):
        gmap = {}
        for cid, (_, tup) in tuples.items():
            if tup[i] != tup[i + 1]:
                gmap[cid] = (name(tup[:i] + (tup[i + 1], tup[i]) + tup[i + 2:]), 1)
        gens.append(gmap)
    return EquivariantComplex(cx, SignedAction(k, gens), check=False)


def _falling(n, k):
    out = 1
    for i in range(k):
        out *= n - i
    return out if n >= k else 0


def multiple_point_space(g, k):
    """``D^k`` with its S_k action (k >= 1; level 1 is the source)."""
    return g.level(k)


def epsilon_map(g, k):
    """``D^{k+1} -> D^k`` forgetting the last coordinate, coefficient +1."""
    upper = g.level(k + 1).complex
    lower = g.level(k).complex
    assignment = {}
    for c in upper.all_cells():
        head = c.rsplit(SEP, 1)[0] if k >= 1 else c
        if not lower.has_cell(head):
            raise InvalidGermModel(f"D^{k + 1} cell {c!r} forgets to {head!r}, which is not a cell of D^{k}")
        if lower.cell_dim(head) != upper.cell_dim(c):
            raise InvalidGermModel(f"D^{k + 1} cell {c!r} and its image {head!r} differ in dimension")
        assignment[c] = head
    return CellMap.from_assignment(upper, lower, assignment)


@dataclass
class MppFamily:
    """Levels ``D^1..D^K`` and the maps ``epsilon[k]: D^{k+1} -> D^k``."""

    model: object
    levels: dict
    epsilon: dict = field(default_factory=dict)

    @property
    def d_of_f(self):
        nonempty = [k for k, E in self.levels.items() if not E.complex.is_empty()]
        return max(nonempty, default=0)

    @property
    def top(self):
        return max(self.levels)

    def dim(self, k):
        """Dimension of ``D^k``; -1 for an empty level."""
        E = self.levels.get(k)
        return -1 if E is None or E.complex.is_empty() else E.complex.dim


def multiple_point_family(g, max_k=None):
    """All nonempty levels (capped by ``max_k``) plus one empty level above."""
    d = g.d
    top = d + 1 if max_k is None else min(d + 1, max_k)
    top = max(top, 1)
    levels = {k: g.level(k) for k in range(1, top + 1)}
    epsilon = {k: epsilon_map(g, k) for k in range(1, top)}
    return MppFamily(g, levels, epsilon)


def image_cells(g, k):
    """Target cells hit by first components of ``D^k`` cells."""
    E = g.level(k).complex
    if k == 1:
        return {g.map[c] for c in E.all_cells()}
    return {g.map[g.rep.get(c.split(SEP, 1)[0], c.split(SEP, 1)[0])] for c in E.all_cells()}


def mk_image(g, k):
    """``M_k``: the image of ``D^k`` in the target under the first coordinate."""
    return subcomplex(g.target, image_cells(g, k))


def image_complex(g):
    """The image of the model, a subcomplex of the target."""
    return subcomplex(g.target, set(g.map.values()))


def witness_point(g):
    """Smallest target 0-cell over which every branch has a 0-cell, outside ``M_{s+1}``; None if absent."""
    s = g.s
    if g.d < s:
        return None
    excluded = image_cells(g, s + 1) if g.d > s else set()
    for y in sorted(g.target.cells(0)):
        if y in excluded:
            continue
        hit = set()
        for c in g.over.get(y, ()):
            hit |= g.owners.get(c, set())
        if len(hit) == s:
            return y
    return None


def branch_preimage(g, y, j):
    """Smallest 0-cell of branch ``j`` over ``y``."""
    U = g.branches[j]
    found = sorted(c for c in U.cells(0) if g.map[c] == y)
    return found[0] if found else None


def cone_unfolding(g, apex="^o"):
    """Model of ``F'``: each branch coned to its own apex over one target apex.

    Target cells become ``^c[t]``, source cone cells ``^c[c]``; the branch
    apexes are ``^o{j}``.  ``g``'s cells keep their ids, so ``D^k(g)`` sits
    inside ``D^k`` of the result by cell id.
    """
    from .cellcx import cone

    cone_id = lambda c: f"^c[{c}]"
    T = cone(image_complex(g), apex, cone_id)
    branches = []
    cell_map = dict(g.map)
    cell_map[apex] = apex
    for j, U in enumerate(g.branches):
        a = f"{apex}{j}"
        branches.append(cone(U, a, cone_id))
        cell_map[a] = apex
        for c in U.all_cells():
            cell_map[cone_id(c)] = cone_id(g.map[c])
    cell_map.pop(apex)
    name = f"{g.name}+cone" if g.name else None
    return GermModel(branches, T, cell_map, g.n + 1, g.p + 1, simply_connected=True, name=name)


def unfolding_of(g):
    """The declared unfolding model, or the cone model when none is declared."""
    return g.unfolding if g.unfolding is not None else cone_unfolding(g)


def inclusion_cells(g, G, k):
    """Cells of ``D^k(g)`` inside ``D^k(G)``; checks containment by id."""
    small = g.level(k).complex
    big = G.level(k).complex
    cells = set(small.all_cells())
    for c in cells:
        if not big.has_cell(c) or big.cell_dim(c) != small.cell_dim(c):
            raise NotActionClosed(f"D^{k} cell {c!r} of the model is not a cell of the unfolding")
        if big.boundary_of(c) != small.boundary_of(c):
            raise NotActionClosed(f"D^{k} cell {c!r} has a different boundary in the unfolding")
    return cells
