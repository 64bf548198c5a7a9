"""Exact face enumeration of simple affine hyperplane arrangements in a box.

Faces are sign vectors over all planes (branch planes first, then the 2p box
walls, on which only the signs 0 and -1 are allowed).  Only faces lying on at
least one branch plane are kept.  Coordinates are sympy Rationals.
"""
from itertools import combinations

import sympy as sp

from .errors import InvalidFixture


def _sign(v):
    return int(bool(v > 0)) - int(bool(v < 0))


class Arrangement:
    """Faces of ``{a_j . x = b_j}`` clipped to ``[-R, R]^p``.

    ``faces[d]`` is a sorted list of sign vectors; ``vertices_of``,
    ``facets_of`` and ``incidence`` give the regular CW structure.
    """

    def __init__(self, planes, radius):
        self.planes = [(tuple(sp.Rational(a) for a in normal), sp.Rational(b)) for normal, b in planes]
        self.s = len(self.planes)
        self.p = len(self.planes[0][0])
        R = sp.Rational(radius)
        walls = []
        for i in range(self.p):
            for sgn in (1, -1):
                walls.append((tuple(sp.Integer(sgn if k == i else 0) for k in range(self.p)), R))
        self.all_planes = self.planes + walls
        self._enumerate()

    def signs(self, x):
        return tuple(_sign(sum(a * xi for a, xi in zip(normal, x)) - b) for normal, b in self.all_planes)

    def _zeros(self, sigma):
        return frozenset(i for i, v in enumerate(sigma) if v == 0)

    def _enumerate(self):
        p = self.p
        verts = {}
        for combo in combinations(range(len(self.all_planes)), p):
            if not any(i < self.s for i in combo):
                continue
            A = sp.Matrix([list(self.all_planes[i][0]) for i in combo])
            if A.det() == 0:
                continue
            b = sp.Matrix([self.all_planes[i][1] for i in combo])
            x = tuple(A.LUsolve(b))
            sigma = self.signs(x)
            if any(v > 0 for v in sigma[self.s:]):
                continue
            if len(self._zeros(sigma)) != p:
                raise InvalidFixture(f"arrangement is not simple at {x}")
            verts[sigma] = x
        self.coords = dict(verts)
        faces = {0: set(verts)}
        for d in range(1, p):
            level = set()
            for g in faces[d - 1]:
                Z = self._zeros(g)
                for z in Z:
                    rest = Z - {z}
                    if not any(i < self.s for i in rest):
                        continue
                    for sgn in ((1, -1) if z < self.s else (-1,)):
                        sigma = list(g)
                        sigma[z] = sgn
                        level.add(tuple(sigma))
            faces[d] = level
        self.faces = {d: sorted(fs) for d, fs in faces.items()}
        self._below = {}
        for d in range(1, p):
            for f in self.faces[d]:
                self._below[f] = [g for g in self.faces[d - 1] if _leq(g, f)]
        self._verts = {}
        for d in range(p):
            for f in self.faces[d]:
                self._verts[f] = [v for v in self.faces[0] if _leq(v, f)]
        self._basis = {}
        self._centroid = {}
        for d in range(p):
            for f in self.faces[d]:
                pts = [self.coords[v] for v in self._verts[f]]
                self._centroid[f] = tuple(sum(c) / len(pts) for c in zip(*pts))
                Z = sorted(self._zeros(f))
                N = sp.Matrix([list(self.all_planes[i][0]) for i in Z])
                self._basis[f] = [list(v) for v in N.nullspace()]
                if len(self._basis[f]) != d:
                    raise InvalidFixture("face dimension does not match its zero set")

    def on_plane(self, f, j):
        return f[j] == 0

    def facets_of(self, f):
        return self._below.get(f, [])

    def incidence(self, f, g):
        """Orientation sign of facet ``g`` in the boundary of ``f``."""
        Bf = sp.Matrix(self._basis[f]).T
        u = [a - b for a, b in zip(self._centroid[g], self._centroid[f])]
        cols = [u] + self._basis[g]
        coords = [Bf.solve_least_squares(sp.Matrix(c)) for c in cols]
        M = sp.Matrix.hstack(*coords)
        det = M.det()
        if det == 0:
            raise InvalidFixture("degenerate incidence")
        return 1 if det > 0 else -1


def _leq(g, f):
    return all(a == 0 or a == b for a, b in zip(g, f))
