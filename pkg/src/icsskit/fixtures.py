"""Fixture generators for germ models and small test complexes."""
import random
from fractions import Fraction
from itertools import combinations

from ._arrangement import Arrangement
from .cellcx import dumps, from_faces, subcomplex
from .errors import InvalidFixture
from .multipt import GermModel


def _model_from_target(T, sheets, n, p, name, simply_connected=None):
    """Branch j is the subcomplex of ``T`` on ``sheets[j]``, cells renamed ``u{j}.{id}``."""
    branches = []
    cell_map = {}
    for j, cells in enumerate(sheets):
        sub = subcomplex(T, cells)
        rename = {c: f"u{j + 1}.{c}" for c in sub.all_cells()}
        levels = [[rename[c] for c in sub.cells(d)] for d in range(sub.dim + 1)]
        faces = {rename[c]: {rename[f]: a for f, a in sub.boundary_of(c).items()} for c in sub.all_cells() if sub.cell_dim(c)}
        branches.append(from_faces(levels, faces))
        cell_map.update({rename[c]: c for c in sub.all_cells()})
    return GermModel(branches, T, cell_map, n, p, simply_connected=simply_connected, name=name)


# lines in the plane ----------------------------------------------------------

def line_model(lines, name=None):
    """Segments of ``y = a x + b`` long enough to contain every crossing.

    Concurrent and parallel lines are allowed; coincident lines are not.
    """
    lines = [(Fraction(a), Fraction(b)) for a, b in lines]
    if len(set(lines)) != len(lines):
        raise InvalidFixture("coincident lines")
    points = {}
    for i, j in combinations(range(len(lines)), 2):
        (a1, b1), (a2, b2) = lines[i], lines[j]
        if a1 == a2:
            continue
        x = (b2 - b1) / (a1 - a2)
        points.setdefault((x, a1 * x + b1), set()).update((i, j))
    order = sorted(points)
    vid = {pt: f"v{k + 1}" for k, pt in enumerate(order)}
    verts = [vid[pt] for pt in order]
    edges = []
    faces = {}
    sheets = []
    for j in range(len(lines)):
        on = [vid[pt] for pt in sorted((pt for pt, owners in points.items() if j in owners), key=lambda q: q[0])]
        lo, hi = f"l{j + 1}a", f"l{j + 1}b"
        chain = [lo] + on + [hi]
        verts.extend([lo, hi])
        cells = set(chain)
        for k, (u, v) in enumerate(zip(chain, chain[1:])):
            e = f"l{j + 1}e{k + 1}"
            edges.append(e)
            faces[e] = {v: 1, u: -1}
            cells.add(e)
        sheets.append(cells)
    T = from_faces([verts, edges], faces)
    return _model_from_target(T, sheets, 1, 2, name, simply_connected=False)


def s_lines(s):
    """``y = j x + j^2`` for j = 1..s: generic, every pair crosses once."""
    return line_model([(j, j * j) for j in range(1, s + 1)], name=f"s_lines_{s}")


def concurrent_lines(s=3):
    """``s`` lines through the origin."""
    return line_model([(j, 0) for j in range(1, s + 1)], name=f"concurrent_lines_{s}")


def two_lines():
    """Two sheets ``x_a - x_j - x_b`` crossing at the target 0-cell ``v``."""
    T = from_faces(
        [["a1", "a2", "b1", "b2", "v"], ["ea1", "ea2", "eb1", "eb2"]],
        {"ea1": {"v": 1, "a1": -1}, "eb1": {"b1": 1, "v": -1},
         "ea2": {"v": 1, "a2": -1}, "eb2": {"b2": 1, "v": -1}},
    )
    branches = []
    cell_map = {}
    for j in (1, 2):
        U = from_faces(
            [[f"a{j}'", f"x{j}", f"b{j}'"], [f"ea{j}'", f"eb{j}'"]],
            {f"ea{j}'": {f"x{j}": 1, f"a{j}'": -1}, f"eb{j}'": {f"b{j}'": 1, f"x{j}": -1}},
        )
        branches.append(U)
        cell_map.update({f"a{j}'": f"a{j}", f"x{j}": "v", f"b{j}'": f"b{j}",
                         f"ea{j}'": f"ea{j}", f"eb{j}'": f"eb{j}"})
    return GermModel(branches, T, cell_map, 1, 2, simply_connected=True, name="two_lines")


# planes in space ----------------------------------------------------------

def plane_model(planes, radius, name=None, simply_connected=None):
    """Simple arrangement of planes clipped to ``[-R, R]^p``; branch j is plane j."""
    A = Arrangement(planes, radius)
    p = A.p
    ids = {}
    levels = []
    for d in range(p):
        ids.update({f: f"f{d}_{k + 1}" for k, f in enumerate(A.faces[d])})
        levels.append([ids[f] for f in A.faces[d]])
    faces = {}
    for d in range(1, p):
        for f in A.faces[d]:
            faces[ids[f]] = {ids[g]: A.incidence(f, g) for g in A.facets_of(f)}
    T = from_faces(levels, faces)
    sheets = []
    for j in range(A.s):
        sheets.append({ids[f] for d in range(p) for f in A.faces[d] if A.on_plane(f, j)})
    return _model_from_target(T, sheets, p - 1, p, name, simply_connected)


def triple_planes():
    """The three coordinate planes: a contractible image with one triple point."""
    planes = [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)]
    return plane_model(planes, 2, name="triple_planes", simply_connected=True)


def quadruple_planes():
    """Coordinate planes and ``x + y + z = 1``: four triple points, no quadruple point."""
    planes = [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((1, 1, 1), 1)]
    return plane_model(planes, 3, name="quadruple_planes", simply_connected=True)


# disks sharing a boundary -------------------------------------------------

def disk_bouquet(s, m=3):
    """``s`` disks glued along a common ``m``-gon: a wedge of ``s - 1`` two-spheres.

    Its double points are one-dimensional, so the spectral sequence has a
    second nonzero row.
    """
    vs = [f"c{i}" for i in range(m)]
    es = [f"g{i}" for i in range(m)]
    faces = {es[i]: _edge(vs[(i + 1) % m], vs[i]) for i in range(m)}
    disks = [f"D{j + 1}" for j in range(s)]
    for D in disks:
        faces[D] = {e: 1 for e in es}
    T = from_faces([vs, es, disks], faces)
    sheets = [set(vs) | set(es) | {D} for D in disks]
    return _model_from_target(T, sheets, 2, 3, f"disk_bouquet_{s}_{m}", simply_connected=s > 0)


def _edge(head, tail):
    return {head: 1, tail: -1} if head != tail else {}


# classical complexes ------------------------------------------------------

def sphere(n):
    """One 0-cell and one n-cell."""
    if n == 0:
        return from_faces([["a", "b"]], {})
    levels = [["v"]] + [[] for _ in range(n - 1)] + [["e"]]
    return from_faces(levels, {})


def torus():
    """Square with opposite sides identified: ``d F = a + b - a - b``."""
    return from_faces([["v"], ["a", "b"], ["F"]], {"a": {}, "b": {}, "F": {}})


def projective_plane():
    """``d F = 2 a``."""
    return from_faces([["v"], ["a"], ["F"]], {"a": {}, "F": {"a": 2}})


def klein_bottle():
    """``d F = a + b + a - b = 2 a``."""
    return from_faces([["v"], ["a", "b"], ["F"]], {"a": {}, "b": {}, "F": {"a": 2}})


def simplicial(facets):
    """Simplicial complex generated by ``facets`` (tuples of vertex labels).

    Simplices are sorted vertex tuples named ``"v0|v1|..."``; the boundary is
    the alternating sum of faces.
    """
    simplices = set()
    for f in facets:
        f = tuple(sorted(f))
        for r in range(1, len(f) + 1):
            simplices.update(combinations(f, r))
    top = max((len(s) for s in simplices), default=0)
    name = lambda s: "|".join(str(v) for v in s)
    levels = [[name(s) for s in sorted(x for x in simplices if len(x) == r + 1)] for r in range(top)]
    faces = {}
    for s in simplices:
        if len(s) > 1:
            faces[name(s)] = {name(s[:i] + s[i + 1:]): (-1) ** i for i in range(len(s))}
    return from_faces(levels, faces)


def random_simplicial(rng, vertices=5, facets=4, max_dim=2):
    pool = list(range(vertices))
    chosen = []
    for _ in range(rng.randint(1, facets)):
        chosen.append(tuple(rng.sample(pool, rng.randint(1, min(max_dim + 1, vertices)))))
    return simplicial(chosen)


# randomized --------------------------------------------------------------

def random_lines(rng, s_max=6):
    """Lines with small integer slopes and intercepts; concurrency and parallels happen."""
    s = rng.randint(2, s_max)
    pool = [(a, b) for a in range(-3, 4) for b in range(-3, 4)]
    return line_model(rng.sample(pool, s), name="random_lines")


def random_planes(rng, s_max=4, tries=50):
    """A random simple arrangement of 2..s_max planes in a box."""
    for _ in range(tries):
        s = rng.randint(2, s_max)
        planes = []
        for _ in range(s):
            normal = [0, 0, 0]
            while not any(normal):
                normal = [rng.randint(-2, 2) for _ in range(3)]
            planes.append((tuple(normal), rng.randint(-1, 1)))
        radius = Fraction(rng.choice([5, 7, 9]), 2)
        try:
            return plane_model(planes, radius, name="random_planes")
        except InvalidFixture:
            continue
    raise InvalidFixture("no simple arrangement found")


def random_bouquet(rng):
    return disk_bouquet(rng.randint(1, 4), rng.randint(1, 4))


def random_model(rng):
    kind = rng.choice(("lines", "lines", "planes", "bouquet"))
    if kind == "lines":
        return random_lines(rng)
    if kind == "planes":
        return random_planes(rng)
    return random_bouquet(rng)


def random_models(count, seed=0):
    rng = random.Random(seed)
    return [random_model(rng) for _ in range(count)]


# shipped corpus ------------------------------------------------------------

def corpus():
    """Name -> model for every shipped germ fixture."""
    out = {"two_lines": two_lines(), "concurrent_lines_3": concurrent_lines(3),
           "triple_planes": triple_planes(), "quadruple_planes": quadruple_planes(),
           "disk_bouquet_3_4": disk_bouquet(3, 4)}
    for s in range(2, 7):
        out[f"s_lines_{s}"] = s_lines(s)
    return out


def broken_boundary():
    """A complex whose boundary squares to a nonzero map in degree 2."""
    return {
        "cells": {"0": ["a", "b"], "1": ["e", "f"], "2": ["D"]},
        "boundary": {"1": [["e", [["b", 1], ["a", -1]]], ["f", [["b", 1], ["a", -1]]]],
                     "2": [["D", [["e", 1], ["f", 1]]]]},
    }


def write_corpus(directory):
    """Write every shipped fixture (and the cone unfolding models) as JSON files."""
    from pathlib import Path

    from .multipt import cone_unfolding

    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    written = []
    for name, g in corpus().items():
        (path / f"{name}.json").write_text(dumps(g))
        written.append(name)
    for s in range(2, 7):
        name = f"unfolding_s_lines_{s}"
        (path / f"{name}.json").write_text(dumps(cone_unfolding(s_lines(s))))
        written.append(name)
    (path / "broken_boundary.json").write_text(dumps(broken_boundary()))
    written.append("broken_boundary")
    return written


__all__ = [
    "line_model", "s_lines", "concurrent_lines", "two_lines", "plane_model",
    "triple_planes", "quadruple_planes", "disk_bouquet", "random_lines", "random_planes",
    "random_bouquet", "random_model", "sphere", "torus", "projective_plane", "klein_bottle",
    "simplicial", "random_simplicial", "random_models", "corpus", "broken_boundary", "write_corpus",
]
