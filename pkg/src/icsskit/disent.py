"""Disentanglement analysis: slot checks on the image homology and the augmented map f+."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import icss
from .cellcx import disjoint_union, interval, mapping_cylinder_quotient
from .equivar import (
    alternating_homology,
    attach_equivariant_cone,
    mayer_vietoris_check,
)
from .errors import InvalidFixture, NoWitness, NotActionClosed, OracleMismatch
from .intlin import ZERO, AbelianGroup, format_groups, homology, relative_homology
from .multipt import (
    SEP,
    GermModel,
    branch_preimage,
    image_complex,
    inclusion_cells,
    multiple_point_family,
    unfolding_of,
    witness_point,
)


@dataclass(frozen=True)
class SlotSet:
    """Degrees where reduced homology of the disentanglement may live."""

    n: int
    p: int
    d: int
    s: int
    dims: frozenset

    def __contains__(self, q):
        return q in self.dims

    def to_json(self):
        return {"n": self.n, "p": self.p, "d": self.d, "s": self.s, "dims": sorted(self.dims)}

    def __str__(self):
        return "{" + ", ".join(str(q) for q in sorted(self.dims)) + "}"


def slots(n, p, d, s):
    """``{p - (p-n-1)k - 1 : 2 <= k <= d}``, plus ``d - 1`` when ``s > d``."""
    dims = {p - (p - n - 1) * k - 1 for k in range(2, d + 1)}
    if s > d and d >= 2:
        dims.add(d - 1)
    return SlotSet(n, p, d, s, frozenset(dims))


# wedges ----------------------------------------------------------------------

@dataclass(frozen=True)
class Wedge:
    """``spheres[q]`` spheres of dimension q; ``hypothesis`` records what certifies it."""

    spheres: tuple
    hypothesis: str

    @property
    def counts(self):
        return dict(self.spheres)

    def homology(self):
        top = max((q for q, _ in self.spheres), default=0)
        out = [AbelianGroup(1)] + [ZERO] * top
        for q, c in self.spheres:
            out[q] = AbelianGroup(c)
        return out

    def describe(self):
        if not self.spheres:
            return "a point (wedge of no spheres)"
        parts = []
        for q, c in self.spheres:
            noun = "circle" if q == 1 else f"{q}-sphere"
            parts.append(f"{c} {noun}{'' if c == 1 else 's'}")
        return "wedge of " + " and ".join(parts)

    def to_json(self):
        return {"spheres": {str(q): c for q, c in self.spheres}, "hypothesis": self.hypothesis,
                "description": self.describe()}


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    def describe(self):
        return f"inconclusive: {self.reason}"

    def to_json(self):
        return {"inconclusive": self.reason}


def _wedge_from(hs, hypothesis):
    return Wedge(tuple((q, g.rank) for q, g in enumerate(hs) if q >= 1 and g.rank), hypothesis)


def wedge_classify(hs, simply_connected):
    """Wedge description certified by homology plus the declared metadata, else Inconclusive."""
    hs = list(hs) or [ZERO]
    if any(g.torsion for g in hs):
        return Inconclusive("homology has torsion")
    if hs[0] != AbelianGroup(1):
        return Inconclusive(f"H_0 = {hs[0]}, the space is not connected")
    if simply_connected:
        return _wedge_from(hs, "declared simply connected; free homology")
    upper = [q for q, g in enumerate(hs) if q >= 2 and not g.is_zero]
    if not upper and len(hs) > 1 and hs[1].rank >= 1:
        return _wedge_from(hs, "reduced homology concentrated in degree 1 (wedge of circles case)")
    return Inconclusive("not declared simply connected and homology is not concentrated in degree 1")


# analysis ---------------------------------------------------------------------

def _pad(hs, n):
    return list(hs) + [ZERO] * (n - len(hs))


def _trim(hs):
    hs = list(hs)
    while len(hs) > 1 and hs[-1].is_zero:
        hs.pop()
    return hs


def same_homology(a, b):
    n = max(len(a), len(b))
    return _pad(a, n) == _pad(b, n)


@dataclass
class DisReport:
    name: str
    s: int
    d: int
    n: int
    p: int
    homology: list
    icss: object
    slots: SlotSet
    slot_check: dict
    freeness_check: dict
    connected_check: dict
    wedge: object = None
    fplus_audit: dict = None
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        checks = [self.slot_check, self.freeness_check, self.connected_check]
        if self.fplus_audit is not None:
            checks.append(self.fplus_audit)
        return all(c["pass"] for c in checks)

    def to_json(self):
        out = {
            "model": self.name,
            "s": self.s,
            "d": self.d,
            "n": self.n,
            "p": self.p,
            "homology": [g.to_json() for g in self.homology],
            "homology_text": format_groups(self.homology),
            "icss": self.icss.to_json(),
            "slots": self.slots.to_json(),
            "slot_check": self.slot_check,
            "freeness_check": self.freeness_check,
            "connected_check": self.connected_check,
            "wedge": self.wedge.to_json() if self.wedge is not None else None,
            "certifies": ["dis_homology"] + (["mainthm"] if self.s <= self.d else []),
            "notes": list(self.notes),
        }
        if self.fplus_audit is not None:
            out["fplus_audit"] = self.fplus_audit
        return out

    def text(self):
        mark = lambda c: "pass" if c["pass"] else "FAIL"
        lines = [
            f"model: {self.name or '(unnamed)'}",
            f"s(f) = {self.s}, d(f) = {self.d}, n = {self.n}, p = {self.p}",
            f"H_*(Y) = {format_groups(self.homology)}   (ICSS == oracle)",
            "E_1 page:",
            self.icss.e1.table(),
            "E_2 page:",
            self.icss.e2.table(),
            f"collapse certified at E_{self.icss.certificate.page}",
            f"slots (dis_homology): {self.slots}   check: {mark(self.slot_check)}",
            f"torsion-free: {mark(self.freeness_check)}",
            f"connected: {mark(self.connected_check)}",
        ]
        if self.wedge is not None:
            lines.append(f"homotopy type: {self.wedge.describe()}")
            if isinstance(self.wedge, Wedge):
                lines.append(f"  certified by: {self.wedge.hypothesis}")
        if self.fplus_audit is not None:
            lines.append(f"f+ audit (mainlemma): {mark(self.fplus_audit)}")
            for key in ("decomposition", "alternating_homology", "image_homology"):
                part = self.fplus_audit[key]
                lines.append(f"  {key}: {mark(part)}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def _oracle(g):
    return _trim(homology(image_complex(g)))


def _icss_leg(g, max_k):
    return icss.run(multiple_point_family(g, max_k))


def analyze(g, max_k=None, allow_disconnected=False, audit=True, parallel=True):
    """Oracle and ICSS homology of the image, cross-checked, plus the theorem checks."""
    if parallel:
        with ThreadPoolExecutor(max_workers=2) as pool:
            oracle_f = pool.submit(_oracle, g)
            icss_f = pool.submit(_icss_leg, g, max_k)
            hs, run = oracle_f.result(), icss_f.result()
    else:
        hs, run = _oracle(g), _icss_leg(g, max_k)
    if not same_homology(hs, run.homology):
        raise OracleMismatch(
            f"ICSS gives {format_groups(run.homology)} but the image has {format_groups(hs)}"
        )
    d = g.d
    sl = slots(g.n, g.p, d, g.s)
    connected = hs[0] == AbelianGroup(1)
    if not connected and not allow_disconnected:
        raise InvalidFixture(f"image is not connected (H_0 = {hs[0]}); not a germ at a single point")
    offending = [q for q, h in enumerate(hs) if q >= 1 and not h.is_zero and q not in sl]
    torsion = [q for q, h in enumerate(hs) if h.torsion]
    notes = []
    if g.s <= d:
        if not torsion and connected:
            wedge = _wedge_from(hs, "mainthm: s(f) <= d(f), with free homology from dis_homology")
        else:
            wedge = Inconclusive("homology is not free and connected")
    else:
        wedge = wedge_classify(hs, g.simply_connected)
        notes.append("s(f) > d(f): mainthm does not apply; no witness point for f+")
    report = DisReport(
        g.name, g.s, d, g.n, g.p, hs, run, sl,
        {"pass": not offending, "offending_degrees": offending},
        {"pass": not torsion, "torsion_degrees": torsion},
        {"pass": connected, "H0": hs[0].to_json()},
        wedge, None, notes,
    )
    if audit and g.s <= d:
        _, report.fplus_audit = fplus(g)
    return report


# the augmented map -------------------------------------------------------------

def _fresh(taken, base):
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def build_fplus(g, y):
    """``f+``: an interval from each ``x_j`` to a common origin, all mapped onto one edge at ``y``.

    New cells get ``~``-prefixed ids, which sort after ordinary ids, so the
    quotients keep ``y`` and each ``x_j``.  Returns the model, the preimages
    ``x_j``, the new branch 1-cells and the id of the merged origin.
    """
    taken = set(g.target.all_cells()) | set(g.branch_of)

    def fresh(base):
        name = _fresh(taken, base)
        taken.add(name)
        return name

    a0, alpha, tip = fresh("~a0"), fresh("~alpha"), fresh("~y")
    target = mapping_cylinder_quotient(disjoint_union([g.target, interval(a0, tip, alpha)]), [(y, tip)])
    branches, xs, edges, origins = [], [], [], []
    cell_map = dict(g.map)
    for j, U in enumerate(g.branches):
        x = branch_preimage(g, y, j)
        o, end, edge = fresh(f"~o{j + 1}"), fresh(f"~x{j + 1}"), fresh(f"~I{j + 1}")
        if x > end:
            raise InvalidFixture(f"preimage id {x!r} sorts after the new id {end!r}")
        branches.append(mapping_cylinder_quotient(disjoint_union([U, interval(o, end, edge)]), [(x, end)]))
        cell_map[o] = a0
        cell_map[edge] = alpha
        xs.append(x)
        edges.append(edge)
        origins.append(o)
    name = f"{g.name}+" if g.name else None
    plus = GermModel(branches, target, cell_map, g.n, g.p, simply_connected=g.simply_connected,
                     identify=[(origins[0], o) for o in origins[1:]], name=name)
    return plus, xs, edges, plus.rep.get(origins[0], origins[0])


def _cells_and_faces(K):
    return {c: (K.cell_dim(c), K.boundary_of(c)) for c in K.all_cells()}


def _action_table(E):
    return {(i, c): E.action.apply(i, c) for i in range(len(E.action.generators)) for c in E.complex.all_cells()}


def fplus(g, y=None):
    """Build ``f+`` at the witness point and audit the decomposition of its multiple point spaces.

    The audit has three parts: ``D^k(f+) = D^k(f) u V_k`` with ``V_k`` an equivariant
    cone meeting ``D^k(f)`` in the 0-cells ``P_k``; the alternating homology of
    ``D^k(f+)``; and ``H_*(Y+) = H_*(Y)``.
    """
    witness = witness_point(g)
    if witness is None:
        raise NoWitness(f"s(f) = {g.s} > d(f) = {g.d}: no point has preimages on every branch")
    y = y or witness
    plus, xs, edges, origin = build_fplus(g, y)
    rename = dict(zip(xs, edges))
    decomposition = {"pass": True, "levels": []}
    alt = {"pass": True, "levels": []}
    for k in range(2, g.d + 1):
        small = g.level(k)
        big = plus.level(k)
        entry = {"k": k}
        ok = True
        try:
            inclusion_cells(g, plus, k)
        except NotActionClosed as exc:
            entry["error"] = str(exc)
            ok = False
        new = [c for c in big.complex.all_cells() if not small.complex.has_cell(c)]
        new_zero = [c for c in new if big.complex.cell_dim(c) == 0]
        new_one = [c for c in new if big.complex.cell_dim(c) == 1]
        P = []
        if ok:
            ok = new_zero == [SEP.join([origin] * k)] and len(new_one) == len(new) - 1
        if ok:
            for e in new_one:
                faces = big.complex.boundary_of(e)
                base = [f for f in faces if f != new_zero[0]]
                if len(base) != 1 or faces != {base[0]: 1, new_zero[0]: -1}:
                    ok = False
                    break
                P.append(base[0])
        if ok:
            cone = attach_equivariant_cone(
                small, sorted(P, key=small.complex.index), apex=new_zero[0],
                edge_name=lambda p: SEP.join(rename[x] for x in p.split(SEP)),
            )
            ok = _cells_and_faces(cone.complex) == _cells_and_faces(big.complex) and \
                _action_table(cone) == _action_table(big)
            V = set(new) | set(P)
            vk = big.subcomplex(V)
            hv = alternating_homology(vk)
            entry["H_alt_V"] = format_groups(hv) if hv else "0"
            ok = ok and all(h.is_zero for h in hv)
            mv = mayer_vietoris_check(big, set(small.complex.all_cells()), V)
            entry["mayer_vietoris_exact"] = mv["exact"]
            ok = ok and mv["exact"]
        orbits = _orbit_count(small, P)
        entry.update({"P_k": len(P), "P_k_orbits": orbits, "pass": bool(ok)})
        decomposition["levels"].append(entry)
        decomposition["pass"] &= bool(ok)

        dim = small.complex.dim
        h_small = _pad(alternating_homology(small), max(dim, big.complex.dim) + 1)
        h_big = _pad(alternating_homology(big), max(dim, big.complex.dim) + 1)
        expected = []
        for q in range(len(h_big)):
            if q != dim:
                expected.append(ZERO)
            elif dim >= 1:
                expected.append(h_small[q])
            else:
                expected.append(AbelianGroup.from_factors(h_small[0].rank - orbits, h_small[0].torsion))
        good = h_big == expected
        alt["levels"].append({
            "k": k, "dim": dim, "H_alt_f": format_groups(h_small), "H_alt_fplus": format_groups(h_big),
            "expected": format_groups(expected), "pass": good,
        })
        alt["pass"] &= good
    h1 = _trim(homology(plus.source))
    source_ok = h1 == [AbelianGroup(1)]
    alt["source"] = {"H_fplus_source": format_groups(h1), "pass": source_ok}
    alt["pass"] &= source_ok
    hy = _oracle(g)
    hy_plus = _oracle(plus)
    run = icss.run(multiple_point_family(plus))
    image = {
        "H_Y": format_groups(hy),
        "H_Y_plus": format_groups(hy_plus),
        "icss_Y_plus": format_groups(run.homology),
        "pass": same_homology(hy, hy_plus) and same_homology(hy_plus, run.homology),
    }
    audit = {
        "witness": y,
        "preimages": xs,
        "decomposition": decomposition,
        "alternating_homology": alt,
        "image_homology": image,
        "pass": decomposition["pass"] and alt["pass"] and image["pass"],
        "certifies": "mainlemma",
    }
    return plus, audit


def _orbit_count(E, cells):
    cells = set(cells)
    seen = set()
    count = 0
    for c in sorted(cells):
        if c in seen:
            continue
        count += 1
        stack = [c]
        seen.add(c)
        while stack:
            x = stack.pop()
            for i in range(len(E.action.generators)):
                z, _ = E.action.apply(i, x)
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
    return count


def pair_report(g):
    """Relative ICSS of the unfolding pair against the relative image oracle."""
    G = unfolding_of(g)
    run = icss.run_pair(multiple_point_family(G), multiple_point_family(g))
    oracle = _trim(relative_homology(image_complex(G), image_complex(g)))
    return run, oracle
