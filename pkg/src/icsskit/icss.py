"""The image-computing spectral sequence.

Indexing is homological: ``E_1^{r,q} = H^alt_q(D^{r+1})`` and
``d_m: E_m^{r,q} -> E_m^{r-m, q+m-1}``.  ``d_1`` is the pushforward of
alternating cycles along the map forgetting the last point.  Higher
differentials are never computed; collapse is certified from positions alone.
"""
from dataclasses import dataclass, field

from . import _matrix as mx
from .equivar import AlternatingComplex
from .errors import (
    ExtensionProblemUnresolved,
    HigherDifferentialUnknown,
    NonFreeDifferentialDomain,
)
from .intlin import ZERO, AbelianGroup, ChainComplex, HomologyBasis, homology
from .multipt import inclusion_cells


@dataclass
class SpectralPage:
    """Page ``E_m``: nonzero groups by ``(r, q)`` and, when known, the ``d_m`` matrices."""

    m: int
    groups: dict
    differentials: dict = field(default_factory=dict)
    _context: dict = field(default=None, repr=False, compare=False)

    def group(self, r, q):
        return self.groups.get((r, q), ZERO)

    def nonzero(self):
        return sorted(pos for pos, g in self.groups.items() if not g.is_zero)

    @property
    def r_max(self):
        return max((r for r, _ in self.nonzero()), default=-1)

    @property
    def q_max(self):
        return max((q for _, q in self.nonzero()), default=-1)

    def target(self, r, q, m=None):
        m = self.m if m is None else m
        return r - m, q + m - 1

    def check_square_zero(self):
        for (r, q), D in self.differentials.items():
            nxt = self.differentials.get(self.target(r, q))
            if nxt is not None and D.shape[0] and not mx.is_zero(mx.matmul(nxt, D)):
                raise AssertionError(f"d_{self.m} o d_{self.m} is nonzero at ({r}, {q})")
        return True

    def to_json(self):
        return {
            "page": self.m,
            "groups": [{"r": r, "q": q, "group": self.group(r, q).to_json()} for r, q in self.nonzero()],
            "differentials": [
                {"r": r, "q": q, "to": list(self.target(r, q)), "matrix": mx.to_rows(D)}
                for (r, q), D in sorted(self.differentials.items())
                if D.size and not mx.is_zero(D)
            ],
        }

    def table(self):
        """Rows q = q_max..0 of the page as text."""
        if not self.nonzero():
            return "(zero page)"
        cols = range(self.r_max + 1)
        width = max(len(str(self.group(r, q))) for r in cols for q in range(self.q_max + 1))
        lines = []
        for q in range(self.q_max, -1, -1):
            lines.append(f"q={q} | " + "  ".join(str(self.group(r, q)).rjust(width) for r in cols))
        lines.append("      " + "  ".join(f"r={r}".rjust(width) for r in cols))
        return "\n".join(lines)


@dataclass
class CollapseCertificate:
    """Every ``d_m`` with ``m >= page`` has zero source or zero target."""

    page: int
    reason: list

    def to_json(self):
        return {"page": self.page, "reason": [list(entry) for entry in self.reason]}


def _level_data(E, rel_cells=None):
    alt = AlternatingComplex(E, relative_to=rel_cells or ())
    C = alt.chain_complex()
    bases = {q: HomologyBasis(C, q) for q in range(len(C.sizes))}
    return alt, bases


def _page_from_levels(levels, epsilon, rel=None):
    groups = {}
    context = {"alt": {}, "bases": {}, "epsilon": epsilon}
    for k, E in sorted(levels.items()):
        r = k - 1
        alt, bases = _level_data(E, rel.get(k) if rel else None)
        context["alt"][r] = alt
        context["bases"][r] = bases
        for q, B in bases.items():
            if not B.group.is_zero:
                groups[(r, q)] = B.group
    return SpectralPage(1, groups, _context=context)


def e1_page(fam):
    """``E_1^{r,q} = H^alt_q(D^{r+1})``; empty levels contribute nothing."""
    return _page_from_levels(fam.levels, fam.epsilon)


def e1_pair_page(fam_F, fam_f):
    """``E_1^{r,q} = H^alt_q(D^{r+1}(F), D^{r+1}(f))`` with ``D(f)`` included by cell id."""
    top = max(fam_F.top, fam_f.top)
    if fam_F.top < top:
        raise ValueError("the ambient family must reach every level of the subfamily")
    rel = {}
    for k in fam_F.levels:
        if k in fam_f.levels:
            rel[k] = inclusion_cells(fam_f.model, fam_F.model, k)
    return _page_from_levels(fam_F.levels, fam_F.epsilon, rel)


def d1_differential(fam, page):
    """Fill ``page.differentials`` with ``d_1`` on free generators and check ``d_1^2 = 0``."""
    ctx = page._context
    if ctx is None:
        raise ValueError("d_1 needs an E_1 page built by e1_page or e1_pair_page")
    eps = ctx["epsilon"]
    diffs = {}
    for (r, q), src in sorted(page.groups.items()):
        if r == 0:
            continue
        tgt = page.group(r - 1, q)
        if tgt.is_zero:
            continue
        if not (src.is_free and tgt.is_free):
            raise NonFreeDifferentialDomain(f"d_1 from ({r}, {q}) involves torsion: {src} -> {tgt}")
        Bs = ctx["bases"][r][q]
        Bt = ctx["bases"][r - 1][q]
        alt_s = ctx["alt"][r]
        alt_t = ctx["alt"][r - 1]
        chains = mx.matmul(alt_s.basis[q], Bs.free_generators)
        pushed = eps[r].push(q, chains)
        diffs[(r, q)] = Bt.coordinates(alt_t.coordinates(q, pushed))
    page.differentials = diffs
    page.check_square_zero()
    return page


def _position_homology(page, r, q):
    """Homology of ``E^{r+1,q} -> E^{r,q} -> E^{r-1,q}`` at the middle."""
    g = page.group(r, q)
    din = page.differentials.get((r + 1, q))
    dout = page.differentials.get((r, q))
    if din is None and dout is None:
        return g
    n = g.rank
    a = page.group(r - 1, q).rank
    b = page.group(r + 1, q).rank
    mats = {1: dout if dout is not None else mx.zeros(a, n), 2: din if din is not None else mx.zeros(n, b)}
    return homology(ChainComplex((a, n, b), mats))[1]


def turn_page(page):
    """``E_{m+1}`` from ``E_m``: homology for ``m = 1``, positional collapse otherwise."""
    if page.m == 1:
        groups = {}
        rows = {q for _, q in page.nonzero()}
        for q in rows:
            for r in range(page.r_max + 1):
                h = _position_homology(page, r, q)
                if not h.is_zero:
                    groups[(r, q)] = h
        return SpectralPage(2, groups)
    blocked = _blocked(page, page.m)
    if blocked:
        r, q, t = blocked[0]
        raise HigherDifferentialUnknown(
            f"d_{page.m} from ({r}, {q}) to {t} has nonzero source and target; it is not computed"
        )
    return SpectralPage(page.m + 1, dict(page.groups))


def _blocked(page, m):
    out = []
    for r, q in page.nonzero():
        t = page.target(r, q, m)
        if t[0] >= 0 and not page.group(*t).is_zero:
            out.append((r, q, t))
    return out


def certify_collapse(page):
    """Certify ``E_page = E_infinity`` positionally or raise ``HigherDifferentialUnknown``."""
    if page.m < 2:
        raise ValueError("collapse is certified from E_2 on; turn the E_1 page first")
    reason = []
    top = page.r_max
    for m in range(page.m, max(top, page.m) + 1):
        blocked = _blocked(page, m)
        if blocked:
            r, q, t = blocked[0]
            raise HigherDifferentialUnknown(
                f"d_{m} from ({r}, {q}) to {t} may be nonzero: both groups are nonzero on E_{page.m}"
            )
        for r, q in page.nonzero():
            t = page.target(r, q, m)
            reason.append((m, r, q, "zero target" if t[0] >= 0 else "target off the page"))
    return CollapseCertificate(page.m, reason)


def abutment(page, cert, strict=True):
    """``H_n = sum_{r+q=n} E_inf^{r,q}``.

    With torsion in ``E_inf``, ``strict`` refuses outright.  Otherwise a
    diagonal with a single nonzero group is assembled (there is nothing to
    extend) and only mixed diagonals are refused.
    """
    if cert.page != page.m:
        raise ValueError(f"certificate is for E_{cert.page}, page is E_{page.m}")
    diag = {}
    for (r, q) in page.nonzero():
        diag.setdefault(r + q, []).append(page.group(r, q))
    top = max(diag, default=0)
    out = []
    for n in range(top + 1):
        gs = diag.get(n, [])
        if any(g.torsion for g in gs):
            if strict or len(gs) > 1:
                raise ExtensionProblemUnresolved(
                    f"E_inf has torsion on the diagonal r + q = {n}: {', '.join(str(g) for g in gs)}"
                )
            out.append(gs[0])
            continue
        out.append(AbelianGroup(sum(g.rank for g in gs)))
    return out


@dataclass
class IcssRun:
    e1: SpectralPage
    e2: SpectralPage
    certificate: CollapseCertificate
    homology: list

    def to_json(self):
        return {
            "E1": self.e1.to_json(),
            "E2": self.e2.to_json(),
            "collapse": self.certificate.to_json(),
            "abutment": [g.to_json() for g in self.homology],
        }


def run(fam, strict=True):
    """Full pipeline for one family: pages up to E_2, then collapse and abutment."""
    e1 = d1_differential(fam, e1_page(fam))
    e2 = turn_page(e1)
    cert = certify_collapse(e2)
    return IcssRun(e1, e2, cert, abutment(e2, cert, strict))


def run_pair(fam_F, fam_f, strict=True):
    e1 = d1_differential(fam_F, e1_pair_page(fam_F, fam_f))
    e2 = turn_page(e1)
    cert = certify_collapse(e2)
    return IcssRun(e1, e2, cert, abutment(e2, cert, strict))


def page_from_json(data):
    """Rebuild a page (groups and differentials) from ``SpectralPage.to_json`` output."""
    groups = {(g["r"], g["q"]): AbelianGroup.from_json(g["group"]) for g in data["groups"]}
    page = SpectralPage(int(data["page"]), groups)
    for entry in data.get("differentials", []):
        r, q = entry["r"], entry["q"]
        t = page.target(r, q)
        page.differentials[(r, q)] = mx.as_matrix(entry["matrix"], (page.group(*t).rank, page.group(r, q).rank))
    return page
