"""Acceptance criteria, one printed PASS/FAIL line per criterion.

Run under pytest (the lines are repeated in the terminal summary) or
directly with ``python3 tests/test_acceptance.py``.
"""
import json
import random
import sys
import time
from math import comb
from pathlib import Path

import numpy as np

from icsskit import _matrix as mx
from icsskit import icss
from icsskit.disent import analyze, fplus, same_homology, slots
from icsskit.equivar import AlternatingComplex, check_relations, power_complex
from icsskit.errors import NoWitness
from icsskit.fixtures import (
    corpus,
    projective_plane,
    random_models,
    random_simplicial,
    s_lines,
    simplicial,
    sphere,
    torus,
)
from icsskit.intlin import (
    AbelianGroup,
    available_backends,
    homology,
    is_unimodular,
    set_backend,
    smith_normal_form,
)
from icsskit.multipt import germ_from_json, image_complex, multiple_point_family

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
Z = AbelianGroup(1)
ZERO = AbelianGroup()


def _corpus():
    return corpus()


# 1 -------------------------------------------------------------------------

def check_quadruple_planes(record):
    g = _corpus()["quadruple_planes"]
    t = time.perf_counter()
    rep = analyze(g)
    elapsed = time.perf_counter() - t
    ok = (
        rep.s == 4 and rep.d == 3
        and same_homology(rep.homology, [Z, ZERO, Z])
        and sorted(rep.slots.dims) == [2]
        and rep.wedge.counts == {2: 1}
        and rep.passed
        and elapsed < 10
    )
    return record(1, "quadruple_planes: s=4, d=3, H=(Z,0,Z), slots {2}, one 2-sphere", ok,
                  f"{elapsed:.2f}s, wedge: {rep.wedge.describe()}")


# 2 -------------------------------------------------------------------------

def check_s_lines(record):
    bad = []
    worst = 0.0
    for s in range(2, 7):
        g = germ_from_json(json.loads((FIXTURES / f"s_lines_{s}.json").read_text()))
        t = time.perf_counter()
        rep = analyze(g)
        elapsed = time.perf_counter() - t
        worst = max(worst, elapsed)
        oracle = homology(image_complex(g))
        rank = (s - 1) * (s - 2) // 2
        expected = [Z, AbelianGroup(rank)]
        ok = (
            rep.d == 2
            and same_homology(rep.homology, expected)
            and same_homology(oracle, expected)
            and all(h.is_free for h in rep.homology)
            and sorted(rep.slots.dims) == [1]
            and (rank == 0 or rep.wedge.counts == {1: rank})
            and (rank > 0 or rep.wedge.counts == {})
            and elapsed < 10
        )
        if not ok:
            bad.append(s)
    return record(2, "s_lines_s for s=2..6: d=2, H_1 rank (s-1)(s-2)/2, slots {1}, wedge of circles",
                  not bad, f"slowest {worst:.2f}s" + (f", failing s={bad}" if bad else ""))


# 3 -------------------------------------------------------------------------

def check_bottom_row(record):
    bad = []
    for s in range(2, 7):
        G = germ_from_json(json.loads((FIXTURES / f"unfolding_s_lines_{s}.json").read_text()))
        fam = multiple_point_family(G)
        e1 = icss.d1_differential(fam, icss.e1_page(fam))
        ranks = [e1.group(r, 0).rank for r in range(s + 1)]
        want = [comb(s, r + 1) for r in range(s + 1)]
        row_free = all(e1.group(r, 0).is_free for r in range(s + 1))
        e2 = icss.turn_page(e1)
        row2 = {r: e2.group(r, 0) for r in range(s + 1) if not e2.group(r, 0).is_zero}
        if ranks != want or not row_free or row2 != {0: Z}:
            bad.append(s)
    return record(3, "unfolding models s=2..6: rank E1^{r,0} = C(s, r+1), bottom row exact but Z at r=0",
                  not bad, f"failing s={bad}" if bad else "")


# 4 -------------------------------------------------------------------------

def check_oracle_equivalence(record):
    t = time.perf_counter()
    models = list(_corpus().values())
    models += [germ_from_json(json.loads((FIXTURES / f"unfolding_s_lines_{s}.json").read_text()))
               for s in range(2, 7)]
    models += random_models(50, seed=2024)
    bad = []
    for g in models:
        run = icss.run(multiple_point_family(g))
        if not same_homology(run.homology, homology(image_complex(g))):
            bad.append(g.name)
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 300
    return record(4, f"ICSS abutment == image homology on {len(models)} models (shipped + 50 random)", ok,
                  f"{elapsed:.1f}s" + (f", mismatches {bad}" if bad else ""))


# 5 -------------------------------------------------------------------------

def check_dis_homology(record):
    bad = []
    for name, g in _corpus().items():
        hs = homology(image_complex(g))
        sl = slots(g.n, g.p, g.d, g.s)
        ok = (
            hs[0] == Z
            and all(h.is_free for h in hs)
            and all(h.is_zero or q in sl for q, h in enumerate(hs) if q >= 1)
        )
        if not ok:
            bad.append(name)
    return record(5, "every fixture: H_0 = Z, torsion-free, reduced homology inside the slots", not bad,
                  f"failing {bad}" if bad else "")


# 6 -------------------------------------------------------------------------

def check_fplus(record):
    bad = []
    audited = []
    for name, g in _corpus().items():
        if g.s <= g.d:
            _, audit = fplus(g)
            audited.append(name)
            if not audit["pass"]:
                bad.append(name)
    for s in range(3, 7):
        try:
            fplus(s_lines(s))
        except NoWitness:
            continue
        bad.append(f"s_lines_{s} (no NoWitness)")
    return record(6, "f+ audit passes where s <= d; NoWitness on s_lines with s > d", not bad,
                  f"audited {len(audited)}" + (f", failing {bad}" if bad else ""))


# 7 -------------------------------------------------------------------------

def _alternating_closed(E):
    """Each alternating basis column and its boundary are sign-alternating."""
    for method in ("orbit", "lattice"):
        alt = AlternatingComplex(E, method=method)
        for d in range(E.complex.dim + 1):
            B = alt.basis[d]
            chains = [B]
            if d >= 1:
                chains.append(mx.matmul(E.complex.boundary(d), B))
            for i in range(E.k - 1):
                for dd, C in zip((d, d - 1), chains):
                    G = E.generator_matrix(i, dd)
                    if not (mx.matmul(G, C) == -C).all():
                        return False
    return True


def _structural(E):
    E.complex.check()
    E.check()
    check_relations(E)
    return _alternating_closed(E)


def check_structure(record):
    count = 0
    bad = []
    models = list(_corpus().values())
    for g in models:
        fam = multiple_point_family(g)
        for k, E in fam.levels.items():
            if not _structural(E):
                bad.append(f"{g.name} D^{k}")
        icss.run(fam).e1.check_square_zero()
    rng = random.Random(7)
    for g in random_models(20, seed=99):
        fam = multiple_point_family(g)
        for k, E in fam.levels.items():
            if not _structural(E):
                bad.append(f"{g.name} D^{k}")
        icss.d1_differential(fam, icss.e1_page(fam)).check_square_zero()
        count += 1
    while count < 200:
        K = random_simplicial(rng, vertices=rng.randint(2, 5), facets=3, max_dim=rng.randint(0, 2))
        k = 2 if K.n_cells > 6 else rng.randint(2, 3)
        E = power_complex(K, k)
        if not _structural(E):
            bad.append(f"power complex {K.counts}^{k}")
        count += 1
    return record(7, "d^2=0, action commutes with d, S_k relations, alternating closure, d1^2=0 "
                     f"on all fixtures and {count} random complexes", not bad,
                  f"failing {bad[:5]}" if bad else "")


# 8 -------------------------------------------------------------------------

def check_intlin(record):
    rng = np.random.default_rng(8)
    bad = 0
    for backend in available_backends():
        prev = set_backend(backend)
        try:
            for _ in range(500):
                m, n = rng.integers(1, 7, size=2)
                M = rng.integers(-5, 6, size=(m, n)).astype(object)
                r = smith_normal_form(M)
                S = r.S
                diag = r.invariants
                ok = (
                    (mx.matmul(mx.matmul(r.U, M), r.V) == S).all()
                    and is_unimodular(r.U) and is_unimodular(r.V)
                    and all(d > 0 for d in diag)
                    and all(b % a == 0 for a, b in zip(diag, diag[1:]))
                    and all(S[i, j] == 0 for i in range(m) for j in range(n) if i != j)
                )
                bad += not ok
        finally:
            set_backend(prev)
    octahedron = simplicial([(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])
    torus7 = simplicial([(i % 7, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
                        + [(i % 7, (i + 2) % 7, (i + 3) % 7) for i in range(7)])
    classical = [
        (sphere(2), [Z, ZERO, Z]),
        (octahedron, [Z, ZERO, Z]),
        (torus(), [Z, AbelianGroup(2), Z]),
        (torus7, [Z, AbelianGroup(2), Z]),
        (projective_plane(), [Z, AbelianGroup(0, (2,)), ZERO]),
    ]
    wrong = [i for i, (K, want) in enumerate(classical) if homology(K) != want]
    return record(8, f"SNF U*M*V = S with unimodular U, V on 500 random matrices per backend "
                     f"{list(available_backends())}; sphere, torus, RP^2 homology exact",
                  bad == 0 and not wrong, f"{bad} bad SNFs, wrong classical models {wrong}")


CHECKS = [check_quadruple_planes, check_s_lines, check_bottom_row, check_oracle_equivalence,
          check_dis_homology, check_fplus, check_structure, check_intlin]


def test_criterion_1_quadruple_planes(criterion):
    assert check_quadruple_planes(criterion)


def test_criterion_2_s_lines(criterion):
    assert check_s_lines(criterion)


def test_criterion_3_bottom_row(criterion):
    assert check_bottom_row(criterion)


def test_criterion_4_oracle_equivalence(criterion):
    assert check_oracle_equivalence(criterion)


def test_criterion_5_dis_homology(criterion):
    assert check_dis_homology(criterion)


def test_criterion_6_fplus(criterion):
    assert check_fplus(criterion)


def test_criterion_7_structure(criterion):
    assert check_structure(criterion)


def test_criterion_8_intlin(criterion):
    assert check_intlin(criterion)


def _print_record(number, label, ok, detail=""):
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {label}" + (f" ({detail})" if detail else ""))
    return ok


if __name__ == "__main__":
    results = [check(_print_record) for check in CHECKS]
    sys.exit(0 if all(results) else 1)
