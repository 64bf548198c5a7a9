import json

import pytest

from icsskit.disent import (
    Inconclusive,
    Wedge,
    analyze,
    build_fplus,
    fplus,
    same_homology,
    slots,
    wedge_classify,
)
from icsskit.errors import InvalidFixture, NoWitness
from icsskit.fixtures import line_model, s_lines, two_lines
from icsskit.intlin import AbelianGroup, homology
from icsskit.multipt import image_complex

from conftest import shipped

Z = AbelianGroup(1)
ZERO = AbelianGroup()


@pytest.mark.parametrize("args, dims", [
    ((1, 2, 2, 2), {1}),
    ((1, 2, 2, 5), {1}),
    ((2, 3, 3, 3), {2}),
    ((2, 3, 3, 4), {2}),
    ((1, 2, 3, 6), {1, 2}),
    ((1, 3, 2, 2), {0}),
    ((2, 4, 3, 3), {1, 0}),
    ((1, 2, 1, 1), set()),
])
def test_slot_sets(args, dims):
    assert set(slots(*args).dims) == dims


def test_slot_set_rendering():
    sl = slots(2, 3, 3, 4)
    assert str(sl) == "{2}"
    assert 2 in sl and 1 not in sl
    assert sl.to_json()["dims"] == [2]


def test_wedge_classification():
    w = wedge_classify([Z, ZERO, AbelianGroup(2)], simply_connected=True)
    assert isinstance(w, Wedge) and w.counts == {2: 2}
    assert w.describe() == "wedge of 2 2-spheres"
    assert w.homology() == [Z, ZERO, AbelianGroup(2)]
    circles = wedge_classify([Z, AbelianGroup(3)], simply_connected=None)
    assert circles.counts == {1: 3}
    assert circles.describe() == "wedge of 3 circles"
    assert isinstance(wedge_classify([Z, ZERO, Z], simply_connected=False), Inconclusive)
    assert isinstance(wedge_classify([Z, AbelianGroup(0, (2,))], simply_connected=True), Inconclusive)
    assert isinstance(wedge_classify([AbelianGroup(2)], simply_connected=True), Inconclusive)
    assert wedge_classify([Z], simply_connected=True).describe() == "a point (wedge of no spheres)"


def test_same_homology_pads_zeros():
    assert same_homology([Z], [Z, ZERO, ZERO])
    assert not same_homology([Z], [Z, Z])


@pytest.mark.parametrize("name", sorted(shipped()))
def test_analyze_every_fixture(name):
    g = shipped()[name]
    rep = analyze(g)
    assert rep.passed
    assert same_homology(rep.homology, homology(image_complex(g)))
    assert isinstance(rep.wedge, Wedge)
    assert same_homology(rep.wedge.homology(), rep.homology)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["s"] == g.s and data["d"] == g.d
    assert ("fplus_audit" in data) == (g.s <= g.d)
    assert "mainthm" in data["certifies"] or g.s > g.d
    assert "H_*(Y)" in rep.text()


def test_analyze_serial_and_parallel_agree():
    g = s_lines(4)
    a = analyze(g, parallel=True, audit=False)
    b = analyze(g, parallel=False, audit=False)
    assert a.to_json() == b.to_json()


def test_disconnected_image_is_rejected():
    g = line_model([(0, 0), (0, 1)], name="parallel")
    with pytest.raises(InvalidFixture):
        analyze(g)
    rep = analyze(g, allow_disconnected=True)
    assert not rep.connected_check["pass"]
    assert not rep.passed


def test_fplus_of_two_lines():
    g = two_lines()
    plus, audit = fplus(g)
    assert audit["witness"] == "v"
    assert audit["pass"]
    assert homology(plus.source)[0] == Z
    # the new target edge hangs off the witness point
    assert homology(image_complex(plus)) == homology(image_complex(g))
    level = audit["decomposition"]["levels"][0]
    assert level["P_k"] == 2 and level["P_k_orbits"] == 1


def test_fplus_dimension_zero_rank_drop():
    g = two_lines()
    _, audit = fplus(g)
    entry = audit["alternating_homology"]["levels"][0]
    # D^2 is two points forming one orbit; attaching the cone kills that class
    assert entry["H_alt_f"] == "(ℤ)" and entry["H_alt_fplus"] == "(0)"


@pytest.mark.parametrize("s", range(3, 7))
def test_fplus_needs_a_witness(s):
    with pytest.raises(NoWitness):
        fplus(s_lines(s))


def test_build_fplus_names():
    g = shipped()["disk_bouquet_3_4"]
    y = "c0"
    plus, xs, edges, origin = build_fplus(g, y)
    assert len(xs) == len(edges) == g.s
    assert plus.s == g.s
    assert all(plus.map[x] == y for x in xs)
    assert plus.target.has_cell("~alpha")
