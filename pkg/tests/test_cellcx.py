import json

import pytest

from icsskit.cellcx import (
    CellMap,
    build_complex,
    closure,
    cone,
    disjoint_union,
    dumps,
    from_faces,
    interval,
    mapping_cylinder_quotient,
    point,
    product,
    relabel,
    subcomplex,
)
from icsskit.errors import (
    BoundarySquareNonzero,
    CellLimitExceeded,
    DanglingCellReference,
    MalformedInput,
    NotAChainMap,
    NotClosedUnderBoundary,
)
from icsskit.fixtures import broken_boundary, simplicial, sphere
from icsskit.intlin import AbelianGroup, homology

Z = AbelianGroup(1)
ZERO = AbelianGroup()


def test_interval_and_counts():
    I = interval()
    assert I.counts == (2, 1)
    assert I.boundary_of("e") == {"v1": 1, "v0": -1}
    assert homology(I) == [Z, ZERO]
    assert I.euler_characteristic() == 1


def test_json_round_trip_is_byte_stable():
    K = simplicial([(0, 1, 2), (2, 3)])
    text = dumps(K)
    again = build_complex(json.loads(text))
    assert again == K
    assert dumps(again) == text


def test_build_complex_rejects_bad_input():
    with pytest.raises(BoundarySquareNonzero, match="degree 2"):
        build_complex(broken_boundary())
    with pytest.raises(DanglingCellReference):
        build_complex({"cells": {"0": ["a"], "1": ["e"]}, "boundary": {"1": [["e", [["b", 1]]]]}})
    with pytest.raises(MalformedInput):
        build_complex({"cells": {"0": ["a", "a"]}})
    with pytest.raises(MalformedInput):
        build_complex([1, 2])


def test_face_dimension_is_checked():
    with pytest.raises(DanglingCellReference):
        from_faces([["a"], ["e"], ["F"]], {"F": {"a": 1}})


def test_product_of_circles_is_torus():
    T = product(sphere(1), sphere(1))
    assert T.counts == (1, 2, 1)
    assert homology(T) == [Z, AbelianGroup(2), Z]


def test_product_of_intervals_is_square():
    Q = product(interval(), interval("w0", "w1", "f"))
    assert Q.counts == (4, 4, 1)
    assert homology(Q) == [Z, ZERO, ZERO]


def test_subcomplex_and_closure():
    K = simplicial([(0, 1, 2)])
    cells = closure(K, ["0|1"])
    assert cells == {"0", "1", "0|1"}
    S = subcomplex(K, cells)
    assert S.counts == (2, 1)
    with pytest.raises(NotClosedUnderBoundary):
        subcomplex(K, {"0|1"})


def test_quotient_identifies_vertices():
    I = interval("a", "b", "e")
    Q = mapping_cylinder_quotient(I, [("a", "b")])
    assert Q.counts == (1, 1)
    assert homology(Q) == [Z, Z]


def test_disjoint_union_and_relabel():
    U = disjoint_union([point("p"), relabel(interval(), lambda c: "x" + c)])
    assert U.counts == (3, 1)
    assert homology(U) == [AbelianGroup(2), ZERO]


def test_cone_is_contractible():
    C = cone(sphere(1), "o", lambda c: f"c[{c}]")
    assert homology(C) == [Z, ZERO, ZERO]
    with pytest.raises(MalformedInput):
        cone(from_faces([["a"], ["e"]], {"e": {"a": 1}}, check=False), "o", lambda c: "c" + c)


def test_cell_map_checks_chain_condition():
    I = interval("a", "b", "e")
    P = point("p")
    collapse = CellMap.from_assignment(I, P, {"a": "p", "b": "p", "e": "p"})
    assert collapse.matrix(1).shape == (0, 1)
    with pytest.raises(NotAChainMap):
        CellMap(I, I, {0: [[1, 0], [0, 1]], 1: [[2]]})


def test_cell_budget(monkeypatch):
    monkeypatch.setenv("ICSSKIT_MAX_CELLS", "10")
    with pytest.raises(CellLimitExceeded):
        product(simplicial([(0, 1, 2)]), simplicial([(0, 1, 2)]))
    monkeypatch.setenv("ICSSKIT_MAX_CELLS", "ten")
    with pytest.raises(MalformedInput):
        product(point(), point())


def test_equality_is_order_sensitive():
    a = from_faces([["x", "y"]], {})
    b = from_faces([["y", "x"]], {})
    assert a != b
