import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import scipy_centroid
from toricglue.moment import (
    NotFanoError,
    anticanonical_polytope,
    barycenter,
    cone_vertex_correspondence,
    default_multiple,
    facet_cycle,
    potentials_at_points,
    volume,
)
from conftest import FANS
from toricglue.toric import load_fan, parse_fan

X1_VERTICES = {(3, 0, 0), (3, -3, -3), (0, 0, 3), (-3, 3, 3), (-3, 0, 0), (0, 0, -3)}
X4_LISTED = [(-5, -2, 1), (5, -1, -2), (-5, -3, 9), (5, 6, -8)]


def fan(rays, cones, **kw):
    return parse_fan(json.dumps({"name": "t", "dim": len(rays[0]), "rays": rays, "max_cones": cones, **kw}))


P1 = fan([[1], [-1]], [[0], [1]])
P2 = fan([[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [2, 0]])
SQUARE = fan([[1, 0], [0, 1], [-1, 0], [0, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]])
X1 = load_fan(FANS / "X1.json")
# P1 x P1 x P1: the cube [-1,1]^3
CUBE = fan(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
    [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)],
)


def test_x1_polytope(x1):
    p = anticanonical_polytope(x1, 3)
    assert len(p.vertices) == 12
    assert X1_VERTICES <= set(p.vertices)
    corr = cone_vertex_correspondence(p)
    assert corr["C1"] == (3, 0, 0) and corr["C12"] == (0, 0, -3)


def test_x4_polytope_contains_listed_points(x4):
    p = anticanonical_polytope(x4, 5)
    assert len(p.vertices) == 8
    assert set(X4_LISTED) <= set(p.vertices)


def test_p1_interval():
    p = anticanonical_polytope(P1, 1)
    assert sorted(p.vertices) == [(-1,), (1,)]
    assert cone_vertex_correspondence(p)["C1"] == (-1,)


def test_vertices_satisfy_inequalities(x1, x4):
    for f in (x1, x4, P2, CUBE):
        p = anticanonical_polytope(f)
        for lab, idx in zip(p.cone_labels, p.cone_rays):
            slack = p.inequality_values(p.vertex_of(lab))
            assert all(x >= 0 for x in slack)
            assert all(slack[i] == 0 for i in idx)


def test_default_multiple(x1, x4):
    assert default_multiple(P2) == 1
    # the example fans carry their multiple explicitly; without it the search lands on
    # the smallest integral choice
    assert default_multiple(fan([list(r) for r in x1.rays], [list(c) for c in x1.max_cones])) == 3
    assert default_multiple(fan([list(r) for r in x4.rays], [list(c) for c in x4.max_cones])) == 5


def test_non_fano_vertex_reported():
    # a fan of the Hirzebruch surface F_3 is not Fano
    f3 = fan([[1, 0], [0, 1], [-1, 3], [0, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]])
    with pytest.raises(NotFanoError, match="violates"):
        anticanonical_polytope(f3, 1)


def test_barycenters(x1):
    assert barycenter(anticanonical_polytope(SQUARE, 1)) == (0, 0)
    assert barycenter(anticanonical_polytope(P2, 1)) == (0, 0)
    assert barycenter(anticanonical_polytope(x1, 3)) == (0, 0, 0)
    assert volume(anticanonical_polytope(CUBE, 1)) == 8


def test_barycenter_agrees_with_scipy(x1, x4):
    for f in (x1, x4, P2):
        p = anticanonical_polytope(f)
        c, v = scipy_centroid(p.vertices)
        assert float(volume(p)) == pytest.approx(v, rel=1e-9)
        assert [float(x) for x in barycenter(p)] == pytest.approx(list(c), abs=1e-9)


def test_facet_cycles_close(x1):
    p = anticanonical_polytope(x1, 3)
    for ray in range(len(p.rays)):
        cyc = facet_cycle(p, ray)
        assert len(set(cyc)) == len(cyc) >= 3


small = st.fractions(-3, 3, max_denominator=4)


@settings(max_examples=40, deadline=None)
@given(st.tuples(small, small, small))
def test_translation_moves_barycenter(t):
    p = anticanonical_polytope(X1)
    q = p.translate(t)
    assert barycenter(q) == tuple(a + b for a, b in zip(barycenter(p), t))
    assert volume(q) == volume(p)


def test_apex_choice_does_not_matter(x4):
    p = anticanonical_polytope(x4)
    assert barycenter(p, (0, 0, 0)) == barycenter(p, (F(1, 3), F(-1, 2), F(1, 5))) == barycenter(p)


def test_potential_tables(x1, x4):
    p = anticanonical_polytope(x1, 3)
    su = ["C1", "C4", "C5", "C7", "C11", "C12"]
    t = potentials_at_points(p, su)
    assert [tuple(col) for col in zip(*t.values)] == [p.vertex_of(l) for l in su]
    full = potentials_at_points(p, list(p.cone_labels))
    assert all(sum(row) == 0 for row in full.values)
    q = anticanonical_polytope(x4, 5)
    t4 = potentials_at_points(q, ["C1", "C4", "C7", "C8"])
    assert all(sum(row) == 0 for row in t4.values)
    with pytest.raises(KeyError):
        potentials_at_points(p, ["C99"])
