import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import brute_cone_group, faces_smooth
from toricglue.lattice import determinant
from toricglue.toric import (
    Cone,
    DegenerateConeError,
    FanFormatError,
    classify_cone,
    classify_fan,
    cone_order,
    is_isolated,
    is_su_singularity,
    parse_fan,
    primitive,
    quotient_group,
)

C1 = Cone(((-1, 0, -1), (-1, -3, 1), (-1, 0, 0)), "C1")
C2 = Cone(((1, 3, -1), (-1, 0, -1), (-1, 0, 0)), "C2")
STD = Cone(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def fan_text(**kw):
    d = {"name": "t", "dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [2, 0]]}
    d.update(kw)
    return json.dumps(d)


def test_parse_example_fans(x1, x4):
    assert (x1.dim, len(x1.rays), len(x1.max_cones)) == (3, 8, 12)
    assert (x4.dim, len(x4.rays), len(x4.max_cones)) == (3, 6, 8)


def test_parse_reduces_rays_to_primitive():
    f = parse_fan(fan_text(rays=[[2, 0], [0, 3], [-1, -1]]))
    assert f.rays[:2] == ((1, 0), (0, 1))


@pytest.mark.parametrize(
    "kw, fragment",
    [
        ({"dim": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "max_cones": [[0, 1]]}, "non-simplicial or non-maximal cone"),
        ({"rays": [[1, 0], [2, 0], [0, 1]]}, "duplicate ray"),
        ({"rays": [[1, 0], [0, 1, 0], [-1, -1]]}, "rays[1]: dimension mismatch"),
        ({"max_cones": [[0, 5]]}, "max_cones[0]"),
        ({"colour": "red"}, "unknown key"),
        ({"rays": [[1, 0], [-1, 0], [0, 1]], "max_cones": [[0, 1]]}, "linearly dependent"),
        ({"scalar_curvature": "x"}, "scalar_curvature"),
    ],
)
def test_parse_errors_name_location(kw, fragment):
    with pytest.raises(FanFormatError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        parse_fan(fan_text(**kw))


def test_parse_syntax_error_has_line():
    with pytest.raises(FanFormatError, match="line 1"):
        parse_fan("{")


def test_optional_fields():
    f = parse_fan(fan_text(polytope_multiple=2, scalar_curvature="3/2"))
    assert f.polytope_multiple == 2 and f.scalar_curvature == F(3, 2)
    assert parse_fan(json.dumps(f.to_dict())) == f


def test_orders():
    assert cone_order(STD) == 1
    assert cone_order(C1) == 3 and cone_order(C2) == 3
    with pytest.raises(DegenerateConeError):
        Cone(((1, 0), (2, 0)))


def test_quotient_groups():
    assert quotient_group(STD).order == 1
    g = quotient_group(C1)
    assert g.structure == (3,)
    a1 = quotient_group(Cone(((1, 0), (1, 2))))
    assert a1.structure == (2,) and a1.generator_weights == ((F(1, 2), F(1, 2)),)


def test_isolated_examples():
    assert is_isolated(STD)
    assert is_isolated(Cone(((1, 0), (1, 2))))
    # Z/2 acting by -1 on all three coordinates: isolated after all
    assert is_isolated(Cone(((1, 0, 0), (0, 1, 0), (1, 1, 2))))
    # here the face <(0,1,0),(0,1,2)> is singular and the generator fixes a line
    assert not is_isolated(Cone(((1, 0, 0), (0, 1, 0), (0, 1, 2))))


def test_su_examples():
    assert is_su_singularity(C1) == (True, (1, 0, 0))
    assert is_su_singularity(C2) == (False, None)
    assert is_su_singularity(Cone(((-1, 0, 0), (0, -1, 0), (0, 0, -1)))) == (True, (1, 1, 1))


def test_classify_example_fans(x1, x4):
    reps = classify_fan(x1)
    assert [r.order for r in reps] == [3] * 12 and all(r.is_isolated for r in reps)
    assert {r.label for r in reps if r.is_SU} == {"C1", "C4", "C5", "C7", "C11", "C12"}
    assert {r.label for r in classify_fan(x4) if r.is_SU} == {"C1", "C4", "C7", "C8"}
    p2 = parse_fan(fan_text())
    assert all(r.is_smooth for r in classify_fan(p2))


vec = st.integers(-4, 4)


@st.composite
def cones(draw, m=None):
    m = m or draw(st.sampled_from([2, 3]))
    gens = draw(st.lists(st.lists(vec, min_size=m, max_size=m), min_size=m, max_size=m))
    assume(all(any(v) for v in gens))
    gens = [primitive(v) for v in gens]
    d = determinant(gens)
    assume(d != 0 and abs(d) <= 12)
    return Cone(tuple(gens))


@settings(max_examples=150, deadline=None)
@given(cones())
def test_group_matches_brute_force(c):
    g = quotient_group(c)
    assert g.order == cone_order(c)
    assert sorted(g.elements()) == brute_cone_group(c.generators)
    for w, d in zip(g.generator_weights, g.structure):
        assert all((x * d).denominator == 1 for x in w)


@settings(max_examples=150, deadline=None)
@given(cones())
def test_criteria_agree_with_oracles(c):
    # both functions raise InconsistencyError if their own two tests disagree
    su, u = is_su_singularity(c)
    elements = brute_cone_group(c.generators)
    assert su == all(sum(w).denominator == 1 for w in elements)
    if su:
        assert all(sum(a * b for a, b in zip(u, v)) == -1 for v in c.generators)
    assert is_isolated(c) == faces_smooth(c.generators)


@settings(max_examples=60, deadline=None)
@given(cones(), st.randoms())
def test_permuting_generators_keeps_report(c, rnd):
    gens = list(c.generators)
    rnd.shuffle(gens)
    a, b = classify_cone(c), classify_cone(Cone(tuple(gens)))
    assert (a.order, a.is_smooth, a.is_isolated, a.is_SU, a.gorenstein_functional) == (
        b.order, b.is_smooth, b.is_isolated, b.is_SU, b.gorenstein_functional)
