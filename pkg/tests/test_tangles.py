"""
Tests des fractions continues, présentations et diagrammes synthétisés
"""

import math
from fractions import Fraction

import pytest

from src.core.states import checkerboard_states, is_checkerboard_state
from src.core.tangles import (
    ContinuedFraction,
    MontesinosPresentation,
    PretzelPresentation,
    WeightedPlanarGraph,
    build_graph_diagram,
    build_montesinos,
    build_pretzel,
    build_two_bridge,
    deform,
    deform_sub_slopes,
    deplumb_to_pretzel,
    fraction_of,
    normalize_montesinos,
    parse_presentation,
    pretzel_minor,
    rotate_slope,
    standard_cf,
    sum_slope,
    tait_graph,
    theta_graph,
    torus_form,
    two_bridge_fraction,
)
from src.utils.errors import InputError

THETA_TEXT = """
vertices 2
edge 0 1 3
edge 0 1 3
edge 0 1 3
rotation 0: 2 1 0
rotation 1: 0 1 2
"""


def test_fraction_of_reference_value():
    assert fraction_of(ContinuedFraction((3, 2, 4))) == Fraction(31, 7)
    assert standard_cf(Fraction(31, 7)).terms == (3, 2, 4)


def test_standard_cf_inverts_fraction_of():
    for numerator in range(-60, 61):
        for denominator in range(1, 61):
            if numerator == 0 or math.gcd(numerator, denominator) != 1:
                continue
            q = Fraction(numerator, denominator)
            cf = standard_cf(q)
            assert cf.is_standard
            assert fraction_of(cf) == q


def test_standard_cf_rejects_zero():
    with pytest.raises(InputError):
        standard_cf(Fraction(0))


def test_rotation_and_deformation():
    assert rotate_slope(Fraction(2, 3)) == Fraction(-3, 2)
    with pytest.raises(InputError):
        rotate_slope(Fraction(0))

    pair = (Fraction(-1, 2), Fraction(1, 3))
    assert deform(pair) == (Fraction(1, 2), Fraction(-2, 3))
    assert sum_slope(*deform(pair)) == sum_slope(*pair)
    assert deform_sub_slopes(pair) == (Fraction(-1), Fraction(1, 2))
    with pytest.raises(InputError):
        deform((Fraction(1, 2), Fraction(1, 3)))


def test_montesinos_parse_and_format():
    m = MontesinosPresentation.parse("M(1/3, 1/3; e=-1)")
    assert m.slopes == (Fraction(1, 3), Fraction(1, 3))
    assert m.framing == -1
    assert str(m) == "M(1/3,1/3;e=-1)"
    assert m.total == Fraction(-1, 3)
    assert str(MontesinosPresentation.parse("M(3/7,−1/2,1/3)")) == "M(3/7,-1/2,1/3)"


@pytest.mark.parametrize("text", ["M()", "M(1/0)", "M(0,1/3)", "N(1/3)", ""])
def test_montesinos_parse_errors(text):
    with pytest.raises(InputError):
        MontesinosPresentation.parse(text)


def test_reorder_is_dihedral():
    m = MontesinosPresentation.parse("M(-1/2,1/3,3/7)")
    assert str(m.reorder([0, 2, 1])) == "M(-1/2,3/7,1/3)"
    assert str(m.reorder([1, 2, 0])) == "M(1/3,3/7,-1/2)"
    four = MontesinosPresentation.parse("M(1/2,1/3,1/5,1/7)")
    with pytest.raises(InputError):
        four.reorder([0, 2, 1, 3])


@pytest.mark.parametrize("text, expected", [
    ("M(3/7,-1/2,1/3)", "M(-1/2,1/3,3/7)"),
    ("M(1/3,-3/4,1/3)", "M(-3/4,1/3,1/3)"),
    ("M(-1/2,1/3,1/5)", "M(-1/2,1/3,1/5)"),
    ("M(3/2,1/3,1/3)", "M(1/2,1/3,1/3;e=1)"),
])
def test_normalize_montesinos(text, expected):
    m = MontesinosPresentation.parse(text)
    normal = normalize_montesinos(m)
    assert str(normal) == expected
    assert normal.total == m.total
    assert normal.r_minus <= normal.r_plus
    assert not normal.mirrored


def test_normalize_passes_to_mirror():
    normal = normalize_montesinos(MontesinosPresentation.parse("M(1/2,-1/3,-1/3)"))
    assert normal.mirrored
    assert str(normal) == "M(-1/2,1/3,1/3)"
    assert torus_form(normal) == (3, -4)


def test_torus_forms():
    assert torus_form(normalize_montesinos(MontesinosPresentation.parse("M(-1/2,1/3,1/3)"))) == (3, 4)
    assert torus_form(normalize_montesinos(MontesinosPresentation.parse("M(-1/2,1/3,1/5)"))) == (3, 5)
    assert torus_form(normalize_montesinos(MontesinosPresentation.parse("M(-1/2,1/3,3/7)"))) is None


def test_deplumbing_to_pretzel_minor():
    normal = normalize_montesinos(MontesinosPresentation.parse("M(3/7,-1/2,1/3)"))
    assert deplumb_to_pretzel(normal) == PretzelPresentation((-2, 3, 3))
    assert pretzel_minor([Fraction(-3, 4), Fraction(1, 3), Fraction(1, 3)]).twists == (-2, 3, 3)
    with pytest.raises(InputError):
        deplumb_to_pretzel(MontesinosPresentation.parse("M(1/3,-1/2,1/3)"))


def test_two_bridge_fraction():
    assert two_bridge_fraction(MontesinosPresentation.parse("M(5)")) == (5, 1)
    assert two_bridge_fraction(MontesinosPresentation.parse("M(7/3)")) == (7, 3)
    assert two_bridge_fraction(MontesinosPresentation.parse("M(9/2)")) == (9, 2)
    assert two_bridge_fraction(MontesinosPresentation.parse("M(1/3,1/2)"))[0] == 5
    with pytest.raises(InputError):
        two_bridge_fraction(MontesinosPresentation.parse("M(1/2)"))
    with pytest.raises(InputError):
        two_bridge_fraction(MontesinosPresentation.parse("M(1/3,1/3,1/3)"))


def test_pretzel_presentation():
    p = parse_presentation("P(−4,3,3)")
    assert isinstance(p, PretzelPresentation)
    assert p.to_montesinos() == MontesinosPresentation.parse("M(-1/4,1/3,1/3)")
    assert str(p.mirror()) == "P(4,-3,-3)"
    with pytest.raises(InputError):
        PretzelPresentation.parse("P(2,0,3)")
    with pytest.raises(InputError):
        parse_presentation("Q(1,2)")


def test_built_two_bridge_diagrams():
    assert build_two_bridge(MontesinosPresentation.parse("M(7/3)")).diagram.size == 5
    assert build_two_bridge(MontesinosPresentation.parse("M(9/2)")).diagram.size == 6


def test_built_pretzel_diagram():
    built = build_pretzel(PretzelPresentation((-2, 3, 3)))
    d = built.diagram
    assert d.size == 8
    assert d.is_knot
    assert str(built.poles_state) == "++------"
    assert str(built.infinity_state) == "--++++++"
    assert built.tangle_crossings(0) == [0, 1]
    assert is_checkerboard_state(d, built.poles_state)


def test_built_montesinos_diagram():
    built = build_montesinos(MontesinosPresentation.parse("M(3/7,-1/2,1/3)"))
    assert built.diagram.size == 10
    assert built.diagram.is_knot
    assert len(built.bottom_vertical(0)) + len(built.inner_crossings(0)) == 5


def test_weighted_graph_text_format():
    g = WeightedPlanarGraph.parse(THETA_TEXT)
    assert g == theta_graph((3, 3, 3))
    assert g.face_count == 3
    assert g.is_two_connected
    assert g.parallel_edges(0) == [1, 2]
    assert WeightedPlanarGraph.parse(g.to_text()) == g


@pytest.mark.parametrize("text", [
    "edge 0 1 3",
    "vertices 2\nedge 0 1 0\nrotation 0: 0\nrotation 1: 0",
    "vertices 2\nedge 0 0 3\nrotation 0: 0\nrotation 1:",
    "vertices 2\nedge 0 1 3\nedge 0 1 3\nrotation 0: 0 1\nrotation 1: 0",
    "vertices 2\nedge 0 1 3\nedge 0 1 3\nedge 0 1 3\nrotation 0: 0 1 2\nrotation 1: 0 1 2",
    "vertices 2\nsommet 0",
])
def test_weighted_graph_rejects_invalid_input(text):
    with pytest.raises(InputError):
        WeightedPlanarGraph.parse(text)


def test_path_graph_is_not_two_connected():
    g = WeightedPlanarGraph(vertex_count=3, edges=((0, 1, 3), (1, 2, 3)), rotation=((0,), (0, 1), (1,)))
    assert not g.is_two_connected
    with pytest.raises(InputError):
        build_graph_diagram(g)


def test_graph_diagram_of_theta_graph():
    built = build_graph_diagram(theta_graph((-4, 3, 3)))
    assert built.diagram.size == 10
    assert built.diagram.is_knot


def test_tait_graph_of_figure_eight(figure_eight):
    """Les deux graphes de damier du 8 deviennent des graphes thêta"""
    for s in checkerboard_states(figure_eight):
        g = tait_graph(figure_eight, s)
        assert g.vertex_count == 2
        assert sum(abs(w) for _, _, w in g.edges) == 4
        assert sorted(abs(w) for _, _, w in g.edges) == [1, 1, 2]
