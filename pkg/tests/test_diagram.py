"""
Tests du lecteur de codes PD et des opérations sur les diagrammes
"""

import pytest

from src.core.diagram import (
    Diagram,
    is_alternating,
    is_prime,
    is_reduced,
    mirror,
    parse_pd,
    reidemeister_three,
    seifert_state,
)
from src.utils.errors import InputError
from tests.conftest import FIGURE_EIGHT_PD, TREFOIL_PD


def test_trefoil_structure(trefoil):
    """Le trèfle de table: trois croisements négatifs, alterné, réduit, premier"""
    assert trefoil.size == 3
    assert trefoil.is_knot
    assert trefoil.signs == (-1, -1, -1)
    assert trefoil.writhe == -3
    assert len(trefoil.faces) == 5
    assert is_alternating(trefoil)
    assert is_reduced(trefoil)
    assert is_prime(trefoil)


def test_figure_eight_signs(figure_eight):
    assert figure_eight.signs == (-1, -1, 1, 1)
    assert figure_eight.writhe == 0
    assert str(seifert_state(figure_eight)) == "--++"
    assert is_alternating(figure_eight)


def test_kink_is_not_reduced(kink):
    """Une boucle: trois faces dont une touche deux fois le croisement"""
    assert kink.size == 1
    assert len(kink.faces) == 3
    assert not is_reduced(kink)


def test_mirror_flips_signs(trefoil):
    right = mirror(trefoil)
    assert right.signs == (1, 1, 1)
    assert right.size == 3
    assert mirror(right).signs == trefoil.signs


def test_to_pd_is_reparsed_identically(figure_eight):
    again = parse_pd(figure_eight.to_pd())
    assert again == figure_eight
    assert again.signs == figure_eight.signs


def test_parse_accepts_bracket_lists():
    d = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]")
    assert d.to_pd() == TREFOIL_PD


@pytest.mark.parametrize("text", [
    "",
    "   ",
    "X(1,2,3)",
    "X(1,1,1,2)",
    "X(1,4,2,5) X(3,6,4,1) bonjour",
])
def test_parse_rejects_malformed_codes(text):
    with pytest.raises(InputError):
        parse_pd(text)


def test_flipped_component_keeps_knot_signs():
    """Renverser l'unique composante d'un nœud ne change pas les signes"""
    d = parse_pd(FIGURE_EIGHT_PD)
    assert d.with_flipped([0]).signs == d.signs


def test_unknot_has_no_crossing():
    d = Diagram.unknot()
    assert d.size == 0
    assert d.is_knot
    assert d.to_pd() == ""


def test_prime_rejects_empty_diagram():
    with pytest.raises(InputError):
        is_prime(Diagram.unknot())


def test_reidemeister_three_requires_three_crossings(trefoil):
    with pytest.raises(InputError):
        reidemeister_three(trefoil, [0, 1])


def test_reidemeister_three_rejects_alternating_triangle(trefoil):
    """Les triangles du trèfle alterné n'admettent pas de mouvement R-III"""
    with pytest.raises(InputError):
        reidemeister_three(trefoil, [0, 1, 2])
