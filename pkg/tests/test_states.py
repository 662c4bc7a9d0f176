"""
Tests des états, des graphes d'état et des surfaces d'état
"""

import itertools

import pytest

from src.core.diagram import mirror
from src.core.states import (
    State,
    boundary_slope,
    check_state,
    checkerboard_states,
    enumerate_states,
    is_seifert_state,
    murasugi_leaves,
    smooth,
    state_graph,
    strong_candidate,
    surface_summary,
)
from src.core.tangles import MontesinosPresentation, build_montesinos
from src.utils.errors import InputError


def test_state_parse_and_format():
    assert State.parse("+-−").signs == (1, -1, -1)
    assert str(State.parse("+-+-")) == "+-+-"
    assert State.uniform(3, -1).flip(1).signs == (-1, 1, -1)
    with pytest.raises(InputError):
        State.parse("+x-")


def test_kink_smoothings(kink):
    """Un lissage donne une boucle (inadéquat), l'autre un isthme (adéquat)"""
    bridge = check_state(kink, State.parse("+"))
    assert bridge.adequate
    assert bridge.is_seifert
    assert not check_state(kink, State.parse("-")).adequate


def test_trefoil_checkerboard_surfaces(trefoil):
    plus = State.uniform(3, 1)
    check = check_state(trefoil, plus)
    assert check.adequate and check.homogeneous and not check.is_seifert

    mobius = surface_summary(trefoil, plus)
    assert mobius.loops == 3
    assert mobius.euler_characteristic == 0
    assert not mobius.orientable
    assert mobius.nonorientable_genus == 1
    assert mobius.boundary_slope == -6
    assert mobius.even_slope

    seifert = surface_summary(trefoil, State.uniform(3, -1))
    assert seifert.orientable
    assert seifert.genus == 1
    assert seifert.boundary_slope == 0


def test_right_trefoil_slope_is_six(trefoil):
    right = mirror(trefoil)
    assert boundary_slope(right, State.uniform(3, -1)) == 6


def test_figure_eight_slopes(figure_eight):
    plus = surface_summary(figure_eight, State.uniform(4, 1))
    minus = surface_summary(figure_eight, State.uniform(4, -1))
    assert (plus.boundary_slope, minus.boundary_slope) == (-4, 4)
    assert plus.loops == 3
    assert plus.euler_characteristic == -1
    assert not plus.orientable and not minus.orientable
    assert plus.nonorientable_genus == 2


def test_figure_eight_seifert_state_decomposes(figure_eight):
    """L'état orienté --++ a deux blocs de signe constant"""
    s = State.parse("--++")
    assert is_seifert_state(figure_eight, s)
    check = check_state(figure_eight, s)
    assert check.adequate and check.homogeneous

    graph = state_graph(figure_eight, s)
    assert len(graph.blocks) == 2
    for block in graph.blocks:
        assert len({s[i] for i in block}) == 1
    assert len(graph.cut_vertices) == 1

    leaves = murasugi_leaves(figure_eight, s)
    assert len(leaves) == 2
    assert all(leaf.size == 2 for leaf, _ in leaves)

    summary = surface_summary(figure_eight, s)
    assert summary.orientable
    assert summary.genus == 1
    assert summary.boundary_slope == 0


def test_checkerboard_states_of_alternating_diagram(figure_eight):
    first, second = checkerboard_states(figure_eight)
    assert {str(first), str(second)} == {"++++", "----"}
    assert first[0] == 1


def test_enumerate_states_order_and_filter(trefoil, figure_eight):
    states = [str(s) for s in enumerate_states(trefoil)]
    assert len(states) == 8
    assert states[0] == "+++" and states[-1] == "---"

    candidates = {str(s) for s in enumerate_states(figure_eight, strong_candidate)}
    assert {"++++", "----"} <= candidates
    assert "--++" not in candidates


def test_enumerate_states_cap(figure_eight):
    with pytest.raises(InputError):
        list(enumerate_states(figure_eight, cap=3))


def test_partial_state_is_rejected(trefoil):
    with pytest.raises(InputError):
        surface_summary(trefoil, State.parse("++"))


def test_seifert_slope_is_zero_on_every_diagram(trefoil, figure_eight, kink):
    for d in (trefoil, figure_eight, kink, mirror(figure_eight)):
        assert boundary_slope(d, State(d.signs)) == 0


def _orientable_by_search(d, s) -> bool:
    """Essaie chaque sens de parcours des boucles: orientable si les brins restent cohérents"""
    loops = smooth(d, s).loops
    for reversals in itertools.product((False, True), repeat=len(loops)):
        entering = {
            (i, q if reverse else p)
            for arcs, reverse in zip(loops, reversals)
            for i, p, q in arcs
        }
        if all(
            ((i, 0) in entering) != ((i, 2) in entering)
            and ((i, 1) in entering) != ((i, 3) in entering)
            for i in range(d.size)
        ):
            return True
    return False


def test_orientability_matches_search_on_small_diagrams(trefoil, figure_eight, kink):
    built = [
        build_montesinos(MontesinosPresentation.parse(text)).diagram
        for text in ("M(2)", "M(5)", "M(7/3)", "M(9/2)", "M(1/2,1/2)", "M(1/3,-1/2)")
    ]
    diagrams = [trefoil, figure_eight, kink, mirror(trefoil), mirror(figure_eight)] + built
    for d in diagrams:
        assert d.size <= 6
        for signs in itertools.product((1, -1), repeat=d.size):
            s = State(signs)
            assert surface_summary(d, s).orientable is _orientable_by_search(d, s), (d.to_pd(), str(s))
