"""
Tests des triangulations, de l'étiquetage Z2 et de la surface normale assemblée
"""

from itertools import product

import pytest

from src.core.normal import (
    EDGES,
    Subcomplex,
    Triangulation,
    assemble_surface,
    boundary_loops,
    build_tree,
    classify_tetrahedron,
    gf2_nullspace,
    gf2_rank,
    label_edges,
    normal_surface_pipeline,
    z2_image_is_zero,
)
from src.utils.errors import InputError


def _load(path) -> Triangulation:
    return Triangulation.parse(path.read_text(encoding="utf-8"))


@pytest.fixture
def prism(triangulation_path):
    return _load(triangulation_path("prism.tri"))


def test_gf2_helpers():
    assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert gf2_rank([[2, 4, 0]]) == 0
    basis = gf2_nullspace([[1, 1, 0], [0, 1, 1]], 3)
    assert basis == [[1, 1, 1]]
    assert len(gf2_nullspace([], 2)) == 2


def test_single_tetrahedron_labelings():
    """64 étiquetages, 8 de parité nulle sur chaque face: vide, 4 triangles, 3 quadrilatères"""
    faces = [[i for i, edge in enumerate(EDGES) if k not in edge] for k in range(4)]
    kinds = []
    for local in product((0, 1), repeat=6):
        if all(sum(local[i] for i in face) % 2 == 0 for face in faces):
            kinds.append(classify_tetrahedron(local).kind)
    assert len(kinds) == 8
    assert kinds.count("empty") == 1
    assert kinds.count("triangle") == 4
    assert kinds.count("quad") == 3


def test_prism_structure(prism):
    assert prism.size == 3
    assert prism.vertex_count == 3
    assert prism.edge_count == 9
    assert prism.face_count == 9
    assert prism.h1_rank == 1
    assert prism.is_connected
    assert prism.boundary_onto()
    assert Triangulation.parse(prism.to_text()) == prism


def test_prism_pipeline(prism):
    x = prism.subcomplex()
    assert len(boundary_loops(prism, x)) == 1
    assert z2_image_is_zero(prism, x)
    tree = build_tree(prism, x)
    assert len(tree) == 2

    report = normal_surface_pipeline(prism)
    kinds = [(piece.kind, piece.vertex, piece.zero_edges) for piece in report.pieces]
    assert kinds == [
        ("triangle", 0, None),
        ("quad", None, [[0, 1], [2, 3]]),
        ("triangle", 3, None),
    ]
    assert report.components == 1
    assert report.boundary_curves == 1
    assert report.euler_characteristic == 1
    assert report.orientable is True
    assert report.x_separating is False
    assert report.curves_per_region == [1]
    assert report.violations == []
    assert report.disjoint_from_x
    assert not report.empty


def test_prism_with_essential_edge(prism):
    x = Subcomplex(edges=frozenset({prism.edge_class[(0, 0)]}), faces=frozenset())
    assert not z2_image_is_zero(prism, x)
    with pytest.raises(InputError):
        normal_surface_pipeline(prism, x)


def test_two_prism_with_separating_disks(triangulation_path):
    t = _load(triangulation_path("two_prism.tri"))
    report = normal_surface_pipeline(t)
    assert report.x_separating
    assert report.loops == 2
    assert report.curve_bound == 1.0
    assert report.boundary_curves == 1
    assert report.euler_characteristic == 1
    assert [piece.kind for piece in report.pieces] == [
        "empty", "empty", "empty", "triangle", "quad", "triangle",
    ]
    assert report.pieces[3].vertex == 0
    assert sum(report.curves_per_region) == 1
    assert report.violations == []


def test_one_vertex_triangulation(triangulation_path):
    t = _load(triangulation_path("one_vertex.tri"))
    assert t.vertex_count == 1
    assert t.h1_rank == 1
    report = normal_surface_pipeline(t)
    assert report.tree == []
    assert len(report.pieces) == 1
    assert report.pieces[0].kind == "quad"
    assert report.pieces[0].zero_edges == [[0, 2], [1, 3]]
    assert report.euler_characteristic == 0
    assert report.boundary_curves == 1
    assert report.orientable is False
    assert not report.x_separating


def test_ball_gives_empty_surface(triangulation_path):
    t = _load(triangulation_path("ball.tri"))
    assert t.h1_rank == 0
    x = t.subcomplex()
    labels = label_edges(t, x, build_tree(t, x))
    assert labels == [0] * t.edge_count
    pieces, facts = assemble_surface(t, labels)
    assert all(piece.kind == "empty" for piece in pieces)
    assert facts["boundary_curves"] == []

    report = normal_surface_pipeline(t)
    assert report.empty
    assert report.boundary_curves == 0
    assert report.orientable is None
    assert report.violations == []


@pytest.mark.parametrize("text", [
    "",
    "tetrahedra 1\nface 1 -> boundary\n",
    "tetrahedra 1\nface 0 -> boundary\nface 1 -> boundary\n",
    "tetrahedra 1\nface 0 -> tet 0 face 1 perm 1230\nface 1 -> boundary\n"
    "face 2 -> boundary\nface 3 -> boundary\n",
    "tetrahedra 1\nface 0 -> nowhere\n",
    "tetrahedra 1\nglue 0 1\n",
])
def test_parse_errors(text):
    with pytest.raises(InputError):
        Triangulation.parse(text)


def test_parse_error_reports_line():
    with pytest.raises(InputError) as excinfo:
        Triangulation.parse("# commentaire\ntetrahedra 1\nface 2 -> boundary\n")
    assert excinfo.value.line == 3


def test_ball_without_boundary_trace_is_rejected(triangulation_path):
    t = _load(triangulation_path("ball.tri"))
    with pytest.raises(InputError):
        build_tree(t, Subcomplex(edges=frozenset(), faces=frozenset()))
