"""
Tests du recensement: lecture des tables, routes par nœud et rapport
"""

import pytest

from config.settings import AppConfig, CensusConfig, CertificationConfig
from src.core.census import (
    _split_top_level,
    certify_knot,
    check_table_counts,
    entry_diagram,
    format_report_text,
    load_table,
    parse_table_line,
    run_census,
)
from src.core.decide import validate_certificate
from src.core.diagram import is_alternating
from src.models.census import CensusReport, KnotTableEntry
from src.models.certificate import Route
from src.utils.errors import InputError
from tests.conftest import DATA_DIR, FIGURE_EIGHT_PD, TREFOIL_PD

HOPF_PD = "X(4,1,3,2) X(2,3,1,4)"


def test_load_sample_table(sample_table):
    entries = load_table(sample_table)
    names = [entry.name for entry in entries]
    assert names[:2] == ["3_1", "4_1"]
    assert len(entries) == 10
    by_name = {entry.name: entry for entry in entries}
    assert by_name["8_19"].torus == (3, 4)
    assert by_name["8_19"].pretzel == "P(-2,3,3)"
    assert by_name["10_128"].montesinos == "M(3/7,-1/2,1/3)"
    assert by_name["3_1"].pd is not None
    assert by_name["3_1"].line == 5


def test_empty_table(tmp_path):
    path = tmp_path / "vide.txt"
    path.write_text("# rien\n\n", encoding="utf-8")
    assert load_table(path) == []


def test_missing_table(tmp_path):
    with pytest.raises(InputError):
        load_table(tmp_path / "absente.txt")


def test_link_in_table_reports_line(tmp_path):
    path = tmp_path / "table.txt"
    path.write_text(f"3_1 | {TREFOIL_PD} |\nL2a1 | {HOPF_PD} |\n", encoding="utf-8")
    with pytest.raises(InputError) as excinfo:
        load_table(path)
    assert excinfo.value.line == 2


def test_duplicate_names_are_rejected(tmp_path):
    path = tmp_path / "table.txt"
    path.write_text(f"3_1 | {TREFOIL_PD} |\n3_1 | M(3) |\n", encoding="utf-8")
    with pytest.raises(InputError) as excinfo:
        load_table(path)
    assert excinfo.value.line == 2


def test_annotations():
    entry = parse_table_line(
        "10_999 | M(1/3,1/3;e=1) | montesinos=M(1/3,1/3;e=1); r3=1,2,3; torus=2,5",
        line=7,
    )
    assert entry.presentation == "M(1/3,1/3;e=1)"
    assert entry.montesinos == "M(1/3,1/3;e=1)"
    assert entry.r3_moves == [(1, 2, 3)]
    assert entry.torus == (2, 5)
    assert _split_top_level("a=M(1,2;e=1); b=2", ";") == ["a=M(1,2;e=1)", "b=2"]


@pytest.mark.parametrize("text", [
    "3_1",
    "3_1 | | ",
    f"3_1 | {TREFOIL_PD} | couleur=rouge",
    f"3_1 | {TREFOIL_PD} | torus=3",
    f"3_1 | {TREFOIL_PD} | r3=a,b,c",
    f"3_1 | {TREFOIL_PD} | variant={HOPF_PD}",
    f"3_1 | {TREFOIL_PD} | | extra",
])
def test_invalid_lines(text):
    with pytest.raises(InputError) as excinfo:
        parse_table_line(text, line=3)
    assert excinfo.value.line == 3


def test_crossing_number_from_name():
    assert KnotTableEntry(name="10_128").crossing_number == 10
    assert KnotTableEntry(name="K11n118").crossing_number == 11
    assert KnotTableEntry(name="trefle").crossing_number is None


def test_table_count_warnings():
    entries = [KnotTableEntry(name="3_1"), KnotTableEntry(name="K11a1")]
    warnings = check_table_counts(entries, CensusConfig())
    assert len(warnings) == 2
    assert check_table_counts([], CensusConfig()) == []


def test_entry_diagram_from_presentation():
    entry = parse_table_line("10_142 | P(-4,3,3) |")
    assert entry_diagram(entry).size == 10
    with pytest.raises(InputError):
        entry_diagram(KnotTableEntry(name="vide"))


@pytest.mark.parametrize("name, pd", [("3_1", TREFOIL_PD), ("4_1", FIGURE_EIGHT_PD)])
def test_alternating_knots_with_uniform_states_only(name, pd):
    options = CertificationConfig(routes=[Route.ADEQUATE_HOMOGENEOUS_STATE.value])
    outcome = certify_knot(KnotTableEntry(name=name, pd=pd), options)
    assert outcome.certified
    assert outcome.certificate.route == Route.ADEQUATE_HOMOGENEOUS_STATE
    assert outcome.certificate.subject == name


def test_exceptional_pretzel_fails_on_pretzel_route_alone():
    entry = parse_table_line("8_19 | P(-2,3,3) | torus=3,4")
    outcome = certify_knot(entry, CertificationConfig(routes=[Route.PRETZEL_SURFACE.value]))
    assert not outcome.certified
    assert outcome.certificate is None
    assert len(outcome.trail) == 1
    assert outcome.trail[0].startswith("pretzel:")


def test_torus_annotation_certifies_exceptional_pretzel():
    entry = parse_table_line("8_19 | P(-2,3,3) | torus=3,4")
    options = CertificationConfig(routes=[Route.TORUS_KNOT_ANNULUS.value])
    outcome = certify_knot(entry, options)
    assert outcome.certified
    assert outcome.certificate.torus == (3, 4)


def test_census_on_sample(sample_table):
    report = run_census(load_table(sample_table), AppConfig())
    assert report.total == 10
    assert report.failures == []
    assert report.certified == 10
    assert sum(report.route_counts.values()) == 10
    for outcome in report.outcomes:
        assert validate_certificate(outcome.certificate).valid, outcome.name

    text = format_report_text(report)
    assert "Total: 10  certifiés: 10  échecs: 0" in text
    assert "10_128" in text


def test_report_text_lists_failures():
    report = CensusReport(outcomes=[
        {"name": "K11n118", "certified": False, "trail": ["sigma+: état non candidat"]},
    ])
    text = format_report_text(report)
    assert "ÉCHEC  sigma+: état non candidat" in text
    assert "Échecs: K11n118" in text
    assert report.failures == ["K11n118"]


SIGMA_ROUTES = CertificationConfig(routes=[Route.ADEQUATE_HOMOGENEOUS_STATE.value])

# Diagrammes positifs exportés: ni sigma+ ni sigma- ne conviennent
POSITIVE_RESIDUALS = {"9_49", "10_162"}

# Diagrammes exportés dont aucun graphe de damier ne vérifie le critère
ELEVEN_RESIDUALS = {
    "K11n93", "K11n95", "K11n136", "K11n169", "K11n171", "K11n180", "K11n181",
}


def _table(name):
    return load_table(DATA_DIR / "tables" / name)


@pytest.fixture(scope="module")
def rolfsen_entries():
    return {entry.name: entry for entry in _table("rolfsen.txt")}


def test_bundled_tables_are_complete(rolfsen_entries):
    assert len(rolfsen_entries) == 249
    assert len(_table("eleven.txt")) == 552
    assert rolfsen_entries["8_19"].torus == (3, 4)
    assert rolfsen_entries["10_142"].pretzel == "P(-4,3,3)"
    assert rolfsen_entries["10_139"].montesinos == "M(1/3,-3/4,1/3)"


@pytest.mark.parametrize("name, route", [
    ("7_4", Route.ADEQUATE_HOMOGENEOUS_STATE),
    ("8_20", Route.ADEQUATE_HOMOGENEOUS_STATE),
    ("9_42", Route.ADEQUATE_HOMOGENEOUS_STATE),
    ("8_19", Route.TORUS_KNOT_ANNULUS),
    ("10_128", Route.MURASUGI_MINOR),
])
def test_selected_table_knots(rolfsen_entries, name, route):
    outcome = certify_knot(rolfsen_entries[name], CertificationConfig())
    assert outcome.certified, outcome.trail
    assert outcome.certificate.route == route
    assert validate_certificate(outcome.certificate).valid


def test_positive_diagram_is_out_of_reach_of_uniform_states(rolfsen_entries):
    outcome = certify_knot(rolfsen_entries["9_49"], SIGMA_ROUTES)
    assert not outcome.certified
    assert all(step.startswith("sigma") for step in outcome.trail)


@pytest.mark.census
def test_rolfsen_table_with_uniform_states():
    report = run_census(_table("rolfsen.txt"), AppConfig(certification=SIGMA_ROUTES))
    expected = {"8_19", "10_124", "10_128", "10_134", "10_139", "10_142"}
    assert set(report.failures) == expected | POSITIVE_RESIDUALS


@pytest.mark.census
def test_alternating_entries_certified_by_uniform_states(rolfsen_entries):
    for name, entry in rolfsen_entries.items():
        if not is_alternating(entry_diagram(entry)):
            continue
        outcome = certify_knot(entry, SIGMA_ROUTES)
        assert outcome.certified, name
        assert outcome.certificate.route == Route.ADEQUATE_HOMOGENEOUS_STATE


@pytest.mark.census
def test_rolfsen_table_with_all_routes():
    report = run_census(_table("rolfsen.txt"), AppConfig())
    assert set(report.failures) == {"10_134"} | POSITIVE_RESIDUALS
    for outcome in report.outcomes:
        if outcome.certified:
            assert validate_certificate(outcome.certificate).valid, outcome.name


@pytest.mark.census
def test_eleven_crossing_table():
    report = run_census(_table("eleven.txt"), AppConfig())
    assert set(report.failures) == {"K11n118", "K11n126"} | ELEVEN_RESIDUALS
    for outcome in report.outcomes:
        if outcome.certified:
            assert validate_certificate(outcome.certificate).valid
