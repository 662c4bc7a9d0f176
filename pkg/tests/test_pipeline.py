"""
Tests de l'interface en ligne de commande
"""

import json

import pytest

from src.core import pipeline
from src.core.decide import certify_state
from src.core.pipeline import (
    EXIT_INPUT,
    EXIT_INTERRUPTED,
    EXIT_INVARIANT,
    EXIT_OK,
    main,
    parse_arguments,
    run_sync,
)
from src.core.states import State
from src.utils.errors import InvariantViolation
from tests.conftest import DATA_DIR, TREFOIL_PD

QUIET = ["--log-level", "WARNING"]


def _run_json(capsys, *argv):
    code = main(list(argv) + QUIET)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_parse_arguments():
    args = parse_arguments(["certify", "P(-2,3,7)", "--routes", "PretzelSurface", "--format", "text"])
    assert args.command == "certify"
    assert args.input == "P(-2,3,7)"
    assert args.routes == "PretzelSurface"
    assert args.format == "text"
    assert not args.exhaustive


def test_parse_command(capsys):
    code, payload = _run_json(capsys, "parse", TREFOIL_PD)
    assert code == EXIT_OK
    assert payload["crossings"] == 3
    assert payload["components"] == 1
    assert payload["alternating"] is True
    assert payload["seifert_state"] == "---"


def test_state_command(capsys):
    code, payload = _run_json(capsys, "state", TREFOIL_PD, "--state", "+++")
    assert code == EXIT_OK
    assert payload["states"][0]["check"]["adequate"] is True
    assert payload["states"][0]["surface"]["boundary_slope"] == -6


def test_empty_input_is_rejected(capsys):
    assert main(["certify", ""] + QUIET) == EXIT_INPUT
    assert main(["parse", "X(1,2,3)"] + QUIET) == EXIT_INPUT


def test_unknown_command_is_an_input_error(capsys):
    assert main(["fold", "X(1,1,2,2)"] + QUIET) == EXIT_INPUT


def test_certify_pretzel(capsys):
    code, payload = _run_json(capsys, "certify", "P(-2,3,7)")
    assert code == EXIT_OK
    assert payload["route"] == "PretzelSurface"
    assert payload["conjecture"] == "strong-neuwirth"


def test_certify_diagram(capsys):
    code, payload = _run_json(capsys, "certify", TREFOIL_PD)
    assert code == EXIT_OK
    assert payload["certified"] is True
    assert payload["certificate"]["route"] == "AdequateHomogeneousState"


def test_montesinos_command(capsys):
    code, payload = _run_json(capsys, "montesinos", "M(3/7,-1/2,1/3)")
    assert code == EXIT_OK
    assert payload["route"] == "MurasugiMinor"
    assert payload["conjecture"] == "strong-neuwirth"
    assert payload["minor"] == "P(2,-2,2)"


def test_pretzel_command_reports_exception(capsys):
    code, payload = _run_json(capsys, "pretzel", "P(-2,3,5)")
    assert code == EXIT_OK
    assert payload["verdict"]["essential"] is False
    assert "certificate" not in payload


def test_graph_command(capsys, tmp_path):
    path = tmp_path / "theta.txt"
    path.write_text(
        "vertices 2\nedge 0 1 4\nedge 0 1 3\nedge 0 1 3\nrotation 0: 2 1 0\nrotation 1: 0 1 2\n",
        encoding="utf-8",
    )
    code, payload = _run_json(capsys, "graph", str(path))
    assert code == EXIT_OK
    assert payload["verdict"]["essential"] is True
    assert payload["certificate"]["route"] == "GraphCheckerboard"


def test_normal_command(capsys):
    code, payload = _run_json(capsys, "normal", str(DATA_DIR / "triangulations" / "prism.tri"))
    assert code == EXIT_OK
    assert payload["boundary_curves"] == 1
    assert payload["violations"] == []


def test_validate_command(capsys, tmp_path, trefoil):
    path = tmp_path / "certificat.json"
    path.write_text(certify_state(trefoil, State.uniform(3, 1)).model_dump_json(), encoding="utf-8")
    code, payload = _run_json(capsys, "validate", str(path))
    assert code == EXIT_OK
    assert payload["valid"] is True

    assert main(["validate", "{pas du json"] + QUIET) == EXIT_INPUT


def test_invariant_violation_exit_code(capsys, mocker):
    mocker.patch.object(pipeline, "montesinos_certify", side_effect=InvariantViolation("boucle"))
    assert main(["montesinos", "M(3/7,-1/2,1/3)"] + QUIET) == EXIT_INVARIANT


def test_run_sync_interrupted(mocker):
    mocker.patch.object(pipeline, "main", side_effect=KeyboardInterrupt)
    with pytest.raises(SystemExit) as excinfo:
        run_sync()
    assert excinfo.value.code == EXIT_INTERRUPTED


def test_out_option_writes_file(capsys, tmp_path):
    out = tmp_path / "rapports" / "trefle.json"
    assert main(["parse", TREFOIL_PD, "--out", str(out)] + QUIET) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["crossings"] == 3


def test_bogus_route_is_rejected(capsys):
    assert main(["certify", "P(-2,3,7)", "--routes", "Intuition"] + QUIET) == EXIT_INPUT


def test_route_restriction_is_honoured(capsys):
    code, payload = _run_json(capsys, "certify", TREFOIL_PD, "--routes", "PretzelSurface")
    assert code == EXIT_OK
    assert payload["certified"] is False


def test_census_text_report(capsys):
    code = main(["census", str(DATA_DIR / "tables" / "sample.txt"), "--format", "text"] + QUIET)
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "Total: 10" in out


def test_text_certificate(capsys):
    assert main(["montesinos", "M(-1/2,1/3,1/3)", "--format", "text"] + QUIET) == EXIT_OK
    out = capsys.readouterr().out
    assert "Route: TorusKnotAnnulus" in out
    assert "Tore: (3, 4)" in out
