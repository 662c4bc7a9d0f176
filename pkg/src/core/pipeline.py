"""
Interface en ligne de commande du moteur de certification

Chaque sous-commande lit une entrée (code PD, présentation, fichier),
appelle l'opération correspondante et écrit un rapport JSON ou texte sur
la sortie standard; les logs vont sur la sortie d'erreur.

Codes de sortie: 0 succès ou verdict calculé, 1 entrée invalide,
2 invariant interne violé, 130 interruption.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import structlog
import yaml
from pydantic import BaseModel

from config.settings import AppConfig, KNOWN_ROUTES, config, load_config
from src.core.census import certify_knot, format_report_text, load_table, run_census
from src.core.decide import (
    graph_certificate,
    graph_checkerboard_essential,
    montesinos_certify,
    pretzel_certificate,
    pretzel_essential,
    validate_certificate,
)
from src.core.diagram import is_alternating, is_prime, is_reduced, parse_pd
from src.core.normal import Triangulation, normal_surface_pipeline
from src.core.states import State, check_state, state_graph, surface_summary
from src.core.tangles import (
    MontesinosPresentation,
    PretzelPresentation,
    WeightedPlanarGraph,
    parse_presentation,
)
from src.models.census import CensusReport, KnotTableEntry
from src.models.certificate import Certificate
from src.utils.errors import InputError, InvariantViolation
from src.utils.logging import LogContext, setup_logging

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2
EXIT_INTERRUPTED = 130

Payload = Union[BaseModel, Dict[str, Any]]


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse les arguments de ligne de commande"""
    parser = argparse.ArgumentParser(
        description="Certification de surfaces essentielles pour les nœuds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemples d'utilisation:
  # Lecture d'un diagramme
  python run.py parse "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"

  # Prédicats d'un état
  python run.py state "X(6,3,7,4) X(2,7,3,8) X(4,2,5,1) X(8,6,1,5)" --state "++++"

  # Certificat pour un bretzel
  python run.py certify "P(-2,3,7)"

  # Machine à cas de Montesinos
  python run.py montesinos "M(3/7,-1/2,1/3)"

  # Surface normale d'une triangulation
  python run.py normal data/triangulations/prism.tri

  # Recensement d'une table, sortie texte
  python run.py census --table data/tables/rolfsen.txt --format text
        """
    )

    parser.add_argument(
        'command',
        choices=['parse', 'state', 'certify', 'montesinos', 'pretzel', 'graph', 'normal', 'census', 'validate'],
        help='Sous-commande à exécuter'
    )
    parser.add_argument(
        'input',
        nargs='?',
        help='Code PD, présentation M(...)/P(...) ou chemin de fichier'
    )

    # Options de certification
    parser.add_argument(
        '--routes',
        type=str,
        help=f'Routes autorisées, séparées par des virgules ({", ".join(KNOWN_ROUTES)})'
    )
    parser.add_argument(
        '--state-cap',
        type=int,
        help="Plafond de croisements pour l'énumération exhaustive des états"
    )
    parser.add_argument(
        '--exhaustive',
        action='store_true',
        help='Recherche exhaustive des états en dernier recours'
    )
    parser.add_argument(
        '--state',
        type=str,
        help="État à examiner pour la sous-commande state (ex: '+-+-')"
    )

    # Options de recensement
    parser.add_argument(
        '--table',
        type=str,
        help='Table de nœuds pour la sous-commande census'
    )

    # Options de sortie
    parser.add_argument(
        '--format',
        choices=['json', 'text'],
        help='Format du rapport'
    )
    parser.add_argument(
        '--out',
        type=str,
        help='Fichier de sortie pour le rapport'
    )

    # Options générales
    parser.add_argument(
        '--config',
        type=str,
        help='Fichier de configuration YAML'
    )
    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        help='Niveau de logging'
    )

    return parser.parse_args(argv)


def apply_overrides(app_config: AppConfig, args: argparse.Namespace) -> AppConfig:
    """
    Applique les options de ligne de commande à la configuration

    Raises:
        InputError: option refusée par la validation de la configuration
    """
    data = app_config.model_dump()
    if args.routes:
        data["certification"]["routes"] = [r.strip() for r in args.routes.split(",") if r.strip()]
    if args.state_cap is not None:
        data["certification"]["state_cap"] = args.state_cap
    if args.exhaustive:
        data["certification"]["exhaustive_search"] = True
    if args.table:
        data["census"]["table_path"] = args.table
    if args.format:
        data["output"]["format"] = args.format
    if args.log_level:
        data["log_level"] = args.log_level
    try:
        return AppConfig(**data)
    except ValueError as exc:
        raise InputError(f"Option invalide: {exc}") from exc


def _read_input(value: Optional[str], what: str) -> str:
    """Texte en ligne, ou contenu du fichier si le chemin existe"""
    if value is None or not value.strip():
        raise InputError(f"Entrée manquante: {what}")
    path = Path(value)
    if len(value) < 512 and path.is_file():
        return path.read_text(encoding="utf-8")
    return value


# ----------------------------------------------------------------------
# Sous-commandes
# ----------------------------------------------------------------------

def command_parse(args, app_config: AppConfig) -> Payload:
    d = parse_pd(_read_input(args.input, "code PD"))
    return {
        "pd_code": d.to_pd(),
        "crossings": d.size,
        "components": d.component_count,
        "signs": list(d.signs),
        "writhe": d.writhe,
        "alternating": is_alternating(d),
        "reduced": is_reduced(d),
        "prime": is_prime(d) if d.size else None,
        "seifert_state": str(State(d.signs)),
    }


def command_state(args, app_config: AppConfig) -> Payload:
    d = parse_pd(_read_input(args.input, "code PD"))
    states = [State.parse(args.state)] if args.state else [State.uniform(d.size, 1), State.uniform(d.size, -1)]
    reports = []
    for s in states:
        graph = state_graph(d, s)
        reports.append({
            "state": str(s),
            "check": check_state(d, s).model_dump(),
            "blocks": len(graph.blocks),
            "surface": surface_summary(d, s).model_dump(),
        })
    return {"pd_code": d.to_pd(), "states": reports}


def command_certify(args, app_config: AppConfig) -> Payload:
    text = _read_input(args.input, "code PD ou présentation").strip()
    if text.startswith(("M(", "P(")):
        presentation = parse_presentation(text)
        if isinstance(presentation, PretzelPresentation):
            try:
                return pretzel_certificate(presentation)
            except InputError as exc:
                logger.info("📋 Route de bretzel écartée, passage à Montesinos", reason=str(exc))
                return montesinos_certify(
                    presentation.to_montesinos(),
                    max_depth=app_config.certification.max_dispatch_depth,
                    subject=str(presentation),
                )
        return montesinos_certify(
            presentation, max_depth=app_config.certification.max_dispatch_depth
        )

    d = parse_pd(text)
    entry = KnotTableEntry(name=d.name or "diagramme", pd=d.to_pd())
    return certify_knot(entry, app_config.certification)


def command_montesinos(args, app_config: AppConfig) -> Payload:
    m = MontesinosPresentation.parse(_read_input(args.input, "présentation M(...)").strip())
    return montesinos_certify(m, max_depth=app_config.certification.max_dispatch_depth)


def command_pretzel(args, app_config: AppConfig) -> Payload:
    p = PretzelPresentation.parse(_read_input(args.input, "présentation P(...)").strip())
    verdict = pretzel_essential(p)
    result: Dict[str, Any] = {"presentation": str(p), "verdict": verdict.model_dump()}
    if verdict.essential:
        try:
            result["certificate"] = pretzel_certificate(p).model_dump()
        except InputError as exc:
            result["certificate_error"] = str(exc)
    return result


def command_graph(args, app_config: AppConfig) -> Payload:
    g = WeightedPlanarGraph.parse(_read_input(args.input, "graphe pondéré"))
    verdict = graph_checkerboard_essential(g)
    result: Dict[str, Any] = {"graph": g.to_text(), "verdict": verdict.model_dump()}
    if verdict.essential:
        try:
            result["certificate"] = graph_certificate(g).model_dump()
        except InputError as exc:
            result["certificate_error"] = str(exc)
    return result


def command_normal(args, app_config: AppConfig) -> Payload:
    t = Triangulation.parse(_read_input(args.input, "triangulation"))
    return normal_surface_pipeline(t)


def command_census(args, app_config: AppConfig) -> Payload:
    path = args.input or app_config.census.table_path
    entries = load_table(path, app_config.census)
    return run_census(entries, app_config)


def command_validate(args, app_config: AppConfig) -> Payload:
    text = _read_input(args.input, "certificat JSON")
    try:
        certificate = Certificate.model_validate_json(text)
    except ValueError as exc:
        raise InputError(f"Certificat illisible: {exc}") from exc
    return validate_certificate(certificate)


COMMANDS = {
    "parse": command_parse,
    "state": command_state,
    "certify": command_certify,
    "montesinos": command_montesinos,
    "pretzel": command_pretzel,
    "graph": command_graph,
    "normal": command_normal,
    "census": command_census,
    "validate": command_validate,
}


# ----------------------------------------------------------------------
# Rendu
# ----------------------------------------------------------------------

def _as_dict(payload: Payload) -> Dict[str, Any]:
    return payload.model_dump() if isinstance(payload, BaseModel) else payload


def render(payload: Payload, app_config: AppConfig) -> str:
    """Rapport JSON (clés triées) ou texte"""
    if app_config.output.format == "json":
        return json.dumps(_as_dict(payload), indent=app_config.output.indent, sort_keys=True, default=str)
    if isinstance(payload, CensusReport):
        return format_report_text(payload)
    if isinstance(payload, Certificate):
        return format_certificate_text(payload)
    return yaml.safe_dump(json.loads(json.dumps(_as_dict(payload), default=str)),
                          allow_unicode=True, sort_keys=True).rstrip()


def format_certificate_text(c: Certificate) -> str:
    facts = c.surface_facts
    lines = [
        f"Sujet: {c.subject}",
        f"Conjecture: {c.conjecture.value}",
        f"Implique: {', '.join(item.value for item in c.implied) or '-'}",
        f"Route: {c.route.value}",
        f"Surface: chi={facts.euler_characteristic}, "
        f"{'orientable' if facts.orientable else 'non orientable'}, "
        f"bords={facts.boundary_components}, pente={facts.boundary_slope}",
    ]
    for label, value in (
        ("PD", c.pd_code), ("État", c.state), ("Présentation", c.presentation),
        ("Mineur", c.minor), ("Tore", c.torus),
    ):
        if value:
            lines.append(f"{label}: {value}")
    for step in c.steps:
        details = ", ".join(f"{key}={value}" for key, value in step.values.items())
        lines.append(f"  étape {step.name}: {details}")
    return "\n".join(lines)


def write_output(report: str, out: Optional[str]):
    """Écrit le rapport sur la sortie standard ou dans un fichier"""
    if out:
        out_path = Path(out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(report + "\n", encoding="utf-8")
        logger.info("📄 Rapport sauvegardé", path=str(out_path))
    else:
        sys.stdout.write(report + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """Fonction principale; retourne le code de sortie"""
    try:
        args = parse_arguments(argv)
    except SystemExit as exc:
        # argparse sort en 2; une erreur d'usage est une entrée invalide
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    app_config = load_config(args.config) if args.config else config

    setup_logging(
        log_level=args.log_level or app_config.log_level,
        log_file=app_config.log_file,
        log_format=app_config.log_format,
    )

    try:
        app_config = apply_overrides(app_config, args)
        with LogContext("cli", command=args.command):
            payload = COMMANDS[args.command](args, app_config)
            write_output(render(payload, app_config), args.out)
        return EXIT_OK
    except InputError as exc:
        logger.error("❌ Entrée invalide", error=str(exc))
        return EXIT_INPUT
    except InvariantViolation as exc:
        logger.error("❌ Invariant interne violé", error=str(exc))
        return EXIT_INVARIANT
    except OSError as exc:
        logger.error("❌ Entrée ou sortie illisible", error=str(exc))
        return EXIT_INPUT


def run_sync():
    """Point d'entrée des lanceurs"""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.stderr.write("\n⚠️ Certification interrompue par l'utilisateur\n")
        sys.exit(EXIT_INTERRUPTED)


if __name__ == "__main__":
    run_sync()
