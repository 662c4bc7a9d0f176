"""
Recensement des tables de nœuds

Format d'une table (une entrée par ligne, `#` pour les commentaires):

    nom | code PD ou présentation M(...)/P(...) | annotations

Annotations séparées par `;`: `torus=p,q`, `montesinos=M(...)`,
`pretzel=P(...)`, `variant=<PD>`, `r3=c1,c2,c3`.
Les routes sont essayées dans l'ordre de la preuve du recensement; le
premier certificat qui se revalide est retenu.
"""

from pathlib import Path
from typing import Callable, Iterable, List, Optional, Tuple, Union

import structlog

from config.settings import AppConfig, CensusConfig, CertificationConfig
from src.core.decide import (
    certify_state,
    montesinos_certify,
    pretzel_certificate,
    tait_certificate,
    torus_certificate,
    validate_certificate,
)
from src.core.diagram import Diagram, parse_pd, reidemeister_three
from src.core.states import State, checkerboard_states, enumerate_states, strong_candidate
from src.core.tangles import (
    MontesinosPresentation,
    PretzelPresentation,
    build_montesinos,
    parse_presentation,
)
from src.models.census import CensusOutcome, CensusReport, KnotTableEntry
from src.models.certificate import Certificate, Route
from src.utils.errors import InputError, InvariantViolation
from src.utils.logging import LogContext, log_execution_time

logger = structlog.get_logger()

# Route exigée pour tenter chaque étape
STEP_GATES = {
    "sigma": Route.ADEQUATE_HOMOGENEOUS_STATE,
    "torus": Route.TORUS_KNOT_ANNULUS,
    "montesinos": Route.MURASUGI_MINOR,
    "pretzel": Route.PRETZEL_SURFACE,
    "checkerboard": Route.GRAPH_CHECKERBOARD,
    "exhaustive": Route.ADEQUATE_HOMOGENEOUS_STATE,
}


# ----------------------------------------------------------------------
# Lecture des tables
# ----------------------------------------------------------------------

def _split_top_level(text: str, separator: str) -> List[str]:
    """Découpe hors parenthèses (M(a,b;e=1) garde son `;`)"""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [part.strip() for part in parts if part.strip()]


def _is_presentation(text: str) -> bool:
    stripped = text.strip()
    return stripped[:2] in ("M(", "P(")


def _parse_ints(value: str, count: int, key: str, line: int) -> Tuple[int, ...]:
    try:
        numbers = tuple(int(item) for item in value.split(","))
    except ValueError:
        raise InputError(f"annotation {key}={value!r}: entiers attendus", line=line)
    if len(numbers) != count:
        raise InputError(f"annotation {key}={value!r}: {count} entiers attendus", line=line)
    return numbers


def parse_table_line(text: str, line: Optional[int] = None) -> KnotTableEntry:
    """
    Lit une ligne `nom | PD | annotations`

    Raises:
        InputError: champ manquant, PD invalide ou entrelacs, annotation inconnue
    """
    fields = [field.strip() for field in text.split("|")]
    if len(fields) < 2 or not fields[0] or not fields[1]:
        raise InputError("format attendu: nom | PD | annotations", line=line)
    if len(fields) > 3:
        raise InputError("trop de champs (séparateur '|')", line=line)
    name, body = fields[0], fields[1]
    values = {"name": name, "line": line, "variants": [], "r3_moves": []}

    try:
        if _is_presentation(body):
            presentation = parse_presentation(body)
            values["presentation"] = str(presentation)
            if isinstance(presentation, PretzelPresentation):
                values["pretzel"] = str(presentation)
            else:
                values["montesinos"] = str(presentation)
        else:
            diagram = parse_pd(body, name=name)
            if not diagram.is_knot:
                raise InputError(f"{name}: {diagram.component_count} composantes pour un nœud")
            values["pd"] = diagram.to_pd()

        for annotation in _split_top_level(fields[2] if len(fields) == 3 else "", ";"):
            key, _, value = annotation.partition("=")
            key, value = key.strip(), value.strip()
            if key == "torus":
                values["torus"] = _parse_ints(value, 2, key, line)
            elif key == "montesinos":
                values["montesinos"] = str(MontesinosPresentation.parse(value))
            elif key == "pretzel":
                values["pretzel"] = str(PretzelPresentation.parse(value))
            elif key == "variant":
                variant = parse_pd(value, name=name)
                if not variant.is_knot:
                    raise InputError(f"{name}: variante à {variant.component_count} composantes")
                values["variants"].append(variant.to_pd())
            elif key == "r3":
                values["r3_moves"].append(_parse_ints(value, 3, key, line))
            else:
                raise InputError(f"annotation inconnue: {annotation!r}")
    except InputError as exc:
        if exc.line is not None:
            raise
        raise InputError(str(exc), line=line) from exc
    return KnotTableEntry(**values)


def check_table_counts(entries: Iterable[KnotTableEntry], census: CensusConfig) -> List[str]:
    """Compare les effectifs aux tables complètes; retourne des avertissements"""
    entries = list(entries)
    up_to_ten = sum(1 for e in entries if e.crossing_number is not None and e.crossing_number <= 10)
    eleven = sum(1 for e in entries if e.crossing_number == 11)
    warnings = []
    if up_to_ten and up_to_ten != census.expected_up_to_ten:
        warnings.append(
            f"{up_to_ten} nœuds à au plus 10 croisements (table complète: {census.expected_up_to_ten})"
        )
    if eleven and eleven != census.expected_eleven:
        warnings.append(f"{eleven} nœuds à 11 croisements (table complète: {census.expected_eleven})")
    return warnings


def load_table(path: Union[str, Path], census: Optional[CensusConfig] = None) -> List[KnotTableEntry]:
    """
    Charge une table de nœuds

    Raises:
        InputError: fichier illisible ou ligne invalide (avec son numéro)
    """
    census = census or CensusConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Table illisible: {path} ({exc})") from exc

    entries: List[KnotTableEntry] = []
    names = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        entry = parse_table_line(stripped, line=number)
        if entry.name in names:
            raise InputError(f"nœud {entry.name} en double", line=number)
        names.add(entry.name)
        entries.append(entry)

    for warning in check_table_counts(entries, census):
        logger.warning("⚠️ Effectifs de table inattendus", path=str(path), detail=warning)
    logger.info("📋 Table chargée", path=str(path), entries=len(entries))
    return entries


def entry_diagram(entry: KnotTableEntry) -> Diagram:
    """Diagramme de table, construit depuis la présentation si aucun PD n'est donné"""
    if entry.pd:
        return parse_pd(entry.pd, name=entry.name)
    if entry.presentation:
        presentation = parse_presentation(entry.presentation)
        if isinstance(presentation, PretzelPresentation):
            presentation = presentation.to_montesinos()
        return build_montesinos(presentation, name=entry.name).diagram
    raise InputError(f"{entry.name}: ni PD ni présentation")


def _diagram_versions(entry: KnotTableEntry, d: Diagram) -> List[Diagram]:
    """Diagramme de table, variantes données et version après les mouvements R-III"""
    versions = [d]
    versions += [parse_pd(variant, name=entry.name) for variant in entry.variants]
    if entry.r3_moves:
        moved = d
        for move in entry.r3_moves:
            moved = reidemeister_three(moved, move)
        versions.append(moved)
    return versions


# ----------------------------------------------------------------------
# Certification
# ----------------------------------------------------------------------

Attempt = Callable[[], Certificate]


def _attempts(entry: KnotTableEntry, options: CertificationConfig) -> List[Tuple[str, Attempt]]:
    """Tentatives ordonnées (étape, fonction) pour une entrée"""
    attempts: List[Tuple[str, Attempt]] = []
    name = entry.name

    def sigma(sign: int) -> Attempt:
        def run() -> Certificate:
            d = entry_diagram(entry)
            return certify_state(d, State.uniform(d.size, sign), subject=name)
        return run

    attempts.append(("sigma+", sigma(1)))
    attempts.append(("sigma-", sigma(-1)))

    if entry.torus:
        p, q = entry.torus
        attempts.append(("torus", lambda p=p, q=q: torus_certificate(name, p, q)))

    if entry.montesinos:
        m = MontesinosPresentation.parse(entry.montesinos)
        attempts.append((
            "montesinos",
            lambda: montesinos_certify(m, max_depth=options.max_dispatch_depth, subject=name),
        ))

    if entry.pretzel:
        pretzel = PretzelPresentation.parse(entry.pretzel)
        attempts.append(("pretzel", lambda: pretzel_certificate(pretzel, subject=name)))

    attempts.append(("checkerboard", lambda: _checkerboard(entry, options)))

    if options.exhaustive_search:
        attempts.append(("exhaustive", lambda: _exhaustive(entry, options)))
    return attempts


def _gate(step: str) -> Route:
    return STEP_GATES[step.rstrip("+-")]


def _checkerboard(entry: KnotTableEntry, options: CertificationConfig) -> Certificate:
    """États de damier de chaque version du diagramme: route d'état puis critère de Tait"""
    failures = []
    for version in _diagram_versions(entry, entry_diagram(entry)):
        for s in checkerboard_states(version):
            candidates = [tait_certificate]
            if Route.ADEQUATE_HOMOGENEOUS_STATE.value in options.routes:
                candidates.insert(0, certify_state)
            for candidate in candidates:
                try:
                    return candidate(version, s, subject=entry.name)
                except (InputError, InvariantViolation) as exc:
                    failures.append(f"{s}: {exc}")
    raise InputError("aucun état de damier ne convient (" + " | ".join(failures) + ")")


def _exhaustive(entry: KnotTableEntry, options: CertificationConfig) -> Certificate:
    d = entry_diagram(entry)
    tried = 0
    for s in enumerate_states(d, strong_candidate, cap=options.state_cap):
        tried += 1
        try:
            return certify_state(d, s, subject=entry.name)
        except InputError:
            continue
    raise InputError(f"aucun des {tried} états candidats ne certifie")


@log_execution_time("certify_knot")
def certify_knot(entry: KnotTableEntry, options: Optional[CertificationConfig] = None) -> CensusOutcome:
    """
    Essaie les routes dans l'ordre et retient le premier certificat valide

    Les échecs ne lèvent pas d'exception: ils forment la trace du résultat.
    """
    options = options or CertificationConfig()
    allowed = set(options.routes)
    trail: List[str] = []

    try:
        attempts = _attempts(entry, options)
    except InputError as exc:
        return CensusOutcome(name=entry.name, certified=False, trail=[f"entrée: {exc}"])

    for step, attempt in attempts:
        if _gate(step).value not in allowed:
            continue
        try:
            certificate = attempt()
        except InvariantViolation as exc:
            logger.warning("⚠️ Invariant violé pendant la certification", knot=entry.name, step=step, error=str(exc))
            trail.append(f"{step}: invariant violé: {exc}")
            continue
        except InputError as exc:
            trail.append(f"{step}: {exc}")
            continue

        if certificate.route.value not in allowed:
            trail.append(f"{step}: route {certificate.route.value} non autorisée")
            continue
        result = validate_certificate(certificate)
        if not result.valid:
            trail.append(f"{step}: certificat invalide: " + "; ".join(result.reasons))
            continue

        logger.debug("✅ Nœud certifié", knot=entry.name, step=step, route=certificate.route.value)
        return CensusOutcome(name=entry.name, certified=True, certificate=certificate, trail=trail)

    logger.info("📋 Nœud non certifié", knot=entry.name, attempts=len(trail))
    return CensusOutcome(name=entry.name, certified=False, trail=trail)


@log_execution_time("run_census")
def run_census(entries: Iterable[KnotTableEntry], app_config: Optional[AppConfig] = None) -> CensusReport:
    """Certifie chaque entrée dans l'ordre de la table"""
    app_config = app_config or AppConfig()
    entries = list(entries)
    outcomes: List[CensusOutcome] = []
    every = max(1, app_config.census.progress_every)

    with LogContext("census", entries=len(entries), routes=app_config.certification.routes) as ctx:
        for index, entry in enumerate(entries, start=1):
            outcome = certify_knot(entry, app_config.certification)
            outcomes.append(outcome)
            ctx.count("certified" if outcome.certified else "failed")
            if index % every == 0 or index == len(entries):
                ctx.log_progress(index, len(entries))

    report = CensusReport(outcomes=outcomes, routes=list(app_config.certification.routes))
    logger.info(
        "📊 Recensement terminé",
        total=report.total,
        certified=report.certified,
        failures=report.failures,
    )
    return report


def format_report_text(report: CensusReport) -> str:
    """Tableau texte: une ligne par nœud puis le résumé"""
    lines = []
    width = max([len(outcome.name) for outcome in report.outcomes] + [4])
    for outcome in report.outcomes:
        if outcome.certified and outcome.certificate is not None:
            c = outcome.certificate
            slope = c.surface_facts.boundary_slope
            lines.append(
                f"{outcome.name:<{width}}  {c.route.value:<26}  {c.conjecture.value:<18}  pente={slope}"
            )
        else:
            last = outcome.trail[-1] if outcome.trail else "aucune route applicable"
            lines.append(f"{outcome.name:<{width}}  ÉCHEC  {last}")
    lines.append("")
    lines.append(f"Total: {report.total}  certifiés: {report.certified}  échecs: {len(report.failures)}")
    if report.failures:
        lines.append("Échecs: " + ", ".join(report.failures))
    for route, count in report.route_counts.items():
        lines.append(f"  {route}: {count}")
    return "\n".join(lines)
