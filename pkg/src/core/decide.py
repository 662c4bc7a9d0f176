"""
Procédures de décision et certificats

Critères d'essentialité (bretzels, surfaces de damier de graphes pondérés),
machine à cas des nœuds de Montesinos et validation indépendante des
certificats: chaque fait est recalculé à partir du témoin.
"""

import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import structlog

from src.core.diagram import Diagram, is_alternating, is_prime, is_reduced, parse_pd
from src.core.states import (
    State,
    check_state,
    checkerboard_states,
    is_checkerboard_state,
    murasugi_leaves,
    state_graph,
    surface_summary,
)
from src.core.tangles import (
    BuiltDiagram,
    MontesinosPresentation,
    PretzelPresentation,
    WeightedPlanarGraph,
    build_graph_diagram,
    build_montesinos,
    build_pretzel,
    build_two_bridge,
    deplumb_to_pretzel,
    normalize_montesinos,
    tait_graph,
    torus_form,
    two_bridge_fraction,
)
from src.models.certificate import CaseStep, Certificate, Conjecture, Route, ValidationResult
from src.models.surface import EssentialVerdict, SurfaceSummary
from src.utils.errors import InputError, InvariantViolation
from src.utils.logging import log_execution_time

logger = structlog.get_logger()

DEFAULT_MAX_DEPTH = 8


# ----------------------------------------------------------------------
# Critères d'essentialité
# ----------------------------------------------------------------------

def _pretzel_form(twists: Sequence[int]) -> Tuple[int, ...]:
    """
    Forme (-p1, p2, ..., pn) avec pi >= 2, à rotation et miroir près;
    pour n = 3 on trie p2 <= p3

    Raises:
        InputError: n < 3, une torsion |p| < 2, ou pas exactement un signe isolé
    """
    twists = tuple(int(p) for p in twists)
    if len(twists) < 3:
        raise InputError(f"Un bretzel de forme (-p1, p2, ..., pn) demande n >= 3: {twists}")
    if any(abs(p) < 2 for p in twists):
        raise InputError(f"Toutes les torsions doivent vérifier |p| >= 2: {twists}")
    negatives = [i for i, p in enumerate(twists) if p < 0]
    if len(negatives) != 1:
        positives = [i for i, p in enumerate(twists) if p > 0]
        if len(positives) != 1:
            raise InputError(f"Une seule torsion doit être de signe opposé aux autres: {twists}")
        twists = tuple(-p for p in twists)
        negatives = positives
    start = negatives[0]
    form = twists[start:] + twists[:start]
    if len(form) == 3 and form[1] > form[2]:
        form = (form[0], form[2], form[1])
    return form


def pretzel_essential(p: PretzelPresentation) -> EssentialVerdict:
    """
    Surface de bretzel essentielle sauf pour (-2,3,3), (-2,3,4), (-2,3,5) et (-2,2,impair)
    """
    form = _pretzel_form(p.twists)
    if len(form) == 3 and form[0] == -2:
        _, p2, p3 = form
        if (p2, p3) in ((3, 3), (3, 4), (3, 5)):
            return EssentialVerdict(essential=False, reason=f"exception P(-2,{p2},{p3})")
        if p2 == 2 and p3 % 2 == 1:
            return EssentialVerdict(essential=False, reason=f"exception P(-2,2,{p3}) avec p3 impair")
    return EssentialVerdict(essential=True, reason=f"forme {form} hors des exceptions")


def graph_checkerboard_essential(g: WeightedPlanarGraph) -> EssentialVerdict:
    """
    Surface F_G: essentielle si tous les |w| >= 3, ou si un seul poids w1 <= -2
    (au miroir près) avec les autres >= 2, sauf w1 = -2 avec une arête parallèle
    de poids 2 ou 3 où le critère ne conclut pas

    Raises:
        InputError: graphe non 2-connexe
    """
    if not g.is_two_connected:
        raise InputError("Le critère de damier demande un graphe 2-connexe")
    weights = [w for _, _, w in g.edges]
    if all(abs(w) >= 3 for w in weights):
        return EssentialVerdict(essential=True, reason="tous les poids vérifient |w| >= 3")

    negatives = [i for i, w in enumerate(weights) if w < 0]
    positives = [i for i, w in enumerate(weights) if w > 0]
    sign = 1
    if len(negatives) != 1 and len(positives) == 1:
        negatives, sign = positives, -1
    if len(negatives) == 1:
        lone = negatives[0]
        signed = [sign * w for w in weights]
        others_ok = all(w >= 2 for i, w in enumerate(signed) if i != lone)
        if signed[lone] <= -2 and others_ok:
            if signed[lone] == -2 and any(signed[j] in (2, 3) for j in g.parallel_edges(lone)):
                return EssentialVerdict(
                    essential=None,
                    reason="poids -2 avec une arête parallèle de poids 2 ou 3",
                )
            return EssentialVerdict(
                essential=True,
                reason=f"un seul poids négatif {signed[lone]}, les autres >= 2",
            )
    return EssentialVerdict(essential=None, reason="motif de poids hors du critère")


# ----------------------------------------------------------------------
# Réduction de Murasugi et reconnaissance des graphes thêta
# ----------------------------------------------------------------------

def _merge_parallel(graph: nx.MultiGraph) -> bool:
    changed = False
    pairs = {tuple(sorted((u, v))) for u, v in graph.edges() if u != v}
    for u, v in sorted(pairs):
        by_sign: Dict[int, List[int]] = {}
        for key, data in graph.get_edge_data(u, v).items():
            by_sign.setdefault(data["sign"], []).append(key)
        for keys in by_sign.values():
            for key in keys[1:]:
                graph.remove_edge(u, v, key=key)
                changed = True
    return changed


def _remove_hanging(graph: nx.MultiGraph) -> bool:
    """Retire une composante de G - {u, v} de même signe que l'arête uv et attachée à u et v"""
    for u, v, sign in list(graph.edges(data="sign")):
        if u == v:
            continue
        rest = graph.copy()
        rest.remove_nodes_from((u, v))
        for component in nx.connected_components(rest):
            incident = list(graph.edges(component, data="sign"))
            attached = {b for _, b, _ in incident if b not in component}
            if attached == {u, v} and all(s == sign for _, _, s in incident):
                graph.remove_nodes_from(component)
                return True
    return False


def reduce_block(block: nx.MultiGraph) -> nx.MultiGraph:
    """
    Déplombage combinatoire d'un bloc du graphe d'état

    Les arêtes parallèles de même signe fusionnent; dans un bloc de signes
    mêlés, les morceaux de signe constant attachés aux deux extrémités d'une
    arête de même signe disparaissent.
    """
    graph = nx.MultiGraph()
    graph.add_nodes_from(block.nodes)
    for u, v, sign in block.edges(data="sign"):
        graph.add_edge(u, v, sign=sign)
    mixed = len({sign for _, _, sign in graph.edges(data="sign")}) > 1
    changed = True
    while changed:
        changed = _merge_parallel(graph)
        if mixed:
            changed = _remove_hanging(graph) or changed
    return graph


def theta_twists(graph: nx.MultiGraph) -> Optional[Tuple[int, ...]]:
    """
    Torsions du graphe thêta: deux sommets de branchement reliés par des
    chemins de signe constant; un chemin de longueur l et de signe `-` vaut +l
    """
    branch = [v for v in graph.nodes if graph.degree(v) != 2]
    if len(branch) != 2:
        return None
    start, end = branch
    twists = []
    for _, first, key, sign in graph.edges(start, keys=True, data="sign"):
        last = (start, first, key)
        current, length, signs = first, 1, {sign}
        while current not in (start, end):
            nxt = next(
                (a, b, k, s) for a, b, k, s in graph.edges(current, keys=True, data="sign")
                if {a, b} != {last[0], last[1]} or k != last[2]
            )
            signs.add(nxt[3])
            length += 1
            last = nxt[:3]
            current = nxt[1]
        if current != end or len(signs) != 1:
            return None
        twists.append(length if sign == -1 else -length)
    return tuple(sorted(twists))


def is_genus_one_shape(twists: Sequence[int]) -> bool:
    """P(-1,3,k) pour k dans {3,4,5}, au miroir près: surface de Seifert de genre un de 3_1, 4_1 ou 5_2"""
    if len(twists) != 3:
        return False
    ordered = sorted(twists, key=abs)
    unit, rest = ordered[0], ordered[1:]
    if abs(unit) != 1 or abs(rest[0]) != 3 or abs(rest[1]) not in (3, 4, 5):
        return False
    return rest[0] * rest[1] > 0 and unit * rest[0] < 0


# ----------------------------------------------------------------------
# Conjectures et constructeurs de certificats
# ----------------------------------------------------------------------

def implied_conjectures(route: Route, facts: SurfaceSummary) -> List[Conjecture]:
    """Conjectures établies par le témoin, la plus forte d'abord"""
    if route == Route.TORUS_KNOT_ANNULUS:
        result = [Conjecture.NEUWIRTH]
        if facts.even_slope:
            result += [Conjecture.EVEN_SLOPE, Conjecture.STRONG_EVEN_SLOPE]
        return result
    if facts.orientable:
        return []
    result = [Conjecture.STRONG_NEUWIRTH, Conjecture.NEUWIRTH]
    if facts.even_slope:
        result += [Conjecture.STRONG_EVEN_SLOPE, Conjecture.EVEN_SLOPE]
    return result


def _require_knot(d: Diagram):
    if not d.is_knot:
        raise InputError(f"{d.name or 'diagramme'}: entrelacs à {d.component_count} composantes")


def state_certificate(d: Diagram, s: State, route: Route, subject: str, **fields) -> Certificate:
    """
    Certificat d'une surface d'état; les faits de surface sont calculés ici

    Raises:
        InputError: surface orientable (aucune conjecture forte n'est établie)
    """
    facts = surface_summary(d, s)
    conjectures = implied_conjectures(route, facts)
    if not conjectures:
        raise InputError(f"{subject}: la surface du témoin est orientable")
    return Certificate(
        subject=subject,
        conjecture=conjectures[0],
        implied=conjectures[1:],
        route=route,
        pd_code=d.to_pd(),
        state=str(s),
        surface_facts=facts,
        **fields,
    )


def torus_certificate(subject: str, p: int, q: int, steps: Optional[List[CaseStep]] = None) -> Certificate:
    """Anneau essentiel du nœud torique T(p, q), de pente pq"""
    _check_torus(p, q)
    facts = _torus_facts(p, q)
    conjectures = implied_conjectures(Route.TORUS_KNOT_ANNULUS, facts)
    return Certificate(
        subject=subject,
        conjecture=conjectures[0],
        implied=conjectures[1:],
        route=Route.TORUS_KNOT_ANNULUS,
        torus=(p, q),
        steps=steps or [],
        surface_facts=facts,
    )


def _check_torus(p: int, q: int):
    if math.gcd(p, q) != 1 or abs(p) < 2 or abs(q) < 2:
        raise InputError(f"T({p},{q}) n'est pas un nœud torique non trivial")


def _torus_facts(p: int, q: int) -> SurfaceSummary:
    return SurfaceSummary(
        euler_characteristic=0,
        orientable=True,
        boundary_components=2,
        boundary_slope=p * q,
        genus=0,
    )


def certify_state(d: Diagram, s: State, subject: Optional[str] = None) -> Certificate:
    """
    Route d'état adéquat et homogène, distinct de l'état de Seifert

    Raises:
        InputError: l'état ne satisfait pas les hypothèses ou le certificat ne valide pas
    """
    subject = subject or d.name or d.to_pd()
    _require_knot(d)
    check = check_state(d, s)
    if not (check.adequate and check.homogeneous and not check.is_seifert):
        raise InputError(f"{subject}: état {s} non candidat ({check})")
    certificate = state_certificate(d, s, Route.ADEQUATE_HOMOGENEOUS_STATE, subject)
    result = validate_certificate(certificate)
    if not result.valid:
        raise InputError(f"{subject}: " + "; ".join(result.reasons))
    return certificate


def pretzel_certificate(p: PretzelPresentation, subject: Optional[str] = None) -> Certificate:
    """
    Route de la surface de bretzel

    Raises:
        InputError: forme non admise, exception du critère ou entrelacs
    """
    verdict = pretzel_essential(p)
    if not verdict.essential:
        raise InputError(f"{p}: surface de bretzel non essentielle ({verdict.reason})")
    built = build_pretzel(p)
    _require_knot(built.diagram)
    certificate = state_certificate(
        built.diagram,
        built.poles_state,
        Route.PRETZEL_SURFACE,
        subject or str(p),
        presentation=str(p),
        verdict=verdict,
    )
    _ensure_valid(certificate)
    return certificate


def graph_certificate(g: WeightedPlanarGraph, subject: Optional[str] = None) -> Certificate:
    """
    Route du damier F_G d'un graphe planaire pondéré

    Raises:
        InputError: critère non concluant ou négatif, ou entrelacs
    """
    verdict = graph_checkerboard_essential(g)
    if not verdict.essential:
        raise InputError(f"Critère de damier non concluant: {verdict.reason}")
    built = build_graph_diagram(g)
    _require_knot(built.diagram)
    certificate = state_certificate(
        built.diagram,
        built.poles_state,
        Route.GRAPH_CHECKERBOARD,
        subject or "K_G",
        graph=g.to_text(),
        verdict=verdict,
    )
    _ensure_valid(certificate)
    return certificate


def tait_certificate(d: Diagram, s: State, subject: Optional[str] = None) -> Certificate:
    """Route du damier appliquée au graphe de Tait d'un état de damier d'un diagramme donné"""
    _require_knot(d)
    g = tait_graph(d, s)
    verdict = graph_checkerboard_essential(g)
    if not verdict.essential:
        raise InputError(f"Critère de damier non concluant: {verdict.reason}")
    certificate = state_certificate(
        d, s, Route.GRAPH_CHECKERBOARD, subject or d.name or d.to_pd(),
        graph=g.to_text(), verdict=verdict,
    )
    _ensure_valid(certificate)
    return certificate


def _ensure_valid(certificate: Certificate):
    result = validate_certificate(certificate)
    if not result.valid:
        raise InvariantViolation(
            f"Certificat {certificate.route.value} invalide pour {certificate.subject}: "
            + "; ".join(result.reasons)
        )


# ----------------------------------------------------------------------
# Machine à cas de Montesinos
# ----------------------------------------------------------------------

def _ceil_inverse(slope: Fraction) -> int:
    return math.ceil(1 / abs(Fraction(slope)))


def _step(name: str, **values) -> CaseStep:
    return CaseStep(name=name, values={key: str(value) for key, value in values.items()})


def _order_text(order: Sequence[int]) -> str:
    return ",".join(str(i) for i in order)


@log_execution_time("montesinos_certify")
def montesinos_certify(
    m: MontesinosPresentation,
    max_depth: int = DEFAULT_MAX_DEPTH,
    subject: Optional[str] = None,
) -> Certificate:
    """
    Certifie la conjecture forte de Neuwirth pour un nœud de Montesinos

    R- = 0: damier alterné; R- >= 2: état sigma+ (ou sigma- si sigma+ est de
    Seifert); R- = 1 et sigma+ non orientable: sigma+; sinon mineur de bretzel,
    avec les cas exceptionnels traités par déformation et états ad hoc.
    Les formes toriques sont réorientées vers l'anneau essentiel.

    Raises:
        InputError: entrelacs, nœud trivial ou entrelacs scindé
        InvariantViolation: branche dont les hypothèses échouent ou ré-aiguillage cyclique
    """
    subject = subject or str(m)
    norm = normalize_montesinos(m)
    steps = [_step("normalize", output=norm, mirrored=norm.mirrored != m.mirrored)]
    logger.info("🚀 Certification Montesinos", subject=subject, normalized=str(norm))

    torus = torus_form(norm)
    if torus is not None:
        logger.info("📋 Forme torique reconnue", subject=subject, torus=torus)
        return torus_certificate(subject, *torus, steps=steps)

    if norm.is_two_bridge:
        return _two_bridge_certificate(norm, subject, steps)

    built = build_montesinos(norm)
    _require_knot(built.diagram)
    d = built.diagram

    if norm.r_minus == 0:
        return _alternating_certificate(built, subject, steps, presentation=norm)

    plus = State.uniform(d.size, 1)
    minus = State.uniform(d.size, -1)
    if norm.r_minus >= 2:
        state = minus if check_state(d, plus).is_seifert else plus
        certificate = state_certificate(
            d, state, Route.ADEQUATE_HOMOGENEOUS_STATE, subject,
            presentation=str(norm), steps=steps,
        )
        _ensure_valid(certificate)
        return certificate

    if not surface_summary(d, plus).orientable:
        certificate = state_certificate(
            d, plus, Route.ADEQUATE_HOMOGENEOUS_STATE, subject,
            presentation=str(norm), steps=steps,
        )
        _ensure_valid(certificate)
        return certificate

    logger.info("📋 Nœud positif: passage au mineur de bretzel", subject=subject)
    return _certify_positive(norm, subject, steps, max_depth, seen=set())


def _two_bridge_certificate(
    norm: MontesinosPresentation, subject: str, steps: List[CaseStep]
) -> Certificate:
    numerator, denominator = two_bridge_fraction(norm)
    built = build_two_bridge(norm)
    _require_knot(built.diagram)
    steps = steps + [_step("two_bridge", fraction=f"{numerator}/{denominator}")]
    rational = MontesinosPresentation(slopes=(Fraction(numerator, denominator),))
    return _alternating_certificate(built, subject, steps, presentation=rational)


def _alternating_certificate(
    built: BuiltDiagram,
    subject: str,
    steps: List[CaseStep],
    presentation: MontesinosPresentation,
) -> Certificate:
    d = built.diagram
    for state in checkerboard_states(d):
        if not surface_summary(d, state).orientable:
            certificate = state_certificate(
                d, state, Route.ALTERNATING_CHECKERBOARD, subject,
                presentation=str(presentation), steps=steps,
            )
            _ensure_valid(certificate)
            return certificate
    raise InvariantViolation(f"{subject}: aucune surface de damier non orientable")


def _minor_certificate(
    built: BuiltDiagram,
    state: State,
    minor: PretzelPresentation,
    subject: str,
    presentation: MontesinosPresentation,
    steps: List[CaseStep],
) -> Certificate:
    steps = steps + [_step("deplumb", minor=minor)]
    certificate = state_certificate(
        built.diagram, state, Route.MURASUGI_MINOR, subject,
        presentation=str(presentation), minor=str(minor), steps=steps,
    )
    _ensure_valid(certificate)
    logger.info("✅ Certificat par mineur", subject=subject, minor=str(minor))
    return certificate


def _certify_positive(
    norm: MontesinosPresentation,
    subject: str,
    steps: List[CaseStep],
    max_depth: int,
    seen: Set[str],
) -> Certificate:
    key = str(norm)
    if key in seen or len(seen) >= max_depth:
        raise InvariantViolation(f"{subject}: ré-aiguillage cyclique ou trop profond ({key})")
    seen.add(key)

    minor = deplumb_to_pretzel(norm)
    verdict = pretzel_essential(minor)
    built = build_montesinos(norm)
    if verdict.essential:
        return _minor_certificate(built, built.poles_state, minor, subject, norm, steps)

    if norm.size != 3:
        raise InvariantViolation(f"{subject}: mineur exceptionnel {minor} hors de n = 3")
    r1 = -norm.slopes[0]
    ceilings = [_ceil_inverse(r) for r in norm.slopes]
    if sorted(ceilings[1:]) in ([3, 3], [3, 4], [3, 5]):
        if r1 != Fraction(1, 2):
            return _case_one_a(norm, built, ceilings, subject, steps)
        return _case_one_b(norm, ceilings, subject, steps)
    if 2 in ceilings[1:]:
        return _case_two(norm, ceilings, subject, steps, max_depth, seen)
    raise InvariantViolation(f"{subject}: mineur exceptionnel inattendu {minor}")


def _case_one_a(norm, built, ceilings, subject, steps) -> Certificate:
    """Toutes les lissages `-` sauf le croisement vertical du bas de l'enchevêtrement -r1"""
    bottom = built.bottom_vertical(0)
    if len(bottom) != 1:
        raise InvariantViolation(f"{subject}: {len(bottom)} croisements verticaux en bas de -r1")
    state = State.uniform(built.diagram.size, -1).flip(bottom[0])
    minor = PretzelPresentation((-1,) + tuple(ceilings[1:]))
    steps = steps + [_step("flip", base="-", crossings=bottom[0])]
    return _minor_certificate(built, state, minor, subject, norm, steps)


def _case_one_b(norm, ceilings, subject, steps) -> Certificate:
    """r1 = 1/2: déformation en M(1/2, r2 - 1, r3)"""
    if 4 in ceilings[1:]:
        target = 2 if ceilings[2] == 4 else 1
        order = (0, 1, 2) if target == 2 else (0, 2, 1)
        reordered = norm.reorder(order)
        deformed = reordered.deform_at(0)
        steps = steps + [_step("reorder", order=_order_text(order)), _step("deform", index=0)]
        built = build_montesinos(deformed)
        return _minor_certificate(
            built, built.poles_state, PretzelPresentation((2, -2, 4)), subject, deformed, steps,
        )

    candidates = [j for j in (2, 1) if norm.slopes[j].numerator != 1]
    if not candidates:
        raise InvariantViolation(f"{subject}: pentes unitaires hors des formes toriques")
    order = (0, 1, 2) if candidates[0] == 2 else (0, 2, 1)
    reordered = norm.reorder(order)
    deformed = reordered.deform_at(0)
    built = build_montesinos(deformed)
    inner = built.inner_crossings(2)
    state = built.poles_state.flip(*inner)
    minor = PretzelPresentation((2, -2, _ceil_inverse(deformed.slopes[2]) - 1))
    steps = steps + [
        _step("reorder", order=_order_text(order)),
        _step("deform", index=0),
        _step("smooth_inner", tangle=2, crossings=_order_text(inner)),
    ]
    return _minor_certificate(built, state, minor, subject, deformed, steps)


def _case_two(norm, ceilings, subject, steps, max_depth, seen) -> Certificate:
    """Mineur (-2, 2, impair): la pente de plafond 2 passe en r2"""
    order = (0, 1, 2) if ceilings[1] == 2 else (0, 2, 1)
    reordered = norm.reorder(order)
    steps = steps + [_step("reorder", order=_order_text(order))]
    r1, r2, r3 = -reordered.slopes[0], reordered.slopes[1], reordered.slopes[2]

    if r2 != Fraction(1, 2):
        t2 = r2 / (1 - r2)
        if math.floor(t2) < 2:
            raise InvariantViolation(f"{subject}: floor(t2) = {math.floor(t2)} < 2")
        if math.floor(t2) % 2 != 0:
            # le mineur reste valable, seule la validation du certificat tranche
            logger.warning("⚠️ floor(t2) impair, mineur conservé", subject=subject, t2=str(t2))
            steps = steps + [_step("parity", t2=t2, floor=math.floor(t2))]
        deformed = reordered.deform_at(0)
        built = build_montesinos(deformed)
        minor = PretzelPresentation((
            _ceil_inverse(1 - r1), -_ceil_inverse(1 - r2), _ceil_inverse(r3),
        ))
        steps = steps + [_step("deform", index=0)]
        return _minor_certificate(built, built.poles_state, minor, subject, deformed, steps)

    deformed = reordered.deform_at(0)
    rotated = deformed.reorder((1, 2, 0))
    steps = steps + [_step("deform", index=0), _step("reorder", order="1,2,0")]
    logger.debug("📋 Cas (-2,2,impair) avec r2 = 1/2: ré-aiguillage", subject=subject, next=str(rotated))
    return _certify_positive(rotated, subject, steps, max_depth, seen)


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------

def _check_facts(c: Certificate, d: Diagram, s: State, reasons: List[str]):
    facts = surface_summary(d, s)
    for name in ("euler_characteristic", "orientable", "boundary_components", "boundary_slope"):
        if getattr(facts, name) != getattr(c.surface_facts, name):
            reasons.append(
                f"{name} annoncé {getattr(c.surface_facts, name)}, recalculé {getattr(facts, name)}"
            )
    claimed = [c.conjecture] + list(c.implied)
    established = implied_conjectures(c.route, facts)
    missing = [conjecture.value for conjecture in claimed if conjecture not in established]
    if missing:
        reasons.append(f"conjectures non établies par le témoin: {', '.join(missing)}")


def _witness(c: Certificate) -> Tuple[Diagram, State]:
    if not c.pd_code or c.state is None:
        raise InputError("témoin incomplet: code PD ou état manquant")
    d = parse_pd(c.pd_code, name=c.subject)
    s = State.parse(c.state)
    if len(s) != d.size:
        raise InputError("longueur de l'état différente du nombre de croisements")
    if not d.is_knot:
        raise InputError("le témoin n'est pas un nœud")
    return d, s


def _leaves_ok(d: Diagram, s: State, reasons: List[str]):
    for index, (leaf, leaf_state) in enumerate(murasugi_leaves(d, s)):
        if leaf.size == 1 and check_state(leaf, leaf_state).adequate:
            continue
        if not is_reduced(leaf):
            reasons.append(f"feuille {index} non réduite")
        elif not is_prime(leaf):
            reasons.append(f"feuille {index} non première")


def _validate_alternating(c: Certificate, reasons: List[str]):
    d, s = _witness(c)
    if not is_alternating(d):
        reasons.append("diagramme non alterné")
    if not is_reduced(d):
        reasons.append("diagramme non réduit")
    if not is_checkerboard_state(d, s):
        reasons.append("l'état n'est pas un état de damier")
    elif not check_state(d, s).adequate:
        reasons.append("état de damier non adéquat")
    _check_facts(c, d, s, reasons)


def _validate_state(c: Certificate, reasons: List[str]):
    d, s = _witness(c)
    check = check_state(d, s)
    if not check.adequate:
        reasons.append("état non adéquat")
    if not check.homogeneous:
        reasons.append("état non homogène")
    if check.is_seifert:
        reasons.append("état de Seifert: surface orientable")
    if check.adequate and check.homogeneous:
        _leaves_ok(d, s, reasons)
    _check_facts(c, d, s, reasons)


def _minor_blocks_ok(d: Diagram, s: State, minor: PretzelPresentation, reasons: List[str]):
    graph = state_graph(d, s)
    mixed_blocks = 0
    for index, block in enumerate(graph.blocks):
        signs = {s[crossing] for crossing in block}
        sub = graph.block_subgraph(index)
        if len(signs) == 1:
            if any(u == v for u, v in sub.edges()):
                reasons.append(f"bloc {index} de signe constant non adéquat")
            continue
        mixed_blocks += 1
        twists = theta_twists(reduce_block(sub))
        if twists is None:
            reasons.append(f"bloc {index} ne se réduit pas à un graphe thêta")
        elif sorted(twists) != sorted(minor.twists):
            reasons.append(f"bloc {index} réduit à P{twists}, mineur annoncé {minor}")
    if mixed_blocks != 1:
        reasons.append(f"{mixed_blocks} blocs de signes mêlés (un seul attendu)")


def _replay_steps(c: Certificate, reasons: List[str]):
    """Rejoue normalize/reorder/deform et les modifications d'état depuis le sujet"""
    try:
        current = MontesinosPresentation.parse(c.subject)
    except InputError:
        return
    base, flips, smoothed = None, [], []
    for step in c.steps:
        if step.name == "normalize":
            current = normalize_montesinos(current)
        elif step.name == "reorder":
            current = current.reorder([int(i) for i in step.values["order"].split(",")])
        elif step.name == "deform":
            current = current.deform_at(int(step.values["index"]))
        elif step.name == "flip":
            base = step.values.get("base", base)
            flips += [int(i) for i in step.values["crossings"].split(",") if i]
        elif step.name == "smooth_inner":
            smoothed += [int(i) for i in step.values["crossings"].split(",") if i]
    if str(current) != c.presentation:
        reasons.append(f"étapes rejouées: {current}, annoncé {c.presentation}")
        return
    built = build_montesinos(current)
    if built.diagram.to_pd() != c.pd_code:
        reasons.append("le diagramme ne correspond pas à la présentation rejouée")
        return
    state = State.uniform(built.diagram.size, -1) if base == "-" else built.poles_state
    state = state.flip(*flips)
    for crossing in smoothed:
        if state[crossing] == built.flat_sign(crossing):
            state = state.flip(crossing)
    if str(state) != c.state:
        reasons.append(f"état rejoué {state}, annoncé {c.state}")


def _validate_minor(c: Certificate, reasons: List[str]):
    d, s = _witness(c)
    if not c.minor:
        raise InputError("mineur manquant")
    minor = PretzelPresentation.parse(c.minor)
    if not is_genus_one_shape(minor.twists):
        verdict = pretzel_essential(minor)
        if not verdict.essential:
            reasons.append(f"mineur {minor} non essentiel ({verdict.reason})")
    _minor_blocks_ok(d, s, minor, reasons)
    if c.presentation and c.steps:
        _replay_steps(c, reasons)
    _check_facts(c, d, s, reasons)


def _validate_pretzel(c: Certificate, reasons: List[str]):
    d, s = _witness(c)
    p = PretzelPresentation.parse(c.presentation or "")
    built = build_pretzel(p)
    if built.diagram.to_pd() != c.pd_code:
        reasons.append("le diagramme n'est pas celui du bretzel annoncé")
    if built.poles_state != s:
        reasons.append("l'état n'est pas celui de la surface de bretzel")
    verdict = pretzel_essential(p)
    if not verdict.essential:
        reasons.append(f"{p} non essentiel ({verdict.reason})")
    _minor_blocks_ok(d, s, p, reasons)
    _check_facts(c, d, s, reasons)


def _validate_graph(c: Certificate, reasons: List[str]):
    d, s = _witness(c)
    g = WeightedPlanarGraph.parse(c.graph or "")
    rebuilt = build_graph_diagram(g)
    matches_rebuild = rebuilt.diagram.to_pd() == c.pd_code and rebuilt.poles_state == s
    if not matches_rebuild:
        if not is_checkerboard_state(d, s) or tait_graph(d, s).to_text() != g.to_text():
            reasons.append("le graphe ne correspond ni à K_G ni au graphe de Tait du témoin")
    verdict = graph_checkerboard_essential(g)
    if not verdict.essential:
        reasons.append(f"critère de damier: {verdict.reason}")
    _check_facts(c, d, s, reasons)


def _validate_torus(c: Certificate, reasons: List[str]):
    if c.torus is None:
        raise InputError("paramètres toriques manquants")
    p, q = c.torus
    _check_torus(p, q)
    facts = _torus_facts(p, q)
    if c.surface_facts.boundary_slope != p * q or c.surface_facts.euler_characteristic != 0:
        reasons.append("faits de l'anneau incohérents avec T(p,q)")
    claimed = [c.conjecture] + list(c.implied)
    established = implied_conjectures(Route.TORUS_KNOT_ANNULUS, facts)
    missing = [conjecture.value for conjecture in claimed if conjecture not in established]
    if missing:
        reasons.append(f"conjectures non établies par l'anneau: {', '.join(missing)}")


_VALIDATORS: Dict[Route, Callable[[Certificate, List[str]], None]] = {
    Route.ALTERNATING_CHECKERBOARD: _validate_alternating,
    Route.ADEQUATE_HOMOGENEOUS_STATE: _validate_state,
    Route.PRETZEL_SURFACE: _validate_pretzel,
    Route.GRAPH_CHECKERBOARD: _validate_graph,
    Route.MURASUGI_MINOR: _validate_minor,
    Route.TORUS_KNOT_ANNULUS: _validate_torus,
}


def validate_certificate(c: Certificate) -> ValidationResult:
    """
    Revérifie un certificat à partir de son seul témoin

    Ne lève pas d'exception: un témoin illisible donne valid=False avec sa raison.
    """
    reasons: List[str] = []
    try:
        _VALIDATORS[c.route](c, reasons)
    except (InputError, InvariantViolation, KeyError, ValueError) as exc:
        reasons.append(f"témoin illisible: {exc}")
    if reasons:
        logger.debug("❌ Certificat rejeté", subject=c.subject, route=c.route.value, reasons=reasons)
    return ValidationResult(valid=not reasons, reasons=reasons)
