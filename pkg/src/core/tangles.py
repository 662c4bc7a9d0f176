"""
Enchevêtrements rationnels, présentations de Montesinos et de bretzel,
graphes planaires pondérés et synthèse de diagrammes

Convention des fractions continues: le tuple (a1, ..., an) a pour fraction
an + 1/(a(n-1) + 1/(... + 1/a1)); (3, 2, 4) donne 31/7. Le terme ak est une
torsion horizontale si n - k est pair, verticale sinon.

Convention des croisements: un croisement X+ (torsion positive) a le brin
SO-NE au-dessus, un croisement X- le brin SE-NO. Le lissage `=` (arcs
horizontaux) est `-` sur X+ et `+` sur X-; le lissage `||` est l'inverse.
"""

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import structlog

from src.core.diagram import Diagram
from src.core.states import State, is_checkerboard_state, state_graph
from src.utils.errors import InputError, InvariantViolation

logger = structlog.get_logger()


# ----------------------------------------------------------------------
# Fractions continues
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    """Termes (a1, ..., an) dans l'ordre des torsions"""
    terms: Tuple[int, ...]

    @property
    def is_standard(self) -> bool:
        return all(a >= 0 for a in self.terms) or all(a <= 0 for a in self.terms)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.terms) + ")"


def fraction_of(cf: ContinuedFraction) -> Fraction:
    """Évaluation exacte an + 1/(... + 1/a1)"""
    if not cf.terms:
        raise InputError("Fraction continue vide")
    value = Fraction(cf.terms[0])
    for term in cf.terms[1:]:
        if value == 0:
            raise InputError(f"Dénominateur intermédiaire nul dans {cf}")
        value = term + 1 / value
    return value


def standard_cf(q: Fraction) -> ContinuedFraction:
    """Développement glouton par troncature vers zéro; tous les termes ont le même signe"""
    q = Fraction(q)
    if q == 0:
        raise InputError("La pente 0 n'a pas de forme standard")
    terms = []
    value = q
    while True:
        whole = math.trunc(value)
        terms.append(whole)
        rest = value - whole
        if rest == 0:
            break
        value = 1 / rest
    return ContinuedFraction(tuple(reversed(terms)))


def sum_slope(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) + Fraction(b)


def rotate_slope(a: Fraction) -> Fraction:
    """Rotation d'un quart de tour: a devient -1/a"""
    if a == 0:
        raise InputError("La rotation de la pente 0 donne l'infini")
    return -1 / Fraction(a)


def deform(pair: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
    """
    Réécrit la somme (-r1, r2) en (1 - r1, r2 - 1), avec 0 < r1, r2 < 1

    Les sous-pentes de la preuve sont -r1/(1-r1) et r2/(1-r2).
    """
    first, second = Fraction(pair[0]), Fraction(pair[1])
    r1, r2 = -first, second
    if not (0 < r1 < 1 and 0 < r2 < 1):
        raise InputError(f"deform attend (-r1, r2) avec 0 < r1, r2 < 1, reçu {pair}")
    return (1 - r1, r2 - 1)


def deform_sub_slopes(pair: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
    r1, r2 = -Fraction(pair[0]), Fraction(pair[1])
    return (-r1 / (1 - r1), r2 / (1 - r2))


# ----------------------------------------------------------------------
# Présentations
# ----------------------------------------------------------------------

def _format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


_MONTESINOS = re.compile(r"^\s*M\s*\((?P<body>[^;)]*)(;\s*e\s*=\s*(?P<framing>-?\d+))?\s*\)\s*$")
_PRETZEL = re.compile(r"^\s*P\s*\((?P<body>[^)]*)\)\s*$")


@dataclass(frozen=True)
class MontesinosPresentation:
    """
    M(r1, ..., rn) avec un entier de cadrage e ajouté à la première pente

    Attributes:
        slopes: pentes rationnelles non nulles
        framing: entier e
        mirrored: vrai si la normalisation a remplacé le nœud par son miroir
    """
    slopes: Tuple[Fraction, ...]
    framing: int = 0
    mirrored: bool = field(default=False, compare=False)

    def __post_init__(self):
        if any(Fraction(r) == 0 for r in self.slopes):
            raise InputError("Une pente de Montesinos ne peut pas être nulle")

    @classmethod
    def parse(cls, text: str) -> "MontesinosPresentation":
        match = _MONTESINOS.match((text or "").replace("−", "-"))
        if not match:
            raise InputError(f"Présentation de Montesinos malformée: {text!r}")
        try:
            slopes = tuple(Fraction(item.strip()) for item in match.group("body").split(",") if item.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"Pente invalide dans {text!r}: {exc}") from exc
        if not slopes:
            raise InputError(f"Présentation de Montesinos vide: {text!r}")
        framing = int(match.group("framing") or 0)
        return cls(slopes=slopes, framing=framing)

    @property
    def size(self) -> int:
        return len(self.slopes)

    @property
    def r_minus(self) -> int:
        return sum(1 for r in self.slopes if r < 0)

    @property
    def r_plus(self) -> int:
        return sum(1 for r in self.slopes if r > 0)

    @property
    def is_two_bridge(self) -> bool:
        return self.size < 3

    @property
    def total(self) -> Fraction:
        """e + somme des pentes, invariant du revêtement double ramifié"""
        return self.framing + sum(self.slopes, Fraction(0))

    def mirror(self) -> "MontesinosPresentation":
        return MontesinosPresentation(
            slopes=tuple(-r for r in self.slopes),
            framing=-self.framing,
            mirrored=not self.mirrored,
        )

    def reorder(self, order: Sequence[int]) -> "MontesinosPresentation":
        """Permutation diédrale des pentes (rotation cyclique ou retournement)"""
        n = self.size
        if sorted(order) != list(range(n)):
            raise InputError(f"Ordre invalide: {order}")
        rotations = [[(start + k) % n for k in range(n)] for start in range(n)]
        allowed = rotations + [list(reversed(rotation)) for rotation in rotations]
        if list(order) not in allowed:
            raise InputError(f"Permutation non diédrale: {order}")
        return MontesinosPresentation(
            slopes=tuple(self.slopes[i] for i in order),
            framing=self.framing,
            mirrored=self.mirrored,
        )

    def deform_at(self, index: int) -> "MontesinosPresentation":
        """Applique deform à la paire (index, index + 1)"""
        if self.framing != 0 or not 0 <= index < self.size - 1:
            raise InputError("deform demande un cadrage nul et une paire adjacente")
        new_pair = deform((self.slopes[index], self.slopes[index + 1]))
        slopes = list(self.slopes)
        slopes[index:index + 2] = new_pair
        return MontesinosPresentation(slopes=tuple(slopes), framing=0, mirrored=self.mirrored)

    def __str__(self) -> str:
        body = ",".join(_format_fraction(Fraction(r)) for r in self.slopes)
        if self.framing:
            return f"M({body};e={self.framing})"
        return f"M({body})"


@dataclass(frozen=True)
class PretzelPresentation:
    """P(p1, ..., pn), torsions entières non nulles"""
    twists: Tuple[int, ...]

    def __post_init__(self):
        if not self.twists or any(p == 0 for p in self.twists):
            raise InputError("Un bretzel demande au moins une torsion, toutes non nulles")

    @classmethod
    def parse(cls, text: str) -> "PretzelPresentation":
        match = _PRETZEL.match((text or "").replace("−", "-"))
        if not match:
            raise InputError(f"Présentation de bretzel malformée: {text!r}")
        try:
            twists = tuple(int(item) for item in match.group("body").split(",") if item.strip())
        except ValueError as exc:
            raise InputError(f"Torsion invalide dans {text!r}") from exc
        return cls(twists=twists)

    def to_montesinos(self) -> MontesinosPresentation:
        return MontesinosPresentation(slopes=tuple(Fraction(1, p) for p in self.twists))

    def mirror(self) -> "PretzelPresentation":
        return PretzelPresentation(tuple(-p for p in self.twists))

    def __str__(self) -> str:
        return "P(" + ",".join(str(p) for p in self.twists) + ")"


def parse_presentation(text: str):
    """Lit `M(...)` ou `P(...)`"""
    stripped = (text or "").strip()
    if stripped.startswith("M"):
        return MontesinosPresentation.parse(stripped)
    if stripped.startswith("P") and not stripped.startswith("PD"):
        return PretzelPresentation.parse(stripped)
    raise InputError(f"Présentation inconnue: {text!r}")


def normalize_montesinos(m: MontesinosPresentation) -> MontesinosPresentation:
    """
    Forme normale: |ri| < 1, cadrage transféré, R- <= R+, négatives en tête

    Les parties entières passent dans le cadrage e, les pentes entières
    disparaissent, puis k = -e pentes sont décalées de -1 (d'abord celles qui
    étaient négatives, puis les plus grandes). Si k > n - k on passe au miroir.
    """
    return _normalize(m, allow_mirror=True)


def _normalize(m: MontesinosPresentation, allow_mirror: bool) -> MontesinosPresentation:
    kept = []
    framing = m.framing
    for index, slope in enumerate(m.slopes):
        slope = Fraction(slope)
        whole = math.floor(slope)
        framing += whole
        rest = slope - whole
        if rest != 0:
            kept.append((rest, slope < 0, index))

    n = len(kept)
    shift = -framing
    if allow_mirror and shift > n - shift:
        mirrored = _normalize(m.mirror(), allow_mirror=False)
        logger.debug("📋 Présentation remplacée par son miroir", input=str(m), output=str(mirrored))
        return mirrored

    if 0 <= shift <= n:
        order = sorted(range(n), key=lambda j: (not kept[j][1], -kept[j][0], kept[j][2]))
        chosen = set(order[:shift])
        slopes = [kept[j][0] - 1 if j in chosen else kept[j][0] for j in range(n)]
        framing = 0
    else:
        slopes = [rest for rest, _, _ in kept]

    negatives = [j for j, r in enumerate(slopes) if r < 0]
    if negatives:
        start = negatives[0]
        slopes = slopes[start:] + slopes[:start]

    result = MontesinosPresentation(slopes=tuple(slopes), framing=framing, mirrored=m.mirrored)
    expected = m.total
    if result.total != expected:
        raise InvariantViolation(f"La normalisation a changé e + Σr: {expected} -> {result.total}")
    return result


def pretzel_minor(slopes: Sequence[Fraction]) -> PretzelPresentation:
    """Torsions signe(r) * ceil(1/|r|) pour 0 < |r| < 1"""
    twists = []
    for slope in slopes:
        slope = Fraction(slope)
        if not 0 < abs(slope) < 1:
            raise InputError(f"Pente hors de ]-1, 1[: {slope}")
        twists.append((1 if slope > 0 else -1) * math.ceil(1 / abs(slope)))
    return PretzelPresentation(tuple(twists))


def deplumb_to_pretzel(m: MontesinosPresentation) -> PretzelPresentation:
    """
    Mineur de bretzel P(-ceil(1/r1), ceil(1/r2), ..., ceil(1/rn))

    Raises:
        InputError: présentation non normalisée, R- != 1 ou pente négative non en tête
    """
    if m.framing != 0 or m.r_minus != 1 or m.slopes[0] >= 0:
        raise InputError(f"deplumb_to_pretzel attend M(-r1, r2, ..., rn) normalisée, reçu {m}")
    return pretzel_minor(m.slopes)


def torus_form(m: MontesinosPresentation) -> Optional[Tuple[int, int]]:
    """Formes toriques reconnues après normalisation: T(3,4) et T(3,5)"""
    if m.framing != 0 or m.size != 3:
        return None
    shape = sorted(m.slopes)
    sign = -1 if m.mirrored else 1
    if shape == [Fraction(-1, 2), Fraction(1, 3), Fraction(1, 3)]:
        return (3, 4 * sign)
    if shape == [Fraction(-1, 2), Fraction(1, 5), Fraction(1, 3)]:
        return (3, 5 * sign)
    return None


def two_bridge_fraction(m: MontesinosPresentation) -> Tuple[int, int]:
    """
    Fraction P/Q (0 < Q < P) du nœud à deux ponts N(r1 + e) ou N((r1 + e) + r2)

    Raises:
        InputError: plus de deux pentes, ou entrelacs trivial (P = 0) ou nœud trivial (P = 1)
    """
    if m.size > 2:
        raise InputError(f"{m} n'est pas une somme de deux enchevêtrements")
    slopes = list(m.slopes) or [Fraction(0)]
    first = sum_slope(slopes[0], Fraction(m.framing))
    p, q = first.numerator, first.denominator
    if len(slopes) == 1:
        numerator, denominator = p, q
    else:
        second = Fraction(slopes[1])
        r, s = second.numerator, second.denominator
        _, x, y = _extended_gcd(r, s)
        # r*s' - s*r' = -1
        s_prime, r_prime = -x, y
        numerator = p * s + q * r
        denominator = p * s_prime + q * r_prime
    if numerator < 0:
        numerator, denominator = -numerator, -denominator
    if numerator == 0:
        raise InputError(f"{m} est un entrelacs scindé")
    if numerator == 1:
        raise InputError(f"{m} est le nœud trivial")
    return numerator, denominator % numerator


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _extended_gcd(b, a % b)
    return g, y, x - (a // b) * y


# ----------------------------------------------------------------------
# Synthèse de diagrammes
# ----------------------------------------------------------------------

_SLOTS = {
    True: {"SE": 0, "NE": 1, "NW": 2, "SW": 3},
    False: {"SW": 0, "SE": 1, "NE": 2, "NW": 3},
}

Port = Tuple[int, str]


class CrossingTag(NamedTuple):
    """Provenance d'un croisement synthétisé"""
    tangle: int
    term: int
    horizontal: bool
    positive: bool


@dataclass
class _Tangle:
    nw: Port
    ne: Port
    sw: Port
    se: Port


class _PortBuilder:
    """Assemble des croisements par leurs extrémités NO/NE/SO/SE"""

    def __init__(self):
        self.rows: List[List[Optional[int]]] = []
        self.positive: List[bool] = []
        self.tags: List[CrossingTag] = []
        self.next_label = 1

    def crossing(self, positive: bool, tag: CrossingTag) -> int:
        self.rows.append([None] * 4)
        self.positive.append(positive)
        self.tags.append(tag)
        return len(self.rows) - 1

    def join(self, a: Port, b: Port):
        for index, end in (a, b):
            slot = _SLOTS[self.positive[index]][end]
            if self.rows[index][slot] is not None:
                raise InvariantViolation(f"Extrémité {end} du croisement {index} déjà reliée")
            self.rows[index][slot] = self.next_label
        self.next_label += 1

    def rational(self, slope: Fraction, tangle_index: int) -> _Tangle:
        cf = standard_cf(slope)
        m = len(cf.terms)
        tangle: Optional[_Tangle] = None
        for k, term in enumerate(cf.terms, start=1):
            horizontal = (m - k) % 2 == 0
            for _ in range(abs(term)):
                x = self.crossing(term > 0, CrossingTag(tangle_index, k, horizontal, term > 0))
                if tangle is None:
                    tangle = _Tangle((x, "NW"), (x, "NE"), (x, "SW"), (x, "SE"))
                elif horizontal:
                    self.join(tangle.ne, (x, "NW"))
                    self.join(tangle.se, (x, "SW"))
                    tangle = _Tangle(tangle.nw, (x, "NE"), tangle.sw, (x, "SE"))
                else:
                    self.join(tangle.sw, (x, "NW"))
                    self.join(tangle.se, (x, "NE"))
                    tangle = _Tangle(tangle.nw, tangle.ne, (x, "SW"), (x, "SE"))
        if tangle is None:
            raise InputError(f"L'enchevêtrement de pente {slope} n'a aucun croisement")
        return tangle

    def finish(self, name: Optional[str]) -> Diagram:
        if any(label is None for row in self.rows for label in row):
            raise InvariantViolation("Extrémités non reliées après synthèse")
        return Diagram.from_tuples(self.rows, name=name, orient=True)


@dataclass(frozen=True)
class BuiltDiagram:
    """Diagramme synthétisé, avec la provenance de chaque croisement"""
    diagram: Diagram
    tags: Tuple[CrossingTag, ...]

    def flat_sign(self, crossing: int) -> int:
        """Lissage `=` du croisement"""
        return -1 if self.tags[crossing].positive else 1

    @property
    def poles_state(self) -> State:
        """Lissage `=` partout: surface de damier des pôles (surface de bretzel, F_G)"""
        return State(tuple(self.flat_sign(i) for i in range(self.diagram.size)))

    @property
    def infinity_state(self) -> State:
        """Lissage `||` partout"""
        return State(tuple(-self.flat_sign(i) for i in range(self.diagram.size)))

    def tangle_crossings(self, tangle: int) -> List[int]:
        return [i for i, tag in enumerate(self.tags) if tag.tangle == tangle]

    def inner_crossings(self, tangle: int) -> List[int]:
        """Croisements du sous-enchevêtrement S situé avant le dernier groupe vertical"""
        members = self.tangle_crossings(tangle)
        vertical_terms = [self.tags[i].term for i in members if not self.tags[i].horizontal]
        if not vertical_terms:
            return []
        last = max(vertical_terms)
        return [i for i in members if self.tags[i].term < last]

    def bottom_vertical(self, tangle: int) -> List[int]:
        """Croisements du dernier groupe vertical de l'enchevêtrement"""
        members = self.tangle_crossings(tangle)
        vertical_terms = [self.tags[i].term for i in members if not self.tags[i].horizontal]
        if not vertical_terms:
            return []
        last = max(vertical_terms)
        return [i for i in members if self.tags[i].term == last]


def build_montesinos(m: MontesinosPresentation, name: Optional[str] = None) -> BuiltDiagram:
    """Somme des enchevêtrements de gauche à droite, fermeture numérateur; e s'ajoute à r1"""
    if not m.slopes:
        raise InputError("Présentation sans pente")
    builder = _PortBuilder()
    tangles = []
    for index, slope in enumerate(m.slopes):
        slope = Fraction(slope) + (m.framing if index == 0 else 0)
        tangles.append(builder.rational(slope, index))
    for left, right in zip(tangles, tangles[1:]):
        builder.join(left.ne, right.nw)
        builder.join(left.se, right.sw)
    builder.join(tangles[0].nw, tangles[-1].ne)
    builder.join(tangles[0].sw, tangles[-1].se)
    diagram = builder.finish(name or str(m))
    return BuiltDiagram(diagram=diagram, tags=tuple(builder.tags))


def build_pretzel(p: PretzelPresentation, name: Optional[str] = None) -> BuiltDiagram:
    """Colonnes verticales de |pi| croisements; Σ|pi| croisements"""
    return build_montesinos(p.to_montesinos(), name=name or str(p))


def build_two_bridge(m: MontesinosPresentation, name: Optional[str] = None) -> BuiltDiagram:
    """Diagramme alterné réduit N(P/Q) d'un nœud à deux ponts"""
    numerator, denominator = two_bridge_fraction(m)
    return build_montesinos(
        MontesinosPresentation(slopes=(Fraction(numerator, denominator),)),
        name=name or str(m),
    )


# ----------------------------------------------------------------------
# Graphes planaires pondérés
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedPlanarGraph:
    """
    Graphe planaire de S² avec poids entiers et système de rotation

    Attributes:
        vertex_count: nombre de sommets
        edges: arêtes (u, v, poids)
        rotation: pour chaque sommet, indices des arêtes dans l'ordre trigonométrique
    """
    vertex_count: int
    edges: Tuple[Tuple[int, int, int], ...]
    rotation: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InputError("Le graphe doit avoir au moins un sommet")
        for index, (u, v, w) in enumerate(self.edges):
            if w == 0:
                raise InputError(f"Poids nul sur l'arête {index}")
            if u == v:
                raise InputError(f"Boucle sur l'arête {index}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InputError(f"Sommet hors limites sur l'arête {index}")
        if len(self.rotation) != self.vertex_count:
            raise InputError("Une rotation par sommet est requise")
        for vertex, order in enumerate(self.rotation):
            incident = sorted(i for i, (u, v, _) in enumerate(self.edges) if vertex in (u, v))
            if sorted(order) != incident:
                raise InputError(f"Rotation incohérente au sommet {vertex}")
        if self.edges and self.vertex_count - len(self.edges) + self.face_count != 2:
            raise InputError("Le système de rotation ne plonge pas le graphe dans S²")

    @classmethod
    def parse(cls, text: str) -> "WeightedPlanarGraph":
        """
        Format texte:
            vertices N
            edge u v w
            rotation v: e1 e2 ...
        """
        vertex_count = None
        edges: List[Tuple[int, int, int]] = []
        rotation: Dict[int, Tuple[int, ...]] = {}
        for number, raw in enumerate((text or "").splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(":", " ").split()
            try:
                if parts[0] == "vertices":
                    vertex_count = int(parts[1])
                elif parts[0] == "edge":
                    edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
                elif parts[0] == "rotation":
                    rotation[int(parts[1])] = tuple(int(v) for v in parts[2:])
                else:
                    raise InputError(f"Directive inconnue: {parts[0]}", line=number)
            except (IndexError, ValueError) as exc:
                raise InputError(f"Ligne de graphe malformée: {raw.strip()}", line=number) from exc
        if vertex_count is None:
            raise InputError("Directive `vertices` manquante")
        return cls(
            vertex_count=vertex_count,
            edges=tuple(edges),
            rotation=tuple(rotation.get(v, ()) for v in range(vertex_count)),
        )

    def to_text(self) -> str:
        lines = [f"vertices {self.vertex_count}"]
        lines += [f"edge {u} {v} {w}" for u, v, w in self.edges]
        lines += [
            f"rotation {vertex}: " + " ".join(str(e) for e in order)
            for vertex, order in enumerate(self.rotation)
        ]
        return "\n".join(lines)

    def _head(self, edge: int, direction: int) -> int:
        u, v, _ = self.edges[edge]
        return v if direction == 0 else u

    @property
    def face_count(self) -> int:
        seen = set()
        faces = 0
        for start in ((e, d) for e in range(len(self.edges)) for d in (0, 1)):
            if start in seen:
                continue
            faces += 1
            dart = start
            while dart not in seen:
                seen.add(dart)
                edge, direction = dart
                head = self._head(edge, direction)
                order = self.rotation[head]
                following = order[(order.index(edge) + 1) % len(order)]
                dart = (following, 0 if self.edges[following][0] == head else 1)
        return faces

    @property
    def simple_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from((u, v) for u, v, _ in self.edges)
        return graph

    @property
    def is_two_connected(self) -> bool:
        graph = self.simple_graph
        return (
            self.vertex_count >= 2
            and len(self.edges) >= 2
            and nx.is_connected(graph)
            and not any(True for _ in nx.articulation_points(graph))
        )

    def parallel_edges(self, edge: int) -> List[int]:
        u, v, _ = self.edges[edge]
        return [
            i for i, (a, b, _) in enumerate(self.edges)
            if i != edge and {a, b} == {u, v}
        ]


def theta_graph(twists: Sequence[int]) -> WeightedPlanarGraph:
    """Graphe thêta dont F_G est la surface de bretzel P(p1, ..., pn)"""
    n = len(twists)
    return WeightedPlanarGraph(
        vertex_count=2,
        edges=tuple((0, 1, int(p)) for p in twists),
        rotation=(tuple(range(n - 1, -1, -1)), tuple(range(n))),
    )


def build_graph_diagram(g: WeightedPlanarGraph, name: Optional[str] = None) -> BuiltDiagram:
    """
    Diagramme K_G: chaque arête devient une bande de |w| demi-torsions

    La surface F_G est l'état `=` du diagramme obtenu.
    """
    if not g.is_two_connected:
        raise InputError("K_G demande un graphe 2-connexe")
    builder = _PortBuilder()
    # sides[(vertex, edge)] = (gauche, droite) vus depuis le sommet
    sides: Dict[Tuple[int, int], Tuple[Port, Port]] = {}
    for index, (u, v, w) in enumerate(g.edges):
        chain = [
            builder.crossing(w > 0, CrossingTag(index, k, False, w > 0))
            for k in range(abs(w))
        ]
        for lower, upper in zip(chain, chain[1:]):
            builder.join((lower, "NW"), (upper, "SW"))
            builder.join((lower, "NE"), (upper, "SE"))
        sides[(u, index)] = ((chain[0], "SW"), (chain[0], "SE"))
        sides[(v, index)] = ((chain[-1], "NE"), (chain[-1], "NW"))

    for vertex, order in enumerate(g.rotation):
        for position, edge in enumerate(order):
            following = order[(position + 1) % len(order)]
            builder.join(sides[(vertex, edge)][0], sides[(vertex, following)][1])

    diagram = builder.finish(name)
    return BuiltDiagram(diagram=diagram, tags=tuple(builder.tags))


def tait_graph(d: Diagram, s: State) -> WeightedPlanarGraph:
    """
    Graphe pondéré d'un état de damier: les chaînes de bigones de même signe
    deviennent une arête de poids -signe x longueur

    Raises:
        InputError: état qui n'est pas de damier, ou graphe avec boucle
    """
    if not is_checkerboard_state(d, s):
        raise InputError("tait_graph demande un état de damier")
    graph = state_graph(d, s)
    loops = graph.loops

    around: Dict[int, List[int]] = {}
    for face in d.faces:
        i, p = face[0]
        disk_corners = (0, 2) if s[i] == 1 else (1, 3)
        if all(cp in ((0, 2) if s[ci] == 1 else (1, 3)) for ci, cp in face):
            loop = loops.loop_of_label[d.labels(i)[(p + 1) % 4]]
            around[loop] = [ci for ci, _ in face]
        elif p in disk_corners:
            raise InvariantViolation("Face mêlant coins ombrés et non ombrés")

    incident: Dict[int, List[int]] = {v: [] for v in graph.graph.nodes}
    for crossing, (u, v) in enumerate(loops.incidence):
        if u == v:
            raise InputError(f"Le croisement {crossing} est une boucle du graphe de damier")
        incident[u].append(crossing)
        incident[v].append(crossing)

    def internal(vertex: int) -> bool:
        edges = incident[vertex]
        return len(edges) == 2 and s[edges[0]] == s[edges[1]]

    branch = sorted(v for v in incident if not internal(v))
    if len(branch) < 2:
        branch = sorted(set(branch) | set(sorted(incident)[:2]))
    branch_set = set(branch)

    def other_end(crossing: int, vertex: int) -> int:
        u, v = loops.incidence[crossing]
        return v if u == vertex else u

    edges: List[Tuple[int, int, int]] = []
    end_map: Dict[Tuple[int, int], int] = {}
    used = set()
    for start in branch:
        for crossing in around[start]:
            if crossing in used:
                continue
            length, current, last = 1, other_end(crossing, start), crossing
            used.add(crossing)
            while current not in branch_set:
                nxt = next(c for c in incident[current] if c != last)
                used.add(nxt)
                length += 1
                current, last = other_end(nxt, current), nxt
            if current == start:
                raise InputError("Chaîne de bigones refermée sur un même sommet")
            index = len(edges)
            edges.append((branch.index(start), branch.index(current), -s[crossing] * length))
            end_map[(start, crossing)] = index
            end_map[(current, last)] = index

    rotation = tuple(
        tuple(end_map[(vertex, crossing)] for crossing in around[vertex])
        for vertex in branch
    )
    return WeightedPlanarGraph(vertex_count=len(branch), edges=tuple(edges), rotation=rotation)
