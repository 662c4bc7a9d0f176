"""
Diagrammes de nœuds et d'entrelacs sur la sphère S²

Convention PD: chaque croisement X(a,b,c,d) liste ses quatre brins dans
l'ordre trigonométrique (rotation planaire), le premier étant le brin
inférieur entrant. Le brin inférieur va de l'emplacement 0 à l'emplacement 2,
le brin supérieur relie les emplacements 1 et 3. Le coin (i, p) est le secteur
compris entre les emplacements p et p+1 du croisement i.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import structlog

from src.utils.errors import InputError, InvariantViolation

logger = structlog.get_logger()

Slot = Tuple[int, int]
Corner = Tuple[int, int]
Labels = Tuple[int, int, int, int]

_TUPLE_PATTERN = re.compile(
    r"X?\s*[\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]"
)
_SEPARATORS = re.compile(r"^[\s,;\[\]\(\)]*$")


@dataclass(frozen=True)
class Crossing:
    """Un croisement: quatre étiquettes de brins en ordre trigonométrique"""
    index: int
    labels: Labels

    under_slots = (0, 2)
    over_slots = (1, 3)


@dataclass(frozen=True)
class Diagram:
    """
    Diagramme connexe sur S², validé à la construction

    Attributes:
        crossings: croisements indexés de 0 à n-1
        name: identifiant de table (optionnel)
        flipped: indices des composantes dont l'orientation par défaut est renversée
    """
    crossings: Tuple[Crossing, ...]
    name: Optional[str] = field(default=None, compare=False)
    flipped: FrozenSet[int] = frozenset()

    def __post_init__(self):
        self._validate()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_tuples(
        cls,
        tuples: Iterable[Sequence[int]],
        name: Optional[str] = None,
        orient: bool = False,
    ) -> "Diagram":
        """
        Construit un diagramme depuis des 4-uplets

        Args:
            tuples: étiquettes par croisement, ordre trigonométrique
            name: identifiant optionnel
            orient: réoriente les brins inférieurs (rotation de 2 emplacements)
                lorsque l'emplacement 0 n'est pas le brin entrant
        """
        rows = [tuple(int(v) for v in t) for t in tuples]
        for row in rows:
            if len(row) != 4:
                raise InputError(f"Croisement malformé: {row}")
        if orient:
            rows = _orient_rows(rows)
        return cls(
            crossings=tuple(Crossing(i, row) for i, row in enumerate(rows)),
            name=name,
        )

    @classmethod
    def unknot(cls, name: Optional[str] = None) -> "Diagram":
        """Diagramme sans croisement du nœud trivial"""
        return cls(crossings=(), name=name)

    def with_flipped(self, components: Iterable[int]) -> "Diagram":
        """Même diagramme, composantes indiquées parcourues en sens inverse"""
        return Diagram(self.crossings, name=self.name, flipped=frozenset(components))

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def _validate(self):
        counts: Dict[int, int] = {}
        for crossing in self.crossings:
            for label in crossing.labels:
                counts[label] = counts.get(label, 0) + 1
        bad = sorted(label for label, count in counts.items() if count != 2)
        if bad:
            raise InputError(f"Étiquettes n'apparaissant pas exactement deux fois: {bad}")

        n = len(self.crossings)
        if n == 0:
            return
        if not nx.is_connected(self.graph):
            raise InputError("Le graphe sous-jacent du diagramme n'est pas connexe")
        if n - 2 * n + len(self.faces) != 2:
            raise InputError(
                "Le système de rotation n'est pas planaire (V - E + F ≠ 2)",
            )
        # Force le calcul de l'orientation (vérifie le sens des brins inférieurs)
        self.entries

    # ------------------------------------------------------------------
    # Structure combinatoire
    # ------------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.crossings)

    def labels(self, i: int) -> Labels:
        return self.crossings[i].labels

    @cached_property
    def occurrences(self) -> Dict[int, Tuple[Slot, Slot]]:
        found: Dict[int, List[Slot]] = {}
        for crossing in self.crossings:
            for slot, label in enumerate(crossing.labels):
                found.setdefault(label, []).append((crossing.index, slot))
        return {label: (slots[0], slots[1]) for label, slots in found.items()}

    def partner(self, i: int, p: int) -> Slot:
        """L'autre extrémité de l'arête portée par l'emplacement (i, p)"""
        first, second = self.occurrences[self.crossings[i].labels[p]]
        return second if first == (i, p) else first

    @cached_property
    def graph(self) -> nx.MultiGraph:
        """Graphe 4-valent sous-jacent: un sommet par croisement, une arête par étiquette"""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.size))
        for label, ((i, _), (j, _)) in sorted(self.occurrences.items()):
            graph.add_edge(i, j, key=label)
        return graph

    @cached_property
    def faces(self) -> Tuple[Tuple[Corner, ...], ...]:
        """Faces calculées depuis la rotation; chaque coin apparaît une seule fois"""
        seen: Set[Corner] = set()
        faces = []
        for i in range(self.size):
            for p in range(4):
                if (i, p) in seen:
                    continue
                face = []
                corner = (i, p)
                while corner not in seen:
                    seen.add(corner)
                    face.append(corner)
                    ci, cp = corner
                    corner = self.partner(ci, (cp + 1) % 4)
                faces.append(tuple(face))
        return tuple(faces)

    @cached_property
    def face_of_corner(self) -> Dict[Corner, int]:
        return {corner: index for index, face in enumerate(self.faces) for corner in face}

    # ------------------------------------------------------------------
    # Orientation
    # ------------------------------------------------------------------

    @cached_property
    def _default_walks(self) -> Tuple[Tuple[Slot, ...], ...]:
        """Parcours par défaut: depuis la première occurrence en emplacement 0"""
        walks: List[Tuple[Slot, ...]] = []
        visited: Set[int] = set()

        for crossing in self.crossings:
            if crossing.labels[0] in visited:
                continue
            walk = self._walk((crossing.index, 0), check_under=True)
            visited.update(self.labels(i)[p] for i, p in walk)
            walks.append(walk)

        # Composantes qui ne passent jamais dessous
        for label in sorted(self.occurrences):
            if label in visited:
                continue
            walk = self._walk(max(self.occurrences[label]), check_under=False)
            visited.update(self.labels(i)[p] for i, p in walk)
            walks.append(walk)
        return tuple(walks)

    def _walk(self, start: Slot, check_under: bool) -> Tuple[Slot, ...]:
        walk = []
        current = start
        while True:
            i, p = current
            if check_under and p == 2:
                raise InputError(
                    f"Le brin inférieur du croisement {i} est orienté à contresens (entrée en 2)"
                )
            walk.append(current)
            current = self.partner(i, (p + 2) % 4)
            if current == start:
                return tuple(walk)
            if len(walk) > 4 * self.size:
                raise InvariantViolation("Parcours de composante non fermé")

    @cached_property
    def walks(self) -> Tuple[Tuple[Slot, ...], ...]:
        """Emplacements d'entrée de chaque composante, dans l'ordre de parcours"""
        walks = []
        for index, walk in enumerate(self._default_walks):
            if index in self.flipped:
                walk = tuple((i, (p + 2) % 4) for i, p in reversed(walk))
            walks.append(walk)
        return tuple(walks)

    @property
    def component_count(self) -> int:
        return max(1, len(self.walks))

    @property
    def is_knot(self) -> bool:
        return self.component_count == 1

    @cached_property
    def components(self) -> Tuple[Tuple[int, ...], ...]:
        """Étiquettes de chaque composante dans l'ordre de parcours"""
        if not self.crossings:
            return ((),)
        return tuple(tuple(self.labels(i)[p] for i, p in walk) for walk in self.walks)

    @cached_property
    def entries(self) -> Dict[int, Tuple[int, int]]:
        """Pour chaque croisement: (emplacement d'entrée dessous, emplacement d'entrée dessus)"""
        under: Dict[int, int] = {}
        over: Dict[int, int] = {}
        for walk in self.walks:
            for i, p in walk:
                if p in Crossing.under_slots:
                    under[i] = p
                else:
                    over[i] = p
        if len(under) != self.size or len(over) != self.size:
            raise InvariantViolation("Orientation incomplète du diagramme")
        return {i: (under[i], over[i]) for i in range(self.size)}

    def sign(self, i: int) -> int:
        """Signe du croisement: positif si le brin supérieur entre en (u+3) mod 4"""
        under_in, over_in = self.entries[i]
        return 1 if over_in == (under_in + 3) % 4 else -1

    @cached_property
    def signs(self) -> Tuple[int, ...]:
        return tuple(self.sign(i) for i in range(self.size))

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def with_orientation(self, entered: FrozenSet[Slot]) -> "Diagram":
        """Retourne le diagramme dont les composantes entrent par les emplacements donnés"""
        base = self.with_flipped(())
        flips = [
            index for index, walk in enumerate(base.walks)
            if walk and walk[0] not in entered
        ]
        return base.with_flipped(flips)

    # ------------------------------------------------------------------
    # Sérialisation
    # ------------------------------------------------------------------

    def to_pd(self) -> str:
        return " ".join(
            "X({},{},{},{})".format(*crossing.labels) for crossing in self.crossings
        )

    def __str__(self) -> str:
        return self.to_pd() or "X()"


def _orient_rows(rows: List[Labels]) -> List[Labels]:
    """Fait pivoter de 2 les croisements dont le brin inférieur est parcouru de 2 vers 0"""
    occurrences: Dict[int, List[Slot]] = {}
    for i, row in enumerate(rows):
        for p, label in enumerate(row):
            occurrences.setdefault(label, []).append((i, p))
    if any(len(slots) != 2 for slots in occurrences.values()):
        bad = sorted(label for label, slots in occurrences.items() if len(slots) != 2)
        raise InputError(f"Étiquettes n'apparaissant pas exactement deux fois: {bad}")

    def partner(i: int, p: int) -> Slot:
        first, second = occurrences[rows[i][p]]
        return second if first == (i, p) else first

    rotate: Set[int] = set()
    visited: Set[int] = set()
    for i, row in enumerate(rows):
        if row[0] in visited:
            continue
        start = (i, 0)
        current = start
        steps = 0
        while True:
            ci, cp = current
            visited.add(rows[ci][cp])
            if cp == 2:
                rotate.add(ci)
            current = partner(ci, (cp + 2) % 4)
            steps += 1
            if current == start or steps > 4 * len(rows):
                break
    return [
        (row[2], row[3], row[0], row[1]) if i in rotate else row
        for i, row in enumerate(rows)
    ]


def parse_pd(text: str, name: Optional[str] = None) -> Diagram:
    """
    Lit un code PD `X(a,b,c,d) X(...)`; accepte aussi les crochets et les listes de tuples

    Raises:
        InputError: texte vide, tuple malformé, étiquettes invalides ou diagramme non connexe
    """
    if text is None or not text.strip():
        raise InputError("Code PD vide")
    text = re.sub(r"^\s*PD\s*", "", text)
    matches = list(_TUPLE_PATTERN.finditer(text))
    leftover = _TUPLE_PATTERN.sub(" ", text)
    if not matches or not _SEPARATORS.match(leftover):
        raise InputError(f"Code PD malformé: {text.strip()[:60]}")
    rows = [tuple(int(v) for v in match.groups()) for match in matches]
    diagram = Diagram.from_tuples(rows, name=name)
    logger.debug("📋 Diagramme lu", name=name, crossings=diagram.size,
                 components=diagram.component_count)
    return diagram


def is_reduced(d: Diagram) -> bool:
    """Vrai si aucune face ne touche deux fois le même croisement (pas de croisement nugatoire)"""
    for face in d.faces:
        touched = [i for i, _ in face]
        if len(face) == 1 or len(set(touched)) != len(touched):
            return False
    return True


def is_prime(d: Diagram) -> bool:
    """
    Vrai si aucune paire d'arêtes ne sépare le graphe sous-jacent
    (test du cercle de somme connexe)
    """
    if d.size == 0:
        raise InputError("is_prime n'est pas défini pour un diagramme sans croisement")
    edges = list(d.graph.edges(keys=True))
    for first in range(len(edges)):
        for second in range(first + 1, len(edges)):
            cut = d.graph.copy()
            cut.remove_edge(*edges[first])
            cut.remove_edge(*edges[second])
            if not nx.is_connected(cut):
                return False
    return True


def is_alternating(d: Diagram) -> bool:
    """Le long de chaque composante, dessus et dessous alternent"""
    for walk in d.walks:
        levels = [p in Crossing.over_slots for _, p in walk]
        if any(levels[k] == levels[(k + 1) % len(levels)] for k in range(len(levels))):
            return False
    return True


def seifert_state(d: Diagram):
    """Lissage orienté: `+` exactement aux croisements positifs"""
    from src.core.states import State

    return State(d.signs)


def mirror(d: Diagram) -> Diagram:
    """Image miroir: échange dessus/dessous en conservant l'orientation"""
    rows = []
    expected: Set[Slot] = set()
    for crossing in d.crossings:
        a, b, c, e = crossing.labels
        under_in, over_in = d.entries[crossing.index]
        shift = 1 if over_in == 1 else 3
        rows.append((b, c, e, a) if shift == 1 else (e, a, b, c))
        expected.add((crossing.index, (over_in - shift) % 4))
        expected.add((crossing.index, (under_in - shift) % 4))
    if not rows:
        return d
    mirrored = Diagram.from_tuples(rows, name=d.name, orient=False)
    return mirrored.with_orientation(frozenset(expected))


def reidemeister_three(d: Diagram, crossings: Sequence[int]) -> Diagram:
    """
    Mouvement de Reidemeister III sur la face triangulaire bordée par trois croisements

    Le mouvement est valide si l'un des trois brins du triangle passe dessus
    (ou dessous) à ses deux croisements.

    Raises:
        InputError: pas de face triangulaire sur ces croisements, ou triangle alterné
    """
    targets = set(crossings)
    if len(targets) != 3:
        raise InputError("Le mouvement R-III demande trois croisements distincts")
    face = next(
        (f for f in d.faces if len(f) == 3 and {i for i, _ in f} == targets),
        None,
    )
    if face is None:
        raise InputError(f"Aucune face triangulaire sur les croisements {sorted(targets)}")

    sides = []
    for i, p in face:
        slot = (p + 1) % 4
        j, q = d.partner(i, slot)
        sides.append(((i, slot), (j, q)))

    def is_over(slot: int) -> bool:
        return slot in Crossing.over_slots

    if not any(is_over(a[1]) == is_over(b[1]) for a, b in sides):
        raise InputError("Triangle alterné: le mouvement R-III n'est pas applicable")

    rows = [list(crossing.labels) for crossing in d.crossings]
    for (i, s), (j, t) in sides:
        internal = d.labels(i)[s]
        outer_i = d.labels(i)[(s + 2) % 4]
        outer_j = d.labels(j)[(t + 2) % 4]
        rows[i][s] = outer_j
        rows[i][(s + 2) % 4] = internal
        rows[j][t] = outer_i
        rows[j][(t + 2) % 4] = internal

    moved = Diagram.from_tuples(rows, name=d.name)
    if moved.size != d.size or moved.component_count != d.component_count:
        raise InvariantViolation("Le mouvement R-III a changé le nombre de croisements ou de composantes")
    logger.debug("📋 Mouvement R-III appliqué", crossings=sorted(targets))
    return moved
