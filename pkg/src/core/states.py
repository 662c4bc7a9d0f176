"""
États, boucles d'état, graphes d'état et surfaces d'état

Lissage `+`: relie les emplacements (0,1) et (2,3) d'un croisement.
Lissage `-`: relie les emplacements (0,3) et (1,2).
Les disques bordés par les boucles sont tous placés du même côté de la sphère.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import structlog

from src.core.diagram import Diagram, Slot, seifert_state
from src.models.surface import StateCheck, SurfaceSummary
from src.utils.errors import InputError, InvariantViolation

logger = structlog.get_logger()

PAIRINGS = {
    1: ((0, 1), (2, 3)),
    -1: ((0, 3), (1, 2)),
}

# Arcs de référence: parallèles sur un lissage orienté
CANONICAL_ARCS = {
    1: ((0, 1), (3, 2)),
    -1: ((0, 3), (1, 2)),
}

DEFAULT_STATE_CAP = 16


@dataclass(frozen=True)
class State:
    """Affectation d'un lissage ±1 à chaque croisement, alignée sur les indices"""
    signs: Tuple[int, ...]

    def __post_init__(self):
        if any(sign not in (1, -1) for sign in self.signs):
            raise InputError(f"État invalide: {self.signs}")

    @classmethod
    def parse(cls, text: str) -> "State":
        """Lit une chaîne `+-++`; accepte aussi le signe moins typographique"""
        cleaned = (text or "").strip().replace("−", "-")
        if any(ch not in "+-" for ch in cleaned):
            raise InputError(f"Chaîne d'état invalide: {text!r}")
        return cls(tuple(1 if ch == "+" else -1 for ch in cleaned))

    @classmethod
    def uniform(cls, size: int, sign: int) -> "State":
        return cls((sign,) * size)

    def flip(self, *indices: int) -> "State":
        flipped = list(self.signs)
        for index in indices:
            flipped[index] = -flipped[index]
        return State(tuple(flipped))

    def restrict(self, indices: Sequence[int]) -> "State":
        return State(tuple(self.signs[i] for i in indices))

    def __len__(self) -> int:
        return len(self.signs)

    def __getitem__(self, index: int) -> int:
        return self.signs[index]

    def __str__(self) -> str:
        return "".join("+" if sign > 0 else "-" for sign in self.signs)


def _require_total(d: Diagram, s: State):
    if len(s) != d.size:
        raise InputError(
            f"État partiel: {len(s)} lissages pour {d.size} croisements"
        )


@dataclass(frozen=True)
class StateLoops:
    """
    Boucles d'état

    Attributes:
        loops: pour chaque boucle, les arcs parcourus (croisement, entrée, sortie)
        loop_of_label: boucle portant chaque arête du diagramme
        incidence: pour chaque croisement, les boucles des deux arcs de lissage
    """
    loops: Tuple[Tuple[Tuple[int, int, int], ...], ...]
    loop_of_label: Dict[int, int]
    incidence: Tuple[Tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.loops)


def smooth(d: Diagram, s: State) -> StateLoops:
    """
    Suit les brins à travers les lissages choisis

    Les boucles sont numérotées par leur plus petite étiquette.
    """
    _require_total(d, s)
    if d.size == 0:
        return StateLoops(loops=((),), loop_of_label={}, incidence=())

    def paired(i: int, p: int) -> int:
        for a, b in PAIRINGS[s[i]]:
            if p == a:
                return b
            if p == b:
                return a
        raise InvariantViolation("Emplacement hors lissage")

    unvisited = set(d.occurrences)
    walks: List[Tuple[int, Tuple[Tuple[int, int, int], ...]]] = []
    while unvisited:
        label = min(unvisited)
        start = min(d.occurrences[label])
        arcs = []
        current: Slot = start
        while True:
            i, p = current
            q = paired(i, p)
            arcs.append((i, p, q))
            unvisited.discard(d.labels(i)[p])
            unvisited.discard(d.labels(i)[q])
            current = d.partner(i, q)
            if current == start:
                break
        members = {d.labels(i)[p] for i, p, _ in arcs} | {d.labels(i)[q] for i, _, q in arcs}
        walks.append((min(members), tuple(arcs)))

    walks.sort()
    loops = tuple(arcs for _, arcs in walks)
    loop_of_label: Dict[int, int] = {}
    loop_of_arc: Dict[Tuple[int, int], int] = {}
    for index, arcs in enumerate(loops):
        for i, p, q in arcs:
            loop_of_label[d.labels(i)[p]] = index
            loop_of_label[d.labels(i)[q]] = index
            loop_of_arc[(i, min(p, q))] = index

    incidence = tuple(
        tuple(loop_of_arc[(i, min(pair))] for pair in PAIRINGS[s[i]])
        for i in range(d.size)
    )
    return StateLoops(loops=loops, loop_of_label=loop_of_label, incidence=incidence)


@dataclass(frozen=True)
class StateGraph:
    """Graphe d'état: sommets = boucles, arêtes = croisements signés"""
    graph: nx.MultiGraph
    loops: StateLoops

    @cached_property
    def blocks(self) -> Tuple[Tuple[int, ...], ...]:
        """Blocs maximaux 2-connexes, en croisements, triés par plus petit croisement"""
        simple = nx.Graph()
        simple.add_nodes_from(self.graph.nodes)
        crossings_between: Dict[frozenset, List[int]] = {}
        blocks: List[Tuple[int, ...]] = []
        for u, v, key in self.graph.edges(keys=True):
            if u == v:
                blocks.append((key,))
                continue
            simple.add_edge(u, v)
            crossings_between.setdefault(frozenset((u, v)), []).append(key)

        for component in nx.biconnected_component_edges(simple):
            members: List[int] = []
            for u, v in component:
                members.extend(crossings_between[frozenset((u, v))])
            blocks.append(tuple(sorted(members)))
        return tuple(sorted(blocks))

    @cached_property
    def block_vertices(self) -> Tuple[Tuple[int, ...], ...]:
        result = []
        for block in self.blocks:
            vertices = set()
            for crossing in block:
                vertices.update(self.loops.incidence[crossing])
            result.append(tuple(sorted(vertices)))
        return tuple(result)

    @cached_property
    def cut_vertices(self) -> Tuple[int, ...]:
        seen: Dict[int, int] = {}
        for vertices in self.block_vertices:
            for vertex in vertices:
                seen[vertex] = seen.get(vertex, 0) + 1
        return tuple(sorted(v for v, count in seen.items() if count >= 2))

    def block_subgraph(self, index: int) -> nx.MultiGraph:
        members = set(self.blocks[index])
        sub = nx.MultiGraph()
        for u, v, key, sign in self.graph.edges(keys=True, data="sign"):
            if key in members:
                sub.add_edge(u, v, key=key, sign=sign)
        return sub

    @property
    def has_self_loop(self) -> bool:
        return any(u == v for u, v in self.graph.edges())


def state_graph(d: Diagram, s: State) -> StateGraph:
    """Construit le graphe d'état et sa décomposition en blocs"""
    loops = smooth(d, s)
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(loops.count))
    for crossing, (u, v) in enumerate(loops.incidence):
        graph.add_edge(u, v, key=crossing, sign=s[crossing])
    return StateGraph(graph=graph, loops=loops)


def is_seifert_state(d: Diagram, s: State) -> bool:
    """Vrai si s est l'état de Seifert pour une orientation des composantes"""
    _require_total(d, s)
    components = len(d.walks)
    for flips in itertools.product((False, True), repeat=max(0, components - 1)):
        oriented = d.with_flipped(index + 1 for index, flip in enumerate(flips) if flip)
        if seifert_state(oriented) == s:
            return True
    return False


def check_state(d: Diagram, s: State) -> StateCheck:
    """Adéquation (pas de boucle), homogénéité (blocs de signe constant), état de Seifert"""
    graph = state_graph(d, s)
    homogeneous = all(
        len({s[crossing] for crossing in block}) == 1 for block in graph.blocks
    )
    return StateCheck(
        adequate=not graph.has_self_loop,
        homogeneous=homogeneous,
        is_seifert=is_seifert_state(d, s),
    )


def _orientable(d: Diagram, s: State, loops: StateLoops) -> bool:
    """Propagation de parité: chaque bande impose une orientation compatible des deux boucles"""
    # kappa: 0 si la boucle parcourt l'arc dans le sens de référence
    kappa: Dict[Tuple[int, int], int] = {}
    loop_of: Dict[Tuple[int, int], int] = {}
    for index, arcs in enumerate(loops.loops):
        for i, p, q in arcs:
            key = (i, min(p, q))
            loop_of[key] = index
            kappa[key] = 0 if (p, q) in CANONICAL_ARCS[s[i]] else 1

    constraints = nx.Graph()
    constraints.add_nodes_from(range(loops.count))
    for i in range(d.size):
        first, second = ((i, min(pair)) for pair in PAIRINGS[s[i]])
        u, v = loop_of[first], loop_of[second]
        parity = (kappa[first] + kappa[second]) % 2
        if u == v:
            if parity:
                return False
            continue
        if constraints.has_edge(u, v):
            if constraints[u][v]["parity"] != parity:
                return False
            continue
        constraints.add_edge(u, v, parity=parity)

    orientation: Dict[int, int] = {}
    for root in constraints.nodes:
        if root in orientation:
            continue
        orientation[root] = 0
        for u, v in nx.bfs_edges(constraints, root):
            orientation[v] = (orientation[u] + constraints[u][v]["parity"]) % 2
    return all(
        (orientation[u] + orientation[v]) % 2 == data["parity"]
        for u, v, data in constraints.edges(data=True)
    )


def boundary_slope(d: Diagram, s: State) -> int:
    """
    Pente de bord: enlacement du nœud avec son décalé dans la surface

    Vaut 2 x la somme des signes des croisements où s diffère du lissage orienté;
    l'état de Seifert donne 0.
    """
    _require_total(d, s)
    if not d.is_knot:
        raise InputError("La pente de bord n'est définie que pour un nœud")
    return 2 * sum(sign for sign, smoothing in zip(d.signs, s.signs) if smoothing != sign)


def surface_summary(d: Diagram, s: State) -> SurfaceSummary:
    """Invariants de la surface d'état F_s"""
    loops = smooth(d, s)
    euler = loops.count - d.size
    orientable = _orientable(d, s, loops)
    boundary = d.component_count
    slope = boundary_slope(d, s) if d.is_knot else None
    if orientable:
        genus, nonorientable_genus = (2 - euler - boundary) // 2, None
    else:
        genus, nonorientable_genus = None, 2 - euler - boundary
    return SurfaceSummary(
        euler_characteristic=euler,
        orientable=orientable,
        boundary_components=boundary,
        boundary_slope=slope,
        genus=genus,
        nonorientable_genus=nonorientable_genus,
        loops=loops.count,
        crossings=d.size,
    )


def checkerboard_states(d: Diagram) -> Tuple[State, State]:
    """
    Les deux états de damier

    Un croisement reçoit `+` si ses coins 1 et 3 sont blancs, `-` si ses coins 0 et 2 le sont;
    le premier état retourné a `+` au croisement 0.
    """
    if d.size == 0:
        return State(()), State(())
    adjacency = nx.Graph()
    adjacency.add_nodes_from(range(len(d.faces)))
    for i in range(d.size):
        for p in range(4):
            adjacency.add_edge(d.face_of_corner[(i, p)], d.face_of_corner[(i, (p + 1) % 4)])
    if not nx.is_bipartite(adjacency):
        raise InvariantViolation("Les faces d'un diagramme planaire devraient être bicolorables")

    color = {d.face_of_corner[(0, 0)]: 0}
    for u, v in nx.bfs_edges(adjacency, d.face_of_corner[(0, 0)]):
        color[v] = 1 - color[u]
    shaded_first = State(tuple(
        1 if color[d.face_of_corner[(i, 0)]] == 0 else -1 for i in range(d.size)
    ))
    return shaded_first, State(tuple(-sign for sign in shaded_first.signs))


def is_checkerboard_state(d: Diagram, s: State) -> bool:
    return s in checkerboard_states(d)


def murasugi_leaves(d: Diagram, s: State) -> List[Tuple[Diagram, State]]:
    """
    Feuilles de la décomposition de Murasugi: une par bloc du graphe d'état

    Chaque feuille garde les croisements du bloc et lisse les autres selon s.
    """
    graph = state_graph(d, s)
    leaves: List[Tuple[Diagram, State]] = []
    for block in graph.blocks:
        members = set(block)
        classes = nx.utils.UnionFind(d.occurrences.keys())
        for i in range(d.size):
            if i in members:
                continue
            for a, b in PAIRINGS[s[i]]:
                classes.union(d.labels(i)[a], d.labels(i)[b])

        relabel: Dict[int, int] = {}
        rows = []
        for i in block:
            row = []
            for label in d.labels(i):
                root = classes[label]
                if root not in relabel:
                    relabel[root] = len(relabel) + 1
                row.append(relabel[root])
            rows.append(row)
        leaf = Diagram.from_tuples(rows, name=d.name, orient=True)
        leaves.append((leaf, s.restrict(block)))
    return leaves


def enumerate_states(
    d: Diagram,
    predicate: Optional[Callable[[Diagram, State], bool]] = None,
    cap: int = DEFAULT_STATE_CAP,
) -> Iterator[State]:
    """
    Énumère les 2^n états dans l'ordre lexicographique (`+` avant `-`)

    Raises:
        InputError: nombre de croisements supérieur au plafond
    """
    if d.size > cap:
        raise InputError(f"Plafond d'états dépassé: {d.size} croisements > {cap}")
    for choice in itertools.product((1, -1), repeat=d.size):
        state = State(choice)
        if predicate is None or predicate(d, state):
            yield state


def strong_candidate(d: Diagram, s: State) -> bool:
    """Filtre adéquat, homogène et distinct de l'état de Seifert"""
    check = check_state(d, s)
    return check.adequate and check.homogeneous and not check.is_seifert
