"""
Triangulations à bord et construction d'une surface normale à partir d'un
sous-complexe X dont l'image en homologie Z2 est nulle

Format texte des triangulations:
    tetrahedra N
    face k -> tet t face k' perm abcd      (4 lignes par tétraèdre, dans l'ordre)
    face k -> boundary
    x-edge t a b                           (arête (a, b) du tétraèdre t dans X)
    x-face t k                             (face k du tétraèdre t dans X)
Les lignes vides et les commentaires `#` sont ignorés. perm[v] est l'image du
sommet v de t dans t'; la face k est opposée au sommet k.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import structlog
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from src.models.surface import NormalSurfaceReport, PieceRecord
from src.utils.errors import InputError, InvariantViolation

logger = structlog.get_logger()

EDGES: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

FaceKey = Tuple[int, int]
EdgeKey = Tuple[int, int]


# ----------------------------------------------------------------------
# Algèbre linéaire sur Z2
# ----------------------------------------------------------------------

def _gf2(rows: Sequence[Sequence[int]]) -> DomainMatrix:
    return DomainMatrix.from_Matrix(Matrix([list(row) for row in rows])).convert_to(GF(2))


def gf2_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rang sur GF(2) d'une famille de vecteurs lignes"""
    rows = [row for row in rows if any(v % 2 for v in row)]
    if not rows:
        return 0
    return _gf2(rows).rank()


def gf2_nullspace(rows: Sequence[Sequence[int]], width: int) -> List[List[int]]:
    """Base du noyau {x : rows . x = 0} sur GF(2)"""
    rows = [row for row in rows if any(v % 2 for v in row)]
    if not rows:
        return [[1 if j == i else 0 for j in range(width)] for i in range(width)]
    reduced, pivots = _gf2(rows).rref()
    dense = [[int(v) % 2 for v in row] for row in reduced.to_Matrix().tolist()]
    basis = []
    for free in (j for j in range(width) if j not in pivots):
        vector = [0] * width
        vector[free] = 1
        for r, pivot in enumerate(pivots):
            vector[pivot] = dense[r][free]
        basis.append(vector)
    return basis


# ----------------------------------------------------------------------
# Triangulations
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Gluing:
    tet: int
    face: int
    perm: Tuple[int, int, int, int]


def _face_vertices(k: int) -> Tuple[int, ...]:
    return tuple(v for v in range(4) if v != k)


def _face_edges(k: int) -> Tuple[int, ...]:
    return tuple(i for i, (a, b) in enumerate(EDGES) if k not in (a, b))


def _edge_index(a: int, b: int) -> int:
    return EDGES.index((min(a, b), max(a, b)))


@dataclass(frozen=True)
class Subcomplex:
    """Sous-complexe X donné par ses arêtes et ses faces (en classes)"""
    edges: FrozenSet[int]
    faces: FrozenSet[int]


@dataclass(frozen=True)
class Triangulation:
    """
    Tétraèdres recollés face à face

    Attributes:
        size: nombre de tétraèdres
        gluings: (t, k) -> Gluing, ou None pour une face de bord
        x_edges: arêtes locales (t, indice d'arête) marquées dans X
        x_faces: faces locales (t, k) marquées dans X
    """
    size: int
    gluings: Tuple[Tuple[Optional[Gluing], ...], ...]
    x_edges: Tuple[EdgeKey, ...] = ()
    x_faces: Tuple[FaceKey, ...] = ()

    def __post_init__(self):
        if self.size < 1 or len(self.gluings) != self.size:
            raise InputError("Une triangulation demande au moins un tétraèdre et 4 faces par tétraèdre")
        for t, faces in enumerate(self.gluings):
            for k, gluing in enumerate(faces):
                if gluing is None:
                    continue
                if not 0 <= gluing.tet < self.size or sorted(gluing.perm) != [0, 1, 2, 3]:
                    raise InputError(f"Recollement invalide en (tet {t}, face {k})")
                if gluing.perm[k] != gluing.face or (gluing.tet, gluing.face) == (t, k):
                    raise InputError(f"perm[{k}] doit valoir la face d'arrivée en (tet {t}, face {k})")
                back = self.gluings[gluing.tet][gluing.face]
                inverse = tuple(gluing.perm.index(v) for v in range(4))
                if back is None or (back.tet, back.face) != (t, k) or back.perm != inverse:
                    raise InputError(f"Recollement non involutif en (tet {t}, face {k})")

    @classmethod
    def parse(cls, text: str) -> "Triangulation":
        size = None
        faces: List[Optional[Gluing]] = []
        x_edges: List[EdgeKey] = []
        x_faces: List[FaceKey] = []
        for number, raw in enumerate((text or "").splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if size is None:
                    size = int(parts[-1]) if parts[0] == "tetrahedra" else int(parts[0])
                elif parts[0] == "face":
                    k = int(parts[1])
                    if k != len(faces) % 4:
                        raise InputError(f"Face {k} hors d'ordre", line=number)
                    if parts[3] == "boundary":
                        faces.append(None)
                    else:
                        perm = tuple(int(ch) for ch in parts[8])
                        faces.append(Gluing(tet=int(parts[4]), face=int(parts[6]), perm=perm))
                elif parts[0] == "x-edge":
                    x_edges.append((int(parts[1]), _edge_index(int(parts[2]), int(parts[3]))))
                elif parts[0] == "x-face":
                    x_faces.append((int(parts[1]), int(parts[2])))
                else:
                    raise InputError(f"Directive inconnue: {parts[0]}", line=number)
            except (IndexError, ValueError) as exc:
                raise InputError(f"Ligne de triangulation malformée: {raw.strip()}", line=number) from exc
        if size is None:
            raise InputError("Triangulation vide")
        if len(faces) != 4 * size:
            raise InputError(f"{len(faces)} lignes de face pour {size} tétraèdres")
        rows = tuple(tuple(faces[4 * t:4 * t + 4]) for t in range(size))
        return cls(size=size, gluings=rows, x_edges=tuple(x_edges), x_faces=tuple(x_faces))

    def to_text(self) -> str:
        lines = [f"tetrahedra {self.size}"]
        for t, faces in enumerate(self.gluings):
            for k, gluing in enumerate(faces):
                if gluing is None:
                    lines.append(f"face {k} -> boundary")
                else:
                    perm = "".join(str(v) for v in gluing.perm)
                    lines.append(f"face {k} -> tet {gluing.tet} face {gluing.face} perm {perm}")
        lines += [f"x-edge {t} {EDGES[e][0]} {EDGES[e][1]}" for t, e in self.x_edges]
        lines += [f"x-face {t} {k}" for t, k in self.x_faces]
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Classes d'identification
    # ------------------------------------------------------------------

    def _classes(self, items: Iterable, pairs: Iterable) -> Dict:
        union = nx.utils.UnionFind(items)
        for a, b in pairs:
            union.union(a, b)
        groups = sorted((sorted(group) for group in union.to_sets()), key=lambda g: g[0])
        return {item: index for index, group in enumerate(groups) for item in group}

    def _glued(self):
        for t, faces in enumerate(self.gluings):
            for k, gluing in enumerate(faces):
                if gluing is not None:
                    yield t, k, gluing

    @cached_property
    def vertex_class(self) -> Dict[Tuple[int, int], int]:
        items = [(t, v) for t in range(self.size) for v in range(4)]
        pairs = [
            ((t, v), (g.tet, g.perm[v]))
            for t, k, g in self._glued() for v in _face_vertices(k)
        ]
        return self._classes(items, pairs)

    @cached_property
    def edge_class(self) -> Dict[EdgeKey, int]:
        items = [(t, e) for t in range(self.size) for e in range(6)]
        pairs = [
            ((t, e), (g.tet, _edge_index(g.perm[EDGES[e][0]], g.perm[EDGES[e][1]])))
            for t, k, g in self._glued() for e in _face_edges(k)
        ]
        return self._classes(items, pairs)

    @cached_property
    def face_class(self) -> Dict[FaceKey, int]:
        items = [(t, k) for t in range(self.size) for k in range(4)]
        pairs = [((t, k), (g.tet, g.face)) for t, k, g in self._glued()]
        return self._classes(items, pairs)

    @property
    def vertex_count(self) -> int:
        return len(set(self.vertex_class.values()))

    @property
    def edge_count(self) -> int:
        return len(set(self.edge_class.values()))

    @property
    def face_count(self) -> int:
        return len(set(self.face_class.values()))

    @cached_property
    def edge_ends(self) -> Tuple[Tuple[int, int], ...]:
        ends: Dict[int, Tuple[int, int]] = {}
        for (t, e), index in self.edge_class.items():
            if index not in ends:
                a, b = EDGES[e]
                ends[index] = (self.vertex_class[(t, a)], self.vertex_class[(t, b)])
        return tuple(ends[i] for i in range(self.edge_count))

    @cached_property
    def face_edge_classes(self) -> Tuple[Tuple[int, ...], ...]:
        """Classes des trois arêtes de chaque classe de face"""
        edges: Dict[int, Tuple[int, ...]] = {}
        for (t, k), index in self.face_class.items():
            if index not in edges:
                edges[index] = tuple(self.edge_class[(t, e)] for e in _face_edges(k))
        return tuple(edges[i] for i in range(self.face_count))

    @cached_property
    def boundary_faces(self) -> Tuple[int, ...]:
        return tuple(sorted({
            self.face_class[(t, k)]
            for t, faces in enumerate(self.gluings)
            for k, gluing in enumerate(faces) if gluing is None
        }))

    @cached_property
    def boundary_edges(self) -> FrozenSet[int]:
        return frozenset(e for f in self.boundary_faces for e in self.face_edge_classes[f])

    # ------------------------------------------------------------------
    # Homologie Z2
    # ------------------------------------------------------------------

    def boundary_rows(self) -> List[List[int]]:
        """Lignes de d2: chaque classe de face comme vecteur d'arêtes"""
        rows = []
        for edges in self.face_edge_classes:
            row = [0] * self.edge_count
            for e in edges:
                row[e] ^= 1
            rows.append(row)
        return rows

    def vertex_rows(self) -> List[List[int]]:
        """Lignes de d1 transposée: pour chaque sommet, les arêtes incidentes (mod 2)"""
        rows = [[0] * self.edge_count for _ in range(self.vertex_count)]
        for e, (a, b) in enumerate(self.edge_ends):
            rows[a][e] ^= 1
            rows[b][e] ^= 1
        return rows

    def cycles(self, edges: Iterable[int]) -> List[List[int]]:
        """Base des 1-cycles Z2 supportés par les arêtes données"""
        support = sorted(set(edges))
        if not support:
            return []
        restricted = [[row[e] for e in support] for row in self.vertex_rows()]
        result = []
        for local in gf2_nullspace(restricted, len(support)):
            vector = [0] * self.edge_count
            for position, e in enumerate(support):
                vector[e] = local[position]
            result.append(vector)
        return result

    @property
    def h1_rank(self) -> int:
        rank_d1 = gf2_rank(self.vertex_rows())
        return self.edge_count - rank_d1 - gf2_rank(self.boundary_rows())

    def boundary_onto(self) -> bool:
        """H1(bord; Z2) -> H1(T; Z2) surjective"""
        rows = self.boundary_rows()
        base = gf2_rank(rows)
        return gf2_rank(rows + self.cycles(self.boundary_edges)) - base == self.h1_rank

    @property
    def is_connected(self) -> bool:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edge_ends)
        return nx.is_connected(graph)

    def subcomplex(self) -> Subcomplex:
        """Sous-complexe X décrit par les lignes x-edge et x-face"""
        faces = {self.face_class[key] for key in self.x_faces}
        edges = {self.edge_class[key] for key in self.x_edges}
        for f in faces:
            edges.update(self.face_edge_classes[f])
        return Subcomplex(edges=frozenset(edges), faces=frozenset(faces))


# ----------------------------------------------------------------------
# Courbes de X sur le bord
# ----------------------------------------------------------------------

def _trace_graph(t: Triangulation, x: Subcomplex) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    for e in sorted(x.edges & t.boundary_edges):
        a, b = t.edge_ends[e]
        graph.add_edge(a, b, key=e)
    return graph


def boundary_loops(t: Triangulation, x: Subcomplex) -> List[List[int]]:
    """
    Courbes C = X ∩ bord, chacune comme liste triée de classes d'arêtes

    Raises:
        InputError: C n'est pas une union disjointe de cycles
    """
    graph = _trace_graph(t, x)
    if any(degree != 2 for _, degree in graph.degree()):
        raise InputError("X ∩ bord n'est pas une union disjointe de courbes fermées")
    loops = [
        sorted(key for _, _, key in graph.subgraph(component).edges(keys=True))
        for component in nx.connected_components(graph)
    ]
    return sorted(loops)


def z2_image_is_zero(t: Triangulation, x: Subcomplex) -> bool:
    """H1(X; Z2) -> H1(T; Z2) est nulle: les cycles de X sont des bords"""
    if any(e >= t.edge_count for e in x.edges) or any(f >= t.face_count for f in x.faces):
        raise InputError("Sous-complexe hors de la triangulation")
    for f in x.faces:
        if not set(t.face_edge_classes[f]) <= x.edges:
            raise InputError(f"Sous-complexe non fermé: face {f}")
    rows = t.boundary_rows()
    return gf2_rank(rows + t.cycles(x.edges)) == gf2_rank(rows)


def build_tree(t: Triangulation, x: Subcomplex) -> List[int]:
    """
    Arbre maximal contraint, par étapes de Kruskal en ordre d'indice:
    toutes les arêtes de chaque courbe de C sauf la plus grande, puis X,
    puis X ∪ bord, puis toute la triangulation

    Raises:
        InputError: C vide ou triangulation non connexe
    """
    loops = boundary_loops(t, x)
    if not loops:
        raise InputError("X ne rencontre pas le bord: C est vide")
    if not t.is_connected:
        raise InputError("Triangulation non connexe")

    union = nx.utils.UnionFind(range(t.vertex_count))
    tree: List[int] = []

    def offer(edges: Iterable[int]):
        for e in sorted(edges):
            a, b = t.edge_ends[e]
            if union[a] != union[b]:
                union.union(a, b)
                tree.append(e)

    for loop in loops:
        offer(loop[:-1])
    offer(x.edges)
    offer(x.edges | t.boundary_edges)
    offer(range(t.edge_count))
    if len(tree) != t.vertex_count - 1:
        raise InvariantViolation("L'arbre construit ne couvre pas tous les sommets")
    return sorted(tree)


def label_edges(t: Triangulation, x: Subcomplex, tree: Sequence[int]) -> List[int]:
    """
    Étiquette chaque classe d'arête par la classe dans H1(T; Z2) du cycle
    formé avec le chemin de l'arbre

    Raises:
        InputError: H1 de dimension > 1, bord non surjectif ou image de X non nulle
    """
    rank = t.h1_rank
    if rank == 0:
        return [0] * t.edge_count
    if rank > 1:
        raise InputError(f"H1(T; Z2) de dimension {rank}, Z2 attendu")
    if not t.boundary_onto():
        raise InputError("H1(bord; Z2) -> H1(T; Z2) n'est pas surjective")
    if not z2_image_is_zero(t, x):
        raise InputError("L'image de H1(X; Z2) n'est pas nulle")

    rows = t.boundary_rows()
    coboundaries = t.vertex_rows()
    base = gf2_rank(coboundaries)
    cocycle = next(
        z for z in gf2_nullspace(rows, t.edge_count)
        if gf2_rank(coboundaries + [z]) > base
    )

    graph = nx.Graph()
    graph.add_nodes_from(range(t.vertex_count))
    for e in tree:
        a, b = t.edge_ends[e]
        graph.add_edge(a, b, edge=e)
    shift = {0: 0}
    for a, b in nx.bfs_edges(graph, 0):
        shift[b] = shift[a] ^ cocycle[graph.edges[a, b]["edge"]]
    labels = [
        cocycle[e] ^ shift[a] ^ shift[b]
        for e, (a, b) in enumerate(t.edge_ends)
    ]

    if any(labels[e] for e in tree):
        raise InvariantViolation("Une arête de l'arbre a l'étiquette 1")
    if any(labels[e] for e in x.edges):
        raise InvariantViolation("Une arête de X a l'étiquette 1")
    for f, edges in enumerate(t.face_edge_classes):
        if sum(labels[e] for e in edges) % 2:
            raise InvariantViolation(f"Parité non nulle sur la face {f}")
    return labels


# ----------------------------------------------------------------------
# Assemblage
# ----------------------------------------------------------------------

def classify_tetrahedron(local: Sequence[int]) -> PieceRecord:
    """
    Disque normal d'un tétraèdre à partir des étiquettes de ses 6 arêtes

    Raises:
        InvariantViolation: motif hors des trois cas (vide, triangle, quadrilatère)
    """
    ones = {EDGES[i] for i, label in enumerate(local) if label}
    if not ones:
        return PieceRecord(tetrahedron=-1, kind="empty")
    if len(ones) == 3:
        for v in range(4):
            if all(v in edge for edge in ones):
                return PieceRecord(tetrahedron=-1, kind="triangle", vertex=v)
    if len(ones) == 4:
        zeros = [edge for edge in EDGES if edge not in ones]
        if not set(zeros[0]) & set(zeros[1]):
            return PieceRecord(tetrahedron=-1, kind="quad", zero_edges=[list(z) for z in zeros])
    raise InvariantViolation(f"Motif d'étiquettes impossible: {tuple(local)}")


def _polygon(piece: PieceRecord) -> List[int]:
    """Arêtes locales coupées, dans l'ordre cyclique du disque"""
    if piece.kind == "triangle":
        v = piece.vertex
        return [_edge_index(v, w) for w in range(4) if w != v]
    (a, b), (c, d) = piece.zero_edges
    return [_edge_index(a, c), _edge_index(c, b), _edge_index(b, d), _edge_index(d, a)]


def _arc(labels_local: Sequence[int], k: int) -> Optional[Tuple[int, int]]:
    """Arc normal sur la face k: les deux arêtes étiquetées 1 de la face"""
    cut = [e for e in _face_edges(k) if labels_local[e]]
    if not cut:
        return None
    if len(cut) != 2:
        raise InvariantViolation(f"Face {k} coupée {len(cut)} fois")
    return (cut[0], cut[1])


def _direction(polygon: List[int], a: int, b: int) -> int:
    """1 si le disque parcourt l'arc de a vers b"""
    n = len(polygon)
    i = polygon.index(a)
    return 1 if polygon[(i + 1) % n] == b else 0


def assemble_surface(t: Triangulation, labels: Sequence[int]) -> Tuple[List[PieceRecord], Dict]:
    """
    Pose un disque par tétraèdre et recolle à travers les faces

    Returns:
        pièces, et un dictionnaire de faits: composantes, orientabilité,
        courbes de bord, caractéristique d'Euler
    """
    local = [[labels[t.edge_class[(i, e)]] for e in range(6)] for i in range(t.size)]
    pieces = []
    for i in range(t.size):
        piece = classify_tetrahedron(local[i])
        pieces.append(piece.model_copy(update={"tetrahedron": i}))

    occupied = [i for i, piece in enumerate(pieces) if piece.kind != "empty"]
    components = nx.utils.UnionFind(occupied)
    parity = nx.MultiGraph()
    parity.add_nodes_from(occupied)
    arc_faces: Set[int] = set()
    boundary_arcs: List[Tuple[int, int]] = []
    for i, faces in enumerate(t.gluings):
        for k, gluing in enumerate(faces):
            arc = _arc(local[i], k)
            if arc is None:
                continue
            arc_faces.add(t.face_class[(i, k)])
            if gluing is None:
                boundary_arcs.append(tuple(t.edge_class[(i, e)] for e in arc))
                continue
            j = gluing.tet
            image = tuple(_edge_index(gluing.perm[EDGES[e][0]], gluing.perm[EDGES[e][1]]) for e in arc)
            if _arc(local[j], gluing.face) is None or set(image) != set(_arc(local[j], gluing.face)):
                raise InvariantViolation(f"Arcs incompatibles entre (tet {i}, face {k}) et (tet {j}, face {gluing.face})")
            if (i, k) < (j, gluing.face):
                components.union(i, j)
                same = _direction(_polygon(pieces[i]), *arc) == _direction(_polygon(pieces[j]), *image)
                parity.add_edge(i, j, parity=1 if same else 0)

    groups = sorted(sorted(group) for group in components.to_sets()) if occupied else []
    orientable = _consistent(parity)

    curves = nx.MultiGraph()
    for a, b in boundary_arcs:
        curves.add_edge(a, b)
    cut_edges = {e for e, label in enumerate(labels) if label}
    facts = {
        "components": groups,
        "orientable": orientable if occupied else None,
        "boundary_curves": [sorted(c) for c in nx.connected_components(curves)] if boundary_arcs else [],
        "euler_characteristic": len(cut_edges) - len(arc_faces) + len(occupied),
        "boundary_arcs": boundary_arcs,
    }
    return pieces, facts


def _consistent(parity: nx.MultiGraph) -> bool:
    orientation: Dict[int, int] = {}
    for start in parity.nodes:
        if start in orientation:
            continue
        orientation[start] = 0
        for u, v in nx.bfs_edges(parity, start):
            data = next(iter(parity.get_edge_data(u, v).values()))
            orientation[v] = orientation[u] ^ data["parity"]
    return all(
        (orientation[u] ^ orientation[v]) == data["parity"]
        for u, v, data in parity.edges(data=True)
    )


def _x_separates(t: Triangulation, x: Subcomplex) -> bool:
    dual = nx.MultiGraph()
    dual.add_nodes_from(range(t.size))
    for i, k, gluing in t._glued():
        if t.face_class[(i, k)] not in x.faces and (i, k) < (gluing.tet, gluing.face):
            dual.add_edge(i, gluing.tet)
    return not nx.is_connected(dual)


def _boundary_regions(t: Triangulation, loop_edges: Set[int]) -> Dict[int, int]:
    """Région de bord (composante de bord moins C) de chaque classe d'arête de bord hors de C"""
    graph = nx.Graph()
    for f in t.boundary_faces:
        graph.add_node(("face", f))
        for e in t.face_edge_classes[f]:
            if e not in loop_edges:
                graph.add_edge(("face", f), ("edge", e))
    region: Dict[int, int] = {}
    components = sorted(nx.connected_components(graph), key=lambda c: min(n[1] for n in c if n[0] == "face"))
    for index, component in enumerate(components):
        for kind, value in component:
            if kind == "edge":
                region[value] = index
    return region


def verify_lemma_guarantees(
    t: Triangulation,
    x: Subcomplex,
    tree: Sequence[int],
    labels: Sequence[int],
    pieces: List[PieceRecord],
    facts: Dict,
) -> NormalSurfaceReport:
    """
    Vérifie la surface: disjointe de X, composantes non séparantes (arête
    étiquetée 1 fermée par l'arbre), bornes sur le nombre de courbes de bord
    et au plus une courbe par anneau de bord moins C

    Ne lève pas d'exception: les écarts sont listés dans le rapport.
    """
    loops = boundary_loops(t, x)
    loop_edges = {e for loop in loops for e in loop}
    violations: List[str] = []

    disjoint = not any(labels[e] for e in x.edges)
    if not disjoint:
        violations.append("la surface rencontre X")

    witnesses: Dict[int, int] = {}
    closed = 0
    curve_list = facts["boundary_curves"]
    for index, group in enumerate(facts["components"]):
        cut = sorted({
            t.edge_class[(i, e)] for i in group for e in _polygon(pieces[i])
        })
        free = [e for e in cut if e not in tree]
        if free:
            witnesses[index] = free[0]
        else:
            violations.append(f"composante {index} sans témoin de non-séparation")
        if not any(set(curve) & set(cut) for curve in curve_list):
            closed += 1
    if closed:
        violations.append(f"{closed} composante(s) fermée(s)")

    region = _boundary_regions(t, loop_edges)
    region_count = len(set(region.values()))
    per_region = [0] * region_count
    for curve in curve_list:
        per_region[region[curve[0]]] += 1
    if any(count > 1 for count in per_region):
        violations.append("deux courbes de bord dans un même anneau")

    separating = _x_separates(t, x)
    bound = len(loops) / 2 if separating else len(loops)
    if len(curve_list) > bound:
        violations.append(f"{len(curve_list)} courbes de bord pour une borne de {bound}")

    report = NormalSurfaceReport(
        pieces=pieces,
        tree=list(tree),
        labels=list(labels),
        components=len(facts["components"]),
        boundary_curves=len(curve_list),
        loops=len(loops),
        euler_characteristic=facts["euler_characteristic"],
        orientable=facts["orientable"],
        closed_components=closed,
        non_separating_witnesses=witnesses,
        disjoint_from_x=disjoint,
        x_separating=separating,
        curves_per_region=per_region,
        violations=violations,
    )
    logger.info(
        "📊 Surface normale vérifiée",
        components=report.components,
        boundary_curves=report.boundary_curves,
        violations=len(violations),
    )
    return report


def normal_surface_pipeline(t: Triangulation, x: Optional[Subcomplex] = None) -> NormalSurfaceReport:
    """Arbre, étiquetage, assemblage puis vérification pour le X de la triangulation"""
    x = x or t.subcomplex()
    tree = build_tree(t, x)
    labels = label_edges(t, x, tree)
    pieces, facts = assemble_surface(t, labels)
    return verify_lemma_guarantees(t, x, tree, labels, pieces, facts)
