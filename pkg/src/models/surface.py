"""
Modèles de données pour les surfaces d'état et les verdicts
Utilise Pydantic pour la validation et la sérialisation
"""

from typing import Dict, List, Optional
from pydantic import BaseModel, Field, computed_field, validator


class StateCheck(BaseModel):
    """Prédicats d'un état sur un diagramme"""
    adequate: bool = Field(..., description="Le graphe d'état n'a pas de boucle")
    homogeneous: bool = Field(..., description="Chaque bloc est de signe constant")
    is_seifert: bool = Field(..., description="L'état est l'état de Seifert d'une orientation")


class SurfaceSummary(BaseModel):
    """Invariants d'une surface engendrée (surface d'état ou anneau)"""
    euler_characteristic: int = Field(..., description="Caractéristique d'Euler")
    orientable: bool = Field(..., description="Surface orientable")
    boundary_components: int = Field(..., ge=1, description="Nombre de courbes de bord")
    boundary_slope: Optional[int] = Field(None, description="Pente de bord (nœuds uniquement)")
    genus: Optional[int] = Field(None, description="Genre (surface orientable)")
    nonorientable_genus: Optional[int] = Field(None, description="Genre non orientable")
    loops: Optional[int] = Field(None, description="Nombre de disques (boucles d'état)")
    crossings: Optional[int] = Field(None, description="Nombre de bandes")

    @validator('genus', 'nonorientable_genus')
    def validate_genus(cls, v):
        if v is not None and v < 0:
            raise ValueError("Le genre doit être positif ou nul")
        return v

    @computed_field
    @property
    def even_slope(self) -> bool:
        """Pente de bord entière paire"""
        return self.boundary_slope is not None and self.boundary_slope % 2 == 0


class EssentialVerdict(BaseModel):
    """Verdict d'essentialité; None signifie que le critère ne conclut pas"""
    essential: Optional[bool] = Field(..., description="Vrai, faux ou non concluant")
    reason: str = Field(..., description="Exception rencontrée ou critère satisfait")

    @computed_field
    @property
    def conclusive(self) -> bool:
        return self.essential is not None


class PieceRecord(BaseModel):
    """Disque normal d'un tétraèdre"""
    tetrahedron: int
    kind: str = Field(..., description="empty, triangle ou quad")
    vertex: Optional[int] = Field(None, description="Sommet coupé par un triangle")
    zero_edges: Optional[List[List[int]]] = Field(None, description="Arêtes opposées non coupées par un quad")


class NormalSurfaceReport(BaseModel):
    """Rapport de vérification d'une surface normale issue d'un étiquetage"""
    pieces: List[PieceRecord] = Field(default_factory=list)
    tree: List[int] = Field(default_factory=list, description="Classes d'arêtes de l'arbre maximal")
    labels: List[int] = Field(default_factory=list, description="Étiquette de chaque classe d'arête")
    components: int = 0
    boundary_curves: int = 0
    loops: int = Field(0, description="Nombre de courbes de X sur le bord")
    euler_characteristic: int = 0
    orientable: Optional[bool] = None
    closed_components: int = 0
    non_separating_witnesses: Dict[int, int] = Field(default_factory=dict)
    disjoint_from_x: bool = True
    x_separating: bool = False
    curves_per_region: List[int] = Field(default_factory=list)
    violations: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def curve_bound(self) -> float:
        """Borne sur le nombre de courbes de bord"""
        return self.loops / 2 if self.x_separating else float(self.loops)

    @computed_field
    @property
    def empty(self) -> bool:
        return all(piece.kind == "empty" for piece in self.pieces)
