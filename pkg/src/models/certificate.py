"""
Modèles de données pour les certificats
Sérialisés en JSON par Pydantic; le schéma est versionné
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, validator

from src.models.surface import EssentialVerdict, SurfaceSummary

SCHEMA_VERSION = 1


class Conjecture(str, Enum):
    """Conjectures sur les surfaces de bord d'un nœud"""
    NEUWIRTH = "neuwirth"
    STRONG_NEUWIRTH = "strong-neuwirth"
    EVEN_SLOPE = "even-slope"
    STRONG_EVEN_SLOPE = "strong-even-slope"


class Route(str, Enum):
    """Route de preuve enregistrée dans un certificat"""
    ALTERNATING_CHECKERBOARD = "AlternatingCheckerboard"
    ADEQUATE_HOMOGENEOUS_STATE = "AdequateHomogeneousState"
    PRETZEL_SURFACE = "PretzelSurface"
    GRAPH_CHECKERBOARD = "GraphCheckerboard"
    MURASUGI_MINOR = "MurasugiMinor"
    TORUS_KNOT_ANNULUS = "TorusKnotAnnulus"


class CaseStep(BaseModel):
    """Étape rejouable de la machine à cas (normalize, reorder, deform, parity, flip, smooth_inner, deplumb)"""
    name: str
    values: Dict[str, str] = Field(default_factory=dict)


class Certificate(BaseModel):
    """
    Certificat vérifiable d'une conjecture pour un nœud

    Le témoin est un diagramme PD avec un état, une présentation de bretzel,
    un graphe pondéré ou une forme torique; les faits de surface sont
    recalculés à la validation.
    """
    schema_version: int = Field(SCHEMA_VERSION, description="Version du schéma JSON")
    subject: str = Field(..., description="Nom du nœud ou présentation")
    conjecture: Conjecture
    implied: List[Conjecture] = Field(default_factory=list)
    route: Route
    pd_code: Optional[str] = Field(None, description="Diagramme du témoin")
    state: Optional[str] = Field(None, description="État du témoin, par exemple '+-+-'")
    presentation: Optional[str] = Field(None, description="Présentation M(...) ou P(...)")
    graph: Optional[str] = Field(None, description="Graphe pondéré au format texte")
    minor: Optional[str] = Field(None, description="Mineur de bretzel P(...)")
    steps: List[CaseStep] = Field(default_factory=list)
    torus: Optional[Tuple[int, int]] = None
    surface_facts: SurfaceSummary
    verdict: Optional[EssentialVerdict] = None

    @validator('state')
    def validate_state(cls, v):
        if v is not None and set(v) - {"+", "-"}:
            raise ValueError("Un état ne contient que '+' et '-'")
        return v


class ValidationResult(BaseModel):
    """Résultat de validate_certificate, avec la trace des raisons"""
    valid: bool
    reasons: List[str] = Field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid
