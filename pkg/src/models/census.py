"""
Modèles de données pour le recensement des tables de nœuds
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, computed_field, validator

from src.models.certificate import Certificate


class KnotTableEntry(BaseModel):
    """Une ligne de table: nom, code PD (ou présentation) et annotations"""
    name: str = Field(..., description="Nom du nœud, par exemple '10_128' ou 'K11n118'")
    pd: Optional[str] = Field(None, description="Code PD du diagramme de table")
    presentation: Optional[str] = Field(None, description="Présentation M(...) ou P(...) donnée à la place du PD")
    torus: Optional[Tuple[int, int]] = Field(None, description="Annotation torus=p,q")
    montesinos: Optional[str] = Field(None, description="Annotation montesinos=M(...)")
    pretzel: Optional[str] = Field(None, description="Annotation pretzel=P(...)")
    variants: List[str] = Field(default_factory=list, description="Variantes PD ajustées à la main")
    r3_moves: List[Tuple[int, int, int]] = Field(default_factory=list, description="Mouvements R-III à appliquer")
    line: Optional[int] = Field(None, description="Ligne dans le fichier source")

    @validator('name')
    def validate_name(cls, v):
        if not v or not v.strip():
            raise ValueError("Le nom du nœud est obligatoire")
        return v.strip()

    @computed_field
    @property
    def crossing_number(self) -> Optional[int]:
        """Nombre de croisements déduit du nom (10_128 -> 10, K11n118 -> 11)"""
        name = self.name
        if name.startswith("K"):
            digits = ""
            for ch in name[1:]:
                if not ch.isdigit():
                    break
                digits += ch
            return int(digits) if digits else None
        head = name.split("_", 1)[0]
        return int(head) if head.isdigit() else None


class CensusOutcome(BaseModel):
    """Résultat d'un nœud: certificat ou trace des routes échouées"""
    name: str
    certified: bool
    certificate: Optional[Certificate] = None
    trail: List[str] = Field(default_factory=list, description="Échecs route par route")


class CensusReport(BaseModel):
    """Rapport déterministe d'un recensement"""
    outcomes: List[CensusOutcome] = Field(default_factory=list)
    routes: List[str] = Field(default_factory=list, description="Routes autorisées pendant le recensement")

    @computed_field
    @property
    def total(self) -> int:
        return len(self.outcomes)

    @computed_field
    @property
    def certified(self) -> int:
        return sum(1 for outcome in self.outcomes if outcome.certified)

    @computed_field
    @property
    def failures(self) -> List[str]:
        """Noms des nœuds sans certificat"""
        return [outcome.name for outcome in self.outcomes if not outcome.certified]

    @computed_field
    @property
    def route_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for outcome in self.outcomes:
            if outcome.certificate is not None:
                route = outcome.certificate.route.value
                counts[route] = counts.get(route, 0) + 1
        return dict(sorted(counts.items()))
