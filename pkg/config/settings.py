"""
Configuration du moteur de certification de surfaces
Utilise Pydantic pour la validation et la gestion des paramètres
"""

from typing import List, Optional
from pydantic import BaseModel, Field, validator
from pathlib import Path
import os
from dotenv import load_dotenv

# Chargement des variables d'environnement
load_dotenv()


KNOWN_ROUTES = (
    "AlternatingCheckerboard",
    "AdequateHomogeneousState",
    "PretzelSurface",
    "GraphCheckerboard",
    "MurasugiMinor",
    "TorusKnotAnnulus",
)


class CertificationConfig(BaseModel):
    """Paramètres de la certification"""
    state_cap: int = Field(16, description="Nombre maximal de croisements pour l'énumération exhaustive des états")
    routes: List[str] = Field(list(KNOWN_ROUTES), description="Routes de preuve autorisées")
    exhaustive_search: bool = Field(False, description="Recherche exhaustive des états en dernier recours")
    max_dispatch_depth: int = Field(8, description="Profondeur maximale de ré-aiguillage Montesinos")

    @validator('state_cap')
    def validate_state_cap(cls, v):
        if v < 0 or v > 24:
            raise ValueError("Le plafond d'états doit être compris entre 0 et 24")
        return v

    @validator('routes')
    def validate_routes(cls, v):
        unknown = [route for route in v if route not in KNOWN_ROUTES]
        if unknown:
            raise ValueError(f"Routes inconnues: {', '.join(unknown)}")
        return v


class CensusConfig(BaseModel):
    """Paramètres du recensement des tables de nœuds"""
    table_path: str = Field("data/tables/rolfsen.txt", description="Table de nœuds par défaut")
    progress_every: int = Field(50, description="Fréquence des logs de progression")
    expected_up_to_ten: int = Field(249, description="Nombre attendu de nœuds premiers à au plus 10 croisements")
    expected_eleven: int = Field(552, description="Nombre attendu de nœuds premiers à 11 croisements")


class OutputConfig(BaseModel):
    """Paramètres de sortie des rapports"""
    format: str = Field("json", description="Format du rapport (json ou text)")
    indent: int = Field(2, description="Indentation JSON")

    @validator('format')
    def validate_format(cls, v):
        if v not in ("json", "text"):
            raise ValueError("Le format doit être 'json' ou 'text'")
        return v


class AppConfig(BaseModel):
    """Configuration globale"""
    certification: CertificationConfig = Field(default_factory=CertificationConfig)
    census: CensusConfig = Field(default_factory=CensusConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    # Logging
    log_level: str = Field("INFO", description="Niveau de logging")
    log_file: Optional[str] = Field(None, description="Fichier de log (optionnel)")
    log_format: str = Field("console", description="Format des logs (json ou console)")

    @validator('log_level')
    def validate_log_level(cls, v):
        if v.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Niveau de logging invalide: {v}")
        return v.upper()

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


def load_config(config_path: Optional[str] = None) -> AppConfig:
    """
    Charge la configuration depuis un fichier YAML ou des variables d'environnement

    Args:
        config_path: Chemin vers le fichier de configuration YAML

    Returns:
        Configuration de l'application
    """
    if config_path and Path(config_path).exists():
        import yaml
        with open(config_path, 'r', encoding='utf-8') as f:
            config_data = yaml.safe_load(f) or {}
        return AppConfig(**config_data)

    # Configuration par défaut depuis les variables d'environnement
    return AppConfig(
        certification=CertificationConfig(
            state_cap=int(os.getenv("KNOTCERT_STATE_CAP", "16")),
            exhaustive_search=os.getenv("KNOTCERT_EXHAUSTIVE", "false").lower() == "true",
        ),
        census=CensusConfig(
            table_path=os.getenv("KNOTCERT_TABLE", "data/tables/rolfsen.txt"),
        ),
        log_level=os.getenv("KNOTCERT_LOG_LEVEL", "INFO"),
        log_file=os.getenv("KNOTCERT_LOG_FILE"),
        log_format=os.getenv("KNOTCERT_LOG_FORMAT", "console"),
    )


# Instance globale de configuration
config = load_config(str(Path(__file__).parent / "config.yml"))
