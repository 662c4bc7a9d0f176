"""
Fixtures partagées: diagrammes de référence et fichiers de données
"""

from pathlib import Path

import pytest

from src.core.diagram import parse_pd
from src.utils.logging import setup_logging

ROOT = Path(__file__).parent.parent
DATA_DIR = ROOT / "data"

# Trèfle gauche (trois croisements négatifs)
TREFOIL_PD = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
FIGURE_EIGHT_PD = "X(6,3,7,4) X(2,7,3,8) X(4,2,5,1) X(8,6,1,5)"
KINK_PD = "X(1,1,2,2)"


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    setup_logging(log_level="WARNING")


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_PD, name="3_1")


@pytest.fixture
def figure_eight():
    return parse_pd(FIGURE_EIGHT_PD, name="4_1")


@pytest.fixture
def kink():
    return parse_pd(KINK_PD, name="kink")


@pytest.fixture
def triangulation_path():
    def resolve(name: str) -> Path:
        return DATA_DIR / "triangulations" / name
    return resolve


@pytest.fixture
def sample_table():
    return DATA_DIR / "tables" / "sample.txt"
