#!/usr/bin/env python3
"""
Script principal pour exécuter le moteur de certification
"""

import sys
from pathlib import Path

# Ajout de la racine du projet au path
root_path = Path(__file__).parent.parent
sys.path.insert(0, str(root_path))

from src.core.pipeline import run_sync


if __name__ == "__main__":
    run_sync()
