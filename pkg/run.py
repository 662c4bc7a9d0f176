#!/usr/bin/env python3
"""
Script de démarrage simple pour le moteur de certification
Exécution directe sans configuration complexe
"""

import sys
from pathlib import Path

# Ajout de la racine au PYTHONPATH (paquets src et config)
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

from src.core.pipeline import main

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n⚠️ Certification interrompue par l'utilisateur", file=sys.stderr)
        sys.exit(130)
