"""
Exceptions du moteur de certification
"""

from typing import Optional


class InputError(ValueError):
    """Entrée invalide: code PD, présentation, graphe, triangulation ou table"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"ligne {line}: {message}"
        super().__init__(message)


class InvariantViolation(RuntimeError):
    """Un invariant interne est violé (erreur du moteur, pas de l'entrée)"""
