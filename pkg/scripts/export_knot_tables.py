#!/usr/bin/env python3
"""
Export des tables de Rolfsen et de Hoste-Thistlethwaite au format texte

Chaque ligne: `nom | PD | annotations`; les annotations connues (présentations
toriques, de Montesinos ou de bretzel) viennent de KNOWN_ANNOTATIONS.
Demande spherogram (dépendance optionnelle).
"""

import argparse
import sys
from pathlib import Path

root_path = Path(__file__).parent.parent
sys.path.insert(0, str(root_path))

from src.core.diagram import parse_pd
from src.utils.errors import InputError
from src.utils.logging import LogContext, get_logger, setup_logging

logger = get_logger()

# Présentations alternatives des nœuds non alternés hors d'atteinte des états uniformes
KNOWN_ANNOTATIONS = {
    "8_19": "torus=3,4",
    "10_124": "torus=3,5",
    "10_128": "montesinos=M(3/7,-1/2,1/3)",
    "10_139": "montesinos=M(1/3,-3/4,1/3)",
    "10_142": "pretzel=P(-4,3,3)",
}

HEADER = (
    "# nom | code PD | annotations (torus=p,q; montesinos=M(...); pretzel=P(...); variant=PD; r3=a,b,c)\n"
    "# Codes PD exportés de spherogram (scripts/export_knot_tables.py)\n"
)


def rolfsen_names(max_crossings: int):
    """Noms de Rolfsen premiers jusqu'à max_crossings (3_1 ... 10_165)"""
    counts = {3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 21, 9: 49, 10: 165}
    for n in range(3, min(max_crossings, 10) + 1):
        for index in range(1, counts[n] + 1):
            yield f"{n}_{index}"


def eleven_names():
    """Noms K11a1..K11a367 et K11n1..K11n185"""
    yield from (f"K11a{i}" for i in range(1, 368))
    yield from (f"K11n{i}" for i in range(1, 186))


def export(names, out_path: Path) -> int:
    try:
        import spherogram
    except ImportError:
        logger.error("❌ spherogram n'est pas installé (pip install spherogram)")
        return 1

    lines = []
    with LogContext("export_knot_tables", out=str(out_path)) as ctx:
        names = list(names)
        for position, name in enumerate(names, start=1):
            rows = spherogram.Link(name).PD_code(min_strand_index=1)
            pd = " ".join("X(" + ",".join(str(v) for v in row) + ")" for row in rows)
            try:
                diagram = parse_pd(pd, name=name)
            except InputError as exc:
                logger.warning("⚠️ Code PD rejeté", knot=name, error=str(exc))
                continue
            lines.append(f"{name} | {diagram.to_pd()} | {KNOWN_ANNOTATIONS.get(name, '')}".rstrip())
            if position % 100 == 0:
                ctx.log_progress(position, len(names))
            ctx.count("exported")

    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(HEADER + "\n".join(lines) + "\n", encoding="utf-8")
    logger.info("📄 Table exportée", path=str(out_path), entries=len(lines))
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description="Export des tables de nœuds via spherogram")
    parser.add_argument('table', choices=['rolfsen', 'eleven'], help='Table à exporter')
    parser.add_argument('--out', type=str, help='Fichier de sortie')
    args = parser.parse_args()

    setup_logging()
    default = "data/tables/rolfsen.txt" if args.table == "rolfsen" else "data/tables/eleven.txt"
    names = rolfsen_names(10) if args.table == "rolfsen" else eleven_names()
    return export(names, Path(args.out or default))


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n⚠️ Export interrompu par l'utilisateur", file=sys.stderr)
        sys.exit(130)
