"""Print |A_max| / w(G) for the built-in conditions across small n.

    python scripts/ratio_table.py [--recipe scripts/ratio_recipe.json] [--out table.csv]
"""

import argparse
import json
import sys
from pathlib import Path

from gxsperner.cli import run_experiment

HERE = Path(__file__).resolve().parent


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--recipe", default=str(HERE / "ratio_recipe.json"))
    parser.add_argument("--out")
    parser.add_argument("--no-timing", action="store_true")
    args = parser.parse_args()

    recipe = json.loads(Path(args.recipe).read_text())
    table = run_experiment(recipe, timing=not args.no_timing)
    if args.out:
        Path(args.out).write_text(table)
    sys.stdout.write(table)


if __name__ == "__main__":
    main()
