"""Command-line entry point.

Every command prints a JSON run report ``{command, inputs_digest, seed,
results, elapsed_ms, version}``.  ``results`` is reproducible from the inputs
and seed; timing lives only in ``elapsed_ms``.  Exit status: 0 on success or
a passing verdict, 1 on a violation or failed probe, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .dhj import CombinatorialLine, dhj_forbidden_pair
from .families import (
    count_counterexample,
    counterexample_family,
    layered_family,
    parse_family,
    serialize_family,
    verify,
)
from .lattice import SubsetWord, binomial, layer_masks
from .probe import bounds as probe_bounds
from .probe import chain as probe_chain
from .probe.peel import neighbor_walk, neighbour_counts, peel
from .restrictions import RestrictionSystem, condition_system, parse_condition, parse_system
from .search import max_family
from .weight import weight


class UsageError(Exception):
    pass


class _Outcome:
    def __init__(self, results: dict, exit_code: int = 0, inputs: list[str] | None = None):
        self.results = results
        self.exit_code = exit_code
        self.inputs = inputs or []


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _condition(spec: str, n: int):
    try:
        return parse_condition(spec, n)
    except FileNotFoundError as exc:
        raise UsageError(f"--condition: no such file {spec!r}") from exc
    except ValueError as exc:
        raise UsageError(f"--condition: {exc}") from exc


def cmd_verify(args) -> _Outcome:
    text = _read(args.family)
    try:
        family = parse_family(text)
    except ValueError as exc:
        raise UsageError(f"--family: {exc}") from exc
    cond = _condition(args.condition, family.n)
    verdict = verify(cond, family)
    if verdict:
        return _Outcome({"verdict": "pass", "size": len(family)}, 0, [text])
    return _Outcome({"verdict": "violation", "size": len(family), **verdict.to_json()}, 1, [text])


def _system_for(spec: str, n: int | None) -> tuple[RestrictionSystem, list[str]]:
    if spec in ("sperner",) or spec.startswith("tilted:"):
        if n is None:
            raise UsageError("--n is required with a built-in system")
        return condition_system(_condition(spec, n)), []
    if spec == "ordered-tilted":
        raise UsageError("--system: the ordered pattern has no layer system")
    text = _read(spec)
    try:
        system = parse_system(text)
    except ValueError as exc:
        raise UsageError(f"--system: {exc}") from exc
    if n is not None and n != system.n:
        raise UsageError(f"--n {n} disagrees with the system file (n={system.n})")
    return system, [text]


def cmd_weight(args) -> _Outcome:
    system, inputs = _system_for(args.system, args.n)
    w, layers = weight(system)
    return _Outcome({"w": str(w), "I": layers}, 0, inputs)


def cmd_search(args) -> _Outcome:
    inputs = []
    if Path(args.condition).is_file():
        inputs.append(_read(args.condition))
    cond = _condition(args.condition, args.n)
    try:
        result = max_family(cond, args.n, time_limit_ms=args.time_limit_ms)
    except ValueError as exc:
        raise UsageError(f"--n: {exc}") from exc
    if args.emit_certificate:
        Path(args.emit_certificate).write_text(serialize_family(result.certificate))
    out = result.to_json()
    out.pop("elapsed_ms")
    return _Outcome(out, 0, inputs)


def _parse_layers(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"--layers: malformed list {text!r}") from exc


def _parse_template(text: str) -> tuple[int | None, ...]:
    out = []
    for ch in text:
        if ch == "*":
            out.append(None)
        elif ch.isdigit() and int(ch) < 8:
            out.append(int(ch))
        else:
            raise UsageError(f"--template: bad symbol {ch!r}")
    return tuple(out)


def cmd_construct(args) -> _Outcome:
    if args.kind == "layered":
        family = layered_family(args.n, _parse_layers(args.layers))
        results = {"size": len(family)}
    elif args.kind == "counterexample":
        beta = Fraction(args.beta)
        results = {"size": str(count_counterexample(args.n, beta))}
        family = counterexample_family(args.n, beta) if args.n <= 30 else None
    else:
        if args.template:
            template = _parse_template(args.template)
        else:
            if args.m is None:
                raise UsageError("dhj-line needs --template or --m")
            rng = np.random.default_rng([args.seed])
            template = tuple(None if x == 8 else int(x) for x in rng.integers(0, 9, size=args.m))
            if None not in template:
                template = (None,) + template[1:]
        try:
            line = CombinatorialLine(template, 8)
        except ValueError as exc:
            raise UsageError(f"--template: {exc}") from exc
        a, b, check = dhj_forbidden_pair(line)
        family = None
        results = {"line": str(line), "active": list(line.active), "A": str(a), "B": str(b),
                   "check": check}
    if family is not None and args.out:
        Path(args.out).write_text(serialize_family(family))
    return _Outcome(results, 0)


def _random_middle_layer(t: int, density: float, rng) -> list[SubsetWord]:
    masks = list(layer_masks(t, t // 2))
    keep = rng.random(len(masks)) < density
    return [SubsetWord(t, m) for m, k in zip(masks, keep) if k]


def cmd_probe(args) -> _Outcome:
    kind = args.kind
    if kind == "peel":
        if args.t is None or args.t % 2:
            raise UsageError("--t must be an even integer")
        rng = np.random.default_rng([args.seed])
        family = _random_middle_layer(args.t, args.density, rng)
        theta = math.ceil(args.alpha * args.t ** 2 / 32)
        core = peel(family, theta)
        degrees = neighbour_counts(core) if core else {}
        slack = len(core) - (len(family) - args.alpha * binomial(args.t, args.t // 2))
        return _Outcome({"t": args.t, "theta": theta, "B": len(family), "E": len(core),
                         "min_degree": min(degrees.values()) if degrees else None,
                         "peel_bound_holds": slack > 0})
    if kind == "walk":
        rng = np.random.default_rng([args.seed])
        family = _random_middle_layer(args.t, args.density, rng)
        if not family:
            return _Outcome({"path": None, "reason": "empty family"}, 1)
        start = family[0] if args.start is None else SubsetWord.parse(args.t, args.start)
        path = neighbor_walk(family, start, args.x)
        return _Outcome({"path": None if path is None else [str(s) for s in path]},
                        0 if path is not None else 1)
    if kind == "chain":
        sample = probe_chain.sample_chain(args.n, args.i, args.j, args.seed)
        zones = [probe_chain.zone_of(c) for c in sample.chain]
        return _Outcome({"K": sample.K, "U": list(sample.U), "V": list(sample.V),
                         "S1_size": len(sample.S1), "S2_size": len(sample.S2),
                         "chain_zones": [list(z) for z in zones]})
    if kind == "zone-prob":
        z = probe_chain.ZoneIndex(args.n, args.i, args.j)
        k = probe_chain.chain_length(args.n) if args.k is None else args.k
        est, se = probe_chain.estimate_zone_prob(args.n, z, k, args.trials, args.seed)
        return _Outcome({"n": args.n, "i": args.i, "j": args.j, "k": k, "trials": args.trials,
                         "estimate": est, "stderr": se})
    if kind == "fr-bound":
        return _Outcome({"t": args.t, "l": args.l, **probe_bounds.fr_bound(args.t, args.l).to_json()})
    if kind == "fr-brute":
        return _Outcome({"s": args.s, "l": args.l, "value": probe_bounds.fr_brute(args.s, args.l)})
    if kind == "bounds":
        w = None if args.w is None else int(args.w)
        return _Outcome(probe_bounds.paper_bounds(args.selector, args.n, args.p, args.q, w).to_json())
    raise UsageError(f"unknown probe {kind!r}")


EXPERIMENT_COLUMNS = ["n", "condition", "size", "w", "ratio", "optimal", "elapsed_ms"]


def run_experiment(recipe: dict, timing: bool = True) -> str:
    """Run every (condition, n) cell of a recipe and return the CSV table."""
    cells = recipe.get("cells")
    if not isinstance(cells, list) or not cells:
        raise UsageError('recipe needs a nonempty "cells" list')
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EXPERIMENT_COLUMNS)
    for cell in cells:
        try:
            cond_spec = cell["condition"]
            lo, hi = cell["n"]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed recipe cell {cell!r}") from exc
        budget = cell.get("time_limit_ms")
        for n in range(lo, hi + 1):
            cond = _condition(cond_spec, n)
            result = max_family(cond, n, time_limit_ms=budget)
            system = condition_system(cond)
            if system is not None:
                w = weight(system)[0]
                ratio = str(round(result.size / w, 6))
            else:
                w, ratio = "", ""
            writer.writerow([n, cond_spec, result.size, w, ratio, str(result.optimal).lower(),
                             result.elapsed_ms if timing else 0])
    return buf.getvalue()


def cmd_experiment(args) -> _Outcome:
    text = _read(args.recipe)
    try:
        recipe = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--recipe: malformed JSON: {exc}") from exc
    table = run_experiment(recipe, timing=not args.no_timing)
    if args.out:
        Path(args.out).write_text(table)
    return _Outcome({"csv": table}, 0, [text])


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--time-limit-ms", type=int, default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="gxsperner", parents=[common],
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a family file against a condition")
    p.add_argument("--family", required=True)
    p.add_argument("--condition", required=True, help="sperner | tilted:p:q | ordered-tilted | system.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weight", parents=[common], help="exact layer-graph weight w(G)")
    p.add_argument("--system", required=True, help="sperner | tilted:p:q | system.json")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("search", parents=[common], help="largest family avoiding a condition")
    p.add_argument("--condition", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit-certificate")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("construct", parents=[common], help="explicit families")
    p.add_argument("kind", choices=["layered", "counterexample", "dhj-line"])
    p.add_argument("--n", type=int)
    p.add_argument("--layers", default="")
    p.add_argument("--beta", default="1")
    p.add_argument("--m", type=int)
    p.add_argument("--template")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("probe", parents=[common], help="proof-mechanism probes")
    p.add_argument("kind", choices=["peel", "walk", "chain", "zone-prob", "fr-bound", "fr-brute", "bounds"])
    p.add_argument("--n", type=int)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--t", type=int)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--start")
    p.add_argument("--l", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--selector", choices=["thm1", "thm2", "thm3"], default="thm1")
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--w")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("experiment", parents=[common], help="run a recipe of searches into a CSV table")
    p.add_argument("--recipe", required=True)
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true", help="write 0 in the elapsed_ms column")
    p.set_defaults(func=cmd_experiment)
    return parser


def _digest(argv: list[str], inputs: list[str]) -> str:
    h = hashlib.sha256()
    for part in argv + inputs:
        h.update(part.encode())
        h.update(b"\0")
    return h.hexdigest()


def _flatten_csv(results: dict) -> str:
    if "csv" in results:
        return results["csv"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    keys = list(results)
    writer.writerow(keys)
    writer.writerow([v if isinstance(v, (str, int, float, bool)) or v is None else json.dumps(v)
                     for v in (results[k] for k in keys)])
    return buf.getvalue()


def run(argv: list[str] | None = None, stdout=None) -> int:
    """Parse ``argv``, dispatch, print the report; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name, default in (("seed", 0), ("format", "json"), ("time_limit_ms", None), ("quiet", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    t0 = time.monotonic()
    try:
        outcome = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"gxsperner {args.command}: error: {exc}", file=sys.stderr)
        return 2
    elapsed = int((time.monotonic() - t0) * 1000)
    if args.quiet:
        return outcome.exit_code
    if args.format == "csv":
        stdout.write(_flatten_csv(outcome.results))
    else:
        report = {
            "command": " ".join(argv),
            "inputs_digest": _digest(argv, outcome.inputs),
            "seed": args.seed,
            "results": outcome.results,
            "elapsed_ms": elapsed,
            "version": __version__,
        }
        stdout.write(json.dumps(report) + "\n")
    return outcome.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
