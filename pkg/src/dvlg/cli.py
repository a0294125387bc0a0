"""Command-line interface.

Subcommands: decide (truth in the existentially closed theory), reduce
(lattice-sort reduction), eval (brute-force truth over a finite
standard structure), model (periodic-model computations and witness
search), selftest (acceptance corpus and property suites).

Exit codes: 0 true/pass, 1 false, 2 parse or sort error,
3 unsupported fragment, 4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import periodic as P
from .boolalg import ba_decide
from .errors import (
    DepthExceeded,
    DvlgError,
    FormulaSyntaxError,
    NotLatticeSorted,
    NotSentence,
    ResourceLimit,
    SortError,
    UnboundVariable,
    UnsupportedFragment,
)
from .oracle import Assignment, count_atoms, decide_finite
from .parser import parse
from .rationals import rat
from .reduction import reduce
from .selfcheck import periodic_witness_search, run_all
from .standard import FinStdStructure, GroupVector, SubsetL
from .syntax import free_vars, print_formula

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_BAD_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_RESOURCE = 4


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dvlg",
        description="Decision procedures for densely valued lattice-ordered groups.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_formula=True):
        if needs_formula:
            p.add_argument("formula", nargs="?", help="formula text")
            p.add_argument("--file", help="read the formula from a file")
        p.add_argument("--json", action="store_true", help="JSON report")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--limits",
            default="",
            help="resource caps as k=v pairs, comma separated",
        )
        p.add_argument("--trace", action="store_true")

    p = sub.add_parser("decide", help="truth in the existentially closed theory")
    p.add_argument("--mode", choices=["ec", "tplus"], default="ec")
    common(p)

    p = sub.add_parser("reduce", help="lattice-sort reduction")
    p.add_argument("--mode", choices=["ec", "tplus"], default="tplus")
    common(p)

    p = sub.add_parser("eval", help="evaluate over a finite standard structure")
    p.add_argument("-n", type=int, default=2, help="ground set size")
    p.add_argument("--env", default="{}", help="assignment as JSON")
    common(p)

    p = sub.add_parser("model", help="periodic-model computations")
    p.add_argument(
        "--op",
        required=True,
        choices=[
            "add", "neg", "meet", "join", "valuation", "split",
            "archimedean", "shift", "witness",
        ],
    )
    p.add_argument("--args", default="[]", help="operands as JSON")
    p.add_argument("--max-period", type=int, default=6, dest="max_period")
    common(p)

    p = sub.add_parser("selftest", help="run the acceptance suites")
    common(p, needs_formula=False)
    return ap


def _parse_limits(text: str) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if part:
            k, _, v = part.partition("=")
            out[k.strip()] = int(v)
    return out


def _read_formula(args) -> str:
    if args.file:
        with open(args.file) as fh:
            return fh.read().strip()
    if args.formula:
        return args.formula
    raise FormulaSyntaxError("no formula given (positional or --file)")


def _load_env(text: str) -> Assignment:
    data = json.loads(text)
    genv = {
        k: GroupVector.from_json(v) for k, v in data.get("group", {}).items()
    }
    lenv = {}
    for k, v in data.get("lattice", {}).items():
        width = max(v, default=-1) + 1
        lenv[k] = SubsetL.from_indices(v, max(width, 1))
    return Assignment(genv, lenv)


def _report(args, command, source, verdict, stats, trace, exit_code):
    if args.json:
        doc = {
            "command": command,
            "input": source,
            "verdict": verdict,
            "stats": stats,
        }
        if args.trace:
            doc["trace"] = trace
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        if args.trace:
            for line in trace:
                print(f"# {line}")
        if isinstance(verdict, bool):
            print("true" if verdict else "false")
        else:
            print(json.dumps(verdict, indent=2, sort_keys=True))
    return exit_code


def _cmd_decide(args) -> int:
    source = _read_formula(args)
    phi = parse(source)
    free = free_vars(phi)
    if free:
        raise NotSentence(f"decide needs a sentence; free variables: {sorted(free)}")
    start = time.time()
    out = reduce(phi, mode=args.mode)
    verdict = ba_decide(out.chi)
    stats = {
        "elapsed_ms": int((time.time() - start) * 1000),
        "eliminations": out.eliminations,
        "atoms": count_atoms(phi),
    }
    trace = [
        f"mode: {args.mode}",
        f"chi: {print_formula(out.chi)}",
        f"terms: {out.to_json()['terms']}",
    ]
    return _report(
        args, "decide", source, verdict, stats, trace,
        EXIT_TRUE if verdict else EXIT_FALSE,
    )


def _cmd_reduce(args) -> int:
    source = _read_formula(args)
    phi = parse(source)
    start = time.time()
    out = reduce(phi, mode=args.mode)
    stats = {
        "elapsed_ms": int((time.time() - start) * 1000),
        "eliminations": out.eliminations,
        "atoms": count_atoms(phi),
    }
    trace = [f"mode: {args.mode}"]
    return _report(args, "reduce", source, out.to_json(), stats, trace, EXIT_TRUE)


def _cmd_eval(args) -> int:
    source = _read_formula(args)
    phi = parse(source)
    env = _load_env(args.env)
    start = time.time()
    verdict = decide_finite(
        FinStdStructure(args.n), phi, env, limits=_parse_limits(args.limits) or None
    )
    stats = {
        "elapsed_ms": int((time.time() - start) * 1000),
        "eliminations": 0,
        "atoms": count_atoms(phi),
    }
    trace = [f"n: {args.n}"]
    return _report(
        args, "eval", source, verdict, stats, trace,
        EXIT_TRUE if verdict else EXIT_FALSE,
    )


def _periodic_from_json(data) -> P.PeriodicFn:
    return P.PeriodicFn.from_json(data)


def _cmd_model(args) -> int:
    start = time.time()
    operands = json.loads(args.args)
    op = args.op
    trace = [f"op: {op}"]
    if op == "witness":
        source = _read_formula(args)
        phi = parse(source)
        witness = periodic_witness_search(phi, args.max_period)
        verdict = (
            {k: v.to_json() for k, v in witness.items()} if witness else False
        )
        exit_code = EXIT_TRUE if witness else EXIT_FALSE
        atoms = count_atoms(phi)
    else:
        source = json.dumps(operands)
        atoms = 0
        exit_code = EXIT_TRUE
        if op in ("add", "meet", "join"):
            f, g = (_periodic_from_json(x) for x in operands)
            verdict = P.periodic_op(op, f, g).to_json()
        elif op == "neg":
            verdict = P.periodic_op("neg", _periodic_from_json(operands[0])).to_json()
        elif op == "valuation":
            verdict = P.periodic_valuation(_periodic_from_json(operands[0])).to_json()
        elif op == "split":
            verdict = P.split_nonempty(P.PeriodicSet.from_json(operands[0])).to_json()
        elif op == "archimedean":
            f, g = (_periodic_from_json(x) for x in operands)
            verdict = P.archimedean_bound(f, g)
        elif op == "shift":
            verdict = P.shift(_periodic_from_json(operands[0])).to_json()
        else:
            raise DvlgError(f"unknown op {op}")
    stats = {
        "elapsed_ms": int((time.time() - start) * 1000),
        "eliminations": 0,
        "atoms": atoms,
    }
    return _report(args, "model", source, verdict, stats, trace, exit_code)


def _cmd_selftest(args) -> int:
    seed = args.seed
    start = time.time()
    lines = []

    def report(name, ok, detail, elapsed):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail} ({elapsed:.1f}s)"
        lines.append(line)
        if not args.json:
            print(line)

    results = run_all(seed, report=report)
    passed = sum(1 for _, ok, _, _ in results if ok)
    verdict = passed == len(results)
    if not args.json:
        print(f"{passed}/{len(results)} criteria passed")
    stats = {
        "elapsed_ms": int((time.time() - start) * 1000),
        "eliminations": 0,
        "atoms": 0,
    }
    return _report(
        args, "selftest", f"seed={seed}", verdict, stats, lines,
        EXIT_TRUE if verdict else EXIT_FALSE,
    )


_DISPATCH = {
    "decide": _cmd_decide,
    "reduce": _cmd_reduce,
    "eval": _cmd_eval,
    "model": _cmd_model,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if "DVLG_SEED" in os.environ:
        args.seed = int(os.environ["DVLG_SEED"])
    try:
        return _DISPATCH[args.command](args)
    except (FormulaSyntaxError, SortError, NotSentence, NotLatticeSorted,
            UnboundVariable, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except UnsupportedFragment as e:
        print(f"unsupported fragment: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ResourceLimit, DepthExceeded) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
