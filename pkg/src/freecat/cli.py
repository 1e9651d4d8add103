"""Command-line front end.

Exit codes: 0 no check failed, 1 some check failed, 2 bad input,
3 time budget exhausted (a partial report is still written).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import budget as budget_mod
from .oracle import MAX_RANK, MAX_RING_SIZE, OracleRefused, dump_table, oracle_enumerate_automorphisms
from .rings import RingError, make_ring
from .scenario import (EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_OK, SCHEMA, ScenarioError, build,
                       dry_run, dumps, load, run)
from .universe import Universe


def _emit(doc, output: Optional[str]):
    text = dumps(doc)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(doc):
    for c in doc.get("checks", []):
        print(f"{c['check']}: {c['status']}", file=sys.stderr)


def _budget(args) -> budget_mod.Budget:
    if getattr(args, "budget_ms", None) is not None:
        return budget_mod.Budget(args.budget_ms)
    return budget_mod.Budget.from_env()


def _execute(sc, args) -> int:
    if args.dry_run:
        _emit(dry_run(sc), args.output)
        return EXIT_OK
    doc, code = run(sc, _budget(args))
    _emit(doc, args.output or sc.output)
    _summary(doc)
    return code


def cmd_verify(args) -> int:
    return _execute(load(args.scenario), args)


def _functor_arg(text: str):
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"bad functor JSON: {e}") from None
    if text.startswith("mod_twist:"):
        return {"kind": "mod_twist", "alpha": text.split(":", 1)[1]}
    return {"kind": text}


def _adhoc(args, checks) -> dict:
    data = {
        "name": args.command,
        "variety": args.variety,
        "ranks": [int(r) for r in args.ranks.split(",")],
        "functor": _functor_arg(args.functor),
        "checks": checks,
    }
    if args.inverse:
        data["inverse"] = _functor_arg(args.inverse)
    bounds = {k: getattr(args, k) for k in ("max_len", "hom_len", "int_window") if getattr(args, k) is not None}
    if bounds:
        data["universe"] = bounds
    return data


def cmd_classify(args) -> int:
    kind = args.variety.split("(")[0]
    if kind == "SEM":
        checks = ["sem_classify"]
    elif kind == "MOD":
        checks = ["mod_conditions", "mod_semi_inner"]
    else:
        raise ScenarioError(f"no classifier for {args.variety}")
    return _execute(build(_adhoc(args, checks)), args)


def cmd_decompose(args) -> int:
    return _execute(build(_adhoc(args, ["decompose"])), args)


def cmd_oracle(args) -> int:
    try:
        ring = make_ring(args.ring)
    except RingError as e:
        raise ScenarioError(str(e)) from None
    if not ring.is_finite or ring.size > MAX_RING_SIZE:
        print(f"refused: {ring.descriptor} has more than {MAX_RING_SIZE} elements "
              f"(or is infinite); the oracle is limited to |R| <= {MAX_RING_SIZE}", file=sys.stderr)
        return EXIT_INPUT
    if not 1 <= args.max_rank <= MAX_RANK:
        print(f"refused: --max-rank must be between 1 and {MAX_RANK}", file=sys.stderr)
        return EXIT_INPUT
    if args.dry_run:
        from .category import Category
        from .varieties import VarietySpec

        u = Universe(Category(VarietySpec("MOD", ring), tuple(range(1, args.max_rank + 1))))
        _emit({"ring": ring.descriptor, "max_rank": args.max_rank, "universe": u.describe(),
               "sizes": u.sizes(), "dry_run": True}, args.output)
        return EXIT_OK
    b = _budget(args)
    try:
        with budget_mod.limited(b):
            res = oracle_enumerate_automorphisms(ring, args.max_rank, cross_check=not args.no_cross_check)
    except budget_mod.BudgetExceeded as e:
        _emit({"check": "oracle", "ring": ring.descriptor, "max_rank": args.max_rank,
               "status": "budget_exceeded", "error": str(e)}, args.output)
        return EXIT_BUDGET
    except OracleRefused as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_INPUT
    doc = res.report.to_dict()
    doc["automorphisms"] = [t.name for t in res.automorphisms]
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        files = []
        for t in res.automorphisms:
            path = os.path.join(args.out_dir, f"{t.name}.json")
            dump_table(t, res.category, path)
            files.append(os.path.basename(path))
        doc["table_files"] = files
    _emit(doc, args.output)
    print(f"oracle: {res.report.status} ({len(res.automorphisms)} automorphisms)", file=sys.stderr)
    return EXIT_FAIL if res.report.failed else EXIT_OK


def cmd_schema(args) -> int:
    if args.dry_run:
        _emit({"dry_run": True, "schema_keys": sorted(SCHEMA["properties"])}, args.output)
        return EXIT_OK
    _emit(SCHEMA, args.output)
    return EXIT_OK


def _common(p: argparse.ArgumentParser):
    p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    p.add_argument("--dry-run", action="store_true", help="print universe sizes and exit")
    p.add_argument("--budget-ms", type=float, default=None,
                   help=f"time budget in milliseconds (default: ${budget_mod.ENV_VAR})")


def _functor_flags(p: argparse.ArgumentParser):
    p.add_argument("--variety", required=True, help='"SEM", "MON" or "MOD(<ring>)"')
    p.add_argument("--ranks", default="1,2", help="comma separated ranks (must include 1)")
    p.add_argument("--functor", required=True,
                   help='functor kind ("identity", "sem_reversal", "mod_twist:frobenius") or JSON')
    p.add_argument("--inverse", help="inverse functor, same syntax (default: computed)")
    p.add_argument("--max-len", type=int, dest="max_len")
    p.add_argument("--hom-len", type=int, dest="hom_len")
    p.add_argument("--int-window", type=int, dest="int_window")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freecat",
                                     description="Verify automorphisms of categories of free algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the checks listed in a scenario file")
    p.add_argument("scenario")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="semigroup or module classification of one automorphism")
    _functor_flags(p)
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="split an automorphism into inner and extension parts")
    _functor_flags(p)
    _common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("oracle", help="enumerate automorphisms of a small module category")
    p.add_argument("--ring", required=True)
    p.add_argument("--max-rank", type=int, default=1, dest="max_rank")
    p.add_argument("--out-dir", help="write one table functor file per automorphism")
    p.add_argument("--no-cross-check", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("schema", help="print the scenario JSON schema")
    _common(p)
    p.set_defaults(func=cmd_schema)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
