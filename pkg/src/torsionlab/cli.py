"""torsionlab command line: list, run, suite, bound."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from . import bounds
from .checks import ENGINE_VERSION, REGISTRY, REQUIRED, SCHEMA_VERSION, UsageError, _run_entry, run_check
from .reports import FAIL, jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# command-line flag -> check parameter name
PARAM_FLAGS = {
    "p": "p", "k": "k", "N": "N", "g": "g", "d": "d", "r": "r", "B": "B", "q": "q", "l": "l", "seed": "seed",
}


def _dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)


def _text_line(rep: dict) -> str:
    params = " ".join(f"{k}={v}" for k, v in sorted(rep["params"].items()) if v is not None)
    line = f"[{rep['status'].upper():>18}] {rep['check_id']} {params}".rstrip()
    if rep.get("elapsed_ms") is not None:
        line += f"  ({rep['elapsed_ms']:.1f} ms)"
    if rep["status"] == FAIL:
        line += f"\n    counterexample: {json.dumps(rep['counterexample'], sort_keys=True)}"
        line += f"\n    confirmed by recheck: {rep['counterexample_confirmed']}"
    for n in rep["notes"]:
        line += f"\n    note: {n}"
    return line


# -- list ---------------------------------------------------------------------


def cmd_list(args) -> int:
    rows = []
    for cid in sorted(REGISTRY):
        d = REGISTRY[cid]
        schema = {n: {"type": t.__name__, "required": dft is REQUIRED, "default": None if dft is REQUIRED else dft}
                  for n, (t, dft) in d.params.items()}
        rows.append({"check_id": cid, "module": d.module, "summary": d.summary, "params": schema})
    if args.format == "json":
        print(_dumps({"schema_version": SCHEMA_VERSION, "engine_version": ENGINE_VERSION, "checks": rows}))
    else:
        for r in rows:
            ps = ", ".join(n if s["required"] else f"{n}={s['default']}" for n, s in r["params"].items())
            print(f"{r['check_id']:<20} {r['module']:<16} ({ps})  {r['summary']}")
    return EXIT_OK


# -- run ----------------------------------------------------------------------


def _params_from_args(args, check_id: str) -> dict:
    schema = REGISTRY[check_id].params
    out = {}
    for flag, name in PARAM_FLAGS.items():
        val = getattr(args, flag)
        if val is None:
            continue
        if name not in schema:
            raise UsageError(f"{check_id} does not take --{flag}")
        out[name] = val
    if args.three_type:
        if "three_type" not in schema:
            raise UsageError(f"{check_id} does not take --three-type")
        out["three_type"] = True
    for flag in ("dump_relations", "dump_table"):
        if getattr(args, flag):
            if flag not in schema:
                raise UsageError(f"{check_id} does not take --{flag.replace('_', '-')}")
            out[flag] = True
    return out


def cmd_run(args) -> int:
    if args.check_id not in REGISTRY:
        raise UsageError(f"unknown check id {args.check_id!r}; see 'torsionlab list'")
    rep = run_check(args.check_id, _params_from_args(args, args.check_id), timing=args.timing)
    d = rep.to_dict()
    print(_dumps(d) if args.format == "json" else _text_line(d))
    return EXIT_FAIL if rep.status == FAIL else EXIT_OK


# -- suite --------------------------------------------------------------------


def expand_config(config: dict) -> list[dict]:
    """Expand list-valued params into a grid; order follows the file."""
    if not isinstance(config, dict) or not isinstance(config.get("checks", []), list):
        raise UsageError("config must be an object with a 'checks' list")
    entries = []
    for i, item in enumerate(config.get("checks", [])):
        if not isinstance(item, dict) or "check" not in item:
            raise UsageError(f"entry {i}: needs a 'check' field")
        extra = set(item) - {"check", "params", "expect", "expect_status", "note"}
        if extra:
            raise UsageError(f"entry {i}: unknown field(s) {', '.join(sorted(extra))}")
        cid = item["check"]
        if cid not in REGISTRY:
            raise UsageError(f"entry {i}: unknown check id {cid!r}")
        params = item.get("params", {})
        keys = list(params)
        axes = [v if isinstance(v, list) else [v] for v in params.values()]
        for combo in itertools.product(*axes):
            p = dict(zip(keys, combo))
            REGISTRY[cid].bind(p)  # validate before anything runs
            entries.append({"check": cid, "params": p, "expect": item.get("expect"),
                            "expect_status": item.get("expect_status"), "note": item.get("note")})
    return entries


def run_suite(config: dict, jobs: int = 1, timing: bool = False) -> dict:
    entries = expand_config(config)
    for e in entries:
        e["timing"] = timing
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_entry, entries))  # map keeps declaration order
    else:
        results = [_run_entry(e) for e in entries]
    counts: dict[str, int] = {}
    for r in results:
        counts[r["report"]["status"]] = counts.get(r["report"]["status"], 0) + 1
    unexpected = sum(not r["as_expected"] for r in results)
    return {
        "schema_version": SCHEMA_VERSION,
        "engine_version": ENGINE_VERSION,
        "total": len(results),
        "status_counts": counts,
        "unexpected": unexpected,
        "reports": [r["report"] for r in results],
        "as_expected": [r["as_expected"] for r in results],
    }


def cmd_suite(args) -> int:
    try:
        if args.config is None:
            config = json.loads(resources.files("torsionlab").joinpath("data/default_suite.json").read_text())
        else:
            with open(args.config) as fh:
                config = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config: {e}") from None
    agg = run_suite(config, jobs=args.jobs, timing=args.timing)
    if agg["total"] == 0:
        print("warning: config lists no checks", file=sys.stderr)
    if args.format == "json":
        print(_dumps({k: v for k, v in agg.items() if k != "as_expected"}))
    else:
        for rep, ok in zip(agg["reports"], agg["as_expected"]):
            print(_text_line(rep) + ("" if ok else "\n    UNEXPECTED"))
        print(f"{agg['total']} checks, {agg['unexpected']} unexpected; {json.dumps(agg['status_counts'], sort_keys=True)}")
    return EXIT_FAIL if agg["unexpected"] else EXIT_OK


# -- bound --------------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def cmd_bound(args) -> int:
    name = args.name
    try:
        if name == "torsion-bound":
            _need(args, "d", "g")
            b = bounds.torsion_bound_exponents(args.d, args.g)
            out = {"breakdown": b, "faltings_chai": bounds.faltings_chai_bound(args.d),
                   "gcd": bounds.bound_gcd(args.d, args.g)}
        elif name == "faltings-chai":
            _need(args, "d")
            out = {"d": args.d, "bound": bounds.faltings_chai_bound(args.d)}
        elif name == "n-p-g":
            _need(args, "p", "g")
            out = {"p": args.p, "g": args.g, "n_p_g": bounds.n_p_g(args.p, args.g)}
        elif name == "big-n":
            _need(args, "g")
            out = {"g": args.g, "N": bounds.big_N_of_g(args.g)}
        elif name == "variant-zero":
            _need(args, "p")
            out = {"p": args.p, "valuation": bounds.variant_n_p_g_with_zero(args.p)}
        elif name == "corollary":
            _need(args, "d", "g")
            out = {"d": args.d, "g": args.g, "three_type": args.three_type,
                   "bound": bounds.optimal_corollary_bound(args.d, args.g, args.three_type)}
        else:
            raise UsageError(f"unknown bound {name!r}")
    except ValueError as e:
        if isinstance(e, UsageError):
            raise
        raise UsageError(str(e)) from None
    print(_dumps({"schema_version": SCHEMA_VERSION, "engine_version": ENGINE_VERSION, "bound": name, "result": out}))
    return EXIT_OK


BOUND_NAMES = ("torsion-bound", "faltings-chai", "n-p-g", "big-n", "variant-zero", "corollary")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for suites")
    common.add_argument("--timing", action="store_true", help="record elapsed_ms (breaks byte-identical output)")

    nums = argparse.ArgumentParser(add_help=False)
    for flag in PARAM_FLAGS:
        nums.add_argument(f"--{flag}", type=int, default=None)
    nums.add_argument("--three-type", action="store_true", help="3-type is (1,...,1,3^k) with k > 0")

    ap = argparse.ArgumentParser(prog="torsionlab", description="Exhaustive checks of torsion bound arithmetic.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="list registered checks")
    r = sub.add_parser("run", parents=[common, nums], help="run one check")
    r.add_argument("check_id")
    r.add_argument("--dump-relations", action="store_true")
    r.add_argument("--dump-table", action="store_true")
    s = sub.add_parser("suite", parents=[common], help="run a JSON suite config")
    s.add_argument("--config", default=None, help="suite JSON (default: the bundled suite)")
    b = sub.add_parser("bound", parents=[common, nums], help="print a bound as JSON")
    b.add_argument("name", choices=BOUND_NAMES)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if getattr(args, "jobs", 1) < 1:
        print("torsionlab: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    handler = {"list": cmd_list, "run": cmd_run, "suite": cmd_suite, "bound": cmd_bound}[args.command]
    try:
        return handler(args)
    except UsageError as e:
        print(f"torsionlab: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
