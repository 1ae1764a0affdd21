"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 chart gap (path too coarsely
sampled), 3 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import calibration, serialize
from .errors import ChartGapError, SchemaViolation, SymplIndexError
from .forms import SignConvention, ToleranceContext
from .ham import index_table, integrate_fundamental, iterate_index_report
from .maslov import maslov_report
from .cz import cz_index
from .meta import nu, nu_vs_cz, MetaplecticElement, parity_of
from .verify import SUITE_NAMES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_CHART_GAP, EXIT_INVARIANT = 0, 1, 2, 3
DEFAULT_CONFIG = "symplindex-config.json"
DEFAULTS = {"convention": "paper", "seed": 0, "tol_rank": ToleranceContext().rank_relative,
            "trials": 50, "workers": 1}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--convention", choices=["paper", "standard"],
                        help="signature convention (default: paper)")
    common.add_argument("--seed", type=int, help="random seed (default: 0)")
    common.add_argument("--tol-rank", type=float, dest="tol_rank",
                        help="relative zero-eigenvalue threshold")
    common.add_argument("--config", help="JSON run configuration file")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="format", action="store_const", const="json",
                     help="print the report as JSON (default)")
    out.add_argument("--text", dest="format", action="store_const", const="text",
                     help="print a short human-readable summary")

    parser = _Parser(prog="symplindex", description="Maslov, Conley-Zehnder and metaplectic indices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("maslov", parents=[common], help="Maslov index of a Lagrangian path")
    p.add_argument("path", help="lagrangian_path document")
    p.add_argument("reference", help="lagrangian document (the reference L0)")

    p = sub.add_parser("cz", parents=[common], help="Conley-Zehnder index of a symplectic path")
    p.add_argument("path", help="path document")

    p = sub.add_parser("iterate", parents=[common], help="indices of iterated periodic systems")
    p.add_argument("system", help="system document")
    p.add_argument("N", nargs="?", type=_positive_int, default=8, help="number of periods (default 8)")
    p.add_argument("--steps", type=_positive_int, default=1000, help="integration steps per period")

    p = sub.add_parser("nu", parents=[common], help="nu of a metaplectic element")
    p.add_argument("element", help="element document")

    p = sub.add_parser("verify", parents=[common], help="randomized invariant batteries")
    p.add_argument("suite", choices=SUITE_NAMES)
    p.add_argument("--trials", type=_positive_int, help="trials per check (default 50)")
    p.add_argument("--workers", type=_positive_int, help="worker processes (default 1)")

    p = sub.add_parser("calibrate", parents=[common],
                       help="recompute the route signs and write them to the configuration")
    p.add_argument("--force-degenerate", action="store_true",
                   help="use a degenerate calibration vector (exercises the error path)")
    return parser


def _load_config(path: str | None) -> dict:
    if path is None or not Path(path).exists():
        return {}
    doc = serialize.read_document(path)
    if not isinstance(doc, dict):
        raise SchemaViolation("", "configuration must be a JSON object")
    return doc


def _settings(args, config: dict) -> dict:
    out = {}
    for key, default in DEFAULTS.items():
        value = getattr(args, key, None)
        out[key] = value if value is not None else config.get(key, default)
    out["format"] = args.format or config.get("format", "json")
    return out


def _calibration_block(conv: str) -> dict:
    return {"epsilon_q": calibration.EPSILON_Q,
            "recorded": dict(sorted(calibration.RECORDED.items())),
            "provenance": "q(Delta, Gr R(-pi/2); Delta, Gr R(pi/2)) in the doubled plane",
            "convention": conv}


def _run(args, s: dict) -> tuple[dict, int]:
    conv = SignConvention.parse(s["convention"])
    tol = ToleranceContext(rank_relative=float(s["tol_rank"]))
    seed = int(s["seed"])
    cmd = args.command
    if cmd == "maslov":
        path = serialize.load(args.path, "lagrangian_path")
        L0 = serialize.load(args.reference, "lagrangian")
        rep = maslov_report(path, L0, conv, tol, seed)
        return {"index": str(rep.index), "windows": rep.diagnostics(),
                "candidates_tried": rep.candidates_tried}, EXIT_OK
    if cmd == "cz":
        path = serialize.load(args.path, "path")
        return {"index": str(cz_index(path, conv, tol, seed))}, EXIT_OK
    if cmd == "iterate":
        system = serialize.load(args.system, "system")
        sol = integrate_fundamental(system, args.steps)
        rep = iterate_index_report(system, args.N, conv, tol, sol=sol)
        return {"system": system.name, "N": args.N, "table": index_table(rep),
                "power_indices": [str(p) for p in rep.power_indices],
                "extension_matches_power": rep.extension_matches_power,
                "half_bound_violations": rep.half_bound_violations,
                "full_bound_holds": rep.full_bound_holds,
                "max_step_defect": sol.max_defect}, \
            EXIT_OK if rep.extension_matches_power and rep.full_bound_holds else EXIT_INVARIANT
    if cmd == "nu":
        e = serialize.load(args.element, "element")
        value = nu(e, tol)
        m0 = parity_of(e.W)
        rep = nu_vs_cz(e.W, e.m, seed, conv, tol)
        classes = [{"class": c.label, "cz": str(c.cz), "minus_cz_mod4": c.minus_cz_mod4.value,
                    "matching_m": list(c.matches)} for c in rep.classes]
        return {"m": e.m, "nu": value.value,
                "nu_by_m": {str(m): nu(MetaplecticElement(e.W, m), tol).value for m in (m0, m0 + 2)},
                "path_classes": classes, "loop_contribution": str(rep.loop_contribution),
                "unique_matches": rep.unique_matches, "shift_consistent": rep.shift_consistent}, \
            EXIT_OK if rep.consistent else EXIT_INVARIANT
    if cmd == "verify":
        results = run_suite(args.suite, seed, int(s["trials"]), int(s["workers"]))
        ok = all(r.ok for r in results)
        return {"suite": args.suite, "trials": int(s["trials"]), "all_pass": ok,
                "checks": [r.as_dict() for r in results]}, EXIT_OK if ok else EXIT_INVARIANT
    if cmd == "calibrate":
        res = calibration.calibrate(conv.value, seed, args.force_degenerate)
        target = args.config or DEFAULT_CONFIG
        config = _load_config(target)
        config["calibration"] = {"epsilon_q": res["epsilon_q"], "signs": res["signs"]}
        config.setdefault("convention", conv.value)
        Path(target).write_text(serialize.dumps(config))
        res["config"] = target
        return res, EXIT_OK if res["matches_recorded"] else EXIT_INVARIANT
    raise UsageError(f"unknown command {cmd}")


def _text(report: dict) -> str:
    r = report["results"]
    cmd = report["command"][0]
    if cmd in ("maslov", "cz"):
        return f"index {r['index']}"
    if cmd == "iterate":
        rows = [f"k={row['k']} index={row['index']} deviation={row['deviation']}"
                for row in r["table"]]
        return "\n".join(rows + [f"half-bound violations at k={r['half_bound_violations']}"])
    if cmd == "nu":
        return f"nu = {r['nu']} (m = {r['m']})"
    if cmd == "verify":
        lines = [f"{c['suite']}/{c['check']}: {'pass' if c['pass'] else 'FAIL'} "
                 f"({c['passed']}/{c['trials']}, {c['skipped']} skipped)" for c in r["checks"]]
        return "\n".join(lines)
    return f"epsilon_q = {r['epsilon_q']} written to {r['config']}"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        settings = _settings(args, _load_config(args.config))
        results, code = _run(args, settings)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SchemaViolation as exc:
        print(f"invalid input at {exc.pointer or '/'}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except ChartGapError as exc:
        print(f"chart gap: {exc}\nrefine the path near the reported samples and retry",
              file=sys.stderr)
        return EXIT_CHART_GAP
    except (SymplIndexError, ValueError) as exc:
        code = EXIT_USAGE if isinstance(exc, ValueError) else EXIT_INVARIANT
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    report = {"command": argv, "seed": settings["seed"], "convention": settings["convention"],
              "tolerance": {"rank_relative": float(settings["tol_rank"]),
                            "rank_absolute_floor": ToleranceContext().rank_absolute_floor},
              "calibration": _calibration_block(settings["convention"]), "results": results}
    if settings["format"] == "text":
        print(_text(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
