"""``censorlab`` command line: run scenarios, verify censors, list presets.

Exit codes: 0 completed (whatever the verdict), 2 parse error,
3 validation error, 4 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import scenarios as sc
from .errors import CensorlabError

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3, 4
BUDGET_ENV = "CENSORLAB_BUDGET"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="censorlab", description="Censorship of quantum resources.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a scenario file or a preset and print a JSON report")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help="scenario JSON file ('-' for stdin)")
    src.add_argument("--preset", help="named preset instead of a file")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")

    ver = sub.add_parser("verify", help="check the properties of one censor")
    ver.add_argument("--censor", required=True, help="e.g. dephasing:2, cq:2x2, twirl:pauli1")
    ver.add_argument("--free", help="e.g. incoherent, separable_ppt:2x2, cq:2x2, twirl:z2")
    ver.add_argument("--samples", type=int, default=500)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--json", action="store_true", help="print JSON instead of a table")

    pre = sub.add_parser("presets", help="list named scenarios")
    pre.add_argument("--show", metavar="NAME", help="print the scenario JSON of one preset")
    return p


def _budget_override() -> int | None:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise sc.ScenarioParseError(BUDGET_ENV, f"expected an integer, got {raw!r}") from None
    if value < 0:
        raise sc.ScenarioParseError(BUDGET_ENV, "must be non-negative")
    return value


def _cmd_run(args, out) -> int:
    if args.preset:
        data, name = sc.preset_data(args.preset), args.preset
    else:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise sc.ScenarioParseError(args.file, exc.strerror or str(exc)) from None
        data, name = sc.load_text(text), os.path.basename(args.file)
    if isinstance(data, dict):
        if args.seed is not None:
            data["seed"] = args.seed
        budget = _budget_override()
        if budget is not None:
            data["budget"] = budget
    t0 = time.perf_counter()
    loaded = sc.build_scenario(data)
    report = sc.run_report(loaded, name)
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    out.write(sc.dumps(report) + "\n")
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    report = sc.verify_report(args.censor, args.free, args.samples, args.seed)
    if args.json:
        out.write(sc.dumps(report) + "\n")
        return EXIT_OK
    out.write(f"censor {report['censor']} dims {report['dims']} free {report['free']}\n")
    for r in report["checks"]:
        mark = {True: "PASS", False: "FAIL", None: "INFO"}[r["passed"]]
        detail = " ".join(f"{k}={v}" for k, v in r["detail"].items())
        out.write(f"  {mark:4}  {r['check']:34} {detail}\n")
    out.write(f"overall: {'PASS' if report['all_passed'] else 'FAIL'}\n")
    return EXIT_OK


def _cmd_presets(args, out) -> int:
    if args.show:
        out.write(sc.dumps(sc.preset_data(args.show)) + "\n")
        return EXIT_OK
    for name in sc.preset_names():
        out.write(f"{name:28} {sc.PRESETS[name][0]}\n")
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "verify": _cmd_verify, "presets": _cmd_presets}[args.command]
    try:
        return handler(args, out)
    except sc.ScenarioParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (CensorlabError, ValueError) as exc:
        err.write(f"validation error: {exc}\n")
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
