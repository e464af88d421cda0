"""Command line front end: ``loopterm --input FILE``.

Exit codes: 0 decided, 2 inconclusive, 1 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .dsl import load_instance_json, parse_loop_dsl
from .errors import InstanceSyntaxError, LoopSystemError
from .oracle import DEFINITIVE_NO, oracle_no_witness, oracle_not_salient, orbit_simulate
from .polyring import LoopSystem
from .report import build_report, certificate_bundle, config_from_json, dumps, qvec, verify_report
from .termination import INCONCLUSIVE, NONTERMINATING_WITNESS_EXISTS, NO_WITNESS, NOT_SALIENT, Decision, decide_nontermination

log = logging.getLogger("loopterm")

EXIT_DECIDED = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits with 2 by default, which would read as INCONCLUSIVE
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="loopterm", description="Decide whether a multipath linear loop has a nonterminating real input.")
    p.add_argument("--input", metavar="FILE", help="instance file (JSON or DSL); '-' reads stdin")
    p.add_argument("--format", choices=("json", "dsl"), help="input format (default: by extension)")
    p.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")
    p.add_argument("--max-degree", type=int, metavar="N", help="degree bound for the positive-element search (default 8)")
    p.add_argument("--box", nargs=2, metavar=("P", "Q"), help="box [P, Q] with 0 < P <= 1 <= Q for the interval diagnostics (default 1/2 2)")
    p.add_argument("--budget-seconds", type=float, metavar="S", help="wall-clock budget for the search")
    p.add_argument("--oracle-check", type=int, metavar="L", help="cross-check against brute-force orbits of length <= L")
    p.add_argument("--emit-certificates", metavar="FILE", help="write certificates and module bases to FILE")
    p.add_argument("--verify", metavar="FILE", help="re-check a report instead of deciding")
    p.add_argument("--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    p.add_argument("--version", action="version", version=f"loopterm {__version__}")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def load_instance(text: str, fmt: str) -> tuple[LoopSystem, dict]:
    if fmt == "json":
        return load_instance_json(text)
    return parse_loop_dsl(text), {}


def _guess_format(path: str, text: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix in (".loop", ".dsl"):
        return "dsl"
    return "json" if text.lstrip().startswith("{") else "dsl"


def oracle_check(decision: Decision, sys_: LoopSystem, L: int) -> dict:
    """Compare the decision with the one-sided brute-force checks at depth L."""
    no = oracle_no_witness(sys_, L) == DEFINITIVE_NO
    line = oracle_not_salient(sys_, L)
    conflicts = []
    if no and decision.answer == NONTERMINATING_WITNESS_EXISTS:
        conflicts.append("truncated constraint cone is {0} but a witness was reported")
    if line is not None and sys_.d >= 2 and decision.trace and decision.trace[0].outcome != NOT_SALIENT:
        conflicts.append("truncated orbit cone contains a line but the top level was not found non-salient")
    simulated = None
    if decision.witness is not None:
        simulated = orbit_simulate(decision.witness, sys_, L)
        if not simulated:
            conflicts.append("witness orbit leaves the guard within the oracle depth")
    if decision.answer == NO_WITNESS and not no:
        log.info("oracle at depth %d is not definitive for NO_WITNESS", L)
    return {
        "depth": L,
        "no_witness": DEFINITIVE_NO if no else None,
        "not_salient_witness": qvec(line) if line is not None else None,
        "witness_simulated": simulated,
        "agrees": not conflicts,
        "conflicts": conflicts,
    }


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _run_verify(path: str, out: str | None) -> int:
    try:
        report = json.loads(_read(path))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"loopterm: cannot read report: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not isinstance(report, dict):
        print("loopterm: report must be a JSON object", file=sys.stderr)
        return EXIT_ERROR
    problems = verify_report(report)
    _write(out, dumps({"verified": not problems, "decision": report.get("decision"), "problems": problems}))
    if problems:
        for p in problems:
            print(f"loopterm: verify: {p}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_INCONCLUSIVE if report.get("decision") == INCONCLUSIVE else EXIT_DECIDED


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    if args.verify:
        return _run_verify(args.verify, args.output)
    if not args.input:
        print("loopterm: --input is required (or use --verify)", file=sys.stderr)
        return EXIT_ERROR
    t0 = time.perf_counter()
    try:
        text = _read(args.input)
        fmt = args.format or _guess_format(args.input, text)
        sys_, options = load_instance(text, fmt)
        overrides = dict(options)
        if args.max_degree is not None:
            overrides["max_degree"] = args.max_degree
        if args.box is not None:
            overrides["box"] = list(args.box)
        if args.budget_seconds is not None:
            overrides["budget_seconds"] = args.budget_seconds
        cfg = config_from_json(overrides)
        if args.oracle_check is not None and args.oracle_check < 0:
            raise InstanceSyntaxError("--oracle-check needs L >= 0")
    except (OSError, InstanceSyntaxError, LoopSystemError) as exc:
        print(f"loopterm: {exc}", file=sys.stderr)
        return EXIT_ERROR
    t1 = time.perf_counter()
    decision = decide_nontermination(sys_, cfg)
    t2 = time.perf_counter()
    oracle = oracle_check(decision, sys_, args.oracle_check) if args.oracle_check is not None else None
    timings = {"parse_seconds": round(t1 - t0, 6), "decide_seconds": round(t2 - t1, 6)}
    if oracle is not None:
        timings["oracle_seconds"] = round(time.perf_counter() - t2, 6)
    report = build_report(decision, sys_, cfg, timings, oracle)
    _write(args.output, dumps(report))
    if args.emit_certificates:
        Path(args.emit_certificates).write_text(dumps(certificate_bundle(decision)))
    if oracle is not None and not oracle["agrees"]:
        for c in oracle["conflicts"]:
            print(f"loopterm: oracle disagreement: {c}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_INCONCLUSIVE if decision.answer == INCONCLUSIVE else EXIT_DECIDED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
