import argparse
import json
import logging
import os
import sys
from fractions import Fraction

import config
import fixtures
from checks import Report
from errors import AlgebraError, InstanceError
from linearize import LinModel, check_linearization, lemma41_suite, linear_np, thm42_suite
from nlie import NLieAlgebra, action_identity_check, ad_derivation_check, fi_check
from omni import (
    deformation_identity_check, graph_test, nonabelian_compat_check, omni_compat_check,
    omni_leibniz_check, omni_nijenhuis_check, square_check,
)
from polycalc import NambuPoisson, calculus_suite, cor63_suite, nambu_poisson_check, thm62_suite

log = logging.getLogger(__name__)

"""
Command line entry point: reads instance files, runs the suites, prints one
line per suite and writes the JSON report.

    python cli.py check-nlie fixtures/fix_c.json
    python cli.py check-omni fixtures/fix_b.json --exhaustive
    python cli.py check-linearization fixtures/fix_b.json --seed 42
    python cli.py check-calculus --dim 4 --arity 3
    python cli.py all --seed 42

Exit codes: 0 when nothing failed, 1 on any FAIL, 2 on usage or input errors.
"""

COMMANDS = ("check-nlie", "check-omni", "check-nonabelian", "check-nambu",
            "check-linearization", "check-calculus", "all")
DEFAULT_REPORT = "report.json"

# BRIEF SUMMARY OF THE INSTANCE FORMAT
# {"n": 3, "dim": 4, "name": "fix_b", "basis": ["a", "b", "c", "d"],
#  "brackets": [{"args": [1, 2, 3], "value": {"4": "1"}}]}
# args: strictly increasing 1-based indices, value: 1-based index -> rational "p/q"


## Instance files

def _line_of(text, needle, occurrence):
    """1-based line of the occurrence-th appearance of needle, or None"""
    pos = -1
    for _ in range(occurrence + 1):
        pos = text.find(needle, pos + 1)
        if pos < 0:
            return None
    return text.count("\n", 0, pos) + 1


def parse_rational(literal, field, line=None):
    if isinstance(literal, bool) or not isinstance(literal, (int, str)):
        raise InstanceError("E_RATIONAL", f"expected a rational string 'p/q', got {literal!r}", field, line)
    try:
        return Fraction(literal)
    except (ValueError, ZeroDivisionError):
        raise InstanceError("E_RATIONAL", f"bad rational literal {literal!r}", field, line) from None


def _require_int(doc, key, minimum):
    value = doc.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InstanceError("E_SCHEMA", f"'{key}' must be an integer >= {minimum}", key)
    return value


def parse_instance_text(text, name=""):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError("E_JSON", f"invalid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(doc, dict):
        raise InstanceError("E_SCHEMA", "the instance must be a JSON object")

    n = _require_int(doc, "n", 2)
    dim = _require_int(doc, "dim", 1)
    basis = doc.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim
                              or not all(isinstance(b, str) for b in basis)):
        raise InstanceError("E_SCHEMA", f"'basis' must be a list of {dim} names", "basis")
    brackets = doc.get("brackets", [])
    if not isinstance(brackets, list):
        raise InstanceError("E_SCHEMA", "'brackets' must be a list", "brackets")

    constants = {}
    for k, entry in enumerate(brackets):
        line = _line_of(text, '"args"', k)
        field = f"brackets[{k}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("args"), list) \
                or not isinstance(entry.get("value"), dict):
            raise InstanceError("E_SCHEMA", "a bracket needs an 'args' list and a 'value' map", field, line)
        args = entry["args"]
        if len(args) != n or not all(isinstance(a, int) and not isinstance(a, bool) for a in args):
            raise InstanceError("E_SCHEMA", f"'args' must hold {n} integer indices", f"{field}.args", line)
        if not all(1 <= a <= dim for a in args):
            raise InstanceError("E_INDEX", f"indices must lie in 1..{dim}, got {args}", f"{field}.args", line)
        if any(a >= b for a, b in zip(args, args[1:])):
            raise InstanceError("E_ARGS_ORDER", f"'args' must be strictly increasing, got {args}",
                                f"{field}.args", line)
        key = tuple(a - 1 for a in args)
        if key in constants:
            raise InstanceError("E_SCHEMA", f"duplicate bracket {args}", f"{field}.args", line)
        value = {}
        for index, literal in entry["value"].items():
            try:
                i = int(index)
            except ValueError:
                raise InstanceError("E_INDEX", f"bad index {index!r}", f"{field}.value", line) from None
            if not 1 <= i <= dim:
                raise InstanceError("E_INDEX", f"indices must lie in 1..{dim}, got {i}", f"{field}.value", line)
            value[i - 1] = parse_rational(literal, f"{field}.value.{index}", line)
        constants[key] = value
    return NLieAlgebra(n, dim, constants, name=doc.get("name", name), basis=basis)


def parse_instance(path):
    """Read an instance file into a normalized NLieAlgebra"""
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise InstanceError("E_IO", f"cannot read {path}: {e.strerror}", "path") from None
    return parse_instance_text(text, name=os.path.splitext(os.path.basename(path))[0])


## Suites per command

def nlie_suites(g, cfg):
    return [
        fi_check(g, cfg.collect_all, cfg.seed),
        ad_derivation_check(g, cfg.collect_all, cfg.seed),
        action_identity_check(g, cfg.collect_all, cfg.seed),
        graph_test(g, cfg.collect_all, cfg.seed),
    ]


def _fi_gate(g, cfg, suites):
    """SKIP reports for every suite needing the Fundamental Identity when g violates it"""
    if g.fi_report.passed:
        return None
    reason = f"{g.name or 'the instance'} violates the Fundamental Identity"
    return [Report.skip(s, reason, seed=cfg.seed) for s in suites]


def nonabelian_suites(g, cfg):
    names = ("nonabelian.compat", "nonabelian.square", "nonabelian.nijenhuis", "nonabelian.deformation")
    skipped = _fi_gate(g, cfg, names)
    if skipped:
        return skipped
    return [
        nonabelian_compat_check(g, cfg.collect_all, cfg.seed),
        square_check(g, cfg.seed),
        omni_nijenhuis_check(g, cfg.seed),
        deformation_identity_check(g, cfg.collect_all, cfg.seed),
    ]


def omni_core_suites(g, cfg):
    return [
        omni_leibniz_check(g.dim, g.n, cfg.collect_all, cfg.seed),
        omni_compat_check(g.dim, g.n, collect_all=cfg.collect_all, seed=cfg.seed),
    ]


def omni_suites(g, cfg):
    return omni_core_suites(g, cfg) + [graph_test(g, cfg.collect_all, cfg.seed)] + nonabelian_suites(g, cfg)


def nambu_suites(g, cfg):
    names = ("polycalc.nambu_poisson", "polycalc.thm62", "polycalc.cor63")
    skipped = _fi_gate(g, cfg, names)
    if skipped:
        return skipped
    pi = linear_np(g, cfg.max_degree)
    report = nambu_poisson_check(pi, seed=cfg.seed, collect_all=cfg.collect_all)
    if not report.passed:
        reason = f"pi_g is not a Nambu-Poisson structure: {json.dumps(report.witness, sort_keys=True)}"
        return [Report.skip(s, reason, seed=cfg.seed) for s in names]
    cert = NambuPoisson(pi, report)
    samples = cfg.samples if cfg.mode == "random" else config.section_samples
    return [report,
            thm62_suite(cert, samples, cfg.seed, collect_all=cfg.collect_all),
            cor63_suite(cert, samples, cfg.seed, collect_all=cfg.collect_all)]


def linearization_suites(g, cfg):
    skipped = _fi_gate(g, cfg, ("linearize.lemma64", "linearize.thm65"))
    if skipped:
        model = LinModel(g.dim, g.n, max_degree=cfg.max_degree)
        return [lemma41_suite(model, cfg), thm42_suite(model, cfg)] + skipped
    return check_linearization(g, cfg)


def calculus_suites(m, n, cfg):
    return [calculus_suite(m, n, cfg.samples, cfg.seed, max_degree=cfg.max_degree, collect_all=cfg.collect_all)]


def run_instance(command, g, cfg):
    if command == "check-nlie":
        reports = nlie_suites(g, cfg)
    elif command == "check-omni":
        reports = omni_suites(g, cfg)
    elif command == "check-nonabelian":
        reports = nonabelian_suites(g, cfg)
    elif command == "check-nambu":
        reports = nambu_suites(g, cfg)
    elif command == "check-linearization":
        reports = linearization_suites(g, cfg)
    elif command == "check-calculus":
        reports = calculus_suites(g.dim, g.n, cfg)
    elif command == "all":
        reports = (nlie_suites(g, cfg) + omni_core_suites(g, cfg) + nonabelian_suites(g, cfg) + nambu_suites(g, cfg)
                   + linearization_suites(g, cfg) + calculus_suites(g.dim, g.n, cfg))
    else:
        raise ValueError(f"unknown command {command!r}")
    return sorted(reports, key=lambda r: r.suite)


## Output

def report_document(command, cfg, results):
    """results: list of (instance name, reports)"""
    return {
        "schema": config.REPORT_SCHEMA,
        "version": config.TOOL_VERSION,
        "command": command,
        "config": cfg.to_dict(),
        "instances": [{"instance": name, "reports": [r.to_dict() for r in reports]}
                      for name, reports in results],
    }


def strip_timing(doc):
    """Copy of a report document without the timing fields"""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != "timing"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def format_report(report, indent=0):
    pad = "  " * indent
    lines = [f"{pad}[{report.status.value}] {report.suite}: {report.checked} checked, "
             f"{report.violations} violations ({report.elapsed:.2f}s)"]
    for note in report.notes:
        lines.append(f"{pad}    note: {note}")
    if report.failed and indent == 0:
        lines.append(f"{pad}    witness: {json.dumps(report.witness, sort_keys=True, ensure_ascii=False)}")
    for part in report.parts:
        lines.extend(format_report(part, indent + 1))
    return lines


## Entry point

def build_parser():
    parser = argparse.ArgumentParser(
        prog="cli.py", description="Exact checks for n-Lie, omni n-Lie and Nambu-Poisson structures.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("instances", nargs="*", help="instance files (all: defaults to the fixture corpus)")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true",
                      help="exhaustive basis sweeps, also beyond the default size range")
    mode.add_argument("--random", type=int, metavar="N", help="N seeded random samples instead")
    parser.add_argument("--seed", type=int, help=f"random seed (default {config.seed}, or ${config.SEED_ENV})")
    parser.add_argument("--max-degree", type=int, default=config.max_degree, help="polynomial degree cap")
    parser.add_argument("--report", default=DEFAULT_REPORT, help="path of the JSON report")
    parser.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")
    parser.add_argument("--collect-all", action="store_true", help="record every violation, not just the first")
    parser.add_argument("--dim", type=int, help="check-calculus without an instance: dimension m")
    parser.add_argument("--arity", type=int, help="check-calculus without an instance: arity n")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def make_config(args):
    overrides = {"max_degree": args.max_degree, "collect_all": args.collect_all, "full_range": args.exhaustive}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.random is not None:
        overrides.update(mode="random", samples=args.random)
    return config.SuiteConfig.from_env(**overrides)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_intermixed_args(argv)
    logging.basicConfig(level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    try:
        cfg = make_config(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    try:
        if args.command == "check-calculus" and not args.instances:
            if args.dim is None or args.arity is None:
                parser.error("check-calculus needs an instance or both --dim and --arity")
            results = [(f"calculus_{args.dim}_{args.arity}", calculus_suites(args.dim, args.arity, cfg))]
        else:
            if args.instances:
                algebras = [parse_instance(path) for path in args.instances]
            elif args.command == "all":
                algebras = list(fixtures.corpus().values())
            else:
                parser.error(f"{args.command} needs at least one instance file")
            results = []
            for g in algebras:
                log.info("running %s on %s", args.command, g.name)
                results.append((g.name, run_instance(args.command, g, cfg)))
    except AlgebraError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    doc = report_document(args.command, cfg, results)
    with open(args.report, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")

    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for name, reports in results:
            print(f"== {name}")
            for report in reports:
                print("\n".join(format_report(report)))

    failed = any(r.failed for _, reports in results for r in reports)
    print(f"{'FAIL' if failed else 'PASS'} ({sum(len(r) for _, r in results)} suites), report written to {args.report}",
          file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
