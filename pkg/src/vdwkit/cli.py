"""Command line interface.

Exit status: 0 success, 1 verification failure or failed inequality,
2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .apcore import CertificateError, verify_certificate
from .bounds import BoundConstants, lower_bounds, upper_bounds
from .probabilistic import SampleParams, lll_resample
from .problems import Certificate, Claim, Family, ProblemSpec, SpecError
from .reference import reference_exact, reference_interval
from .relations import block_residue_check, check_inequalities, failures
from .solvers import BudgetExhausted, SearchBudget, solve, solve_chi, solve_r
from .solvers.search import SOLVER_VERSION
from .store import CacheConflict, CacheRecord, Store, now_stamp, read_certificates
from .table import FORMATS, FUNCTIONS, ROW_ORDER, TableData

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

FAMILY_NAMES = {
    "w": Family.W_MIXED,
    "wdiag": Family.W_DIAGONAL,
    "w1": Family.W1,
    "g": Family.G,
    "m": Family.M,
    "wstar": Family.W_STAR,
    "r": Family.R,
    "chi": Family.CHI,
    "mcol": Family.BLOCK_COLORING,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _s_range(text: str):
    for sep in ("..", "-", ":"):
        if sep in text:
            a, b = text.split(sep, 1)
            return range(int(a), int(b) + 1)
    return range(int(text), int(text) + 1)


def _budget_args(p):
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--time-limit", type=float, help="seconds")
    p.add_argument("--threads", type=int, default=1)


def _common(p):
    p.add_argument("--store", type=Path, help="store directory (default: $VDWKIT_STORE or ~/.vdwkit)")
    p.add_argument("--deterministic", action="store_true", help="omit timestamps and timings")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vdwkit", description="van der Waerden-type numbers: search, verification, bounds")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("compute", help="compute a value exactly")
    p.add_argument("family", help="one of: " + ", ".join(FAMILY_NAMES))
    p.add_argument("--lengths", type=_int_list, help="k_1,...,k_s for w")
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int, help="interval size for r")
    p.add_argument("--m", type=int, help="interval size for chi")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--json", action="store_true", help="print a JSON record")
    _budget_args(p)
    _common(p)

    p = sub.add_parser("verify", help="re-verify a certificate file")
    p.add_argument("file", type=Path)
    _common(p)

    p = sub.add_parser("table", help="print the grid of small values")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--s-max", type=int, default=16)
    p.add_argument("--functions", default=",".join(ROW_ORDER))
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--source", choices=("cache", "reference"), default="cache")
    p.add_argument("--compute", action="store_true", help="solve missing cells under the budget")
    _budget_args(p)
    _common(p)

    p = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    p.add_argument("--k", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--s", type=int)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--format", choices=("table", "json"), default="table")
    _common(p)

    p = sub.add_parser("relations", help="check the inequalities on known values")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--s-range", type=_s_range, default=range(2, 17))
    p.add_argument("--source", choices=("reference", "cache", "merged"), default="reference")
    p.add_argument("--block-check", action="store_true",
                   help="also compare the residue criterion for 3-APs with brute force")
    p.add_argument("--format", choices=("table", "json"), default="table")
    _common(p)

    p = sub.add_parser("lll", help="random coloring plus resampling")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int, default=100000)
    p.add_argument("--p-red", type=float)
    _common(p)
    return parser


def _budget(a) -> SearchBudget:
    return SearchBudget(a.max_n, a.max_nodes, a.time_limit, a.threads)


def _spec_from_args(a) -> ProblemSpec:
    fam = FAMILY_NAMES.get(a.family.lower())
    if fam is None:
        raise UsageError(f"unknown family {a.family!r}; expected one of {', '.join(FAMILY_NAMES)}")
    try:
        if fam is Family.W_MIXED:
            if a.lengths:
                return ProblemSpec.mixed(*a.lengths)
            if a.k is None or a.s is None:
                raise UsageError("w needs --lengths or --k and --s")
            return ProblemSpec.mixed(a.k, a.s)
        if fam is Family.BLOCK_COLORING:
            if a.s is None:
                raise UsageError("mcol needs --s")
            return ProblemSpec(fam, (a.s,))
        if fam is Family.R:
            if a.k is None or a.n is None:
                raise UsageError("r needs --k and --n")
            return ProblemSpec(fam, (a.k, a.n))
        if fam is Family.CHI:
            if a.k is None or a.m is None:
                raise UsageError("chi needs --k and --m")
            return ProblemSpec(fam, (a.k, a.m))
        if a.k is None or a.s is None:
            raise UsageError(f"{a.family} needs --k and --s")
        return ProblemSpec(fam, (a.k, a.s))
    except SpecError as e:
        raise UsageError(str(e))


def _stamp(cert: Certificate, a) -> Certificate:
    if a.deterministic:
        return cert
    return Certificate(cert.spec, cert.n, cert.claim, cert.witness, cert.attestation, now_stamp())


def compute_value(spec: ProblemSpec, budget: SearchBudget, store: Optional[Store], a, err):
    """Solve spec, record the outcome, return (Interval-like text, exit code, record dict)."""
    try:
        if spec.family is Family.R:
            k, n = spec.params
            size, w = solve_r(k, n, budget)
            good = Certificate(spec, size, Claim.GOOD_WITNESS, w)
            att = {"solver": SOLVER_VERSION, "claim": f"no {k}-AP-free subset of [1,{n}] has {size + 1} elements"}
            value, elapsed, nodes = size, None, None
        elif spec.family is Family.CHI:
            k, m = spec.params
            colors, w = solve_chi(k, m, budget)
            good = Certificate(spec, colors, Claim.GOOD_WITNESS, w)
            att = {"solver": SOLVER_VERSION, "claim": f"every {colors - 1}-coloring of [1,{m}] has a monochromatic {k}-AP"}
            value, elapsed, nodes = colors, None, None
        else:
            cv = solve(spec, budget)
            good, value, elapsed, nodes = cv.witness, cv.value, cv.elapsed_seconds, cv.nodes_explored
            att = dict(cv.extremal.attestation)
    except BudgetExhausted as e:
        print(f"{spec}: {e.reason}; value >= {e.lower}", file=err)
        if store is not None and e.lower >= 1 and e.witness is not None:
            store.put(CacheRecord(spec, e.lower, exact=False, solver_version=SOLVER_VERSION),
                      [_stamp(e.witness, a)])
        return f"≥{e.lower}", EXIT_BUDGET, {"spec": spec.key(), "lower": e.lower}

    if spec.family in (Family.R, Family.CHI):
        extremal = Certificate(spec, value + (1 if spec.family is Family.R else -1), Claim.EXTREMAL_ATTESTED,
                               attestation=att)
    else:
        extremal = Certificate(spec, value, Claim.EXTREMAL_ATTESTED, attestation=att)
    certs = [_stamp(c, a) for c in (good, extremal) if c is not None]
    rec = {"spec": spec.key(), "value": value}
    if not a.deterministic:
        if elapsed is not None:
            rec["elapsed_seconds"] = round(elapsed, 3)
    if nodes is not None:
        rec["nodes"] = nodes
    if store is not None:
        store.put(CacheRecord(spec, value, True, None, None if a.deterministic else elapsed, SOLVER_VERSION), certs)
    return str(value), EXIT_OK, rec


def cmd_compute(a, out, err) -> int:
    spec = _spec_from_args(a)
    store = None if a.no_cache else Store(a.store)
    if store is not None:
        rec = store.get(spec)
        if rec is not None and rec.exact and store.verified(rec):
            print(json.dumps({"spec": spec.key(), "value": rec.value, "cached": True}) if a.json else rec.value, file=out)
            return EXIT_OK
    text, code, rec = compute_value(spec, _budget(a), store, a, err)
    print(json.dumps(rec, ensure_ascii=False) if a.json else text, file=out)
    return code


def cmd_verify(a, out, err) -> int:
    if not a.file.exists():
        raise UsageError(f"no such file: {a.file}")
    try:
        certs = read_certificates(a.file)
    except CertificateError as e:
        print(f"MALFORMED {e}", file=out)
        return EXIT_FAIL
    code = EXIT_OK
    for c in certs:
        if c.claim is Claim.EXTREMAL_ATTESTED:
            print(f"ATTESTED {c.spec} n={c.n} (solver claim, not re-verifiable: {c.attestation})", file=out)
            continue
        try:
            v = verify_certificate(c)
        except CertificateError as e:
            print(f"MALFORMED {c.spec} n={c.n}: {e}", file=out)
            code = EXIT_FAIL
            continue
        if v.clean:
            print(f"CLEAN {c.spec} n={c.n}", file=out)
        else:
            print(f"VIOLATION {c.spec} n={c.n}: {v.violation.describe()}", file=out)
            code = EXIT_FAIL
    return code


def cmd_table(a, out, err) -> int:
    functions = [f.strip() for f in a.functions.split(",") if f.strip()]
    bad = [f for f in functions if f not in FUNCTIONS]
    if bad:
        raise UsageError(f"unknown function(s) {bad}; expected a subset of {list(ROW_ORDER)}")
    if a.s_max < 2:
        raise UsageError("--s-max must be at least 2")
    code = EXIT_OK
    if a.source == "reference":
        data = TableData.build(functions, a.k, a.s_max, reference_interval)
    else:
        store = Store(a.store)

        def cell(spec):
            nonlocal code
            got = store.lookup(spec)
            if got is None and a.compute and store.get(spec) is None:
                _, c, _ = compute_value(spec, _budget(a), store, a, err)
                if c == EXIT_BUDGET:
                    code = EXIT_BUDGET
                got = store.lookup(spec)
            return got

        data = TableData.build(functions, a.k, a.s_max, cell)
    out.write(data.render(a.format))
    return code


def cmd_bounds(a, out, err) -> int:
    consts = BoundConstants(a.c, a.d)
    param = a.m if a.m is not None else a.s
    if a.k < 2 or param < 2:
        raise UsageError("bounds need --k >= 2 and --m/--s >= 2")
    lo = lower_bounds(a.k, param, consts, reference_exact)
    hi = upper_bounds(a.k, consts, reference_exact)
    entries = lo.entries + hi.entries
    bad = [e for e in entries if e.anchor is not None and e.anchor.consistent is False]
    if a.format == "json":
        doc = [{
            "name": e.name, "kind": e.kind.value, "target": e.target.key(), "formula": e.formula,
            "value": str(e.value), "level": e.value.level, "x": e.value.x, "applicable": e.applicable,
            "constant_dependent": e.constant_dependent,
            "anchor": None if e.anchor is None else {"exact": e.anchor.exact, "consistent": e.anchor.consistent},
            "note": e.note} for e in entries]
        out.write(json.dumps({"entries": doc, "imported": list(lo.notes)}, indent=2) + "\n")
    else:
        for e in entries:
            if e.anchor is None:
                anchor = "no exact value"
            elif e.anchor.consistent is None:
                anchor = f"exact {e.anchor.exact}: comparison suppressed"
            else:
                anchor = f"exact {e.anchor.exact}: {'consistent' if e.anchor.consistent else 'INCONSISTENT'}"
            flags = ("" if e.applicable else " [not applicable]") + (" [constant-dependent]" if e.constant_dependent else "")
            out.write(f"{e.kind.value:<5} {e.name:<15} {str(e.target):<10} {str(e.value):<22} {anchor}{flags}\n")
            out.write(f"      {e.formula}{'  (' + e.note + ')' if e.note else ''}\n")
        out.write("imported results (not evaluated):\n")
        for f in lo.notes:
            out.write(f"  {f}\n")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_relations(a, out, err) -> int:
    if a.source == "reference":
        lookup = reference_interval
    else:
        store = Store(a.store)
        lookup = store.lookup if a.source == "cache" else store.merged_lookup
    checks = check_inequalities(a.k, a.s_range, lookup)
    failed = failures(checks)
    block_bad = []
    if a.block_check:
        for s in a.s_range:
            if s >= 2:
                ok, cex = block_residue_check(s, 6)
                if not ok:
                    block_bad.append((s, cex))
    if a.format == "json":
        doc = [{"name": c.name, "k": c.k, "s": c.s, "status": c.status.value, "informational": c.informational,
                "terms": [[lab, None if iv is None else str(iv)] for lab, iv in c.terms]} for c in checks]
        out.write(json.dumps({"checks": doc, "failures": len(failed)}, indent=2) + "\n")
    else:
        for c in checks:
            out.write(c.render() + "\n")
        counts = {st: sum(1 for c in checks if not c.informational and c.status.value == st)
                  for st in ("HOLDS", "FAILS", "UNKNOWN")}
        out.write(f"holds={counts['HOLDS']} fails={counts['FAILS']} unknown={counts['UNKNOWN']}\n")
        if a.block_check:
            out.write("residue criterion: " + ("agrees" if not block_bad else f"DISAGREES {block_bad}") + "\n")
    return EXIT_FAIL if failed or block_bad else EXIT_OK


def cmd_lll(a, out, err) -> int:
    try:
        params = SampleParams(a.k, a.m, a.seed, a.p_red)
    except ValueError as e:
        raise UsageError(str(e))
    if a.n < 1 or a.max_rounds < 1:
        raise UsageError("--n and --max-rounds must be positive")
    rep = lll_resample(params, a.n, a.max_rounds)
    if rep.success:
        out.write(f"success rounds={rep.rounds}\n{rep.final_coloring.to_string()}\n")
        return EXIT_OK
    out.write(f"failure rounds={rep.rounds} violations={rep.violations_history[-1]}\n")
    return EXIT_BUDGET


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "table": cmd_table,
    "bounds": cmd_bounds,
    "relations": cmd_relations,
    "lll": cmd_lll,
}


def run_command(argv: List[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError(parser.format_usage().rstrip() + "\nvdwkit: error: missing subcommand")
        if getattr(a, "threads", 1) is not None and getattr(a, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        return COMMANDS[a.command](a, out, err)
    except UsageError as e:
        print(str(e), file=err)
        return EXIT_USAGE
    except CacheConflict as e:
        print(f"cache conflict: {e}", file=err)
        return EXIT_FAIL
    except ValueError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
