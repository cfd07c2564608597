"""Command-line front end.

    cyclosrg verify 3 13 1
    cyclosrg search 100 100 --format csv

Exit status: 0 success, 2 negative or undecided verdict, 1 error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import gmpy2
import numpy as np

from .config import Budgets, BudgetExceeded
from .cyclotomy import ConnectionSet, gauss_periods, is_symmetric, trace_histogram
from .field import build_field, prime_power
from .fixtures import table_rows
from .quartic import (Index4Error, InconsistentSystem, Undecided, classify_srg,
                      predicted_spectrum, quartic_decomposition, solve_m_system)
from .search import CSV_COLUMNS, report_rows, search_pairs
from .srg import brute_force_check, build_cayley, family_params

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


class UsageError(ValueError):
    pass


def parse_dspec(text: str, N: int) -> tuple:
    """'0,2,5-7' -> (0, 2, 5, 6, 7); 'all' -> every class."""
    if text == "all":
        return tuple(range(N))
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty class list {text!r}")
    return tuple(out)


# ---------------------------------------------------------------------------
# commands; each returns (report, exit code)
# ---------------------------------------------------------------------------

def cmd_field_info(a, budgets):
    spec = build_field(a.p, a.f, budget=budgets.enum)
    return {"p": spec.p, "f": spec.f, "q": spec.q, "modulus": list(spec.modulus),
            "gamma": list(spec.gamma), "gamma_index": spec.primitive.index,
            "trace_vector": spec.trace_vector().tolist()}, EXIT_OK


def cmd_periods(a, budgets):
    spec = build_field(a.p, a.f, budget=budgets.enum)
    hist = trace_histogram(spec, a.N, workers=budgets.workers, cache_dir=budgets.cache_dir,
                           budget=budgets.enum)
    rows = [{"a": i, "trace_counts": hist.counts[i].tolist(), "period": list(t.coeffs)}
            for i, t in enumerate(gauss_periods(hist))]
    return {"p": spec.p, "f": spec.f, "N": a.N, "class_size": hist.class_size,
            "periods": rows}, EXIT_OK


def cmd_verify(a, budgets):
    from .pipeline import verify
    rep = verify(a.p, a.p1, a.m, budgets)
    return rep, EXIT_OK if rep["status"] == "srg" else EXIT_NEGATIVE


def cmd_brute(a, budgets):
    p, f = prime_power(a.q)
    if a.q > budgets.brute:
        raise BudgetExceeded(f"q={a.q} exceeds the brute-force budget {budgets.brute}")
    spec = build_field(p, f)
    D = ConnectionSet(a.N, parse_dspec(a.D, a.N))
    rep = {"q": a.q, "N": a.N, "D": list(D.class_indices), "symmetric": is_symmetric(spec, D)}
    if not rep["symmetric"]:
        rep["srg"] = None
        rep["reason"] = "-D != D, the Cayley graph is directed"
        return rep, EXIT_NEGATIVE
    P = brute_force_check(build_cayley(spec, D, budget=budgets.brute))
    rep["srg"] = None if P is None else {**P.to_json(), "name": str(P)}
    return rep, EXIT_OK if P is not None else EXIT_NEGATIVE


def cmd_solve_m(a, budgets):
    qd = quartic_decomposition(a.p1, a.p)
    rep = {"p": a.p, "p1": a.p1, "quartic": qd.to_json()}
    try:
        sols = solve_m_system(a.p, a.p1, qd, guard_bits=budgets.guard_bits, work_limit=budgets.work)
    except Undecided as exc:
        rep["status"] = "undecided"
        rep["reason"] = exc.reason
        return rep, EXIT_NEGATIVE
    verdict = classify_srg(a.p1, sols)
    rep["solutions"] = [{**s.to_json(),
                         "predicted_spectrum": {str(k): v for k, v in
                                                predicted_spectrum(a.p, a.p1, 1, s, qd).items()}}
                        for s in sols]
    rep["classification"] = verdict.to_json()
    rep["status"] = verdict.status
    return rep, EXIT_OK if verdict.is_srg else EXIT_NEGATIVE


def cmd_search(a, budgets):
    rep = search_pairs(a.p_max, a.p1_max, guard_bits=budgets.guard_bits, work_limit=budgets.work,
                       workers=budgets.workers, audit=a.audit)
    out = rep.to_json()
    out["rows"] = list(report_rows(rep))
    return out, EXIT_OK


def cmd_families(a, budgets):
    pair = tuple(int(x) for x in a.pair.replace("(", "").replace(")", "").split(","))
    P = family_params(pair, a.m)
    # decimal strings: these integers run to millions of digits for m = 5
    rep = {"pair": list(pair), "m": a.m,
           "bits_v": int(gmpy2.mpz(P.v).bit_length()),
           "params": {k: str(gmpy2.mpz(getattr(P, k)))
                      for k in ("v", "k", "lam", "mu", "r", "s", "f1", "f2")}}
    return rep, EXIT_OK


def cmd_table1(a, budgets):
    return {"rows": table_rows()}, EXIT_OK


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _flatten(prefix, x, out):
    if isinstance(x, dict):
        for k in sorted(x):
            _flatten(f"{prefix}.{k}" if prefix else str(k), x[k], out)
    elif isinstance(x, list) and x and all(isinstance(v, dict) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(_jsonable(x)) if isinstance(x, (list, dict)) else x))


def _table(report):
    for key in ("rows", "periods", "solutions"):
        if key in report and isinstance(report[key], list):
            return key
    return None


def render(report, fmt, command) -> str:
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        key = _table(report)
        if command == "search":
            w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
            w.writeheader()
            w.writerows(report["rows"])
        elif key is not None:
            rows = [sorted(_flat(r)) for r in report[key]]
            cols = [k for k, _ in rows[0]] if rows else []
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                w.writerow([v for _, v in r])
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            w.writerows(_flat(report))
        return buf.getvalue()
    for k, v in _flat(report):
        buf.write(f"{k}: {v}\n")
    return buf.getvalue()


def _flat(x):
    out = []
    _flatten("", x, out)
    return out


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-enum", type=int, help="largest field order enumerated")
    common.add_argument("--budget-brute", type=int, help="largest vertex count for brute force")
    common.add_argument("--guard-bits", type=int, help="bit guard on 16 p^(ftilde-2b)")
    common.add_argument("--work", type=int, help="lattice-point limit for the three-squares search")
    common.add_argument("--cache-dir", help="histogram cache directory")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--workers", type=int)

    ap = argparse.ArgumentParser(prog="cyclosrg", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *args, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for arg, typ in args:
            sp.add_argument(arg, type=typ)
        sp.set_defaults(fn=fn)
        return sp

    add("field-info", cmd_field_info, ("p", int), ("f", int), help="modulus, gamma and trace")
    add("periods", cmd_periods, ("p", int), ("f", int), ("N", int), help="exact Gauss periods")
    add("verify", cmd_verify, ("p", int), ("p1", int), ("m", int), help="full index-4 pipeline")
    add("brute", cmd_brute, ("q", int), ("N", int), ("D", str),
        help="adjacency check of Cay(F_q, union of classes), D like 0,2 or 0-3")
    add("solve-m", cmd_solve_m, ("p", int), ("p1", int), help="solve the M-system")
    s = add("search", cmd_search, ("p_max", int), ("p1_max", int), help="prime-pair search")
    s.add_argument("--audit", action="store_true",
                   help="also fully solve pairs the cheap filters rejected, when small")
    add("families", cmd_families, ("pair", str), ("m", int), help="family parameters, pair 7,37 or 3,13")
    add("table1", cmd_table1, help="the eleven sporadic examples")
    return ap


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:          # argparse already printed the message
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        budgets = Budgets.from_env(enum=a.budget_enum, brute=a.budget_brute,
                                   guard_bits=a.guard_bits, work=a.work,
                                   cache_dir=a.cache_dir, workers=a.workers)
        report, code = a.fn(a, budgets)
    except BudgetExceeded as exc:
        print(f"cyclosrg: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (Index4Error, InconsistentSystem, UsageError, ValueError, ArithmeticError) as exc:
        print(f"cyclosrg: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out.write(render(report, a.format, a.command))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
