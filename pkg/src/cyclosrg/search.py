"""Search for prime pairs (p, p1) giving strongly regular Cay(F_q, D).

Stage 1 keeps p1 = 5 (mod 8), p1 > 5 with p1-1 or p1-9 a square (necessary
for strong regularity).  Stage 2 keeps p with ord_p1(p) = (p1-1)/4 whose
order lifts to every p1^m.  Stage 3 first asks whether the M-system has any
solution on an srg ratio line (constant time); pairs with none cannot be
srg because the true Gauss sum is always some solution.  Survivors get the
full enumeration and classification.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd

from sympy import primerange

from .arith import index4_conditions, is_square, mult_order
from .quartic import (InconsistentSystem, QuarticData, Undecided, Verdict, classify_srg,
                      predicted_spectrum, quartic_decomposition, solve_m_system,
                      srg_ratio_candidates, t_profile)
from .srg import SrgParams, params_from_restricted

__all__ = ["mult_order", "index4_check", "order_lift_check", "search_pairs",
           "SearchHit", "SearchReport"]


def index4_check(p: int, p1: int):
    """(ok, diagnostics) for the index-4 hypotheses on (p, p1)."""
    if p == p1:
        raise ValueError("p and p1 must differ")
    diag = index4_conditions(p, p1)
    return all(diag.values()), diag


def order_lift_check(p: int, p1: int) -> bool:
    """True iff p^ord_p1(p) != 1 mod p1^2, so ord_{p1^m}(p) = phi(p1^m)/4 for all m."""
    if gcd(p, p1) != 1:
        return False
    return pow(p, mult_order(p, p1), p1 * p1) != 1


@dataclass(frozen=True)
class SearchHit:
    p: int
    p1: int
    qd: QuarticData
    solutions: tuple
    verdict: Verdict
    predicted: SrgParams        # m = 1
    spectrum: dict              # m = 1, {eigenvalue: class count}

    def to_json(self) -> dict:
        return {"p": self.p, "p1": self.p1, **self.qd.to_json(),
                "solutions": [list(s.M) for s in self.solutions],
                "verdict": self.verdict.to_json(), "predicted": self.predicted.to_json(),
                "predicted_spectrum": {str(k): v for k, v in self.spectrum.items()}}


@dataclass
class SearchReport:
    p_max: int
    p1_max: int
    hits: list = field(default_factory=list)
    undecided: list = field(default_factory=list)     # (p, p1, reason)
    rejected: list = field(default_factory=list)      # (p, p1, stage, reason)
    rejected_p1: list = field(default_factory=list)   # (p1, reason), stage 1
    counters: dict = field(default_factory=dict)
    audit: list = field(default_factory=list)         # (p, p1, n_solutions, status, n_two_valued)

    def sort(self):
        self.hits.sort(key=lambda h: (h.p1, h.p))
        self.undecided.sort()
        self.rejected.sort()
        self.rejected_p1.sort()
        self.audit.sort()
        return self

    def to_json(self) -> dict:
        return {"range": {"p_max": self.p_max, "p1_max": self.p1_max},
                "hits": [h.to_json() for h in self.hits],
                "undecided": [{"p": p, "p1": p1, "reason": r} for p, p1, r in self.undecided],
                "rejected_by_reason": _tally(r[3] for r in self.rejected),
                "counters": dict(self.counters),
                "audit": [{"p": p, "p1": p1, "n_solutions": n, "status": s, "two_valued": t}
                          for p, p1, n, s, t in self.audit]}


def _tally(items):
    out = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return dict(sorted(out.items()))


def stage1_reason(p1: int):
    if p1 % 8 != 5:
        return "p1 != 5 mod 8"
    if p1 <= 5:
        return "p1 <= 5"
    if not (is_square(p1 - 1) or is_square(p1 - 9)):
        return "neither p1-1 nor p1-9 is a square"
    return None


def evaluate_pair(p: int, p1: int, *, guard_bits=64, work_limit=200_000_000, use_numba=None):
    """Stage 3 for one pair: ("hit", SearchHit) | ("undecided", reason) | ("rejected", reason)."""
    qd = quartic_decomposition(p1, p)
    if not srg_ratio_candidates(p, p1, qd):
        return "rejected", "no solution on an srg ratio line"
    try:
        sols = solve_m_system(p, p1, qd, guard_bits=guard_bits, work_limit=work_limit,
                              use_numba=use_numba)
    except Undecided as exc:
        return "undecided", exc.reason
    except InconsistentSystem as exc:
        return "undecided", f"inconsistent system: {exc}"
    verdict = classify_srg(p1, sols)
    if verdict.status == "ambiguous":
        return "undecided", verdict.basis
    if not verdict.is_srg:
        return "rejected", "solutions off the srg ratio lines"
    spectra = [predicted_spectrum(p, p1, 1, s, qd) for s in sols]
    if any(sp != spectra[0] for sp in spectra):
        return "undecided", "solutions predict different spectra"
    q = p ** qd.ftilde
    size = (q - 1) // p1
    predicted = params_from_restricted(q, size, spectra[0], size)
    return "hit", SearchHit(p, p1, qd, tuple(sols), verdict, predicted, spectra[0])


def _audit_pair(p, p1, audit_limit, use_numba):
    """Full enumeration for a pair a cheap filter rejected; None if too large.

    Returns (n_solutions, status, n_two_valued) where the last counts
    solutions whose T-profile takes only two values.
    """
    try:
        qd = quartic_decomposition(p1, p)
        sols = solve_m_system(p, p1, qd, work_limit=audit_limit, use_numba=use_numba)
    except (Undecided, InconsistentSystem):
        return None
    v = classify_srg(p1, sols)
    if v.is_srg:
        raise AssertionError(f"filtered pair {(p, p1)} classifies as srg")
    two = sum(t_profile(s, p1).distinct_count == 2 for s in sols)
    return len(sols), v.status, two


def _search_p1(p1, primes, guard_bits, work_limit, audit, audit_limit, use_numba):
    rep = SearchReport(0, 0)
    c = rep.counters
    for p in primes:
        if p == p1:
            continue
        c["pairs examined"] = c.get("pairs examined", 0) + 1
        ok, diag = index4_check(p, p1)
        if not ok:
            continue          # not an index-4 pair
        c["index-4 pairs"] = c.get("index-4 pairs", 0) + 1
        if not order_lift_check(p, p1):
            rep.rejected.append((p, p1, "stage 2", "order does not lift to p1^2"))
            continue
        c["stage 2 passed"] = c.get("stage 2 passed", 0) + 1
        kind, payload = evaluate_pair(p, p1, guard_bits=guard_bits, work_limit=work_limit,
                                      use_numba=use_numba)
        c["stage 3 " + kind] = c.get("stage 3 " + kind, 0) + 1
        if kind == "hit":
            rep.hits.append(payload)
        elif kind == "undecided":
            rep.undecided.append((p, p1, payload))
        else:
            rep.rejected.append((p, p1, "stage 3", payload))
            if audit:
                res = _audit_pair(p, p1, audit_limit, use_numba)
                if res is not None:
                    rep.audit.append((p, p1) + res)
    return rep


def search_pairs(p_max: int, p1_max: int, *, guard_bits: int = 64, work_limit: int = 200_000_000,
                 workers: int = 1, audit: bool = False, audit_limit: int = 2_000_000,
                 use_numba=None) -> SearchReport:
    """Prime pairs 2 <= p < p_max, 3 <= p1 < p1_max.

    With ``audit`` the full Diophantine enumeration is also run (when it fits
    in ``audit_limit`` lattice points) for pairs the cheap filters rejected,
    including index-4 pairs whose p1 failed the square test, and asserts
    none of them classifies as srg.
    """
    report = SearchReport(p_max, p1_max)
    primes = list(primerange(2, p_max))
    survivors = []
    counters = {"p1 examined": 0, "p1 stage 1 passed": 0}
    for p1 in primerange(3, p1_max):
        counters["p1 examined"] += 1
        reason = stage1_reason(p1)
        if reason is None:
            survivors.append(p1)
        else:
            report.rejected_p1.append((p1, reason))
            if audit and p1 % 8 == 5 and p1 > 5:
                for p in primes:
                    if p != p1 and index4_check(p, p1)[0]:
                        res = _audit_pair(p, p1, audit_limit, use_numba)
                        if res is not None:
                            report.audit.append((p, p1) + res)
    counters["p1 stage 1 passed"] = len(survivors)
    args = (primes, guard_bits, work_limit, audit, audit_limit, use_numba)
    if workers > 1 and len(survivors) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search_p1, survivors, *[[a] * len(survivors) for a in args]))
    else:
        parts = [_search_p1(p1, *args) for p1 in survivors]
    for part in parts:
        report.hits += part.hits
        report.undecided += part.undecided
        report.rejected += part.rejected
        report.audit += part.audit
        for k, v in part.counters.items():
            counters[k] = counters.get(k, 0) + v
    report.counters = dict(sorted(counters.items()))
    return report.sort()


CSV_COLUMNS = ("p", "p1", "ftilde", "b", "A", "B", "n_solutions", "verdict", "r", "s", "status")


def report_rows(report: SearchReport):
    for h in report.hits:
        yield {"p": h.p, "p1": h.p1, "ftilde": h.qd.ftilde, "b": h.qd.b, "A": h.qd.A,
               "B": h.qd.B, "n_solutions": len(h.solutions), "verdict": h.verdict.status,
               "r": h.predicted.r, "s": h.predicted.s, "status": "hit"}
    for p, p1, reason in report.undecided:
        qd = quartic_decomposition(p1, p)
        yield {"p": p, "p1": p1, "ftilde": qd.ftilde, "b": qd.b, "A": qd.A, "B": qd.B,
               "n_solutions": "", "verdict": reason, "r": "", "s": "", "status": "undecided"}
