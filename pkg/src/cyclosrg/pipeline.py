"""End-to-end verification of one index-4 instance (p, p1, m)."""
from __future__ import annotations

from sympy import totient

from .arith import mult_order
from .config import Budgets
from .cyclotomy import ConnectionSet, is_symmetric, restricted_eigenvalues, trace_histogram
from .field import build_field
from .quartic import (Undecided, classify_srg, eta_values,
                      predicted_spectrum, quartic_decomposition, solve_m_system)
from .srg import brute_force_check, build_cayley, params_from_restricted, spectral_check


def _spectrum_json(spec: dict) -> dict:
    return {str(k): v for k, v in spec.items()}


def verify(p: int, p1: int, m: int, budgets: Budgets | None = None) -> dict:
    """Quartic data, M-solutions, classification, prediction, then direct checks in budget.

    The returned report has ``status`` in {"srg", "not srg", "undecided"}.
    Direct results, when available, override the classification; a
    disagreement between any two routes raises ArithmeticError.
    """
    budgets = Budgets.from_env() if budgets is None else budgets
    if m < 1:
        raise ValueError("m must be >= 1")
    qd = quartic_decomposition(p1, p)       # Index4Error on bad input
    N = p1 ** m
    phi = int(totient(N))
    if mult_order(p, N) != phi // 4:
        raise ValueError(f"ord_{N}({p}) != phi({N})/4; the order does not lift to m={m}")
    f = phi // 4
    q = p ** f
    eta = eta_values(p1, qd.g)
    rep = {"input": {"p": p, "p1": p1, "m": m, "N": N, "f": f, "q": q},
           "quartic": qd.to_json(),
           "eta": {"branch": "".join(eta.branch), "conjugated": eta.conjugated,
                   "max_error": eta.max_error}}

    sols, verdict, predictions = None, None, []
    try:
        sols = solve_m_system(p, p1, qd, guard_bits=budgets.guard_bits, work_limit=budgets.work)
    except Undecided as exc:
        rep["solutions"] = {"undecided": exc.reason}
    if sols is not None:
        verdict = classify_srg(p1, sols)
        predictions = [predicted_spectrum(p, p1, m, s, qd) for s in sols]
        rep["solutions"] = [{**s.to_json(), "predicted_spectrum": _spectrum_json(sp)}
                            for s, sp in zip(sols, predictions)]
        rep["classification"] = verdict.to_json()
        independent = all(sp == predictions[0] for sp in predictions)
        rep["solution_independent"] = independent
        if verdict.is_srg and independent:
            P = params_from_restricted(q, (q - 1) // p1, predictions[0], (q - 1) // N)
            rep["predicted"] = {**P.to_json(), "name": str(P)}

    status = None
    if verdict is not None:
        status = "srg" if verdict.is_srg else ("not srg" if verdict.status == "not srg" else None)

    D = ConnectionSet.index4(p1, m)
    if q <= budgets.enum:
        spec = build_field(p, f, budget=budgets.enum)
        hist = trace_histogram(spec, N, workers=budgets.workers, cache_dir=budgets.cache_dir,
                               budget=budgets.enum)
        if not is_symmetric(spec, D):
            raise ArithmeticError("-1 is not in C_0; D is not symmetric")
        spectrum = restricted_eigenvalues(hist, D)
        direct = spectrum.integer_multiset()
        if direct is None:
            raise ArithmeticError("index-4 restricted eigenvalues must be rational integers")
        d = {"distinct": spectrum.distinct, "spectrum": _spectrum_json(direct),
             "k": len(D) * hist.class_size}
        if predictions:
            d["matching_solutions"] = [list(s.M) for s, sp in zip(sols, predictions) if sp == direct]
            if not d["matching_solutions"]:
                raise ArithmeticError("direct spectrum matches no M-solution")
        P = spectral_check(hist, D)
        d["params"] = None if P is None else {**P.to_json(), "name": str(P)}
        if P is not None:
            d["trace_identity"] = P.k + P.f1 * P.r + P.f2 * P.s == 0
        rep["direct"] = d
        direct_status = "srg" if P is not None else "not srg"
        if status is not None and status != direct_status:
            raise ArithmeticError(f"classification says {status}, direct spectrum says {direct_status}")
        status = direct_status

        if q <= budgets.brute:
            B = brute_force_check(build_cayley(spec, D, budget=budgets.brute))
            rep["brute_force"] = None if B is None else {**B.to_json(), "name": str(B)}
            if (B is None) != (P is None) or (B is not None and B.as_tuple() != P.as_tuple()):
                raise ArithmeticError("brute force disagrees with the spectral check")
        else:
            rep["brute_force"] = {"skipped": f"q={q} > brute budget {budgets.brute}"}
    else:
        rep["direct"] = {"skipped": f"q=p^{f} > enumeration budget {budgets.enum}"}

    rep["status"] = status or "undecided"
    return rep

