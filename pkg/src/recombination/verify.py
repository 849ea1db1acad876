"""Model-level invariant suite.

Every check returns a :class:`Check`; in exact mode all comparisons are
equalities, in float mode they use ``FLOAT_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import arith
from .chain import TransitionMatrix, distribution_series, several_atoms_split
from .measures import ProductMeasure, mixture_of_factorizations, xi_apply
from .partitions import closure, closure_step, finer_eq
from .quasistationary import (
    QuasiStationaryReport,
    analyze,
    qsd_check,
)

FLOAT_TOL = 1e-9


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def _eq(a, b, mode) -> bool:
    if mode == arith.EXACT:
        return a == b
    return abs(float(a) - float(b)) <= FLOAT_TOL


def chain_checks(P: TransitionMatrix) -> List[Check]:
    S, M, mode = P.space, P.matrix, P.mode
    out = []
    one = arith.one(mode)

    bad = [str(S[i]) for i in range(P.size) if not _eq(sum(M[i], arith.zero(mode)), one, mode)]
    out.append(Check("row_sums", not bad, f"rows not summing to 1: {bad}" if bad else ""))

    bad = [(str(S[i]), str(S[j])) for i in range(P.size) for j in range(P.size)
           if M[i, j] != 0 and (j < i or not finer_eq(S[i], S[j]))]
    out.append(Check("upper_triangular_refining", not bad, f"bad arcs: {bad[:5]}" if bad else ""))

    X = closure(P.rho.support, cap=max(P.size, 1))
    bad = [str(s) for s in X if M[S.index[s], S.index[s]] == 0]
    out.append(Check("positive_diagonal_on_closure", not bad, f"zero diagonal at {bad}" if bad else ""))

    out.append(Check("closure_is_fixpoint", closure_step(X, P.rho.support) == X))

    a = S.absorbing
    unit = all(M[a, j] == (one if j == a else 0) for j in range(P.size))
    maximal = all(finer_eq(s, S[a]) for s in S)
    out.append(Check("absorbing_unit_row", unit and maximal))

    bad = []
    for i in range(P.size):
        for j in range(i + 1, P.size):
            if M[i, j] != 0 and not M[i, i] < M[j, j]:
                bad.append((str(S[i]), str(S[j])))
    out.append(Check("diagonal_increases_along_arrows", not bad, f"violations: {bad[:5]}" if bad else ""))
    return out


def iterate_checks(P: TransitionMatrix, m: ProductMeasure, steps: int = 8) -> List[Check]:
    """Iterating the recombination map equals mixing factorizations with the chain law."""
    series = distribution_series(P, steps)
    cur = m
    bad = []
    for k in range(steps + 1):
        mix = mixture_of_factorizations(series[k], m, P.space.states)
        if m.mode == arith.EXACT:
            same = bool(np.all(mix.table == cur.table))
        else:
            same = float(np.max(np.abs(arith.to_float(mix.table) - arith.to_float(cur.table)))) <= 1e-10
        if not same:
            bad.append(k)
        cur = xi_apply(cur, P.rho)
    detail = ""
    if bad:
        detail = f"mismatch at steps {bad}"
        culprit = several_atoms_split(P)
        if culprit is not None:
            detail += f"; the support cuts several atoms of {culprit} independently"
    return [Check("iterate_equals_chain_mixture", not bad, detail)]


def qsd_checks(P: TransitionMatrix, report: Optional[QuasiStationaryReport] = None) -> List[Check]:
    if report is None:
        report = analyze(P)
    if report.degenerate:
        return [Check("quasi_stationary_regime", True, "degenerate model: " + report.notice)]
    mode = P.mode
    out = []
    a = P.space.absorbing
    bad = [str(s) for s in report.F if not _eq(P[s, s] + P.matrix[P.space.position(s), a], 1, mode)]
    out.append(Check("F_holds_or_absorbs", not bad, f"violations at {bad}" if bad else ""))
    out.append(Check("beta0_below_eta", bool(report.beta0 < report.eta)))
    out.append(Check("eta_in_unit_interval", bool(0 < report.eta < 1)))

    T = list(P.space.transient)
    Pstar = P.matrix[np.ix_(T, T)]
    lhs = Pstar @ report.phi
    ok = all(_eq(lhs[k], report.eta * report.phi[k], mode) for k in range(len(T)))
    out.append(Check("phi_right_eigenvector", ok))

    one = arith.one(mode)
    Q = report.Q
    ok = all(_eq(sum(Q[r], arith.zero(mode)), one, mode) for r in range(len(report.boundary)))
    out.append(Check("Q_stochastic", ok))
    pos = {s: k for k, s in enumerate(report.boundary)}
    ok = all(Q[pos[f], pos[f]] == one for f in report.F)
    out.append(Check("F_absorbing_under_Q", ok))

    ql = report.quasi_limiting
    off = [str(T_s) for k, T_s in enumerate(report.transient) if T_s not in report.F and ql[k] != 0]
    out.append(Check("quasi_limiting_normalized_on_F",
                     _eq(sum(ql, arith.zero(mode)), one, mode) and not off))

    out.append(Check("limit_constant_positive", bool(report.limit_constant > 0)))

    failures = []
    for f in report.F:
        nu = arith.zeros(len(T), mode)
        nu[report.transient.index(f)] = one
        res = qsd_check(nu, P, report.F, report.eta, horizon=20)
        if not res.ok:
            failures.extend(res.failures)
    out.append(Check("unit_masses_on_F_are_qsd", not failures, "; ".join(failures)))
    return out


def verify_model(P: TransitionMatrix, m: Optional[ProductMeasure] = None, steps: int = 8) -> List[Check]:
    checks = chain_checks(P)
    if m is not None:
        checks += iterate_checks(P, m, steps)
    checks += qsd_checks(P)
    return checks
