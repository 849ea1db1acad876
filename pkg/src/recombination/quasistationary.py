"""Quasi-stationary analysis of the partition chain.

Let ``D`` be the absorbing state and ``ζ`` the absorption time.  The
states with a direct arrow into ``D`` form ``Δ``; ``η`` is their largest
holding probability and ``F`` the states attaining it.  Survival decays
like ``η**n``.  Conditioned on survival, the chain concentrates on ``F``.
The weights ``φ_δ = E_δ(η**-ζ_F ; ζ_F < ∞)`` give both the limit constant
and the Q-process (the chain conditioned never to be absorbed).

Because the transition matrix is triangular, every quantity here is a
finite back-substitution and is exact in rational mode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import arith
from .chain import (
    TransitionMatrix,
    can_reach,
    distribution_series,
    evolve,
    hitting_vector,
    survival,
    unit_vector,
)
from .partitions import Partition

FLOAT_TIE_TOL = 1e-12
FLOAT_IDENTITY_TOL = 1e-9


class DegenerateModelError(ValueError):
    """The model has no quasi-stationary regime (``rho_I = 1`` or ``η = 0``)."""

    def __init__(self, message: str, absorption_bound: Optional[int] = None):
        super().__init__(message)
        self.absorption_bound = absorption_bound


class ConsistencyError(AssertionError):
    """An identity that must hold exactly was violated; indicates a library bug."""


def _equal(a, b, mode: str, tol: float = FLOAT_IDENTITY_TOL) -> bool:
    if mode == arith.EXACT:
        return a == b
    return abs(float(a) - float(b)) <= tol


def _indices(P: TransitionMatrix, states) -> list:
    return sorted(P.space.positions(states))


def _states(P: TransitionMatrix, idx) -> tuple:
    return tuple(P.space[i] for i in sorted(idx))


def delta_set(P: TransitionMatrix) -> tuple:
    """States other than the absorbing one with a direct arrow into it."""
    a = P.space.absorbing
    if a == P.space.start:
        raise DegenerateModelError("rho puts all its mass on the coarsest partition; the chain never moves",
                                   absorption_bound=0)
    return tuple(P.space[i] for i in P.space.transient if P.matrix[i, a] != 0)


def eta_and_F(P: TransitionMatrix, delta=None):
    """``(η, F)``: the largest holding probability on ``Δ`` and every state attaining it."""
    if delta is None:
        delta = delta_set(P)
    idx = _indices(P, delta)
    if not idx:
        raise ValueError("Δ is empty")
    diag = {i: P.matrix[i, i] for i in idx}
    eta = max(diag.values())
    if eta == 0:
        raise DegenerateModelError(
            "every state of Δ has zero holding probability (η = 0); absorption happens "
            f"within {P.size} steps", absorption_bound=P.size)
    if P.mode == arith.EXACT:
        F = [i for i in idx if diag[i] == eta]
    else:
        F = [i for i in idx if abs(diag[i] - eta) <= FLOAT_TIE_TOL]
    a = P.space.absorbing
    for i in F:
        if not _equal(P.matrix[i, i] + P.matrix[i, a], 1, P.mode):
            raise ConsistencyError(f"holding + absorption probability at {P.space[i]} is not 1")
    return eta, _states(P, F)


def beta0(P: TransitionMatrix, F):
    """Largest holding probability over transient states outside ``F`` (0 if none)."""
    f = P.space.positions(F)
    rest = [P.matrix[i, i] for i in P.space.transient if i not in f]
    return max(rest) if rest else arith.zero(P.mode)


def phi_vector(P: TransitionMatrix, F, eta) -> np.ndarray:
    """Right eigenvector of the transient block for eigenvalue ``η``.

    Entry ``k`` belongs to the ``k``-th transient state (``P.space.transient``)
    and equals ``E_δ(η**-ζ_F ; ζ_F < ∞)``.
    """
    if eta <= 0:
        raise DegenerateModelError("φ needs η > 0")
    one = arith.one(P.mode)
    g = hitting_vector(P, F, one / eta)
    T = list(P.space.transient)
    phi = g[T]
    Pstar = P.matrix[np.ix_(T, T)]
    lhs = Pstar @ phi
    for k in range(len(T)):
        if not _equal(lhs[k], eta * phi[k], P.mode):
            raise ConsistencyError(f"P*φ ≠ ηφ at {P.space[T[k]]}")
    return phi


def _phi_at(P: TransitionMatrix, phi, state) -> object:
    i = P.space.position(state)
    if i == P.space.absorbing:
        raise ValueError("φ is not defined at the absorbing state")
    return phi[P.space.transient.index(i)]


def limit_constant(P: TransitionMatrix, F, eta, phi=None):
    """``lim η**-n P(ζ > n) = E(η**-ζ_F ; ζ_F < ∞)`` from the coarsest start."""
    if phi is None:
        phi = phi_vector(P, F, eta)
    return _phi_at(P, phi, P.space.start)


def quasi_limiting(P: TransitionMatrix, F, eta, phi=None) -> np.ndarray:
    """Limit law of ``Y_n`` given ``ζ > n``, over the transient states."""
    L = limit_constant(P, F, eta, phi)
    T = list(P.space.transient)
    one = arith.one(P.mode)
    out = arith.zeros(len(T), P.mode)
    for i in _indices(P, F):
        out[T.index(i)] = hitting_vector(P, [i], one / eta)[P.space.start] / L
    return out


def ratio_limit(P: TransitionMatrix, F, eta, start, phi=None):
    """``lim P_start(ζ > n) / P(ζ > n) = φ_start / φ_coarsest``."""
    if phi is None:
        phi = phi_vector(P, F, eta)
    return _phi_at(P, phi, start) / _phi_at(P, phi, P.space.start)


def boundary(P: TransitionMatrix, F) -> tuple:
    """Transient states from which ``F`` is reachable."""
    reach = can_reach(P, F)
    return tuple(P.space[i] for i in P.space.transient if reach[i])


def q_matrix(P: TransitionMatrix, F, eta, phi):
    """Transition matrix of the Q-process on :func:`boundary` states.

    ``Q[δ, δ'] = P[δ, δ'] φ_δ' / (η φ_δ)``.  Returns ``(states, Q)``.
    """
    states = boundary(P, F)
    idx = [P.space.position(s) for s in states]
    vals = [_phi_at(P, phi, i) for i in idx]
    Q = arith.zeros((len(idx), len(idx)), P.mode)
    for r, i in enumerate(idx):
        for c, j in enumerate(idx):
            if P.matrix[i, j] != 0:
                Q[r, c] = P.matrix[i, j] * vals[c] / (eta * vals[r])
    return states, Q


# --- finite-n conditioned quantities (exact evolution) ------------------------------

def conditioned_distribution(P: TransitionMatrix, n: int, start=None) -> np.ndarray:
    """Law of ``Y_n`` given ``ζ > n``, over the transient states."""
    series = distribution_series(P, n, start)
    b = series[-1]
    alive = arith.one(P.mode) - b[P.space.absorbing]
    if alive == 0:
        raise ZeroDivisionError(f"the chain is absorbed by time {n} with probability 1")
    return b[list(P.space.transient)] / alive


def path_probability(P: TransitionMatrix, path: Sequence, start=None):
    """``P_start(Y_1 = path[0], ..., Y_j = path[-1])``."""
    cur = P.space.start if start is None else P.space.position(start)
    prob = arith.one(P.mode)
    for s in path:
        nxt = P.space.position(s)
        prob = prob * P.matrix[cur, nxt]
        cur = nxt
    return prob


def conditioned_path_probability(P: TransitionMatrix, path: Sequence, n: int, start=None):
    """``P_start(Y_1..Y_j = path | ζ > n)`` for ``n >= j``, by exact evolution."""
    j = len(path)
    if n < j:
        raise ValueError("need n >= path length")
    denom = survival(P, n, start)
    if not path:
        return arith.one(P.mode)
    return path_probability(P, path, start) * survival(P, n - j, path[-1]) / denom


def q_path_probability(states: Sequence[Partition], Q: np.ndarray, path: Sequence, start) -> object:
    """Product of Q-process transition probabilities along ``start, *path``."""
    pos = {s: k for k, s in enumerate(states)}
    cur = pos[start]
    prob = Q.dtype.type(1) if Q.dtype != object else Fraction(1)
    for s in path:
        if s not in pos:
            return prob * 0
        nxt = pos[s]
        prob = prob * Q[cur, nxt]
        cur = nxt
    return prob


# --- quasi-stationary distributions --------------------------------------------------

@dataclass
class QSDCheck:
    supported_on_F: bool
    left_eigen: Optional[bool] = None
    conditional_invariance: Optional[bool] = None
    indicator_eigenvectors: Optional[bool] = None
    indicator_full_right_eigen: Optional[bool] = None
    horizon: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.supported_on_F and not self.failures

    def __bool__(self) -> bool:
        return self.ok


def qsd_check(nu, P: TransitionMatrix, F, eta, horizon: int = 50,
              max_subsets: int = 1024) -> QSDCheck:
    """Is ``nu`` (over the transient states) a quasi-stationary distribution?

    Returns a falsy :class:`QSDCheck` when ``nu`` puts mass off ``F``.
    Otherwise checks ``nu P* = η nu``, the invariance
    ``P_nu(Y_n = δ | ζ > n) = nu_δ`` for ``1 <= n <= horizon`` and that
    indicators of nonempty subsets of ``F`` are right eigenvectors of the
    ``F`` block of ``P*``.
    """
    mode = P.mode
    T = list(P.space.transient)
    nu = arith.array(list(nu), mode) if mode == arith.EXACT else np.asarray(nu, dtype=float)
    if len(nu) != len(T):
        raise ValueError(f"nu has {len(nu)} entries for {len(T)} transient states")
    if any(x < 0 for x in nu) or not arith.is_unit_sum(nu.sum(), mode, tol=1e-9):
        raise ValueError("nu is not a probability vector")
    f = P.space.positions(F)
    supported = all(nu[k] == 0 for k, i in enumerate(T) if i not in f)
    report = QSDCheck(supported_on_F=supported, horizon=horizon)
    if not supported:
        return report

    Pstar = P.matrix[np.ix_(T, T)]
    left = nu @ Pstar
    report.left_eigen = all(_equal(left[k], eta * nu[k], mode) for k in range(len(T)))
    if not report.left_eigen:
        report.failures.append("nu P* != eta nu")

    full = arith.zeros(P.size, mode)
    full[T] = nu
    a = P.space.absorbing
    report.conditional_invariance = True
    it = evolve(P, full)
    next(it)
    for n in range(1, horizon + 1):
        b = next(it)
        alive = arith.one(mode) - b[a]
        cond = b[T] / alive
        if not all(_equal(cond[k], nu[k], mode) for k in range(len(T))):
            report.conditional_invariance = False
            report.failures.append(f"conditioned law differs from nu at n={n}")
            break

    # Indicators of subsets of F satisfy the eigen-equation on the rows of F
    # (the F block of P* is η times the identity).  On other rows the equation
    # fails whenever some state outside F leads into the subset, so the
    # full-vector form is recorded but not required.
    report.indicator_eigenvectors = True
    report.indicator_full_right_eigen = True
    fk = [T.index(i) for i in sorted(f)]
    subsets = itertools.chain.from_iterable(
        itertools.combinations(fk, r) for r in range(1, len(fk) + 1))
    for sub in itertools.islice(subsets, max_subsets):
        ind = arith.zeros(len(T), mode)
        ind[list(sub)] = arith.one(mode)
        right = Pstar @ ind
        if not all(_equal(right[k], eta * ind[k], mode) for k in fk):
            report.indicator_eigenvectors = False
            report.failures.append(f"indicator of {[str(P.space[T[k]]) for k in sub]} "
                                   "fails the eigen-equation on F")
            break
        if not all(_equal(right[k], eta * ind[k], mode) for k in range(len(T))):
            report.indicator_full_right_eigen = False
    return report


# --- full report -------------------------------------------------------------------

@dataclass
class QuasiStationaryReport:
    degenerate: bool
    transient: tuple
    delta: tuple = ()
    eta: object = None
    F: tuple = ()
    beta0: object = None
    theta: object = None
    phi: Optional[np.ndarray] = None
    boundary: tuple = ()
    Q: Optional[np.ndarray] = None
    quasi_limiting: Optional[np.ndarray] = None
    limit_constant: object = None
    absorption_bound: Optional[int] = None
    notice: str = ""

    def phi_of(self, state):
        return self.phi[self.transient.index(state)]

    def rate_bound(self):
        """``(β₀ + θ) / η``: the geometric rate of the approach to the limits."""
        return (self.beta0 + self.theta) / self.eta


def analyze(P: TransitionMatrix) -> QuasiStationaryReport:
    """Compute every quasi-stationary quantity, or a degenerate report."""
    transient = tuple(P.space[i] for i in P.space.transient)
    try:
        delta = delta_set(P)
        eta, F = eta_and_F(P, delta)
    except DegenerateModelError as exc:
        return QuasiStationaryReport(
            degenerate=True, transient=transient,
            delta=() if P.space.absorbing == P.space.start else delta_set(P),
            absorption_bound=exc.absorption_bound, notice=str(exc))
    b0 = beta0(P, F)
    if not b0 < eta:
        raise ConsistencyError(f"β₀ = {b0} is not below η = {eta}")
    phi = phi_vector(P, F, eta)
    states, Q = q_matrix(P, F, eta, phi)
    one = arith.one(P.mode)
    for r in range(len(states)):
        if not _equal(sum(Q[r], arith.zero(P.mode)), one, P.mode):
            raise ConsistencyError(f"Q row {states[r]} does not sum to 1")
    return QuasiStationaryReport(
        degenerate=False,
        transient=transient,
        delta=delta,
        eta=eta,
        F=F,
        beta0=b0,
        theta=(eta - b0) / 2,
        phi=phi,
        boundary=states,
        Q=Q,
        quasi_limiting=quasi_limiting(P, F, eta, phi),
        limit_constant=limit_constant(P, F, eta, phi),
    )
