import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

from recombination.chain import PartitionWeights, build_chain, survival, survival_series
from recombination.models import random_nondegenerate, random_weights
from recombination.partitions import coarsest, finest, parse_partition
from recombination.quasistationary import (
    DegenerateModelError,
    analyze,
    beta0,
    boundary,
    conditioned_distribution,
    conditioned_path_probability,
    delta_set,
    eta_and_F,
    limit_constant,
    phi_vector,
    q_matrix,
    q_path_probability,
    qsd_check,
    quasi_limiting,
    ratio_limit,
)

from conftest import COARSE3, FINE3, SPLIT_A, SPLIT_B


def by_state(P, vec):
    return {str(s): v for s, v in zip((P.space[i] for i in P.space.transient), vec)}


# --- Δ, η, F, β₀ ----------------------------------------------------------------------------

def test_delta_examples(three, dyadic):
    assert set(delta_set(three)) == {SPLIT_A, SPLIT_B}
    assert delta_set(dyadic) == (coarsest(2),)


def test_finest_only_model_is_degenerate():
    P = build_chain(PartitionWeights({finest(2): 1}))
    assert delta_set(P) == (coarsest(2),)
    assert P[coarsest(2), coarsest(2)] == 0
    with pytest.raises(DegenerateModelError) as info:
        eta_and_F(P)
    assert info.value.absorption_bound == 2
    r = analyze(P)
    assert r.degenerate and r.eta is None and r.absorption_bound == 2


def test_identity_model_is_degenerate():
    P = build_chain(PartitionWeights({coarsest(3): 1}))
    with pytest.raises(DegenerateModelError):
        delta_set(P)
    assert analyze(P).degenerate


def test_eta_and_F_examples(three, sym, dyadic):
    assert eta_and_F(three) == (F(7, 10), (SPLIT_A,))
    eta, Fs = eta_and_F(sym)
    assert eta == F(3, 5) and set(Fs) == {SPLIT_A, SPLIT_B}
    assert eta_and_F(dyadic) == (F(1, 2), (coarsest(2),))


def test_beta0_examples(three, sym, dyadic):
    assert beta0(three, [SPLIT_A]) == F(1, 2)
    assert beta0(dyadic, [coarsest(2)]) == 0
    assert beta0(sym, [SPLIT_A, SPLIT_B]) == F(1, 5)


# --- φ and the limits --------------------------------------------------------------------

def test_phi_three_site(three):
    phi = phi_vector(three, [SPLIT_A], F(7, 10))
    assert by_state(three, phi) == {"{1,2,3}": 1, "{1}{2,3}": 1, "{1,2}{3}": 0}
    T = list(three.space.transient)
    Pstar = three.matrix[np.ix_(T, T)]
    assert by_state(three, Pstar @ phi)["{1,2,3}"] == F(7, 10)


def test_limit_constants(three, sym, dyadic):
    assert limit_constant(three, [SPLIT_A], F(7, 10)) == 1
    assert limit_constant(dyadic, [coarsest(2)], F(1, 2)) == 1
    eta, Fs = eta_and_F(sym)
    L = limit_constant(sym, Fs, eta)
    assert L == 2
    n = 200
    assert float(eta ** -n * survival(sym, n)) == pytest.approx(float(L), abs=1e-8)


def test_quasi_limiting_examples(three, sym):
    assert by_state(three, quasi_limiting(three, [SPLIT_A], F(7, 10))) == {"{1,2,3}": 0, "{1}{2,3}": 1, "{1,2}{3}": 0}
    eta, Fs = eta_and_F(sym)
    assert by_state(sym, quasi_limiting(sym, Fs, eta)) == {"{1,2,3}": 0, "{1}{2,3}": F(1, 2), "{1,2}{3}": F(1, 2)}


def test_quasi_limiting_matches_conditioned_law(three):
    cond = conditioned_distribution(three, 200)
    assert float(by_state(three, cond)["{1}{2,3}"]) == pytest.approx(1, abs=1e-8)


def test_ratio_limits(three):
    eta, Fs = F(7, 10), [SPLIT_A]
    assert ratio_limit(three, Fs, eta, COARSE3) == 1
    assert ratio_limit(three, Fs, eta, SPLIT_B) == 0
    assert ratio_limit(three, Fs, eta, SPLIT_A) == 1
    n = 200
    finite = survival(three, n, start=SPLIT_A) / survival(three, n)
    assert float(finite) == pytest.approx(1, abs=1e-8)
    assert float(survival(three, n, start=SPLIT_B) / survival(three, n)) < 1e-8


def test_ratio_limit_positive_exactly_when_F_reachable():
    for rho in [random_nondegenerate(random.Random(s), max_sites=5) for s in range(20)]:
        P = build_chain(rho)
        eta, Fs = eta_and_F(P)
        reach = set(boundary(P, Fs))
        for i in P.space.transient:
            r = ratio_limit(P, Fs, eta, i)
            assert (r > 0) == (P.space[i] in reach)


# --- Q-process -------------------------------------------------------------------------------

def test_q_matrix_three_site(three):
    eta, Fs = F(7, 10), [SPLIT_A]
    states, Q = q_matrix(three, Fs, eta, phi_vector(three, Fs, eta))
    assert states == (COARSE3, SPLIT_A)
    assert Q.tolist() == [[F(2, 7), F(5, 7)], [0, 1]]


def test_conditioned_paths_converge_to_q(three):
    eta, Fs = F(7, 10), [SPLIT_A]
    states, Q = q_matrix(three, Fs, eta, phi_vector(three, Fs, eta))
    for length in (1, 2, 3):
        for path in itertools.product(three.space.states[:-1], repeat=length):
            got = conditioned_path_probability(three, path, 300)
            want = q_path_probability(states, Q, path, COARSE3)
            assert float(got) == pytest.approx(float(want), abs=1e-6)


def test_q_rows_and_F_absorbing_on_random_models():
    for s in range(25):
        P = build_chain(random_nondegenerate(random.Random(50 + s), max_sites=5))
        r = analyze(P)
        for k, st in enumerate(r.boundary):
            assert sum(r.Q[k]) == 1
            if st in r.F:
                assert r.Q[k, k] == 1


# --- QSDs ----------------------------------------------------------------------------------------

def test_qsd_examples(three, sym):
    T = [three.space[i] for i in three.space.transient]
    unit_A = [F(int(s == SPLIT_A)) for s in T]
    res = qsd_check(unit_A, three, [SPLIT_A], F(7, 10))
    assert res.ok and res.left_eigen and res.conditional_invariance and res.indicator_eigenvectors
    # {1,2,3} leads into {1}{2,3}, so the indicator is not an eigenvector of all of P*
    assert res.indicator_full_right_eigen is False

    unit_c = [F(int(s == COARSE3)) for s in T]
    assert not qsd_check(unit_c, three, [SPLIT_A], F(7, 10))

    eta, Fs = eta_and_F(sym)
    Ts = [sym.space[i] for i in sym.space.transient]
    nu = [{SPLIT_A: F(1, 3), SPLIT_B: F(2, 3)}.get(s, F(0)) for s in Ts]
    assert qsd_check(nu, sym, Fs, eta).ok


def test_indicator_is_full_eigenvector_when_nothing_leads_into_F(dyadic):
    res = qsd_check([F(1)], dyadic, [coarsest(2)], F(1, 2))
    assert res.ok and res.indicator_full_right_eigen


def test_qsd_rejects_unnormalized(three):
    with pytest.raises(ValueError):
        qsd_check([F(1, 2), 0, 0], three, [SPLIT_A], F(7, 10))


# --- float mode agrees with exact mode -------------------------------------------------------------

@pytest.mark.parametrize("seed", range(10))
def test_float_mode_matches_exact(seed):
    rho = random_nondegenerate(random.Random(300 + seed), max_sites=5)
    exact = analyze(build_chain(rho))
    flo = analyze(build_chain(PartitionWeights({p: float(w) for p, w in rho.items()}, mode="float")))
    assert set(flo.F) == set(exact.F)
    assert flo.eta == pytest.approx(float(exact.eta), abs=1e-12)
    assert flo.beta0 == pytest.approx(float(exact.beta0), abs=1e-12)
    assert np.allclose(flo.phi.astype(float), exact.phi.astype(float), atol=1e-9)
    assert np.allclose(flo.Q.astype(float), exact.Q.astype(float), atol=1e-9)
    assert float(flo.limit_constant) == pytest.approx(float(exact.limit_constant), rel=1e-9)
