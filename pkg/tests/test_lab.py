import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drlinrel.errors import DimensionTooSmall, NotInD
from drlinrel.lab import (ClosednessReport, SweepConfig, closedness_probe,
                          escape_from_D, evaluate_pair, fraction_in_D,
                          genericity_sweep, haar_orthogonal, records_from_csv,
                          records_to_csv, reflector_commutator_norm,
                          sample_commuting_pair, sample_symmetric_relation,
                          trial_rng)
from drlinrel.linrel import (dist, from_matrix, is_maximally_monotone,
                             is_symmetric, normal_cone_of_subspace, resolvent_of)


def test_forced_eigenvalues(rng):
    A = sample_symmetric_relation(3, rng, eigenvalues=np.ones(3))
    np.testing.assert_allclose(A.to_matrix(), np.zeros((3, 3)), atol=1e-14)
    B = sample_symmetric_relation(3, rng, eigenvalues=np.zeros(3))
    np.testing.assert_allclose(resolvent_of(B), np.zeros((3, 3)), atol=1e-15)
    # {0} x R^n: the point block vanishes
    np.testing.assert_allclose(B.U, 0.0, atol=1e-15)


def test_seeded_draw_is_symmetric_maximal():
    A = sample_symmetric_relation(4, trial_rng(7, 0))
    assert is_symmetric(A) and is_maximally_monotone(A)
    J = resolvent_of(A)
    lam = np.linalg.eigvalsh(0.5 * (J + J.T))
    assert lam.min() >= -1e-12 and lam.max() <= 1 + 1e-12


def test_sampler_rejects_empty_dimension(rng):
    with pytest.raises(DimensionTooSmall):
        sample_symmetric_relation(0, rng)


def test_haar_orthogonal(rng):
    Q = haar_orthogonal(5, rng)
    np.testing.assert_allclose(Q.T @ Q, np.eye(5), atol=1e-14)


def test_trial_streams_independent_of_order():
    a = trial_rng(3, 5).standard_normal(4)
    trial_rng(3, 4).standard_normal(100)
    np.testing.assert_array_equal(trial_rng(3, 5).standard_normal(4), a)
    assert not np.array_equal(trial_rng(3, 6).standard_normal(4), a)
    assert not np.array_equal(trial_rng(4, 5).standard_normal(4), a)


def test_sweep_deterministic():
    cfg = SweepConfig(n=3, trials=50, seed=11)
    r1, r2 = genericity_sweep(cfg), genericity_sweep(cfg)
    assert r1 == r2
    assert records_to_csv(r1) == records_to_csv(r2)
    # a longer sweep repeats the shorter one as its prefix
    longer = genericity_sweep(SweepConfig(n=3, trials=60, seed=11))
    assert longer[:50] == r1


def test_sweep_generic_pairs_not_in_D():
    recs = genericity_sweep(SweepConfig(n=3, trials=200, seed=0))
    assert fraction_in_D(recs) == 0.0
    assert all(not r.proximal and r.dist_to_perturbed is None for r in recs)
    assert min(r.commutator_norm for r in recs) > 1e-8


def test_sweep_one_dimension_always_in_D():
    recs = genericity_sweep(SweepConfig(n=1, trials=100, seed=2))
    assert fraction_in_D(recs) == 1.0
    assert all(r.proximal and r.commutator_norm == 0.0 for r in recs)


def test_forced_equal_pair_in_D(rng):
    cfg = SweepConfig(n=4, trials=1)
    A = sample_symmetric_relation(4, rng)
    rec = evaluate_pair(A, A, cfg)
    assert rec.in_D and rec.proximal
    assert rec.commutator_norm <= 1e-12
    assert 0 < rec.dist_to_perturbed <= 4 * cfg.lambda_escape


def test_records_csv_round_trip():
    recs = genericity_sweep(SweepConfig(n=2, trials=20, seed=5))
    text = records_to_csv(recs)
    assert text.splitlines()[0] == "trial,commutator_norm,in_D,proximal,dist_to_perturbed"
    assert records_from_csv(text) == recs


@pytest.mark.parametrize("kwargs", [
    dict(n=0, trials=1), dict(n=2, trials=0), dict(n=2, trials=1, commute_tol=0.0),
    dict(n=2, trials=1, lambda_escape=1.0), dict(n=2, trials=1, lambda_escape=0.0),
    dict(n=2, trials=1, seed=-1),
])
def test_sweep_config_validation(kwargs):
    with pytest.raises(ValueError):
        SweepConfig(**kwargs)


def test_sweep_config_from_dict():
    cfg = SweepConfig.from_dict({"n": 3, "trials": 10, "seed": 1})
    assert cfg == SweepConfig(3, 10, 1)
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"n": 3, "trials": 10, "bogus": 1})


def test_escape_zero_pair():
    Z = from_matrix(np.zeros((2, 2)))
    lam = 1e-3
    A, B, rep = escape_from_D(Z, Z, lam)
    assert rep.commutator_norm > rep.commute_tol
    assert not rep.retried and rep.lam == lam
    assert rep.dist <= 2 * lam + 1e-15
    assert rep.dist == pytest.approx(dist(Z, A) + dist(Z, B), abs=1e-15)
    for X in (A, B):
        assert is_symmetric(X) and is_maximally_monotone(X)


def test_escape_distance_shrinks_with_lambda(rng):
    A0, B0 = sample_commuting_pair(3, rng)
    prev = np.inf
    for lam in (1e-1, 1e-2, 1e-3, 1e-4):
        *_, rep = escape_from_D(A0, B0, lam)
        assert rep.dist <= 4 * lam
        assert rep.dist < prev
        prev = rep.dist


def test_escape_large_lambda_still_leaves():
    Z = from_matrix(np.zeros((2, 2)))
    A, B, rep = escape_from_D(Z, Z, 0.999)
    assert reflector_commutator_norm(A, B) == rep.commutator_norm > rep.commute_tol


def test_escape_requires_pair_in_D(two_lines):
    with pytest.raises(NotInD):
        escape_from_D(*two_lines)
    with pytest.raises(NotInD):
        escape_from_D(from_matrix([[0.0, 1.0], [-1.0, 0.0]]), from_matrix(np.zeros((2, 2))))


def test_escape_needs_two_dimensions():
    Z = from_matrix(np.zeros((1, 1)))
    with pytest.raises(DimensionTooSmall):
        escape_from_D(Z, Z)


def test_escape_rejects_bad_lambda():
    Z = from_matrix(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        escape_from_D(Z, Z, 0.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.floats(1e-4, 0.5))
def test_escape_properties(n, seed, lam):
    A0, B0 = sample_commuting_pair(n, np.random.default_rng(seed))
    A, B, rep = escape_from_D(A0, B0, lam)
    assert rep.commutator_norm > rep.commute_tol
    assert rep.dist <= 4 * lam
    assert is_symmetric(A) and is_symmetric(B)


def test_closedness_commuting_pair(rng):
    rep = closedness_probe(*sample_commuting_pair(4, rng))
    assert isinstance(rep, ClosednessReport) and rep.passed
    assert len(rep.dists) == 20 and rep.dists[-1] < rep.dists[0]


def test_closedness_diagonal_family():
    # A = N_{span e1}, B = zero: resolvents diag(1, 0) and I commute.
    A = normal_cone_of_subspace([[1.0], [0.0]])
    B = from_matrix(np.zeros((2, 2)))
    rep = closedness_probe(A, B, k_max=10)
    assert rep.passed
    assert rep.dists[0] == pytest.approx(1.0, abs=1e-14)
    for k, d in enumerate(rep.dists, start=1):
        assert d == pytest.approx(1.0 / k, abs=1e-13)


def test_closedness_with_partner():
    # everything is diagonal in the standard basis, so every term commutes
    P = from_matrix(np.diag([1.0, 2.0, 3.0]))
    D = normal_cone_of_subspace(np.eye(3)[:, :1])
    rep = closedness_probe(D, P, partner=(P, D))
    assert rep.passed
    with pytest.raises(NotInD):
        closedness_probe(*(normal_cone_of_subspace([[1.0], [0.0]]),
                           normal_cone_of_subspace([[1.0], [1.0]])))


def test_closedness_rejects_bad_k(rng):
    with pytest.raises(ValueError):
        closedness_probe(*sample_commuting_pair(2, rng), k_max=0)
