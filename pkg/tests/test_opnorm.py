import itertools
import math

import numpy as np
import pytest

from bhlab import (
    CapacityError,
    CoefTensor,
    NormEstimate,
    ascent_lower,
    bilinear_upper,
    evaluate_form,
    exact_real,
    lift,
    littlewood_tensor,
)

from _oracles import naive_opnorm


# ------------------------------ exact_real ----------------------------------

def test_linear_form_is_l1():
    t = CoefTensor.from_array(np.array([1.0, -2.0, 3.0]))
    est = exact_real(t)
    assert est.exact and est.lower == est.upper == 6.0


def test_littlewood_norm_two():
    est = exact_real(littlewood_tensor())
    assert est.lower == 2.0 and est.exact


def test_all_ones_norm_n_squared():
    for n in (2, 3, 5):
        est = exact_real(CoefTensor.from_array(np.ones((n, n))))
        assert est.lower == float(n * n)


def test_lifted_littlewood_norm_unchanged():
    t3 = lift(littlewood_tensor(), 3)
    assert exact_real(t3).lower == 2.0


def test_matches_full_enumeration_oracle():
    rng = np.random.default_rng(17)
    for _ in range(25):
        m = int(rng.integers(2, 4))
        n = int(rng.integers(2, 5 if m == 2 else 4))
        t = CoefTensor.from_array(rng.standard_normal((n,) * m))
        assert math.isclose(exact_real(t).lower, naive_opnorm(t.entries), rel_tol=1e-10)


def test_certificate_reproduces_value():
    rng = np.random.default_rng(18)
    for _ in range(20):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 5))
        t = CoefTensor.from_array(rng.standard_normal((n,) * m))
        est = exact_real(t)
        assert len(est.certificate) == m
        assert all(set(np.unique(x)) <= {-1.0, 1.0} for x in est.certificate)
        assert math.isclose(abs(evaluate_form(t, est.certificate)), est.lower,
                            rel_tol=1e-12, abs_tol=1e-12)


def test_argument_permutation_invariance():
    rng = np.random.default_rng(19)
    t = CoefTensor.from_array(rng.standard_normal((3, 3, 3)))
    base = exact_real(t).lower
    for perm in itertools.permutations(range(3)):
        permuted = CoefTensor.from_array(np.transpose(t.entries, perm))
        assert math.isclose(exact_real(permuted).lower, base, rel_tol=1e-12)


def test_homogeneity_of_exact():
    rng = np.random.default_rng(20)
    t = CoefTensor.from_array(rng.standard_normal((4, 4)))
    val = exact_real(t).lower
    scaled = CoefTensor.from_array(-2.5 * t.entries)
    assert math.isclose(exact_real(scaled).lower, 2.5 * val, rel_tol=1e-12)


def test_budget_enforced():
    t = CoefTensor.zeros(3, 14)  # (m-1)*n = 28 > 26
    with pytest.raises(CapacityError):
        exact_real(t)
    # custom budget admits it
    t2 = CoefTensor.zeros(2, 3)
    with pytest.raises(CapacityError):
        exact_real(t2, budget_bits=2)


def test_complex_field_rejected():
    t = CoefTensor.from_array(np.ones((2, 2), dtype=complex))
    with pytest.raises(ValueError):
        exact_real(t)


def test_zero_tensor_exact():
    est = exact_real(CoefTensor.zeros(2, 3))
    assert est.lower == 0.0 and est.exact


# ----------------------------- ascent_lower ---------------------------------

def test_ascent_all_ones_reaches_global():
    est = ascent_lower(CoefTensor.from_array(np.ones((4, 4))), restarts=1, seed=123)
    assert est.lower == 16.0
    assert est.upper is None and not est.exact


def test_ascent_littlewood_any_seed():
    for seed in (0, 1, 99):
        assert ascent_lower(littlewood_tensor(), restarts=4, seed=seed).lower == 2.0


def test_ascent_zero_tensor():
    est = ascent_lower(CoefTensor.zeros(2, 3), restarts=2, seed=0)
    assert est.lower == 0.0
    assert abs(evaluate_form(CoefTensor.zeros(2, 3), est.certificate)) == 0.0


def test_ascent_is_lower_bound_and_deterministic():
    rng = np.random.default_rng(29)
    for _ in range(15):
        m = int(rng.integers(2, 4))
        n = int(rng.integers(2, 5))
        t = CoefTensor.from_array(rng.standard_normal((n,) * m))
        a = ascent_lower(t, restarts=8, seed=5)
        b = ascent_lower(t, restarts=8, seed=5)
        assert a.lower == b.lower
        assert a.lower <= exact_real(t).lower + 1e-10
        assert math.isclose(abs(evaluate_form(t, a.certificate)), a.lower,
                            rel_tol=1e-12, abs_tol=1e-12)


def test_ascent_complex_phases():
    rng = np.random.default_rng(30)
    arr = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    t = CoefTensor.from_array(arr)
    est = ascent_lower(t, restarts=8, seed=2)
    assert est.lower > 0
    assert all(np.allclose(np.abs(x), 1.0) for x in est.certificate)
    assert math.isclose(abs(evaluate_form(t, est.certificate)), est.lower, rel_tol=1e-12)


def test_ascent_rejects_bad_restarts():
    with pytest.raises(ValueError):
        ascent_lower(littlewood_tensor(), restarts=0)


# ---------------------------- bilinear_upper --------------------------------

def test_upper_littlewood():
    assert math.isclose(bilinear_upper(littlewood_tensor()), 2 * math.sqrt(2), rel_tol=1e-12)


def test_upper_identity_tight():
    t = CoefTensor.from_array(np.eye(3))
    assert math.isclose(bilinear_upper(t), 3.0, rel_tol=1e-12)
    assert math.isclose(exact_real(t).lower, 3.0, rel_tol=1e-12)


def test_upper_all_ones_tight():
    for n in (2, 4):
        t = CoefTensor.from_array(np.ones((n, n)))
        assert math.isclose(bilinear_upper(t), float(n * n), rel_tol=1e-12)


def test_upper_needs_real_bilinear():
    with pytest.raises(ValueError):
        bilinear_upper(CoefTensor.zeros(3, 2))
    with pytest.raises(ValueError):
        bilinear_upper(CoefTensor.from_array(np.ones((2, 2), dtype=complex)))


def test_sandwich_on_random_instances():
    rng = np.random.default_rng(37)
    for _ in range(30):
        n = int(rng.integers(2, 7))
        t = CoefTensor.from_array(rng.standard_normal((n, n)))
        low = ascent_lower(t, restarts=6, seed=1).lower
        mid = exact_real(t).lower
        up = bilinear_upper(t)
        assert low <= mid + 1e-9
        assert mid <= up + 1e-9


# ------------------------------ NormEstimate --------------------------------

def test_estimate_invariants_enforced():
    x = (np.ones(2),)
    with pytest.raises(ValueError):
        NormEstimate(-1.0, None, False, x)
    with pytest.raises(ValueError):
        NormEstimate(2.0, 1.0, False, x)
    with pytest.raises(ValueError):
        NormEstimate(1.0, None, True, x)


def test_estimate_as_dict():
    est = exact_real(littlewood_tensor())
    d = est.as_dict()
    assert d["lower"] == d["upper"] == 2.0 and d["exact"] is True
    assert len(d["certificate"]) == 2
    assert "certificate" not in est.as_dict(include_certificate=False)


def test_evaluate_form_validation():
    t = littlewood_tensor()
    with pytest.raises(ValueError):
        evaluate_form(t, [np.ones(2)])
    with pytest.raises(ValueError):
        evaluate_form(t, [np.ones(3), np.ones(3)])
