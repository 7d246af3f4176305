import math

import numpy as np
import pytest

from bhlab import (
    CapacityError,
    CoefTensor,
    KszSpec,
    exact_real,
    lift,
    littlewood_tensor,
    mixed_norm,
    sample_sign_tensor,
)


# --------------------------- sample_sign_tensor ------------------------------

def test_entries_are_signs():
    t = sample_sign_tensor(KszSpec(k=3, n=5, seed=42))
    assert set(np.unique(t.entries)) <= {-1.0, 1.0}


def test_pure_function_of_seed_k_n():
    a = sample_sign_tensor(KszSpec(k=2, n=9, seed=7))
    b = sample_sign_tensor(KszSpec(k=2, n=9, seed=7))
    assert np.array_equal(a.entries, b.entries)
    c = sample_sign_tensor(KszSpec(k=2, n=9, seed=8))
    assert not np.array_equal(a.entries, c.entries)


def test_spans_fill_blocks_consistently():
    # a tensor bigger than one fill block still reproduces exactly
    big = sample_sign_tensor(KszSpec(k=2, n=300, seed=1))
    again = sample_sign_tensor(KszSpec(k=2, n=300, seed=1))
    assert big.entries.size > 1 << 16
    assert np.array_equal(big.entries, again.entries)


def test_sign_tensor_mixed_norm_formula():
    t = sample_sign_tensor(KszSpec(k=2, n=2, seed=0))
    assert mixed_norm(t, (1.0, 1.0)) == 4.0
    t = sample_sign_tensor(KszSpec(k=3, n=4, seed=5))
    q = (1.5, 0.8, 2.0)
    assert math.isclose(mixed_norm(t, q), 4 ** math.fsum(1 / p for p in q), rel_tol=1e-10)


def test_complex_field_keeps_sign_entries():
    t = sample_sign_tensor(KszSpec(k=2, n=3, seed=3, field="complex"))
    assert t.field == "complex"
    assert np.allclose(t.entries.imag, 0.0)
    assert set(np.unique(t.entries.real)) <= {-1.0, 1.0}


def test_spec_validation():
    with pytest.raises(ValueError):
        KszSpec(k=0, n=2, seed=0)
    with pytest.raises(ValueError):
        KszSpec(k=2, n=0, seed=0)
    with pytest.raises(ValueError):
        KszSpec(k=2, n=2, seed=-1)
    with pytest.raises(ValueError):
        KszSpec(k=2, n=2, seed=1 << 64)
    with pytest.raises(ValueError):
        KszSpec(k=2, n=2, seed=0, field="rational")


def test_sampling_capacity():
    with pytest.raises(CapacityError):
        sample_sign_tensor(KszSpec(k=10, n=10, seed=0))  # 10^10 scalars


def test_growth_exponent_small_grid():
    # light version of the acceptance run: exponent near 1.5 for k = 2
    xs, ys = [], []
    for n in (4, 8, 12, 16):
        for seed in range(5):
            t = sample_sign_tensor(KszSpec(k=2, n=n, seed=seed))
            xs.append(math.log(n))
            ys.append(math.log(exact_real(t).lower))
    slope = np.polyfit(xs, ys, 1)[0]
    assert 1.35 <= slope <= 1.65


# ---------------------------------- lift ------------------------------------

def test_lift_identity_at_same_arity():
    t = littlewood_tensor()
    assert lift(t, 2) is t


def test_lift_pads_first_coordinate():
    t = littlewood_tensor()
    t3 = lift(t, 3)
    assert t3.m == 3 and t3.n == 2
    assert np.array_equal(t3.entries[:, :, 0], t.entries)
    assert np.all(t3.entries[:, :, 1] == 0.0)


def test_lift_rejects_smaller_arity():
    with pytest.raises(ValueError):
        lift(littlewood_tensor(), 1)


def test_lift_preserves_exact_norm():
    rng = np.random.default_rng(51)
    for _ in range(10):
        k = int(rng.integers(1, 3))
        n = int(rng.integers(2, 5))
        t = CoefTensor.from_array(rng.standard_normal((n,) * k))
        base = exact_real(t).lower
        for m in range(k, min(k + 2, 4) + 1):
            assert math.isclose(exact_real(lift(t, m)).lower, base, rel_tol=1e-10)


def test_lift_preserves_mixed_norm_under_any_extension():
    rng = np.random.default_rng(52)
    for _ in range(15):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(2, 5))
        t = CoefTensor.from_array(rng.standard_normal((n,) * k))
        m = k + int(rng.integers(1, 3))
        q_base = tuple(rng.uniform(0.4, 4.0, k))
        q_ext = q_base + tuple(rng.uniform(0.4, 4.0, m - k))
        assert math.isclose(mixed_norm(lift(t, m), q_ext), mixed_norm(t, q_base),
                            rel_tol=1e-12)


def test_lift_capacity():
    t = littlewood_tensor()
    with pytest.raises(CapacityError):
        lift(t, 40)  # 2^40 scalars


# ------------------------------- littlewood ----------------------------------

def test_littlewood_tensor_entries():
    t = littlewood_tensor()
    assert np.array_equal(t.entries, np.array([[1.0, 1.0], [1.0, -1.0]]))
    assert littlewood_tensor("complex").field == "complex"
