"""Counterexample tensor families: random sign forms and coordinate padding.

`sample_sign_tensor` draws a dense k-tensor of independent uniform +-1
coefficients from a counter-based generator (Philox keyed by the seed, with
the counter offset by entry block), so the result is a pure function of
(seed, k, n) no matter how the fill is scheduled.  Random sign forms of
arity k have operator norm of order n^{(k+1)/2} while every mixed norm is
exactly n^{sum 1/q_j}, which is what makes them the growth engine of the
scaling experiments.

`lift` pads a k-linear form to arity m by multiplying with the first
coordinate of each extra argument; the operator norm and all mixed norms
are unchanged, which turns a witness subset of size k into a full m-linear
counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import COMPLEX, REAL, CoefTensor, DEFAULT_SCALAR_BUDGET, check_scalar_budget

__all__ = ["KszSpec", "sample_sign_tensor", "lift", "littlewood_tensor"]

_FILL_BLOCK = 1 << 16


@dataclass(frozen=True)
class KszSpec:
    """Shape and seed of one random sign form."""

    k: int
    n: int
    seed: int
    field: str = REAL

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("arity and side must be >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")


def sample_sign_tensor(spec: KszSpec, *, budget: int = DEFAULT_SCALAR_BUDGET) -> CoefTensor:
    """Dense k-tensor of independent uniform +-1 entries, reproducible by seed.

    Entry i depends only on (seed, i): block b of 2^16 entries reads a
    Philox stream whose 256-bit counter starts at b << 192, so parallel or
    out-of-order fills would produce the identical tensor.
    """
    check_scalar_budget(spec.k, spec.n, budget)
    total = spec.n**spec.k
    flat = np.empty(total)
    for b in range((total + _FILL_BLOCK - 1) // _FILL_BLOCK):
        lo = b * _FILL_BLOCK
        hi = min(total, lo + _FILL_BLOCK)
        rng = np.random.Generator(np.random.Philox(key=spec.seed, counter=b << 192))
        flat[lo:hi] = 1.0 - 2.0 * (rng.random(hi - lo) < 0.5)
    arr = flat.reshape((spec.n,) * spec.k)
    if spec.field == COMPLEX:
        arr = arr.astype(np.complex128)
    return CoefTensor(arr, spec.field)


def lift(t: CoefTensor, m: int, *, budget: int = DEFAULT_SCALAR_BUDGET) -> CoefTensor:
    """Pad a k-linear form to arity m >= k without changing any norm.

    The result is T_k(x^(1)..x^(k)) times the first coordinates of the m-k
    extra arguments: entries agree with t where all padding indices equal
    the first coordinate and vanish elsewhere.
    """
    if m < t.m:
        raise ValueError(f"target arity {m} below tensor arity {t.m}")
    if m == t.m:
        return t
    check_scalar_budget(m, t.n, budget)
    out = np.zeros((t.n,) * m, dtype=t.entries.dtype)
    out[(slice(None),) * t.m + (0,) * (m - t.m)] = t.entries
    return CoefTensor(out, t.field)


def littlewood_tensor(field: str = REAL) -> CoefTensor:
    """The 2x2 sign matrix ((1, 1), (1, -1)): operator norm 2, the standard
    small extremal bilinear form."""
    return CoefTensor(np.array([[1.0, 1.0], [1.0, -1.0]]), field)
