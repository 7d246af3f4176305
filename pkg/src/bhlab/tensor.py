"""Dense coefficient tensors and nested mixed lq norms.

A CoefTensor holds the coefficients T(e_{i_1}, ..., e_{i_m}) of an m-linear
form on the side-n section of the sup-norm sequence space, stored as a dense
(n, ..., n) array, real or complex.  The mixed norm applies lq power sums
from the innermost index outward:

    mixed_norm(t, (q_1..q_k)) = ( sum_{i_1} ( ... ( sum_{i_k} |t|^{q_k} )^{q_{k-1}/q_k} ... )^{q_1/q_2} )^{1/q_1}

All exponents live in (0, inf); below 1 the same power-sum formula applies
(a quasi-norm).  `block_restrict` produces the k-index array
S(i_1..i_k) = T(i_1 repeated n_1 times, ..., i_k repeated n_k times) used by
the anisotropic inequalities; `flat_qnorm` is the equal-exponent collapse.

JSON wire format (bit-exact round trip, row-major with the last index
fastest):

    {"m": int, "n": int, "field": "real"|"complex", "entries": [...]}

with complex entries written as [re, im] pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CapacityError, NormOverflowError
from .exponents import ExponentTuple

__all__ = [
    "REAL",
    "COMPLEX",
    "CoefTensor",
    "Partition",
    "mixed_norm",
    "block_restrict",
    "flat_qnorm",
    "DEFAULT_SCALAR_BUDGET",
]

REAL = "real"
COMPLEX = "complex"
_DTYPES = {REAL: np.float64, COMPLEX: np.complex128}

# Dense storage cap, in scalars (2 GiB of float64).
DEFAULT_SCALAR_BUDGET = 1 << 28


def check_scalar_budget(m: int, n: int, budget: int = DEFAULT_SCALAR_BUDGET) -> None:
    """Refuse dense allocations of n^m scalars past the budget."""
    if n**m > budget:
        raise CapacityError(f"dense tensor needs {n}^{m} scalars, budget is {budget}")


@dataclass(frozen=True, eq=False)
class Partition:
    """Block sizes (n_1, ..., n_k), positive integers; applies to tensors of arity sum(blocks)."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise ValueError(f"blocks must be positive integers, got {self.blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def m(self) -> int:
        return sum(self.blocks)

    @classmethod
    def trivial(cls, m: int) -> "Partition":
        return cls((1,) * m)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            return cls(tuple(int(tok) for tok in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"cannot parse partition {text!r}") from exc


@dataclass(frozen=True, eq=False)
class CoefTensor:
    """Immutable dense coefficient array of an m-linear form, side n per argument."""

    entries: np.ndarray
    field: str = REAL

    def __post_init__(self):
        if self.field not in _DTYPES:
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        arr = np.asarray(self.entries)
        if arr.ndim < 1:
            raise ValueError("tensor arity must be >= 1")
        if len(set(arr.shape)) != 1:
            raise ValueError(f"all sides must be equal, got shape {arr.shape}")
        if self.field == REAL and np.iscomplexobj(arr):
            raise ValueError("complex entries in a real tensor")
        arr = np.array(arr, dtype=_DTYPES[self.field])
        if not np.isfinite(arr).all():
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def m(self) -> int:
        return self.entries.ndim

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_array(cls, values, field: str | None = None, *, budget: int = DEFAULT_SCALAR_BUDGET) -> "CoefTensor":
        arr = np.asarray(values)
        if field is None:
            field = COMPLEX if np.iscomplexobj(arr) else REAL
        if arr.ndim >= 1 and arr.shape:
            check_scalar_budget(arr.ndim, arr.shape[0], budget)
        return cls(arr, field)

    @classmethod
    def zeros(cls, m: int, n: int, field: str = REAL, *, budget: int = DEFAULT_SCALAR_BUDGET) -> "CoefTensor":
        if m < 1 or n < 1:
            raise ValueError("arity and side must be positive")
        check_scalar_budget(m, n, budget)
        return cls(np.zeros((n,) * m, dtype=_DTYPES[field]), field)

    def to_dict(self) -> dict:
        flat = self.entries.ravel().tolist()
        if self.field == COMPLEX:
            entries = [[z.real, z.imag] for z in flat]
        else:
            entries = flat
        return {"m": self.m, "n": self.n, "field": self.field, "entries": entries}

    @classmethod
    def from_dict(cls, data: dict, *, budget: int = DEFAULT_SCALAR_BUDGET) -> "CoefTensor":
        if not isinstance(data, dict):
            raise ValueError("tensor JSON must be an object")
        missing = {"m", "n", "field", "entries"} - set(data)
        if missing:
            raise ValueError(f"tensor JSON missing keys: {sorted(missing)}")
        m, n, field = data["m"], data["n"], data["field"]
        if not (isinstance(m, int) and isinstance(n, int)) or m < 1 or n < 1:
            raise ValueError("m and n must be positive integers")
        if field not in _DTYPES:
            raise ValueError(f"field must be 'real' or 'complex', got {field!r}")
        check_scalar_budget(m, n, budget)
        entries = data["entries"]
        if len(entries) != n**m:
            raise ValueError(f"expected {n}^{m} = {n**m} entries, got {len(entries)}")
        if field == COMPLEX:
            pairs = np.asarray(entries, dtype=np.float64)
            if pairs.ndim != 2 or pairs.shape[1] != 2:
                raise ValueError("complex entries must be [re, im] pairs")
            arr = (pairs[:, 0] + 1j * pairs[:, 1]).reshape((n,) * m)
        else:
            arr = np.asarray(entries, dtype=np.float64).reshape((n,) * m)
        return cls(arr, field)


def _coerce_exponents(q) -> ExponentTuple:
    return q if isinstance(q, ExponentTuple) else ExponentTuple(tuple(q))


def mixed_norm(t: CoefTensor, q) -> float:
    """Nested lq norm: innermost index under q_k, outermost under q_1.

    Arity of t must equal len(q).  Raises NormOverflowError if any power-sum
    stage leaves the floating-point range (possible for exponents < 1).
    """
    qt = _coerce_exponents(q)
    if qt.k != t.m:
        raise ValueError(f"tensor arity {t.m} != {qt.k} exponents")
    work = np.abs(t.entries)
    with np.errstate(over="ignore"):
        for p in reversed(qt.as_floats()):
            work = np.power(work, p).sum(axis=-1) ** (1.0 / p)
            if not np.isfinite(work).all():
                raise NormOverflowError(f"power sum with exponent {p} overflowed")
    return float(work)


def flat_qnorm(t: CoefTensor, q) -> float:
    """(sum |entries|^q)^(1/q); equals mixed_norm with q repeated."""
    p = float(q)
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {q}")
    with np.errstate(over="ignore"):
        out = np.power(np.abs(t.entries), p).sum() ** (1.0 / p)
    if not np.isfinite(out):
        raise NormOverflowError(f"power sum with exponent {p} overflowed")
    return float(out)


def block_restrict(t: CoefTensor, p: Partition) -> CoefTensor:
    """k-index array S(i_1..i_k) = T with each i_j repeated across its block.

    blocks (2, 1) on a 3-tensor give S(i, j) = T(i, i, j); the trivial
    partition returns the tensor unchanged.
    """
    if p.m != t.m:
        raise ValueError(f"partition blocks sum to {p.m}, tensor arity is {t.m}")
    grids = np.indices((t.n,) * p.k, dtype=np.intp)
    index = tuple(grids[j] for j, size in enumerate(p.blocks) for _ in range(size))
    return CoefTensor(t.entries[index], t.field)
