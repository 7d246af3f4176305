"""Admissibility of exponent tuples for mixed-norm inequalities.

A tuple (q_1, ..., q_k) with q_j in (0, inf) is *admissible* when

    sum_{j in A} 1/q_j  <=  (|A| + 1) / 2      for every nonempty A subset {1..k}.

The signed slack of one subset is its *deficit*,

    deficit(A) = sum_{j in A} 1/q_j - (|A| + 1) / 2,

so admissibility means every deficit is <= 0, and a subset with positive
deficit is a witness of failure.  Because each element contributes
1/q_j - 1/2 independently, the deficit maximizer over nonempty subsets is
{j : q_j < 2} when that set is nonempty and the singleton of the smallest
q_j otherwise; this yields an O(k) decision (`is_admissible_fast`)
equivalent to the 2^k enumeration (`is_admissible_bruteforce`).  The same
collapse is expressed by the reduction q_j -> min(q_j, 2): the tuple is
admissible iff sum_j 1/min(q_j, 2) <= (k + 1) / 2.

Exponents may be exact rationals (`fractions.Fraction`, also produced by
`ExponentTuple.parse`) or floats.  All-rational tuples are processed with
exact arithmetic and zero tolerance; float tuples compare the boundary
deficit = 0 with tolerance 1e-12.  Argument positions are 1-based
throughout: subsets of {1..k} match the reports printed by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import numbers
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError

__all__ = [
    "ExponentTuple",
    "AdmissibilityReport",
    "deficit",
    "is_admissible_bruteforce",
    "is_admissible_fast",
    "reduce_min2",
    "classical_bh_tuple",
    "reciprocal_sum",
    "BOUNDARY_TOL",
    "BRUTEFORCE_MAX_K",
]

Exponent = Union[float, Fraction]

# Float-path tolerance for classifying the boundary deficit == 0; exact
# rational tuples are compared against zero with no tolerance.
BOUNDARY_TOL = 1e-12

# 2^k subset enumeration cap.
BRUTEFORCE_MAX_K = 24

# Cached subset tables are kept up to this k; larger k stream in chunks.
_TABLE_MAX_K = 16
_CHUNK = 1 << 16


def _coerce_value(v) -> Exponent:
    """Normalize one exponent: exact types become Fraction, the rest float."""
    if isinstance(v, Fraction):
        q: Exponent = v
    elif isinstance(v, numbers.Integral):
        q = Fraction(int(v))
    elif isinstance(v, numbers.Real):
        q = float(v)
    else:
        raise TypeError(f"exponent must be a real number, got {type(v).__name__}")
    if isinstance(q, float) and not math.isfinite(q):
        raise ValueError("exponents must be finite")
    if q <= 0:
        raise ValueError(f"exponents must be positive, got {q}")
    return q


@dataclass(frozen=True)
class ExponentTuple:
    """Ordered tuple of positive finite exponents q_1, ..., q_k."""

    values: tuple[Exponent, ...]

    def __post_init__(self):
        vals = tuple(_coerce_value(v) for v in self.values)
        if not vals:
            raise ValueError("exponent tuple must have length k >= 1")
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> int:
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        """True when every exponent is stored as an exact rational."""
        return all(isinstance(v, Fraction) for v in self.values)

    @classmethod
    def parse(cls, tokens: Iterable[Union[str, float, Fraction]]) -> "ExponentTuple":
        """Build a tuple from CLI/JSON tokens.

        Strings ("3", "18/10", "1.8") parse to exact rationals; numeric
        values pass through unchanged (ints exact, floats as floats).
        """
        out = []
        for tok in tokens:
            if isinstance(tok, str):
                try:
                    out.append(Fraction(tok))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ValueError(f"cannot parse exponent {tok!r}") from exc
            else:
                out.append(tok)
        return cls(tuple(out))

    def to_json(self) -> list:
        """JSON form: floats as numbers, exact rationals as 'a/b' strings."""
        return [str(v) if isinstance(v, Fraction) else v for v in self.values]

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.values)

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Verdict for one exponent tuple.

    witness is a 1-based subset of {1..k}; it is empty exactly when the
    tuple is admissible, and otherwise attains the maximal deficit.
    reduced_sum is sum_j 1/min(q_j, 2), the single-sum form of the verdict:
    admissible iff reduced_sum <= (k + 1) / 2.
    """

    admissible: bool
    witness: frozenset[int]
    max_deficit: Exponent
    reduced_sum: Exponent

    def __post_init__(self):
        if self.admissible != (not self.witness):
            raise ValueError("witness must be nonempty exactly when inadmissible")

    def as_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "witness": sorted(self.witness),
            "max_deficit": float(self.max_deficit),
            "max_deficit_exact": _exact_str(self.max_deficit),
            "reduced_sum": float(self.reduced_sum),
            "reduced_sum_exact": _exact_str(self.reduced_sum),
        }


def _exact_str(v: Exponent) -> Union[str, None]:
    return str(v) if isinstance(v, Fraction) else None


def _tolerance(q: ExponentTuple) -> Exponent:
    return Fraction(0) if q.is_exact else BOUNDARY_TOL


def _check_subset(q: ExponentTuple, subset: Iterable[int]) -> frozenset[int]:
    A = frozenset(subset)
    if not A:
        raise ValueError("subset must be nonempty")
    for j in A:
        if not isinstance(j, numbers.Integral) or not 1 <= j <= q.k:
            raise IndexError(f"position {j} outside 1..{q.k}")
    return A


def deficit(q: ExponentTuple, subset: Iterable[int]) -> Exponent:
    """Signed slack sum_{j in A} 1/q_j - (|A|+1)/2 of one nonempty subset.

    The subset condition holds iff the returned value is <= 0.  Positions
    are 1-based.  Exact tuples give an exact Fraction.
    """
    A = _check_subset(q, subset)
    if q.is_exact:
        return sum(1 / q.values[j - 1] for j in A) - Fraction(len(A) + 1, 2)
    return math.fsum(1.0 / float(q.values[j - 1]) for j in A) - (len(A) + 1) / 2.0


def reciprocal_sum(q: ExponentTuple) -> Exponent:
    """sum_j 1/q_j over the full tuple (no min-2 reduction)."""
    if q.is_exact:
        return sum(1 / v for v in q.values)
    return math.fsum(1.0 / float(v) for v in q.values)


def reduce_min2(q: ExponentTuple) -> ExponentTuple:
    """Componentwise q_j -> min(q_j, 2); idempotent, output in (0, 2]."""
    return ExponentTuple(tuple(min(v, 2) for v in q.values))


def classical_bh_tuple(m: int) -> ExponentTuple:
    """m copies of 2m/(m+1), the equal-exponent boundary tuple (exact)."""
    if not isinstance(m, numbers.Integral) or m < 1:
        raise ValueError(f"arity must be a positive integer, got {m}")
    return ExponentTuple((Fraction(2 * m, m + 1),) * int(m))


def _reduced_sum(q: ExponentTuple) -> Exponent:
    if q.is_exact:
        return sum(1 / Fraction(min(v, 2)) for v in q.values)
    return math.fsum(1.0 / min(float(v), 2.0) for v in q.values)


@lru_cache(maxsize=None)
def _subset_table(k: int):
    """Membership matrix of all nonempty subsets of {1..k} plus (|A|+1)/2."""
    masks = np.arange(1, 1 << k, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k, dtype=np.int64)[None, :]) & 1).astype(np.float64)
    half_card = (bits.sum(axis=1) + 1.0) / 2.0
    return bits, half_card


def _brute_float(values: tuple[Exponent, ...]):
    k = len(values)
    inv = 1.0 / np.array([float(v) for v in values])
    best = -np.inf
    best_mask = 0
    if k <= _TABLE_MAX_K:
        bits, half_card = _subset_table(k)
        d = bits @ inv - half_card
        i = int(np.argmax(d))
        return float(d[i]), i + 1
    shifts = np.arange(k, dtype=np.int64)[None, :]
    for start in range(1, 1 << k, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << k), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.float64)
        d = bits @ inv - (bits.sum(axis=1) + 1.0) / 2.0
        i = int(np.argmax(d))
        if d[i] > best:
            best, best_mask = float(d[i]), int(masks[i])
    return best, best_mask


def _brute_exact(values: tuple[Exponent, ...]):
    # Gray-code walk: one rational update per subset.
    k = len(values)
    recip = [1 / v for v in values]
    cur = Fraction(0)
    prev = 0
    best = None
    best_mask = 0
    for t in range(1, 1 << k):
        g = t ^ (t >> 1)
        j = (g ^ prev).bit_length() - 1
        cur = cur + recip[j] if g & (1 << j) else cur - recip[j]
        prev = g
        d = cur - Fraction(g.bit_count() + 1, 2)
        if best is None or d > best:
            best, best_mask = d, g
    return best, best_mask


def _mask_to_witness(mask: int) -> frozenset[int]:
    return frozenset(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def is_admissible_bruteforce(q: ExponentTuple, *, max_k: int = BRUTEFORCE_MAX_K) -> AdmissibilityReport:
    """Decide admissibility by enumerating all 2^k - 1 nonempty subsets.

    Serves as the independent oracle for `is_admissible_fast`.  Capacity is
    capped at k <= max_k; beyond that the enumeration is refused.
    """
    if q.k > max_k:
        raise CapacityError(
            f"subset enumeration needs 2^{q.k} evaluations (cap k = {max_k}); "
            "use is_admissible_fast"
        )
    if q.is_exact:
        max_deficit, mask = _brute_exact(q.values)
    else:
        max_deficit, mask = _brute_float(q.values)
    admissible = max_deficit <= _tolerance(q)
    return AdmissibilityReport(
        admissible=admissible,
        witness=frozenset() if admissible else _mask_to_witness(mask),
        max_deficit=max_deficit,
        reduced_sum=_reduced_sum(q),
    )


def is_admissible_fast(q: ExponentTuple) -> AdmissibilityReport:
    """O(k) admissibility decision, exact-equivalent to the brute force.

    The deficit maximizer over nonempty subsets is A* = {j : q_j < 2} when
    nonempty (every member raises the deficit, everything else lowers it),
    and the singleton of the smallest exponent otherwise.
    """
    star = [j for j, v in enumerate(q.values, start=1) if v < 2]
    if not star:
        vals = q.values
        jmin = min(range(1, q.k + 1), key=lambda j: vals[j - 1])
        star = [jmin]
    max_deficit = deficit(q, star)
    admissible = max_deficit <= _tolerance(q)
    return AdmissibilityReport(
        admissible=admissible,
        witness=frozenset() if admissible else frozenset(star),
        max_deficit=max_deficit,
        reduced_sum=_reduced_sum(q),
    )
