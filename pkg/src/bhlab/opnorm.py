"""Operator norm of a multilinear form over unit sup-norm balls.

For a real form the supremum over the polycube is attained at vertices, and
the last argument can be maximized in closed form:

    |T| = max over x^(1..m-1) in {-1,+1}^n  of  sum_i |T(x^(1), ..., x^(m-1), e_i)|.

`exact_real` enumerates those vertices.  Outer arguments walk a reflected
Gray code, updating the partially contracted tensor in place with one
slice-add per flip; the final enumerated argument is handled in bulk, as a
sign-matrix product against the remaining n x n contraction (chunked, so
memory stays flat at large n).  Since negating any argument negates the
form, each enumerated argument pins its first coordinate to +1, halving
every level.  Cost is O(2^{(m-1)(n-1)} * n^2) scalar operations; the bit
budget (m-1)*n <= 26 keeps that at desk scale.

`ascent_lower` is the coordinate-ascent lower bound that works at any size
and for complex scalars: cycle through the arguments, replacing each with
the signs (real) or unit phases (complex) of its partial contraction; the
objective is nondecreasing, so each restart converges.  `bilinear_upper`
closes the sandwich for m = 2 via n * sigma_max.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError
from .tensor import COMPLEX, REAL, CoefTensor

__all__ = [
    "NormEstimate",
    "exact_real",
    "ascent_lower",
    "bilinear_upper",
    "evaluate_form",
    "DEFAULT_EXACT_BITS",
]

# Cap on (m-1)*n for exact vertex enumeration.
DEFAULT_EXACT_BITS = 26

# Sign-matrix chunk for the bulk level (rows per block).
_BULK_ROWS = 1 << 16

_MAX_SWEEPS = 500


@dataclass(frozen=True, eq=False)
class NormEstimate:
    """Lower/upper bracket of the operator norm with an attaining certificate.

    exact implies lower == upper.  Evaluating the form at the certificate
    vectors reproduces `lower` (up to roundoff); upper is None when no
    bound is available.
    """

    lower: float
    upper: float | None
    exact: bool
    certificate: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError("norm lower bound cannot be negative")
        if self.upper is not None and self.upper < self.lower - 1e-9:
            raise ValueError("upper bound below lower bound")
        if self.exact and self.upper is None:
            raise ValueError("exact estimate must carry upper == lower")

    def as_dict(self, include_certificate: bool = True) -> dict:
        out = {"lower": self.lower, "upper": self.upper, "exact": self.exact}
        if include_certificate:
            vecs = []
            for v in self.certificate:
                if np.iscomplexobj(v):
                    vecs.append([[z.real, z.imag] for z in v.tolist()])
                else:
                    vecs.append(v.tolist())
            out["certificate"] = vecs
        return out


def evaluate_form(t: CoefTensor, vectors: Sequence[np.ndarray]):
    """T(x^(1), ..., x^(m)): full contraction; float for real fields, complex otherwise."""
    if len(vectors) != t.m:
        raise ValueError(f"need {t.m} argument vectors, got {len(vectors)}")
    work = t.entries
    for x in vectors:
        x = np.asarray(x)
        if x.shape != (t.n,):
            raise ValueError(f"argument vectors must have shape ({t.n},)")
        work = np.tensordot(x, work, axes=(0, 0))
    return complex(work) if t.field == COMPLEX else float(work)


def _signs_zero_plus(v: np.ndarray) -> np.ndarray:
    """Componentwise sign with ties at zero resolved to +1."""
    return np.where(v < 0, -1.0, 1.0)


def _phases_zero_one(v: np.ndarray) -> np.ndarray:
    """conj(v)/|v| componentwise, 1 where v == 0; maximizes Re sum(v * x)."""
    mag = np.abs(v)
    out = np.ones(v.shape, dtype=np.complex128)
    nz = mag > 0
    out[nz] = np.conj(v[nz]) / mag[nz]
    return out


def _sign_rows(n: int, start: int, count: int) -> np.ndarray:
    """Rows start..start+count-1 of the half-cube: coordinate 0 pinned to +1,
    coordinates 1..n-1 read off the row index bits (bit 0 -> coordinate 1)."""
    r = np.arange(start, start + count, dtype=np.uint64)
    bits = (r[:, None] >> np.arange(n - 1, dtype=np.uint64)[None, :]) & np.uint64(1)
    S = np.empty((count, n))
    S[:, 0] = 1.0
    S[:, 1:] = 1.0 - 2.0 * bits
    return S


def _best_last_two(P: np.ndarray):
    """max over x (x_0 = +1) of ||x @ P||_1, with the maximizing x and x @ P."""
    n = P.shape[0]
    if n == 1:
        x = np.ones(1)
        return float(np.abs(P[0]).sum()), x, P[0].copy()
    total = 1 << (n - 1)
    best = -np.inf
    best_x = best_v = None
    for start in range(0, total, _BULK_ROWS):
        S = _sign_rows(n, start, min(_BULK_ROWS, total - start))
        V = S @ P
        scores = np.abs(V).sum(axis=1)
        i = int(np.argmax(scores))
        if scores[i] > best:
            best = float(scores[i])
            best_x = S[i].copy()
            best_v = V[i].copy()
    return best, best_x, best_v


def _gray_flip_positions(bits: int):
    """Coordinate flipped at each step of the reflected Gray walk over `bits` bits."""
    for step in range(1, 1 << bits):
        yield (step & -step).bit_length() - 1


def exact_real(t: CoefTensor, *, budget_bits: int = DEFAULT_EXACT_BITS) -> NormEstimate:
    """Exact operator norm of a real form by sign-vertex enumeration.

    Requires (m-1)*n <= budget_bits.  The certificate holds m sign vectors
    attaining the norm.
    """
    if t.field != REAL:
        raise ValueError("exact enumeration is real-only; use ascent_lower for complex forms")
    m, n = t.m, t.n
    if m == 1:
        x = _signs_zero_plus(t.entries)
        val = abs(evaluate_form(t, [x]))
        return NormEstimate(val, val, True, (x,))
    if (m - 1) * n > budget_bits:
        raise CapacityError(
            f"vertex enumeration needs (m-1)*n = {(m - 1) * n} bits, cap is "
            f"{budget_bits}; use ascent_lower"
        )

    best = {"score": -np.inf, "cert": None}

    def search(P: np.ndarray, outer: list[np.ndarray]):
        if P.ndim == 2:
            score, x, v = _best_last_two(P)
            if score > best["score"]:
                cert = [o.copy() for o in outer] + [x, _signs_zero_plus(v)]
                best["score"] = score
                best["cert"] = cert
            return
        x = np.ones(n)
        Q = P.sum(axis=0)
        search(Q, outer + [x])
        for pos in _gray_flip_positions(n - 1):
            i = pos + 1
            x[i] = -x[i]
            Q += (2.0 * x[i]) * P[i]
            search(Q, outer + [x])

    search(t.entries, [])
    cert = tuple(best["cert"])
    # refresh from the certificate: the incremental updates carry no drift on
    # integer data but may on general floats
    val = abs(evaluate_form(t, cert))
    return NormEstimate(val, val, True, cert)


def ascent_lower(t: CoefTensor, restarts: int = 32, seed: int = 0) -> NormEstimate:
    """Alternating-maximization lower bound from seeded random starts.

    Each sweep replaces every argument by the maximizer of the form with the
    others held fixed, so the objective never decreases; the best point over
    all restarts is returned.  Deterministic for a fixed seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be positive")
    m, n = t.m, t.n
    complex_field = t.field == COMPLEX
    rng = np.random.default_rng(seed)
    best_val = -1.0
    best_xs: list[np.ndarray] | None = None

    for _ in range(restarts):
        if complex_field:
            xs = [np.exp(2j * np.pi * rng.random(n)) for _ in range(m)]
        else:
            xs = [1.0 - 2.0 * rng.integers(0, 2, n).astype(np.float64) for _ in range(m)]
        prev = -1.0
        for _ in range(_MAX_SWEEPS):
            for a in range(m):
                v = _partial_contraction(t.entries, xs, a)
                xs[a] = _phases_zero_one(v) if complex_field else _signs_zero_plus(v)
            val = abs(evaluate_form(t, xs))
            if val <= prev * (1.0 + 1e-13) + 1e-15:
                break
            prev = val
        val = abs(evaluate_form(t, xs))
        if val > best_val:
            best_val, best_xs = val, [x.copy() for x in xs]

    assert best_xs is not None
    return NormEstimate(best_val, None, False, tuple(best_xs))


def _partial_contraction(entries: np.ndarray, xs: Sequence[np.ndarray], skip: int) -> np.ndarray:
    """Contract all arguments except `skip`; returns the length-n gradient vector."""
    work = entries
    for b in range(skip):
        work = np.tensordot(xs[b], work, axes=(0, 0))
    for b in range(skip + 1, len(xs)):
        work = np.tensordot(work, xs[b], axes=(1, 0))
    return work


def bilinear_upper(t: CoefTensor) -> float:
    """n * sigma_max upper bound for real bilinear forms.

    Valid because the vertex maximum of ||A^T x||_1 is at most
    sqrt(n) * sigma_max * ||x||_2 = n * sigma_max.
    """
    if t.m != 2:
        raise ValueError(f"spectral upper bound needs a bilinear form, got arity {t.m}")
    if t.field != REAL:
        raise ValueError("spectral upper bound is real-only")
    sigma = float(np.linalg.svd(t.entries, compute_uv=False)[0])
    return t.n * sigma
