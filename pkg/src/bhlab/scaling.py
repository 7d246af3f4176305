"""Growth-rate experiments: mixed norm over operator norm across sides n.

For a family of m-linear forms the ratio

    R(n) = mixed_norm(block_restrict(T_n, partition), q) / |T_n|

stays bounded in n exactly when q is admissible; otherwise it grows like
n^{max_deficit}.  An experiment sweeps a grid of sides, computes the ratio
per (n, seed) cell, fits the slope of log R against log n, and reports the
fitted slope next to the predicted one (max(0, max_deficit)).

Verdicts are trend statements with explicit thresholds, not proofs: growing
needs slope - 2*stderr > 0.1, bounded needs slope + 2*stderr <= 0.1.  A
predicted slope inside (0, 0.1] is undecidable at desk scale by
construction (the growth is below the cut), so such runs never report
"bounded"; they stay inconclusive and show both slopes.

Families:
  ksz         random sign m-tensor per (n, seed)
  ksz_lifted  random sign tensor of arity `lift_base` padded to arity m
  littlewood  the fixed 2x2 sign matrix (side 2 only, deterministic)
  file        a tensor loaded from `source` (single side, deterministic)

Outputs: CSV rows (family,k,m,n,seed,mixed_norm,norm_lower,norm_upper,
ratio_lo,ratio_hi) and a JSON summary with the fit and verdict.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from .exponents import ExponentTuple, is_admissible_fast
from .opnorm import ascent_lower, bilinear_upper, exact_real
from .randforms import KszSpec, lift, littlewood_tensor, sample_sign_tensor
from .tensor import CoefTensor, Partition, REAL, block_restrict, mixed_norm

__all__ = [
    "ExperimentSpec",
    "ScanRow",
    "ScalingResult",
    "run_experiment",
    "fit_slope",
    "write_outputs",
    "GROWTH_CUT",
    "FAMILIES",
    "NORM_MODES",
]

FAMILIES = ("ksz", "ksz_lifted", "littlewood", "file")
_RANDOM_FAMILIES = ("ksz", "ksz_lifted")
NORM_MODES = ("exact", "sandwich")

# Fitted-slope cut separating "growing" from flat, combined with a 2-sigma rule.
GROWTH_CUT = 0.1

CSV_COLUMNS = (
    "family", "k", "m", "n", "seed",
    "mixed_norm", "norm_lower", "norm_upper", "ratio_lo", "ratio_hi",
)


@dataclass(frozen=True)
class ExperimentSpec:
    """Full description of one scaling experiment; everything downstream is
    a deterministic function of this object."""

    q: ExponentTuple
    partition: Partition
    family: str
    n_grid: tuple[int, ...]
    seeds: tuple[int, ...] = (0,)
    norm_mode: str = "exact"
    lift_base: Union[int, None] = None
    source: Union[str, None] = None
    field: str = REAL
    restarts: int = 32

    def __post_init__(self):
        if not isinstance(self.q, ExponentTuple):
            object.__setattr__(self, "q", ExponentTuple(tuple(self.q)))
        if not isinstance(self.partition, Partition):
            object.__setattr__(self, "partition", Partition(tuple(self.partition)))
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.norm_mode not in NORM_MODES:
            raise ValueError(f"norm_mode must be one of {NORM_MODES}, got {self.norm_mode!r}")
        if self.q.k != self.partition.k:
            raise ValueError(
                f"{self.q.k} exponents vs {self.partition.k} partition blocks"
            )
        if not self.n_grid or list(self.n_grid) != sorted(set(self.n_grid)):
            raise ValueError("n_grid must be nonempty and strictly increasing")
        if any(n < 1 for n in self.n_grid):
            raise ValueError("sides must be positive")
        if self.family in _RANDOM_FAMILIES and not self.seeds:
            raise ValueError("random families need at least one seed")
        if self.family == "ksz_lifted":
            if self.lift_base is None or not 1 <= self.lift_base <= self.m:
                raise ValueError("ksz_lifted needs lift_base in 1..m")
        if self.family == "file" and not self.source:
            raise ValueError("file family needs a source path")
        if self.family == "littlewood":
            if self.m != 2 or any(n != 2 for n in self.n_grid):
                raise ValueError("littlewood family is the fixed 2x2 form: m = 2, n_grid = (2,)")
        if self.norm_mode == "sandwich" and self.m != 2:
            raise ValueError("sandwich norms need m = 2 (no upper bound beyond bilinear)")
        if self.norm_mode == "exact" and self.field != REAL:
            raise ValueError("exact norms are real-only; complex forms have no exact mode")

    @property
    def m(self) -> int:
        return self.partition.m

    def as_dict(self) -> dict:
        return {
            "q": self.q.to_json(),
            "partition": list(self.partition.blocks),
            "family": self.family,
            "n_grid": list(self.n_grid),
            "seeds": list(self.seeds),
            "norm_mode": self.norm_mode,
            "lift_base": self.lift_base,
            "source": self.source,
            "field": self.field,
            "restarts": self.restarts,
        }


@dataclass(frozen=True)
class ScanRow:
    """One (n, seed) cell: mixed norm, norm bracket, and the ratio interval
    [mixed/upper, mixed/lower] that contains the true ratio."""

    family: str
    k: int
    m: int
    n: int
    seed: int
    mixed_norm: float
    norm_lower: float
    norm_upper: float
    ratio_lo: float
    ratio_hi: float


@dataclass(frozen=True)
class ScalingResult:
    spec: ExperimentSpec
    rows: tuple[ScanRow, ...]
    fitted_slope: Union[float, None]
    slope_stderr: Union[float, None]
    r2: Union[float, None]
    predicted_slope: float
    predicted_slope_exact: Union[str, None]
    verdict: str

    def summary(self) -> dict:
        out = self.spec.as_dict()
        out.update(
            rows=len(self.rows),
            fitted_slope=self.fitted_slope,
            slope_stderr=self.slope_stderr,
            r2=self.r2,
            predicted_slope=self.predicted_slope,
            predicted_slope_exact=self.predicted_slope_exact,
            verdict=self.verdict,
        )
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in self.rows:
                w.writerow([getattr(r, c) for c in CSV_COLUMNS])

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def fit_slope(points: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """Ordinary least squares through (x, y) pairs: (slope, stderr, r2).

    Needs >= 3 points over >= 2 distinct abscissae.  Exact power-law data
    comes back with zero stderr and r2 = 1.
    """
    if len(points) < 3:
        raise ValueError(f"slope fit needs >= 3 points, got {len(points)}")
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points]
    n = len(xs)
    xm = math.fsum(xs) / n
    ym = math.fsum(ys) / n
    sxx = math.fsum((x - xm) ** 2 for x in xs)
    if sxx == 0.0:
        raise ValueError("degenerate abscissae: all x equal")
    sxy = math.fsum((x - xm) * (y - ym) for x, y in zip(xs, ys))
    syy = math.fsum((y - ym) ** 2 for y in ys)
    slope = sxy / sxx
    rss = max(0.0, syy - slope * sxy)
    stderr = math.sqrt(rss / (n - 2) / sxx)
    r2 = 1.0 if syy == 0.0 else 1.0 - rss / syy
    return slope, stderr, r2


def _family_tensor(spec: ExperimentSpec, n: int, seed: int) -> CoefTensor:
    if spec.family == "ksz":
        return sample_sign_tensor(KszSpec(k=spec.m, n=n, seed=seed, field=spec.field))
    if spec.family == "ksz_lifted":
        base = sample_sign_tensor(KszSpec(k=spec.lift_base, n=n, seed=seed, field=spec.field))
        return lift(base, spec.m)
    if spec.family == "littlewood":
        return littlewood_tensor(spec.field)
    with open(spec.source) as fh:
        t = CoefTensor.from_dict(json.load(fh))
    if t.m != spec.m or t.n != n:
        raise ValueError(
            f"tensor in {spec.source} has (m, n) = ({t.m}, {t.n}), spec wants ({spec.m}, {n})"
        )
    return t


def _cell(spec: ExperimentSpec, n: int, seed: int) -> ScanRow:
    t = _family_tensor(spec, n, seed)
    restricted = block_restrict(t, spec.partition)
    mixed = mixed_norm(restricted, spec.q)
    if spec.norm_mode == "exact":
        est = exact_real(t)
        lower = upper = est.lower
    else:
        lower = ascent_lower(t, restarts=spec.restarts, seed=seed).lower
        upper = bilinear_upper(t)
    if lower <= 0.0:
        raise ValueError(f"operator norm lower bound is zero at n={n}, seed={seed}; ratio undefined")
    return ScanRow(
        family=spec.family, k=spec.partition.k, m=spec.m, n=n, seed=seed,
        mixed_norm=mixed, norm_lower=lower, norm_upper=upper,
        ratio_lo=mixed / upper, ratio_hi=mixed / lower,
    )


def _verdict(slope: Union[float, None], stderr: Union[float, None], predicted: float) -> str:
    if slope is None:
        return "inconclusive"
    if slope - 2.0 * stderr > GROWTH_CUT:
        return "growing"
    undecidable = 0.0 < predicted <= GROWTH_CUT
    if slope + 2.0 * stderr <= GROWTH_CUT and not undecidable:
        return "bounded"
    return "inconclusive"


def run_experiment(spec: ExperimentSpec, *, threads: int = 1) -> ScalingResult:
    """Execute every (n, seed) cell, fit log-ratio growth, attach a verdict.

    Identical specs produce identical results; cells are independent, so
    `threads` > 1 maps them over a thread pool with deterministic,
    key-sorted aggregation.
    """
    seeds = spec.seeds if spec.family in _RANDOM_FAMILIES else (0,)
    cells = [(n, s) for n in spec.n_grid for s in seeds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda c: _cell(spec, *c), cells))
    else:
        rows = [_cell(spec, n, s) for n, s in cells]
    rows.sort(key=lambda r: (r.n, r.seed))

    report = is_admissible_fast(spec.q)
    predicted = max(0.0, float(report.max_deficit))
    exact = report.max_deficit if isinstance(report.max_deficit, Fraction) else None
    predicted_exact = str(max(Fraction(0), exact)) if exact is not None else None

    slope = stderr = r2 = None
    if len(set(spec.n_grid)) >= 3:
        pts = [(math.log(r.n), math.log(0.5 * (r.ratio_lo + r.ratio_hi))) for r in rows]
        slope, stderr, r2 = fit_slope(pts)

    return ScalingResult(
        spec=spec,
        rows=tuple(rows),
        fitted_slope=slope,
        slope_stderr=stderr,
        r2=r2,
        predicted_slope=predicted,
        predicted_slope_exact=predicted_exact,
        verdict=_verdict(slope, stderr, predicted),
    )


def write_outputs(result: ScalingResult, prefix) -> tuple[Path, Path]:
    """Write `prefix`.csv and `prefix`.json; returns both paths."""
    prefix = Path(prefix)
    if prefix.parent and not prefix.parent.exists():
        prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    result.write_csv(csv_path)
    result.write_json(json_path)
    return csv_path, json_path
