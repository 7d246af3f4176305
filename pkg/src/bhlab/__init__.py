"""Desk-scale laboratory for mixed-norm inequalities of multilinear forms.

Decides which exponent tuples admit a norm inequality of Bohnenblust-Hille
type, computes the two sides (nested mixed lq norms and sup-norm operator
norms) on finite sections, generates the random sign counterexamples that
separate the two, and runs growth-rate experiments tying the observed
slope to the predicted deficit.
"""

from .errors import CapacityError, NormOverflowError
from .exponents import (
    AdmissibilityReport,
    ExponentTuple,
    classical_bh_tuple,
    deficit,
    is_admissible_bruteforce,
    is_admissible_fast,
    reciprocal_sum,
    reduce_min2,
)
from .opnorm import NormEstimate, ascent_lower, bilinear_upper, evaluate_form, exact_real
from .randforms import KszSpec, lift, littlewood_tensor, sample_sign_tensor
from .scaling import (
    ExperimentSpec,
    ScalingResult,
    ScanRow,
    fit_slope,
    run_experiment,
    write_outputs,
)
from .tensor import (
    COMPLEX,
    REAL,
    CoefTensor,
    Partition,
    block_restrict,
    flat_qnorm,
    mixed_norm,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "CapacityError",
    "CoefTensor",
    "COMPLEX",
    "ExperimentSpec",
    "ExponentTuple",
    "KszSpec",
    "NormEstimate",
    "NormOverflowError",
    "Partition",
    "REAL",
    "ScalingResult",
    "ScanRow",
    "ascent_lower",
    "bilinear_upper",
    "block_restrict",
    "classical_bh_tuple",
    "deficit",
    "evaluate_form",
    "exact_real",
    "fit_slope",
    "flat_qnorm",
    "is_admissible_bruteforce",
    "is_admissible_fast",
    "lift",
    "littlewood_tensor",
    "mixed_norm",
    "reciprocal_sum",
    "reduce_min2",
    "run_experiment",
    "sample_sign_tensor",
    "write_outputs",
]
