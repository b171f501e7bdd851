"""Exact computational additive combinatorics over F_2^n.

Certified machinery for sets with small doubling: exact sumsets and
Walsh-Hadamard spectra, density-increment searches that produce a subspace
inside the four-fold sumset, order-preserving linear models, coset pullback,
and covering — every inequality the theory promises is asserted on exact
integers at runtime, and classical size bounds are reported as monitored
yardsticks.
"""

from .core import (
    DEFAULT_DENSE_LIMIT,
    HARD_DENSE_CAP,
    Coset,
    DenseSet,
    Embedding,
    Point,
    PointSet,
    Subspace,
    affine_span,
    compress,
    decompress,
    doubling_constant,
    hyperplane_restrict,
    is_subspace,
    iterated_sumset,
    rref_basis,
    sumset,
    translate,
)
from .covering import CoverReport, chang_cover, minimal_coset_oracle, ruzsa_cover
from .errors import (
    DimensionMismatchError,
    EmptySetError,
    F2Error,
    InstanceTooLargeError,
    InvariantViolationError,
    SetFileError,
)
from .generators import gen_extremal, gen_random, gen_subspace
from .kernels import BACKEND, warmup
from .model import Model, find_model, is_freiman_iso_linear, pullback_coset
from .pipeline import PipelineReport, analyze_set, run_batch, run_pipeline
from .selfcheck import selftest
from .setfile import format_set, read_set, read_set_text, write_set
from .spectral import (
    Spectrum,
    conv4_support,
    fourier_indicator,
    fwht,
    large_spectrum,
    large_spectrum_pow32,
    max_nontrivial,
)
from .structure import (
    FullSpace,
    Increment,
    PairIncrement,
    PairTerminal,
    StepRecord,
    StructureResult,
    doubling_codim_budget,
    doubling_subspace,
    pair_increment_step,
    pure_codim_budget,
    pure_density_subspace,
    pure_increment_step,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DENSE_LIMIT",
    "HARD_DENSE_CAP",
    "BACKEND",
    "Point",
    "PointSet",
    "DenseSet",
    "Subspace",
    "Coset",
    "Embedding",
    "Spectrum",
    "Model",
    "FullSpace",
    "Increment",
    "PairIncrement",
    "PairTerminal",
    "StepRecord",
    "StructureResult",
    "CoverReport",
    "PipelineReport",
    "F2Error",
    "DimensionMismatchError",
    "EmptySetError",
    "InstanceTooLargeError",
    "InvariantViolationError",
    "SetFileError",
    "affine_span",
    "analyze_set",
    "chang_cover",
    "compress",
    "conv4_support",
    "decompress",
    "doubling_codim_budget",
    "doubling_constant",
    "doubling_subspace",
    "find_model",
    "format_set",
    "fourier_indicator",
    "fwht",
    "gen_extremal",
    "gen_random",
    "gen_subspace",
    "hyperplane_restrict",
    "is_freiman_iso_linear",
    "is_subspace",
    "iterated_sumset",
    "large_spectrum",
    "large_spectrum_pow32",
    "max_nontrivial",
    "minimal_coset_oracle",
    "pair_increment_step",
    "pullback_coset",
    "pure_codim_budget",
    "pure_density_subspace",
    "pure_increment_step",
    "read_set",
    "read_set_text",
    "rref_basis",
    "ruzsa_cover",
    "run_batch",
    "run_pipeline",
    "selftest",
    "sumset",
    "translate",
    "warmup",
    "write_set",
    "__version__",
]
