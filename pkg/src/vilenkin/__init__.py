"""Fourier analysis on truncated bounded Vilenkin groups."""
__version__ = "0.1.0"

from .core import (
    CylinderFunction,
    DigitExpansion,
    GroupPoint,
    RadixSystem,
    cell_index,
    compose,
    conditional_expectation,
    expand,
    haar_integrate,
    norm,
    refine,
)
from .errors import VilenkinError
from .kernels import BACKEND, available_backends
from .transform import Spectrum, character, forward, forward_naive, inverse, rademacher
from .operators import (
    dirichlet,
    fejer,
    lebesgue_scan,
    maximal_fejer,
    maximal_partial,
    partial_sum,
    partial_sum_norms,
    strong_mean_gat,
    strong_sum_normalized,
)
from .hardy import Atom, AtomicDecomposition, Interval, h1_proxy_norm, h1_upper_bound, validate_atom
from .counterexample import CounterexampleConfig, PhiFunction, assemble_f, divergence_experiment

__all__ = [
    "__version__", "BACKEND", "available_backends", "VilenkinError",
    "RadixSystem", "DigitExpansion", "GroupPoint", "CylinderFunction",
    "expand", "compose", "cell_index", "haar_integrate", "norm", "refine", "conditional_expectation",
    "Spectrum", "forward", "forward_naive", "inverse", "character", "rademacher",
    "dirichlet", "partial_sum", "fejer", "lebesgue_scan", "maximal_partial", "maximal_fejer",
    "partial_sum_norms", "strong_mean_gat", "strong_sum_normalized",
    "Atom", "AtomicDecomposition", "Interval", "validate_atom", "h1_upper_bound", "h1_proxy_norm",
    "CounterexampleConfig", "PhiFunction", "assemble_f", "divergence_experiment",
]
