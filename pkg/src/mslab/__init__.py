"""Numerical laboratory for reproducing kernels in model spaces and Paley-Wiener spaces."""

from .exceptions import MslabError
from .inner import InnerFunction, blaschke_delta, eval_blaschke_factor, eval_inner
from .kernels import KernelSpec, eval_kernel, kernel_norm
from .geometry import PointSequence, gram_model, spectral_summary
from .paley_wiener import PWSequenceSpec, pw_gram
from .interpolation import ExponentTriple, InterpolationProblem, interpolate

__version__ = "0.1.0"

__all__ = [
    "MslabError", "InnerFunction", "blaschke_delta", "eval_blaschke_factor", "eval_inner",
    "KernelSpec", "eval_kernel", "kernel_norm", "PointSequence", "gram_model",
    "spectral_summary", "PWSequenceSpec", "pw_gram", "ExponentTriple",
    "InterpolationProblem", "interpolate", "__version__",
]
