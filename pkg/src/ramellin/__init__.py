"""Mellin transforms of alternating exponential-type series and their closed forms."""
from .mellin import MellinEvaluation, QuadratureConfig, mellin_transform, mellin_transform_shifted
from .series import Binomial, HurwitzOdd, Parity, Power, SeriesKernel, Strategy, Zeta, eval_kernel
from .specfun import EvalResult, Flag

__all__ = [
    "Binomial", "EvalResult", "Flag", "HurwitzOdd", "MellinEvaluation", "Parity", "Power",
    "QuadratureConfig", "SeriesKernel", "Strategy", "Zeta", "eval_kernel", "mellin_transform",
    "mellin_transform_shifted",
]
__version__ = "0.1.0"
