"""
Finite-difference gradient verification.
"""

from typing import Callable, Tuple

import numpy as np
import numpy.typing as npt

LossFn = Callable[[npt.NDArray[np.float64]], Tuple[float, npt.NDArray[np.float64]]]

REL_FLOOR = 1e-3


def grad_check(fn: LossFn, x: npt.ArrayLike, h: float = 1e-5) -> float:
    """Max relative deviation between analytic and central-difference gradients.

    ``fn`` returns (loss, grad) with grad shaped like ``x``. The relative
    error of each entry is |num - ana| / max(|num|, |ana|, 1e-3).
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    x0 = np.array(x, dtype=np.float64)
    _, analytic = fn(x0.copy())
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.zeros_like(x0)
    flat = x0.reshape(-1)
    for k in range(flat.size):
        plus, minus = flat.copy(), flat.copy()
        plus[k] += h
        minus[k] -= h
        f_plus, _ = fn(plus.reshape(x0.shape))
        f_minus, _ = fn(minus.reshape(x0.shape))
        numeric.reshape(-1)[k] = (f_plus - f_minus) / (2.0 * h)
    scale = np.maximum(np.maximum(np.abs(numeric), np.abs(analytic)), REL_FLOOR)
    return float(np.max(np.abs(numeric - analytic) / scale))
