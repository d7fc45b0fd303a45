"""
Mixing of successive potentials in the fixed-point loop.

Mixers work on flat arrays: the potential on the grid, or both partial
potentials concatenated when self-interaction is off.
"""
import logging
from collections import deque
from typing import Deque, Optional

import numpy as np
from scipy.linalg import lstsq

from ..exceptions import SCFInputError
from ..grid import RadialFunction

logger = logging.getLogger("scfhydrogen")


def mix(phi_old: RadialFunction, phi_new: RadialFunction, alpha: float) -> RadialFunction:
    """
    (1 - alpha) * phi_old + alpha * phi_new.

    Raises:
        SCFInputError: On a grid mismatch or alpha outside (0, 1]
    """
    if not 0.0 < alpha <= 1.0:
        raise SCFInputError(f"mixing must be in (0,1], got {alpha}")
    phi_old.check_same_grid(phi_new)
    if alpha == 1.0:
        return phi_new
    return RadialFunction(phi_old.grid, (1.0 - alpha) * phi_old.values + alpha * phi_new.values)


class LinearMixer:
    """Damped update x_in + alpha (x_out - x_in)."""

    def __init__(self, alpha: float):
        if not 0.0 < alpha <= 1.0:
            raise SCFInputError(f"mixing must be in (0,1], got {alpha}")
        self.alpha = alpha

    def __call__(self, x_in: np.ndarray, x_out: np.ndarray) -> np.ndarray:
        if self.alpha == 1.0:
            return x_out.copy()
        return (1.0 - self.alpha) * x_in + self.alpha * x_out


class AndersonMixer:
    """
    Anderson (Pulay) mixing over a bounded history of inputs and residuals.

    The first call is a plain linear step; later calls combine the stored
    differences through a least-squares fit of the current residual.
    """

    def __init__(self, alpha: float, history: int = 5):
        if not 0.0 < alpha <= 1.0:
            raise SCFInputError(f"mixing must be in (0,1], got {alpha}")
        if history < 1:
            raise SCFInputError(f"anderson history must be at least 1, got {history}")
        self.alpha = alpha
        self.history = history
        self._inputs: Deque[np.ndarray] = deque(maxlen=history + 1)
        self._residuals: Deque[np.ndarray] = deque(maxlen=history + 1)

    def __call__(self, x_in: np.ndarray, x_out: np.ndarray) -> np.ndarray:
        residual = x_out - x_in
        self._inputs.append(x_in.copy())
        self._residuals.append(residual)
        step = x_in + self.alpha * residual
        if len(self._inputs) < 2:
            return step

        inputs = np.array(self._inputs)
        residuals = np.array(self._residuals)
        d_inputs = (inputs[1:] - inputs[:-1]).T
        d_residuals = (residuals[1:] - residuals[:-1]).T
        gamma = self._coefficients(d_residuals, residual)
        if gamma is None:
            return step
        return step - (d_inputs + self.alpha * d_residuals) @ gamma

    def _coefficients(self, d_residuals: np.ndarray, residual: np.ndarray) -> Optional[np.ndarray]:
        try:
            gamma, _, rank, _ = lstsq(d_residuals, residual)
        except (ValueError, np.linalg.LinAlgError) as e:
            logger.warning(f"Anderson least-squares step failed ({e}); falling back to linear mixing")
            self.reset()
            return None
        if rank == 0 or not np.all(np.isfinite(gamma)):
            logger.warning("Anderson history is degenerate; falling back to linear mixing")
            self.reset()
            return None
        return gamma

    def reset(self) -> None:
        self._inputs.clear()
        self._residuals.clear()
