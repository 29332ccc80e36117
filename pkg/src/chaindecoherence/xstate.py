"""Evolved two-qubit X state.

The diagonal of the reduced density matrix does not change under pure
dephasing; only the anti-diagonal coherences G = (c1 - c2) F14 and
W = (c1 + c2) F23 shrink. Their phases are removable by local z rotations,
so only magnitudes are stored.

Fields may be scalars or equally shaped numpy arrays (a batch of states).
"""

from dataclasses import dataclass
import math

import numpy as np

from chaindecoherence.exceptions import ConfigError, PositivityError

POSITIVITY_ATOL = 1e-12


@dataclass(frozen=True)
class BellDiagonalCoeffs:
    """Initial state (I + sum_m c_m sigma_m x sigma_m) / 4 with real c_m."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}", name)
            object.__setattr__(self, name, float(value))
        weights = self.bell_weights()
        if min(weights) < -POSITIVITY_ATOL:
            raise ConfigError(
                f"coefficients ({self.c1}, {self.c2}, {self.c3}) do not give a positive state; "
                f"Bell weights {weights}",
                "c1",
            )

    def bell_weights(self):
        c1, c2, c3 = self.c1, self.c2, self.c3
        return (
            (1 - c1 - c2 - c3) / 4,
            (1 - c1 + c2 + c3) / 4,
            (1 + c1 - c2 + c3) / 4,
            (1 + c1 + c2 - c3) / 4,
        )

    @classmethod
    def from_bell_weights(cls, weights):
        """Inverse of :meth:`bell_weights`; ``weights`` must sum to 1."""
        pa, pb, pc, pd = weights
        return cls(pc + pd - pa - pb, pb + pd - pa - pc, pb + pc - pa - pd)

    @classmethod
    def bell(cls):
        """(|00> + |11>) / sqrt(2)."""
        return cls(1.0, -1.0, 1.0)


@dataclass(frozen=True)
class XState:
    c3: float
    absG: float
    absW: float

    def __post_init__(self):
        c3, g, w = (np.asarray(v, dtype=float) for v in (self.c3, self.absG, self.absW))
        if np.any(g < 0) or np.any(w < 0):
            raise ConfigError("absG and absW must be >= 0", "absG")
        if np.any(g > 1 + c3 + POSITIVITY_ATOL) or np.any(w > 1 - c3 + POSITIVITY_ATOL):
            raise PositivityError(f"coherences exceed the diagonal: c3={self.c3}, |G|={self.absG}, |W|={self.absW}")


@dataclass(frozen=True)
class XStateSpectrum:
    omega1: float
    omega2: float
    omega3: float
    omega4: float

    def as_array(self):
        return np.stack(np.broadcast_arrays(self.omega1, self.omega2, self.omega3, self.omega4))


def _scaled(coef, factor, name):
    factor = np.asarray(factor, dtype=float)
    if np.any(factor < 0) or np.any(factor > 1):
        raise ConfigError(f"{name} must lie in [0, 1]", name)
    out = coef * factor
    return float(out) if out.ndim == 0 else out


def evolve_state(c, absF14, absF23):
    """State at the time where the decoherence factors have moduli ``absF14``, ``absF23``."""
    return XState(
        c3=c.c3,
        absG=_scaled(abs(c.c1 - c.c2), absF14, "absF14"),
        absW=_scaled(abs(c.c1 + c.c2), absF23, "absF23"),
    )


def spectrum(s):
    """Eigenvalues of the X-state density matrix.

    Raises
    ------
    PositivityError
        If any eigenvalue is below ``-1e-12``.
    """
    out = XStateSpectrum(
        omega1=(1 - s.c3 + s.absW) / 4,
        omega2=(1 - s.c3 - s.absW) / 4,
        omega3=(1 + s.c3 + s.absG) / 4,
        omega4=(1 + s.c3 - s.absG) / 4,
    )
    worst = np.min(out.as_array())
    if worst < -POSITIVITY_ATOL:
        raise PositivityError(f"negative eigenvalue {worst:.3e}")
    return out


def density_matrix(s):
    """Dense 4x4 matrix in the |00>, |01>, |10>, |11> basis with real G, W >= 0."""
    c3, g, w = (np.asarray(v, dtype=float) for v in (s.c3, s.absG, s.absW))
    c3, g, w = np.broadcast_arrays(c3, g, w)
    rho = np.zeros(c3.shape + (4, 4))
    rho[..., 0, 0] = rho[..., 3, 3] = 1 + c3
    rho[..., 1, 1] = rho[..., 2, 2] = 1 - c3
    rho[..., 0, 3] = rho[..., 3, 0] = g
    rho[..., 1, 2] = rho[..., 2, 1] = w
    return rho / 4
