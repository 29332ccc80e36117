"""Correlation measures of an X state, in bits.

Closed forms (mutual information, classical correlation, discord,
concurrence, entanglement of formation) work elementwise on batched
states. ``classical_correlation_sweep`` and ``concurrence_wootters`` are
brute-force references for the closed forms and take one state at a time.
"""

from dataclasses import dataclass
import math

import numpy as np

from chaindecoherence.exceptions import PositivityError
from chaindecoherence.xstate import density_matrix, spectrum

CHI_ATOL = 1e-12


def xlog2x(x):
    """x log2 x with 0 log 0 = 0, elementwise."""
    x = np.asarray(x, dtype=float)
    positive = x > 0
    out = np.zeros_like(x)
    out[positive] = x[positive] * np.log2(x[positive])
    return out


def binary_entropy(x):
    return -xlog2x(x) - xlog2x(1.0 - np.asarray(x, dtype=float))


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class MeasurementAngles:
    """Projective measurement cos(theta)|0> + e^{i phi} sin(theta)|1> on qubit B."""

    theta: float
    phi: float

    def __post_init__(self):
        for name in ("theta", "phi"):
            value = getattr(self, name)
            if not 0.0 <= value <= 2 * math.pi:
                raise ValueError(f"{name} must lie in [0, 2 pi], got {value}")


@dataclass(frozen=True)
class CorrelationReport:
    mutual_info: float
    classical: float
    discord: float
    concurrence: float
    eof: float


def mutual_information(s):
    omega = spectrum(s).as_array()
    return _scalar(2.0 + np.sum(xlog2x(omega), axis=0))


def chi(s):
    """Larger of |c3| and (|W| + |G|) / 2: the optimal measurement's Bloch length."""
    return np.maximum(np.abs(s.c3), (np.asarray(s.absW) + np.asarray(s.absG)) / 2.0)


def classical_correlation(s):
    x = chi(s)
    if np.any(x > 1 + CHI_ATOL):
        raise PositivityError(f"chi = {np.max(x)} exceeds 1")
    x = np.minimum(x, 1.0)
    return _scalar(0.5 * xlog2x(1 + x) + 0.5 * xlog2x(1 - x))


def _conditional_states(c3, G, W, theta, phi):
    """Qubit-A states after outcomes 1 and 2 of the measurement on B, each with probability 1/2."""
    gamma_ = 0.25 * (np.exp(-1j * phi) * W + np.exp(1j * phi) * G) * np.sin(2 * theta)
    diag = 0.5 * c3 * np.cos(2 * theta)
    rho1 = ((0.5 + diag), gamma_, (0.5 - diag))
    rho2 = ((0.5 - diag), -gamma_, (0.5 + diag))
    return rho1, rho2


def _entropy_2x2(a, b, d):
    """von Neumann entropy of [[a, b], [b*, d]] (a, d real)."""
    tr = a + d
    disc = np.sqrt(np.maximum((a - d) ** 2 + 4 * np.abs(b) ** 2, 0.0))
    lo = (tr - disc) / 2
    hi = (tr + disc) / 2
    return -xlog2x(np.maximum(lo, 0.0)) - xlog2x(hi)


def measurement_objective(s, theta, phi):
    """S(rho_A) - sum_j p_j S(rho_A^(j)) for a measurement on qubit B."""
    rho1, rho2 = _conditional_states(s.c3, s.absG, s.absW, np.asarray(theta), np.asarray(phi))
    # rho_A is I/2 for every state of this family
    return 1.0 - 0.5 * _entropy_2x2(*rho1) - 0.5 * _entropy_2x2(*rho2)


def classical_correlation_sweep(s, grid=256, iterations=50, tol=1e-8, return_angles=False):
    """Classical correlation by direct maximization over projective measurements on B.

    Grid search over theta in [0, pi/2], phi in [0, pi] (the objective is
    pi/2-periodic in theta up to reflection and pi-periodic in phi), then
    coordinate refinement with a halving step until the objective moves
    by less than ``tol``.
    """
    if grid < 64:
        raise ValueError("grid must have at least 64 points per angle")
    thetas = np.linspace(0.0, math.pi / 2, grid)
    phis = np.linspace(0.0, math.pi, grid)
    values = measurement_objective(s, thetas[:, None], phis[None, :])
    # argmax returns the first maximum: ties go to smaller theta, then smaller phi
    i, j = np.unravel_index(np.argmax(values), values.shape)
    x = np.array([thetas[i], phis[j]])
    best = float(values[i, j])
    step = np.array([thetas[1] - thetas[0], phis[1] - phis[0]])
    for _ in range(iterations):
        start = best
        for axis in (0, 1):
            for sign in (-1.0, 1.0):
                trial = x.copy()
                trial[axis] += sign * step[axis]
                value = float(measurement_objective(s, trial[0], trial[1]))
                if value > best:
                    best, x = value, trial
        step *= 0.5
        if best - start < tol and np.all(step < 1e-6):
            break
    if return_angles:
        theta, phi = np.mod(x, 2 * math.pi)
        return best, MeasurementAngles(float(theta), float(phi))
    return best


def quantum_discord(s):
    return _scalar(mutual_information(s) - classical_correlation(s))


def concurrence(s):
    c3, g, w = np.asarray(s.c3), np.asarray(s.absG), np.asarray(s.absW)
    return _scalar(np.maximum(0.0, np.maximum((g + c3 - 1) / 2, (w - c3 - 1) / 2)))


_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_SIGMA_YY = np.kron(_SIGMA_Y, _SIGMA_Y).real


def concurrence_wootters(s):
    """Wootters concurrence of the dense 4x4 matrix.

    The square roots of the eigenvalues of rho (Y rho* Y) equal the
    singular values of sqrt(rho) Y sqrt(rho)*, which is how they are
    computed here; it avoids square roots of tiny, noisy eigenvalues of
    a non-Hermitian product.
    """
    rho = density_matrix(s)
    vals, vecs = np.linalg.eigh(rho)
    root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    sv = np.linalg.svd(root @ _SIGMA_YY @ root.conj(), compute_uv=False)
    sv = np.sort(sv)[::-1]
    return max(0.0, float(sv[0] - sv[1] - sv[2] - sv[3]))


def entanglement_of_formation(c):
    """EoF from concurrence ``c``: h((1 + sqrt(1 - c^2)) / 2)."""
    c = np.clip(np.asarray(c, dtype=float), 0.0, 1.0)
    return _scalar(binary_entropy((1 + np.sqrt(1 - c**2)) / 2))


def correlation_report(s):
    info = mutual_information(s)
    classical = classical_correlation(s)
    conc = concurrence(s)
    return CorrelationReport(
        mutual_info=info,
        classical=classical,
        discord=_scalar(np.asarray(info) - np.asarray(classical)),
        concurrence=conc,
        eof=entanglement_of_formation(conc),
    )


def bell_state_discord(absF14):
    """Discord of the dephased Bell state (|00> + |11>)/sqrt(2) as a function of |F14|."""
    f = np.asarray(absF14, dtype=float)
    return _scalar(0.5 * xlog2x(1 - f) + 0.5 * xlog2x(1 + f))


def bell_state_eof(absF14):
    """EoF of the dephased Bell state; the root is sqrt(1 - |F14|^2)."""
    r = np.sqrt(1 - np.asarray(absF14, dtype=float) ** 2)
    return _scalar(1 - 0.5 * xlog2x(1 + r) - 0.5 * xlog2x(1 - r))
