"""Modulus of the decoherence factor F_{mu nu}(t) and its approximations.

``decoherence_factor`` evaluates the closed-form product over mode pairs.
``mode_overlap_oracle`` rebuilds each factor from explicit 2x2 unitaries on
the (|0_k 0_-k>, |1_k 1_-k>) pair subspace; the two must agree to rounding.
The Gaussian and oscillatory approximations are diagnostics only.
"""

from dataclasses import dataclass
import math

import numpy as np

from chaindecoherence.exceptions import ConfigError, ConsistencyError
from chaindecoherence.spectrum import ChainParams, CouplingParams, DressedIndex, mode_data

# per-mode overlaps outside [0, 1] by less than this are rounding noise
BRACKET_ATOL = 1e-10
# switch the product to a sum of logs below this factor size
UNDERFLOW_GUARD = 1e-300
# cap on time-points x modes handled per vectorized block
_BLOCK = 1 << 20


@dataclass(frozen=True)
class DecoherenceConfig:
    chain: ChainParams
    coupling: CouplingParams
    mu: DressedIndex = DressedIndex.ONE
    nu: DressedIndex = DressedIndex.FOUR

    def __post_init__(self):
        object.__setattr__(self, "mu", DressedIndex(self.mu))
        object.__setattr__(self, "nu", DressedIndex(self.nu))


def _check_times(t):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0):
        raise ConfigError("times must be finite and >= 0", "t")
    return t


def mode_brackets(Theta_mu, Lambda_mu, Theta_nu, Lambda_nu, t):
    """Squared per-mode overlaps, shape ``t.shape + (M,)``, before clamping."""
    t = np.asarray(t, dtype=float)[..., None]
    s_mu = np.sin(2.0 * Theta_mu)
    s_nu = np.sin(2.0 * Theta_nu)
    a_mu = Lambda_mu * t
    a_nu = Lambda_nu * t
    sin_mu = np.sin(a_mu)
    sin_nu = np.sin(a_nu)
    return (
        1.0
        - s_mu**2 * sin_mu**2
        - s_nu**2 * sin_nu**2
        + 2.0 * s_mu * s_nu * sin_mu * sin_nu * np.cos(a_mu - a_nu)
        - 4.0 * s_mu * s_nu * np.sin(Theta_mu - Theta_nu) ** 2 * sin_mu**2 * sin_nu**2
    )


def _clamp(brackets):
    low = brackets.min(initial=0.0)
    high = brackets.max(initial=1.0)
    if low < -BRACKET_ATOL or high > 1.0 + BRACKET_ATOL:
        raise ConsistencyError(f"per-mode overlap outside [0, 1]: min={low:.3e}, max={high:.3e}")
    return np.clip(brackets, 0.0, 1.0)


def _product(factors):
    # ascending-k order along the last axis
    out = np.prod(factors, axis=-1)
    tiny = factors.min(axis=-1, initial=1.0) < UNDERFLOW_GUARD
    if np.any(tiny):
        with np.errstate(divide="ignore"):
            out[tiny] = np.exp(np.sum(np.log(factors[tiny]), axis=-1))
    return out


def factor_from_modes(Theta_mu, Lambda_mu, Theta_nu, Lambda_nu, t):
    """|F(t)| from precomputed per-mode angles and energies (vectorized over t)."""
    t = _check_times(t)
    flat = np.atleast_1d(t).ravel()
    n_modes = max(np.size(Theta_mu), 1)
    step = max(1, _BLOCK // n_modes)
    out = np.empty(flat.shape)
    for start in range(0, flat.size, step):
        block = flat[start:start + step]
        brackets = _clamp(mode_brackets(Theta_mu, Lambda_mu, Theta_nu, Lambda_nu, block))
        out[start:start + step] = _product(np.sqrt(brackets))
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def decoherence_factor(cfg, t, modes=None):
    """|F_{mu nu}(t)| for scalar or array ``t``.

    The pair is put in canonical order first, so swapping ``mu`` and ``nu``
    returns bit-identical results.

    Parameters
    ----------
    cfg : DecoherenceConfig
    t : float or array_like
        Non-negative times.
    modes : ModeData, optional
        Precomputed ``mode_data(cfg.chain, cfg.coupling)``.
    """
    if modes is None:
        modes = mode_data(cfg.chain, cfg.coupling)
    mu, nu = sorted((cfg.mu, cfg.nu))
    if mu == nu:
        t = _check_times(t)
        return 1.0 if t.ndim == 0 else np.ones(t.shape)
    return factor_from_modes(*modes.for_index(mu), *modes.for_index(nu), t)


def _pair_unitaries(Theta, Lambda, t):
    """U = R(Theta) diag(e^{i Lambda t}, e^{-i Lambda t}) R(Theta)^dagger, shape (T, M, 2, 2)."""
    c, s = np.cos(Theta), np.sin(Theta)
    rot = np.empty(Theta.shape + (2, 2), dtype=complex)
    rot[..., 0, 0] = c
    rot[..., 0, 1] = 1j * s
    rot[..., 1, 0] = 1j * s
    rot[..., 1, 1] = c
    phase = np.exp(1j * Lambda * t[:, None])
    diag = np.zeros(phase.shape + (2, 2), dtype=complex)
    diag[..., 0, 0] = phase
    diag[..., 1, 1] = phase.conj()
    rot_dag = np.conj(np.swapaxes(rot, -1, -2))
    return rot @ diag @ rot_dag


def mode_overlap_oracle(cfg, t):
    """Independent check of :func:`decoherence_factor` via explicit 2x2 evolutions.

    For each mode the undressed vacuum is the vector (1, 0); the result is
    prod_k |<(1,0)| U_nu^dagger U_mu |(1,0)>|.
    """
    t = _check_times(t)
    modes = mode_data(cfg.chain, cfg.coupling)
    Theta_mu, Lambda_mu = modes.for_index(cfg.mu)
    Theta_nu, Lambda_nu = modes.for_index(cfg.nu)
    flat = np.atleast_1d(t).ravel()
    u_mu = _pair_unitaries(Theta_mu, Lambda_mu, flat)
    u_nu = _pair_unitaries(Theta_nu, Lambda_nu, flat)
    # <e0| U_nu^dagger U_mu |e0> = sum_j conj(U_nu[j, 0]) U_mu[j, 0]
    amplitude = np.einsum("tkj,tkj->tk", u_nu[..., :, 0].conj(), u_mu[..., :, 0])
    out = np.prod(np.abs(amplitude), axis=-1)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


@dataclass(frozen=True)
class GaussianApproxParams:
    """Rates of the short-time Gaussian decay |F_14| ~ exp(-(tau1 + tau2 + tau3) t^2)."""

    tau1: float
    tau2: float
    tau3: float
    cutoff: int
    length: float

    @property
    def rate(self):
        return self.tau1 + self.tau2 + self.tau3

    @property
    def nonnegative(self):
        return self.rate >= 0


def _power_sums(cutoff, length):
    k = np.arange(1, cutoff + 1, dtype=float) / length
    return float(np.sum(k**2)), float(np.sum(k**3)), float(np.sum(k**4))


def gaussian_approx_params(chain, coupling, cutoff=None, length=None):
    if chain.lam == 1.0:
        raise ConfigError("Gaussian approximation diverges at lam = 1", "lam")
    cutoff = chain.n_modes if cutoff is None else int(cutoff)
    length = float(chain.n_sites if length is None else length)
    if cutoff < 1 or length <= 0:
        raise ConfigError("cutoff must be >= 1 and length > 0", "cutoff")
    s2, s3, s4 = _power_sums(cutoff, length)
    pref = chain.gamma**2 / (chain.lam - 1.0) ** 2
    g, a = coupling.g, chain.alpha
    return GaussianApproxParams(
        tau1=32 * math.pi**2 * pref * g**2 * s2,
        tau2=256 * math.pi**3 * pref * g * a * s3,
        tau3=512 * math.pi**4 * pref * a**2 * s4,
        cutoff=cutoff,
        length=length,
    )


def gaussian_approx_factor(chain, coupling, t, cutoff=None, length=None):
    """Weak-coupling, large-N estimate exp(-(tau1 + tau2 + tau3) t^2).

    Defaults: ``cutoff = M`` and ``length = N``. A negative total rate (which
    the quadratic in alpha cannot produce for real inputs but may after
    rounding) gives values above 1; check ``gaussian_approx_params(...).nonnegative``.
    """
    t = _check_times(t)
    p = gaussian_approx_params(chain, coupling, cutoff, length)
    out = np.exp(-p.rate * t**2)
    return float(out) if out.ndim == 0 else out


def gaussian_vertex_alpha(coupling, n_sites, cutoff=None, length=None):
    """alpha minimising the Gaussian decay rate: -(g / 4 pi) sum(k/L)^3 / sum(k/L)^4."""
    cutoff = (n_sites - 1) // 2 if cutoff is None else int(cutoff)
    length = float(n_sites if length is None else length)
    _, s3, s4 = _power_sums(cutoff, length)
    return -(coupling.g / (4.0 * math.pi)) * s3 / s4


def oscillatory_approx_factor(chain, coupling, t, cutoff=None):
    """Zero-field estimate prod_k exp(-|d_k| sin^2(2 varpi_k t)).

    ``d_k`` is the k-th summand of the decay amplitude and
    ``varpi_k = 1 + 4 alpha pi k / N``. The magnitude is used because the
    amplitude as written is negative, which would push |F| above 1.
    """
    g = coupling.g
    if abs(g) == 1.0:
        raise ConfigError("oscillatory approximation diverges at g = +-1", "g")
    t = _check_times(t)
    cutoff = chain.n_modes if cutoff is None else int(cutoff)
    if cutoff < 1:
        raise ConfigError("cutoff must be >= 1", "cutoff")
    n = chain.n_sites
    k = np.arange(1, cutoff + 1, dtype=float)
    d_k = np.abs(-8 * math.pi**2 * chain.gamma**2 * g**4 / (n**2 * (g - 1) ** 2 * (g + 1) ** 2) * k**2)
    varpi = 1.0 + 4.0 * chain.alpha * math.pi * k / n
    tt = np.atleast_1d(t).ravel()[:, None]
    exponent = np.sum(d_k * np.sin(2.0 * varpi * tt) ** 2, axis=-1)
    out = np.exp(-exponent)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)
