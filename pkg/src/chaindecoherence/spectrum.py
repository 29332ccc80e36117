"""Quasiparticle spectrum of the qubit-dressed chain Hamiltonians.

Each of the four computational basis states of the central qubits shifts the
chain's transverse field to a dressed value. For every mode pair (k, -k),
k = 1..M, this module returns the Bogoliubov angle, the single-particle
energy, the mode energy including the three-site shift, and the half-angle
between dressed and undressed ground states.
"""

from dataclasses import dataclass
from enum import IntEnum
import math

import numpy as np

from chaindecoherence.exceptions import ConfigError, DegenerateModeError

# components of the Bogoliubov vector below this are treated as exactly zero
DEGENERATE_ATOL = 1e-14


@dataclass(frozen=True)
class ChainParams:
    """Environment chain: ``n_sites`` spins, transverse field ``lam``,
    anisotropy ``gamma`` and three-site coupling ``alpha``."""

    n_sites: int
    lam: float
    gamma: float
    alpha: float = 0.0

    def __post_init__(self):
        if isinstance(self.n_sites, bool) or int(self.n_sites) != self.n_sites:
            raise ConfigError(f"n_sites must be an integer, got {self.n_sites!r}", "n_sites")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        if self.n_sites < 3:
            raise ConfigError(f"n_sites must be >= 3, got {self.n_sites}", "n_sites")
        for name in ("lam", "gamma", "alpha"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}", name)
            object.__setattr__(self, name, float(value))

    @property
    def n_modes(self):
        """Number of (k, -k) pairs. Unpaired k=0 (and k=N/2 for even N) are dropped."""
        return (self.n_sites - 1) // 2

    def with_(self, **changes):
        fields = {"n_sites": self.n_sites, "lam": self.lam, "gamma": self.gamma, "alpha": self.alpha}
        fields.update(changes)
        return ChainParams(**fields)


@dataclass(frozen=True)
class CouplingParams:
    """Qubit-chain coupling strength ``g`` and asymmetry ``delta``
    (``delta=1``: only qubit A couples; ``delta=0``: equal coupling).

    Physical runs use ``g >= 0``; a negative ``g`` is accepted because it is
    the same as relabelling the basis states 1<->4.
    """

    g: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("g", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}", name)
            object.__setattr__(self, name, float(value))
        if not -1.0 <= self.delta <= 1.0:
            raise ConfigError(f"delta must lie in [-1, 1], got {self.delta}", "delta")


class DressedIndex(IntEnum):
    """Computational basis state |00>, |01>, |10>, |11> of the central qubits."""

    ONE = 1
    TWO = 2
    THREE = 3
    FOUR = 4

    @property
    def partner(self):
        """Index reached by flipping the sign of the field shift (1<->4, 2<->3)."""
        return DressedIndex(5 - int(self))


def dressed_field(chain, coupling, mu):
    """Field seen by the chain when the qubits sit in basis state ``mu``."""
    mu = DressedIndex(mu)
    shift = {
        DressedIndex.ONE: coupling.g,
        DressedIndex.TWO: coupling.g * coupling.delta,
        DressedIndex.THREE: -coupling.g * coupling.delta,
        DressedIndex.FOUR: -coupling.g,
    }[mu]
    return chain.lam + shift


def _momentum(k, chain):
    k = np.asarray(k)
    if np.any(k < 1) or np.any(k > chain.n_modes):
        raise ConfigError(f"mode index must lie in [1, {chain.n_modes}]", "k")
    return 2.0 * np.pi * k / chain.n_sites


def _bogoliubov_vector(k, field, chain):
    q = _momentum(k, chain)
    return field - np.cos(q), chain.gamma * np.sin(q)


def bogoliubov_angle(k, field, chain):
    """Two-argument angle of (field - cos q, gamma sin q), q = 2 pi k / N.

    Using ``arctan2`` rather than the one-argument arctangent keeps the angle
    continuous through field = cos q, so the paired-vacuum amplitudes do not
    jump across the band edge.

    Raises
    ------
    DegenerateModeError
        If both components vanish. Shifting the field by ~1e-12 avoids it.
    """
    x, y = _bogoliubov_vector(k, field, chain)
    degenerate = (np.abs(x) <= DEGENERATE_ATOL) & (np.abs(y) <= DEGENERATE_ATOL)
    if np.any(degenerate):
        bad = np.atleast_1d(np.asarray(k))[np.atleast_1d(degenerate)]
        raise DegenerateModeError(f"Bogoliubov angle undefined for field={field!r}, k={bad.tolist()}")
    angle = np.arctan2(y, x)
    return float(angle) if np.ndim(angle) == 0 else angle


def single_particle_energy(k, field, chain):
    x, y = _bogoliubov_vector(k, field, chain)
    eps = np.hypot(x, y)
    return float(eps) if np.ndim(eps) == 0 else eps


def mode_energy(k, field, chain):
    """2 (eps_k + alpha sin(4 pi k / N)). Negative for large enough |alpha|;
    returned as-is and flagged downstream."""
    eps = single_particle_energy(k, field, chain)
    lam_k = 2.0 * (eps + chain.alpha * np.sin(2.0 * _momentum(k, chain)))
    return float(lam_k) if np.ndim(lam_k) == 0 else lam_k


def relative_angle(k, mu, chain, coupling):
    """Half the rotation between the undressed and the ``mu``-dressed vacuum of mode k."""
    dressed = bogoliubov_angle(k, dressed_field(chain, coupling, mu), chain)
    bare = bogoliubov_angle(k, chain.lam, chain)
    return (dressed - bare) / 2.0


@dataclass(frozen=True)
class ModeData:
    """Per-mode quantities for all k = 1..M.

    Arrays indexed ``[mu - 1, k - 1]`` carry the dressed quantities; the
    undressed angle ``theta_lambda`` is indexed by ``k - 1`` only.
    """

    k: np.ndarray
    theta_lambda: np.ndarray
    theta_mu: np.ndarray
    epsilon_mu: np.ndarray
    Lambda_mu: np.ndarray
    Theta_mu: np.ndarray

    @property
    def negative_energy_count(self):
        """Number of (mu, k) entries with Lambda < 0, where the paired vacuum is not the ground state."""
        return int(np.count_nonzero(self.Lambda_mu < 0))

    def for_index(self, mu):
        i = int(DressedIndex(mu)) - 1
        return self.Theta_mu[i], self.Lambda_mu[i]


def mode_data(chain, coupling):
    k = np.arange(1, chain.n_modes + 1)
    theta_lambda = bogoliubov_angle(k, chain.lam, chain)
    fields = [dressed_field(chain, coupling, mu) for mu in DressedIndex]
    theta_mu = np.stack([bogoliubov_angle(k, f, chain) for f in fields])
    epsilon_mu = np.stack([single_particle_energy(k, f, chain) for f in fields])
    three_site = chain.alpha * np.sin(2.0 * _momentum(k, chain))
    Lambda_mu = 2.0 * (epsilon_mu + three_site)
    Theta_mu = (theta_mu - theta_lambda) / 2.0
    return ModeData(k, theta_lambda, theta_mu, epsilon_mu, Lambda_mu, Theta_mu)
