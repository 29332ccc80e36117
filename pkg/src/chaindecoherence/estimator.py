from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

import numpy as np

from chaindecoherence.analysis import COLUMNS, _Trajectory, RunConfig
from chaindecoherence.correlations import correlation_report
from chaindecoherence.spectrum import ChainParams, CouplingParams
from chaindecoherence.xstate import BellDiagonalCoeffs, evolve_state


class DecoherenceModel(TransformerMixin, BaseEstimator):
    """Maps evaluation times to decoherence factors and correlation measures.

    Hyperparameters are the physical parameters of the chain, the coupling
    and the initial state. ``fit`` validates them and caches the mode
    spectrum; ``transform`` takes times of shape (n_samples,) or
    (n_samples, 1) and returns the columns ``f14, f23, mutual_info,
    classical, discord, concurrence, eof``.

    Examples
    --------
    >>> import numpy as np
    >>> model = DecoherenceModel(n_sites=101, lam=1.0, gamma=1.0, g=0.05).fit()
    >>> model.transform(np.array([0.0]))[0, 0]
    1.0
    """

    def __init__(self, n_sites=400, lam=1.0, gamma=1.0, alpha=0.0, g=0.05, delta=0.0,
                 c1=1.0, c2=-1.0, c3=1.0):
        self.n_sites = n_sites
        self.lam = lam
        self.gamma = gamma
        self.alpha = alpha
        self.g = g
        self.delta = delta
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3

    def _run_config(self):
        return RunConfig(
            chain=ChainParams(self.n_sites, self.lam, self.gamma, self.alpha),
            coupling=CouplingParams(self.g, self.delta),
            coeffs=BellDiagonalCoeffs(self.c1, self.c2, self.c3),
        )

    def fit(self, X=None, y=None):
        """Validate parameters and precompute per-mode data; ``X`` and ``y`` are ignored."""
        self.config_ = self._run_config()
        self.trajectory_ = _Trajectory(self.config_)
        self.modes_ = self.trajectory_.modes
        self.n_negative_modes_ = self.modes_.negative_energy_count
        self.n_features_in_ = 1
        return self

    def _times(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        X = check_array(X, ensure_2d=True)
        if X.shape[1] != 1:
            raise ValueError(f"expected a single time column, got {X.shape[1]} columns")
        t = X[:, 0]
        if np.any(t < 0):
            raise ValueError("times must be >= 0")
        return t

    def transform(self, X):
        check_is_fitted(self, "modes_")
        t = self._times(X)
        f14, f23 = self.trajectory_.factors(t)
        report = correlation_report(evolve_state(self.config_.coeffs, f14, f23))
        return np.column_stack([
            f14, f23, report.mutual_info, report.classical,
            report.discord, report.concurrence, report.eof,
        ])

    def get_feature_names_out(self, input_features=None):
        return np.array(COLUMNS[1:], dtype=object)
