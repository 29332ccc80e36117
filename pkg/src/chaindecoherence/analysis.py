"""Time series, parameter sweeps and event detection.

Events (entanglement sudden death, the classical-to-quantum transition) are
located on the sampled time grid and then refined by bisection on a signed
function whose sign change marks the event.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np

from chaindecoherence.correlations import correlation_report
from chaindecoherence.decoherence import factor_from_modes
from chaindecoherence.exceptions import ConfigError, PositivityError
from chaindecoherence.spectrum import ChainParams, CouplingParams, DressedIndex, mode_data
from chaindecoherence.xstate import POSITIVITY_ATOL, BellDiagonalCoeffs, evolve_state

# event bisection stops when the bracket is below this fraction of t_max
EVENT_RTOL = 1e-8
# absolute tolerance for golden-section searches over alpha
GOLDEN_TOL = 1e-6

COLUMNS = ("t", "f14", "f23", "mutual_info", "classical", "discord", "concurrence", "eof")


@dataclass(frozen=True)
class RunConfig:
    chain: ChainParams
    coupling: CouplingParams
    coeffs: BellDiagonalCoeffs
    t_max: float = 20.0
    steps: int = 2000

    def __post_init__(self):
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigError(f"t_max must be > 0, got {self.t_max}", "t_max")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise ConfigError(f"steps must be an integer >= 2, got {self.steps}", "steps")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "t_max", float(self.t_max))

    def times(self):
        return np.linspace(0.0, self.t_max, self.steps)

    def replace(self, **changes):
        """Copy with some fields changed; chain fields (``alpha``, ``gamma``, ...) are accepted too."""
        chain_keys = {"n_sites", "lam", "gamma", "alpha"}
        chain = self.chain.with_(**{k: changes.pop(k) for k in list(changes) if k in chain_keys})
        fields = {"chain": chain, "coupling": self.coupling, "coeffs": self.coeffs,
                  "t_max": self.t_max, "steps": self.steps}
        fields.update(changes)
        return RunConfig(**fields)


@dataclass(frozen=True)
class TimeSeries:
    t: np.ndarray
    f14: np.ndarray
    f23: np.ndarray
    mutual_info: np.ndarray
    classical: np.ndarray
    discord: np.ndarray
    concurrence: np.ndarray
    eof: np.ndarray
    negative_energy_modes: int = 0

    def as_array(self):
        return np.column_stack([getattr(self, c) for c in COLUMNS])

    def __len__(self):
        return len(self.t)


class _Trajectory:
    """Decoherence factors of one configuration, on grids or at single times."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.modes = mode_data(cfg.chain, cfg.coupling)
        self._f14 = (*self.modes.for_index(DressedIndex.ONE), *self.modes.for_index(DressedIndex.FOUR))
        self._f23 = (*self.modes.for_index(DressedIndex.TWO), *self.modes.for_index(DressedIndex.THREE))

    def factors(self, t):
        return factor_from_modes(*self._f14, t), factor_from_modes(*self._f23, t)

    def coherences(self, t):
        c = self.cfg.coeffs
        f14, f23 = self.factors(t)
        return abs(c.c1 - c.c2) * f14, abs(c.c1 + c.c2) * f23


def _check_positivity(c3, absG, absW, t):
    omega = np.stack([1 - c3 + absW, 1 - c3 - absW, 1 + c3 + absG, 1 + c3 - absG]) / 4
    bad = np.flatnonzero(omega.min(axis=0) < -POSITIVITY_ATOL)
    if bad.size:
        i = bad[0]
        raise PositivityError(f"negative eigenvalue {omega[:, i].min():.3e} at t={t[i]!r}", t=float(t[i]))


def time_series(cfg):
    t = cfg.times()
    traj = _Trajectory(cfg)
    f14, f23 = traj.factors(t)
    c = cfg.coeffs
    _check_positivity(c.c3, abs(c.c1 - c.c2) * f14, abs(c.c1 + c.c2) * f23, t)
    report = correlation_report(evolve_state(c, f14, f23))
    return TimeSeries(
        t=t,
        f14=f14,
        f23=f23,
        mutual_info=report.mutual_info,
        classical=report.classical,
        discord=report.discord,
        concurrence=report.concurrence,
        eof=report.eof,
        negative_energy_modes=traj.modes.negative_energy_count,
    )


def _map(fn, items, n_jobs):
    if n_jobs is None or n_jobs == 1:
        return [fn(x) for x in items]
    # map() yields in input order whatever the completion order
    with ThreadPoolExecutor(max_workers=None if n_jobs < 0 else n_jobs) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class AlphaTimeSweep:
    """Columns of :data:`COLUMNS` (minus ``t``) as arrays of shape (n_alpha, steps)."""

    alphas: np.ndarray
    t: np.ndarray
    columns: dict

    def __getitem__(self, name):
        return self.columns[name]

    def rows(self):
        """Row-major table (alpha outer, t inner): alpha, t, f14, ..., eof."""
        a = np.repeat(self.alphas, len(self.t))
        t = np.tile(self.t, len(self.alphas))
        return np.column_stack([a, t] + [self.columns[c].ravel() for c in COLUMNS[1:]])


def sweep_alpha_time(cfg, alpha_range=(-1.0, 1.0), resolution=201, n_jobs=1):
    lo, hi = map(float, alpha_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or resolution < 1:
        raise ConfigError("alpha range must be finite with at least one point", "alpha_range")
    alphas = np.linspace(lo, hi, int(resolution))
    series = _map(lambda a: time_series(cfg.replace(alpha=float(a))), alphas, n_jobs)
    columns = {c: np.stack([getattr(s, c) for s in series]) for c in COLUMNS[1:]}
    return AlphaTimeSweep(alphas=alphas, t=cfg.times(), columns=columns)


@dataclass(frozen=True)
class EventReport:
    """Refined event time. ``t_event`` is None when nothing happens in the window.

    ``crossings`` lists every refined downward crossing on the grid; more
    than one (oscillatory regimes) sets ``multi_crossing``.
    """

    kind: str
    t_event: float | None
    bracket: tuple | None = None
    tolerance: float | None = None
    crossings: tuple = field(default_factory=tuple)

    @property
    def multi_crossing(self):
        return len(self.crossings) > 1

    def as_dict(self):
        return {
            "kind": self.kind,
            "t_event": self.t_event,
            "bracket": list(self.bracket) if self.bracket is not None else None,
            "tolerance": self.tolerance,
            "crossings": list(self.crossings),
            "multi_crossing": self.multi_crossing,
        }


def bisect_down(fn, lo, hi, xtol):
    """Shrink [lo, hi] with fn(lo) > 0 >= fn(hi) until it is narrower than ``xtol``."""
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if fn(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _locate(kind, signed_grid, signed_at, t, t_max):
    xtol = EVENT_RTOL * t_max
    if signed_grid[0] <= 0:
        return EventReport(kind, 0.0, (0.0, 0.0), 0.0, (0.0,))
    down = np.flatnonzero((signed_grid[:-1] > 0) & (signed_grid[1:] <= 0)) + 1
    if down.size == 0:
        return EventReport(kind, None)
    refined = []
    for i in down:
        lo, hi = bisect_down(signed_at, float(t[i - 1]), float(t[i]), xtol)
        refined.append((lo, hi))
    lo, hi = refined[0]
    return EventReport(
        kind,
        0.5 * (lo + hi),
        (lo, hi),
        hi - lo,
        tuple(0.5 * (a + b) for a, b in refined),
    )


def _death_margin(c3, absG, absW):
    return np.maximum((absG + c3 - 1) / 2, (absW - c3 - 1) / 2)


def sudden_death_time(cfg, zero_tol=0.0):
    """First time the concurrence falls to zero.

    Bisection runs on max{(|G| + c3 - 1)/2, (|W| - c3 - 1)/2} - ``zero_tol``,
    whose positive part is the concurrence. ``zero_tol > 0`` treats
    concurrence at or below it as dead, which is needed when it only decays
    asymptotically (a pure Bell state).
    """
    traj = _Trajectory(cfg)
    c3 = cfg.coeffs.c3
    t = cfg.times()
    grid = _death_margin(c3, *traj.coherences(t)) - zero_tol

    def at(x):
        return float(_death_margin(c3, *traj.coherences(x))) - zero_tol

    return _locate("sudden_death", grid, at, t, cfg.t_max)


def _transition_margin(c3, absG, absW):
    return (absW + absG) / 2 - abs(c3)


def transition_time(cfg):
    """Time where the optimal measurement switches from the coherences to c3.

    Before it the discord is frozen and classical correlation decays; after
    it the roles swap. Needs max(|c1|, |c2|) > |c3|, otherwise there is
    nothing to switch from and the report is empty.
    """
    c = cfg.coeffs
    if max(abs(c.c1), abs(c.c2)) <= abs(c.c3):
        return EventReport("transition", None)
    traj = _Trajectory(cfg)
    t = cfg.times()
    grid = _transition_margin(c.c3, *traj.coherences(t))

    def at(x):
        return float(_transition_margin(c.c3, *traj.coherences(x)))

    return _locate("transition", grid, at, t, cfg.t_max)


def golden_section_max(fn, lo, hi, tol=GOLDEN_TOL):
    """Maximize a unimodal ``fn`` on [lo, hi]; returns (x, fn(x))."""
    inv_phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _scan_then_golden(fn, grid_x, grid_y, tol=GOLDEN_TOL):
    """Golden-section refinement around the grid argmax; returns (x, y, flag)."""
    y = np.where(np.isfinite(grid_y), grid_y, -np.inf)
    i = int(np.argmax(y))
    lo = grid_x[max(i - 1, 0)]
    hi = grid_x[min(i + 1, len(grid_x) - 1)]
    x, fx = golden_section_max(fn, float(lo), float(hi), tol)
    if fx < y[i]:
        x, fx = float(grid_x[i]), float(y[i])
    at_edge = i in (0, len(grid_x) - 1) and (
        abs(x - grid_x[0]) <= tol or abs(x - grid_x[-1]) <= tol
    )
    return x, fx, "boundary" if at_edge else "interior"


@dataclass(frozen=True)
class AlphaOptimum:
    """Three-site coupling maximizing |F14| at ``t_ref``.

    ``flag`` is ``"interior"``, ``"boundary"`` (maximum on the bracket
    edge) or ``"degenerate"`` (|F14| flat in alpha, e.g. g = 0).
    """

    alpha: float
    factor: float
    flag: str


def _f14_at(cfg, t):
    traj = _Trajectory(cfg)
    return factor_from_modes(*traj._f14, t)


def find_optimal_alpha(cfg, t_ref, alpha_bracket=(-1.0, 1.0), n_scan=41):
    lo, hi = map(float, alpha_bracket)
    if not hi > lo:
        raise ConfigError("alpha bracket must have hi > lo", "alpha_bracket")
    alphas = np.linspace(lo, hi, n_scan)

    def f(a):
        return float(_f14_at(cfg.replace(alpha=float(a)), t_ref))

    values = np.array([f(a) for a in alphas])
    if np.ptp(values) < 1e-14:
        i = int(np.argmax(values))
        return AlphaOptimum(float(alphas[i]), float(values[i]), "degenerate")
    x, fx, flag = _scan_then_golden(f, alphas, values)
    return AlphaOptimum(float(x), float(fx), flag)


def _transition_or_nan(cfg):
    t = transition_time(cfg).t_event
    return math.nan if t is None else t


@dataclass(frozen=True)
class AlphaScan:
    """t' over a uniform alpha grid; NaN where no transition occurs in the window."""

    alphas: np.ndarray
    t_prime: np.ndarray
    alpha_opt: float | None
    t_prime_opt: float | None
    flag: str | None


def transition_time_vs_alpha(cfg, alpha_range=(-1.0, 1.0), n_points=41, n_jobs=1):
    lo, hi = map(float, alpha_range)
    if n_points < 1 or not hi >= lo:
        raise ConfigError("alpha range needs hi >= lo and at least one point", "alpha_range")
    alphas = np.linspace(lo, hi, int(n_points))
    t_prime = np.array(_map(lambda a: _transition_or_nan(cfg.replace(alpha=float(a))), alphas, n_jobs))
    if not np.any(np.isfinite(t_prime)):
        return AlphaScan(alphas, t_prime, None, None, None)

    def fn(a):
        t = _transition_or_nan(cfg.replace(alpha=float(a)))
        return -math.inf if math.isnan(t) else t

    x, fx, flag = _scan_then_golden(fn, alphas, t_prime) if n_points > 1 else (alphas[0], t_prime[0], "boundary")
    return AlphaScan(alphas, t_prime, float(x), float(fx), flag)


@dataclass(frozen=True)
class GammaScan:
    """t' over a gamma grid plus a least-squares polynomial fit.

    ``coefficients`` are in ascending powers of gamma; ``minimizer`` is the
    fitted interior minimum, or None if the fit has none in range.
    """

    gammas: np.ndarray
    t_prime: np.ndarray
    coefficients: np.ndarray
    minimizer: float | None
    fitted_min: float | None


def fitted_minimizer(poly, lo, hi):
    crit = poly.deriv().roots()
    crit = crit[np.abs(crit.imag) < 1e-9].real
    crit = crit[(crit > lo) & (crit < hi)]
    crit = crit[poly.deriv(2)(crit) > 0]
    if crit.size == 0:
        return None, None
    best = crit[np.argmin(poly(crit))]
    return float(best), float(poly(best))


def transition_time_vs_gamma(cfg, gamma_range=(0.1, 2.0), n_points=20, fit_degree=4, n_jobs=1):
    lo, hi = map(float, gamma_range)
    if not (0 < lo < hi):
        raise ConfigError("gamma range must satisfy 0 < lo < hi", "gamma_range")
    if n_points < fit_degree + 1:
        raise ConfigError(f"need at least {fit_degree + 1} gamma points for a degree-{fit_degree} fit", "n_points")
    gammas = np.linspace(lo, hi, int(n_points))
    t_prime = np.array(_map(lambda g: _transition_or_nan(cfg.replace(gamma=float(g))), gammas, n_jobs))
    ok = np.isfinite(t_prime)
    if ok.sum() < fit_degree + 1:
        raise ConfigError("too few gamma points with a transition inside the time window", "n_points")
    poly = np.polynomial.Polynomial.fit(gammas[ok], t_prime[ok], fit_degree).convert()
    minimizer, fitted_min = fitted_minimizer(poly, lo, hi)
    return GammaScan(gammas, t_prime, poly.coef.copy(), minimizer, fitted_min)
