"""Parameter sets reproducing the published figures.

Each preset fixes the physical parameters of one figure caption. Grid
resolution (time steps, alpha/gamma points) is a run setting and may be
overridden.
"""

from dataclasses import dataclass, field

import numpy as np

from chaindecoherence import analysis
from chaindecoherence.analysis import COLUMNS, RunConfig
from chaindecoherence.spectrum import ChainParams, CouplingParams, mode_data
from chaindecoherence.xstate import BellDiagonalCoeffs

BELL = (1.0, -1.0, 1.0)
# 0.6 |phi+><phi+| + 0.4 |psi+><psi+|
MIXED = (1.0, -0.2, 0.2)


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str  # "series", "surface", "alpha_scan" or "gamma_scan"
    params: dict
    t_max: float = 20.0
    steps: int = 2000
    variants: tuple = ()  # (label, overrides) pairs for "series"
    alpha_range: tuple = (-1.0, 1.0)
    alpha_steps: int = 41
    gamma_range: tuple = (0.1, 2.0)
    gamma_steps: int = 20
    fit_degree: int = 4
    notes: tuple = field(default_factory=tuple)

    def run_config(self, **overrides):
        p = dict(self.params)
        p.update(overrides)
        return RunConfig(
            chain=ChainParams(p["n_sites"], p["lam"], p["gamma"], p["alpha"]),
            coupling=CouplingParams(p["g"], p["delta"]),
            coeffs=BellDiagonalCoeffs(*p["coeffs"]),
            t_max=p.get("t_max", self.t_max),
            steps=p.get("steps", self.steps),
        )


def _params(**kw):
    base = {"n_sites": 400, "lam": 1.0, "gamma": 1.0, "alpha": 0.0, "g": 0.05, "delta": 0.0, "coeffs": BELL}
    base.update(kw)
    return base


PRESETS = {
    "fig1": Preset(
        "fig1", "surface", _params(),
        notes=("Entanglement and discord of the Bell state over (alpha, t).",),
    ),
    "fig2": Preset(
        "fig2", "series", _params(),
        variants=tuple((f"lam={v:g}", {"lam": v}) for v in (0.5, 0.9, 1.0, 1.1)),
        notes=(
            "Caption reads 'for different alpha ... alpha = 0' while the discussion varies the "
            "transverse field; this preset keeps alpha = 0 and sweeps lam.",
        ),
    ),
    "fig3": Preset(
        "fig3", "series", _params(lam=0.0), t_max=50.0, steps=5000,
        variants=tuple((f"alpha={v:g}", {"alpha": v}) for v in (0.0, 0.1, 0.5)),
        notes=("Zero transverse field: oscillatory decay with revivals.",),
    ),
    "fig4": Preset(
        "fig4", "surface", _params(coeffs=MIXED),
        notes=("Bell-diagonal initial state c = (1, -0.2, 0.2) over (alpha, t).",),
    ),
    "fig5": Preset(
        "fig5", "series", _params(coeffs=MIXED, delta=0.5),
        variants=tuple((f"alpha={v:g}", {"alpha": v}) for v in (-0.8, -0.5, 0.0, 0.5))
        + tuple((f"gamma={v:g}", {"gamma": v}) for v in (0.5, 1.5)),
        notes=(
            "Caption lists 'lam = 1' twice and four alpha values, while the discussion varies "
            "the anisotropy; both the alpha sweep (gamma = 1) and a gamma sweep (alpha = 0) are emitted.",
        ),
    ),
    "fig6": Preset(
        "fig6", "series", _params(coeffs=MIXED, delta=1.0),
        variants=(("", {}),),
        notes=("Discord, classical and total correlation; sudden transition at t'.",),
    ),
    "fig7": Preset(
        "fig7", "alpha_scan", _params(coeffs=MIXED, delta=1.0),
        notes=(
            "Caption gives no N; N = 400 as in the other figures.",
            "Stated interval '[1, alpha']' read as [-1, alpha']; scan covers alpha in [-1, 1].",
        ),
    ),
    "fig8": Preset(
        "fig8", "gamma_scan", _params(coeffs=MIXED, delta=1.0),
        notes=("Ordinary least-squares polynomial fit of t'(gamma).",),
    ),
}


@dataclass
class PresetResult:
    """Tables as (label, header, 2-D array) triples plus sidecar metadata."""

    tables: list
    metadata: dict


def _resolved(cfg):
    c = cfg.chain
    return {
        "n_sites": c.n_sites, "lam": c.lam, "gamma": c.gamma, "alpha": c.alpha,
        "g": cfg.coupling.g, "delta": cfg.coupling.delta,
        "c1": cfg.coeffs.c1, "c2": cfg.coeffs.c2, "c3": cfg.coeffs.c3,
        "t_max": cfg.t_max, "t_steps": cfg.steps,
    }


def series_events(cfg):
    death = analysis.sudden_death_time(cfg)
    transition = analysis.transition_time(cfg)
    return {"sudden_death": death.as_dict(), "transition": transition.as_dict()}


def run_preset(name, t_max=None, steps=None, alpha_steps=None, gamma_steps=None, n_jobs=1):
    if name not in PRESETS:
        raise KeyError(name)
    preset = PRESETS[name]
    grid = {}
    if t_max is not None:
        grid["t_max"] = t_max
    if steps is not None:
        grid["steps"] = steps
    base = preset.run_config(**grid)
    meta = {
        "preset": name,
        "kind": preset.kind,
        "parameters": _resolved(base),
        "notes": list(preset.notes),
        "flags": {"negative_energy_modes": {}, "multi_crossing_events": []},
    }
    tables = []
    flags = meta["flags"]

    if preset.kind == "series":
        meta["variants"] = {}
        for label, overrides in preset.variants:
            cfg = preset.run_config(**overrides, **grid)
            ts = analysis.time_series(cfg)
            events = series_events(cfg)
            key = label or name
            meta["variants"][key] = {"parameters": _resolved(cfg), "events": events}
            flags["negative_energy_modes"][key] = ts.negative_energy_modes
            for kind, ev in events.items():
                if ev["multi_crossing"]:
                    flags["multi_crossing_events"].append(f"{key}:{kind}")
            tables.append((label, COLUMNS, ts.as_array()))

    elif preset.kind == "surface":
        n_alpha = alpha_steps or preset.alpha_steps
        sweep = analysis.sweep_alpha_time(base, preset.alpha_range, n_alpha, n_jobs=n_jobs)
        meta["alpha_grid"] = {"min": preset.alpha_range[0], "max": preset.alpha_range[1], "steps": n_alpha}
        for a in sweep.alphas:
            count = mode_data(base.chain.with_(alpha=float(a)), base.coupling).negative_energy_count
            if count:
                flags["negative_energy_modes"][f"alpha={a:.12g}"] = count
        tables.append(("", ("alpha",) + COLUMNS, sweep.rows()))

    elif preset.kind == "alpha_scan":
        n_alpha = alpha_steps or preset.alpha_steps
        scan = analysis.transition_time_vs_alpha(base, preset.alpha_range, n_alpha, n_jobs=n_jobs)
        meta["alpha_grid"] = {"min": preset.alpha_range[0], "max": preset.alpha_range[1], "steps": n_alpha}
        meta["alpha_opt"] = scan.alpha_opt
        meta["t_prime_opt"] = scan.t_prime_opt
        meta["alpha_opt_flag"] = scan.flag
        tables.append(("", ("alpha", "t_prime"), np.column_stack([scan.alphas, scan.t_prime])))

    elif preset.kind == "gamma_scan":
        n_gamma = gamma_steps or preset.gamma_steps
        scan = analysis.transition_time_vs_gamma(base, preset.gamma_range, n_gamma, preset.fit_degree, n_jobs=n_jobs)
        meta["gamma_grid"] = {"min": preset.gamma_range[0], "max": preset.gamma_range[1], "steps": n_gamma}
        meta["fit"] = {
            "degree": preset.fit_degree,
            "coefficients_ascending": scan.coefficients.tolist(),
            "minimizer": scan.minimizer,
            "fitted_min": scan.fitted_min,
        }
        tables.append(("", ("gamma", "t_prime"), np.column_stack([scan.gammas, scan.t_prime])))

    return PresetResult(tables, meta)
