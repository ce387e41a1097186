"""Least-squares fitting of the MFTR envelope density to binned data.

The objective is the mean squared vertical deviation between the empirical
density and the model envelope density at the bin abscissae.  It is
minimized by Nelder-Mead in unconstrained coordinates (bounded logs for
``K, m, mu, Omega`` and a logit for ``Delta``) from a Latin-hypercube set of
starts.  The FTR (``mu = 1``) and kappa-mu shadowed (``Delta = 0``) special
cases can be fitted the same way, and their optima seed the MFTR search so
the nested model never does worse.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field, replace
import json
import math
import warnings

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from . import specfun
from .model import MftrParams, ParameterError, validate
from .montecarlo import EmpiricalPdf, empirical_pdf
from .specfun import Tolerance
from .stats import envelope_pdf

__all__ = [
    "EmpiricalPdf",
    "FitConfig",
    "FitResult",
    "MODELS",
    "DEFAULT_BOUNDS",
    "mse",
    "noise_floor",
    "fit",
    "load_empirical_csv",
    "result_to_json",
]

MODELS = ("mftr", "ftr", "kappa_mu_shadowed")
DEFAULT_BOUNDS = {"k": (1e-3, 1e3), "delta": (0.0, 1.0), "m": (0.3, 200.0), "mu": (0.05, 100.0)}
MIN_POINTS = 5
# the objective is re-evaluated thousands of times; 1e-9 relative is far
# below any sampling noise in binned data
FIT_TOL = Tolerance(abs_tol=1e-14, rel_tol=1e-9, max_terms=8192)

_FREE = {
    "mftr": ("k", "delta", "m", "mu", "omega"),
    "ftr": ("k", "delta", "m", "omega"),
    "kappa_mu_shadowed": ("k", "m", "mu", "omega"),
}
_FIXED = {"mftr": {}, "ftr": {"mu": 1.0}, "kappa_mu_shadowed": {"delta": 0.0}}
_LOGIT_CAP = 30.0


@dataclass(frozen=True)
class FitConfig:
    restarts: int = 16
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    init_strategy: str = "lhs"          # or "moments" (single start)
    seed: int = 0
    max_iter: int = 2000
    f_spread: float = 1e-10
    omega_range: float = 100.0          # Omega searched in [Omega0/c, Omega0*c]
    normalize: bool = False             # fit on r / sqrt(Omega0), map back
    competitors: bool = True            # MFTR only: also fit FTR and kappa-mu shadowed
    workers: int = 1


@dataclass(frozen=True)
class FitResult:
    model: str
    params: MftrParams
    mse: float
    iterations: int
    converged: bool
    restarts_used: int
    competitor_results: tuple = ()


# ---------------------------------------------------------------------------
# objective
# ---------------------------------------------------------------------------

def _check_data(data: EmpiricalPdf, for_fit=False):
    if for_fit and data.count < MIN_POINTS:
        raise ValueError(f"fitting needs at least {MIN_POINTS} density values, got {data.count}")
    if np.any(data.abscissae <= 0):
        raise ValueError("abscissae must be positive")


def mse(params: MftrParams, data: EmpiricalPdf, method: str = "theta_integral",
        tol: Tolerance | None = None) -> float:
    """``(1/T) sum (fhat(r_i) - f_R(r_i))**2``; evaluation failures give ``inf``."""
    _check_data(data)
    try:
        f = envelope_pdf(validate(params), data.abscissae, method=method, tol=tol or FIT_TOL)
    except (ArithmeticError, ValueError):
        return math.inf
    if not np.all(np.isfinite(f)):
        return math.inf
    return float(np.mean((data.densities - f) ** 2))


def noise_floor(data: EmpiricalPdf, n_samples: int) -> float:
    """Binomial sampling variance of the histogram densities, averaged over bins."""
    w = data.implied_widths()
    prob = data.densities * w
    var = prob * (1.0 - prob) / (n_samples * w * w)
    return float(np.mean(var))


def _binned_second_moment(data: EmpiricalPdf) -> float:
    w = data.implied_widths()
    mass = data.densities * w
    return float(np.sum(mass * data.abscissae ** 2) / np.sum(mass))


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

def _sigmoid(z):
    return 0.5 * (1.0 + math.tanh(0.5 * z))


def _logit(u):
    u = min(max(u, 1e-13), 1.0 - 1e-13)
    return math.log(u / (1.0 - u))


class _Coords:
    """Maps free parameters to R**d: bounded log for positive ones, logit for Delta."""

    def __init__(self, model, bounds, omega0, omega_range):
        self.names = _FREE[model]
        self.fixed = _FIXED[model]
        lim = dict(bounds)
        lim["omega"] = (omega0 / omega_range, omega0 * omega_range)
        self.lim = lim

    def to_params(self, z) -> MftrParams:
        vals = dict(self.fixed)
        for name, zi in zip(self.names, z):
            zi = max(min(float(zi), _LOGIT_CAP), -_LOGIT_CAP)
            lo, hi = self.lim[name]
            u = _sigmoid(zi)
            if name == "delta":
                vals[name] = lo + (hi - lo) * u
            else:
                vals[name] = math.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * u)
        return MftrParams(vals["k"], vals["delta"], vals["m"], vals["mu"], vals["omega"])

    def from_params(self, p: MftrParams):
        d = {"k": p.k, "delta": p.delta, "m": p.m, "mu": p.mu, "omega": p.gamma_bar}
        out = []
        for name in self.names:
            lo, hi = self.lim[name]
            v = min(max(d[name], lo), hi)
            if name == "delta":
                u = (v - lo) / (hi - lo)
            else:
                u = (math.log(v) - math.log(lo)) / (math.log(hi) - math.log(lo))
            out.append(max(min(_logit(u), _LOGIT_CAP), -_LOGIT_CAP))
        return np.array(out)


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def _starts(coords: _Coords, cfg: FitConfig, omega0):
    d = len(coords.names)
    mom = MftrParams(1.0, 0.5, 2.0, 1.0, omega0)
    first = coords.from_params(mom)
    if cfg.init_strategy == "moments":
        return [first]
    if cfg.init_strategy != "lhs":
        raise ValueError(f"unknown init_strategy {cfg.init_strategy!r}")
    out = [first]
    if cfg.restarts > 1:
        u = qmc.LatinHypercube(d=d, seed=np.random.default_rng(cfg.seed)).random(cfg.restarts - 1)
        u = 0.02 + 0.96 * u
        # Omega stays near its moment estimate; the other coordinates span their bounds
        if "omega" in coords.names:
            j = coords.names.index("omega")
            u[:, j] = 0.5 + 0.2 * (u[:, j] - 0.5)
        out.extend(np.log(u / (1.0 - u)))
    return out


def _run_nm(objective, z0, cfg: FitConfig):
    res = optimize.minimize(objective, z0, method="Nelder-Mead",
                            options={"maxiter": cfg.max_iter, "maxfev": 4 * cfg.max_iter,
                                     "xatol": np.inf, "fatol": cfg.f_spread})
    return res


def _fit_one(data: EmpiricalPdf, model: str, cfg: FitConfig, extra_seeds=()):
    omega0 = _binned_second_moment(data)
    coords = _Coords(model, cfg.bounds, omega0, cfg.omega_range)

    # dividing by the mean squared density makes the spread test unit-free,
    # so rescaled data follow the same simplex path
    ref = float(np.mean(data.densities ** 2)) or 1.0

    def objective(z):
        return mse(coords.to_params(z), data) / ref

    starts = _starts(coords, cfg, omega0) + [coords.from_params(p) for p in extra_seeds]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            runs = list(ex.map(lambda z0: _run_nm(objective, z0, cfg), starts))
    else:
        runs = [_run_nm(objective, z0, cfg) for z0 in starts]
    # ties go to the earliest start so the result is reproducible
    best = min(range(len(runs)), key=lambda i: (runs[i].fun, i))
    r = runs[best]
    params = coords.to_params(r.x)
    return FitResult(model, params, mse(params, data), int(r.nit), bool(any(x.success for x in runs)),
                     len(runs))


def fit(data: EmpiricalPdf, model: str = "mftr", config: FitConfig | None = None) -> FitResult:
    """Fit ``model`` to ``data`` by best-of-restarts Nelder-Mead.

    For ``model="mftr"`` with ``config.competitors`` the FTR and kappa-mu
    shadowed fits run first and their optima are added as MFTR starts;
    they are returned in ``competitor_results``.  ``converged`` is true if
    at least one restart met the simplex spread criterion.
    """
    cfg = config or FitConfig()
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    _check_data(data, for_fit=True)
    mass = data.mass()
    if not 0.9 <= mass <= 1.1:
        warnings.warn(f"empirical density integrates to {mass:.3g}, not 1", stacklevel=2)
    work = data
    scale = 1.0
    if cfg.normalize:
        scale = math.sqrt(_binned_second_moment(data))
        w = None if data.widths is None else data.widths / scale
        work = EmpiricalPdf(data.abscissae / scale, data.densities * scale, w)
    comps = ()
    seeds = []
    if model == "mftr" and cfg.competitors:
        comps = tuple(_fit_one(work, m, cfg) for m in ("ftr", "kappa_mu_shadowed"))
        seeds = [c.params for c in comps]
    res = _fit_one(work, model, cfg, seeds)
    if cfg.normalize:
        back = lambda r: replace(r, params=r.params.replace(gamma_bar=r.params.gamma_bar * scale ** 2),
                                 mse=mse(r.params.replace(gamma_bar=r.params.gamma_bar * scale ** 2), data))
        comps = tuple(back(c) for c in comps)
        res = back(res)
    return replace(res, competitor_results=comps)


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------

def load_empirical_csv(path) -> EmpiricalPdf:
    """Read ``r,density`` pairs (header required) or a single column of raw samples.

    Raw samples are binned with the Freedman-Diaconis rule.  Errors name the
    offending line.
    """
    with open(path, newline="") as fh:
        rows = [(i + 1, row) for i, row in enumerate(csv.reader(fh)) if row and any(c.strip() for c in row)]
    if not rows:
        raise ValueError(f"{path}: no data")
    width = len(rows[0][1])
    header = rows[0][1]
    has_header = not _is_number(header[0])
    if width == 2:
        if not has_header:
            raise ValueError(f"{path}: line {rows[0][0]}: two-column input needs a header 'r,density'")
        body = rows[1:]
    elif width == 1:
        body = rows[1:] if has_header else rows
    else:
        raise ValueError(f"{path}: line {rows[0][0]}: expected 1 or 2 columns, got {width}")
    vals = []
    for line, row in body:
        if len(row) != width:
            raise ValueError(f"{path}: line {line}: expected {width} fields, got {len(row)}")
        try:
            vals.append([float(c) for c in row])
        except ValueError:
            raise ValueError(f"{path}: line {line}: not a number: {','.join(row)!r}") from None
        if not all(math.isfinite(v) for v in vals[-1]):
            raise ValueError(f"{path}: line {line}: non-finite value")
    if width == 2:
        lines = [ln for ln, _ in body]
        arr = np.array(vals)
        for j in range(1, len(arr)):
            if arr[j, 0] <= arr[j - 1, 0]:
                raise ValueError(f"{path}: line {lines[j]}: abscissa {arr[j, 0]!r} is not greater than "
                                 f"the previous one {arr[j - 1, 0]!r}")
        for j in range(len(arr)):
            if arr[j, 1] < 0:
                raise ValueError(f"{path}: line {lines[j]}: negative density")
        return EmpiricalPdf(arr[:, 0], arr[:, 1])
    samples = np.array(vals).ravel()
    edges = np.histogram_bin_edges(samples, bins="fd")
    return empirical_pdf(samples, bins=edges)


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def _fmt(v):
    if v is None:
        return "null"
    s = format(float(v), ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _result_obj(r: FitResult):
    p = r.params
    return {"model": r.model,
            "params": {"K": p.k, "delta": p.delta, "m": p.m, "mu": p.mu, "omega": p.gamma_bar},
            "mse": r.mse, "converged": r.converged, "restarts_used": r.restarts_used}


def _dump(obj):
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt(obj) if math.isfinite(obj) else json.dumps(str(obj))
    raise TypeError(f"cannot serialize {type(obj)}")


def result_to_json(result: FitResult) -> str:
    """JSON text with every real written to 17 significant digits."""
    obj = _result_obj(result)
    obj["competitors"] = [_result_obj(c) for c in result.competitor_results]
    return _dump(obj)
