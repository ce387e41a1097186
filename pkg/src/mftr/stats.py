"""SNR and envelope distributions of the MFTR model.

Three independent routes are provided:

``mgf_inversion``   numerical inverse Laplace transform of ``M(-s)`` (integer m)
``theta_integral``  phase average of conditional kappa-mu shadowed densities
``gamma_series``    discrete mixture of Gamma densities with shapes ``mu+i``
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy import special as sc

from . import specfun
from .model import MftrParams, UnsupportedCombination, is_integer_m, mgf, theta_average, validate
from .specfun import LaplaceInversionConfig, Tolerance

__all__ = [
    "METHODS",
    "GammaMixture",
    "DensityCurve",
    "MixtureTruncationError",
    "gamma_mixture_weights",
    "conditional_pdf",
    "pdf",
    "cdf",
    "envelope_pdf",
    "envelope_cdf",
    "density_curve",
    "second_moment",
    "aof",
    "i3_integral",
    "special_case_params",
    "SPECIAL_CASES",
]

METHODS = ("auto", "mgf_inversion", "theta_integral", "gamma_series")

WEIGHT_TOL = Tolerance(abs_tol=1e-10, rel_tol=1e-12, max_terms=20_000)
DENSITY_TOL = Tolerance(abs_tol=1e-12, rel_tol=1e-10, max_terms=8192)
LARGE = 1e6  # stand-in for parameters that tend to infinity


class MixtureTruncationError(ArithmeticError):
    def __init__(self, message, mass):
        super().__init__(message)
        self.mass = mass


# ---------------------------------------------------------------------------
# Gamma mixture
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaMixture:
    """Truncated mixture ``sum_i w_i Gamma(shape=mu+i, scale)``."""

    log_weights: np.ndarray
    shapes: np.ndarray
    scale: float
    truncation_index: int
    tail_mass_bound: float

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def means(self) -> np.ndarray:
        return self.shapes * self.scale

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()[:, None]
        lam = self.shapes[None, :]
        logt = (self.log_weights[None, :] + sc.xlogy(lam - 1.0, flat) - flat / self.scale
                - sc.gammaln(lam) - lam * math.log(self.scale))
        out = np.exp(sc.logsumexp(logt, axis=1))
        return out.reshape(x.shape) if x.ndim else out[0]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()[:, None]
        out = specfun.reg_lower_gamma(self.shapes[None, :], flat / self.scale) @ self.weights
        out = np.minimum(out, 1.0)
        return out.reshape(x.shape) if x.ndim else out[0]


def _diag_2f1(a, c, y, tol=1e-17, max_terms=10_000_000):
    """2F1(a, 1/2; c; y) for arrays a, c and scalar 0 <= y < 1; positive terms only."""
    total = np.ones_like(a)
    term = np.ones_like(a)
    active = np.arange(a.size)
    n = 0
    chunk = 64
    k = np.arange(chunk)[None, :]
    while n < max_terms:
        kk = k + n
        aa, cc = a[active][:, None], c[active][:, None]
        r = (aa + kk) * (0.5 + kk) / ((cc + kk) * (kk + 1.0)) * y
        terms = term[active][:, None] * np.cumprod(r, axis=1)
        total[active] += terms.sum(axis=1)
        term[active] = terms[:, -1]
        n += chunk
        done = (terms[:, -1] <= tol * total[active]) & (r[:, -1] < 1.0)
        active = active[~done]
        if active.size == 0:
            return total
    raise specfun.SpecialFunctionError("2F1 seed series did not converge", partial=total)


def gamma_mixture_weights(params: MftrParams, tol: Tolerance | None = None) -> GammaMixture:
    """Mixture weights ``w_i`` of the Gamma-series representation.

    ``w_i`` is the phase average of negative-binomial weights.  With
    ``cos theta = 1 - 2u`` the average becomes a finite sum of Gauss
    hypergeometrics ``2F1(m+i, 1/2; q+1; y)``, ``y = 2 mu K Delta / (mu K (1+Delta) + m)``,
    whose coefficients ``C(i,q) (1-Delta)**(i-q) (2 Delta)**q`` are all
    nonnegative (the expansion is exact at ``Delta = 1``).  For fixed ``q`` the
    hypergeometrics are generated along ``a = m+i`` by the contiguous
    relation in ``a``, scaled by ``(1-y)**a``, which is forward stable; only
    the two diagonal seeds per ``q`` are summed directly.
    """
    p = validate(params)
    tol = tol or WEIGHT_TOL
    scale = p.gamma_bar / (p.mu * (1.0 + p.k))
    if p.k == 0.0:
        return GammaMixture(np.zeros(1), np.array([p.mu]), scale, 0, 0.0)
    m, muk, d = p.m, p.mu * p.k, p.delta
    c2 = muk * (1.0 + d) + m
    y = 2.0 * muk * d / c2
    log1my = math.log1p(-y)
    # m log(m / c2) via log1p: the two logs are ~1e7 each at the large-m stand-in
    base = -m * math.log1p(muk * (1.0 + d) / m) - 0.5 * math.log(math.pi)
    log_ratio = math.log(muk) - math.log(c2)

    # rough upper bound for the index count: Poisson(G), G ~ Gamma(m, mean mu kappa)
    kmax = muk * (1.0 + d)
    var = kmax + kmax * kmax / m
    # Gamma(m) tail beyond mean + j*scale decays like exp(-j); Poisson adds sqrt spread
    log_tol = -math.log(tol.abs_tol)
    n_guess = int(max(kmax + 15.0 * math.sqrt(var),
                      kmax + (kmax / m) * (log_tol + 5.0) + 10.0 * math.sqrt(kmax)) + 50)
    if kmax + 6.0 * math.sqrt(var) > tol.max_terms:
        # the index distribution sits beyond the term budget; fail before the O(n^2) work
        raise MixtureTruncationError(
            f"mixture needs more than {tol.max_terms} terms (index mean {kmax:.3g})", 0.0)
    n_guess = min(n_guess, tol.max_terms)

    # seeds: F(m+q, 1/2; q+1; y) and F(m+q+1, 1/2; q+1; y); G(a) = (1-y)**a F(a)
    def seeds(qs):
        qs = qs.astype(float)
        f0 = _diag_2f1(m + qs, qs + 1.0, y) if y > 0 else np.ones_like(qs)
        if d == 1.0:
            return np.log(f0), np.zeros_like(qs)  # the a-recurrence is not needed
        f1 = _diag_2f1(m + qs + 1.0, qs + 1.0, y) if y > 0 else np.ones_like(qs)
        return np.log(f0), np.log(f1)

    q_all = np.arange(n_guess + 1)
    ls0, ls1 = seeds(q_all)
    lg_q = sc.gammaln(q_all + 0.5) - sc.gammaln(q_all + 1.0)

    logw = []
    cum = 0.0
    # log G(a, q) for a = m+i (cur) and m+i-1 (prev), stored for q = 0..i
    g_prev = np.empty(0)
    g_cur = np.empty(0)
    i = 0
    while True:
        if i > n_guess:
            # extend the seed tables
            n_new = min(2 * n_guess, tol.max_terms)
            if n_new <= n_guess:
                raise MixtureTruncationError(
                    f"mixture mass {cum:.3e} short of 1 - {tol.abs_tol:g} after {i} terms", cum)
            q_new = np.arange(n_guess + 1, n_new + 1)
            a0, a1 = seeds(q_new)
            ls0, ls1 = np.concatenate([ls0, a0]), np.concatenate([ls1, a1])
            lg_q = np.concatenate([lg_q, sc.gammaln(q_new + 0.5) - sc.gammaln(q_new + 1.0)])
            q_all = np.arange(n_new + 1)
            n_guess = n_new
        a = m + i
        if d == 1.0:
            q = np.array([i])
            logf = np.array([ls0[i]])
        else:
            # log F(m+i, 1/2; q+1; y) for q = 0..i
            logf = np.empty(i + 1)
            if i >= 2:
                qq = q_all[:i - 1].astype(float)
                cc = qq + 1.0
                am1 = a - 1.0  # recurrence from a-1, a-2 to a
                # scaled values (relative to a common exponent to avoid overflow)
                shift = np.maximum(g_cur[:i - 1], g_prev[:i - 1])
                gc = np.exp(g_cur[:i - 1] - shift)
                gp = np.exp(g_prev[:i - 1] - shift)
                gn = ((2 * am1 - cc + (0.5 - am1) * y) * gc + (cc - am1) * (1 - y) * gp) / am1
                logf[:i - 1] = np.log(gn) + shift - a * log1my
            if i >= 1:
                logf[i - 1] = ls1[i - 1]
            logf[i] = ls0[i]
            q = q_all[:i + 1]
            g_prev = g_cur
            g_cur = logf + a * log1my
        if d == 1.0:
            coef = q * math.log(2.0)
        elif d == 0.0:
            coef = np.where(q == 0, 0.0, -np.inf)
        else:
            coef = (sc.gammaln(i + 1.0) - sc.gammaln(q + 1.0) - sc.gammaln(i - q + 1.0)
                    + (i - q) * math.log1p(-d) + q * math.log(2.0 * d))
        lw = (specfun.log_poch(m, i) - sc.gammaln(i + 1.0) + i * log_ratio + base
              + sc.logsumexp(coef + lg_q[q] + logf))
        logw.append(lw)
        cum += math.exp(lw)
        if cum >= 1.0 - tol.abs_tol:
            break
        i += 1
        if i >= tol.max_terms:
            raise MixtureTruncationError(
                f"mixture mass {cum:.3e} short of 1 - {tol.abs_tol:g} after {i} terms", cum)
    logw = np.array(logw)
    shapes = p.mu + np.arange(logw.size)
    return GammaMixture(logw, shapes, scale, logw.size - 1, max(0.0, 1.0 - cum) + 1e-13)


# ---------------------------------------------------------------------------
# conditional (theta) densities
# ---------------------------------------------------------------------------

def _cond_log_pdf(p: MftrParams, theta, x, drop_power=False):
    """log f(x | theta); with drop_power the x**(mu-1) factor is omitted."""
    kap = p.k * (1.0 + p.delta * np.cos(theta))
    den = p.mu * kap + p.m
    g = p.gamma_bar
    z = p.mu ** 2 * kap * (1.0 + p.k) * x / (den * g)
    log1f1, _ = specfun.kummer_1f1(p.m, p.mu, z)
    out = (p.mu * math.log(p.mu) + p.mu * math.log1p(p.k) - sc.gammaln(p.mu)
           - math.log(g) - p.m * np.log1p(p.mu * kap / p.m) - p.mu * (1.0 + p.k) * x / g + log1f1)
    if not drop_power:
        out = out + sc.xlogy(p.mu - 1.0, x / g)
    else:
        out = out - (p.mu - 1.0) * math.log(g)
    return out


def conditional_pdf(params: MftrParams, theta, x):
    """SNR density given the phase ``theta``: a kappa-mu shadowed density."""
    th, xx = np.broadcast_arrays(np.asarray(theta, float), np.asarray(x, float))
    return np.exp(_cond_log_pdf(params, th, xx))


def _theta_pdf(p: MftrParams, x, tol, drop_power=False):
    x = np.asarray(x, dtype=float).ravel()
    if p.delta == 0.0 or p.k == 0.0:
        return np.exp(_cond_log_pdf(p, np.full(x.shape, 0.5 * np.pi), x, drop_power))
    return theta_average(lambda th: np.exp(_cond_log_pdf(p, th[:, None], x[None, :], drop_power)),
                         Tolerance(abs_tol=tol.abs_tol, rel_tol=tol.rel_tol, max_terms=tol.max_terms))


_GL16 = np.polynomial.legendre.leggauss(16)


def _gl(a, b, fvals_fn):
    """16-point Gauss-Legendre on each [a_j, b_j]."""
    x, w = _GL16
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    vals = fvals_fn(nodes.ravel()).reshape(nodes.shape)
    return (vals * w[None, :]).sum(axis=1) * half


def _theta_cdf(p: MftrParams, x, tol):
    """Cumulative integral of the phase-averaged density at sorted points.

    The origin panel uses Gauss-Jacobi nodes for the ``t**(mu-1)`` factor;
    the remaining panels are split adaptively (16-point Gauss-Legendre,
    parent vs. two children) until each meets its share of ``abs_tol``.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    order = np.argsort(flat)
    xs = flat[order]
    pos = xs[xs > 0]
    res = np.zeros(flat.shape)
    if pos.size == 0:
        return res.reshape(x.shape)
    g = p.gamma_bar
    dens = lambda t: _theta_pdf(p, t, tol)
    # origin panel [0, e0]
    e0 = min(pos[0], g / (p.mu * (1.0 + p.k)), g)
    origin = None
    while origin is None:
        vals = []
        for n in (24, 48):
            u, w = specfun._jacobi01(n, 0.0, p.mu - 1.0)
            h = _theta_pdf(p, e0 * u, tol, drop_power=True)
            vals.append(e0 ** p.mu * float(np.dot(w, h)))
        if abs(vals[1] - vals[0]) <= 0.1 * tol.abs_tol + tol.rel_tol * abs(vals[1]):
            origin = vals[1]
        else:
            e0 *= 0.25
    edges = np.unique(np.concatenate([[e0], pos[pos > e0]]))
    # subdivide long panels so the first pass is not hopelessly coarse
    width_cap = max(g, edges[-1]) / 64.0
    fine = [edges[:1]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((hi - lo) / width_cap)))
        fine.append(np.linspace(lo, hi, k + 1)[1:])
    edges = np.concatenate(fine)
    span = max(edges[-1], g)
    lo, hi = edges[:-1], edges[1:]
    est = _gl(lo, hi, dens)
    done_lo, done_val = [], []
    depth = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _gl(lo, mid, dens)
        right = _gl(mid, hi, dens)
        child = left + right
        ok = np.abs(child - est) <= 0.05 * tol.abs_tol * (hi - lo) / span + 1e-3 * tol.rel_tol * np.abs(child)
        if depth >= 30:
            raise specfun.SpecialFunctionError("adaptive CDF quadrature did not converge")
        done_lo.append(lo[ok])
        done_val.append(child[ok])
        bad = ~ok
        lo, hi, est = (np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]]),
                       np.concatenate([left[bad], right[bad]]))
        depth += 1
    # no panels when every abscissa lies inside the origin panel
    pl = np.concatenate(done_lo) if done_lo else np.empty(0)
    pv = np.concatenate(done_val) if done_val else np.empty(0)
    srt = np.argsort(pl)
    pl, cum = pl[srt], origin + np.cumsum(pv[srt])
    # panel right edges coincide with every requested abscissa beyond e0
    right_edges = np.append(pl[1:], edges[-1])
    vals_sorted = np.empty(xs.shape)
    for j, xv in enumerate(xs):
        if xv <= 0:
            vals_sorted[j] = 0.0
        elif xv == e0 or xv < e0:
            vals_sorted[j] = origin if xv == e0 else _origin_partial(p, xv, tol)
        else:
            k = np.searchsorted(right_edges, xv * (1 - 1e-15), side="left")
            vals_sorted[j] = cum[k]
    res[order] = np.minimum(vals_sorted, 1.0)
    return res.reshape(x.shape)


def _origin_partial(p, x, tol):
    u, w = specfun._jacobi01(48, 0.0, p.mu - 1.0)
    h = _theta_pdf(p, x * u, tol, drop_power=True)
    return x ** p.mu * float(np.dot(w, h))


# ---------------------------------------------------------------------------
# public PDF / CDF
# ---------------------------------------------------------------------------

def i3_integral(params: MftrParams) -> float:
    """``(1/pi) int_0^pi (mu kappa_theta + m)**(-m) dtheta`` in closed form."""
    p = params
    return math.exp(_log_i3_scaled(p) - p.m * math.log(p.m))


def _log_i3_scaled(p: MftrParams) -> float:
    # log(m**m I3); stays finite when m**m alone would overflow
    muk = p.mu * p.k
    c2 = muk * (1.0 + p.delta) + p.m
    y = 2.0 * muk * p.delta / c2
    sign, log_f = specfun._gauss_2f1_log(p.m, 0.5, 1.0, y)
    return -p.m * math.log1p(muk * (1.0 + p.delta) / p.m) + log_f


def _pdf_at_zero(p: MftrParams) -> float:
    if p.mu > 1:
        return 0.0
    if p.mu < 1:
        return math.inf
    return (1.0 + p.k) / p.gamma_bar * math.exp(_log_i3_scaled(p))


def _resolve(p, method, x):
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "mgf_inversion" and not is_integer_m(p):
        raise UnsupportedCombination("mgf_inversion requires a positive integer m")
    return method


def _mgf_transform(p, kind):
    def F(s):
        v = mgf(p, -s)
        return v / s if kind == "cdf" else v
    return F


def pdf(params: MftrParams, x, method: str = "auto", tol: Tolerance | None = None,
        mixture: GammaMixture | None = None):
    """SNR density ``f(x)``.

    ``auto`` uses the Gamma series for ``x <= 5 gamma_bar`` and the phase
    integral beyond, where mixture truncation dominates the error, or
    everywhere when the series would need more than its term budget.
    """
    p = validate(params)
    method = _resolve(p, method, x)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    flat = x.ravel()
    out = np.empty(flat.shape)
    zero = flat == 0
    if np.any(zero):
        out[zero] = _pdf_at_zero(p)
    pos = ~zero
    if np.any(pos):
        out[pos] = _pdf_positive(p, flat[pos], method, tol, mixture)
    out = out.reshape(x.shape)
    return out if out.ndim else out[()]


def _mixture_or_none(p):
    # auto mode falls back to the phase integral when the series is too long
    try:
        return gamma_mixture_weights(p)
    except MixtureTruncationError:
        return None


def _pdf_positive(p, x, method, tol, mixture):
    tol = tol or DENSITY_TOL
    if method == "auto":
        mixture = mixture or _mixture_or_none(p)
        near = (x <= 5.0 * p.gamma_bar) & (mixture is not None)
        out = np.empty(x.shape)
        if np.any(near):
            out[near] = mixture.pdf(x[near])
        if np.any(~near):
            out[~near] = _pdf_positive(p, x[~near], "theta_integral", tol, mixture)
        return out
    if method == "gamma_series":
        return (mixture or gamma_mixture_weights(p)).pdf(x)
    if method == "theta_integral":
        return _theta_pdf(p, x, tol)
    return np.maximum(specfun.inverse_laplace(_mgf_transform(p, "pdf"), x, LaplaceInversionConfig()), 0.0)


def cdf(params: MftrParams, x, method: str = "auto", tol: Tolerance | None = None,
        mixture: GammaMixture | None = None):
    """SNR distribution function ``F(x)``."""
    p = validate(params)
    method = _resolve(p, method, x)
    tol = tol or DENSITY_TOL
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    flat = x.ravel()
    out = np.zeros(flat.shape)
    pos = flat > 0
    if np.any(pos):
        xp = flat[pos]
        if method == "auto":
            mixture = mixture or _mixture_or_none(p)
            near = (xp <= 5.0 * p.gamma_bar) & (mixture is not None)
            v = np.empty(xp.shape)
            if np.any(near):
                v[near] = mixture.cdf(xp[near])
            if np.any(~near):
                v[~near] = _theta_cdf(p, xp[~near], tol)
        elif method == "gamma_series":
            v = (mixture or gamma_mixture_weights(p)).cdf(xp)
        elif method == "theta_integral":
            v = _theta_cdf(p, xp, tol)
        else:
            v = specfun.inverse_laplace(_mgf_transform(p, "cdf"), xp, LaplaceInversionConfig())
        out[pos] = np.clip(v, 0.0, 1.0)
    out = out.reshape(x.shape)
    return out if out.ndim else out[()]


def envelope_pdf(params: MftrParams, r, method: str = "auto", tol: Tolerance | None = None,
                 mixture: GammaMixture | None = None):
    """Envelope density ``f_R(r) = 2 r f(r**2)`` with ``gamma_bar`` read as ``Omega``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be nonnegative")
    f = pdf(params, r * r, method, tol, mixture)
    out = np.where(r == 0, 0.0, 2.0 * r * np.where(r == 0, 0.0, f))
    if params.mu < 0.5:
        out = np.where(r == 0, np.inf, out)
    elif params.mu == 0.5:
        out = np.where(r == 0, 2.0 * _half_limit(params), out)
    return out if out.ndim else out[()]


def _half_limit(p):
    # r f(r^2) as r -> 0 when mu = 1/2: only the i = 0 Gamma component survives
    mix = gamma_mixture_weights(p)
    lam, th = mix.shapes[0], mix.scale
    return math.exp(mix.log_weights[0] - sc.gammaln(lam) - lam * math.log(th))


def envelope_cdf(params: MftrParams, r, method: str = "auto", tol: Tolerance | None = None,
                 mixture: GammaMixture | None = None):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be nonnegative")
    return cdf(params, r * r, method, tol, mixture)


@dataclass(frozen=True)
class DensityCurve:
    abscissae: np.ndarray
    values: np.ndarray
    domain: str
    kind: str

    def __post_init__(self):
        if self.domain not in ("snr", "envelope") or self.kind not in ("pdf", "cdf"):
            raise ValueError("domain must be snr|envelope and kind pdf|cdf")
        if np.any(np.diff(self.abscissae) <= 0):
            raise ValueError("abscissae must be strictly increasing")


def density_curve(params: MftrParams, grid, kind: str = "pdf", domain: str = "snr",
                  method: str = "auto") -> DensityCurve:
    grid = np.asarray(grid, dtype=float)
    fn = {("pdf", "snr"): pdf, ("cdf", "snr"): cdf,
          ("pdf", "envelope"): envelope_pdf, ("cdf", "envelope"): envelope_cdf}[(kind, domain)]
    return DensityCurve(grid, np.asarray(fn(params, grid, method)), domain, kind)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def second_moment(params: MftrParams) -> float:
    """``E{gamma**2}``."""
    p = validate(params)
    k, d, m, mu = p.k, p.delta, p.m, p.mu
    num = m * (1 + mu) * (1 + 2 * k) + mu * k * k * (1 + d * d / 2) * (1 + m)
    return p.gamma_bar ** 2 * num / (m * mu * (1 + k) ** 2)


def aof(params: MftrParams) -> float:
    """Amount of fading ``Var{gamma} / E{gamma}**2``."""
    p = validate(params)
    r = (p.k / (1 + p.k)) ** 2
    return (1 - r) * (1 + 1 / p.mu) + r * (1 + 1 / p.m) * (1 + p.delta ** 2 / 2) - 1


# ---------------------------------------------------------------------------
# special cases
# ---------------------------------------------------------------------------

def _hoyt(q, row="b", gamma_bar=1.0):
    if not 0 < q <= 1:
        raise ValueError("Hoyt q must lie in (0, 1]")
    k = (1 - q * q) / (2 * q * q)
    if row == "a":
        return MftrParams(k, 0.0, 0.5, 1.0, gamma_bar)
    # row (b): m = mu = 1 and q**2 = (1+K(1-D))/(1+K(1+D)); with D = 1 this gives the same K
    return MftrParams(k, 1.0, 1.0, 1.0, gamma_bar)


SPECIAL_CASES = {
    "one_sided_gaussian": lambda gamma_bar=1.0: MftrParams(0.0, 0.0, LARGE, 0.5, gamma_bar),
    "rayleigh": lambda gamma_bar=1.0: MftrParams(0.0, 0.0, 1.0, 1.0, gamma_bar),
    "hoyt": _hoyt,
    "nakagami_m": lambda m, gamma_bar=1.0: MftrParams(0.0, 0.0, LARGE, m, gamma_bar),
    "rician": lambda k, gamma_bar=1.0: MftrParams(k, 0.0, LARGE, 1.0, gamma_bar),
    "rician_shadowed": lambda k, m, gamma_bar=1.0: MftrParams(k, 0.0, m, 1.0, gamma_bar),
    "kappa_mu_shadowed": lambda kappa, mu, m, gamma_bar=1.0: MftrParams(kappa, 0.0, m, mu, gamma_bar),
    "kappa_mu": lambda kappa, mu, gamma_bar=1.0: MftrParams(kappa, 0.0, LARGE, mu, gamma_bar),
    "eta_mu": lambda eta, mu, gamma_bar=1.0: MftrParams((1 - eta) / (2 * eta), 0.0, mu, 2 * mu, gamma_bar),
    "twdp": lambda k, delta, gamma_bar=1.0: MftrParams(k, delta, LARGE, 1.0, gamma_bar),
    "two_wave": lambda delta, gamma_bar=1.0: MftrParams(LARGE, delta, LARGE, 1.0, gamma_bar),
    "ftr": lambda k, delta, m, gamma_bar=1.0: MftrParams(k, delta, m, 1.0, gamma_bar),
    "fluctuating_two_wave": lambda delta, m, gamma_bar=1.0: MftrParams(LARGE, delta, m, 1.0, gamma_bar),
}


def special_case_params(case: str, **shape) -> MftrParams:
    """MFTR parameters reproducing a classical fading model.

    Parameters that tend to infinity are replaced by ``1e6``.  Nakagami-m
    uses the exact ``K = 0, mu = m`` row; Hoyt defaults to row (b) with
    ``Delta = 1`` (``row="a"`` selects ``Delta = 0, m = 1/2``).
    """
    try:
        maker = SPECIAL_CASES[case]
    except KeyError:
        raise ValueError(f"unknown special case {case!r}; known: {sorted(SPECIAL_CASES)}") from None
    return validate(maker(**shape))
