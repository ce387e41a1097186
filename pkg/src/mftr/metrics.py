"""Link-level performance metrics over MFTR fading.

Outage probability, average bit error rate for modulations whose
conditional error probability is ``sum_r alpha_r Q(sqrt(beta_r x))``, and
ergodic capacity, each with an exact route, a second independent route
and (where meaningful) a high-SNR asymptote.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import special as sc

from . import specfun
from .model import DegenerateModelError, MftrParams, UnsupportedCombination, integer_m_terms, is_integer_m, validate
from .specfun import Tolerance
from .stats import _log_i3_scaled, _theta_pdf, DENSITY_TOL, cdf, gamma_mixture_weights

__all__ = [
    "Modulation",
    "BPSK",
    "MetricResult",
    "CapacitySeriesError",
    "db_to_linear",
    "outage_probability",
    "outage_asymptotic",
    "avg_ber",
    "avg_ber_asymptotic",
    "ergodic_capacity",
]


@dataclass(frozen=True)
class Modulation:
    """Conditional error probability ``sum_r alpha_r Q(sqrt(beta_r x))``."""

    terms: tuple

    def __post_init__(self):
        t = tuple((float(a), float(b)) for a, b in self.terms)
        if not t:
            raise ValueError("modulation needs at least one (alpha, beta) term")
        if any(not (a > 0 and b > 0) for a, b in t):
            raise ValueError("alpha and beta must be positive")
        object.__setattr__(self, "terms", t)

    def cep(self, x):
        x = np.asarray(x, dtype=float)
        return sum(a * specfun.q_function(np.sqrt(b * x)) for a, b in self.terms)


BPSK = Modulation(((1.0, 2.0),))


@dataclass(frozen=True)
class MetricResult:
    value: float
    method: str
    diagnostics: dict = field(default_factory=dict)


class CapacitySeriesError(ArithmeticError):
    pass


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


# ---------------------------------------------------------------------------
# outage
# ---------------------------------------------------------------------------

def _threshold(r_th):
    r = np.asarray(r_th, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r_th must be > 0")
    return np.expm1(r * math.log(2.0))


def outage_probability(params: MftrParams, r_th, method: str = "auto", tol: Tolerance | None = None):
    """``P(log2(1+gamma) < r_th) = F(2**r_th - 1)``."""
    return cdf(params, _threshold(r_th), method=method, tol=tol)


def outage_asymptotic(params: MftrParams, r_th):
    """Leading high-SNR term ``F(x) ~ C x**mu``; ``C`` involves the phase integral I3."""
    p = validate(params)
    g_th = _threshold(r_th)
    muk = p.mu * p.k
    if p.delta > 0 and 2.0 * muk * p.delta / (muk * (1 + p.delta) + p.m) >= 1.0:
        raise specfun.SpecialFunctionError(
            "2F1 argument rounds to 1; m is too small relative to mu*K for the closed form")
    log_c = ((p.mu - 1) * math.log(p.mu) + p.mu * math.log1p(p.k) - sc.gammaln(p.mu)
             - p.mu * math.log(p.gamma_bar) + _log_i3_scaled(p))
    out = math.exp(log_c) * g_th ** p.mu
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# bit error rate
# ---------------------------------------------------------------------------

def _ber_closed_form(p: MftrParams, mod: Modulation, tol):
    t = integer_m_terms(p)
    total = 0.0
    for alpha, beta in mod.terms:
        x = -2.0 * t["a"] / beta
        pref = alpha * 2.0 ** (p.mu - 1) * math.exp(sc.gammaln(p.mu + 0.5) - sc.gammaln(p.mu + 1)) \
            / (beta ** p.mu * math.sqrt(math.pi))
        for d, e1, e23 in zip(t["D"], t["e1"], t["e23"]):
            b = [-e1, -e23, -e23, -t["e4"]]
            total += pref * d * specfun.lauricella_fd4(p.mu + 0.5, b, p.mu + 1.0, x, tol)
    return total


_U_CUT = 45.0


def _ber_quadrature(p: MftrParams, mod: Modulation, tol, cdf_method):
    """``alpha/(2 sqrt(pi)) int_0^inf u**-1/2 e**-u F(2u/beta) du`` per modulation term.

    ``[0, U]`` uses Gauss-Jacobi nodes with the ``u**(mu-1/2)`` factor in the
    weight (``F ~ x**mu`` near 0).  ``U`` is where ``F`` has reached 1 to
    double precision, in which case the rest is an incomplete gamma
    function, or 45, beyond which a shifted Gauss-Laguerre rule is ample.
    """
    mix = gamma_mixture_weights(p, Tolerance(abs_tol=1e-13, rel_tol=1e-14, max_terms=50_000))
    lam_top = float(mix.shapes[-1])
    x_full = mix.scale * (lam_top + 9.0 * math.sqrt(lam_top) + 40.0)
    F = lambda x: cdf(p, x, method=cdf_method, mixture=mix)
    total = 0.0
    nodes_used = 0
    for alpha, beta in mod.terms:
        U = min(0.5 * beta * x_full, _U_CUT)
        prev = None
        n = 32
        while True:
            t, w = specfun._jacobi01(n, 0.0, p.mu - 0.5)
            u = U * t
            head = U ** (p.mu + 0.5) * float(np.dot(w, np.exp(-u) * F(2.0 * u / beta) / u ** p.mu))
            if prev is not None and abs(head - prev) <= tol.abs_tol + tol.rel_tol * abs(head):
                break
            if n >= 4096:
                raise specfun.SpecialFunctionError("BER quadrature did not converge", partial=head)
            prev = head
            n *= 2
        if U < _U_CUT:
            tail = math.sqrt(math.pi) * sc.gammaincc(0.5, U)
        else:
            tl, tw = _LAGUERRE32
            tail = math.exp(-U) * float(np.dot(tw, F(2.0 * (U + tl) / beta) / np.sqrt(U + tl)))
        total += alpha / (2.0 * math.sqrt(math.pi)) * (head + tail)
        nodes_used = max(nodes_used, n)
    return total, nodes_used


_LAGUERRE32 = np.polynomial.laguerre.laggauss(32)


def avg_ber(params: MftrParams, mod: Modulation = BPSK, method: str = "auto",
            tol: Tolerance | None = None, full_output: bool = False):
    """Average error probability ``E{sum_r alpha_r Q(sqrt(beta_r gamma))}``.

    ``closed_form`` (integer m) sums Lauricella ``F_D^(4)`` terms, one per
    Legendre coefficient; ``quadrature`` integrates the CDF against the
    derivative of the error probability by generalized Gauss-Laguerre rules.
    ``auto`` picks the closed form when m is an integer.
    """
    p = validate(params)
    tol = tol or Tolerance(abs_tol=1e-300, rel_tol=1e-11)
    if method == "auto":
        method = "closed_form" if is_integer_m(p) else "quadrature"
    if method == "closed_form":
        if not is_integer_m(p):
            raise UnsupportedCombination("closed-form BER needs a positive integer m")
        res = MetricResult(_ber_closed_form(p, mod, Tolerance(rel_tol=1e-13)), method,
                           {"terms": int(p.m + 1) // 2})
    elif method == "quadrature":
        v, n = _ber_quadrature(p, mod, tol, "gamma_series")
        res = MetricResult(v, method, {"nodes": n})
    else:
        raise ValueError(f"unknown method {method!r}")
    return res if full_output else res.value


def avg_ber_asymptotic(params: MftrParams, mod: Modulation = BPSK):
    """High-SNR average BER, decaying as ``gamma_bar**-mu``.

    Uses ``F(x) ~ C x**mu`` with the phase integral written as a Legendre
    function of ``(m + mu K) / sqrt(c2 c3)``.
    """
    p = validate(params)
    muk = p.mu * p.k
    c1 = p.m + muk
    c2c3 = c1 * c1 - (muk * p.delta) ** 2
    if c2c3 <= 1e-12 * c1 * c1:
        raise DegenerateModelError("Legendre argument is singular for these parameters")
    z = c1 / math.sqrt(c2c3)
    leg = specfun.legendre_fn_real_degree(p.m - 1.0, z)
    u, v = muk / p.m, muk * p.delta / p.m
    # m log m - (m/2) log(c2 c3), kept small for large m
    log_c = (-0.5 * p.m * math.log1p(2.0 * u + u * u - v * v) + p.mu * math.log(p.mu) + p.mu * math.log1p(p.k)
             - sc.gammaln(p.mu + 1) - p.mu * math.log(p.gamma_bar))
    s = sum(a * 2.0 ** (p.mu - 1) * math.exp(sc.gammaln(p.mu + 0.5)) / (b ** p.mu * math.sqrt(math.pi))
            for a, b in mod.terms)
    return math.exp(log_c) * float(leg) * s


# ---------------------------------------------------------------------------
# ergodic capacity
# ---------------------------------------------------------------------------

def _u_ratios(lam, z, kmax, extra=12.0):
    """``J_k / J_0`` for ``k = 1..kmax`` with ``J_k = Gamma(k+lam) U(k+lam, lam+1, z)``.

    ``J_k`` is the recessive solution of
    ``k J_{k+1} = (2k + lam - 1 + z) J_k - (k + lam - 1) J_{k-1}``, so the
    ratios are run backward from well beyond ``kmax`` and multiplied up from
    the exact ``J_0 = Gamma(lam) z**-lam``.  The start index is chosen so the
    dominant solution is suppressed by about ``exp(-4 extra)``.
    """
    lam = np.asarray(lam, dtype=float)
    top = int((math.sqrt(kmax) + extra / math.sqrt(z)) ** 2) + 10
    rho = np.ones_like(lam)
    out = np.empty((kmax, lam.size))
    for k in range(top, 0, -1):
        rho = (k + lam - 1.0) / ((2 * k + lam - 1.0 + z) - k * rho)
        if k <= kmax:
            out[k - 1] = rho
    return np.cumprod(out, axis=0)


_CAP_RUN = 20
_CAP_KMAX = 1 << 18
_CAP_TOP = 1 << 22


def _capacity_series(p: MftrParams, tol):
    mix = gamma_mixture_weights(p, Tolerance(abs_tol=min(tol.abs_tol, 1e-12), rel_tol=1e-14,
                                             max_terms=50_000))
    w, lam = mix.weights, mix.shapes
    z = 1.0 / mix.scale
    kmax = 256
    while True:
        if (math.sqrt(kmax) + 12.0 / math.sqrt(z)) ** 2 > _CAP_TOP or kmax > _CAP_KMAX:
            raise CapacitySeriesError(f"inner series needs more than {kmax // 2} terms")
        r = _u_ratios(lam, z, kmax)
        k = np.arange(1, kmax + 1)
        terms = (r @ w) / k
        sums = np.cumsum(terms)
        small = terms < tol.abs_tol * sums
        # first index ending a run of _CAP_RUN consecutive small terms
        run = np.convolve(small.astype(int), np.ones(_CAP_RUN, dtype=int), mode="valid")
        hit = np.nonzero(run == _CAP_RUN)[0]
        if hit.size:
            stop = hit[0] + _CAP_RUN
            monotone = bool(np.all(np.diff(terms[:stop]) <= 1e-15 * terms[0]))
            diag = {"components": int(lam.size), "k_terms": int(stop), "tail_mass_bound": mix.tail_mass_bound,
                    "monotone": monotone}
            return sums[stop - 1] / math.log(2.0), diag
        kmax *= 4


def _capacity_quadrature(p: MftrParams, tol):
    """``int log2(1+x) f(x) dx`` against the phase-integral density."""
    dtol = DENSITY_TOL
    g = p.gamma_bar
    dens = lambda x: np.log1p(x) * _theta_pdf(p, x, dtol)
    # origin panel with the x**(mu-1) factor in the weight
    e0 = min(g, 1.0) * 1e-3
    u, wj = specfun._jacobi01(48, 0.0, p.mu - 1.0)
    origin = e0 ** p.mu * float(np.dot(wj, np.log1p(e0 * u) * _theta_pdf(p, e0 * u, dtol, drop_power=True)))
    # upper limit: walk out until the integrand is negligible
    hi = 10.0 * g
    while dens(np.array([hi]))[0] * hi > 1e-17 * max(1.0, math.log1p(g)):
        hi *= 2.0
    edges = np.geomspace(e0, hi, 97)
    x16, w16 = _GL
    lo_e, hi_e = edges[:-1], edges[1:]

    def panel(a, b):
        half = 0.5 * (b - a)
        nodes = (0.5 * (a + b))[:, None] + half[:, None] * x16[None, :]
        return (dens(nodes.ravel()).reshape(nodes.shape) * w16).sum(axis=1) * half

    est = panel(lo_e, hi_e)
    total = origin
    panels = 0
    for _ in range(40):
        mid = 0.5 * (lo_e + hi_e)
        left, right = panel(lo_e, mid), panel(mid, hi_e)
        child = left + right
        ok = np.abs(child - est) <= 1e-3 * tol.rel_tol * np.abs(child) + 1e-16
        total += child[ok].sum()
        panels += int(ok.sum())
        bad = ~ok
        if not bad.any():
            return total / math.log(2.0), {"panels": panels, "upper_limit": hi}
        lo_e, hi_e = np.concatenate([lo_e[bad], mid[bad]]), np.concatenate([mid[bad], hi_e[bad]])
        est = np.concatenate([left[bad], right[bad]])
    raise specfun.SpecialFunctionError("capacity quadrature did not converge", partial=total / math.log(2.0))


_GL = np.polynomial.legendre.leggauss(16)


def ergodic_capacity(params: MftrParams, tol: Tolerance | None = None, method: str = "series",
                     full_output: bool = False):
    """``E{log2(1 + gamma)}`` in bits/s/Hz.

    ``series`` sums the Gamma mixture against a log expansion, each term a
    scaled Kummer U function.  The inner sum stops after 20 consecutive terms
    below ``tol.abs_tol`` times the running sum; if its cap is reached the
    quadrature route is used instead and the diagnostics say so.
    """
    p = validate(params)
    tol = tol or Tolerance(abs_tol=1e-12, rel_tol=1e-10)
    if method == "series":
        try:
            v, diag = _capacity_series(p, tol)
            res = MetricResult(v, "series", diag)
        except CapacitySeriesError as exc:
            v, diag = _capacity_quadrature(p, tol)
            diag["fallback"] = str(exc)
            res = MetricResult(v, "quadrature", diag)
    elif method == "quadrature":
        v, diag = _capacity_quadrature(p, tol)
        res = MetricResult(v, "quadrature", diag)
    else:
        raise ValueError(f"unknown method {method!r}")
    return res if full_output else res.value
