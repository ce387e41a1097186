"""MFTR parameter container and moment generating function.

The MGF has a closed form in terms of a Legendre function and can also be
written as an average, over a uniform phase ``theta``, of conditional
kappa-mu shadowed MGFs with ``kappa_theta = K (1 + Delta cos theta)``.
Both representations are implemented so each can check the other.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
import math

import numpy as np

from . import specfun
from .specfun import Tolerance

__all__ = [
    "MftrParams",
    "ParameterError",
    "UnsupportedCombination",
    "DegenerateModelError",
    "validate",
    "is_integer_m",
    "r_polynomial",
    "mgf",
    "integer_m_terms",
    "mgf_from_terms",
    "kappa_theta",
    "conditional_mgf",
    "theta_average",
]


class ParameterError(ValueError):
    """One or more MFTR parameters are out of range.

    ``violations`` is a list of ``(field, value, reason)`` tuples.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{f}={v!r}: {why}" for f, v, why in self.violations)
        super().__init__(msg)


class UnsupportedCombination(ValueError):
    """Requested evaluation route cannot serve these parameters."""


class DegenerateModelError(ArithmeticError):
    """a(s) and |b(s)| coincide to working precision (K huge, Delta near 1)."""


@dataclass(frozen=True)
class MftrParams:
    """Shape parameters ``K, Delta, m, mu`` and the mean SNR.

    In the envelope domain ``gamma_bar`` is read as ``Omega = E{R^2}``.
    """

    k: float
    delta: float
    m: float
    mu: float
    gamma_bar: float = 1.0

    @property
    def omega(self) -> float:
        return self.gamma_bar

    def replace(self, **changes) -> "MftrParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def validate(params: MftrParams) -> MftrParams:
    """Return ``params`` unchanged, or raise :class:`ParameterError` listing every violation."""
    bad = []
    checks = [
        ("k", params.k, lambda v: v >= 0, "must be >= 0"),
        ("delta", params.delta, lambda v: 0 <= v <= 1, "must lie in [0, 1]"),
        ("m", params.m, lambda v: v > 0, "must be > 0"),
        ("mu", params.mu, lambda v: v > 0, "must be > 0"),
        ("gamma_bar", params.gamma_bar, lambda v: v > 0, "must be > 0"),
    ]
    for name, value, ok, why in checks:
        try:
            good = math.isfinite(value) and ok(value)
        except TypeError:
            good = False
        if not good:
            bad.append((name, value, why))
    if bad:
        raise ParameterError(bad)
    return params


def is_integer_m(params: MftrParams) -> bool:
    return float(params.m).is_integer() and params.m >= 1


def _ab(p: MftrParams, s):
    a = p.m * p.mu * (1 + p.k) - (p.mu * p.k + p.m) * p.gamma_bar * s
    b = -p.mu * p.k * p.delta * p.gamma_bar * s
    return a, b


def _factors(p: MftrParams, s):
    base = (1 + p.k) * p.m * p.mu
    a2 = base - (p.m + p.mu * p.k * (1 + p.delta)) * p.gamma_bar * s
    a3 = base - (p.m + p.mu * p.k * (1 - p.delta)) * p.gamma_bar * s
    return a2, a3


def r_polynomial(params: MftrParams, s, form: str = "quadratic"):
    """The quadratic ``R(s) = a(s)**2 - b(s)**2`` in either expanded or factored form."""
    p = params
    s = np.asarray(s)
    if form == "quadratic":
        g = p.gamma_bar
        c2 = ((p.m + p.mu * p.k) ** 2 - (p.mu * p.k * p.delta) ** 2) * g * g
        c1 = -2.0 * p.m * p.mu * (1 + p.k) * (p.m + p.mu * p.k) * g
        c0 = ((1 + p.k) * p.m * p.mu) ** 2
        out = c2 * s * s + c1 * s + c0
    elif form == "factored":
        a2, a3 = _factors(p, s)
        out = a2 * a3
    else:
        raise ValueError(f"unknown form {form!r}")
    return out if out.ndim else out[()]


def _log_prefactor(p: MftrParams) -> float:
    return p.m * math.log(p.m) + p.mu * math.log(p.mu) + p.mu * math.log1p(p.k)


def mgf(params: MftrParams, s, method: str = "auto", tol: Tolerance | None = None):
    """MGF ``E{exp(s gamma)}``.

    ``method``:
      * ``"closed_form"`` (and ``"auto"``): Legendre-function expression.  For
        integer ``m`` any complex ``s`` with ``Re s`` to the left of the
        poles works; for real ``m`` only real ``s``.
      * ``"theta_quadrature"``: phase average of :func:`conditional_mgf`.
    """
    p = params
    s_arr = np.asarray(s)
    if method == "theta_quadrature":
        out = theta_average(lambda th: conditional_mgf(p, th[:, None], s_arr.ravel()[None, :]),
                            tol or Tolerance(abs_tol=1e-300, rel_tol=1e-13))
        out = out.reshape(s_arr.shape)
        return out if out.ndim else out[()]
    if method not in ("auto", "closed_form"):
        raise ValueError(f"unknown method {method!r}")
    if np.iscomplexobj(s_arr):
        if not is_integer_m(p):
            raise UnsupportedCombination(
                "closed-form MGF at complex s needs integer m; use method='theta_quadrature'")
        out = _mgf_complex(p, s_arr.astype(complex))
    else:
        out = _mgf_real(p, s_arr.astype(float))
    out = np.where(s_arr == 0, 1.0, out)  # normalization holds exactly, not to rounding
    return out if out.ndim else out[()]


def _check_degenerate(p, s):
    a, b = _ab(p, s)
    gap = (a - np.abs(b)) / np.abs(a)
    if np.any(gap < 1e-12):
        raise DegenerateModelError("a(s) - |b(s)| vanishes relative to a(s); Legendre argument is singular")


def _mgf_real(p: MftrParams, s):
    a4 = p.mu * (1 + p.k) - p.gamma_bar * s
    a2, a3 = _factors(p, s)
    if np.any(a4 <= 0) or np.any(a2 <= 0) or np.any(a3 <= 0):
        raise ValueError("s lies at or beyond the first pole of the MGF")
    _check_degenerate(p, s)
    a, _ = _ab(p, s)
    # a direct quotient: an exp/log round trip would perturb z near 1, where
    # the degree-(m-1) Legendre function has slope ~ m**2/2
    z = np.maximum(a / (np.sqrt(a2) * np.sqrt(a3)), 1.0)
    logp = specfun._legendre_fn_log(p.m - 1.0, z)
    return np.exp(_log_scaled_prefactor(p, a2, a3, a4) + logp)


def _log_scaled_prefactor(p, a2, a3, a4):
    """log of m^m mu^mu (1+K)^mu a4^(m-mu) (a2 a3)^(-m/2).

    With every factor divided by its value at s = 0 the constants cancel and
    only logs of O(1) ratios are scaled by m, so large m does not amplify
    rounding.  Off the real axis a2, a3, a4 share a half plane, so the
    principal log of each ratio is the difference of principal logs.
    """
    base = (1 + p.k) * p.m * p.mu
    n4 = a4 / (p.mu * (1 + p.k))
    return -p.mu * np.log(n4) + 0.5 * p.m * (np.log(n4 / (a2 / base)) + np.log(n4 / (a3 / base)))


def _mgf_complex(p: MftrParams, s):
    # principal branches of each linear factor keep sqrt(R) analytic off the cut
    a4 = p.mu * (1 + p.k) - p.gamma_bar * s
    a2, a3 = _factors(p, s)
    a, b = _ab(p, s)
    sqrt_r = np.sqrt(a2) * np.sqrt(a3)
    z = a / sqrt_r
    # a**2 - R = b**2 gives z - 1 free of cancellation
    legendre = specfun.legendre_poly(int(p.m) - 1, z, zm1=b * b / (sqrt_r * (a + sqrt_r)))
    return np.exp(_log_scaled_prefactor(p, a2, a3, a4)) * legendre


def integer_m_terms(params: MftrParams):
    """Term structure of the integer-``m`` MGF written as a Laplace transform.

    ``M(-s) = sum_q D[q] s**-mu (1+a1/s)**e1[q] (1+a2/s)**e23[q] (1+a3/s)**e23[q] (1+a4/s)**(m-mu)``
    with ``e1 = m-1-2q``, ``e23 = q + 1/2 - m``.  Returns a dict with
    ``a`` (a1..a4), ``D``, ``e1``, ``e23``, ``e4``.  Each term inverts to a
    four-variable confluent hypergeometric, which is how the closed-form PDF
    and CDF series are assembled.
    """
    p = params
    if not is_integer_m(p):
        raise UnsupportedCombination("term structure exists for integer m only")
    m = int(p.m)
    g = p.gamma_bar
    c1 = p.m + p.mu * p.k
    c2 = p.m + p.mu * p.k * (1 + p.delta)
    c3 = p.m + p.mu * p.k * (1 - p.delta)
    base = (1 + p.k) * p.m * p.mu
    a = np.array([base / (c1 * g), base / (c2 * g), base / (c3 * g), (1 + p.k) * p.mu / g])
    logc, sign = specfun.legendre_coefficients(m - 1)
    q = np.arange(logc.size)
    e1 = (m - 1 - 2 * q).astype(float)
    log_d = (_log_prefactor(p) - p.mu * math.log(g) + logc + e1 * math.log(c1)
             - 0.5 * (m + e1) * math.log(c2 * c3))
    return {"a": a, "D": sign * np.exp(log_d), "e1": e1, "e23": q + 0.5 - m, "e4": p.m - p.mu}


def mgf_from_terms(params: MftrParams, s):
    """Evaluate ``M(-s)`` from :func:`integer_m_terms` (for ``Re s > 0``).

    The alternating ``q`` sum loses accuracy for large ``m``; it exists to
    exercise the term algebra, not as a production path.
    """
    t = integer_m_terms(params)
    s = np.asarray(s, dtype=complex)[..., None]
    a1, a2, a3, a4 = t["a"]
    terms = t["D"] * s ** (-params.mu) * (1 + a1 / s) ** t["e1"] * ((1 + a2 / s) * (1 + a3 / s)) ** t["e23"] \
        * (1 + a4 / s) ** t["e4"]
    out = terms.sum(axis=-1)
    return out if out.ndim else out[()]


def kappa_theta(params: MftrParams, theta):
    return params.k * (1.0 + params.delta * np.cos(theta))


def conditional_mgf(params: MftrParams, theta, s):
    """MGF conditioned on the phase ``theta`` (a kappa-mu shadowed MGF)."""
    p = params
    a, b = _ab(p, s)
    a4 = p.mu * (1 + p.k) - p.gamma_bar * s
    logm = _log_prefactor(p) + (p.m - p.mu) * np.log(a4 + 0j) - p.m * np.log(a + b * np.cos(theta) + 0j)
    out = np.exp(logm)
    if not (np.iscomplexobj(s) or np.iscomplexobj(theta)):
        out = out.real
    return out


def theta_average(fn, tol: Tolerance | None = None, n0: int = 32):
    """``(1/pi) int_0^pi fn(theta) dtheta`` for a smooth even periodic integrand.

    ``fn`` maps a 1-D array of angles to an array with angles on axis 0.  The
    trapezoidal rule is spectrally accurate here and nests under halving, so
    each refinement only evaluates the new midpoints.
    """
    tol = tol or Tolerance(abs_tol=1e-14, rel_tol=1e-11)
    n = n0
    th = np.linspace(0.0, np.pi, n + 1)
    vals = fn(th)
    total = vals.sum(axis=0) - 0.5 * (vals[0] + vals[-1])
    est = total / n
    while n < tol.max_terms:
        mids = (np.arange(n) + 0.5) * np.pi / n
        total = total + fn(mids).sum(axis=0)
        n *= 2
        new = total / n
        err = np.abs(new - est)
        if np.all(err <= tol.abs_tol + tol.rel_tol * np.abs(new)):
            return new
        est = new
    raise specfun.SpecialFunctionError("theta quadrature did not converge", partial=est)
