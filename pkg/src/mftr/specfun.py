"""Special functions needed by the MFTR statistics.

Only the parameter domains reached by the fading-model formulas are
supported.  Every routine works on numpy arrays where that is cheap and
raises :class:`SpecialFunctionError` instead of returning NaN when a series
or quadrature fails to settle.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import special as sc

__all__ = [
    "Tolerance",
    "LaplaceInversionConfig",
    "SpecialFunctionError",
    "legendre_coefficients",
    "legendre_poly",
    "legendre_fn_real_degree",
    "gauss_2f1",
    "kummer_1f1",
    "kummer_u",
    "reg_lower_gamma",
    "inverse_laplace",
    "lauricella_fd4",
    "q_function",
]

MAX_LEGENDRE_DEGREE = 2000


@dataclass(frozen=True)
class Tolerance:
    """Truncation control shared by series and adaptive quadratures."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be > 0, got {self.abs_tol!r}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol!r}")
        if int(self.max_terms) < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")


@dataclass(frozen=True)
class LaplaceInversionConfig:
    """Settings for :func:`inverse_laplace`.

    ``terms`` is the number of Bromwich terms summed before Euler averaging
    (``euler_summation``) or the number of contour nodes (``fixed_talbot``).
    ``truncation_shift`` is the Abate-Whitt contour abscissa ``A``; the
    discretization error is roughly ``exp(-A)``.
    """

    method: str = "euler_summation"
    terms: int = 32
    truncation_shift: float = 25.0

    def __post_init__(self):
        if self.method not in ("euler_summation", "fixed_talbot"):
            raise ValueError(f"unknown inversion method {self.method!r}")
        if int(self.terms) < 8:
            raise ValueError(f"terms must be >= 8, got {self.terms!r}")


class SpecialFunctionError(ArithmeticError):
    """A series or quadrature did not converge, or inputs left the supported domain."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# Legendre polynomials and functions
# ---------------------------------------------------------------------------

def legendre_coefficients(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(log|c_q|, sign)`` for ``P_n(z) = sum_q c_q z**(n-2q)``.

    ``c_q = (-1)**q (2n-2q)! / (2**n q! (n-q)! (n-2q)!)``, built from log-Gamma
    so that large degrees do not overflow.
    """
    n = int(n)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n > MAX_LEGENDRE_DEGREE:
        raise OverflowError(f"Legendre degree {n} exceeds supported bound {MAX_LEGENDRE_DEGREE}")
    q = np.arange(n // 2 + 1)
    logc = (sc.gammaln(2 * n - 2 * q + 1) - sc.gammaln(q + 1) - sc.gammaln(n - q + 1)
            - sc.gammaln(n - 2 * q + 1) - n * math.log(2.0))
    sign = np.where(q % 2 == 0, 1.0, -1.0)
    return logc, sign


def legendre_poly(n: int, z, zm1=None):
    """Legendre polynomial ``P_n(z)`` for real or complex ``z``.

    Evaluated with Bonnet's recurrence, which is forward-stable for the
    arguments produced by the MGF (real ``z >= 1`` or complex values on
    inversion contours).  The explicit coefficient sum of
    :func:`legendre_coefficients` cancels catastrophically near ``z = 1``
    once ``n`` exceeds ~20 and is kept for the term-wise algebra only.

    Bonnet still loses about ``n**2`` ulps next to ``z = 1``.  When the
    caller can supply ``zm1 = z - 1`` without cancellation, points with
    ``n (n+1) |z-1| / 2 <= 1`` use the expansion
    ``sum_k C(n,k) C(n+k,k) ((z-1)/2)**k``, whose terms shrink at least
    geometrically there.
    """
    n = int(n)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n > MAX_LEGENDRE_DEGREE:
        raise OverflowError(f"Legendre degree {n} exceeds supported bound {MAX_LEGENDRE_DEGREE}")
    z = np.asarray(z)
    p_prev = np.ones_like(z, dtype=np.result_type(z, float))
    if n == 0:
        return p_prev if p_prev.ndim else p_prev[()]
    p = z * 1.0
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * z * p - k * p_prev) / (k + 1)
    if zm1 is not None:
        w = np.broadcast_to(np.asarray(zm1), p.shape) * 0.5
        near = 0.5 * n * (n + 1) * np.abs(2.0 * w) <= 1.0
        if np.any(near):
            w = w[near]
            term = np.ones_like(w)
            total = np.ones_like(w)
            for k in range(n):
                term = term * w * ((n - k) * (n + k + 1) / ((k + 1) ** 2))
                total = total + term
                if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
                    break
            p = np.array(p, copy=True)
            p[near] = total
    return p if np.ndim(p) else p[()]


def _positive_series(log_first, ratio, tol, max_terms, chunk=256):
    """Sum a series of nonnegative terms given a term-ratio callback.

    ``ratio(n)`` returns t[n+1]/t[n] for an integer array ``n``.  Returns
    ``(log_sum, n_used)``; the sum is accumulated relative to the running
    maximum term so huge values never overflow.
    """
    log_scale = log_first
    total = 1.0
    last = 1.0
    start = 0
    while start < max_terms:
        n = np.arange(start, start + chunk)
        r = ratio(n)
        terms = last * np.cumprod(r)
        total += terms.sum()
        last = terms[-1]
        start += chunk
        if last <= tol * total and r[-1] < 1.0:
            return log_scale + math.log(total), start
        if total > 1e250:
            log_scale += math.log(total)
            last /= total
            total = 1.0
    raise SpecialFunctionError(
        f"series did not converge in {max_terms} terms", partial=log_scale + math.log(total))


def legendre_fn_real_degree(nu: float, z, tol: Tolerance | None = None):
    """Legendre function of the first kind ``P_nu(z)`` for real degree and ``z >= 1``.

    Uses ``P_nu(z) = ((1+z)/2)**nu 2F1(-nu, -nu; 1; (z-1)/(z+1))`` (a Pfaff
    transform of the defining hypergeometric), whose terms are all
    nonnegative, so the sum carries no cancellation.
    """
    return np.exp(_legendre_fn_log(nu, z, tol))


def _legendre_fn_log(nu, z, tol=None):
    tol = tol or Tolerance(rel_tol=1e-16, max_terms=2_000_000)
    z = np.asarray(z, dtype=float)
    if np.any(z < 1.0):
        raise ValueError("legendre_fn_real_degree requires z >= 1")
    nu = float(nu)
    out = np.empty(z.shape)
    for idx, zz in np.ndenumerate(z):
        t = (zz - 1.0) / (zz + 1.0)
        pref = nu * math.log((1.0 + zz) / 2.0)
        if t == 0.0 or nu == 0.0 or nu == -1.0:
            out[idx] = pref
            continue
        if float(nu).is_integer() and nu > 0:
            # terminating sum; all terms positive
            k = np.arange(int(nu) + 1)
            logc = 2 * (sc.gammaln(nu + 1) - sc.gammaln(nu - k + 1) - sc.gammaln(k + 1)) + k * math.log(t)
            out[idx] = pref + sc.logsumexp(logc)
            continue
        a = -nu

        def ratio(n, a=a, t=t):
            return (a + n) ** 2 / (n + 1.0) ** 2 * t

        log_sum, _ = _positive_series(0.0, ratio, tol.rel_tol, tol.max_terms)
        out[idx] = pref + log_sum
    return out if out.ndim else out[()]


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def gauss_2f1(a: float, b: float, c: float, x: float, tol: Tolerance | None = None) -> float:
    """Gauss hypergeometric ``2F1(a, b; c; x)`` for real parameters and ``x < 1``.

    Negative arguments are mapped into ``[0, 1)`` with the Pfaff
    transformation ``(1-x)**(-a) 2F1(a, c-b; c; x/(x-1))``.  The parameter
    pair is ordered so that the transformed series has nonnegative terms
    whenever that is possible.
    """
    sign, logv = _gauss_2f1_log(a, b, c, x, tol)
    return sign * math.exp(logv)


def _gauss_2f1_log(a, b, c, x, tol=None):
    tol = tol or Tolerance(rel_tol=1e-16, max_terms=5_000_000)
    a, b, c, x = float(a), float(b), float(c), float(x)
    if c <= 0 and c.is_integer():
        raise SpecialFunctionError(f"c={c} is a nonpositive integer")
    if x >= 1.0:
        raise SpecialFunctionError(f"2F1 argument {x} outside the supported range x < 1")
    if x == 0.0 or a == 0.0 or b == 0.0:
        return 1.0, 0.0
    log_pref = 0.0
    if x < 0:
        # pick the Pfaff variant with positive series terms when available
        if a > 0 and c - b > 0 or not (b > 0 and c - a > 0):
            log_pref = -a * math.log1p(-x)
            a, b = a, c - b
        else:
            log_pref = -b * math.log1p(-x)
            a, b = b, c - a
        x = x / (x - 1.0)
        if x == 0.0 or b == 0.0:
            return 1.0, log_pref
    if a > 0 and b > 0 and c > 0:
        def ratio(n):
            return (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x

        log_sum, _ = _positive_series(0.0, ratio, tol.rel_tol, tol.max_terms)
        return 1.0, log_pref + log_sum
    # general signs: plain summation, terminating when a or b is a nonpositive integer
    total, term, n = 1.0, 1.0, 0
    quiet = 0
    while n < tol.max_terms:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        n += 1
        if term == 0.0:
            break
        past_turn = n > max(abs(a), abs(b), abs(c))
        if abs(term) <= tol.rel_tol * abs(total) and past_turn:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    else:
        raise SpecialFunctionError("2F1 series did not converge", partial=total)
    return math.copysign(1.0, total), log_pref + math.log(abs(total))


# ---------------------------------------------------------------------------
# Confluent hypergeometric functions
# ---------------------------------------------------------------------------

def kummer_1f1(a: float, b: float, z):
    """Log-scaled Kummer function: returns ``(log|1F1(a; b; z)|, sign)``.

    For ``a > 0, b > 0, z >= 0`` every Taylor term is positive, so the series
    is summed in log space over a window centred on its largest term.  The
    large-``z`` expansion ``Gamma(b)/Gamma(a) e**z z**(a-b) sum_k ...`` takes
    over pointwise once a term below 1e-17 of the sum is reached before the
    terms turn around; for large ``a`` that needs ``z >> a**2``, far past any
    fixed switch point.
    """
    a, b = float(a), float(b)
    if not b > 0:
        raise ValueError("kummer_1f1 requires b > 0")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("kummer_1f1 requires z >= 0")
    if a <= 0:
        return _kummer_1f1_signed(a, b, z)
    flat = z.ravel()
    logv = np.zeros(flat.shape)
    corr, asym = _asymptotic_sum(a, b, flat)
    ser = (flat > 0) & ~asym
    if np.any(ser):
        logv[ser] = _kummer_log_window(a, b, flat[ser])
    if np.any(asym):
        za = flat[asym]
        logv[asym] = sc.gammaln(b) - sc.gammaln(a) + za + (a - b) * np.log(za) + np.log(corr[asym])
    logv = logv.reshape(z.shape)
    sign = np.ones(z.shape)
    if z.ndim == 0:
        return logv[()], sign[()]
    return logv, sign


_ASYM_MAX_TERMS = 40


def _asym_coeffs(a, b, nterms):
    # (b-a)_k (1-a)_k / k!
    c = [1.0]
    for k in range(nterms):
        c.append(c[-1] * (b - a + k) * (1 - a + k) / (k + 1))
    return np.array(c)


def _asymptotic_sum(a, b, z):
    """Partial sums of the large-z expansion and where they can be trusted.

    A point qualifies when some term, before the terms start growing, drops
    below 1e-17 of the running sum.  The recessive companion
    ``Gamma(b)/Gamma(b-a) (-z)**-a`` must also be negligible; relative to the
    dominant part it is ``Gamma(a)/Gamma(b-a) z**(b-2a) e**-z``.
    """
    c = _asym_coeffs(a, b, _ASYM_MAX_TERMS)
    total = np.ones_like(z)
    prev = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    ok = np.zeros(z.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k in range(1, _ASYM_MAX_TERMS + 1):
            if c[k] == 0.0:
                # terminating expansion: exact apart from the companion
                ok |= active
                break
            term = c[k] / z ** k
            mag = np.abs(term)
            active &= mag <= prev
            total = np.where(active, total + term, total)
            small = active & (mag <= 1e-17 * np.abs(total))
            ok |= small
            active &= ~small
            prev = mag
            if not active.any():
                break
        companion = sc.gammaln(a) - sc.gammaln(b - a) + (b - 2.0 * a) * np.log(z) - z
    ok &= (z > 40.0) & (companion < -39.0) & (total > 0)
    return total, ok


def _stirling_tail(x):
    # log-gamma remainder after the Stirling leading terms, x >= 20
    r = 1.0 / (x * x)
    return (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r * (1.0 / 1680.0 - r / 1188.0)))) / x


def log_poch(a, n):
    """log of the rising factorial (a)_n = Gamma(a+n)/Gamma(a) for a > 0, n >= 0.

    A plain gammaln difference loses about eps * a * log(a) in absolute terms,
    which is already 3e-9 at a = 1e6. For a >= 20 the Stirling leading terms
    are differenced analytically instead.
    """
    a = np.asarray(a, dtype=float)
    n = np.asarray(n, dtype=float)
    a, n = np.broadcast_arrays(a, n)
    out = np.empty(a.shape)
    small = a < 20.0
    if small.any():
        out[small] = sc.gammaln(a[small] + n[small]) - sc.gammaln(a[small])
    big = ~small
    if big.any():
        ab, nb = a[big], n[big]
        out[big] = ((ab - 0.5) * np.log1p(nb / ab) + nb * np.log(ab + nb) - nb
                    + _stirling_tail(ab + nb) - _stirling_tail(ab))
    return out if out.ndim else float(out)


def _kummer_log_window(a, b, z, eps=1e-17):
    """Sum the positive Taylor series outward from its largest term.

    Terms are generated by their ratio in both directions from the peak, so
    each point only pays for the terms it needs and no term is exponentiated.
    """
    logz = np.log(z)
    # location of the largest term: (a+n) z = (b+n)(n+1)
    p = b + 1.0 - z
    disc = p * p - 4.0 * (b - a * z)
    # no real root: every term ratio is below one and the first term is largest
    peak = np.where(disc > 0, np.floor(np.maximum(0.0, 0.5 * (-p + np.sqrt(np.maximum(disc, 0.0))))), 0.0)
    log_peak = log_poch(a, peak) - log_poch(b, peak) - sc.gammaln(peak + 1.0) + peak * logz
    total = np.ones_like(z)
    # right tail
    idx = np.arange(z.size)
    t = np.ones_like(z)
    n = peak.copy()
    zz = z
    step = 0
    while idx.size:
        t = t * (a + n) * zz / ((b + n) * (n + 1.0))
        total[idx] += t
        n += 1.0
        step += 1
        if step % 8 == 0:
            keep = t > eps * total[idx]
            idx, t, n, zz = idx[keep], t[keep], n[keep], zz[keep]
    # left tail
    idx = np.nonzero(peak > 0)[0]
    t = np.ones(idx.size)
    n = peak[idx]
    zz = z[idx]
    step = 0
    while idx.size:
        t = t * (b + n - 1.0) * n / ((a + n - 1.0) * zz)
        total[idx] += t
        n -= 1.0
        step += 1
        keep = n > 0
        if step % 8 == 0:
            keep &= t > eps * total[idx]
        idx, t, n, zz = idx[keep], t[keep], n[keep], zz[keep]
    return log_peak + np.log(total)


def _kummer_1f1_signed(a, b, z, max_terms=100_000):
    flat = z.ravel()
    total = np.ones_like(flat)
    term = np.ones_like(flat)
    for n in range(max_terms):
        term = term * (a + n) * flat / ((b + n) * (n + 1.0))
        total = total + term
        if n > abs(a) and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    else:
        raise SpecialFunctionError("1F1 series did not converge", partial=total)
    logv = np.log(np.abs(total)).reshape(z.shape)
    sign = np.sign(total).reshape(z.shape)
    if z.ndim == 0:
        return logv[()], sign[()]
    return logv, sign


def kummer_u(a, b: float, z: float, tol: Tolerance | None = None, log: bool = False):
    """Tricomi confluent hypergeometric function ``U(a, b, z)``.

    Evaluates ``(1/Gamma(a)) int_0^inf exp(-z t) t**(a-1) (1+t)**(b-a-1) dt``.
    After substituting ``t = exp(y)`` the integrand is analytic in the strip
    ``|Im y| < pi/2`` and decays at least exponentially at both ends, so the
    trapezoidal rule converges geometrically; the step is halved until two
    estimates agree.  ``a`` may be an array sharing ``b`` and ``z``; with
    ``log=True`` the natural log is returned, which avoids overflow for
    large ``a``.
    """
    tol = tol or Tolerance(rel_tol=1e-13)
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    b, z = float(b), float(z)
    if np.any(a_arr <= 0) or not z > 0:
        raise ValueError("kummer_u requires a > 0 and z > 0")
    out = np.array([_log_u_integral(aa, b, z, tol) - sc.gammaln(aa) for aa in a_arr])
    if not log:
        out = np.exp(out)
    return out if np.ndim(a) else out[0]


def _log_u_integral(a, b, z, tol):
    """log of int_0^inf exp(-z t) t**(a-1) (1+t)**(b-a-1) dt."""

    def logg(y):
        return -z * np.exp(y) + a * y + (b - a - 1.0) * np.logaddexp(0.0, y)

    # bracket the mass: log g ~ a*y on the left, ~ -z e^y on the right
    y_hi = math.log((abs(a) + abs(b) + 50.0) / z) + 3.0
    y_lo = min(-1.0, -60.0 / a - 2.0)
    coarse = np.linspace(y_lo, y_hi, 4001)
    lg = logg(coarse)
    top = lg.max()
    keep = np.nonzero(lg > top - 48.0)[0]
    lo = coarse[max(keep[0] - 1, 0)]
    hi = coarse[min(keep[-1] + 1, coarse.size - 1)]
    n = 64
    prev = None
    while n <= 1 << 20:
        y, h = np.linspace(lo, hi, n + 1, retstep=True)
        cur = sc.logsumexp(logg(y)) + math.log(h)
        if prev is not None and abs(cur - prev) <= tol.rel_tol:
            return cur
        prev = cur
        n *= 2
    raise SpecialFunctionError(f"U integral did not converge for a={a}, b={b}, z={z}",
                               partial=math.exp(prev))


def reg_lower_gamma(a, x):
    """Regularized lower incomplete gamma ``P(a, x) = gamma(a, x) / Gamma(a)``."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(a <= 0) or np.any(x < 0):
        raise ValueError("reg_lower_gamma requires a > 0 and x >= 0")
    return sc.gammainc(a, x)


def q_function(x):
    """Gaussian tail probability ``Q(x) = erfc(x / sqrt 2) / 2``."""
    return 0.5 * sc.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# Numerical inverse Laplace transform
# ---------------------------------------------------------------------------

_EULER_M = 11
_EULER_BINOM = np.array([math.comb(_EULER_M, k) for k in range(_EULER_M + 1)], dtype=float) / 2.0 ** _EULER_M


def inverse_laplace(F, t, cfg: LaplaceInversionConfig | None = None):
    """Invert a Laplace transform numerically at ``t > 0``.

    ``F`` must accept a complex ndarray and return values of the same shape.
    ``euler_summation`` is the Abate-Whitt Fourier-series method with Euler
    averaging of the last ``11`` partial sums; ``fixed_talbot`` deforms the
    Bromwich line into the Abate-Valko Talbot contour and needs ``F``
    analytic off the negative real axis.
    """
    cfg = cfg or LaplaceInversionConfig()
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise ValueError("inverse_laplace requires t > 0")
    if cfg.method == "euler_summation":
        out = _euler(F, t_arr, int(cfg.terms), float(cfg.truncation_shift))
    else:
        out = _talbot(F, t_arr, int(cfg.terms))
    return out if np.ndim(t) else out[0]


def _euler(F, t, n, A, n_max=1024):
    """Abate-Whitt Bromwich series with Euler averaging.

    Starting from ``n`` terms, points whose last two Euler means still differ
    are recomputed with twice as many terms; sharply peaked densities need
    the transform far out along the line.
    """
    res = np.empty(t.shape)
    spread = np.full(t.shape, np.inf)
    todo = np.arange(t.size)
    while True:
        r, sp = _euler_fixed(F, t[todo], n, A)
        better = sp < spread[todo]
        res[todo[better]] = r[better]
        spread[todo[better]] = sp[better]
        todo = todo[spread[todo] > 1e-12 + 1e-10 * np.abs(res[todo])]
        n *= 2
        if todo.size == 0 or n > n_max:
            break
    bad = spread > 1e-3 * np.maximum(np.abs(res), 1e-300) + 1e-6
    if np.any(bad):
        raise SpecialFunctionError("Euler acceleration failed to stabilize", partial=res)
    return res


def _euler_fixed(F, t, n, A):
    k = np.arange(n + _EULER_M + 1)
    s = (A + 2j * np.pi * k)[:, None] / (2.0 * t)[None, :]
    vals = np.real(F(s))
    vals[0] *= 0.5
    signs = np.where(k % 2 == 0, 1.0, -1.0)[:, None]
    partial = np.cumsum(signs * vals, axis=0)
    tail = partial[n:n + _EULER_M + 1]
    if not np.all(np.isfinite(tail)):
        raise SpecialFunctionError("transform returned non-finite values on the Bromwich line")
    acc = _EULER_BINOM @ tail
    # error proxy: Euler means over the last two windows should agree
    prev = _EULER_BINOM @ partial[n - 1:n + _EULER_M]
    scale = np.exp(A / 2.0) / t
    return scale * acc, scale * np.abs(acc - prev)


def _talbot(F, t, M):
    theta = np.arange(1, M) * np.pi / M
    cot = 1.0 / np.tan(theta)
    r = 2.0 * M / (5.0 * t)
    S = r[None, :] * (theta * (cot + 1j))[:, None]
    sigma = theta + (theta * cot - 1.0) * cot
    first = 0.5 * np.real(F(r.astype(complex))) * np.exp(r * t)
    body = np.real(np.exp(t[None, :] * S) * F(S) * (1.0 + 1j * sigma)[:, None])
    return r / M * (first + body.sum(axis=0))


# ---------------------------------------------------------------------------
# Lauricella F_D in four variables
# ---------------------------------------------------------------------------

_FD_NOISE = 5e-12


@lru_cache(maxsize=128)
def _jacobi01(n: int, alpha: float, beta: float):
    """Nodes/weights on [0, 1] for weight t**beta (1-t)**alpha."""
    x, w = sc.roots_jacobi(n, alpha, beta)
    t = 0.5 * (1.0 + x)
    w = w / 2.0 ** (alpha + beta + 1.0)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def lauricella_fd4(a: float, b, c: float, x, tol: Tolerance | None = None) -> float:
    """Lauricella ``F_D^(4)(a; b1..b4; c; x1..x4)`` through its Euler integral.

    ``Gamma(c)/(Gamma(a)Gamma(c-a)) int_0^1 t**(a-1)(1-t)**(c-a-1) prod(1-x_i t)**(-b_i) dt``
    with Gauss-Jacobi nodes that absorb both endpoint singularities; the node
    count starts at 64 and doubles until the relative change is below
    ``tol.rel_tol`` (floored at 5e-12, the noise level of the rules).
    """
    tol = tol or Tolerance(rel_tol=1e-12)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    if b.shape != (4,) or x.shape != (4,):
        raise ValueError("lauricella_fd4 takes exactly four b and four x values")
    if not (c > a > 0):
        raise SpecialFunctionError(f"need c > a > 0, got a={a}, c={c}")
    if np.any(x >= 1):
        raise SpecialFunctionError("all x_i must be < 1")
    if np.all((x == 0) | (b == 0)):
        return 1.0
    log_norm = sc.gammaln(c) - sc.gammaln(a) - sc.gammaln(c - a)
    logprod = lambda t: -(b[None, :] * np.log1p(-x[None, :] * t[:, None])).sum(axis=1)
    big = float(np.max(-x))
    # scipy's Jacobi nodes and weights carry ~1e-13 relative noise, so successive
    # rules cannot agree more tightly than that however smooth the integrand is
    rtol = max(tol.rel_tol, _FD_NOISE)
    prev = None
    n = 64 if big <= 8.0 else 16
    while n <= 8192:
        if big <= 8.0:
            t, w = _jacobi01(n, c - a - 1.0, a - 1.0)
            cur = float(np.dot(w, np.exp(logprod(t))))
        else:
            cur = _fd_panels(a, c, logprod, big, n)
        cur *= math.exp(log_norm)
        if prev is not None and abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
        n *= 2
    raise SpecialFunctionError("Gauss-Jacobi quadrature did not converge", partial=prev)


def _fd_panels(a, c, logprod, big, n):
    """Euler integral split geometrically when some ``x_i`` is large and negative.

    The product varies on the scale ``t ~ 1/|x|``, so ``[0, 1/2]`` is cut at
    ``1/(4|x|)``, 2/(4|x|), ... with Gauss-Jacobi on the first piece (``t**(a-1)``)
    and Gauss-Legendre on the rest; ``[1/2, 1]`` carries ``(1-t)**(c-a-1)``.
    """
    e0 = 0.25 / big
    u, w = _jacobi01(n, 0.0, a - 1.0)
    total = e0 ** a * float(np.dot(w, np.exp(logprod(e0 * u) + (c - a - 1.0) * np.log1p(-e0 * u))))
    npan = max(1, int(math.ceil(math.log2(0.5 / e0))))
    edges = np.geomspace(e0, 0.5, npan + 1)
    gx, gw = np.polynomial.legendre.leggauss(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    t = (0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[None, :]).ravel()
    f = np.exp(logprod(t) + (a - 1.0) * np.log(t) + (c - a - 1.0) * np.log1p(-t)).reshape(npan, n)
    total += float(((f * gw[None, :]).sum(axis=1) * 0.5 * (hi - lo).ravel()).sum())
    v, wv = _jacobi01(n, 0.0, c - a - 1.0)
    t = 1.0 - 0.5 * v
    total += 0.5 ** (c - a) * float(np.dot(wv, np.exp(logprod(t) + (a - 1.0) * np.log(t))))
    return total
