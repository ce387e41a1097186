"""Monte Carlo samplers for the MFTR model.

``sample_physical`` builds the received power from its ray description:
two fluctuating specular rays plus diffuse Gaussian scattering in cluster 1
and ``mu - 1`` further clusters.  ``sample_mixture`` draws a phase, a
negative-binomial mixture index (as a Gamma-mixed Poisson) and a Gamma
variate, and works for real ``mu``.

Draws are produced in fixed-size blocks, each with its own Philox stream
keyed by ``(seed, route, block)``.  The output is therefore identical for
any number of worker threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .model import MftrParams, validate

__all__ = [
    "PhysicalAmplitudes",
    "SampleBatch",
    "EmpiricalPdf",
    "BLOCK_SIZE",
    "solve_amplitudes",
    "sample_physical",
    "sample_mixture",
    "empirical_pdf",
]

BLOCK_SIZE = 1 << 16
_ROUTE_KEY = {"physical": 1, "mixture": 2}


@dataclass(frozen=True)
class PhysicalAmplitudes:
    v1: float
    v2: float
    u: tuple
    sigma2: float

    def k_delta(self, mu: int) -> tuple[float, float]:
        """Reconstruct ``(K, Delta)`` from the amplitudes."""
        spec = self.v1 ** 2 + self.v2 ** 2 + sum(x * x for x in self.u)
        k = spec / (2.0 * self.sigma2 * mu)
        delta = 2.0 * self.v1 * self.v2 / spec if spec > 0 else 0.0
        return k, delta


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    route: str
    params: MftrParams
    domain: str = "snr"


@dataclass(frozen=True)
class EmpiricalPdf:
    """Binned density estimate: abscissae, densities and (optionally) bin widths."""

    abscissae: np.ndarray
    densities: np.ndarray
    widths: np.ndarray | None = None

    def __post_init__(self):
        x = np.asarray(self.abscissae, dtype=float)
        d = np.asarray(self.densities, dtype=float)
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "densities", d)
        if x.ndim != 1 or x.shape != d.shape or x.size < 2:
            raise ValueError("need matching 1-D abscissae and densities with at least 2 points")
        if np.any(np.diff(x) <= 0):
            raise ValueError("abscissae must be strictly increasing")
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ValueError("densities must be finite and nonnegative")
        if self.widths is not None:
            object.__setattr__(self, "widths", np.asarray(self.widths, dtype=float))

    @property
    def count(self) -> int:
        return int(self.abscissae.size)

    def implied_widths(self) -> np.ndarray:
        if self.widths is not None:
            return self.widths
        x = self.abscissae
        edges = np.concatenate([[x[0] - 0.5 * (x[1] - x[0])], 0.5 * (x[1:] + x[:-1]),
                                [x[-1] + 0.5 * (x[-1] - x[-2])]])
        return np.diff(edges)

    def mass(self) -> float:
        return float(np.sum(self.densities * self.implied_widths()))


def solve_amplitudes(params: MftrParams, fraction_elsewhere: float = 0.0) -> PhysicalAmplitudes:
    """Specular amplitudes and diffuse variance realizing ``params``.

    The canonical allocation puts all specular power ``S = 2 sigma2 mu K`` in
    cluster 1.  ``fraction_elsewhere`` moves that share of ``S`` into equal
    specular components of clusters ``2..mu``; it must leave at least
    ``Delta * S`` in cluster 1.
    """
    p = validate(params)
    if not float(p.mu).is_integer():
        raise ValueError(f"physical model needs an integer number of clusters, got mu={p.mu}")
    mu = int(p.mu)
    f = float(fraction_elsewhere)
    if f < 0 or f > 1:
        raise ValueError("fraction_elsewhere must lie in [0, 1]")
    if f > 0 and mu < 2:
        raise ValueError("fraction_elsewhere > 0 needs at least two clusters")
    if f > 1.0 - p.delta + 1e-15:
        raise ValueError(f"infeasible allocation: cluster 1 must keep at least Delta*S (fraction <= {1 - p.delta})")
    sigma2 = p.gamma_bar / (2.0 * mu * (1.0 + p.k))
    s = 2.0 * sigma2 * mu * p.k
    own = (1.0 - f) * s
    hi = math.sqrt(max(own + p.delta * s, 0.0))
    lo = math.sqrt(max(own - p.delta * s, 0.0))
    # hi - lo = 2 Delta S / (hi + lo) keeps v2 accurate as Delta -> 0
    v1 = 0.5 * (hi + lo)
    v2 = p.delta * s / (hi + lo) if hi > 0 else 0.0
    u = tuple([math.sqrt(f * s / (mu - 1))] * (mu - 1)) if mu > 1 else ()
    return PhysicalAmplitudes(v1, v2, u, sigma2)


def _block_rng(seed: int, route: str, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_ROUTE_KEY[route], int(block)))
    return np.random.Generator(np.random.Philox(ss))


def _physical_block(p: MftrParams, amp: PhysicalAmplitudes, rng, count):
    mu = int(p.mu)
    sd = math.sqrt(amp.sigma2)
    zeta = rng.gamma(p.m, 1.0 / p.m, count)
    root = np.sqrt(zeta)
    phi = rng.uniform(0.0, 2.0 * np.pi, (2, count))
    xy = rng.normal(0.0, sd, (mu, 2, count))
    re = root * (amp.v1 * np.cos(phi[0]) + amp.v2 * np.cos(phi[1])) + xy[0, 0]
    im = root * (amp.v1 * np.sin(phi[0]) + amp.v2 * np.sin(phi[1])) + xy[0, 1]
    w = re * re + im * im
    if mu > 1:
        vphi = rng.uniform(0.0, 2.0 * np.pi, (mu - 1, count))
        u = np.asarray(amp.u)[:, None]
        re = root * u * np.cos(vphi) + xy[1:, 0]
        im = root * u * np.sin(vphi) + xy[1:, 1]
        w = w + (re * re + im * im).sum(axis=0)
    return w


def _mixture_block(p: MftrParams, rng, count):
    theta = rng.uniform(0.0, np.pi, count)
    kap = p.k * (1.0 + p.delta * np.cos(theta))
    g = rng.gamma(p.m, 1.0, count) * (p.mu * kap / p.m)
    idx = rng.poisson(g)
    return rng.gamma(p.mu + idx, 1.0, count) * (p.gamma_bar / (p.mu * (1.0 + p.k)))


def _run_blocks(n, seed, route, make_block, shards):
    if n < 1:
        raise ValueError("n must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    nblocks = -(-n // BLOCK_SIZE)
    counts = [min(BLOCK_SIZE, n - b * BLOCK_SIZE) for b in range(nblocks)]

    def work(block_range):
        return [make_block(_block_rng(seed, route, b), counts[b]) for b in block_range]

    if shards == 1 or nblocks == 1:
        parts = work(range(nblocks))
    else:
        bounds = np.linspace(0, nblocks, min(shards, nblocks) + 1).astype(int)
        ranges = [range(bounds[j], bounds[j + 1]) for j in range(len(bounds) - 1)]
        with ThreadPoolExecutor(max_workers=len(ranges)) as ex:
            parts = [blk for chunk in ex.map(work, ranges) for blk in chunk]
    return np.concatenate(parts)


def _finish(values, domain):
    if domain == "snr":
        return values
    if domain == "envelope":
        return np.sqrt(values)
    raise ValueError(f"unknown domain {domain!r}")


def sample_physical(params: MftrParams, n: int, seed: int = 0, shards: int = 1,
                    amplitudes: PhysicalAmplitudes | None = None, domain: str = "snr") -> SampleBatch:
    """Draw ``n`` received-power (or envelope) samples from the ray model; needs integer ``mu``."""
    p = validate(params)
    amp = amplitudes or solve_amplitudes(p)
    if not float(p.mu).is_integer():
        raise ValueError("physical route needs integer mu; use sample_mixture")
    vals = _run_blocks(int(n), seed, "physical", lambda rng, c: _physical_block(p, amp, rng, c), shards)
    return SampleBatch(_finish(vals, domain), int(seed), "physical", p, domain)


def sample_mixture(params: MftrParams, n: int, seed: int = 0, shards: int = 1,
                   domain: str = "snr") -> SampleBatch:
    """Draw ``n`` samples through the phase / Gamma-Poisson / Gamma composition (any real ``mu``)."""
    p = validate(params)
    vals = _run_blocks(int(n), seed, "mixture", lambda rng, c: _mixture_block(p, rng, c), shards)
    return SampleBatch(_finish(vals, domain), int(seed), "mixture", p, domain)


def empirical_pdf(values, bins=50, domain: str = "snr", range=None) -> EmpiricalPdf:
    """Density-normalized histogram (bin mass / bin width) at bin centers.

    ``values`` may be a :class:`SampleBatch` or an array.  ``domain="envelope"``
    takes square roots of SNR-domain batches first; raw arrays are used as is.
    """
    if isinstance(values, SampleBatch):
        v = values.values
        if domain == "envelope" and values.domain == "snr":
            v = np.sqrt(v)
    else:
        v = values  # raw arrays are taken to be in the requested domain already
    v = np.asarray(v, dtype=float).ravel()
    if v.size < 2:
        raise ValueError("need at least two samples")
    if np.ndim(bins) == 0 and int(bins) < 2:
        raise ValueError("need at least two bins")
    counts, edges = np.histogram(v, bins=bins, range=range)
    widths = np.diff(edges)
    if np.any(widths <= 0):
        raise ValueError("bin edges must be strictly increasing")
    dens = counts / (v.size * widths)
    return EmpiricalPdf(0.5 * (edges[1:] + edges[:-1]), dens, widths)
