"""Moment generating function and SNR densities.

Walks through the three ways the library evaluates the MFTR law and shows
that they agree: the closed-form MGF against its theta-average, and the
gamma-series, theta-integral and MGF-inversion densities against each other.
Finishes with the classical models the MFTR family contains.

Run:  python3 demos/01_mgf_and_densities.py
"""
import numpy as np

import mftr
from mftr.model import mgf

p = mftr.MftrParams(k=8.0, delta=0.9, m=8.0, mu=2.0, gamma_bar=2.0)
print("parameters:", p.as_dict())

# The MGF E{exp(s*gamma)} is defined for s below the first pole; the two routes
# (closed form with a Legendre function, and a direct theta-average) agree.
s = -np.array([0.01, 0.1, 1.0, 10.0])
closed = np.array([mgf(p, x) for x in s])
quad = np.array([mgf(p, x, method="theta_quadrature") for x in s])
print("\nMGF at s =", s)
print("  closed form      ", closed)
print("  theta quadrature ", quad)
print("  max rel diff      %.2e" % np.max(np.abs(closed / quad - 1)))

h = 1e-6
print("  dM/ds at 0 = %.8f  (mean SNR %.1f)" % ((mgf(p, h) - mgf(p, -h)) / (2 * h), p.gamma_bar))

# Densities: integer m allows all three evaluation routes.
x = np.array([0.05, 0.5, 1.0, 2.0, 4.0, 8.0])
routes = ("gamma_series", "theta_integral", "mgf_inversion")
print("\nSNR pdf")
print("  x        " + "  ".join(f"{r:>16s}" for r in routes))
table = np.array([mftr.pdf(p, x, method=r) for r in routes])
for i, xi in enumerate(x):
    print(f"  {xi:<8g} " + "  ".join(f"{v:16.10f}" for v in table[:, i]))
print("  cdf at the same points:", np.round(mftr.cdf(p, x), 8))

# The gamma mixture behind the default route: weights plus a certified tail.
mix = mftr.gamma_mixture_weights(p)
print("\ngamma mixture: %d terms, weight sum %.15f, tail bound %.1e"
      % (mix.weights.size, mix.weights.sum(), mix.tail_mass_bound))

# Real (non-integer) m: the mixture and the theta-integral still apply.
q = p.replace(m=2.5, mu=1.5)
print("\nreal m, mu:", q.as_dict())
print("  gamma series  ", mftr.pdf(q, x, method="gamma_series"))
print("  theta integral", mftr.pdf(q, x, method="theta_integral"))

# Classical models are corners of the parameter space.
print("\nspecial cases, SNR pdf at x = 1 with unit mean")
rayleigh = mftr.special_case_params("rayleigh")
print("  rayleigh   %.12f  (exp(-1) = %.12f)" % (mftr.pdf(rayleigh, 1.0), np.exp(-1.0)))
for case, shape in [("nakagami_m", dict(m=3.0)), ("rician", dict(k=5.0)),
                    ("hoyt", dict(q=0.5)), ("twdp", dict(k=10.0, delta=0.7)),
                    ("kappa_mu_shadowed", dict(kappa=4.0, mu=2.0, m=3.0))]:
    sp = mftr.special_case_params(case, **shape)
    print(f"  {case:<18s} {mftr.pdf(sp, 1.0):.12f}   {sp.as_dict()}")

print("\namount of fading: MFTR %.6f, rayleigh %.1f" % (mftr.aof(p), mftr.aof(rayleigh)))
