"""Monte Carlo sampling.

Two independent generators are provided. The physical route builds each
cluster from Gaussian diffuse components plus two specular waves with a
uniform phase difference, all under a common Gamma shadowing. The mixture
route draws a Gamma shape index first. Both are reproducible block by block,
so the output does not depend on the number of worker threads.

Run:  python3 demos/03_sampling.py
"""
import numpy as np
from scipy import stats

import mftr
from mftr import montecarlo as mc

p = mftr.MftrParams(k=8.0, delta=0.9, m=8.0, mu=2.0, gamma_bar=2.0)
n = 200_000

amp = mc.solve_amplitudes(p)
print("physical amplitudes: V1 = %.4f, V2 = %.4f, sigma^2 = %.4f" % (amp.v1, amp.v2, amp.sigma2))
print("recovered (K, Delta):", amp.k_delta(int(p.mu)))

phys = mftr.sample_physical(p, n, seed=11).values
mixed = mftr.sample_mixture(p, n, seed=12).values
print("\nsample means: physical %.4f, mixture %.4f (exact %.1f)" % (phys.mean(), mixed.mean(), p.gamma_bar))
print("second moment: physical %.4f, exact %.4f" % (np.mean(phys ** 2), mftr.stats.second_moment(p)))

# Kolmogorov-Smirnov against the exact CDF, and between the two routes.
print("KS physical vs cdf:  p = %.3f" % stats.kstest(phys, lambda x: mftr.cdf(p, x)).pvalue)
print("KS mixture vs cdf:   p = %.3f" % stats.kstest(mixed, lambda x: mftr.cdf(p, x)).pvalue)
print("KS physical vs mixture: p = %.3f" % stats.ks_2samp(phys, mixed).pvalue)

# Same seed, different shard counts: identical bytes.
a = mftr.sample_physical(p, 50_000, seed=5).values
b = mftr.sample_physical(p, 50_000, seed=5, shards=4).values
print("\n1 shard vs 4 shards identical:", a.tobytes() == b.tobytes())

# Histogram in the envelope domain against the exact envelope density.
env = mftr.sample_physical(p, n, seed=13, domain="envelope").values
h = mftr.empirical_pdf(env, bins=12, domain="envelope")
print("\n   r      histogram   exact")
for x, d in zip(h.abscissae, h.densities):
    print(f"{x:6.3f}  {d:10.4f}  {float(mftr.envelope_pdf(p, x)):8.4f}")
