"""Outage probability, bit error rate and ergodic capacity.

Each metric has an exact evaluation and a high-SNR asymptote. The asymptotes
decay as SNR**(-mu): the number of clusters sets the diversity order, while
the specular parameters only shift the curve.

Run:  python3 demos/04_link_metrics.py
"""
import math

import numpy as np

import mftr

base = mftr.MftrParams(k=15.0, delta=0.5, m=5.0, mu=2.0)
snr_db = np.arange(0, 61, 10)

print("outage probability at 1 bit/s/Hz")
print(" dB      exact         asymptote     ratio")
for db in snr_db:
    p = base.replace(gamma_bar=10 ** (db / 10))
    po, pa = float(mftr.outage_probability(p, 1.0)), float(mftr.outage_asymptotic(p, 1.0))
    print(f"{db:3d}  {po:12.5e}  {pa:12.5e}  {po / pa:8.4f}")

print("\nBPSK bit error rate: closed form, quadrature and asymptote")
for db in snr_db[:5]:
    p = base.replace(gamma_bar=10 ** (db / 10))
    cf = mftr.avg_ber(p, method="closed_form")
    qd = mftr.avg_ber(p, method="quadrature")
    print(f"{db:3d}  {cf:.10e}  {qd:.10e}  {mftr.avg_ber_asymptotic(p):.4e}")

# Diversity order read off the slope of log BER over 50..60 dB.
for mu in (1.0, 2.0, 3.0):
    p = base.replace(mu=mu)
    lo, hi = (mftr.avg_ber(p.replace(gamma_bar=10 ** (d / 10))) for d in (50, 60))
    print(f"mu = {mu:g}: BER slope {math.log10(hi / lo):+.3f} decades per decade")

# Other modulations are sums of a*Q(sqrt(b*gamma)) terms.
qpsk_like = mftr.Modulation(((1.0, 1.0),))
print("\nBER with a = 1, b = 1 at 10 dB: %.6e" % mftr.avg_ber(base.replace(gamma_bar=10.0), qpsk_like))

print("\nergodic capacity (bits/s/Hz)")
for db in (0, 10, 20, 30):
    p = base.replace(gamma_bar=10 ** (db / 10))
    s = mftr.ergodic_capacity(p)
    q = mftr.ergodic_capacity(p, method="quadrature")
    print(f"{db:3d}  series {s:.9f}  quadrature {q:.9f}  AWGN {math.log2(1 + p.gamma_bar):.4f}")
