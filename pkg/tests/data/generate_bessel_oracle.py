"""Regenerate bessel_oracle.json with mpmath at 50 digits.

The frozen file pins 100 log-spaced real arguments in [1e-6, 1e2] and 100
complex arguments with Re z in [0.1, 50], Im z in [-50, 50], drawn from a
fixed seed, together with K0 and K1 reference values.
"""

import json

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def pair(z):
    k0 = mp.besselk(0, z)
    k1 = mp.besselk(1, z)
    return [float(mp.re(k0)), float(mp.im(k0)), float(mp.re(k1)), float(mp.im(k1))]


real_args = np.logspace(-6, 2, 100)
rng = np.random.default_rng(20260823)
re = rng.uniform(0.1, 50.0, 100)
im = rng.uniform(-50.0, 50.0, 100)

doc = {
    "real": [[float(r)] + pair(mp.mpf(float(r))) for r in real_args],
    "complex": [
        [float(a), float(b)] + pair(mp.mpc(float(a), float(b)))
        for a, b in zip(re, im)
    ],
}
with open("bessel_oracle.json", "w") as fh:
    json.dump(doc, fh, indent=1)
    fh.write("\n")
print("wrote", len(doc["real"]), "real and", len(doc["complex"]), "complex entries")
