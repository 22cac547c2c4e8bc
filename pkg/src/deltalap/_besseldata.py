"""Shared constants for the modified-Bessel kernels.

Regime layout for K0/K1 evaluation (argument z, Re z > 0):

* ``|z| <= Z_SERIES`` — ascending power series (cancellation there costs at
  most ``exp(2*Z_SERIES)*eps ~ 3e-13``);
* ``Z_SERIES < |z| < Z_ASYM``, z real — Chebyshev fits of ``exp(z)*sqrt(z)*K(z)``
  on [Z_SERIES, Z_ASYM] (uniform relative error below 1e-14);
* ``Z_SERIES < |z| < Z_ASYM``, z off-axis — Gauss-Legendre quadrature of the
  Laplace representation on a rotated contour (see ``special._quad_pair``),
  non-oscillatory on the whole half-plane ``Re z > 0``;
* ``|z| >= Z_ASYM`` — large-argument expansion, truncated well before its
  optimal index (first omitted term below 1e-13 relative).
"""

import numpy as np

EULER_GAMMA = 0.5772156649015329

Z_SERIES = 4.0
Z_ASYM = 16.0

N_SERIES_TERMS = 36
N_ASYM_TERMS = 25

# Chebyshev coefficients of exp(z)*sqrt(z)*K_nu(z) on [Z_SERIES, Z_ASYM].
K0E_CHEB = np.array([
    1.235195267220059e+00,
    1.137137260972887e-02,
    -3.5777975252082976e-03,
    1.1284418291497135e-03,
    -3.5671563392654707e-04,
    1.1299832555479594e-04,
    -3.586438834974739e-05,
    1.1403482237971646e-05,
    -3.631959005331194e-06,
    1.1585786234146534e-06,
    -3.701241073321857e-07,
    1.1840406492816928e-07,
    -3.7926852792457726e-08,
    1.2163388878481041e-08,
    -3.905346153744964e-09,
    1.255258824087456e-09,
    -4.038789456130048e-10,
    1.3007420428113524e-10,
    -4.1929724060623653e-11,
    1.3528611181504072e-11,
    -4.368130378479848e-12,
    1.411560523639968e-12,
    -4.566194166072976e-13,
    1.483104826688916e-13,
    -4.821430611079042e-14,
    1.4658772280309395e-14,
    -4.620824795595048e-15,
    5.187421373679611e-16,
    -5.637253116415665e-16,
])

K1E_CHEB = np.array([
    1.3095613982610266e+00,
    -3.62692265693251e-02,
    1.1714139536027379e-02,
    -3.789469170011504e-03,
    1.2276689168665383e-03,
    -3.982586016859635e-04,
    1.2935473684183956e-04,
    -4.206203728440333e-05,
    1.3691504321890345e-05,
    -4.460987486107444e-06,
    1.4547868204348263e-06,
    -4.7481977770292495e-07,
    1.5509384642465147e-07,
    -5.069606467955623e-08,
    1.6582403098162746e-08,
    -5.4274491184860735e-09,
    1.7774687086176363e-09,
    -5.824387562285963e-10,
    1.9095392700013894e-10,
    -6.263500829106761e-11,
    2.055513613725154e-11,
    -6.748594020775962e-12,
    2.2164415896511477e-12,
    -7.277014240234449e-13,
    2.389889052939656e-13,
    -7.970252810231425e-14,
    2.635439759144682e-14,
    -9.567059788062986e-15,
    2.4434477429896762e-15,
])

# a_k(nu) of the large-argument expansion, nu = 0 and 1:
# K_nu(z) ~ sqrt(pi/(2 z)) exp(-z) * sum_k a_k / z^k,
# a_0 = 1, a_k = a_{k-1} * (4 nu^2 - (2k-1)^2) / (8 k).


def _asym_coeffs(nu: int, n: int) -> np.ndarray:
    a = np.empty(n)
    a[0] = 1.0
    for k in range(1, n):
        a[k] = a[k - 1] * (4.0 * nu * nu - (2.0 * k - 1.0) ** 2) / (8.0 * k)
    return a


K0_ASYM = _asym_coeffs(0, N_ASYM_TERMS)
K1_ASYM = _asym_coeffs(1, N_ASYM_TERMS)

# Gauss-Legendre rule on [0, 1] for the cosh-integral regime.
_gl_x, _gl_w = np.polynomial.legendre.leggauss(100)
COSH_NODES = 0.5 * (_gl_x + 1.0)
COSH_WEIGHTS = 0.5 * _gl_w
