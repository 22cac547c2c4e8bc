"""Half-line quadrature for the inverse square root.

The operator integral is (1/pi) int_0^inf t^{-1/2} (omega + t - Delta)^{-1} dt.
The rule below stores nodes t_i and weights w_i such that

    sum_i w_i * t_i^{-1/2} * F(t_i)  ~  int_0^inf t^{-1/2} F(t) dt

for F smooth with F(t) = O(1/t).  Construction: the substitution t = tau^2
removes the endpoint singularity; composite Gauss-Legendre is applied on
[0, tau_lo] and on geometrically graded panels up to tau_end; the remaining
tail is mapped by u = 1/tau onto a single finite panel, so the rule covers
the whole half-line with no hard truncation.

The closed form int_0^inf t^{-1/2} (1+t)^{-1} dt = pi serves as a built-in
self-test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["QuadratureRule"]


def _panel(a: float, b: float, pts: int):
    x, v = np.polynomial.legendre.leggauss(pts)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * x, half * v


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for the t^{-1/2}-weighted half-line integral."""

    nodes: np.ndarray
    weights: np.ndarray
    t_max: float
    n_panels: int

    def __post_init__(self):
        n = np.asarray(self.nodes, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64)
        if n.shape != w.shape or n.ndim != 1:
            raise DomainError("nodes and weights must be matching 1D arrays")
        if np.any(n <= 0) or np.any(w <= 0):
            raise DomainError("quadrature nodes and weights must be positive")
        n.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "nodes", n)
        object.__setattr__(self, "weights", w)

    @classmethod
    def build(
        cls, omega: float = 1.0, n_nodes: int = 400, t_max_factor: float = 200.0
    ) -> "QuadratureRule":
        """Default rule for integrals shifted by ``omega`` (real, > 0)."""
        if not (omega > 0 and np.isfinite(omega)):
            raise DomainError(f"quadrature shift must be positive, got {omega}")
        if n_nodes < 40:
            raise DomainError(f"need at least 40 nodes, got {n_nodes}")
        if not t_max_factor >= 10:
            raise DomainError(f"t_max_factor must be >= 10, got {t_max_factor}")
        s = np.sqrt(omega)
        tau_lo = min(s, 1.0)
        tau_end = t_max_factor * max(s, 1.0)
        n_geo = int(np.ceil(np.log2(tau_end / tau_lo)))
        n_panels = n_geo + 2
        pts = max(6, int(round(n_nodes / n_panels)))

        nodes = []
        weights = []
        edges = [0.0, tau_lo] + [min(tau_lo * 2.0**k, tau_end) for k in range(1, n_geo + 1)]
        for a, b in zip(edges[:-1], edges[1:]):
            tau, v = _panel(a, b, pts)
            nodes.append(tau * tau)
            weights.append(2.0 * v * tau)
        # tail tau >= tau_end via u = 1/tau: dt * t^{-1/2} = 2 du / u^2
        u, v = _panel(0.0, 1.0 / tau_end, pts)
        nodes.append(1.0 / (u * u))
        weights.append(2.0 * v / (u**3))

        t = np.concatenate(nodes)
        w = np.concatenate(weights)
        order = np.argsort(t)
        return cls(nodes=t[order], weights=w[order], t_max=float(t.max()), n_panels=n_panels)

    @property
    def scaled_weights(self) -> np.ndarray:
        """w_i * t_i^{-1/2} / pi, the coefficients of the operator sum."""
        return self.weights / (np.sqrt(self.nodes) * np.pi)

    def self_test_error(self) -> float:
        """Relative error on int_0^inf t^{-1/2}(1+t)^{-1} dt = pi."""
        approx = np.sum(self.weights / (np.sqrt(self.nodes) * (1.0 + self.nodes)))
        return abs(approx - np.pi) / np.pi
