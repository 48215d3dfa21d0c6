"""Closed-form Barenblatt solutions of u_t = Δ log u and identities they satisfy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import RadialGrid, RadialProfile, radial_derivative, radial_laplacian_values


@dataclass(frozen=True)
class BarenblattSpec:
    k: float
    T: float
    N: int

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if int(self.N) != self.N or self.N < 3:
            raise ValueError(f"N must be an integer >= 3, got {self.N}")


def _remaining(t, T):
    return np.maximum(T - np.asarray(t, dtype=float), 0.0)


def _pos_power(x, p):
    # exp/log of the clamped base; 0 stays 0 for p > 0
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = np.exp(p * np.log(x[pos]))
    return out if out.ndim else float(out)


def barenblatt_value(r, t, spec: BarenblattSpec):
    """``B_k(r, t) = 2(N-2) (T-t)_+^(N/(N-2)) / (k + (T-t)_+^(2/(N-2)) r^2)``."""
    n = spec.N
    tau = _remaining(t, spec.T)
    num = 2.0 * (n - 2) * _pos_power(tau, n / (n - 2))
    den = spec.k + _pos_power(tau, 2.0 / (n - 2)) * np.asarray(r, dtype=float) ** 2
    out = num / den
    return out if np.ndim(out) else float(out)


def barenblatt_tail(t, spec: BarenblattSpec):
    """Far-field law ``(c, k_tail)`` of ``B_k(., t)`` or ``None`` once extinct."""
    n = spec.N
    tau = float(_remaining(t, spec.T))
    if tau <= 0.0:
        return None
    # B_k = 2(N-2) tau / (k tau^(-2/(N-2)) + r^2)
    return 2.0 * (n - 2) * tau, spec.k * math.exp(-2.0 / (n - 2) * math.log(tau))


def rescaled_barenblatt_value(r, k: float, N: int):
    """``2(N-2) / (k + r^2)``: the stationary profile in self-similar variables."""
    out = 2.0 * (N - 2) / (k + np.asarray(r, dtype=float) ** 2)
    return out if np.ndim(out) else float(out)


def rescaled_barenblatt_profile(grid: RadialGrid, k: float) -> RadialProfile:
    n = grid.dimension
    return RadialProfile(grid, rescaled_barenblatt_value(grid.nodes, k, n), (2.0 * (n - 2), k))


def barenblatt_profile(grid: RadialGrid, t: float, spec: BarenblattSpec) -> RadialProfile:
    if spec.N != grid.dimension:
        raise ValueError("Barenblatt dimension differs from grid dimension")
    return RadialProfile(grid, barenblatt_value(grid.nodes, t, spec), barenblatt_tail(t, spec))


def weight_value(r, alpha: float, k2: float, N: int):
    """Weight ``(2(N-2)/(k2 + r^2))^alpha`` of the weighted L^1 space."""
    out = rescaled_barenblatt_value(r, k2, N) ** alpha
    return out if np.ndim(out) else float(out)


def _require_weight_dimension(N: int):
    if N <= 4:
        raise ValueError(f"the weight exponent (N-4)/2 must be positive; N={N} is not allowed")


def laplacian_weight_identity(r, k2: float, N: int):
    """Closed-form ``Δ B^alpha`` for ``alpha = (N-4)/2``; negative everywhere."""
    _require_weight_dimension(N)
    r = np.asarray(r, dtype=float)
    alpha = (N - 4) / 2.0
    out = -(N - 4) * (2.0 * r**2 + k2 * N) / (k2 + r**2) ** 2 * weight_value(r, alpha, k2, N)
    return out if np.ndim(out) else float(out)


def weight_radial_derivative(r, k2: float, N: int):
    """``d/dr B^alpha = -2 alpha r / (k2 + r^2) B^alpha``."""
    _require_weight_dimension(N)
    r = np.asarray(r, dtype=float)
    alpha = (N - 4) / 2.0
    out = -2.0 * alpha * r / (k2 + r**2) * weight_value(r, alpha, k2, N)
    return out if np.ndim(out) else float(out)


def drift_diffusion_bound(r, k2: float, N: int):
    """Closed form of ``(k2+r^2)/(2(N-2)) Δ B^alpha - r ∂_r B^alpha / (N-2)``.

    Equals ``-k2 (N-4) N / (2(N-2)(k2+r^2)) B^alpha < 0``.
    """
    _require_weight_dimension(N)
    r = np.asarray(r, dtype=float)
    alpha = (N - 4) / 2.0
    out = -k2 * (N - 4) * N / (2.0 * (N - 2) * (k2 + r**2)) * weight_value(r, alpha, k2, N)
    return out if np.ndim(out) else float(out)


def drift_diffusion_lhs(r, k2: float, N: int):
    """Left-hand assembly of the drift-diffusion expression from its two pieces."""
    r = np.asarray(r, dtype=float)
    a = (k2 + r**2) / (2.0 * (N - 2))
    out = a * laplacian_weight_identity(r, k2, N) - r * weight_radial_derivative(r, k2, N) / (N - 2)
    return out if np.ndim(out) else float(out)


def rescale_identity_check(spec: BarenblattSpec, t: float, grid: RadialGrid) -> float:
    """Sup distance between the rescaled sample of ``B_k(., t)`` and ``B~_k``."""
    from .transform import Frame, to_selfsimilar

    if not t < spec.T:
        raise ValueError("the rescaling needs t < T")
    frame = Frame("physical", spec.T, spec.N)
    u = RadialProfile(grid, barenblatt_value(grid.nodes, t, spec), barenblatt_tail(t, spec))
    rescaled, _ = to_selfsimilar(u, t, frame)
    exact = rescaled_barenblatt_value(rescaled.grid.nodes, spec.k, spec.N)
    return float(np.max(np.abs(rescaled.values - exact)))


def residual_rescaled_pde(f: RadialProfile) -> RadialProfile:
    """Discrete right-hand side ``Δ log f + (N f + r f') / (N-2)`` of the rescaled equation."""
    values = f.values
    if np.any(values <= 0.0):
        raise ValueError("residual of the rescaled equation needs a strictly positive profile")
    grid = f.grid
    n = grid.dimension
    lap_log = radial_laplacian_values(np.log(values), grid)
    drift = (n * values + grid.nodes * radial_derivative(values, grid)) / (n - 2)
    return RadialProfile(grid, lap_log + drift)
