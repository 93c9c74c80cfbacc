"""Closed forms for the piecewise Hamiltonian benchmark model.

H(x, y) = |y| - x^3/3 + alpha*x generates the lower field (-1, x^2 - alpha)
and the upper field (1, x^2 - alpha), a reversible system whose two-fold
cycle through (sqrt(alpha), 0) bounds an annulus of crossing periodic
orbits. The forcing is (0, sin(pi t / sigma)) below and
(0, lambda * sin(pi t / sigma)) above. Everything in this module is
analytic and serves as the oracle for the numeric paths elsewhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotInRange
from .fields import FilippovModel, SmoothField

SLIDING_S = "sliding-sigma-s"
SLIDING_E = "sliding-sigma-e"
CROSSING = "crossing-two-fold"


@dataclass(frozen=True)
class HamiltonianParams:
    alpha: float = 1.0
    lam: float = 2.0
    sigma: float = 2.0

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if not 0.0 < self.sigma <= 3.0 * math.sqrt(self.alpha) + 1e-12:
            raise ValueError("sigma must lie in (0, 3*sqrt(alpha)]")

    @property
    def x_v(self) -> float:
        return math.sqrt(self.alpha)

    @property
    def x_i(self) -> float:
        return -math.sqrt(self.alpha)


def make_model(params: HamiltonianParams, epsilon: float = 0.0) -> FilippovModel:
    alpha, lam, sigma = params.alpha, params.lam, params.sigma
    f_minus = SmoothField.autonomous(
        lambda z: (-1.0, z[0] ** 2 - alpha),
        lambda z: ((0.0, 0.0), (2.0 * z[0], 0.0)),
    )
    f_plus = SmoothField.autonomous(
        lambda z: (1.0, z[0] ** 2 - alpha),
        lambda z: ((0.0, 0.0), (2.0 * z[0], 0.0)),
    )
    g_minus = SmoothField.forcing(
        lambda t, z: (0.0, math.sin(math.pi * t / sigma)), period=2.0 * sigma)
    g_plus = SmoothField.forcing(
        lambda t, z: (0.0, lam * math.sin(math.pi * t / sigma)), period=2.0 * sigma)
    return FilippovModel(f_minus=f_minus, f_plus=f_plus, g_minus=g_minus,
                         g_plus=g_plus, epsilon=epsilon, sigma=sigma)


def hamiltonian_value(params: HamiltonianParams, z) -> float:
    x, y = float(z[0]), float(z[1])
    return abs(y) - x ** 3 / 3.0 + params.alpha * x


def analytic_flow_minus(params: HamiltonianParams, t: float, x: float, y: float) -> np.ndarray:
    a = params.alpha
    return np.array([
        -t + x,
        (t ** 3 - 3.0 * t ** 2 * x + 3.0 * t * x ** 2 + 3.0 * y - 3.0 * t * a) / 3.0,
    ])


def analytic_fundamental_matrix(params: HamiltonianParams, t: float, x: float) -> np.ndarray:
    return np.array([[1.0, 0.0], [-t ** 2 + 2.0 * t * x, 1.0]])


def analytic_sigma_bar(params: HamiltonianParams, x: float) -> float:
    a = params.alpha
    if not params.x_i < x <= params.x_v + 1e-12:
        raise NotInRange(f"x = {x} outside ({params.x_i}, {params.x_v}]")
    return 0.5 * (3.0 * x + math.sqrt(3.0) * math.sqrt(4.0 * a - x * x))


def analytic_sigma_prime(params: HamiltonianParams, x: float) -> float:
    a = params.alpha
    return 0.5 * (3.0 - math.sqrt(3.0) * x / math.sqrt(4.0 * a - x * x))


def analytic_x_sigma(params: HamiltonianParams, sigma: float) -> float:
    a = params.alpha
    if not 0.0 < sigma <= 3.0 * math.sqrt(a) + 1e-12:
        raise NotInRange(f"sigma = {sigma} outside (0, {3.0 * math.sqrt(a)}]")
    return (3.0 * sigma - math.sqrt(3.0) * math.sqrt(12.0 * a - sigma * sigma)) / 6.0


def two_fold_points(params: HamiltonianParams) -> tuple[np.ndarray, np.ndarray]:
    return (np.array([params.x_i, 0.0]), np.array([params.x_v, 0.0]))


def analytic_q_v(params: HamiltonianParams) -> np.ndarray:
    return np.array([-2.0 * math.sqrt(params.alpha), 0.0])


def analytic_melnikov(params: HamiltonianParams, theta: float, x: float) -> float:
    """Three-cosine closed form of M(theta, x) on the annulus.

    The coefficient placement on the two traveling cosines is pinned by the
    displacement identity (tests cross-check it against direct simulation).
    """
    lam, sigma = params.lam, params.sigma
    sb = analytic_sigma_bar(params, x)
    return (sigma / math.pi) * (
        math.cos(math.pi * (sb + theta) / sigma)
        + lam * math.cos(math.pi * (sb - theta) / sigma)
        - (1.0 + lam) * math.cos(math.pi * theta / sigma)
    )


def analytic_melnikov_at_x_sigma(params: HamiltonianParams, theta: float) -> float:
    lam, sigma = params.lam, params.sigma
    return -(2.0 * (1.0 + lam) * sigma / math.pi) * math.cos(math.pi * theta / sigma)


def analytic_g(params: HamiltonianParams, theta: float) -> float:
    """g_theta for the resonant half-period sigma = 3*sqrt(alpha)."""
    a, lam = params.alpha, params.lam
    root = math.sqrt(a)
    return (6.0 * root * (1.0 - lam) / math.pi) * math.cos(math.pi * theta / (3.0 * root))


def theta_stars(params: HamiltonianParams) -> tuple[float, float]:
    """The two zeros of M(., x_v) on one forcing period at resonance."""
    root = math.sqrt(params.alpha)
    return (1.5 * root, 4.5 * root)


def proposition_table(params: HamiltonianParams) -> dict[float, str]:
    """Expected classification at each zero for sigma = 3*sqrt(alpha).

    lambda < 0 (!= -1): sliding on Sigma^s at the first zero and on Sigma^e
    at the second; 0 < lambda < 1: Sigma^s then crossing; lambda > 1:
    Sigma^e then crossing.
    """
    lam = params.lam
    if lam in (-1.0, 0.0, 1.0):
        raise ValueError(f"lambda = {lam} is a boundary case with no stated outcome")
    t1, t2 = theta_stars(params)
    first = SLIDING_S if lam < 1.0 else SLIDING_E
    second = SLIDING_E if lam < 0.0 else CROSSING
    return {t1: first, t2: second}
