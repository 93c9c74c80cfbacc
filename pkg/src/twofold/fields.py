"""Model types for planar Filippov systems split by the line y = 0.

The one-sided dynamics is assembled as X = F + eps*G + eps^2*H from an
autonomous backbone F, a 2*sigma-periodic forcing G and an optional
second-order term H. The switching line {y = 0} and the involution
R(x, y) = (x, -y) are fixed throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DegenerateTangency, DivisionDegeneracy, NotSlidingRegion

TOL_TANGENCY = 1e-9

MINUS = "minus"
PLUS = "plus"


def involution(z: np.ndarray) -> np.ndarray:
    """R(x, y) = (x, -y), applied to points or to velocity vectors."""
    return np.array([z[0], -z[1]], dtype=float)


@dataclass(frozen=True)
class SmoothField:
    """Planar vector field together with its spatial Jacobian.

    ``eval(t, z) -> (2,)`` and ``jac(t, z) -> (2, 2)`` must be deterministic
    pure functions. Autonomous fields ignore the time argument; forcing
    terms record their period in ``period``.
    """

    eval: Callable[[float, np.ndarray], np.ndarray]
    jac: Callable[[float, np.ndarray], np.ndarray]
    period: float | None = None

    @staticmethod
    def autonomous(f: Callable[[np.ndarray], object],
                   jac: Callable[[np.ndarray], object]) -> "SmoothField":
        """Wrap callables of z alone into the (t, z) signature."""
        return SmoothField(
            eval=lambda t, z, _f=f: np.asarray(_f(z), dtype=float),
            jac=lambda t, z, _j=jac: np.asarray(_j(z), dtype=float),
        )

    @staticmethod
    def forcing(f: Callable[[float, np.ndarray], object], period: float,
                jac: Callable[[float, np.ndarray], object] | None = None) -> "SmoothField":
        """Time-periodic field; a missing Jacobian means zero spatial dependence."""
        if jac is None:
            jac = lambda t, z: np.zeros((2, 2))
        return SmoothField(
            eval=lambda t, z, _f=f: np.asarray(_f(t, z), dtype=float),
            jac=lambda t, z, _j=jac: np.asarray(_j(t, z), dtype=float),
            period=float(period),
        )


def periodicity_defect(field: SmoothField, n_samples: int = 16) -> float:
    """Max of |eval(t + period, z) - eval(t, z)| over a fixed sample set."""
    if field.period is None:
        return 0.0
    worst = 0.0
    for k in range(n_samples):
        t = 0.37 * k
        z = np.array([np.cos(1.7 * k), 0.3 * np.sin(2.3 * k + 0.5)])
        d = field.eval(t + field.period, z) - field.eval(t, z)
        worst = max(worst, float(np.max(np.abs(d))))
    return worst


@dataclass(frozen=True)
class FilippovModel:
    """Two-zone system X^± = F^± + eps*G^± + eps^2*H^± across {y = 0}.

    ``sigma`` is the half-period of the forcing (G is 2*sigma-periodic in t);
    the time argument is reduced modulo 2*sigma before every field
    evaluation so long integrations stay free of phase drift. Second-order
    terms H take (t, z, eps) and contribute nothing to the Jacobian.
    """

    f_minus: SmoothField
    f_plus: SmoothField
    g_minus: SmoothField | None = None
    g_plus: SmoothField | None = None
    h_minus: Callable[[float, np.ndarray, float], object] | None = None
    h_plus: Callable[[float, np.ndarray, float], object] | None = None
    epsilon: float = 0.0
    sigma: float = float(np.pi)

    def reduce_time(self, t: float) -> float:
        return float(t) % (2.0 * self.sigma)

    def _parts(self, side: str):
        if side == MINUS:
            return self.f_minus, self.g_minus, self.h_minus
        if side == PLUS:
            return self.f_plus, self.g_plus, self.h_plus
        raise ValueError(f"side must be {MINUS!r} or {PLUS!r}, got {side!r}")

    def field(self, side: str, t: float, z: np.ndarray) -> np.ndarray:
        f, g, h = self._parts(side)
        ts = self.reduce_time(t)
        out = f.eval(ts, z)
        if self.epsilon != 0.0:
            if g is not None:
                out = out + self.epsilon * g.eval(ts, z)
            if h is not None:
                out = out + self.epsilon ** 2 * np.asarray(h(ts, z, self.epsilon), dtype=float)
        return out

    def jac(self, side: str, t: float, z: np.ndarray) -> np.ndarray:
        f, g, _ = self._parts(side)
        ts = self.reduce_time(t)
        out = f.jac(ts, z)
        if self.epsilon != 0.0 and g is not None:
            out = out + self.epsilon * g.jac(ts, z)
        return out

    def normal(self, side: str, t: float, x: float) -> float:
        """X h at (x, 0): the second field component, since h(x, y) = y."""
        return float(self.field(side, t, np.array([x, 0.0]))[1])

    def with_epsilon(self, eps: float) -> "FilippovModel":
        return replace(self, epsilon=float(eps))


class RegionKind(Enum):
    CROSSING = "crossing"
    SLIDING = "sliding"
    ESCAPING = "escaping"
    TANGENCY_PLUS = "tangency-plus"
    TANGENCY_MINUS = "tangency-minus"
    TANGENCY_BOTH = "tangency-both"


class Visibility(Enum):
    VISIBLE = "visible"
    INVISIBLE = "invisible"


def classify_point(model: FilippovModel, t: float, x: float,
                   tol_tangency: float = TOL_TANGENCY) -> RegionKind:
    """Classify (x, 0) on the switching line at time t.

    Crossing when both one-sided normal components share a sign, sliding
    when they pinch the line (X+h < 0 < X-h), escaping when they point away
    from it; components within ``tol_tangency`` of zero give tangency tags.
    """
    n_plus = model.normal(PLUS, t, x)
    n_minus = model.normal(MINUS, t, x)
    tang_plus = abs(n_plus) <= tol_tangency
    tang_minus = abs(n_minus) <= tol_tangency
    if tang_plus and tang_minus:
        return RegionKind.TANGENCY_BOTH
    if tang_plus:
        return RegionKind.TANGENCY_PLUS
    if tang_minus:
        return RegionKind.TANGENCY_MINUS
    if n_plus * n_minus > 0.0:
        return RegionKind.CROSSING
    if n_plus < 0.0 < n_minus:
        return RegionKind.SLIDING
    return RegionKind.ESCAPING


def second_lie_derivative(model: FilippovModel, side: str, t: float, x: float) -> float:
    """(X)^2 h at (x, 0): gradient of X h advected along X, from the spatial
    Jacobian (the O(eps) time-derivative of the forcing is not included)."""
    z = np.array([x, 0.0])
    vec = model.field(side, t, z)
    J = model.jac(side, t, z)
    return float(J[1, :] @ vec)


def fold_visibility(model: FilippovModel, side: str, t: float, x: float,
                    tol_tangency: float = TOL_TANGENCY) -> Visibility:
    """Visibility of a fold of the chosen one-sided field at (x, 0).

    The point must already be a tangency of that side. Visible means the
    tangent arc stays inside the field's own half plane: (X+)^2 h > 0 for
    the upper field, (X-)^2 h < 0 for the lower one.
    """
    n = model.normal(side, t, x)
    if abs(n) > tol_tangency:
        raise ValueError(f"({x}, 0) is not a tangency of side {side!r}: Xh = {n:.3e}")
    lie2 = second_lie_derivative(model, side, t, x)
    if abs(lie2) <= tol_tangency:
        raise DegenerateTangency(
            f"(X)^2 h = {lie2:.3e} at x = {x}: cusp-like tangency")
    if side == PLUS:
        return Visibility.VISIBLE if lie2 > 0.0 else Visibility.INVISIBLE
    return Visibility.VISIBLE if lie2 < 0.0 else Visibility.INVISIBLE


def sliding_field(model: FilippovModel, t: float, x: float,
                  tol_tangency: float = TOL_TANGENCY) -> np.ndarray:
    """Filippov convex-combination field at (x, 0); tangent to the line.

    Defined on sliding and escaping regions. Raises DivisionDegeneracy when
    the two normal components agree to within ``tol_tangency`` and
    NotSlidingRegion when the point classifies as crossing or tangency.
    """
    z = np.array([x, 0.0])
    x_plus = model.field(PLUS, t, z)
    x_minus = model.field(MINUS, t, z)
    den = x_minus[1] - x_plus[1]
    if abs(den) <= tol_tangency:
        raise DivisionDegeneracy(
            f"X-h - X+h = {den:.3e} at (t={t}, x={x}): convex combination undefined")
    kind = classify_point(model, t, x, tol_tangency)
    if kind not in (RegionKind.SLIDING, RegionKind.ESCAPING):
        raise NotSlidingRegion(f"point (t={t}, x={x}) classifies as {kind.value}")
    return (x_minus[1] * x_plus - x_plus[1] * x_minus) / den


@dataclass(frozen=True)
class ReversibilityReport:
    max_defect: float
    worst_point: tuple[float, float]
    tol_rev: float

    @property
    def reversible(self) -> bool:
        return self.max_defect <= self.tol_rev


def check_reversibility(model: FilippovModel, xs=None, ys=None,
                        tol_rev: float = 1e-10) -> ReversibilityReport:
    """Max over a grid of |F+(x, y) + R F-(R(x, y))| for the eps = 0 skeleton."""
    if xs is None:
        xs = np.linspace(-2.5, 2.5, 17)
    if ys is None:
        ys = np.linspace(-2.0, 2.0, 17)
    worst = -1.0
    worst_pt = (float(xs[0]), float(ys[0]))
    for x in xs:
        for y in ys:
            z = np.array([x, y])
            defect = model.f_plus.eval(0.0, z) + involution(model.f_minus.eval(0.0, involution(z)))
            norm = float(np.linalg.norm(defect))
            if norm > worst:
                worst = norm
                worst_pt = (float(x), float(y))
    return ReversibilityReport(max_defect=worst, worst_point=worst_pt, tol_rev=tol_rev)
