"""Dense-output integration and hybrid Filippov trajectories.

Smooth arcs run on an adaptive RK5(4) pair (scipy's RK45) with its quartic
dense output; switching-line events are bracketed by the solver and then
polished with Newton on the interpolant down to |y| <= tol_event. Sliding
segments integrate the Filippov convex field along y = 0 and end at the
first fold curve of either one-sided field. Forward trajectories may enter
sliding regions only; escaping segments are reached by integrating backward
(direction = -1), where they become attracting.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (DivisionDegeneracy, DomainEscape, GrazingHit,
                     NoHitWithinHorizon, NonDeterministicEscape,
                     StepSizeUnderflow, TooManyEvents)
from .fields import (MINUS, PLUS, TOL_TANGENCY, FilippovModel, RegionKind,
                     SmoothField, Visibility, classify_point, fold_visibility)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
TOL_EVENT = 1e-12
DEFAULT_MAX_EVENTS = 10_000

ABOVE = "above"
BELOW = "below"
SLIDING = "sliding"

CROSS = "cross"
ENTER_SLIDING = "enter_sliding"
EXIT_SLIDING_AT_FOLD = "exit_sliding_at_fold"
TANGENCY_HIT = "tangency_hit"


@dataclass
class DenseSolution:
    """Continuous trajectory on [t0, t1] (t1 < t0 for backward runs)."""

    t0: float
    t1: float
    ts: np.ndarray
    _interp: object

    def __call__(self, t):
        return np.asarray(self._interp(t))

    @property
    def n_steps(self) -> int:
        return len(self.ts) - 1


@dataclass
class FundamentalMatrix:
    """t -> 2x2 solution of the variational equations, Y(t0) = I."""

    t0: float
    t1: float
    _interp: object

    def __call__(self, t) -> np.ndarray:
        return np.asarray(self._interp(t))[2:].reshape(2, 2)

    def det(self, t) -> float:
        return float(np.linalg.det(self(t)))


def _run_ivp(rhs, t0, z0, t1, rtol, atol, events=None):
    sol = solve_ivp(rhs, (t0, t1), np.asarray(z0, dtype=float), method="RK45",
                    rtol=rtol, atol=atol, dense_output=True, events=events)
    if sol.status == -1:
        raise StepSizeUnderflow(sol.message)
    return sol

def _check_bbox(interp, ts, bbox):
    if bbox is None:
        return
    xmin, xmax, ymin, ymax = bbox
    # solver nodes plus midpoints; a finer scan is not worth the cost
    probe = np.union1d(ts, 0.5 * (ts[:-1] + ts[1:])) if len(ts) > 1 else ts
    states = np.asarray(interp(probe))
    if (states[0].min() < xmin or states[0].max() > xmax
            or states[1].min() < ymin or states[1].max() > ymax):
        raise DomainEscape(f"trajectory left the box {bbox}")


def flow_smooth(field_: SmoothField, t0: float, z0, duration: float,
                rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                bbox=None) -> DenseSolution:
    """Integrate one smooth field for a signed duration, dense output."""
    t0 = float(t0)
    t1 = t0 + float(duration)
    if duration == 0.0:
        z0 = np.asarray(z0, dtype=float)

        def const(t, _z=z0):
            if np.isscalar(t):
                return _z.copy()
            return np.tile(_z[:, None], (1, len(np.atleast_1d(t))))

        return DenseSolution(t0, t0, np.array([t0]), const)
    sol = _run_ivp(lambda t, z: field_.eval(t, z), t0, z0, t1, rtol, atol)
    _check_bbox(sol.sol, sol.t, bbox)
    return DenseSolution(t0, t1, sol.t, sol.sol)


def flow_variational(field_: SmoothField, z0, duration: float, t0: float = 0.0,
                     rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                     ) -> tuple[DenseSolution, FundamentalMatrix]:
    """Co-integrate the state and the 2x2 variational system from identity."""
    def rhs(t, w):
        z = w[:2]
        Y = w[2:].reshape(2, 2)
        dz = field_.eval(t, z)
        dY = field_.jac(t, z) @ Y
        return np.concatenate([dz, dY.ravel()])

    w0 = np.concatenate([np.asarray(z0, dtype=float), np.eye(2).ravel()])
    t1 = float(t0) + float(duration)
    sol = _run_ivp(rhs, float(t0), w0, t1, rtol, atol)
    interp = sol.sol
    state = DenseSolution(float(t0), t1, sol.t,
                          lambda t, _i=interp: np.asarray(_i(t))[:2])
    fmat = FundamentalMatrix(float(t0), t1, interp)
    return state, fmat


def liouville_defect(field_: SmoothField, state: DenseSolution,
                     fmat: FundamentalMatrix, n_check: int = 17,
                     rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL) -> float:
    """Max relative mismatch of det Y(t) against exp of the integrated trace."""
    def trace_rhs(t, q):
        return [float(np.trace(field_.jac(t, state(t))))]

    sol = _run_ivp(trace_rhs, state.t0, [0.0], state.t1, rtol, atol)
    ts = np.linspace(state.t0, state.t1, n_check)
    worst = 0.0
    for t in ts:
        expected = float(np.exp(sol.sol(t)[0]))
        worst = max(worst, abs(fmat.det(t) - expected) / max(1.0, abs(expected)))
    return worst


def _leaving_side(eval_y, jac_row_dot, y0, tol_event, tol_tangency):
    """Sign of y along the upcoming arc: from y0, else y', else curvature."""
    if abs(y0) > tol_event:
        return 1.0 if y0 > 0 else -1.0
    v = eval_y()
    if abs(v) > tol_tangency:
        return 1.0 if v > 0 else -1.0
    lie2 = jac_row_dot()
    if lie2 == 0.0:
        raise GrazingHit("start point is a degenerate tangency; no leaving side")
    return 1.0 if lie2 > 0 else -1.0


def _polish_hit(interp, f2, t_e, lo, hi, tol_event, max_iter=12):
    """Newton on the dense interpolant: drive |y(t)| below tol_event."""
    pad = 1e-9 * max(1.0, hi - lo)
    for _ in range(max_iter):
        z = np.asarray(interp(t_e))
        if abs(z[1]) <= tol_event:
            break
        slope = f2(t_e, z)
        if slope == 0.0:
            break
        t_e = min(max(t_e - z[1] / slope, lo - pad), hi + pad)
    return t_e, np.asarray(interp(t_e))


def hit_switching(field_: SmoothField, t0: float, z0, direction: int = 1,
                  horizon: float = 100.0, rtol: float = DEFAULT_RTOL,
                  atol: float = DEFAULT_ATOL, tol_event: float = TOL_EVENT,
                  tol_tangency: float = TOL_TANGENCY) -> tuple[float, np.ndarray]:
    """First switching-line contact of a smooth flow, refined to |y| <= tol_event.

    Works from points off the line, from transversal starts on it and from
    tangent starts whose arc leaves the line quadratically. The landing must
    be transversal: |F2| <= tol_tangency there raises GrazingHit.
    """
    t0 = float(t0)
    z0 = np.asarray(z0, dtype=float)
    direction = 1 if direction >= 0 else -1

    s = _leaving_side(
        lambda: direction * float(field_.eval(t0, z0)[1]),
        lambda: float(field_.jac(t0, z0)[1, :] @ field_.eval(t0, z0)),
        z0[1], tol_event, tol_tangency)

    def event(t, z):
        return z[1]
    event.terminal = True
    event.direction = -s

    sol = _run_ivp(lambda t, z: field_.eval(t, z), t0, z0,
                   t0 + direction * abs(horizon), rtol, atol, events=[event])
    if len(sol.t_events[0]) == 0:
        raise NoHitWithinHorizon(
            f"no switching-line hit within horizon {horizon} from t0 = {t0}")
    t_e = float(sol.t_events[0][0])
    lo, hi = min(t0, sol.t[-1]), max(t0, sol.t[-1])
    t_e, z_e = _polish_hit(sol.sol, lambda t, z: float(field_.eval(t, z)[1]),
                           t_e, lo, hi, tol_event)
    f2 = float(field_.eval(t_e, z_e)[1])
    if abs(f2) <= tol_tangency:
        raise GrazingHit(f"tangential contact at t = {t_e}: F2 = {f2:.3e}")
    return t_e, np.array([z_e[0], 0.0])


@dataclass
class TrajectoryEvent:
    time: float
    x: float
    kind: str


@dataclass
class Segment:
    mode: str
    t0: float
    t1: float
    ts: np.ndarray
    _interp: object

    def __call__(self, t):
        out = np.asarray(self._interp(t))
        if self.mode == SLIDING:
            # 1-D sliding solution lifted back to the plane
            t_arr = np.atleast_1d(t)
            lifted = np.vstack([out.reshape(1, -1), np.zeros((1, len(t_arr)))])
            return lifted[:, 0] if np.isscalar(t) else lifted
        return out

    @property
    def end_state(self) -> np.ndarray:
        return self(self.t1)


@dataclass
class HybridTrajectory:
    """Concatenated smooth and sliding segments with their event log."""

    t0: float
    t1: float
    direction: int
    segments: list[Segment] = field(default_factory=list)
    events: list[TrajectoryEvent] = field(default_factory=list)

    def __call__(self, t) -> np.ndarray:
        tf = float(t)
        for seg in self.segments:
            lo, hi = min(seg.t0, seg.t1), max(seg.t0, seg.t1)
            if lo - 1e-12 <= tf <= hi + 1e-12:
                return seg(tf)
        raise ValueError(f"t = {t} outside trajectory span [{self.t0}, {self.t1}]")

    @property
    def end_state(self) -> np.ndarray:
        return self.segments[-1].end_state

    @property
    def modes(self) -> list[str]:
        return [seg.mode for seg in self.segments]

    def has_sliding(self) -> bool:
        return any(seg.mode == SLIDING for seg in self.segments)

    def sliding_segments(self) -> list[Segment]:
        return [seg for seg in self.segments if seg.mode == SLIDING]

    def events_of_kind(self, kind: str) -> list[TrajectoryEvent]:
        return [ev for ev in self.events if ev.kind == kind]

    def to_csv(self, path_or_file) -> None:
        """Columns t, x, y, mode, event_flag; one row per solver node."""
        own = isinstance(path_or_file, (str, bytes))
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            writer = csv.writer(fh)
            writer.writerow(["t", "x", "y", "mode", "event_flag"])
            ev_by_time = {round(ev.time, 12): ev.kind for ev in self.events}
            for seg in self.segments:
                for t in seg.ts:
                    z = seg(float(t))
                    flag = ev_by_time.get(round(float(t), 12), "")
                    writer.writerow([f"{t:.12g}", f"{z[0]:.12g}", f"{z[1]:.12g}",
                                     seg.mode, flag])
        finally:
            if own:
                fh.close()

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def _mode_from_sigma(model: FilippovModel, t: float, x: float, direction: int,
                     prev_mode: str | None, tol_tangency: float):
    """Continuation mode for a state sitting on the switching line."""
    kind = classify_point(model, t, x, tol_tangency)
    if kind is RegionKind.CROSSING:
        n_minus = model.normal(MINUS, t, x)
        return ABOVE if direction * n_minus > 0 else BELOW
    if kind is RegionKind.SLIDING:
        if direction > 0:
            return SLIDING
        raise NonDeterministicEscape(
            f"backward flow reached a sliding region at (t={t}, x={x}); "
            "backward continuation there is not unique")
    if kind is RegionKind.ESCAPING:
        if direction < 0:
            return SLIDING
        raise NonDeterministicEscape(
            f"forward flow reached an escaping region at (t={t}, x={x}); "
            "forward continuation there is not unique")
    # tangency: continue along the visible branch
    if kind is RegionKind.TANGENCY_BOTH:
        if prev_mode == ABOVE:
            return BELOW
        if prev_mode == BELOW:
            return ABOVE
        return BELOW
    side = MINUS if kind is RegionKind.TANGENCY_MINUS else PLUS
    own_region = BELOW if side == MINUS else ABOVE
    if fold_visibility(model, side, t, x, tol_tangency) is Visibility.VISIBLE:
        return own_region
    other = PLUS if side == MINUS else MINUS
    n_other = model.normal(other, t, x)
    sign_into_other = 1.0 if other == PLUS else -1.0
    if direction * n_other * sign_into_other > 0:
        return ABOVE if other == PLUS else BELOW
    return SLIDING


def _event_kind_at(model: FilippovModel, t: float, x: float, direction: int,
                   tol_tangency: float) -> str:
    kind = classify_point(model, t, x, tol_tangency)
    if kind is RegionKind.CROSSING:
        return CROSS
    if kind in (RegionKind.SLIDING, RegionKind.ESCAPING):
        enters = (kind is RegionKind.SLIDING) == (direction > 0)
        return ENTER_SLIDING if enters else CROSS
    return TANGENCY_HIT


def flow_filippov(model: FilippovModel, t0: float, z0, duration: float,
                  direction: int = 1, rtol: float = DEFAULT_RTOL,
                  atol: float = DEFAULT_ATOL, tol_event: float = TOL_EVENT,
                  tol_tangency: float = TOL_TANGENCY,
                  max_events: int = DEFAULT_MAX_EVENTS,
                  bbox=None) -> HybridTrajectory:
    """Hybrid trajectory of the perturbed system over a time window.

    Alternates smooth arcs (side chosen by the sign of y, or by the
    transversal field at crossings) with sliding segments, entering sliding
    when the flow lands on a pinching portion of the line and exiting at the
    first fold curve of the governing side. Tangency hits continue along the
    visible branch and are reported as events.
    """
    t0 = float(t0)
    direction = 1 if direction >= 0 else -1
    t_end = t0 + direction * abs(float(duration))
    traj = HybridTrajectory(t0=t0, t1=t_end, direction=direction)
    t_cur = t0
    z_cur = np.asarray(z0, dtype=float).copy()
    prev_mode: str | None = None
    span = abs(t_end - t0)

    while direction * (t_end - t_cur) > 1e-12 * max(1.0, span):
        if len(traj.segments) + len(traj.events) > max_events:
            raise TooManyEvents(
                f"more than {max_events} events/segments before t = {t_cur}; "
                "chattering guard tripped")
        if abs(z_cur[1]) <= tol_event:
            mode = _mode_from_sigma(model, t_cur, z_cur[0], direction,
                                    prev_mode, tol_tangency)
            z_cur[1] = 0.0
        else:
            mode = ABOVE if z_cur[1] > 0 else BELOW

        if mode == SLIDING:
            t_cur, z_cur = _slide_segment(model, traj, t_cur, z_cur[0], t_end,
                                          direction, rtol, atol, tol_tangency)
        else:
            t_cur, z_cur = _smooth_segment(model, traj, mode, t_cur, z_cur,
                                           t_end, direction, rtol, atol,
                                           tol_event, tol_tangency, bbox)
        prev_mode = mode
    return traj


def _smooth_segment(model, traj, mode, t_cur, z_cur, t_end, direction,
                    rtol, atol, tol_event, tol_tangency, bbox):
    side = MINUS if mode == BELOW else PLUS
    region_sign = -1.0 if mode == BELOW else 1.0

    def rhs(t, z):
        return model.field(side, t, z)

    def event(t, z):
        return z[1]
    event.terminal = True
    event.direction = -region_sign  # leaving the segment's half plane

    sol = _run_ivp(rhs, t_cur, z_cur, t_end, rtol, atol, events=[event])
    _check_bbox(sol.sol, sol.t, bbox)

    if len(sol.t_events[0]) > 0:
        t_e = float(sol.t_events[0][0])
        lo, hi = min(t_cur, sol.t[-1]), max(t_cur, sol.t[-1])
        t_e, z_e = _polish_hit(sol.sol,
                               lambda t, z: float(model.field(side, t, z)[1]),
                               t_e, lo, hi, tol_event)
        traj.segments.append(Segment(mode, t_cur, t_e, _clip_nodes(sol.t, t_cur, t_e), sol.sol))
        traj.events.append(TrajectoryEvent(
            time=t_e, x=float(z_e[0]),
            kind=_event_kind_at(model, t_e, float(z_e[0]), direction, tol_tangency)))
        return t_e, np.array([z_e[0], 0.0])

    traj.segments.append(Segment(mode, t_cur, float(sol.t[-1]), sol.t, sol.sol))
    return float(sol.t[-1]), np.asarray(sol.y[:, -1])


def _slide_segment(model, traj, t_cur, x_cur, t_end, direction,
                   rtol, atol, tol_tangency):
    def rhs(t, xa):
        return [float(sliding_field(model, t, float(xa[0]), tol_tangency)[0])]

    def fold_minus(t, xa):
        return model.normal(MINUS, t, float(xa[0]))
    def fold_plus(t, xa):
        return model.normal(PLUS, t, float(xa[0]))
    fold_minus.terminal = True
    fold_plus.terminal = True

    sol = _run_ivp(rhs, t_cur, [x_cur], t_end, rtol, atol,
                   events=[fold_minus, fold_plus])

    hit_minus = len(sol.t_events[0]) > 0
    hit_plus = len(sol.t_events[1]) > 0
    if hit_minus or hit_plus:
        t_m = sol.t_events[0][0] if hit_minus else direction * np.inf
        t_p = sol.t_events[1][0] if hit_plus else direction * np.inf
        exit_minus = direction * (t_m - t_p) <= 0
        t_e = float(t_m if exit_minus else t_p)
        x_e = float(sol.sol(t_e)[0])
        traj.segments.append(Segment(SLIDING, t_cur, t_e, _clip_nodes(sol.t, t_cur, t_e), sol.sol))
        traj.events.append(TrajectoryEvent(time=t_e, x=x_e, kind=EXIT_SLIDING_AT_FOLD))
        return t_e, np.array([x_e, 0.0])

    traj.segments.append(Segment(SLIDING, t_cur, float(sol.t[-1]), sol.t, sol.sol))
    return float(sol.t[-1]), np.array([float(sol.y[0, -1]), 0.0])


def _clip_nodes(ts, t_start, t_stop):
    lo, hi = min(t_start, t_stop), max(t_start, t_stop)
    kept = ts[(ts >= lo - 1e-15) & (ts <= hi + 1e-15)]
    if len(kept) == 0 or abs(kept[-1] - t_stop) > 1e-12:
        kept = np.append(kept, t_stop)
    return kept
