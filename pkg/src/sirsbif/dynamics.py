"""Flow of the planar system: adaptive integration, Poincare return maps,
nested-limit-cycle detection, and one-parameter bifurcation sweeps.

The integrator is an explicit Dormand-Prince 5(4) pair with the classical
quartic dense-output interpolant; section crossings are located on the dense
output by bracketed root finding to 1e-12 in time.  Cycle detection samples
the ray displacement d(r) = P(r) - r on an adaptive radius grid and refines
every sign change; when the outward scan is truncated by a basin boundary, a
time-reversed probe checks whether that boundary is itself a repelling cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.optimize import brentq

from .errors import BlowUp, DomainError, Inconclusive, NoReturn, StepSizeUnderflow
from .model import ModelParams, State
from .equilibria import classified_equilibria, trace_det

CYCLE_TOL = 1e-10       # radius tolerance on cycle fixed points
D_FLOOR = 1e-11         # displacement resolution floor
PERIOD_BLOWUP_FACTOR = 50.0
RETURN_BUDGET_FACTOR = 1e4
EVENT_TIME_TOL = 1e-12

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0

# Dormand-Prince 5(4) tableau (stage times are irrelevant: the field is autonomous)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_D = (-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
      -10690763975 / 1880347072, 701980252875 / 199316789632,
      -1453857185 / 822651844, 69997945 / 29380423)


@dataclass
class Trajectory:
    """Integration output: aligned sample times/states plus step statistics."""

    times: list
    states: list                      # list of (x, y)
    steps: int = 0
    rejected: int = 0
    max_error_estimate: float = 0.0

    def final(self) -> State:
        x, y = self.states[-1]
        return State(x, y)


@dataclass(frozen=True)
class ReturnSample:
    """One evaluation of the first-return map on the section ray."""

    radius_in: float
    radius: float       # P(radius_in)
    time: float         # return time (the orbit period at a fixed point)
    crossings: int


@dataclass(frozen=True)
class LimitCycleRecord:
    """A detected periodic orbit around a focus anchor."""

    anchor: tuple           # (x, y) of the focus
    ray: tuple              # unit ray direction
    radius: float           # fixed-point radius on the ray
    period: float
    amplitude_x: float      # half the x-extent of the orbit
    stability: str          # "attracting", "repelling" or "neutral-uncertain"
    residual: float         # |P(r) - r|
    from_boundary_probe: bool = False


@dataclass
class CycleScanResult:
    """Cycle records plus the displacement table that produced them."""

    records: list
    samples: list           # (r, d) pairs; d is None past the basin truncation
    truncated_radius: Optional[float] = None
    boundary_cycle: Optional[LimitCycleRecord] = None

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    @property
    def count(self) -> int:
        return len(self.records)


@dataclass
class SweepPoint:
    value: float
    equilibria: list            # EquilibriumReport with kinds
    cycle_count: Optional[int]
    max_cycle_period: Optional[float]
    focus_trace: Optional[float]
    focus_z: Optional[float] = None
    error: Optional[str] = None


@dataclass
class SweepEvent:
    kind: str                   # saddle-node | hopf | cycle-count-change | suspected-homoclinic
    lo: float
    hi: float
    detail: str


@dataclass
class SweepResult:
    parameter: str
    grid: list
    points: list
    events: list


def _rhs(params: ModelParams) -> Callable[[float, float], tuple]:
    p, lam, gam, eta, k = params.p, params.lambda0, params.gamma, params.eta, params.k
    km1 = k - 1.0

    def f(x: float, y: float) -> tuple:
        inc = x * (1.0 + p * x**km1) if x > 0.0 else 0.0
        return inc * (lam - x - y) - gam * x, eta * x - y

    return f


def _dense_eval(theta, y0x, y0y, r1x, r1y, r2x, r2y, r3x, r3y, r4x, r4y):
    t1 = 1.0 - theta
    x = y0x + theta * (r1x + t1 * (r2x + theta * (r3x + t1 * r4x)))
    y = y0y + theta * (r1y + t1 * (r2y + theta * (r3y + t1 * r4y)))
    return x, y


class Dopri5:
    """Explicit Dormand-Prince 5(4) stepper over a planar field.

    One instance per integration; statistics accumulate on the instance.
    ``events`` is a list of scalar functions g(x, y); every accepted step is
    scanned for sign changes of each g on the dense output.
    """

    def __init__(self, f, rel_tol: float = 1e-12, abs_tol: float = 1e-14,
                 fixed_step: Optional[float] = None):
        if rel_tol < 1e-13:
            raise DomainError(f"rel_tol must be >= 1e-13, got {rel_tol}")
        self.f = f
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self.fixed_step = fixed_step
        self.steps = 0
        self.rejected = 0
        self.max_error_estimate = 0.0

    def run(self, x0: float, y0: float, t_end: float,
            event: Optional[Callable[[float, float], float]] = None,
            event_direction: float = 0.0,
            event_arm: Optional[float] = None,
            record: Optional[Trajectory] = None,
            stop_at_event: bool = True,
            guard: Optional[Callable[[float, float], bool]] = None,
            t_start: float = 0.0):
        """Integrate to t_end; returns (t, x, y, event_hits).

        event_hits is a list of (t, x, y) where the event function crossed zero
        with the requested direction.  With stop_at_event the run ends at the
        first hit.  When ``event_arm`` is set, detection stays disabled until
        |g| first exceeds it, so a start point sitting on the section does not
        trigger immediately.  ``guard(x, y)`` returning False aborts the run
        early and the result carries the abort state (basin-escape detection).
        """
        f = self.f
        t, x, y = t_start, x0, y0
        fx, fy = f(x, y)
        hits = []
        if record is not None:
            record.times.append(t)
            record.states.append((x, y))
        h = self.fixed_step if self.fixed_step else self._initial_step(x, y, fx, fy)
        g_prev = event(x, y) if event is not None else 0.0
        armed = event_arm is None or abs(g_prev) >= event_arm
        while t < t_end:
            if h < 1e-14 * max(1.0, abs(t)):
                raise StepSizeUnderflow(f"step size underflow at t = {t:g}", t=t,
                                        state=(x, y))
            if t + h > t_end:
                h = t_end - t
            kx = [fx, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
            ky = [fy, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
            for i in range(1, 7):
                ai = _A[i]
                sx = sy = 0.0
                for j in range(i):
                    sx += ai[j] * kx[j]
                    sy += ai[j] * ky[j]
                kx[i], ky[i] = f(x + h * sx, y + h * sy)
            b = _A[6]
            x1 = x + h * (b[0] * kx[0] + b[2] * kx[2] + b[3] * kx[3]
                          + b[4] * kx[4] + b[5] * kx[5])
            y1 = y + h * (b[0] * ky[0] + b[2] * ky[2] + b[3] * ky[3]
                          + b[4] * ky[4] + b[5] * ky[5])
            ex = ey = 0.0
            for i in range(7):
                ex += _E[i] * kx[i]
                ey += _E[i] * ky[i]
            ex *= h
            ey *= h
            scx = self.abs_tol + self.rel_tol * max(abs(x), abs(x1))
            scy = self.abs_tol + self.rel_tol * max(abs(y), abs(y1))
            err = math.sqrt(0.5 * ((ex / scx) ** 2 + (ey / scy) ** 2))
            if not math.isfinite(err):
                err = 4.0  # non-finite estimate: force a rejection
            if self.fixed_step is None and err > 1.0:
                self.rejected += 1
                h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
                continue
            self.steps += 1
            self.max_error_estimate = max(self.max_error_estimate, err)
            fx1, fy1 = kx[6], ky[6]
            if event is not None:
                g_new = event(x1, y1)
                if not armed:
                    if abs(g_new) >= event_arm:
                        armed = True
                elif g_new == 0.0 or (g_new * g_prev < 0.0
                                      and (event_direction == 0.0
                                           or (g_new - g_prev) * event_direction > 0.0)):
                    hit = self._locate_event(event, t, h, x, y, x1, y1, kx, ky)
                    if hit is not None:
                        hits.append(hit)
                        if stop_at_event:
                            if record is not None:
                                record.times.append(hit[0])
                                record.states.append((hit[1], hit[2]))
                            self._sync_stats(record)
                            return hit[0], hit[1], hit[2], hits
                g_prev = g_new
            t += h
            x, y, fx, fy = x1, y1, fx1, fy1
            if record is not None:
                record.times.append(t)
                record.states.append((x, y))
            if guard is not None and not guard(x, y):
                self._sync_stats(record)
                return t, x, y, hits
            if self.fixed_step is None:
                factor = _SAFETY * err ** -0.2 if err > 0.0 else _MAX_FACTOR
                h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        self._sync_stats(record)
        return t, x, y, hits

    def _sync_stats(self, record: Optional[Trajectory]):
        if record is not None:
            record.steps = self.steps
            record.rejected = self.rejected
            record.max_error_estimate = self.max_error_estimate

    def _initial_step(self, x, y, fx, fy) -> float:
        scale = max(abs(x), abs(y), 1e-6)
        speed = max(abs(fx), abs(fy), 1e-12)
        return max(1e-10, min(1e-2 * scale / speed, 0.1))

    def _dense_coeffs(self, h, x, y, x1, y1, kx, ky):
        r1x, r1y = x1 - x, y1 - y
        r2x, r2y = h * kx[0] - r1x, h * ky[0] - r1y
        r3x = r1x - h * kx[6] - r2x
        r3y = r1y - h * ky[6] - r2y
        r4x = h * sum(_D[i] * kx[i] for i in range(7))
        r4y = h * sum(_D[i] * ky[i] for i in range(7))
        return (x, y, r1x, r1y, r2x, r2y, r3x, r3y, r4x, r4y)

    def _locate_event(self, event, t, h, x, y, x1, y1, kx, ky):
        coeffs = self._dense_coeffs(h, x, y, x1, y1, kx, ky)

        def g(theta):
            xs, ys = _dense_eval(theta, *coeffs)
            return event(xs, ys)

        g0, g1 = g(0.0), g(1.0)
        if g0 == 0.0:
            g0 = g(1e-9)
        if g0 * g1 > 0.0:
            return None
        theta = brentq(g, 0.0, 1.0, xtol=EVENT_TIME_TOL / max(h, 1e-300), rtol=1e-15)
        xs, ys = _dense_eval(theta, *coeffs)
        return (t + theta * h, xs, ys)


def integrate(params: ModelParams, initial: State, t_end: float,
              rel_tol: float = 1e-12, abs_tol: float = 1e-14,
              fixed_step: Optional[float] = None) -> Trajectory:
    """Integrate the model field, recording every accepted step."""
    if not initial.in_region(params, slack=1e-6 * max(1.0, params.lambda0)):
        raise DomainError(f"initial state {initial} is outside the invariant region")
    box = 10.0 * params.lambda0
    f = _rhs(params)
    traj = Trajectory(times=[], states=[])

    def guard(x, y):
        if abs(x) > box or abs(y) > box:
            raise BlowUp(f"state left the {box:g} bounding box (integration bug)")
        return True

    stepper = Dopri5(f, rel_tol=rel_tol, abs_tol=abs_tol, fixed_step=fixed_step)
    stepper.run(initial.x, initial.y, t_end, record=traj, guard=guard)
    return traj


def _ray_frame(anchor: tuple, direction: tuple) -> tuple:
    dx, dy = direction
    nrm = math.hypot(dx, dy)
    if nrm == 0.0:
        raise DomainError("ray direction must be nonzero")
    d = (dx / nrm, dy / nrm)
    n = (-d[1], d[0])
    return d, n


def default_ray(params: ModelParams) -> tuple:
    """Section ray direction maximizing transversality of near-circular turns."""
    return (1.0, params.eta)


def poincare_return(params: ModelParams, anchor: State, direction: tuple, r: float,
                    rel_tol: float = 1e-12, nth: int = 1,
                    escape_radius: Optional[float] = None,
                    time_budget: Optional[float] = None,
                    reverse_time: bool = False) -> ReturnSample:
    """nth same-direction return of the ray point at radius r to the section ray."""
    if r <= 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    d, n = _ray_frame((anchor.x, anchor.y), direction)
    x0 = anchor.x + r * d[0]
    y0 = anchor.y + r * d[1]
    if not State(x0, y0).in_region(params):
        raise DomainError(f"ray point at radius {r:g} leaves the invariant region")
    _, det = trace_det(params, anchor.x)
    if det <= 0.0:
        raise DomainError("anchor must be a focus-type equilibrium (Det > 0)")
    t_lin = 2.0 * math.pi / math.sqrt(det)
    budget = time_budget if time_budget is not None else RETURN_BUDGET_FACTOR * t_lin
    base = _rhs(params)
    f = (lambda x, y: tuple(-v for v in base(x, y))) if reverse_time else base

    def g(x, y):
        return n[0] * (x - anchor.x) + n[1] * (y - anchor.y)

    fx0, fy0 = f(x0, y0)
    gdot0 = n[0] * fx0 + n[1] * fy0
    if gdot0 == 0.0:
        raise NoReturn("section is not transversal at the start point")
    direction_sign = math.copysign(1.0, gdot0)
    esc = escape_radius

    def guard(x, y):
        if esc is not None:
            if math.hypot(x - anchor.x, y - anchor.y) > esc:
                return False
        return True

    stepper = Dopri5(f, rel_tol=rel_tol, abs_tol=1e-14 * max(1.0, r))
    arm = 1e-3 * r
    t, x, y = 0.0, x0, y0
    crossings = 0
    while crossings < nth:
        t, x, y, hits = stepper.run(x, y, budget, event=g,
                                    event_direction=direction_sign, event_arm=arm,
                                    stop_at_event=True, guard=guard, t_start=t)
        if not hits:
            raise NoReturn(
                f"no return within budget t = {budget:g} from radius {r:g}"
                + (" (left escape region)" if esc is not None else ""))
        th, xh, yh = hits[-1]
        u = d[0] * (xh - anchor.x) + d[1] * (yh - anchor.y)
        if u <= 0.0:
            # opposite half-line: keep integrating (arming resets on restart)
            t, x, y = th, xh, yh
            continue
        crossings += 1
        t, x, y = th, xh, yh
        if t > budget:
            raise NoReturn(f"time budget exhausted after {crossings} crossings")
    return ReturnSample(radius_in=r, radius=u, time=t, crossings=crossings)


def _displacement(params, anchor, direction, r, rel_tol, escape_radius):
    try:
        sample = poincare_return(params, anchor, direction, r, rel_tol=rel_tol,
                                 escape_radius=escape_radius)
        return sample.radius - r, sample.time
    except (NoReturn, DomainError):
        return None, None


def _cycle_amplitude(params, anchor, direction, r, period, rel_tol) -> float:
    d, _ = _ray_frame((anchor.x, anchor.y), direction)
    traj = integrate(params, State(anchor.x + r * d[0], anchor.y + r * d[1]),
                     period * 1.02, rel_tol=rel_tol)
    xs = [s[0] for s in traj.states]
    return 0.5 * (max(xs) - min(xs))


def find_limit_cycles(params: ModelParams, anchor: State, r_max: float,
                      budget: int = 64, rel_tol: float = 1e-12,
                      direction: Optional[tuple] = None,
                      boundary_probe: bool = True) -> CycleScanResult:
    """Nested limit cycles around a focus anchor out to ray radius r_max.

    The displacement d(r) = P(r) - r is sampled on a geometric grid of
    ``budget`` radii; each sign change is refined to CYCLE_TOL.  If the scan
    is cut off by a basin boundary, a time-reversed return map checks whether
    the boundary object is a repelling cycle.
    """
    if r_max <= 0.0:
        raise DomainError(f"r_max must be positive, got {r_max}")
    direction = direction if direction is not None else default_ray(params)
    d_unit, _ = _ray_frame((anchor.x, anchor.y), direction)
    escape = 4.0 * r_max
    r_min = max(1e-4 * r_max, 1e-9)
    n_grid = max(budget, 8)
    ratio = (r_max / r_min) ** (1.0 / (n_grid - 1))
    radii = [r_min * ratio**i for i in range(n_grid)]

    samples = []
    truncated = None
    for r in radii:
        dd, tt = _displacement(params, anchor, direction, r, rel_tol, escape)
        samples.append((r, dd, tt))
        if dd is None:
            truncated = r
            break

    records = []
    returning = [(r, dd, tt) for (r, dd, tt) in samples if dd is not None]
    for (r_lo, d_lo, _), (r_hi, d_hi, _) in zip(returning[:-1], returning[1:]):
        if d_lo == 0.0 or d_lo * d_hi >= 0.0:
            continue
        if abs(d_lo) < D_FLOOR and abs(d_hi) < D_FLOOR:
            raise Inconclusive(
                f"displacement below resolution floor near r in [{r_lo:g}, {r_hi:g}]",
                samples=[(r, dd) for r, dd, _ in samples])
        record = _refine_crossing(params, anchor, direction, r_lo, d_lo, r_hi, d_hi,
                                  rel_tol, escape)
        if record is not None:
            records.append(record)

    boundary_cycle = None
    if boundary_probe and truncated is not None and returning:
        last_r, last_d, _ = returning[-1]
        if last_d is not None and last_d < 0.0:
            boundary_cycle = _probe_boundary_cycle(params, anchor, direction,
                                                   last_r, truncated, rel_tol)
            if boundary_cycle is not None:
                records.append(boundary_cycle)

    records.sort(key=lambda rec: rec.radius)
    return CycleScanResult(records=records,
                           samples=[(r, dd) for r, dd, _ in samples],
                           truncated_radius=truncated,
                           boundary_cycle=boundary_cycle)


def _refine_crossing(params, anchor, direction, r_lo, d_lo, r_hi, d_hi,
                     rel_tol, escape) -> Optional[LimitCycleRecord]:
    period_holder = {}

    def dfun(r):
        dd, tt = _displacement(params, anchor, direction, r, rel_tol, escape)
        if dd is None:
            # treat basin escape inside the bracket as a large outward displacement
            return abs(d_lo) + abs(d_hi)
        period_holder[r] = tt
        return dd

    r_star = brentq(dfun, r_lo, r_hi, xtol=CYCLE_TOL, rtol=1e-15, maxiter=120)
    d_star, t_star = _displacement(params, anchor, direction, r_star, rel_tol, escape)
    if d_star is None:
        return None
    slope = (d_hi - d_lo) / (r_hi - r_lo)
    if abs(slope) < 1e-6:
        stability = "neutral-uncertain"
    else:
        stability = "attracting" if slope < 0.0 else "repelling"
    amp = _cycle_amplitude(params, anchor, direction, r_star, t_star, rel_tol)
    d_unit, _ = _ray_frame((anchor.x, anchor.y), direction)
    return LimitCycleRecord(anchor=(anchor.x, anchor.y), ray=d_unit,
                            radius=r_star, period=t_star, amplitude_x=amp,
                            stability=stability, residual=abs(d_star))


def _probe_boundary_cycle(params, anchor, direction, r_start, r_escape,
                          rel_tol) -> Optional[LimitCycleRecord]:
    """Time-reversed iteration from the last returning radius; a repelling
    cycle on the basin boundary is attracting for the reversed flow."""
    r = r_start
    prev = None
    for _ in range(600):
        try:
            sample = poincare_return(params, anchor, direction, r, rel_tol=rel_tol,
                                     escape_radius=6.0 * r_escape, reverse_time=True)
        except (NoReturn, DomainError):
            return None
        r_new = sample.radius
        if prev is not None and abs(r_new - r) < 0.05 * CYCLE_TOL:
            residual, t_star = _displacement(params, anchor, direction, r_new,
                                             rel_tol, 6.0 * r_escape)
            if residual is None:
                residual, t_star = -(r_new - r), sample.time
            amp = _cycle_amplitude(params, anchor, direction, r_new,
                                   sample.time, rel_tol)
            d_unit, _ = _ray_frame((anchor.x, anchor.y), direction)
            return LimitCycleRecord(anchor=(anchor.x, anchor.y), ray=d_unit,
                                    radius=r_new, period=sample.time,
                                    amplitude_x=amp, stability="repelling",
                                    residual=abs(residual),
                                    from_boundary_probe=True)
        prev, r = r, r_new
    return None


def cycle_scan_for_params(params: ModelParams, rel_tol: float = 1e-12,
                          budget: int = 64) -> tuple:
    """(focus report, CycleScanResult) for the distinguished focus, or (None, None).

    The scan radius reaches toward the nearest saddle (or the region boundary
    when no saddle exists), stopping at 92% of that distance.
    """
    reports = classified_equilibria(params)
    foci = [r for r in reports if r.det > 0.0]
    if not foci:
        return None, None
    focus = max(foci, key=lambda r: r.z)
    saddles = [r for r in reports if r.det < 0.0]
    scale = math.hypot(1.0, params.eta)
    if saddles:
        dist = min(abs(focus.z - s.z) for s in saddles) * scale
    else:
        # no interior saddle: reach along the ray toward the x+y = lambda0 edge
        dist = 0.6 * (params.lambda0 - (1.0 + params.eta) * focus.z) \
            * scale / (1.0 + params.eta)
    r_max = 0.92 * dist
    anchor = State(focus.z, params.eta * focus.z)
    try:
        scan = find_limit_cycles(params, anchor, r_max, budget=budget, rel_tol=rel_tol)
    except Inconclusive:
        raise
    return focus, scan


def _sweep_point(base: ModelParams, parameter: str, value: float,
                 rel_tol: float, cycle_budget: int) -> SweepPoint:
    try:
        params = base.replace(**{parameter: value})
    except DomainError as exc:
        return SweepPoint(value=value, equilibria=[], cycle_count=None,
                          max_cycle_period=None, focus_trace=None, error=str(exc))
    try:
        reports = classified_equilibria(params)
        focus, scan = cycle_scan_for_params(params, rel_tol=rel_tol,
                                            budget=cycle_budget)
        count = scan.count if scan is not None else 0
        max_period = max((rec.period for rec in scan.records), default=None) \
            if scan is not None else None
        tr = focus.trace if focus is not None else None
        return SweepPoint(value=value, equilibria=reports, cycle_count=count,
                          max_cycle_period=max_period, focus_trace=tr,
                          focus_z=focus.z if focus is not None else None)
    except Inconclusive as exc:
        return SweepPoint(value=value, equilibria=reports, cycle_count=None,
                          max_cycle_period=None, focus_trace=None,
                          error=f"inconclusive: {exc}")
    except Exception as exc:  # per-point failures must not kill the sweep
        return SweepPoint(value=value, equilibria=[], cycle_count=None,
                          max_cycle_period=None, focus_trace=None, error=str(exc))


def bifurcation_sweep(base: ModelParams, parameter: str, grid: list,
                      rel_tol: float = 1e-10, cycle_budget: int = 48,
                      jobs: int = 1) -> SweepResult:
    """Classify equilibria and count cycles along a monotone parameter grid."""
    if parameter not in ("p", "lambda0", "gamma", "eta", "k"):
        raise DomainError(f"unknown sweep parameter {parameter!r}")
    diffs = [b - a for a, b in zip(grid[:-1], grid[1:])]
    if not grid or (any(d <= 0 for d in diffs) and any(d >= 0 for d in diffs)):
        raise DomainError("grid must be strictly monotone")
    args = [(base, parameter, float(v), rel_tol, cycle_budget) for v in grid]
    if jobs > 1:
        import concurrent.futures
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_sweep_point_star, args))
    else:
        points = [_sweep_point(*a) for a in args]
    events = _detect_events(base, parameter, points)
    return SweepResult(parameter=parameter, grid=list(grid), points=points,
                       events=events)


def _sweep_point_star(args):
    return _sweep_point(*args)


def _detect_events(base: ModelParams, parameter: str, points: list) -> list:
    events = []
    for a, b in zip(points[:-1], points[1:]):
        lo, hi = a.value, b.value
        if a.error or b.error:
            continue
        if len(a.equilibria) != len(b.equilibria):
            events.append(SweepEvent(kind="saddle-node", lo=lo, hi=hi,
                                     detail=f"equilibrium count {len(a.equilibria)} -> {len(b.equilibria)}"))
        hopf_here = False
        if a.focus_trace is not None and b.focus_trace is not None:
            # a trace comparison is only meaningful along one focus branch;
            # a saddle-node can hand tracking to a different equilibrium
            same_branch = (a.focus_z is not None and b.focus_z is not None
                           and abs(a.focus_z - b.focus_z)
                           <= 0.25 * max(a.focus_z, b.focus_z))
            if same_branch and (a.focus_trace == 0.0
                                or a.focus_trace * b.focus_trace < 0.0):
                hopf_here = True
                events.append(SweepEvent(kind="hopf", lo=lo, hi=hi,
                                         detail=f"focus trace {a.focus_trace:+.3e} -> {b.focus_trace:+.3e}"))
        if (a.cycle_count is not None and b.cycle_count is not None
                and a.cycle_count != b.cycle_count and not hopf_here):
            params_a = base.replace(**{parameter: a.value})
            blowup = _period_blowup_threshold(params_a, a) or \
                _period_blowup_threshold(base.replace(**{parameter: b.value}), b)
            periods = [t for t in (a.max_cycle_period, b.max_cycle_period)
                       if t is not None]
            if blowup is not None and periods and max(periods) > blowup:
                kind = "suspected-homoclinic"
            else:
                kind = "cycle-count-change"
            events.append(SweepEvent(kind=kind, lo=lo, hi=hi,
                                     detail=f"cycle count {a.cycle_count} -> {b.cycle_count}"))
    return events


def _period_blowup_threshold(params: ModelParams, point: SweepPoint) -> Optional[float]:
    foci = [r for r in point.equilibria if r.det > 0.0]
    if not foci:
        return None
    det = max(r.det for r in foci)
    return PERIOD_BLOWUP_FACTOR * 2.0 * math.pi / math.sqrt(det)
