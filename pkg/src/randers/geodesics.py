"""Geodesic integration, the twist map, and quadrature forms.

Unit-speed geodesics of the background metric h solve

    r'' = m m' (theta')^2,        theta'' = -2 (m'/m) r' theta',

with r'^2 + m^2 theta'^2 = 1, and conserve the Clairaut constant
nu = m^2 theta'.  Geodesics of the navigation metric F are obtained from
h-geodesics by the twist map (r, theta) -> (r, theta + mu s), which carries
h-unit speed to F-unit speed.

Between turning points (radii with m(r) = |nu|) the same geodesics admit a
quadrature form: with

    xi(r, nu)  = nu / (m sqrt(m^2 - nu^2)),
    eta(r, nu) = m / sqrt(m^2 - nu^2),

the angle and arc-length advances are integrals of xi and eta in r, and the
twisted angular advance adds mu times the arc length.  The inverse-square-
root endpoint singularity at a turning point r_t is removed by substituting
r = r_t + u^2, which is regular because m'(r_t) != 0 at any simple turning
point.

Exact meridians are not sent through the ODE: they are integrated
analytically, including continuation through the vertex, where theta jumps
by pi (the polar chart degenerates; the geodesic itself is smooth).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import odesolve
from .errors import (
    InconsistentInputError,
    InvalidBracketError,
    InvalidParameterError,
    NumericalBlowupError,
    VertexSingularError,
)
from .profile import Profile, SurfacePoint
from .zermelo import Tangent, eval_F

# States with |dtheta| below this are integrated as exact meridians: their
# turning radius would be ~|nu| < 1e-11, far beyond chart resolution.
_MERIDIAN_EPS = 1e-11
_UNIT_SPEED_PRE_TOL = 1e-10


@dataclass(frozen=True)
class GeodesicState:
    """Phase-space point (r, theta, dr/ds, dtheta/ds)."""

    r: float
    theta: float
    dr: float
    dtheta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.theta, self.dr, self.dtheta])


def h_speed(profile: Profile, state: GeodesicState) -> float:
    m = float(profile.m(state.r))
    return math.hypot(state.dr, m * state.dtheta)


def clairaut_constant(profile: Profile, state: GeodesicState) -> float:
    """Conserved quantity nu = m(r)^2 * dtheta along h-geodesics."""
    m = float(profile.m(state.r))
    return m * m * state.dtheta


@dataclass
class GeodesicPath:
    """Sampled geodesic with dense interpolation.

    samples hold rows (r, theta, dr, dtheta) at the parameters in s.  The
    arrays are not copied on access; treat paths as immutable once returned.
    """

    s: np.ndarray
    states: np.ndarray
    nu: float
    metric_tag: str            # "h" or "F"
    kind: str                  # meridian | twisted-meridian | parallel | generic
    mu: float
    tol: float
    dense: Callable[[float], np.ndarray] = field(repr=False, default=None)
    h_preimage: "GeodesicPath | None" = field(repr=False, default=None)
    max_unit_drift: float = 0.0
    max_clairaut_drift: float = 0.0
    exit_reason: str = "completed"

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    def state_at(self, s: float) -> GeodesicState:
        y = self.dense(float(s))
        return GeodesicState(*map(float, y))

    def states_at(self, s_values) -> np.ndarray:
        return np.array([self.dense(float(sv)) for sv in np.atleast_1d(s_values)])

    def initial_state(self) -> GeodesicState:
        return GeodesicState(*map(float, self.states[0]))


def _classify(profile: Profile, state: GeodesicState) -> str:
    if abs(state.dtheta) < _MERIDIAN_EPS:
        return "meridian"
    if abs(state.dr) < 1e-12 and abs(float(profile.m1(state.r))) < 1e-12:
        return "parallel"
    return "generic"


def _sample_grid(length: float, h_cap: float) -> np.ndarray:
    n = max(2, int(math.ceil(length / h_cap)) + 1)
    return np.linspace(0.0, length, n)


def _meridian_path(profile: Profile, state0: GeodesicState, length: float,
                   tol: float) -> GeodesicPath:
    r0, theta0, sgn = state0.r, state0.theta, 1.0 if state0.dr >= 0 else -1.0
    rho = r0 if sgn < 0 else math.inf     # vertex-crossing parameter

    def dense(s: float) -> np.ndarray:
        if sgn > 0 or s < rho:
            return np.array([r0 + sgn * s, theta0, sgn, 0.0])
        return np.array([s - rho, theta0 + math.pi, 1.0, 0.0])

    h_cap = min(0.1, 0.1 / profile.mu)
    ss = _sample_grid(length, h_cap)
    if sgn < 0 and 0.0 < rho < length:
        ss = np.unique(np.concatenate([ss, [rho]]))
    states = np.array([dense(s) for s in ss])
    return GeodesicPath(
        s=ss, states=states, nu=0.0, metric_tag="h", kind="meridian",
        mu=profile.mu, tol=tol, dense=dense,
    )


def integrate_h(profile: Profile, state0: GeodesicState, length: float,
                tol: float = 1e-10) -> GeodesicPath:
    """Integrate an h-unit-speed geodesic for the given parameter length.

    The initial state must satisfy the unit-speed condition to 1e-10.  After
    each accepted step the velocity is rescaled back to unit h-speed; the drift
    absorbed by the rescaling and the Clairaut drift of the samples are
    recorded on the returned path as quality metrics.

    Exact meridians (dtheta = 0) are integrated analytically, continuing
    through the vertex with a theta jump of pi.  If the path leaves the
    numerical domain r <= r_max it is truncated there and flagged with
    exit_reason = "domain-exit".
    """
    if length <= 0:
        raise InvalidParameterError(f"length must be positive, got {length}")
    speed = h_speed(profile, state0)
    if abs(speed - 1.0) > _UNIT_SPEED_PRE_TOL:
        raise InvalidParameterError(
            f"initial state is not h-unit speed: |v|_h = {speed}"
        )
    if abs(state0.dtheta) < _MERIDIAN_EPS:
        return _meridian_path(profile, state0, length, tol)
    if state0.r <= 0.0:
        raise VertexSingularError(
            "cannot start at the vertex with nonzero angular speed"
        )

    nu0 = clairaut_constant(profile, state0)
    m_fn, m1_fn = profile.m, profile.m1

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        r, _, dr, dth = y
        m = float(m_fn(r))
        m1 = float(m1_fn(r))
        return np.array([dr, dth, m * m1 * dth * dth, -2.0 * (m1 / m) * dr * dth])

    drift = {"unit": 0.0, "clairaut": 0.0}

    def renormalize(s: float, y: np.ndarray) -> np.ndarray:
        m = float(m_fn(y[0]))
        norm = math.hypot(y[2], m * y[3])
        drift["unit"] = max(drift["unit"], abs(norm - 1.0))
        out = y.copy()
        out[2] /= norm
        out[3] /= norm
        drift["clairaut"] = max(drift["clairaut"], abs(m * m * out[3] - nu0))
        return out

    r_floor = max(1e-14, 1e-3 * abs(nu0))
    events = [
        odesolve.EventSpec(lambda s, y: y[0] - profile.r_max, terminal=True, direction=1),
        odesolve.EventSpec(lambda s, y: y[0] - r_floor, terminal=True, direction=-1),
    ]
    sol = odesolve.integrate(
        rhs, 0.0, state0.as_array(), length, tol=tol,
        h_max=min(0.1, 0.1 / profile.mu), post_step=renormalize, events=events,
    )
    if sol.status == "event:1":
        raise NumericalBlowupError(
            f"geodesic with nu = {nu0} reached r = {r_floor}, which no true "
            "geodesic with nonzero Clairaut constant can do"
        )
    exit_reason = "domain-exit" if sol.status == "event:0" else "completed"
    return GeodesicPath(
        s=sol.s, states=sol.y, nu=nu0, metric_tag="h",
        kind=_classify(profile, state0), mu=profile.mu, tol=tol,
        dense=sol, max_unit_drift=drift["unit"],
        max_clairaut_drift=drift["clairaut"], exit_reason=exit_reason,
    )


_TWIST_KIND = {"meridian": "twisted-meridian", "parallel": "parallel",
               "generic": "generic"}


def twist(path: GeodesicPath, mu: float) -> GeodesicPath:
    """Map an h-unit-speed path to the navigation metric:
    (r, theta, r', theta') -> (r, theta + mu s, r', theta' + mu)."""
    if path.metric_tag != "h":
        raise InvalidParameterError("twist expects an h-geodesic path")
    states = path.states.copy()
    states[:, 1] = states[:, 1] + mu * path.s
    states[:, 3] = states[:, 3] + mu

    h_dense = path.dense

    def dense(s: float) -> np.ndarray:
        y = h_dense(s).copy()
        y[1] += mu * s
        y[3] += mu
        return y

    return GeodesicPath(
        s=path.s, states=states, nu=path.nu, metric_tag="F",
        kind=_TWIST_KIND.get(path.kind, "generic"), mu=mu, tol=path.tol,
        dense=dense, h_preimage=path,
        max_unit_drift=path.max_unit_drift,
        max_clairaut_drift=path.max_clairaut_drift,
        exit_reason=path.exit_reason,
    )


def integrate_F(profile: Profile, q: SurfacePoint, yF: Tangent, length: float,
                tol: float = 1e-10) -> GeodesicPath:
    """Integrate the F-geodesic from q with F-unit initial tangent yF.

    Subtracting the wind gives the h-initial data (yF.y1, yF.y2 - mu), which
    must be h-unit; the h-geodesic is integrated and twisted back.
    """
    if q.r == 0.0:
        # Only twisted meridians emanate from the vertex; the angular
        # component of yF is immaterial there (m = 0).
        if abs(abs(yF.y1) - 1.0) > _UNIT_SPEED_PRE_TOL:
            raise InvalidParameterError(
                "at the vertex the F-unit tangent must be meridian-directed"
            )
        h0 = GeodesicState(0.0, q.theta, math.copysign(1.0, yF.y1), 0.0)
        return twist(integrate_h(profile, h0, length, tol=tol), profile.mu)
    F0 = eval_F(profile, q, yF)
    if abs(F0 - 1.0) > _UNIT_SPEED_PRE_TOL:
        raise InvalidParameterError(f"initial tangent is not F-unit: F = {F0}")
    y1, y2 = yF.y1, yF.y2 - profile.mu
    m = float(profile.m(q.r))
    hn = math.hypot(y1, m * y2)
    if abs(hn - 1.0) > 1e-8:
        raise InconsistentInputError(
            f"wind subtraction of an F-unit vector gave |y|_h = {hn}"
        )
    dth = 0.0 if abs(y2) < _MERIDIAN_EPS else y2
    h0 = GeodesicState(q.r, q.theta, y1, dth)
    h_path = integrate_h(profile, h0, length, tol=tol)
    return twist(h_path, profile.mu)


# ---------------------------------------------------------------------------
# quadrature form


def _xi_eta(profile: Profile, nu: float, nu_disc: float | None = None):
    """Closures for the angle and arc-length integrands.

    nu_disc, when given, replaces |nu| inside the discriminant
    m(r)^2 - nu^2.  Turning legs pass m(r_t) for it so the discriminant
    vanishes exactly at the computed turning radius; otherwise the ~1e-14
    float error of the root gets amplified by the inverse square root into
    O(sqrt(eps_rt / nu)) sweep errors for small Clairaut constants.
    """
    m_fn = profile.m
    anu = abs(nu)
    a_disc = anu if nu_disc is None else abs(nu_disc)

    def disc(r: float) -> float:
        m = float(m_fn(r))
        return max((m - a_disc) * (m + a_disc), 1e-300)

    def xi(r: float) -> float:
        return nu / (float(m_fn(r)) * math.sqrt(disc(r)))

    def eta(r: float) -> float:
        return float(m_fn(r)) / math.sqrt(disc(r))

    return xi, eta


def _integrate_desingularized(f, ra: float, rb: float, tol: float,
                              left_breaks=(), right_breaks=()) -> float:
    """Integrate f on [ra, rb] with r = ra + u^2 / r = rb - v^2 substitutions
    on the two halves, removing inverse-square-root endpoint singularities.

    Optional break lists force panel boundaries in the substituted variables;
    small-Clairaut turning legs concentrate an O(1) contribution of the angle
    integrand in a spike of width sqrt(2 nu / m') that plain adaptive panels
    can miss silently.  full_output=1 silences the quadpack roundoff warning
    that the clamped near-turning-point integrand triggers; the absolute
    noise it reports is orders below the tolerances used here.
    """
    mid = 0.5 * (ra + rb)
    ua = math.sqrt(mid - ra)
    ub = math.sqrt(rb - mid)
    lpts = [u for u in left_breaks if 0.0 < u < ua] or None
    rpts = [v for v in right_breaks if 0.0 < v < ub] or None
    left = quad(lambda u: 2.0 * u * f(ra + u * u), 0.0, ua, points=lpts,
                epsabs=0.25 * tol, epsrel=1e-12, limit=200, full_output=1)[0]
    right = quad(lambda v: 2.0 * v * f(rb - v * v), 0.0, ub, points=rpts,
                 epsabs=0.25 * tol, epsrel=1e-12, limit=200, full_output=1)[0]
    return left + right


def _spike_breaks(profile: Profile, nu: float, r_end: float) -> tuple:
    """Panel boundaries at the turning-point spike scale of the angle
    integrand after the u-substitution."""
    if nu == 0.0:
        return ()
    mp = max(abs(float(profile.m1(r_end))), 1e-9)
    u_sp = math.sqrt(2.0 * abs(nu) / mp)
    return (u_sp, 8.0 * u_sp)


def quadrature_segment(profile: Profile, ra: float, rb: float, nu: float,
                       sign: int, tol_quad: float = 1e-10):
    """Angle, arc-length, and twisted-angle advances over a monotone-r leg.

    Returns (delta_theta, delta_s, delta_P2) where delta_P2 is the angular
    advance of the twisted geodesic, delta_theta + mu * delta_s.  sign is the
    sign of r' on the leg.  m(r) must exceed |nu| on the open interval; the
    endpoints may be turning points.
    """
    if rb <= ra:
        raise InvalidParameterError(f"need ra < rb, got [{ra}, {rb}]")
    if sign not in (1, -1):
        raise InvalidParameterError(f"sign must be +1 or -1, got {sign}")
    if nu == 0.0:
        ds = sign * (rb - ra)
        return 0.0, ds, profile.mu * ds
    interior = np.linspace(ra, rb, 101)[1:-1]
    mm = np.array([float(profile.m(r)) for r in interior])
    if np.any(mm <= abs(nu)):
        bad = interior[mm <= abs(nu)][0]
        raise InvalidBracketError(
            f"m(r) <= |nu| at interior point r = {bad}; the leg is not a "
            "single monotone arc of a geodesic with this Clairaut constant"
        )
    # pin the discriminant zero to whichever endpoint is a turning point
    nu_disc = None
    if abs(float(profile.m(ra)) - abs(nu)) <= 1e-9 * max(1.0, abs(nu)):
        nu_disc = float(profile.m(ra))
    elif abs(float(profile.m(rb)) - abs(nu)) <= 1e-9 * max(1.0, abs(nu)):
        nu_disc = float(profile.m(rb))
    xi, eta = _xi_eta(profile, nu, nu_disc)
    lb = _spike_breaks(profile, nu, ra)
    rb_breaks = _spike_breaks(profile, nu, rb) if \
        abs(float(profile.m(rb)) - abs(nu)) < 1e-9 * max(1.0, abs(nu)) else ()
    dtheta = sign * _integrate_desingularized(xi, ra, rb, tol_quad,
                                              lb, rb_breaks)
    ds = sign * _integrate_desingularized(eta, ra, rb, tol_quad,
                                          lb, rb_breaks)
    return dtheta, ds, dtheta + profile.mu * ds


def turning_points(profile: Profile, nu: float, grid) -> list[float]:
    """Radii with m(r) = |nu|, refined to 1e-12 by bracketed root-finding.

    At a simple root m'(r) != 0 and the geodesic turns; if m'(r) = 0 there,
    the parallel at that radius is itself a geodesic and the "turning" orbit
    is that parallel.
    """
    if abs(nu) >= 1.0 / profile.mu:
        raise InvalidParameterError(
            f"|nu| must be < 1/mu = {1.0 / profile.mu}, got {nu}"
        )
    if nu == 0.0:
        return []
    grid = np.asarray(grid, dtype=float)
    anu = abs(nu)
    f = lambda r: float(profile.m(r)) - anu
    vals = np.array([f(r) for r in grid])
    roots: list[float] = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(float(brentq(f, grid[i], grid[i + 1], xtol=1e-12)))
    if len(grid) and vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-11:
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# geodesy residual and path utilities


def cumulative_F_length(profile: Profile, path: GeodesicPath,
                        n_gauss: int = 8) -> np.ndarray:
    """F-length of the path from its start to each sample, by per-interval
    Gauss-Legendre quadrature on the dense output."""
    nodes, weights = np.polynomial.legendre.leggauss(n_gauss)
    out = np.zeros(len(path.s))
    for i in range(len(path.s) - 1):
        a, b = path.s[i], path.s[i + 1]
        half = 0.5 * (b - a)
        acc = 0.0
        for t, w in zip(nodes, weights):
            y = path.dense(0.5 * (a + b) + half * t)
            acc += w * eval_F(profile, SurfacePoint(max(y[0], 0.0), y[1]),
                              Tangent(y[2], y[3]))
        out[i + 1] = out[i] + half * acc
    return out


def f_geodesic_residual(profile: Profile, path: GeodesicPath) -> float:
    """How far a curve is from being an F-geodesic.

    Re-shoots the F-geodesic sharing the path's initial point and direction,
    reparametrizes the input by F-arc length, and returns the maximum
    pointwise chart deviation divided by the total F-length.
    """
    if len(path.s) < 3:
        raise InvalidParameterError("need at least 3 samples")
    if np.any(path.states[:, 0] <= 0.0):
        raise InvalidParameterError("residual undefined for paths touching the vertex")
    r0, th0, dr0, dth0 = map(float, path.states[0])
    x0 = SurfacePoint(r0, th0)
    F0 = eval_F(profile, x0, Tangent(dr0, dth0))
    vF = Tangent(dr0 / F0, dth0 / F0)
    sigma = cumulative_F_length(profile, path)
    total = float(sigma[-1])
    ref = integrate_F(profile, x0, vF, total * (1.0 + 1e-9),
                      tol=min(path.tol, 1e-10))
    dev = 0.0
    for sk, sig in zip(path.s, sigma):
        a = path.dense(sk)
        b = ref.dense(min(sig, ref.s[-1]))
        m_here = float(profile.m(0.5 * (a[0] + b[0])))
        dth = math.remainder(a[1] - b[1], 2.0 * math.pi)
        dev = max(dev, math.hypot(a[0] - b[0], m_here * dth))
    return dev / total


def integrate_h_two_sided(profile: Profile, state0: GeodesicState,
                          length_back: float, length_fwd: float,
                          tol: float = 1e-10) -> GeodesicPath:
    """Extend an h-geodesic through state0 in both directions.

    The combined path covers s in [-length_back, length_fwd]; twisting it
    still gives an F-geodesic because the twist formula is parameter-global.
    """
    fwd = integrate_h(profile, state0, length_fwd, tol=tol)
    rev0 = GeodesicState(state0.r, state0.theta, -state0.dr, -state0.dtheta)
    bwd = integrate_h(profile, rev0, length_back, tol=tol)

    flip = np.array([1.0, 1.0, -1.0, -1.0])
    s_all = np.concatenate([-bwd.s[::-1][:-1], fwd.s])
    states = np.vstack([bwd.states[::-1][:-1] * flip, fwd.states])

    def dense(s: float) -> np.ndarray:
        if s >= 0.0:
            return fwd.dense(s)
        return bwd.dense(-s) * flip

    return GeodesicPath(
        s=s_all, states=states, nu=fwd.nu, metric_tag="h", kind=fwd.kind,
        mu=profile.mu, tol=tol, dense=dense,
        max_unit_drift=max(fwd.max_unit_drift, bwd.max_unit_drift),
        max_clairaut_drift=max(fwd.max_clairaut_drift, bwd.max_clairaut_drift),
        exit_reason=fwd.exit_reason if fwd.exit_reason != "completed"
        else bwd.exit_reason,
    )


def count_self_intersections(path: GeodesicPath, ds: float = 0.05) -> int:
    """Transverse self-intersections by a polyline segment sweep.

    Works in cylinder coordinates (theta, r) with theta unreduced; candidate
    segment pairs are aligned by the nearest multiple of 2 pi before the
    crossing test, which is exact because individual segments subtend far
    less than pi in theta.
    """
    ss = np.arange(path.s[0], path.s[-1], ds)
    pts = np.array([path.dense(s)[:2] for s in ss])
    r = pts[:, 0]
    th = pts[:, 1]
    two_pi = 2.0 * math.pi
    a_th, a_r = th[:-1], r[:-1]
    b_th, b_r = th[1:], r[1:]
    mid_th = 0.5 * (a_th + b_th)
    n = len(a_th)

    count = 0
    for i in range(n - 2):
        js = np.arange(i + 2, n)
        # align candidate segments to segment i's winding
        shift = np.round((mid_th[i] - mid_th[js]) / two_pi) * two_pi
        p2x, p2y = a_th[js] + shift, a_r[js]
        q2x, q2y = b_th[js] + shift, b_r[js]
        p1x, p1y, q1x, q1y = a_th[i], a_r[i], b_th[i], b_r[i]
        # quick reject on bounding intervals
        keep = (np.minimum(p2x, q2x) <= max(p1x, q1x) + 0.0) & \
               (np.maximum(p2x, q2x) >= min(p1x, q1x)) & \
               (np.minimum(p2y, q2y) <= max(p1y, q1y)) & \
               (np.maximum(p2y, q2y) >= min(p1y, q1y))
        if not np.any(keep):
            continue
        p2x, p2y, q2x, q2y = p2x[keep], p2y[keep], q2x[keep], q2y[keep]
        d1 = (q1x - p1x) * (p2y - p1y) - (q1y - p1y) * (p2x - p1x)
        d2 = (q1x - p1x) * (q2y - p1y) - (q1y - p1y) * (q2x - p1x)
        d3 = (q2x - p2x) * (p1y - p2y) - (q2y - p2y) * (p1x - p2x)
        d4 = (q2x - p2x) * (q1y - p2y) - (q2y - p2y) * (q1x - p2x)
        count += int(np.count_nonzero((d1 * d2 < 0.0) & (d3 * d4 < 0.0)))
    return count


def path_to_csv(path: GeodesicPath, filename) -> None:
    with open(filename, "w", encoding="utf-8") as fh:
        fh.write("s,r,theta,dr,dtheta\n")
        for sk, row in zip(path.s, path.states):
            fh.write(",".join(f"{v:.17g}" for v in (sk, *row)) + "\n")


def path_metadata(path: GeodesicPath) -> dict:
    return {
        "nu": path.nu,
        "metric_tag": path.metric_tag,
        "kind": path.kind,
        "mu": path.mu,
        "tolerances": {"tol_ode": path.tol},
        "n_samples": int(len(path.s)),
        "s_end": float(path.s[-1]),
        "max_unit_drift": path.max_unit_drift,
        "max_clairaut_drift": path.max_clairaut_drift,
        "exit_reason": path.exit_reason,
    }


def path_to_json(path: GeodesicPath, filename, include_samples: bool = True) -> None:
    doc = path_metadata(path)
    if include_samples:
        doc["samples"] = [
            [float(sk), *map(float, row)] for sk, row in zip(path.s, path.states)
        ]
    with open(filename, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
