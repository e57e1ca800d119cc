"""Jacobi fields, conjugate points, poles, and the cut locus.

Normal Jacobi fields along a unit-speed h-geodesic satisfy the scalar
equation y'' + G(r(s)) y = 0 with G = -m''/m.  Along the meridian through a
point q and the vertex (continued past the vertex as the opposite meridian,
r(s) = |rho - s| with a theta jump of pi), the first zero c > rho of the
Jacobi field with y(0) = 0, y'(0) = 1 is the first conjugate parameter of q.

On surfaces with non-increasing curvature the background cut locus of q is
the opposite-meridian subarc beyond that conjugate point, and every interior
cut point is reached by a mirror-symmetric pair of equal-length geodesics.
The navigation cut locus is obtained by pushing each background cut point
along the wind flow for its own travel time: the point tau_q(t) at distance
T(t) = d_h(q, tau_q(t)) maps to (r_tau(t), theta_tau(t) + mu T(t)), and the
mirror pair twists into two F-geodesic segments of equal F-length T(t).  The
arc starts at the twisted image of the conjugate point, where T(c) = c.

The vertex itself is a pole: the Jacobi field along a meridian from the
vertex is m(s) > 0, and the divergence of the integral of the inverse
squared parallel length (bounded below by mu^2/(4 pi^2) per unit radius)
rules out rays that are not twisted meridians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import odesolve
from .errors import (
    InternalConsistencyError,
    InvalidParameterError,
    SearchHorizonError,
)
from .geodesics import GeodesicPath, GeodesicState, integrate_h
from .measure import (
    distance_F,
    h_connectors,
    h_distance,
    shoot_hits,
)
from .profile import Profile, SurfacePoint, gauss_curvature, is_von_mangoldt
from .zermelo import Tangent


@dataclass(frozen=True)
class JacobiSolution:
    """Scalar Jacobi field samples along a base geodesic."""

    s: np.ndarray
    y: np.ndarray
    yp: np.ndarray
    first_zero: float | None

    def at(self, s: float) -> tuple[float, float]:
        i = int(np.searchsorted(self.s, s))
        i = min(max(i, 0), len(self.s) - 1)
        return float(self.y[i]), float(self.yp[i])


def jacobi_integrate(profile: Profile, base: GeodesicPath, y0: float,
                     yp0: float, upto: float, tol: float = 1e-12
                     ) -> JacobiSolution:
    """Integrate y'' + G(r(s)) y = 0 along a base h-geodesic path.

    The radius along the base is taken from its dense output.  The first
    sign change of y for s > 0 is refined by bisection to 1e-10 and reported
    as first_zero (None if y keeps its sign over [0, upto]).
    """
    if base.metric_tag != "h":
        raise InvalidParameterError("Jacobi integration runs along h-geodesics")
    if upto > base.s[-1] + 1e-12:
        raise InvalidParameterError(
            f"base path covers [0, {base.s[-1]}], cannot integrate to {upto}"
        )
    dense = base.dense

    def rhs(s: float, z: np.ndarray) -> np.ndarray:
        r = float(dense(s)[0])
        return np.array([z[1], -gauss_curvature(profile, abs(r)) * z[0]])

    events = [odesolve.EventSpec(lambda s, z: z[0], terminal=False)]
    sol = odesolve.integrate(rhs, 0.0, np.array([y0, yp0]), upto, tol=tol,
                             h_max=0.1, events=events)
    zeros = [s for s, _ in sol.events.get(0, []) if s > 1e-12]
    return JacobiSolution(
        s=sol.s, y=sol.y[:, 0], yp=sol.y[:, 1],
        first_zero=float(zeros[0]) if zeros else None,
    )


def _vm_grid(profile: Profile) -> np.ndarray:
    return np.linspace(0.0, profile.r_max, 1024)


def opposite_meridian_chain(profile: Profile, q: SurfacePoint,
                            length: float) -> GeodesicPath:
    """The unit-speed h-geodesic from q through the vertex: r(s) = |rho - s|,
    continuing on the opposite meridian."""
    if q.r <= 0:
        raise InvalidParameterError("q must differ from the vertex")
    return integrate_h(profile, GeodesicState(q.r, q.theta, -1.0, 0.0), length)


def first_conjugate(profile: Profile, q: SurfacePoint,
                    horizon: float | None = None, tol: float = 1e-12) -> float:
    """Parameter of the first conjugate point of q along the meridian chain
    through the vertex.  Exceeds rho = d(q, vertex) because the vertex is a
    pole; raises SearchHorizonError if no zero appears within the horizon."""
    if q.r <= 0:
        raise InvalidParameterError("the vertex is a pole; its cut locus is empty")
    check = is_von_mangoldt(profile, _vm_grid(profile))
    if not check.is_von_mangoldt:
        raise InvalidParameterError(
            "cut-locus structure requires non-increasing curvature; "
            f"curvature rises at r = {check.violation_radius}"
        )
    rho = q.r
    if horizon is None:
        horizon = rho + profile.r_max
    base = opposite_meridian_chain(profile, q, horizon)
    jac = jacobi_integrate(profile, base, 0.0, 1.0, horizon, tol=tol)
    if jac.first_zero is None:
        raise SearchHorizonError(
            f"no conjugate point within parameter {horizon}",
            lower_bound=horizon,
        )
    c = jac.first_zero
    if c <= rho:
        raise InternalConsistencyError(
            f"first conjugate parameter {c} <= rho = {rho}; the vertex "
            "should be a pole"
        )
    return c


def _pair_distance(profile: Profile, r1: float, r2: float, tol: float):
    """Background distance from radius r1 to the opposite-meridian point at
    radius r2, together with the Clairaut constant of the minimizing mirror
    pair (None when the meridian chain itself is minimizing).

    Near targets are cut off by the chain, mid-range ones by a mirror pair
    with a turning point, and far ones by a monotone-radius mirror pair, so
    the full connector enumeration is required here.
    """
    cands = h_connectors(profile, r1, r2, math.pi, tol=tol)
    best = min(cands, key=lambda c: c.length)
    if best.kind == "chain":
        return best.length, None
    return best.length, best.nu


@dataclass
class CutArc:
    """The navigation cut locus of a base point, exported as a sampled arc.

    s holds the parameter along the opposite-meridian chain tau_q, r and
    theta the arc samples, and dist the navigation distance from q to each
    sample (equal to the background distance to tau_q(s)).
    """

    q: SurfacePoint
    rho: float
    c: float
    s: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    dist: np.ndarray

    def conjugate_point(self) -> SurfacePoint:
        return SurfacePoint(float(self.r[0]), float(self.theta[0]))

    def point_at_index(self, i: int) -> SurfacePoint:
        return SurfacePoint(float(self.r[i]), float(self.theta[i]))

    def to_dict(self) -> dict:
        return {
            "q": {"r": self.q.r, "theta": self.q.theta},
            "rho": self.rho,
            "c": self.c,
            "samples": [[float(a), float(b), float(g)]
                        for a, b, g in zip(self.s, self.r, self.theta)],
            "dist": [float(d) for d in self.dist],
        }

    def to_json(self, filename) -> None:
        with open(filename, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    def to_csv(self, filename) -> None:
        with open(filename, "w", encoding="utf-8") as fh:
            fh.write("s,r,theta\n")
            for a, b, g in zip(self.s, self.r, self.theta):
                fh.write(f"{a:.17g},{b:.17g},{g:.17g}\n")


def cut_locus(profile: Profile, q: SurfacePoint,
              s_export_max: float | None = None, n_samples: int = 64,
              tol: float = 1e-10) -> CutArc:
    """Sampled navigation cut locus of q.

    Each chain parameter t >= c contributes the point
    (r_tau(t), theta_tau(t) + mu * T(t)) with T(t) = d_h(q, tau_q(t)); the
    distance T rather than t itself drives the twist because the chain stops
    minimizing at c, and the two mirror minimizers that replace it arrive
    after time T(t).  At t = c both parametrizations agree and the arc
    starts at the twisted image of the first conjugate point.
    """
    c = first_conjugate(profile, q)
    rho = q.r
    if s_export_max is None:
        s_export_max = c + 10.0 * max(1.0, rho)
    if s_export_max <= c:
        raise InvalidParameterError("s_export_max must exceed the conjugate parameter")
    if s_export_max - rho > profile.r_max:
        s_export_max = rho + profile.r_max
    ss = np.linspace(c, s_export_max, n_samples)
    rr = ss - rho
    dist = np.empty_like(ss)
    theta = np.empty_like(ss)
    for i, (t, r2) in enumerate(zip(ss, rr)):
        d, _ = _pair_distance(profile, rho, float(r2), tol)
        dist[i] = d
        theta[i] = q.theta + math.pi + profile.mu * d
    start_gap = abs(dist[0] - c)
    if start_gap > 1e-5 * max(1.0, c):
        raise InternalConsistencyError(
            f"cut-arc start distance {dist[0]} disagrees with the conjugate "
            f"parameter {c} by {start_gap}"
        )
    return CutArc(q=q, rho=rho, c=float(c), s=ss, r=rr, theta=theta, dist=dist)


@dataclass(frozen=True)
class CutPointCheck:
    """Outcome of shooting verification at a candidate cut point."""

    q: tuple
    target: tuple
    segments: list            # (heading, F-length) sorted by length
    d_F: float
    n_minimizers: int
    equal_length_gap: float | None
    verified: bool
    reason: str

    def to_dict(self) -> dict:
        return {
            "q": {"r": self.q[0], "theta": self.q[1]},
            "target": {"r": self.target[0], "theta": self.target[1]},
            "segments": [{"heading": h, "length": ln} for h, ln in self.segments],
            "d_F": self.d_F,
            "n_minimizers": self.n_minimizers,
            "equal_length_gap": self.equal_length_gap,
            "verified": self.verified,
            "reason": self.reason,
        }


def verify_cut_point(profile: Profile, q: SurfacePoint, target: SurfacePoint,
                     tol: float = 1e-5, n_scan: int = 720,
                     scan_tol: float = 3e-7) -> CutPointCheck:
    """Shoot F-geodesics from q over a full fan of headings and look for two
    distinct segments reaching the target with equal F-length.

    A genuine interior cut point is hit by two minimizing segments whose
    lengths agree to solver precision; elsewhere exactly one minimizer
    appears.  Failure to bracket two solutions is reported, not raised.
    """
    horizon = 1.05 * (q.r + target.r) + 0.5
    headings = np.linspace(-math.pi, math.pi, n_scan + 1)
    hits = shoot_hits(profile, q, target.r, target.theta, headings, horizon,
                      twist_mu=profile.mu, tol=scan_tol, refine_tol=1e-10)
    segments = sorted(((h, s) for h, s in hits), key=lambda t: t[1])
    d_f = distance_F(profile, q, target, tol=1e-9)
    n_min = sum(1 for _, ln in segments if ln <= d_f + tol)
    if len(segments) >= 2:
        gap = segments[1][1] - segments[0][1]
        verified = gap <= tol and n_min >= 2
        reason = "two equal-length segments found" if verified else (
            f"two segments found but length gap {gap} exceeds tol"
        )
    else:
        gap = None
        verified = False
        reason = "shooting bracketed fewer than two segments"
    return CutPointCheck(
        q=(q.r, q.theta), target=(target.r, target.theta),
        segments=[(float(h), float(ln)) for h, ln in segments],
        d_F=float(d_f), n_minimizers=int(n_min),
        equal_length_gap=None if gap is None else float(gap),
        verified=bool(verified), reason=reason,
    )


@dataclass(frozen=True)
class PoleCertificate:
    mu: float
    r_horizon: float
    integral_lower_bound: float
    integral_numeric: float
    jacobi_min: float
    jacobi_max_deviation: float
    certified: bool
    message: str

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "r_horizon": self.r_horizon,
            "integral_lower_bound": self.integral_lower_bound,
            "integral_numeric": self.integral_numeric,
            "jacobi_min": self.jacobi_min,
            "jacobi_max_deviation": self.jacobi_max_deviation,
            "certified": self.certified,
            "message": self.message,
        }


def certify_pole(profile: Profile, r_horizon: float | None = None) -> PoleCertificate:
    """Certify that the vertex is a pole up to a finite horizon.

    Two ingredients: (i) the divergence rate of the inverse squared parallel
    length, bounded below by mu^2/(4 pi^2) per unit radius because
    m < 1/mu, which forces every non-meridian geodesic to stay bounded; and
    (ii) the Jacobi field along a meridian from the vertex, which equals
    m(s) and therefore never vanishes, so meridians (and their twists) stay
    conjugate-point-free.
    """
    if r_horizon is None:
        r_horizon = profile.r_max
    if r_horizon <= 1.0:
        raise InvalidParameterError("horizon must exceed 1 for the tail bound")
    bound = profile.mu**2 / (4.0 * math.pi**2) * (r_horizon - 1.0)
    integral = quad(
        lambda r: 1.0 / (2.0 * math.pi * float(profile.m(r))) ** 2,
        1.0, r_horizon, epsabs=1e-12, epsrel=1e-10, limit=200,
    )[0]
    base = integrate_h(profile, GeodesicState(0.0, 0.0, 1.0, 0.0), r_horizon)
    jac = jacobi_integrate(profile, base, 0.0, 1.0, r_horizon)
    warp = np.array([float(profile.m(s)) for s in jac.s])
    deviation = float(np.max(np.abs(jac.y - warp)))
    y_min = float(np.min(jac.y[jac.s > 1e-9])) if np.any(jac.s > 1e-9) else 0.0
    certified = jac.first_zero is None and y_min > 0.0 and integral >= bound * 0.99
    return PoleCertificate(
        mu=profile.mu, r_horizon=float(r_horizon),
        integral_lower_bound=float(bound), integral_numeric=float(integral),
        jacobi_min=y_min, jacobi_max_deviation=deviation,
        certified=bool(certified),
        message=f"pole certified up to horizon {r_horizon}" if certified
        else "certification failed",
    )
