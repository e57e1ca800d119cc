import json
import math

import numpy as np
import pytest

from randers import (
    InvalidParameterError,
    SurfacePoint,
    gauss_curvature,
    geodesic_parallels,
    is_von_mangoldt,
    load_surface,
    make_custom,
    make_paraboloid,
    wrap_angle,
)


def test_paraboloid_closed_forms(parab):
    assert float(parab.m(0.0)) == 0.0
    assert float(parab.m(1.0)) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
    assert float(parab.m1(1.0)) == pytest.approx(2.0**-1.5, abs=1e-15)
    # m'(r) = (mu^2 r^2 + 1)^{-3/2}, m''(r) = -3 mu^2 r (mu^2 r^2 + 1)^{-5/2}
    for r in (0.3, 1.0, 2.7, 9.0):
        assert float(parab.m1(r)) == pytest.approx((r * r + 1.0) ** -1.5,
                                                   abs=1e-12)
        assert float(parab.m2(r)) == pytest.approx(
            -3.0 * r * (r * r + 1.0) ** -2.5, abs=1e-12)


@pytest.mark.parametrize("profile_name", ["parab", "sphere", "bump"])
def test_derivatives_match_finite_differences(profile_name, request, rng):
    p = request.getfixturevalue(profile_name)
    h = 1e-5
    for r in rng.uniform(2 * h, p.r_max - 2 * h, 100):
        fd1 = (p.m(r + h) - p.m(r - h)) / (2 * h)
        fd2 = (p.m(r + h) - 2.0 * p.m(r) + p.m(r - h)) / (h * h)
        assert abs(p.m1(r) - fd1) <= 1e-6 * max(1.0, abs(p.m1(r)))
        assert abs(p.m2(r) - fd2) <= 1e-6 * max(1.0, abs(p.m2(r))) * 10
        assert float(p.m(r)) > 0.0


def test_boundedness_margin(parab):
    assert parab.boundedness_margin() > 0.0
    # closed form at r_max = 20: 1 - 20/sqrt(401)
    assert parab.boundedness_margin() == pytest.approx(
        1.0 - 20.0 / math.sqrt(401.0), abs=1e-9)


def test_gauss_curvature_paraboloid(parab):
    # G(r) = 3 mu^2 / (mu^2 r^2 + 1)^2
    assert gauss_curvature(parab, 1.0) == pytest.approx(0.75, abs=1e-12)
    assert gauss_curvature(parab, 0.0) == pytest.approx(3.0, abs=1e-8)
    assert gauss_curvature(parab, 2.0) == pytest.approx(3.0 / 25.0, abs=1e-12)


def test_gauss_curvature_flat_profile(flat):
    for r in (0.0, 0.5, 3.0):
        assert gauss_curvature(flat, r) == 0.0
    with pytest.raises(InvalidParameterError):
        gauss_curvature(flat, -1.0)


def test_von_mangoldt_verdicts(parab, bump):
    ok = is_von_mangoldt(parab, np.arange(0.0, 10.0, 0.01))
    assert ok.is_von_mangoldt and ok.violation_index is None
    bad = is_von_mangoldt(bump, np.linspace(0.01, 1.7, 200))
    assert not bad.is_von_mangoldt
    assert bad.violation_index is not None
    assert bad.violation_radius == pytest.approx(
        np.linspace(0.01, 1.7, 200)[bad.violation_index])
    # single-point grid is vacuously monotone
    assert is_von_mangoldt(parab, [1.0]).is_von_mangoldt
    with pytest.raises(InvalidParameterError):
        is_von_mangoldt(parab, [])


def test_geodesic_parallels(parab, bump):
    assert geodesic_parallels(parab, np.linspace(0.0, 20.0, 200)) == []
    roots = geodesic_parallels(bump, np.linspace(0.0, 1.8, 50))
    assert len(roots) == 1
    # m'(r) = 1 - r^4/4 vanishes at r = sqrt(2)
    assert roots[0] == pytest.approx(math.sqrt(2.0), abs=1e-10)
    assert geodesic_parallels(bump, [0.5]) == []


def test_profile_construction_errors():
    with pytest.raises(InvalidParameterError):
        make_paraboloid(0.0)
    with pytest.raises(InvalidParameterError):
        make_paraboloid(-1.0)
    # m(0) != 0
    with pytest.raises(InvalidParameterError):
        make_custom("r + 1", "1", "0", mu=0.1, r_max=1.0)
    # m'(0) != 1
    with pytest.raises(InvalidParameterError):
        make_custom("2*r", "2", "0", mu=0.1, r_max=1.0)
    # boundedness violated: m = r with mu * r_max >= 1
    with pytest.raises(InvalidParameterError):
        make_custom("r", "1", "0", mu=0.2, r_max=10.0)
    # inconsistent derivative data
    with pytest.raises(InvalidParameterError):
        make_custom("r", "1 + r", "0", mu=0.04, r_max=10.0)


def test_surface_point_and_wrap():
    q = SurfacePoint(2.0, 7.0)
    assert q.r == 2.0 and q.theta == 7.0     # theta stored unreduced
    assert wrap_angle(7.0) == pytest.approx(7.0 - 2.0 * math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    with pytest.raises(InvalidParameterError):
        SurfacePoint(-0.1, 0.0)


def test_load_surface(tmp_path):
    p = load_surface({"kind": "paraboloid", "mu": 1.0, "r_max": 20.0})
    assert p.kind == "paraboloid-like" and p.mu == 1.0

    cfg = {"kind": "custom", "m": "r - r^5/20", "m1": "1 - r^4/4",
           "m2": "-r^3", "mu": 0.5, "r_max": 1.8}
    fn = tmp_path / "surf.json"
    fn.write_text(json.dumps(cfg))
    q = load_surface(str(fn))
    assert q.kind == "custom-analytic"
    assert float(q.m(1.0)) == pytest.approx(1.0 - 1.0 / 20.0)

    with pytest.raises(InvalidParameterError):
        load_surface({"kind": "nope"})
    with pytest.raises(InvalidParameterError):
        load_surface({"kind": "custom", "m": "r"})  # missing m1, m2
