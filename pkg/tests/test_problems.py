import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid_bsqi import evolve, problems, riemann
from hybrid_bsqi.grid import CELL, build_grid
from hybrid_bsqi.problems import catalog, exact_nonconvex, nonconvex_flux, nonconvex_derivative
from hybrid_bsqi.riemann import EulerState, VacuumError

SOD = (EulerState(1.0, 0.0, 1.0), EulerState(0.125, 0.0, 0.1))
LAX = (EulerState(0.445, 0.698, 3.528), EulerState(0.5, 0.0, 0.571))


@pytest.mark.parametrize("name", problems.NAMES)
def test_catalog_problems_are_complete(name):
    p = catalog(name)
    assert p.name == name
    grid = build_grid(*p.domain, 64, layout=CELL)
    u0 = np.asarray(p.initial(grid.nodes)).reshape(grid.n_nodes, p.components)
    assert np.isfinite(u0).all()
    f = p.flux(u0)
    assert f.shape == u0.shape
    assert p.max_speed(u0) >= 0
    assert p.flux_kernel is not None


def test_catalog_unknown():
    with pytest.raises(ValueError):
        catalog("shallow_water")


def test_catalog_settings():
    assert catalog("advection_sine").bc.is_periodic
    assert catalog("burgers_sine").bc.is_periodic
    for name in ("advection_pulse", "burgers_pulse", "buckley_leverett", "nonconvex_up",
                 "euler_sod", "euler_lax"):
        assert catalog(name).bc.kind == "transmissive"
    sod, lax = catalog("euler_sod"), catalog("euler_lax")
    assert (sod.domain, sod.m, sod.cfl, sod.t_final) == ((0.0, 1.0), 300, 0.3, 0.25)
    assert (lax.domain, lax.m, lax.cfl, lax.t_final) == ((-4.0, 4.0), 500, 0.4, 1.3)
    assert sod.meta["x0"] == 0.5 and lax.meta["x0"] == 0.0
    assert sod.meta["left"].primitive.tolist() == [1.0, 0.0, 1.0]
    assert sod.meta["right"].primitive.tolist() == [0.125, 0.0, 0.1]
    assert sod.gamma == 1.4


def test_buckley_leverett_flux():
    assert problems.bl_flux(np.array([0.5]))[0] == pytest.approx(0.5)
    u = np.linspace(0, 1, 101)
    f = problems.bl_flux(u)
    assert f[0] == 0 and f[-1] == 1
    h = 1e-6
    fd = (problems.bl_flux(u[1:-1] + h) - problems.bl_flux(u[1:-1] - h)) / (2 * h)
    np.testing.assert_allclose(problems.bl_derivative(u[1:-1]), fd, atol=1e-7)
    assert problems.bl_speed(np.array([0.0, 1.0])) == pytest.approx(2.0)


def test_nonconvex_flux_is_c1_at_half():
    h = 1e-9
    left, right = 0.25 * 0.5 * 0.5, 0.5 * 0.25 - 0.25 + 3 / 16
    assert left == right == pytest.approx(1 / 16)
    f = nonconvex_flux(np.array([0.5 - h, 0.5, 0.5 + h]))
    assert f[1] == pytest.approx(1 / 16)
    assert abs(f[0] - f[2]) < 1e-9
    d = nonconvex_derivative(np.array([0.5 - h, 0.5 + h]))
    assert abs(d[0] - d[1]) < 1e-8
    # the printed quadratic branch u^2/2 - u/4 + 3/16 is not continuous there
    assert 0.5 * 0.25 - 0.125 + 3 / 16 != pytest.approx(1 / 16)


def _bisect(fn, lo, hi, tol=1e-15):
    flo = fn(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def test_nonconvex_breakpoints_follow_from_the_flux():
    f = lambda u: float(nonconvex_flux(np.array([u]))[0])
    df = lambda u: float(nonconvex_derivative(np.array([u]))[0])
    # up-step: shock 0 -> u* tangent to the convex branch
    us = _bisect(lambda u: (f(u) - f(0.0)) / u - df(u), 0.5, 1.0)
    assert df(us) == pytest.approx((math.sqrt(6) - 2) / 4, abs=1e-12)
    assert df(1.0) == pytest.approx(0.5)
    # down-step: shock 1 -> u* tangent to the concave branch
    us = _bisect(lambda u: (f(1.0) - f(u)) / (1.0 - u) - df(u), 0.0, 0.5)
    assert df(us) == pytest.approx((math.sqrt(3) - 1) / 4, abs=1e-12)
    assert df(0.0) == pytest.approx(0.25)


def test_exact_nonconvex_examples():
    assert exact_nonconvex("up", 2.0, 1.0) == 1.0
    assert exact_nonconvex("up", 0.75, 1.0) == pytest.approx(1.0)
    assert exact_nonconvex("down", 0.0, 1.0) == 1.0
    assert exact_nonconvex("down", 0.9, 1.0) == 0.0
    edge = ((math.sqrt(6) - 2) + 1) / 4
    assert exact_nonconvex("up", edge + 1e-12, 1.0) == pytest.approx(math.sqrt(3 / 8), abs=1e-9)
    with pytest.raises(ValueError):
        exact_nonconvex("up", 0.3, 0.0)
    with pytest.raises(ValueError):
        exact_nonconvex("sideways", 0.3, 1.0)


def test_nonconvex_rarefaction_is_a_characteristic_fan():
    t = 0.8
    x = np.linspace(((math.sqrt(6) - 2) * t + 1) / 4 + 1e-3, (2 * t + 1) / 4 - 1e-3, 50)
    u = exact_nonconvex("up", x, t)
    np.testing.assert_allclose(nonconvex_derivative(u), (x - 0.25) / t, atol=1e-13)
    x = np.linspace(((math.sqrt(3) - 1) * t + 1) / 4 + 1e-3, (t + 1) / 4 - 1e-3, 50)
    u = exact_nonconvex("down", x, t)
    np.testing.assert_allclose(nonconvex_derivative(u), (x - 0.25) / t, atol=1e-13)


def test_burgers_sine_exact_is_characteristic():
    x = np.linspace(0, 2 * math.pi, 200)
    u = problems.burgers_sine_exact(x, 0.5)[:, 0]
    np.testing.assert_allclose(u, np.sin(x - 0.5 * u), atol=1e-14)
    with pytest.raises(ValueError):
        problems.burgers_sine_exact(x, 1.2)


def test_burgers_pulse_exact_structure():
    t = 0.5
    x = np.array([-0.5, -1 / 3 + 0.25, 0.0, 0.4, 0.6, 0.9])
    u = problems.burgers_pulse_exact(x, t)[:, 0]
    np.testing.assert_allclose(u, [0.0, 0.5, 2 / 3, 1.0, 0.0, 0.0])
    # after the fan catches the shock, the area (mass) is still 2/3
    xf = np.linspace(-1, 3, 400001)
    for t in (0.5, 2.0, 3.0):
        mass = np.trapezoid(problems.burgers_pulse_exact(xf, t)[:, 0], xf)
        assert mass == pytest.approx(2 / 3, abs=1e-4)


# -- Euler ----------------------------------------------------------------------------

def test_primitive_conserved_round_trip(rng):
    w = np.column_stack([rng.uniform(1e-3, 10, 1000), rng.uniform(-5, 5, 1000),
                         rng.uniform(1e-3, 10, 1000)])
    back = riemann.conserved_to_primitive(riemann.primitive_to_conserved(w))
    np.testing.assert_allclose(back, w, rtol=1e-14, atol=1e-14 * np.abs(w).max())


def test_euler_state_checks():
    with pytest.raises(ValueError):
        EulerState(-1.0, 0.0, 1.0)
    s = EulerState(1.0, 2.0, 3.0)
    assert EulerState.from_conserved(s.conserved) == pytest.approx(s) or \
        np.allclose(EulerState.from_conserved(s.conserved).primitive, s.primitive)
    assert s.energy == pytest.approx(3 / 0.4 + 2.0)


def test_euler_flux_energy_term():
    q = riemann.primitive_to_conserved(np.array([[1.0, 2.0, 3.0]]))
    f = problems.euler_flux_factory(1.4)[0](q)[0]
    e = q[0, 2]
    np.testing.assert_allclose(f, [2.0, 1.0 * 4 + 3.0, 2.0 * (e + 3.0)])


def _pressure_oracle(p, s):
    """Independent f_K(p) for the bisection oracle."""
    g = s.gamma
    if p > s.p:
        A, B = 2 / ((g + 1) * s.rho), (g - 1) / (g + 1) * s.p
        return (p - s.p) * math.sqrt(A / (p + B))
    c = math.sqrt(g * s.p / s.rho)
    return 2 * c / (g - 1) * ((p / s.p) ** ((g - 1) / (2 * g)) - 1)


@pytest.mark.parametrize("left,right", [SOD, LAX,
                                        (EulerState(1.0, 0.0, 1000.0), EulerState(1.0, 0.0, 0.01)),
                                        (EulerState(1.0, -2.0, 0.4), EulerState(1.0, 2.0, 0.4))])
def test_star_pressure_against_bisection(left, right):
    p, u = riemann.star_state(left, right)
    fn = lambda q: _pressure_oracle(q, left) + _pressure_oracle(q, right) + right.u - left.u
    q = _bisect(fn, 1e-12, 10 * max(left.p, right.p) + 10, tol=1e-16)
    assert abs(p - q) <= 1e-10 * max(1.0, q)
    ue = 0.5 * (left.u + right.u) + 0.5 * (_pressure_oracle(q, right) - _pressure_oracle(q, left))
    assert abs(u - ue) <= 1e-10


def test_sod_star_values():
    p, u = riemann.star_state(*SOD)
    assert p == pytest.approx(0.30313, abs=1e-5)
    assert u == pytest.approx(0.92745, abs=1e-5)


def test_riemann_trivial_cases():
    s = EulerState(0.7, 0.2, 1.3)
    assert riemann.euler_riemann_exact(s, s, 0.4) == s
    left, right = SOD
    assert riemann.euler_riemann_exact(left, right, -10.0) == left
    assert riemann.euler_riemann_exact(left, right, 10.0) == right


def test_vacuum_rejected():
    with pytest.raises(VacuumError):
        riemann.star_state(EulerState(1.0, -10.0, 0.4), EulerState(1.0, 10.0, 0.4))


def _fan_integral(left, right, a, b, x0, t):
    """Integral of the conserved exact solution over [a, b], split at the waves."""
    p_star, u_star = riemann.star_state(left, right)
    g = left.gamma
    c_star = left.sound_speed * (p_star / left.p) ** ((g - 1) / (2 * g))
    assert p_star < left.p and p_star > right.p  # rarefaction left, shock right
    shock = right.u + right.sound_speed * math.sqrt((g + 1) / (2 * g) * p_star / right.p
                                                    + (g - 1) / (2 * g))
    cuts = [a] + [x0 + s * t for s in (left.u - left.sound_speed, u_star - c_star, u_star, shock)]
    cuts.append(b)
    xg, wg = np.polynomial.legendre.leggauss(40)
    total = np.zeros(3)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        x = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
        q = riemann.primitive_to_conserved(riemann.sample_primitive(left, right, x, t, x0))
        total += 0.5 * (hi - lo) * (wg @ q)
    return total


@pytest.mark.parametrize("left,right,x0", [(*SOD, 0.5), (*LAX, 0.0)])
def test_exact_fan_satisfies_integral_form(left, right, x0):
    a, b = x0 - 5.0, x0 + 5.0
    t1, t2 = 0.3, 0.9
    flux = problems.euler_flux_factory(1.4)[0]
    fl = flux(left.conserved[None])[0]
    fr = flux(right.conserved[None])[0]
    change = _fan_integral(left, right, a, b, x0, t2) - _fan_integral(left, right, a, b, x0, t1)
    np.testing.assert_allclose(change, -(t2 - t1) * (fr - fl), atol=1e-8)


def test_load_riemann_config(tmp_path):
    path = tmp_path / "tube.txt"
    path.write_text("# custom tube\nleft = 1.0, 0.0, 1.0\nright = 0.125 0 0.1\nx0 = 0.3\n"
                    "gamma = 1.4\nm = 100\n")
    p = problems.load_riemann_config(path)
    assert p.m == 100 and p.meta["x0"] == 0.3
    bad = tmp_path / "bad.txt"
    bad.write_text("left = 1 0 1\nright = 1 0 1\nx0 = 0\ncolour = red\n")
    with pytest.raises(ValueError):
        problems.load_riemann_config(bad)
    bad.write_text("left = 1 0 1\nx0 = 0\n")
    with pytest.raises(ValueError):
        problems.load_riemann_config(bad)


def test_reference_defers_to_exact():
    p = catalog("euler_sod")
    x = np.linspace(0, 1, 50)
    np.testing.assert_array_equal(problems.reference_solution(p, 0.25, 0, x), p.exact(x, 0.25))
    p = catalog("advection_pulse")
    np.testing.assert_array_equal(problems.reference_solution(p, 0.2, 0, x),
                                  problems.pulse(x - 0.2))


@pytest.mark.slow
def test_buckley_leverett_reference_self_convergence():
    p = catalog("buckley_leverett")
    x = build_grid(*p.domain, 800, layout=CELL).nodes
    a = problems.reference_solution(p, 0.21, 8000, x)
    b = problems.reference_solution(p, 0.21, 16000, x)
    assert np.abs(a - b).sum() * (x[1] - x[0]) < 1e-3
