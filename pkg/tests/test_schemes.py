import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from hybrid_bsqi import _kernels, bsqi, evolve, harness, schemes
from hybrid_bsqi.problems import catalog
from hybrid_bsqi.schemes import FluxWindow, SchemeKind, WenoWorkspace

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_scheme_kind_half_widths_and_parse():
    assert [k.half_width for k in SchemeKind] == [2, 4, 2, 3]
    assert SchemeKind.parse("qnbsqi") is SchemeKind.QNBSQI
    assert SchemeKind.CBSQI.is_bsqi and not SchemeKind.WENO5.is_bsqi
    with pytest.raises(ValueError):
        SchemeKind.parse("weno7")


# -- flux splitting -----------------------------------------------------------------

def test_split_advection_example():
    plus, minus = schemes.split_flux([1.0, 2.0], [1.0, 2.0], 1.0)
    np.testing.assert_array_equal(plus, [1.0, 2.0])
    np.testing.assert_array_equal(minus, [0.0, 0.0])


def test_split_burgers_monotone_parts():
    u = np.linspace(-1.0, 1.0, 401)
    plus, minus = schemes.split_flux(0.5 * u * u, u, 1.0)
    np.testing.assert_allclose(plus + minus, 0.5 * u * u, rtol=0, atol=1e-16)
    assert plus[0] == pytest.approx(-0.25)
    assert np.all(np.diff(plus) >= 0)
    assert np.all(np.diff(minus) <= 0)


def test_split_rejects_nonpositive_alpha():
    with pytest.raises(ValueError):
        schemes.split_flux([0.0, 1.0], [0.0, 1.0], 0.0)
    plus, minus = schemes.split_flux([2.0, 2.0], [1.0, 1.0], 0.0)
    np.testing.assert_array_equal(plus + minus, [2.0, 2.0])


# -- BSQI fluxes --------------------------------------------------------------------

@given(c=finite)
def test_bsqi_flux_consistency(c):
    assert schemes.flux_cbsqi([c] * 4) == pytest.approx(c, abs=1e-14 * max(1, abs(c)))
    assert schemes.flux_qnbsqi([c] * 8) == pytest.approx(c, abs=1e-13 * max(1, abs(c)))


def test_flux_weights_sum_to_one_exactly():
    assert sum(schemes.CBSQI_FLUX) == 1
    assert sum(schemes.QNBSQI_FLUX) == 1


def test_cbsqi_linear_data():
    exact = sum(w * Fr(k) for w, k in zip(schemes.CBSQI_FLUX, range(4)))
    assert exact == Fr(3, 2)
    assert schemes.flux_cbsqi([0.0, 1.0, 2.0, 3.0]) == 1.5


def test_flux_window_length_checked():
    with pytest.raises(ValueError):
        schemes.flux_cbsqi([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        schemes.flux_qnbsqi([1.0] * 7)


@pytest.mark.parametrize("degree,weights", [(bsqi.CUBIC, schemes.CBSQI_FLUX),
                                            (bsqi.QUINTIC, schemes.QNBSQI_FLUX)])
def test_telescoped_weights_match_printed_flux(degree, weights):
    # cumulative sums of the derivative stencil give the interface weights
    assert schemes.telescoped_flux_weights(bsqi.stencil(degree, 1)) == weights


@pytest.mark.parametrize("degree,flux,width,left", [(bsqi.CUBIC, schemes.flux_cbsqi, 4, 1),
                                                    (bsqi.QUINTIC, schemes.flux_qnbsqi, 8, 3)])
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_telescoping_equivalence(degree, flux, width, left, data):
    n = 12
    f = data.draw(hnp.arrays(float, n + 2 * 4, elements=finite))
    dx = data.draw(st.floats(1e-3, 1.0))
    h = bsqi.stencil(degree, 1).half_width
    ref = bsqi.qi_derivative(degree, f[4 - h:4 + n + h], dx)
    faces = [flux(f[j - left:j - left + width]) for j in range(3, 4 + n)]
    got = np.diff(faces) / dx
    scale = np.sum(np.abs(f)) / dx + 1e-300
    assert np.max(np.abs(got - ref)) <= 1e-13 * scale


# -- WENO ---------------------------------------------------------------------------

@pytest.mark.parametrize("order,width", [(3, 3), (5, 5)])
def test_weno_constant_data_weights(order, width):
    ws = WenoWorkspace(order)
    up = schemes.weno3_upwind if order == 3 else schemes.weno5_upwind
    assert up([0.7] * width, ws) == pytest.approx(0.7, abs=1e-15)
    np.testing.assert_allclose(ws.nonlinear_weights, ws.linear_weights, atol=1e-15)


@pytest.mark.parametrize("order,width", [(3, 3), (5, 5)])
@given(data=st.data())
def test_weno_weights_normalised(order, width, data):
    v = data.draw(hnp.arrays(float, width, elements=finite))
    eps = data.draw(st.sampled_from([1e-6, 1e-12, 1e-2]))
    ws = WenoWorkspace(order, eps)
    up = schemes.weno3_upwind if order == 3 else schemes.weno5_upwind
    up(v, ws)
    assert np.all(ws.nonlinear_weights >= 0)
    assert abs(ws.nonlinear_weights.sum() - 1.0) <= 1e-15


def test_weno3_step_suppresses_jump_stencil():
    ws = WenoWorkspace(3)
    schemes.weno3_upwind([0.0, 0.0, 1.0], ws)
    assert ws.nonlinear_weights[1] < 1e-4


def test_weno5_step_suppresses_jump_stencils():
    ws = WenoWorkspace(5)
    schemes.weno5_upwind([0.0, 0.0, 0.0, 1.0, 1.0], ws)
    assert ws.nonlinear_weights[1] < 1e-4
    assert ws.nonlinear_weights[2] < 1e-4
    assert ws.nonlinear_weights[0] > 1 - 1e-4


def test_weno3_linear_data_is_linear_blend():
    ws = WenoWorkspace(3)
    v = [4.0, 5.0, 6.0]
    got = schemes.weno3_upwind(v, ws)
    # equal smoothness indicators leave the linear weights
    blend = (1 / 3) * (-0.5 * 4 + 1.5 * 5) + (2 / 3) * (0.5 * 5 + 0.5 * 6)
    assert got == pytest.approx(blend, abs=1e-14)
    assert got == pytest.approx(5.5, abs=1e-14)


@pytest.mark.parametrize("kind", ["weno3", "weno5"])
def test_weno_flux_constant_state(kind):
    u = np.full(9, 0.3)
    f = 0.5 * u * u
    plus, minus = schemes.split_flux(f, u, 1.0)
    win = FluxWindow(plus, minus, 4)
    ws = WenoWorkspace(3 if kind == "weno3" else 5)
    fn = schemes.flux_weno3 if kind == "weno3" else schemes.flux_weno5
    assert fn(win, ws) == pytest.approx(0.045, abs=1e-14)


def test_flux_window_shape_check():
    with pytest.raises(ValueError):
        FluxWindow(np.zeros(4), np.zeros(5), 2)


@pytest.mark.parametrize("kind", [0, 1, 2, 3])
def test_array_kernels_match_scalar_fluxes(kind, backend, rng):
    g, n = 4, 11
    u = rng.uniform(-1, 1, (n + 2 * g, 1))
    f = 0.5 * u * u
    alpha = float(np.max(np.abs(u)))
    k = _kernels.get(backend)
    faces = k.interface_fluxes(u, f, alpha, kind, 1e-6, g)[:, 0]
    plus, minus = schemes.split_flux(f[:, 0], u[:, 0], alpha)
    want = []
    for j in range(g - 1, g + n):
        if kind == 0:
            want.append(schemes.flux_cbsqi(f[j - 1:j + 3, 0]))
        elif kind == 1:
            want.append(schemes.flux_qnbsqi(f[j - 3:j + 5, 0]))
        elif kind == 2:
            want.append(schemes.flux_weno3(FluxWindow(plus, minus, j), WenoWorkspace(3)))
        else:
            want.append(schemes.flux_weno5(FluxWindow(plus, minus, j), WenoWorkspace(5)))
    np.testing.assert_allclose(faces, want, rtol=1e-13, atol=1e-14)


# -- Fourier symbols ----------------------------------------------------------------

@pytest.mark.parametrize("kind", ["cbsqi", "qnbsqi"])
def test_symbol_equals_stencil_dft(kind):
    theta = np.linspace(-math.pi, math.pi, 64)
    sym = schemes.fourier_symbol(kind, theta)
    dft = schemes.stencil_dft(kind, theta)
    assert np.max(np.abs(sym - dft)) <= 1e-14
    assert np.all(sym.real == 0)


def test_symbol_values():
    assert schemes.fourier_symbol("cbsqi", 0.0) == 0
    assert schemes.fourier_symbol("cbsqi", math.pi / 2) == pytest.approx(4j / 3, abs=1e-15)
    with pytest.raises(ValueError):
        schemes.fourier_symbol("weno5", 0.3)


@pytest.mark.parametrize("kind", ["cbsqi", "qnbsqi"])
def test_symbol_small_angle_consistency(kind):
    # C(theta) ~ i theta for small theta (first-derivative consistency)
    th = 1e-4
    assert schemes.fourier_symbol(kind, th) == pytest.approx(1j * th, rel=1e-7)


# -- orders on smooth advection -------------------------------------------------------

@pytest.mark.parametrize("scheme,dt_rule,bound", [
    ("cbsqi", (0.1, 1.5), 3.9),
    ("qnbsqi", (1.0, 2.0), 5.8),  # dt = dx^2 keeps the time error below the spatial one
    ("weno3", (0.1, 1.5), 2.8),
    ("weno5", (0.1, 1.5), 4.8),
])
def test_smooth_advection_order(scheme, dt_rule, bound):
    reports = harness.convergence_study(catalog("advection_sine"), evolve.HybridConfig(scheme),
                                        (40, 80, 160, 320), 1.0, dt_rule)
    assert reports[-1].order_l1 >= bound
