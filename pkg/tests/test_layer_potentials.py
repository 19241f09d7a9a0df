import warnings

import numpy as np
import pytest

from gptasym.errors import InvalidArgumentError, NearSingularError, NearSingularWarning, SingularPointError
from gptasym.geometry import ShapeSpec, discretize
from gptasym.layer_potentials import (
    Density,
    double_layer,
    fundamental_solution,
    gamma_gradient,
    gamma_partial,
    jump_check,
    k_matrix,
    kstar_matrix,
    single_layer,
    single_layer_gradient,
)
from gptasym.multiindex import up_to


def test_fundamental_solution_values():
    assert abs(fundamental_solution([0.6, 0.8])) < 1e-16
    assert abs(fundamental_solution([np.e, 0.0]) - 1 / (2 * np.pi)) < 1e-15
    assert abs(gamma_partial(np.array([2.0, 0.0]), (1, 0)) - 1 / (4 * np.pi)) < 1e-15


def test_fundamental_solution_singular():
    with pytest.raises(SingularPointError):
        fundamental_solution([0.0, 0.0])
    with pytest.raises(SingularPointError):
        gamma_partial(np.zeros(2), (1, 1))


def test_gamma_partial_cap():
    with pytest.raises(InvalidArgumentError):
        gamma_partial(np.array([1.0, 0.0]), (4, 3))


@pytest.mark.parametrize("j", up_to(4, 1))
def test_gamma_partial_against_finite_differences(j):
    x = np.array([0.7, -0.4])
    h = 1e-5
    if j[0] > 0:
        lower, e = (j[0] - 1, j[1]), np.array([h, 0.0])
    else:
        lower, e = (j[0], j[1] - 1), np.array([0.0, h])
    fd = (gamma_partial(x + e, lower) - gamma_partial(x - e, lower)) / (2 * h)
    exact = gamma_partial(x, j)
    assert abs(fd - exact) < 1e-6 * max(1.0, abs(exact))


def test_gradient_consistent_with_partials():
    x = np.array([0.3, 1.1])
    assert np.allclose(gamma_gradient(x), [gamma_partial(x, (1, 0)), gamma_partial(x, (0, 1))])


def test_single_layer_of_constant_on_unit_circle():
    c = discretize(ShapeSpec("disk"), 256)
    one = np.ones(c.size)
    assert abs(single_layer(c, one, [[0.0, 0.0]])[0]) < 1e-14
    assert abs(single_layer(c, one, [[2.0, 0.0]])[0] - 2 * np.pi * np.log(2) / (2 * np.pi) * 1.0) < 1e-12


def test_single_layer_dipole_decay():
    c = discretize(ShapeSpec("disk"), 256)
    phi = np.cos(c.t)
    # S[cos] outside the unit circle is -cos(theta) / (2 r)
    assert abs(single_layer(c, phi, [[3.0, 0.0]])[0] + 1 / 6) < 1e-12


def test_single_layer_trace():
    c = discretize(ShapeSpec("disk"), 128)
    assert np.allclose(single_layer(c, np.cos(c.t)), -0.5 * np.cos(c.t), atol=1e-12)
    c2 = discretize(ShapeSpec("disk", radius=2.0), 128)
    assert np.allclose(single_layer(c2, np.ones(c2.size)), 2 * np.log(2), atol=1e-12)


@pytest.mark.parametrize("shape", [ShapeSpec("disk"), ShapeSpec("ellipse", a=2.0, b=1.0), ShapeSpec("kite")])
def test_gauss_identity(shape):
    c = discretize(shape, 256)
    one = np.ones(c.size)
    inside = np.array([[0.0, 0.05]])
    outside = np.array([[4.0, 3.0]])
    assert abs(double_layer(c, one, inside)[0] - 1.0) < 1e-10
    assert abs(double_layer(c, one, outside)[0]) < 1e-10
    assert np.abs(double_layer(c, one) - 0.5).max() < 1e-10


def test_kstar_on_unit_circle_is_constant():
    c = discretize(ShapeSpec("disk"), 64)
    ks = kstar_matrix(c).matrix
    assert np.allclose(ks, c.weights[None, :] / (4 * np.pi), atol=1e-15)
    phi = np.cos(3 * c.t)
    assert np.abs(ks @ phi).max() < 1e-12


def test_discrete_adjointness(kite_curve):
    ks = kstar_matrix(kite_curve).matrix
    k = k_matrix(kite_curve).matrix
    w = kite_curve.weights
    assert np.abs(k * w[:, None] - (ks * w[:, None]).T).max() < 1e-15


def test_jump_check_unit_circle():
    c = discretize(ShapeSpec("disk"), 256)
    r = jump_check(c, np.cos(c.t), h_eps=1e-4)
    assert r.max < 1e-5
    assert r.jump < 1e-5
    assert jump_check(c, np.zeros(c.size)).max == 0.0


def test_jump_check_rejects_scaled_curve():
    c = discretize(ShapeSpec("kite"), 64).scaled(0.1, (0.2, 0.0))
    with pytest.raises(InvalidArgumentError):
        jump_check(c, np.cos(c.t))


def test_near_target_policy():
    c = discretize(ShapeSpec("disk"), 64)
    near = [[1.0 + 1e-3, 0.0]]
    with pytest.raises(NearSingularError):
        single_layer(c, np.ones(c.size), near)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        single_layer(c, np.ones(c.size), near, near="warn")
    assert any(issubclass(w.category, NearSingularWarning) for w in rec)
    single_layer(c, np.ones(c.size), near, near="ignore")


def test_single_layer_harmonic(kite_curve):
    phi = np.sin(kite_curve.t) + 0.3
    x = np.array([3.0, 1.0])
    h = 1e-3
    pts = x + h * np.array([[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]])
    v = single_layer(kite_curve, phi, pts)
    lap = (v[1:].sum() - 4 * v[0]) / h**2
    assert abs(lap) < 1e-4 * np.abs(phi).max()


def test_single_layer_gradient_matches_finite_difference(kite_curve):
    phi = np.cos(2 * kite_curve.t)
    x = np.array([2.5, -1.0])
    h = 1e-6
    g = single_layer_gradient(kite_curve, phi, [x])[0]
    fd = [
        (single_layer(kite_curve, phi, [x + [h, 0]])[0] - single_layer(kite_curve, phi, [x - [h, 0]])[0]) / (2 * h),
        (single_layer(kite_curve, phi, [x + [0, h]])[0] - single_layer(kite_curve, phi, [x - [0, h]])[0]) / (2 * h),
    ]
    assert np.allclose(g, fd, atol=1e-8)


def test_density_validation(kite_curve):
    with pytest.raises(InvalidArgumentError):
        Density(kite_curve, np.ones(3))
    d = Density(kite_curve, np.cos(kite_curve.t))
    assert np.asarray(d).shape == (kite_curve.size,)


@pytest.mark.parametrize("shape", [ShapeSpec("ellipse", a=2.0, b=1.0), ShapeSpec("kite")])
def test_k_maps_constants_to_half(shape):
    c = discretize(shape, 256)
    assert np.abs(k_matrix(c).matrix @ np.ones(c.size) - 0.5).max() < 1e-10


def test_density_integral(kite_curve):
    d = Density(kite_curve, np.cos(kite_curve.t) - 0.25)
    assert abs(d.integral() - kite_curve.integrate(d.values)) == 0.0
