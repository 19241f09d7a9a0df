import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptasym.domain_functions import (
    DiskDomain,
    background_U,
    background_V,
    fourier_data,
    green_function,
    green_value,
    neumann_function,
    neumann_normal_derivative,
    taylor_neumann,
)
from gptasym.errors import DomainError, IncompatibleDataError, InvalidArgumentError
from gptasym.layer_potentials import double_layer, fundamental_solution, kstar_matrix
from gptasym.multiindex import up_to


def _slope(eps, err):
    return np.polyfit(np.log(eps), np.log(err), 1)[0]


interior = st.tuples(st.floats(0.0, 0.85), st.floats(0, 2 * np.pi)).map(
    lambda rt: np.array([rt[0] * np.cos(rt[1]), rt[0] * np.sin(rt[1])])
)


def test_domain_validation():
    with pytest.raises(InvalidArgumentError):
        DiskDomain(0.0)
    d = DiskDomain(1.0, 64, c0=0.1)
    with pytest.raises(DomainError):
        d.check_center([0.85, 0.0])
    with pytest.raises(DomainError):
        neumann_function(d, d.curve.nodes, [0.95, 0.0])


def test_neumann_zero_center(unit_disk):
    c = unit_disk.curve
    n = neumann_function(unit_disk, c.nodes, [0.0, 0.0])
    assert np.ptp(n) < 1e-14
    assert abs(c.integrate(n)) < 1e-13


@settings(max_examples=20, deadline=None)
@given(interior)
def test_neumann_defining_properties(z):
    d = DiskDomain(1.0, 256)
    c = d.curve
    assert abs(c.integrate(neumann_function(d, c.nodes, z))) < 1e-9
    assert np.abs(neumann_normal_derivative(d, c.nodes, z) + 1 / (2 * np.pi)).max() < 1e-9


@settings(max_examples=20, deadline=None)
@given(interior)
def test_neumann_harmonic_in_x(z):
    d = DiskDomain(1.0, 64)
    x = np.array([0.0, 0.0]) if np.hypot(*z) > 0.4 else np.array([0.6, -0.3])
    h = 0.05
    th = 2 * np.pi * np.arange(32) / 32
    ring = x + h * np.stack([np.cos(th), np.sin(th)], -1)
    # x enters only through analytic log terms, so the mean-value property is exact
    vals = neumann_function(d, ring, z)
    assert abs(vals.mean() - neumann_function(d, x, z)) < 1e-9


def test_neumann_lemma_residual(unit_disk):
    c = unit_disk.curve
    z = np.array([0.3, -0.2])
    n = neumann_function(unit_disk, c.nodes, z)
    kmat = kstar_matrix(c).matrix.T * c.weights[None, :] / c.weights[:, None]
    r = -0.5 * n + kmat @ n - fundamental_solution(c.nodes - z)
    assert np.ptp(r) < 1e-8


def test_neumann_reciprocity():
    d = DiskDomain(1.0, 64)
    rng = np.random.default_rng(3)
    for _ in range(10):
        x = rng.uniform(-0.6, 0.6, 2)
        z = rng.uniform(-0.6, 0.6, 2)
        assert abs(neumann_function(d, x, z) - neumann_function(d, z, x)) < 1e-10


@pytest.mark.parametrize("j", up_to(3, 1))
def test_neumann_derivatives_match_finite_differences(unit_disk, j):
    c = unit_disk.curve
    z = np.array([0.25, 0.35])
    h = 1e-4
    if j[0] > 0:
        low, e = (j[0] - 1, j[1]), np.array([h, 0.0])
    else:
        low, e = (j[0], j[1] - 1), np.array([0.0, h])
    fd = (neumann_function(unit_disk, c.nodes, z + e, low) - neumann_function(unit_disk, c.nodes, z - e, low)) / (2 * h)
    exact = neumann_function(unit_disk, c.nodes, z, j)
    assert np.abs(fd - exact).max() < 1e-5 * np.abs(exact).max()


@pytest.mark.parametrize("j", up_to(3, 1))
def test_green_derivatives_match_finite_differences(unit_disk, j):
    c = unit_disk.curve
    z = np.array([-0.2, 0.4])
    h = 1e-4
    if j[0] > 0:
        low, e = (j[0] - 1, j[1]), np.array([h, 0.0])
    else:
        low, e = (j[0], j[1] - 1), np.array([0.0, h])
    fd = (green_function(unit_disk, c.nodes, z + e, low) - green_function(unit_disk, c.nodes, z - e, low)) / (2 * h)
    exact = green_function(unit_disk, c.nodes, z, j)
    assert np.abs(fd - exact).max() < 1e-5 * np.abs(exact).max()


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_taylor_remainder_order(unit_disk, p):
    x = unit_disk.curve.nodes[::16]
    z = np.array([0.3, 0.0])
    y = np.array([1.0, 0.0])
    eps = np.array([0.1, 0.05, 0.025])
    err = [np.abs(taylor_neumann(unit_disk, x, z, y, e, p) - neumann_function(unit_disk, x, z + e * y)).max() for e in eps]
    assert abs(_slope(eps, err) - (p + 1)) < 0.2


def test_taylor_zero_eps_and_radius(unit_disk):
    x = unit_disk.curve.nodes
    z = np.array([0.3, 0.0])
    assert np.array_equal(taylor_neumann(unit_disk, x, z, [1.0, 0.0], 0.0, 3), neumann_function(unit_disk, x, z))
    with pytest.raises(DomainError):
        taylor_neumann(unit_disk, x, z, [1.0, 0.0], 0.8, 2)


def test_poisson_kernel(unit_disk):
    c = unit_disk.curve
    assert np.allclose(green_function(unit_disk, c.nodes, [0.0, 0.0]), 1 / (2 * np.pi), atol=1e-15)
    rng = np.random.default_rng(11)
    for _ in range(10):
        r, t = 0.8 * np.sqrt(rng.uniform()), rng.uniform(0, 2 * np.pi)
        z = [r * np.cos(t), r * np.sin(t)]
        assert abs(c.integrate(green_function(unit_disk, c.nodes, z)) - 1) < 1e-10


def test_poisson_kernel_boundary_identity(unit_disk):
    c = unit_disk.curve
    z = np.array([0.4, 0.1])
    p = green_function(unit_disk, c.nodes, z)
    lhs = 0.5 * p + kstar_matrix(c).matrix @ p
    diff = c.nodes - z
    rhs = np.einsum("ij,ij->i", diff, c.normals) / (2 * np.pi * np.einsum("ij,ij->i", diff, diff))
    assert np.abs(lhs - rhs).max() < 1e-8


def test_green_value_vanishes_on_boundary(unit_disk):
    c = unit_disk.curve
    assert np.abs(green_value(unit_disk, c.nodes, [0.3, -0.5])).max() < 1e-14


def test_background_U_examples(unit_disk):
    th = unit_disk.theta()
    u = background_U(unit_disk, np.cos(th))
    assert np.allclose(u.trace(), np.cos(th), atol=1e-13)
    pts = np.array([[0.2, 0.3], [-0.5, 0.1]])
    assert np.allclose(u.value(pts), pts[:, 0], atol=1e-12)
    assert np.all(background_U(unit_disk, np.zeros_like(th)).value(pts) == 0)
    u2 = background_U(unit_disk, np.cos(2 * th))
    assert abs(u2.partial(np.zeros(2), (2, 0)) - 1.0) < 1e-12
    assert abs(unit_disk.curve.mean(u2.trace())) < 1e-15
    with pytest.raises(IncompatibleDataError):
        background_U(unit_disk, np.ones_like(th))


def test_background_V_examples(unit_disk):
    th = unit_disk.theta()
    v = background_V(unit_disk, np.cos(th))
    assert np.allclose(v.normal_derivative(), np.cos(th), atol=1e-13)
    assert abs(v.value(np.array([0.3, 0.2])) - 0.3) < 1e-12
    one = background_V(unit_disk, np.ones_like(th))
    assert np.abs(one.normal_derivative()).max() < 1e-13
    assert abs(one.value(np.array([0.1, -0.4])) - 1) < 1e-12
    v3 = background_V(unit_disk, np.cos(3 * th))
    assert np.allclose(v3.normal_derivative(), 3 * np.cos(3 * th), atol=1e-12)
    # radial finite difference of r^3 cos(3 theta) inside the safe region
    x = 0.9 * unit_disk.curve.nodes[5]
    h = 1e-4
    fd = (v3.value(x * (1 + h / 0.9)) - v3.value(x * (1 - h / 0.9))) / (2 * h)
    assert abs(fd - 3 * 0.81 * np.cos(3 * th[5])) < 1e-7


def test_fourier_data_and_double_layer(unit_disk):
    f = fourier_data(unit_disk, [(1, 1.0, 0.0), (2, 0.0, 0.5)])
    th = unit_disk.theta()
    assert np.allclose(f, np.cos(th) + 0.5 * np.sin(2 * th))
    # for mean-zero data on the circle the Poisson extension equals twice the double layer
    v = background_V(unit_disk, f)
    x = np.array([[0.1, 0.2]])
    assert abs(v.value(x[0]) - (0.1 + 0.5 * 2 * 0.1 * 0.2)) < 1e-12
    assert abs(v.value(x[0]) - 2 * double_layer(unit_disk.curve, f, x)[0]) < 1e-12
