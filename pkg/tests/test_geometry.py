import numpy as np
import pytest

from gptasym.errors import InvalidArgumentError
from gptasym.geometry import ShapeSpec, area, diameter, discretize, moments, perimeter


def test_unit_circle_weights_sum_to_circumference():
    c = discretize(ShapeSpec("disk"), 64)
    assert abs(c.weights.sum() - 2 * np.pi) < 1e-12


def test_unit_circle_curvature_is_one():
    c = discretize(ShapeSpec("disk"), 64)
    assert np.allclose(c.curvature, 1.0, atol=1e-14)


def test_ellipse_area():
    assert abs(area(discretize(ShapeSpec("ellipse", a=2.0, b=1.0), 128)) - 2 * np.pi) < 1e-10


def test_disk_moments():
    c = discretize(ShapeSpec("disk"), 64)
    assert np.allclose(moments(c, (1, 0)), [np.pi, 0.0], atol=1e-13)
    assert np.allclose(moments(c, (0, 0)), [0.0, 0.0], atol=1e-13)


def test_ellipse_second_moment():
    c = discretize(ShapeSpec("ellipse", a=2.0, b=1.0), 128)
    assert abs(moments(c, (0, 1))[1] - 2 * np.pi) < 1e-10


@pytest.mark.parametrize("shape", [ShapeSpec("disk", radius=0.7), ShapeSpec("ellipse", a=1.5, b=0.6), ShapeSpec("kite")])
def test_curve_invariants(shape):
    c = discretize(shape, 128)
    assert np.allclose(np.hypot(*c.normals.T), 1.0, atol=1e-14)
    assert np.abs(np.einsum("ij,ij->i", c.normals, c.tangent)).max() < 1e-12
    assert np.abs(c.weights @ c.normals).max() < 1e-12
    assert area(c) > 0


def test_kite_curvature_matches_finite_differences():
    shape = ShapeSpec("kite")
    c = discretize(shape, 64)
    h = 1e-5
    gp, _, _ = shape.evaluate(c.t + h)
    gm, _, _ = shape.evaluate(c.t - h)
    d1 = (gp - gm) / (2 * h)
    assert np.allclose(d1, c.tangent, atol=1e-8)


def test_perimeter_converges_spectrally():
    exact = perimeter(discretize(ShapeSpec("ellipse", a=2.0, b=1.0), 1024))
    e32 = abs(perimeter(discretize(ShapeSpec("ellipse", a=2.0, b=1.0), 32)) - exact)
    e64 = abs(perimeter(discretize(ShapeSpec("ellipse", a=2.0, b=1.0), 64)) - exact)
    assert e64 < 1e-12 and e32 / max(e64, 1e-16) > 100


def test_area_and_moments_invariant_under_phase():
    a = discretize(ShapeSpec("kite"), 128)
    b = discretize(ShapeSpec("kite", phase=0.37), 128)
    assert abs(area(a) - area(b)) < 1e-12
    assert np.allclose(moments(a, (2, 1)), moments(b, (2, 1)), atol=1e-12)


def test_rotation_and_scale():
    c = discretize(ShapeSpec("kite", rotation=0.4, scale=0.5, center=(0.1, -0.2)), 128)
    ref = discretize(ShapeSpec("kite"), 128)
    assert abs(area(c) - 0.25 * area(ref)) < 1e-12
    assert abs(diameter(c) - 0.5 * diameter(ref)) < 1e-12


@pytest.mark.parametrize("M", [15, 17, 8, 0])
def test_bad_node_counts(M):
    with pytest.raises(InvalidArgumentError):
        discretize(ShapeSpec("disk"), M)


@pytest.mark.parametrize(
    "kw", [dict(kind="disk", radius=0.0), dict(kind="ellipse", a=0.0), dict(kind="ellipse", b=-1.0), dict(kind="star")]
)
def test_degenerate_shapes(kw):
    with pytest.raises(InvalidArgumentError):
        ShapeSpec(**kw)


def test_shape_dict_round_trip():
    s = ShapeSpec("ellipse", a=2.0, b=0.5, center=(0.1, 0.2), rotation=0.3, scale=0.5)
    assert ShapeSpec.from_dict(s.to_dict()) == s


def test_custom_parametrization():
    def param(t):
        c, s = np.cos(t), np.sin(t)
        return np.stack([c, s], -1), np.stack([-s, c], -1), np.stack([-c, -s], -1)

    c = discretize(ShapeSpec("custom", param=param), 64)
    assert np.allclose(c.curvature, 1.0)


def test_scaled_curve():
    c = discretize(ShapeSpec("disk"), 64).scaled(0.1, (0.3, 0.2))
    assert abs(c.weights.sum() - 0.2 * np.pi) < 1e-13
    assert np.allclose(c.curvature, 10.0)
    assert np.allclose(c.nodes.mean(0), [0.3, 0.2])
