import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import null_space

from gptasym.errors import (
    DegenerateContrastError,
    DiscardedMeanWarning,
    IncompatibleDataError,
    InvalidArgumentError,
    InvertibilityError,
)
from gptasym.geometry import ShapeSpec, discretize
from gptasym.layer_potentials import kstar_matrix
from gptasym.multiindex import gpt_pairs, mfact, of_degree
from gptasym.transmission import (
    Conductivity,
    GptTable,
    NPOSolver,
    gpt_table,
    phi_i,
    polarization_tensor,
    resolvent_parameter,
    solve_npo,
)

SHAPES = {
    "disk": ShapeSpec("disk"),
    "ellipse": ShapeSpec("ellipse", a=2.0, b=1.0),
    "kite": ShapeSpec("kite"),
}


@pytest.fixture(scope="module")
def curves():
    return {name: discretize(s, 128) for name, s in SHAPES.items()}


def test_lambda_conventions():
    assert resolvent_parameter(0.0) == -0.5
    assert resolvent_parameter(math.inf) == 0.5
    assert resolvent_parameter(2.0) == 1.5
    with pytest.raises(DegenerateContrastError):
        resolvent_parameter(1.0)
    with pytest.raises(InvalidArgumentError):
        resolvent_parameter(-1.0)
    assert Conductivity(math.inf).extreme and not Conductivity(3.0).extreme


@given(st.floats(0.0, 1e6).filter(lambda k: abs(k - 1) > 1e-9))
def test_lambda_never_inside_half(k):
    assert abs(resolvent_parameter(k)) >= 0.5 - 1e-15


@given(st.floats(1.0001, 1e4), st.floats(1.0001, 1e4))
def test_lambda_monotone_above_one(k1, k2):
    if k1 < k2:
        assert resolvent_parameter(k1) >= resolvent_parameter(k2)


@pytest.mark.parametrize("lam", [-0.5, -2.0, 0.5, 1.5, 7.0])
def test_disk_normal_density(lam):
    c = discretize(ShapeSpec("disk"), 128)
    phi = solve_npo(c, lam, c.normals[:, 0])
    assert np.allclose(phi.values, c.normals[:, 0] / lam, atol=1e-12)
    assert np.allclose(phi_i(c, lam, (1, 0)).values, c.normals[:, 0] / lam, atol=1e-12)


def test_zero_rhs(curves):
    assert np.all(solve_npo(curves["kite"], 1.2, np.zeros(128)).values == 0.0)


def test_invertibility_errors(curves):
    c = curves["kite"]
    with pytest.raises(InvertibilityError):
        solve_npo(c, 0.3, np.ones(c.size))
    with pytest.raises(IncompatibleDataError):
        solve_npo(c, 0.5, np.ones(c.size))
    with pytest.raises(InvalidArgumentError):
        solve_npo(c, 1.5, np.ones(5))
    with pytest.raises(InvalidArgumentError):
        phi_i(c, 1.5, (0, 0))


@pytest.mark.parametrize("name", list(SHAPES))
@pytest.mark.parametrize("lam", [0.5, -0.5, 0.9, -3.0])
def test_resolvent_residual_and_mean_preservation(curves, name, lam):
    c = curves[name]
    rng = np.random.default_rng(7)
    solver = NPOSolver(c, lam)
    op = lam * np.eye(c.size) - kstar_matrix(c).matrix
    for _ in range(50):
        f = rng.standard_normal(c.size)
        f -= c.mean(f)
        phi = solver.solve(f).values
        assert np.linalg.norm(op @ phi - f) < 1e-10 * np.linalg.norm(f)
        assert abs(c.integrate(phi)) < 1e-10


@pytest.mark.parametrize("name", list(SHAPES))
@pytest.mark.parametrize("k", [5.0, 0.2])
def test_harmonic_sum_identity(curves, name, k):
    c = curves[name]
    table = gpt_table(c, resolvent_parameter(k), 4, k=k)
    for level in range(1, 5):
        idx = of_degree(level)
        # rows of L map coefficients a_i to the monomial coefficients of sum a_i Lap(y^i)/i!
        lap = np.zeros((max(level - 1, 1), len(idx)))
        for col, (i1, i2) in enumerate(idx):
            for (p1, p2), coef in (((i1 - 2, i2), i1 * (i1 - 1)), ((i1, i2 - 2), i2 * (i2 - 1))):
                if p1 >= 0 and p2 >= 0 and coef:
                    lap[p2, col] += coef / mfact((i1, i2))
        ns = null_space(lap)
        zeros = np.array([table.zeroth[i] for i in idx])
        assert np.abs(ns.T @ zeros).max() < 1e-8
        if level == 1:
            assert np.abs(zeros).max() < 1e-10


def test_extreme_gpt_flags_discarded_means(curves):
    with pytest.warns(DiscardedMeanWarning):
        t = gpt_table(curves["kite"], 0.5, 2)
    assert (2, 0) in t.discarded_means and (1, 0) not in t.discarded_means


@pytest.mark.parametrize("k", [0.0, 0.1, 2.0, 10.0, math.inf])
def test_disk_closed_form(k):
    c = discretize(ShapeSpec("disk"), 128)
    lam = resolvent_parameter(k)
    assert np.allclose(polarization_tensor(c, lam), np.pi / lam * np.eye(2), atol=1e-10)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DiscardedMeanWarning)
        assert np.allclose(gpt_table(c, lam, 1, k=k).first_order(), np.pi / lam * np.eye(2), atol=1e-10)


def test_disk_k2_value():
    m = polarization_tensor(discretize(ShapeSpec("disk"), 512), 1.5)
    assert abs(m[0, 0] - 2.0944) < 1e-4 and abs(m[1, 1] - 2.0944) < 1e-4 and abs(m[0, 1]) < 1e-13


def test_disk_scaling_law():
    m1 = polarization_tensor(discretize(ShapeSpec("disk"), 128), 1.5)
    m3 = polarization_tensor(discretize(ShapeSpec("disk", radius=0.3), 128), 1.5)
    assert np.allclose(m3, 0.09 * m1, atol=1e-10)


def test_ellipse_self_convergence():
    s = SHAPES["ellipse"]
    lo = polarization_tensor(discretize(s, 256), 1.5)
    hi = polarization_tensor(discretize(s, 1024), 1.5)
    assert np.abs(lo - hi).max() < 1e-8
    assert abs(lo[0, 0] - lo[1, 1]) > 0.1 and abs(lo[0, 1]) < 1e-12


@pytest.mark.parametrize("name", ["disk", "ellipse"])
def test_parity(curves, name):
    t = gpt_table(curves[name], 1.5, 3)
    for (i, j), v in t.entries.items():
        if (sum(i) + sum(j)) % 2:
            assert abs(v) < 1e-12


@pytest.mark.parametrize("name", list(SHAPES))
def test_first_order_symmetric(curves, name):
    m = gpt_table(curves[name], 0.8, 1).first_order()
    assert abs(m[0, 1] - m[1, 0]) < 1e-10


def test_first_order_block_matches_polarization_tensor(curves):
    c = curves["kite"]
    assert np.allclose(gpt_table(c, 0.75, 2).first_order(), polarization_tensor(c, 0.75), atol=1e-13)


def test_kite_self_convergence():
    lam = resolvent_parameter(5.0)
    lo = gpt_table(discretize(SHAPES["kite"], 256), lam, 2)
    hi = gpt_table(discretize(SHAPES["kite"], 512), lam, 2)
    scale = max(abs(v) for v in hi.entries.values())
    for key, v in hi.entries.items():
        assert abs(lo[key] - v) < 1e-6 * scale


def test_rotation_covariance():
    th = 0.6
    lam = 1.25
    m0 = polarization_tensor(discretize(ShapeSpec("kite"), 256), lam)
    m1 = polarization_tensor(discretize(ShapeSpec("kite", rotation=th), 256), lam)
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    assert np.allclose(m1, rot @ m0 @ rot.T, atol=1e-10)


def test_table_layout(curves):
    t = gpt_table(curves["kite"], 1.5, 3)
    assert list(t.entries) == list(gpt_pairs(3))
    with pytest.raises(InvalidArgumentError):
        gpt_table(curves["kite"], 1.5, 0)
    with pytest.raises(InvalidArgumentError):
        gpt_table(curves["kite"], 1.5, 9)


def test_serialization_round_trip(curves):
    t = gpt_table(curves["ellipse"], 1.5, 2, k=2.0)
    back = GptTable.from_json(t.to_json())
    assert back.entries == t.entries and back.k == 2.0 and back.order == 2
    rows = t.to_csv().strip().splitlines()
    assert rows[0].startswith("# schema_version") and len(rows) == 2 + len(t.entries)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DiscardedMeanWarning)
        inf = gpt_table(curves["disk"], 0.5, 1)
    assert '"k": "inf"' in inf.to_json() and math.isinf(GptTable.from_json(inf.to_json()).k)
    assert all(v == 0.0 for v in t.zeroed().entries.values())
