import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lobattofem.fields import ScalarField, cos, interpolate_Qk, sin
from lobattofem.mesh import CellGeometry, build_mesh
from lobattofem.polynomials import legendre_value, mtype_value
from lobattofem.problems import U_EXACT
from lobattofem.projection import mtype_coeffs, mtype_project
from lobattofem.quadrature import gauss_legendre_rule

CELL = CellGeometry((0.3, 0.7), (0.1, 0.2))
SMOOTH = ScalarField(lambda x, y: sin(2 * x + y) * cos(x * y) + x ** 5 * y)


def mtype_generic(j, t):
    """M_j written with plain arithmetic so that it also accepts jets."""
    if j == 0:
        return 1.0 + 0.0 * t
    if j == 1:
        return t
    prev, cur = 1.0 + 0.0 * t, t
    legendre = [prev, cur]
    for m in range(1, j):
        prev, cur = cur, ((2 * m + 1) * t * cur - m * prev) / (m + 1)
        legendre.append(cur)
    return (legendre[j] - legendre[j - 2]) / (2 * j - 1)


def test_generic_mtype_matches_library():
    t = np.linspace(-1, 1, 9)
    for j in range(6):
        np.testing.assert_allclose(mtype_generic(j, t), mtype_value(j, t), atol=1e-15)


def unit(i, j, k):
    b = np.zeros((k + 1, k + 1))
    b[i, j] = 1.0
    return b


def test_constant_field():
    np.testing.assert_allclose(mtype_coeffs(ScalarField.constant(1.0), CELL, 2).b, unit(0, 0, 2), atol=1e-14)


def test_linear_in_s():
    field = ScalarField(lambda x, y: (x - 0.3) / 0.1 + 0.0 * y)
    np.testing.assert_allclose(mtype_coeffs(field, CELL, 2).b, unit(1, 0, 2), atol=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("i,j", [(2, 2), (0, 2), (2, 1), (1, 1)])
def test_single_mtype_term(k, i, j):
    field = ScalarField(lambda x, y: mtype_generic(i, (x - 0.3) / 0.1) * mtype_generic(j, (y - 0.7) / 0.2))
    np.testing.assert_allclose(mtype_coeffs(field, CELL, k).b, unit(i, j, k), atol=1e-11)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_corner_values(k):
    coeffs = mtype_coeffs(SMOOTH, CELL, k)
    for s in (-1.0, 1.0):
        for t in (-1.0, 1.0):
            x, y = CELL.to_physical(s, t)
            assert coeffs(s, t) == pytest.approx(float(SMOOTH(x, y)), abs=1e-11)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_edge_orthogonality(k):
    """On every edge, u_p - u is orthogonal to polynomials of degree k-2."""
    coeffs = mtype_coeffs(SMOOTH, CELL, k)
    rule = gauss_legendre_rule(20)
    q = rule.nodes
    for fixed in (-1.0, 1.0):
        for vertical in (True, False):
            s, t = (np.full_like(q, fixed), q) if vertical else (q, np.full_like(q, fixed))
            diff = coeffs(s, t) - SMOOTH(*CELL.to_physical(s, t))
            for d in range(k - 1):
                assert abs(np.sum(rule.weights * diff * legendre_value(d, q)[0])) < 1e-10


@pytest.mark.parametrize("k", [2, 3, 4])
def test_interior_orthogonality(k):
    coeffs = mtype_coeffs(SMOOTH, CELL, k)
    rule = gauss_legendre_rule(20)
    S, T = np.meshgrid(rule.nodes, rule.nodes)
    W = np.outer(rule.weights, rule.weights)
    diff = coeffs(S, T) - SMOOTH(*CELL.to_physical(S, T))
    area = 4 * CELL.half_widths[0] * CELL.half_widths[1]
    for i in range(k - 1):
        for j in range(k - 1):
            q = legendre_value(i, S)[0] * legendre_value(j, T)[0]
            integral = np.sum(W * diff * q) * area / 4
            assert abs(integral) < 1e-10 * area


def test_projection_reproduces_Qk():
    mesh = build_mesh((0.0, 1.0, 0.0, 2.0), 4, 8, 2)
    field = ScalarField(lambda x, y: x * x * y * y)
    np.testing.assert_allclose(mtype_project(field, mesh).values,
                               interpolate_Qk(field, mesh).values, atol=1e-11)


@settings(max_examples=15, deadline=None)
@given(k=st.integers(2, 4), nx=st.integers(1, 4), ny=st.integers(1, 4))
def test_projection_matches_corners(k, nx, ny):
    mesh = build_mesh((0.0, 1.0, 0.0, 2.0), nx, ny, k)
    proj = mtype_project(U_EXACT, mesh)
    nyp, nxp = mesh.grid_shape
    corners = np.arange(mesh.n_points).reshape(nyp, nxp)[::k, ::k].ravel()
    pts = mesh.points[corners]
    np.testing.assert_allclose(proj.values[corners], U_EXACT(pts[:, 0], pts[:, 1]), atol=1e-12)


def test_projection_degree_must_match_mesh():
    with pytest.raises(ValueError):
        mtype_project(U_EXACT, build_mesh((0.0, 1.0, 0.0, 2.0), 2, 2, 2), k=3)
