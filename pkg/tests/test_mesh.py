import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lobattofem.mesh import BoundaryTag, build_mesh, classify_boundary
from lobattofem.quadrature import gauss_lobatto_rule

DOMAIN = (0.0, 1.0, 0.0, 2.0)


def test_point_count_and_half_widths():
    mesh = build_mesh(DOMAIN, 2, 4, 2)
    assert mesh.n_points == 45
    assert (mesh.hx, mesh.hy) == (0.25, 0.25)
    assert mesh.n_cells == 8


def test_single_cell():
    mesh = build_mesh((-1, 1, -1, 1), 1, 1, 2)
    assert mesh.n_points == 9
    assert len(mesh.boundary_dofs) == 8
    assert list(mesh.interior_dofs) == [4]
    assert list(mesh.cell_dofs(0)) == list(range(9))
    tags = classify_boundary(mesh)
    assert tags[4] == BoundaryTag.INTERIOR
    assert tags[0] == BoundaryTag.LEFT | BoundaryTag.BOTTOM
    assert tags[3] == BoundaryTag.LEFT


def test_two_cells_share_middle_column():
    mesh = build_mesh((0, 2, 0, 1), 2, 1, 2)
    shared = set(mesh.cell_dofs(0)) & set(mesh.cell_dofs(1))
    assert len(shared) == 3
    assert np.all(mesh.points[sorted(shared), 0] == 1.0)


@pytest.mark.parametrize("k", [0, 1])
def test_rejects_low_degree(k):
    with pytest.raises(ValueError):
        build_mesh(DOMAIN, 2, 2, k)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        build_mesh(DOMAIN, 0, 2, 2)
    with pytest.raises(ValueError):
        build_mesh((1, 1, 0, 2), 2, 2, 2)


@settings(max_examples=25, deadline=None)
@given(nx=st.integers(1, 5), ny=st.integers(1, 5), k=st.integers(2, 5))
def test_numbering_invariants(nx, ny, k):
    mesh = build_mesh(DOMAIN, nx, ny, k)
    assert mesh.n_points == (k * nx + 1) * (k * ny + 1)
    table = mesh.cell_dof_table
    assert table.shape == (nx * ny, (k + 1) ** 2)
    assert len(np.unique(table)) == mesh.n_points
    assert len(mesh.interior_dofs) == (k * nx - 1) * (k * ny - 1)
    # lexicographic, x fastest
    pts = mesh.points
    nyp, nxp = mesh.grid_shape
    grid = pts.reshape(nyp, nxp, 2)
    assert np.all(np.diff(grid[:, :, 0], axis=1) > 0)
    assert np.all(np.diff(grid[:, :, 1], axis=0) > 0)


@settings(max_examples=25, deadline=None)
@given(nx=st.integers(1, 4), ny=st.integers(1, 4), k=st.integers(2, 4))
def test_points_are_the_lobatto_set(nx, ny, k):
    """Every cell's local nodes land bitwise on the global grid, and vice versa."""
    mesh = build_mesh((0.0, 0.7, -0.3, 1.9), nx, ny, k)
    ref = gauss_lobatto_rule(k + 1).nodes
    S, T = np.meshgrid(ref, ref, indexing="xy")
    seen = set()
    for c in range(mesh.n_cells):
        cell = mesh.cell(c)
        x, y = cell.to_physical(S.ravel(), T.ravel())
        mine = mesh.points[mesh.cell_dofs(c)]
        np.testing.assert_allclose(mine[:, 0], x, rtol=0, atol=1e-15)
        np.testing.assert_allclose(mine[:, 1], y, rtol=0, atol=1e-15)
        seen.update(map(tuple, mine))
    assert len(seen) == mesh.n_points


@settings(max_examples=20, deadline=None)
@given(nx=st.integers(1, 5), ny=st.integers(1, 5), k=st.integers(2, 4))
def test_boundary_tags_match_coordinates(nx, ny, k):
    mesh = build_mesh(DOMAIN, nx, ny, k)
    x, y = mesh.points.T
    on_boundary = (x == DOMAIN[0]) | (x == DOMAIN[1]) | (y == DOMAIN[2]) | (y == DOMAIN[3])
    np.testing.assert_array_equal(mesh.boundary_tags != 0, on_boundary)
    tags = mesh.boundary_tags
    assert np.all(((tags & BoundaryTag.LEFT) != 0) == (x == DOMAIN[0]))
    assert np.all(((tags & BoundaryTag.TOP) != 0) == (y == DOMAIN[3]))


def test_cell_geometry_round_trip():
    mesh = build_mesh(DOMAIN, 3, 5, 2)
    cell = mesh.cell(7)
    s, t = cell.to_reference(*cell.to_physical(np.array([-1.0, 0.2, 1.0]), np.array([1.0, -0.4, -1.0])))
    np.testing.assert_allclose(s, [-1.0, 0.2, 1.0], atol=1e-14)
    np.testing.assert_allclose(t, [1.0, -0.4, -1.0], atol=1e-14)


def test_fd_spacing():
    mesh = build_mesh(DOMAIN, 4, 8, 3)
    assert mesh.fd_spacing == pytest.approx((1 / 12, 2 / 24))


def test_locate_ties_and_domain():
    mesh = build_mesh(DOMAIN, 2, 2, 2)
    # x = 0.5 is a shared edge: the left (lower-index) cell owns it
    assert mesh.locate(np.array([0.5]), np.array([0.2]))[0] == 0
    assert mesh.locate(np.array([1.0]), np.array([2.0]))[0] == 3
    with pytest.raises(ValueError):
        mesh.locate(np.array([1.1]), np.array([0.0]))
