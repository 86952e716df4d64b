import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lobattofem.fields import (
    Jet2,
    PiecewiseQk,
    ScalarField,
    cos,
    eval_jet2,
    exp,
    interpolate_Qk,
    log,
    manufactured_rhs,
    piecewise_eval,
    sin,
    sqrt,
)
from lobattofem.mesh import build_mesh
from lobattofem.problems import ProblemSpec, poisson_coefficient
from lobattofem.quadrature import gauss_legendre_rule
from lobattofem.report import fitted_order

ZERO = ScalarField.zero()
ONE = ScalarField.constant(1.0)


def fd_jet(fn, x, y, step=1e-4):
    """Value, gradient and Hessian of fn by central differences."""
    f = lambda a, b: fn(np.float64(a), np.float64(b))
    gx = (f(x + step, y) - f(x - step, y)) / (2 * step)
    gy = (f(x, y + step) - f(x, y - step)) / (2 * step)
    hxx = (f(x + step, y) - 2 * f(x, y) + f(x - step, y)) / step ** 2
    hyy = (f(x, y + step) - 2 * f(x, y) + f(x, y - step)) / step ** 2
    hxy = (f(x + step, y + step) - f(x + step, y - step)
           - f(x - step, y + step) + f(x - step, y - step)) / (4 * step ** 2)
    return np.array([f(x, y), gx, gy, hxx, hxy, hyy])


def components(j):
    return np.array([j.v, j.gx, j.gy, j.hxx, j.hxy, j.hyy], dtype=float)


def test_jet_power_rule():
    j = eval_jet2(ScalarField(lambda x, y: x ** 3 * y ** 2), 1.0, 1.0)
    np.testing.assert_allclose(components(j), [1, 3, 2, 6, 6, 2])


def test_jet_sine_at_origin():
    j = eval_jet2(ScalarField(lambda x, y: sin(x)), 0.0, 0.4)
    assert (float(j.v), float(j.gx), float(j.hxx)) == (0.0, 1.0, 0.0)


def test_jet_cosine_against_differences():
    fn = lambda x, y: cos(x ** 4 + y ** 3)
    j = eval_jet2(ScalarField(fn), 0.7, 1.1)
    ref = fd_jet(fn, 0.7, 1.1)
    np.testing.assert_allclose(components(j), ref, rtol=1e-6, atol=1e-6)


EXPRESSIONS = [
    lambda x, y: sin(x * y) + x ** 2,
    lambda x, y: exp(0.5 * x - y) * cos(y),
    lambda x, y: (1 + x ** 2) / (2 + y ** 2),
    lambda x, y: log(2 + x * y) * sqrt(1 + x ** 2 + y ** 2),
    lambda x, y: 3.0 ** x - 1.0 / (1.5 + y),
    lambda x, y: (1 + x) ** 2.5 - 2 * y,
]


@settings(max_examples=60, deadline=None)
@given(i=st.integers(0, len(EXPRESSIONS) - 1), j=st.integers(0, len(EXPRESSIONS) - 1),
       x=st.floats(0.1, 0.9), y=st.floats(0.1, 0.9), op=st.sampled_from("+-*"))
def test_jet_linearity_and_leibniz(i, j, x, y, op):
    f, g = EXPRESSIONS[i], EXPRESSIONS[j]
    h = {"+": lambda a, b: f(a, b) + g(a, b),
         "-": lambda a, b: f(a, b) - 2.0 * g(a, b),
         "*": lambda a, b: f(a, b) * g(a, b)}[op]
    jet = components(eval_jet2(ScalarField(h), x, y))
    ref = fd_jet(h, x, y)
    np.testing.assert_allclose(jet, ref, rtol=1e-6, atol=1e-5)


def test_plain_value_equals_jet_value():
    x = np.linspace(0.1, 0.9, 9)
    for fn in EXPRESSIONS:
        field = ScalarField(fn)
        np.testing.assert_array_equal(field(x, x[::-1]), field.jet(x, x[::-1]).v)


def test_jet_arrays_and_numpy_mixing():
    x = np.array([0.1, 0.2])
    j = Jet2.seed_x(x)
    out = np.array([2.0, 3.0]) * j + 1.0
    assert isinstance(out, Jet2)
    np.testing.assert_allclose(out.gx, [2.0, 3.0])


@settings(max_examples=20, deadline=None)
@given(k=st.integers(2, 4), nx=st.integers(1, 3), ny=st.integers(1, 3), seed=st.integers(0, 1000))
def test_interpolation_reproduces_Qk(k, nx, ny, seed):
    rng = np.random.default_rng(seed)
    cx, cy = rng.normal(size=(k + 1,)), rng.normal(size=(k + 1,))
    poly = ScalarField(lambda x, y: sum(cx[i] * x ** i for i in range(k + 1))
                       * sum(cy[j] * y ** j for j in range(k + 1)))
    mesh = build_mesh((0.0, 1.0, 0.0, 2.0), nx, ny, k)
    interp = interpolate_Qk(poly, mesh)
    x, y = rng.uniform(0, 1, 100), rng.uniform(0, 2, 100)
    np.testing.assert_allclose(interp(x, y), poly(x, y), atol=1e-12)


def test_interpolating_constant_and_projection():
    mesh = build_mesh((0.0, 1.0, 0.0, 2.0), 3, 2, 3)
    assert np.all(interpolate_Qk(ScalarField.constant(3.0), mesh).values == 3.0)
    once = interpolate_Qk(poisson_coefficient(), mesh)
    twice = interpolate_Qk(ScalarField(lambda x, y: once(x, y)), mesh)
    np.testing.assert_allclose(twice.values, once.values, atol=1e-14)


def test_piecewise_eval_examples():
    mesh = build_mesh((0.0, 1.0, 0.0, 2.0), 3, 4, 2)
    p = interpolate_Qk(poisson_coefficient(), mesh)
    pts = mesh.points
    np.testing.assert_array_equal(p(pts[:, 0], pts[:, 1]), p.values)

    lin = interpolate_Qk(ScalarField(lambda x, y: x + 0.0 * y), mesh)
    rng = np.random.default_rng(1)
    _, (gx, gy) = piecewise_eval(lin, rng.uniform(0, 1, 50), rng.uniform(0, 2, 50))
    np.testing.assert_allclose(gx, 1.0, atol=1e-12)
    np.testing.assert_allclose(gy, 0.0, atol=1e-12)

    cell = build_mesh((-1.0, 1.0, -1.0, 1.0), 1, 1, 2)
    sq = interpolate_Qk(ScalarField(lambda x, y: x ** 2 + 0.0 * y), cell)
    _, (gx, gy) = piecewise_eval(sq, 0.5, 0.0)
    assert (gx[0], gy[0]) == pytest.approx((1.0, 0.0), abs=1e-14)
    with pytest.raises(ValueError):
        piecewise_eval(sq, 1.5, 0.0)


def test_piecewise_rejects_wrong_size():
    mesh = build_mesh((0.0, 1.0, 0.0, 1.0), 1, 1, 2)
    with pytest.raises(ValueError):
        PiecewiseQk(mesh, np.zeros(4))


def test_interpolation_order_asymptotic():
    """Max off-node error of a_I at Gauss points decays like h^(k+1) once resolved."""
    a = poisson_coefficient()
    for k, sizes in ((2, (16, 32, 64, 128)), (3, (8, 16, 32, 64))):
        g = gauss_legendre_rule(2 * k + 2).nodes
        S, T = np.meshgrid(g, g)
        errors = []
        for n in sizes:
            mesh = build_mesh((0.0, 1.0, 0.0, 2.0), n, 2 * n, k)
            x = (mesh.cell_centers[:, :1] + mesh.hx * S.ravel()).ravel()
            y = (mesh.cell_centers[:, 1:] + mesh.hy * T.ravel()).ravel()
            errors.append(np.max(np.abs(interpolate_Qk(a, mesh)(x, y) - a(x, y))))
        assert abs(fitted_order(1.0 / np.array(sizes), errors) - (k + 1)) <= 0.3


def test_manufactured_rhs_examples():
    u = ScalarField(lambda x, y: x ** 2 + y ** 2)
    p = ProblemSpec(ONE, ZERO, ZERO, ONE, ZERO, u=u)
    x = np.linspace(0, 1, 5)
    np.testing.assert_allclose(p.f(x, x), -4.0)

    a = ScalarField(lambda x, y: 1 + x)
    p = ProblemSpec.scalar(a, u=ScalarField(lambda x, y: x * y))
    assert p.f(1.0, 1.0) == pytest.approx(-1.0)

    u = ScalarField(lambda x, y: sin(x) * exp(y))
    p = ProblemSpec(ZERO, ZERO, ZERO, ZERO, ONE, u=u)
    np.testing.assert_allclose(p.f(x, x[::-1]), u(x, x[::-1]))


def test_manufactured_rhs_full_tensor_by_hand():
    # a = [[1+x, y], [y, 2]], u = x^2 y: flux q = ((1+x) 2xy + y x^2, 2xy^2 + 2x^2)
    # div q = 2y + 4xy + 2xy + 2y^2 + 0... computed symbolically below
    a11 = ScalarField(lambda x, y: 1 + x)
    a12 = ScalarField(lambda x, y: y + 0.0 * x)
    a22 = ScalarField.constant(2.0)
    u = ScalarField(lambda x, y: x ** 2 * y)
    p = ProblemSpec(a11, a12, a12, a22, ZERO, u=u)
    x, y = 0.3, 0.8
    # q1 = (1+x) 2xy + y x^2 -> d/dx = 2y + 4xy + 2xy
    # q2 = y 2xy + 2 x^2     -> d/dy = 4xy
    div = 2 * y + 4 * x * y + 2 * x * y + 4 * x * y
    assert p.f(x, y) == pytest.approx(-div, rel=1e-14)


def test_manufactured_rhs_requires_solution():
    with pytest.raises(ValueError):
        ProblemSpec(ONE, ZERO, ZERO, ONE, ZERO)
    p = ProblemSpec(ONE, ZERO, ZERO, ONE, ZERO, f=ONE)
    with pytest.raises(ValueError):
        manufactured_rhs(p)
