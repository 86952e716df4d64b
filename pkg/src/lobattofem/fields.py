"""Analytic fields with second-order jets, and piecewise Q^k fields on a mesh.

A :class:`ScalarField` wraps a function ``fn(x, y)`` written with ordinary
arithmetic and the elementwise functions of this module (:func:`sin`,
:func:`cos`, :func:`exp`, ...).  Called with arrays it evaluates pointwise;
called with :class:`Jet2` seeds it propagates value, gradient and Hessian.
"""

from dataclasses import dataclass

import numpy as np


class Jet2:
    """Second-order forward-mode dual number in two variables.

    Components may be scalars or arrays of a common shape.
    """

    __slots__ = ("v", "gx", "gy", "hxx", "hxy", "hyy")
    __array_ufunc__ = None

    def __init__(self, v, gx=0.0, gy=0.0, hxx=0.0, hxy=0.0, hyy=0.0):
        self.v = v
        self.gx = gx
        self.gy = gy
        self.hxx = hxx
        self.hxy = hxy
        self.hyy = hyy

    @classmethod
    def seed_x(cls, x):
        x = np.asarray(x, dtype=float)
        zero = np.zeros_like(x)
        return cls(x, np.ones_like(x), zero, zero, zero, zero)

    @classmethod
    def seed_y(cls, y):
        y = np.asarray(y, dtype=float)
        zero = np.zeros_like(y)
        return cls(y, zero, np.ones_like(y), zero, zero, zero)

    def __repr__(self):
        return (f"Jet2(v={self.v}, gx={self.gx}, gy={self.gy}, "
                f"hxx={self.hxx}, hxy={self.hxy}, hyy={self.hyy})")

    @property
    def gradient(self):
        return self.gx, self.gy

    def _chain(self, f0, f1, f2):
        """Compose with a scalar function given its value and first two derivatives."""
        return Jet2(
            f0,
            f1 * self.gx,
            f1 * self.gy,
            f2 * self.gx * self.gx + f1 * self.hxx,
            f2 * self.gx * self.gy + f1 * self.hxy,
            f2 * self.gy * self.gy + f1 * self.hyy,
        )

    def __neg__(self):
        return Jet2(-self.v, -self.gx, -self.gy, -self.hxx, -self.hxy, -self.hyy)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.v + other.v, self.gx + other.gx, self.gy + other.gy,
                        self.hxx + other.hxx, self.hxy + other.hxy, self.hyy + other.hyy)
        return Jet2(self.v + other, self.gx, self.gy, self.hxx, self.hxy, self.hyy)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            return Jet2(
                a.v * b.v,
                a.gx * b.v + a.v * b.gx,
                a.gy * b.v + a.v * b.gy,
                a.hxx * b.v + 2.0 * a.gx * b.gx + a.v * b.hxx,
                a.hxy * b.v + a.gx * b.gy + a.gy * b.gx + a.v * b.hxy,
                a.hyy * b.v + 2.0 * a.gy * b.gy + a.v * b.hyy,
            )
        return Jet2(self.v * other, self.gx * other, self.gy * other,
                    self.hxx * other, self.hxy * other, self.hyy * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.v / other, self.gx / other, self.gy / other,
                        self.hxx / other, self.hxy / other, self.hyy / other)
        a, b = self, other
        # a = q b differentiated twice
        q = a.v / b.v
        qx = (a.gx - q * b.gx) / b.v
        qy = (a.gy - q * b.gy) / b.v
        return Jet2(
            q, qx, qy,
            (a.hxx - 2.0 * qx * b.gx - q * b.hxx) / b.v,
            (a.hxy - qx * b.gy - qy * b.gx - q * b.hxy) / b.v,
            (a.hyy - 2.0 * qy * b.gy - q * b.hyy) / b.v,
        )

    def __rtruediv__(self, other):
        return Jet2(np.zeros_like(self.v) + other) / self

    def __pow__(self, p):
        if isinstance(p, Jet2):
            return exp(p * log(self))
        if p == 0:
            return Jet2(self.v ** 0)
        if p == 1:
            return self
        return self._chain(self.v ** p, p * self.v ** (p - 1),
                           p * (p - 1) * self.v ** (p - 2))

    def __rpow__(self, base):
        # value computed as base ** v so it matches plain evaluation bitwise
        value = np.power(base, self.v)
        lb = np.log(base)
        return self._chain(value, value * lb, value * lb * lb)

    def sin(self):
        s, c = np.sin(self.v), np.cos(self.v)
        return self._chain(s, c, -s)

    def cos(self):
        s, c = np.sin(self.v), np.cos(self.v)
        return self._chain(c, -s, -c)

    def exp(self):
        e = np.exp(self.v)
        return self._chain(e, e, e)

    def log(self):
        return self._chain(np.log(self.v), 1.0 / self.v, -1.0 / (self.v * self.v))

    def sqrt(self):
        r = np.sqrt(self.v)
        return self._chain(r, 0.5 / r, -0.25 / (r * self.v))


def sin(u):
    return u.sin() if isinstance(u, Jet2) else np.sin(u)


def cos(u):
    return u.cos() if isinstance(u, Jet2) else np.cos(u)


def exp(u):
    return u.exp() if isinstance(u, Jet2) else np.exp(u)


def log(u):
    return u.log() if isinstance(u, Jet2) else np.log(u)


def sqrt(u):
    return u.sqrt() if isinstance(u, Jet2) else np.sqrt(u)


class ScalarField:
    """An analytic function of (x, y).

    ``fn`` must be written with arithmetic and this module's elementwise
    functions so that it accepts both float arrays and :class:`Jet2` seeds.
    ``jet_fn`` overrides the jet path for fields that only support values.
    """

    def __init__(self, fn, name=None, *, is_zero=False, jet_fn=None):
        self.fn = fn
        self.name = name or getattr(fn, "__name__", "field")
        self.is_zero = is_zero
        self._jet_fn = jet_fn

    def __repr__(self):
        return f"ScalarField({self.name!r})"

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        shape = np.broadcast_shapes(x.shape, y.shape)
        return np.broadcast_to(self.fn(x, y), shape)

    def jet(self, x, y):
        if self._jet_fn is not None:
            return self._jet_fn(x, y)
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = self.fn(Jet2.seed_x(x), Jet2.seed_y(y))
        if not isinstance(out, Jet2):
            out = Jet2(out)
        zero = np.zeros(x.shape)
        return Jet2(*(np.broadcast_to(np.asarray(c, dtype=float), x.shape) + zero
                      for c in (out.v, out.gx, out.gy, out.hxx, out.hxy, out.hyy)))

    @classmethod
    def constant(cls, value, name=None):
        value = float(value)
        return cls(lambda x, y: value + 0.0 * x, name or repr(value),
                   is_zero=(value == 0.0))

    @classmethod
    def zero(cls):
        return cls.constant(0.0, "0")


def eval_jet2(field, x, y):
    return field.jet(x, y)


@dataclass(frozen=True, eq=False)
class PiecewiseQk:
    """Continuous piecewise Q^k function stored by its values on the Lobatto grid."""

    mesh: object
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.mesh.n_points,):
            raise ValueError("one value per grid point required")

    def cell_values(self):
        """(n_cells, (k+1)^2) nodal values per cell."""
        return self.values[self.mesh.cell_dof_table]

    def __call__(self, x, y):
        return piecewise_eval(self, x, y)[0]


def interpolate_Qk(field, mesh):
    pts = mesh.points
    return PiecewiseQk(mesh, np.array(field(pts[:, 0], pts[:, 1]), dtype=float))


def _reference_coordinate(x, s, cell_index, coords, mesh):
    """Replace s by the exact reference node wherever x is a grid coordinate."""
    k = mesh.k
    candidates = cell_index[:, None] * k + np.arange(k + 1)
    hit = coords[candidates] == x[:, None]
    rows = np.flatnonzero(hit.any(axis=1))
    s = s.copy()
    s[rows] = mesh.reference_nodes[np.argmax(hit[rows], axis=1)]
    return s


def piecewise_eval(p, x, y):
    """Value and gradient of a piecewise Q^k field at points (x, y)."""
    mesh = p.mesh
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    x, y = np.broadcast_arrays(x, y)
    shape = x.shape
    x, y = x.ravel(), y.ravel()
    cells = mesh.locate(x, y)
    centers = mesh.cell_centers[cells]
    s = _reference_coordinate(x, (x - centers[:, 0]) / mesh.hx, cells % mesh.nx, mesh.x, mesh)
    t = _reference_coordinate(y, (y - centers[:, 1]) / mesh.hy, cells // mesh.nx, mesh.y, mesh)
    Ls, dLs = mesh.basis.tabulate(s)
    Lt, dLt = mesh.basis.tabulate(t)
    n = mesh.k + 1
    coeffs = p.values[mesh.cell_dof_table[cells]].reshape(-1, n, n)  # [cell, b(t), a(s)]
    value = np.einsum("pba,pa,pb->p", coeffs, Ls, Lt)
    gx = np.einsum("pba,pa,pb->p", coeffs, dLs, Lt) / mesh.hx
    gy = np.einsum("pba,pa,pb->p", coeffs, Ls, dLt) / mesh.hy
    return value.reshape(shape), (gx.reshape(shape), gy.reshape(shape))


def manufactured_rhs(problem):
    """Right-hand side of -div(a grad u) + b . grad u + c u for the problem's exact u."""
    u = problem.u
    if u is None:
        raise ValueError("manufactured right-hand side needs an exact solution")

    def rhs(x, y):
        uj = u.jet(x, y)
        a11, a12 = problem.a11.jet(x, y), problem.a12.jet(x, y)
        a21, a22 = problem.a21.jet(x, y), problem.a22.jet(x, y)
        # div of the flux q = a grad u, product rule written out
        div_q = (a11.gx * uj.gx + a11.v * uj.hxx
                 + a12.gx * uj.gy + a12.v * uj.hxy
                 + a21.gy * uj.gx + a21.v * uj.hxy
                 + a22.gy * uj.gy + a22.v * uj.hyy)
        out = -div_q + problem.c(x, y) * uj.v
        out = out + problem.b1(x, y) * uj.gx + problem.b2(x, y) * uj.gy
        return out

    def no_jet(x, y):
        raise NotImplementedError("manufactured right-hand sides carry values only")

    return ScalarField(rhs, f"f[{u.name}]", jet_fn=no_jet)
