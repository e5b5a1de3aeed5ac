"""Pointwise checks of the differential identities behind the radial decomposition.

Every test field carries exact Cartesian value, gradient, Hessian and
Laplacian.  Spherical derivatives are obtained from these by the chain rule,
so no finite differencing enters the residuals.  Vectors are returned in
Cartesian components.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .errors import DomainError, InvalidArgumentError

HBAR = 1.0
POLE_EXCLUSION = 1e-3

Vec = np.ndarray


@dataclass(frozen=True)
class TestField:
    """Scalar field with closed-form Cartesian derivatives."""

    __test__ = False  # not a pytest class

    name: str
    value: Callable[[Vec], complex]
    cart_gradient: Callable[[Vec], Vec]
    cart_hessian: Callable[[Vec], np.ndarray]
    cart_laplacian: Callable[[Vec], complex]

    def consistency_error(self, x: Vec, h: float = 1e-5) -> float:
        """Largest mismatch between supplied derivatives and central differences."""
        x = np.asarray(x, dtype=float)
        eye = np.eye(3)
        fd_grad = np.array([(self.value(x + h * e) - self.value(x - h * e)) / (2 * h) for e in eye])
        fd_hess = np.array([(self.cart_gradient(x + h * e) - self.cart_gradient(x - h * e)) / (2 * h)
                            for e in eye])
        hess = self.cart_hessian(x)
        return float(max(
            np.abs(fd_grad - self.cart_gradient(x)).max(),
            np.abs(fd_hess - hess).max(),
            abs(np.trace(hess) - self.cart_laplacian(x)),
        ))


@dataclass(frozen=True)
class SpherePoint:
    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.r <= 0:
            raise DomainError(f"r must be positive, got {self.r}")
        if not POLE_EXCLUSION < self.theta < np.pi - POLE_EXCLUSION:
            raise DomainError(f"theta={self.theta} is within {POLE_EXCLUSION} of a pole")

    @cached_property
    def cartesian(self) -> Vec:
        st = np.sin(self.theta)
        return self.r * np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @cached_property
    def e_r(self) -> Vec:
        st, ct = np.sin(self.theta), np.cos(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), ct])

    @cached_property
    def e_theta(self) -> Vec:
        st, ct = np.sin(self.theta), np.cos(self.theta)
        return np.array([ct * np.cos(self.phi), ct * np.sin(self.phi), -st])

    @cached_property
    def e_phi(self) -> Vec:
        return np.array([-np.sin(self.phi), np.cos(self.phi), 0.0])


@dataclass(frozen=True)
class SphericalDerivatives:
    """f and its partial derivatives in (r, theta, phi) at one point."""

    f: complex
    dr: complex
    dtheta: complex
    dphi: complex
    drr: complex
    dthetatheta: complex
    dphiphi: complex


@lru_cache(maxsize=8192)
def spherical_derivatives(f: TestField, p: SpherePoint) -> SphericalDerivatives:
    x = p.cartesian
    g = f.cart_gradient(x)
    h = f.cart_hessian(x)
    st = np.sin(p.theta)
    # tangent vectors dx/dr, dx/dtheta, dx/dphi and the second derivatives along them
    t_r = p.e_r
    t_th = p.r * p.e_theta
    t_ph = p.r * st * p.e_phi
    d2_th = -p.r * p.e_r
    d2_ph = -p.r * st * np.array([np.cos(p.phi), np.sin(p.phi), 0.0])
    return SphericalDerivatives(
        f=f.value(x),
        dr=t_r @ g,
        dtheta=t_th @ g,
        dphi=t_ph @ g,
        drr=t_r @ h @ t_r,
        dthetatheta=t_th @ h @ t_th + d2_th @ g,
        dphiphi=t_ph @ h @ t_ph + d2_ph @ g,
    )


def spherical_gradient(f: TestField, p: SpherePoint) -> Vec:
    """e_r d_r f + e_theta (1/r) d_theta f + e_phi (1/(r sin theta)) d_phi f."""
    d = spherical_derivatives(f, p)
    return (p.e_r * d.dr + p.e_theta * d.dtheta / p.r
            + p.e_phi * d.dphi / (p.r * np.sin(p.theta)))


def transverse_gradient(f: TestField, p: SpherePoint, d: SphericalDerivatives | None = None) -> Vec:
    """Angular gradient minus the curvature term e_r f / r."""
    d = d or spherical_derivatives(f, p)
    return (p.e_theta * d.dtheta / p.r + p.e_phi * d.dphi / (p.r * np.sin(p.theta))
            - p.e_r * d.f / p.r)


def transverse_divergence_of_radial(f: TestField, p: SpherePoint) -> complex:
    """nabla_tran . (e_r f), letting the derivatives act on e_r as well.

    d_theta e_r = e_theta and d_phi e_r = sin(theta) e_phi.
    """
    d = spherical_derivatives(f, p)
    st = np.sin(p.theta)
    d_theta_vec = p.e_theta * d.f + p.e_r * d.dtheta
    d_phi_vec = st * p.e_phi * d.f + p.e_r * d.dphi
    return (p.e_theta @ d_theta_vec / p.r + p.e_phi @ d_phi_vec / (p.r * st)
            - p.e_r @ (p.e_r * d.f) / p.r)


def radial_momentum(f: TestField, p: SpherePoint, hbar: float = HBAR) -> complex:
    """P_r f = -i hbar (d_r + 1/r) f."""
    d = spherical_derivatives(f, p)
    return -1j * hbar * (d.dr + d.f / p.r)


def geometric_momentum(f: TestField, p: SpherePoint, hbar: float = HBAR) -> Vec:
    """(Pi_x, Pi_y, Pi_z) f from their explicit differential forms."""
    d = spherical_derivatives(f, p)
    st, ct = np.sin(p.theta), np.cos(p.theta)
    sp, cp = np.sin(p.phi), np.cos(p.phi)
    c = -1j * hbar / p.r
    return np.array([
        c * (ct * cp * d.dtheta - sp / st * d.dphi - st * cp * d.f),
        c * (ct * sp * d.dtheta + cp / st * d.dphi - st * sp * d.f),
        -c * (st * d.dtheta + ct * d.f),
    ])


def decomposition_residual(f: TestField, p: SpherePoint) -> float:
    """|grad_sp f - [e_r (d_r + 1/r) f + grad_tran f]|."""
    d = spherical_derivatives(f, p)
    lhs = spherical_gradient(f, p)
    rhs = p.e_r * (d.dr + d.f / p.r) + transverse_gradient(f, p, d)
    return float(np.linalg.norm(lhs - rhs))


def p_theta_shift(variant: str, theta: float) -> float:
    if variant == "cot_half":
        return np.cos(theta) / np.sin(theta) / 2
    if variant == "tan":
        return np.sin(theta) / np.cos(theta)
    raise InvalidArgumentError(f"unknown P_theta variant {variant!r}; use 'cot_half' or 'tan'")


def symmetrized_terms(f: TestField, p: SpherePoint, p_theta_variant: str = "cot_half",
                      hbar: float = HBAR) -> tuple[Vec, Vec, Vec]:
    """The three symmetrized products {e_r, P_r} f, {e_theta, P_theta} f, {e_phi, P_phi} f.

    {A, B} = (AB + BA) / 2; in BA the momentum also differentiates the unit
    vector: d_theta e_theta = -e_r, d_phi e_phi = -(sin(theta) e_r + cos(theta) e_theta).
    """
    d = spherical_derivatives(f, p)
    st, ct = np.sin(p.theta), np.cos(p.theta)
    c = p_theta_shift(p_theta_variant, p.theta)
    ih = -1j * hbar

    er_pr = p.e_r * ih * (d.dr + d.f / p.r)  # d_r e_r = 0

    ab = p.e_theta * ih * (d.dtheta + c * d.f)
    ba = ih * (-p.e_r * d.f + p.e_theta * d.dtheta + c * p.e_theta * d.f)
    eth_pth = (ab + ba) / 2

    ab = p.e_phi * ih * d.dphi
    ba = ih * (-(st * p.e_r + ct * p.e_theta) * d.f + p.e_phi * d.dphi)
    eph_pph = (ab + ba) / 2
    return er_pr, eth_pth, eph_pph


def symmetrized_decomposition_residual(f: TestField, p: SpherePoint, p_theta_variant: str = "cot_half",
                                       hbar: float = HBAR) -> float:
    """|-i hbar grad f - [{e_r,P_r} + (1/r){e_theta,P_theta} + (1/(r sin)){e_phi,P_phi}] f|."""
    er_pr, eth_pth, eph_pph = symmetrized_terms(f, p, p_theta_variant, hbar)
    total = -1j * hbar * f.cart_gradient(p.cartesian)
    parts = er_pr + eth_pth / p.r + eph_pph / (p.r * np.sin(p.theta))
    return float(np.linalg.norm(total - parts))


def transversality_residual(f: TestField, p: SpherePoint) -> float:
    """|e_r . grad_tran f + grad_tran . (e_r f)|."""
    return float(abs(p.e_r @ transverse_gradient(f, p) + transverse_divergence_of_radial(f, p)))


def momentum_split_residual(f: TestField, p: SpherePoint, hbar: float = HBAR) -> float:
    """|-i hbar grad_cart f - Pi f - e_r P_r f| with each term from its own formula."""
    total = -1j * hbar * f.cart_gradient(p.cartesian)
    return float(np.linalg.norm(total - geometric_momentum(f, p, hbar) - p.e_r * radial_momentum(f, p, hbar)))


def geometric_momentum_residual(f: TestField, p: SpherePoint, hbar: float = HBAR) -> float:
    """|Pi f from the component formulas - (-i hbar grad_tran f)|."""
    return float(np.linalg.norm(geometric_momentum(f, p, hbar) + 1j * hbar * transverse_gradient(f, p)))


def angular_momentum_squared(f: TestField, p: SpherePoint, hbar: float = HBAR) -> complex:
    d = spherical_derivatives(f, p)
    st, ct = np.sin(p.theta), np.cos(p.theta)
    return -hbar ** 2 * (d.dthetatheta + ct / st * d.dtheta + d.dphiphi / st ** 2)


def pr_squared_residual(f: TestField, p: SpherePoint, hbar: float = HBAR) -> float:
    """|P_r^2 f - (-hbar^2 lap f - L^2 f / r^2)|."""
    d = spherical_derivatives(f, p)
    pr2 = -hbar ** 2 * (d.drr + 2 * d.dr / p.r)
    rhs = -hbar ** 2 * f.cart_laplacian(p.cartesian) - angular_momentum_squared(f, p, hbar) / p.r ** 2
    return float(abs(pr2 - rhs))


def rpi_z_eigenfunction(gamma: float, theta):
    """u(theta) = (2 pi)^-1/2 exp(-i gamma ln tan(theta/2)) / sin(theta) and du/dtheta."""
    theta = np.asarray(theta, dtype=float)
    st = np.sin(theta)
    u = np.exp(-1j * gamma * np.log(np.tan(theta / 2))) / (np.sqrt(2 * np.pi) * st)
    du = u * (-np.cos(theta) / st - 1j * gamma / st)
    return u, du


def rpi_z_eigenfunction_residual(gamma: float, theta_samples, hbar: float = HBAR) -> float:
    """max |i hbar (sin d_theta + cos) u - gamma hbar u| / |u| over the samples."""
    theta = np.atleast_1d(np.asarray(theta_samples, dtype=float))
    if np.any(theta <= POLE_EXCLUSION) or np.any(theta >= np.pi - POLE_EXCLUSION):
        raise DomainError("eigenfunction samples must avoid the poles")
    u, du = rpi_z_eigenfunction(gamma, theta)
    applied = 1j * hbar * (np.sin(theta) * du + np.cos(theta) * u)
    return float(np.max(np.abs(applied - gamma * hbar * u) / np.abs(u)))


# ---------------------------------------------------------------------------
# test corpus

def _poly_times_radial(name, poly, grad, hess, envelope="none") -> TestField:
    """Field P(x) E(r) with E one of 1, exp(-r), exp(-r^2)."""

    def env(r):
        if envelope == "none":
            return 1.0, 0.0, 0.0
        if envelope == "exp":
            e = np.exp(-r)
            return e, -e, e
        e = np.exp(-r * r)
        return e, -2 * r * e, (4 * r * r - 2) * e

    def value(x):
        return poly(x) * env(np.linalg.norm(x))[0]

    def gradient(x):
        r = np.linalg.norm(x)
        e, de, _ = env(r)
        return e * grad(x) + poly(x) * de * x / r

    def hessian(x):
        r = np.linalg.norm(x)
        e, de, dde = env(r)
        n = x / r
        gp = grad(x)
        return (e * hess(x) + de * (np.outer(gp, n) + np.outer(n, gp))
                + poly(x) * (dde * np.outer(n, n) + de / r * (np.eye(3) - np.outer(n, n))))

    def laplacian(x):
        r = np.linalg.norm(x)
        e, de, dde = env(r)
        n = x / r
        return e * np.trace(hess(x)) + 2 * de * (n @ grad(x)) + poly(x) * (dde + 2 * de / r)

    return TestField(name, value, gradient, hessian, laplacian)


def _z3():
    return np.zeros((3, 3), dtype=complex)


def _const_hess(entries):
    def hess(x):
        h = _z3()
        for (i, j), v in entries.items():
            h[i, j] = h[j, i] = v
        return h
    return hess


def field_corpus() -> list[TestField]:
    """Fixed set of fields with exact derivatives."""
    one = (lambda x: 1.0 + 0j, lambda x: np.zeros(3, dtype=complex), lambda x: _z3())
    z = (lambda x: x[2] + 0j, lambda x: np.array([0, 0, 1], dtype=complex), lambda x: _z3())
    x2y = (
        lambda x: x[0] ** 2 * x[1] + 0j,
        lambda x: np.array([2 * x[0] * x[1], x[0] ** 2, 0], dtype=complex),
        lambda x: np.array([[2 * x[1], 2 * x[0], 0], [2 * x[0], 0, 0], [0, 0, 0]], dtype=complex),
    )
    mixed = (
        lambda x: x[0] + 2 * x[1] * x[2] + 0j,
        lambda x: np.array([1, 2 * x[2], 2 * x[1]], dtype=complex),
        _const_hess({(1, 2): 2.0}),
    )
    y11 = (
        lambda x: x[0] + 1j * x[1],
        lambda x: np.array([1, 1j, 0], dtype=complex),
        lambda x: _z3(),
    )
    quad = (
        lambda x: x[0] ** 2 - x[1] ** 2 + 0j,
        lambda x: np.array([2 * x[0], -2 * x[1], 0], dtype=complex),
        lambda x: np.diag([2.0, -2.0, 0.0]).astype(complex),
    )
    return [
        _poly_times_radial("one", *one),
        _poly_times_radial("z", *z),
        _poly_times_radial("x2y", *x2y),
        _poly_times_radial("exp(-r)", *one, envelope="exp"),
        _poly_times_radial("z exp(-r)", *z, envelope="exp"),
        _poly_times_radial("(x+2yz) exp(-r2)", *mixed, envelope="gauss"),
        _poly_times_radial("(x+iy) exp(-r2)", *y11, envelope="gauss"),
        _poly_times_radial("(x2-y2) exp(-r2)", *quad, envelope="gauss"),
    ]


def corpus_field(name: str) -> TestField:
    for f in field_corpus():
        if f.name == name:
            return f
    raise InvalidArgumentError(f"no corpus field named {name!r}")


def point_grid(n: int = 64, r_range=(0.1, 5.0), margin: float = 0.1) -> list[SpherePoint]:
    """Deterministic Halton points over r, theta in [margin, pi - margin], phi in [0, 2 pi)."""
    u = qmc.Halton(d=3, scramble=False).random(n + 1)[1:]
    lo = np.array([r_range[0], margin, 0.0])
    hi = np.array([r_range[1], np.pi - margin, 2 * np.pi])
    pts = qmc.scale(u, lo, hi)
    return [SpherePoint(*row) for row in pts]


def sweep(check: Callable[[TestField, SpherePoint], float], fields=None, points=None) -> float:
    """Largest value of ``check`` over corpus fields times grid points."""
    fields = field_corpus() if fields is None else fields
    points = point_grid() if points is None else points
    return max(check(f, p) for f in fields for p in points)
