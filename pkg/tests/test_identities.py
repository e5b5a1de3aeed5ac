import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radmom import identities as idn
from radmom.errors import DomainError, InvalidArgumentError
from radmom.identities import SpherePoint, TestField, corpus_field, field_corpus, point_grid, sweep


def point_from_cartesian(x):
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x)
    return SpherePoint(r, np.arccos(x[2] / r), np.arctan2(x[1], x[0]) % (2 * np.pi))


def radius_field():
    def grad(x):
        return (x / np.linalg.norm(x)).astype(complex)

    def hess(x):
        r = np.linalg.norm(x)
        n = x / r
        return ((np.eye(3) - np.outer(n, n)) / r).astype(complex)

    return TestField("r", lambda x: np.linalg.norm(x) + 0j, grad, hess, lambda x: 2 / np.linalg.norm(x) + 0j)


points = st.builds(SpherePoint, st.floats(0.2, 4.0), st.floats(0.05, np.pi - 0.05), st.floats(0, 2 * np.pi))
fields = st.sampled_from(field_corpus())


# --- corpus and geometry ----------------------------------------------------

def test_corpus_derivatives_match_finite_differences():
    for f in field_corpus():
        for p in point_grid(16):
            assert f.consistency_error(p.cartesian) < 1e-6, f.name


def test_corpus_lookup():
    assert corpus_field("z").name == "z"
    with pytest.raises(InvalidArgumentError):
        corpus_field("nope")


def test_point_grid_is_deterministic():
    a, b = point_grid(10), point_grid(10)
    assert a == b and len(a) == 10


@pytest.mark.parametrize("r,theta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, np.pi - 1e-4)])
def test_sphere_point_domain(r, theta):
    with pytest.raises(DomainError):
        SpherePoint(r, theta, 0.0)


@given(points)
def test_unit_vectors_orthonormal(p):
    frame = np.array([p.e_r, p.e_theta, p.e_phi])
    np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(np.cross(p.e_r, p.e_theta), p.e_phi, atol=1e-14)


# --- gradient ---------------------------------------------------------------

def test_gradient_of_z():
    p = SpherePoint(1.7, 0.8, 2.1)
    np.testing.assert_allclose(idn.spherical_gradient(corpus_field("z"), p), [0, 0, 1], atol=1e-14)


def test_gradient_of_r():
    p = SpherePoint(1.7, 0.8, 2.1)
    np.testing.assert_allclose(idn.spherical_gradient(radius_field(), p), p.e_r, atol=1e-14)


def test_gradient_of_x2y():
    x = 2 * np.ones(3) / np.sqrt(3)
    f = corpus_field("x2y")
    np.testing.assert_allclose(idn.spherical_gradient(f, point_from_cartesian(x)), f.cart_gradient(x), atol=1e-13)


@given(fields, points)
def test_gradient_decomposition(f, p):
    assert idn.decomposition_residual(f, p) < 1e-10


# --- transversality ---------------------------------------------------------

def test_transversality_constant_field():
    assert idn.transversality_residual(corpus_field("one"), SpherePoint(1.3, 1.1, 0.4)) < 1e-15


@pytest.mark.parametrize("name,tol", [("z", 1e-12), ("(x+iy) exp(-r2)", 1e-10)])
def test_transversality_examples(name, tol):
    assert sweep(idn.transversality_residual, [corpus_field(name)]) < tol


@given(fields, points)
def test_transversality_property(f, p):
    assert idn.transversality_residual(f, p) < 1e-10


# --- symmetrized decomposition ----------------------------------------------

@pytest.mark.parametrize("name", ["z", "x2y"])
def test_cot_half_variant_closes(name):
    assert sweep(idn.symmetrized_decomposition_residual, [corpus_field(name)]) < 1e-10


def test_tan_variant_fails():
    p = SpherePoint(1.0, np.pi / 4, 0.3)
    res = idn.symmetrized_decomposition_residual(corpus_field("z"), p, "tan")
    # frozen from an independent evaluation: |sin(theta) (tan - cot/2)| / r at theta = pi/4
    assert res == pytest.approx(np.sqrt(2) / 4, rel=1e-12)
    assert res > 0.1


def test_unknown_variant():
    with pytest.raises(InvalidArgumentError):
        idn.symmetrized_decomposition_residual(corpus_field("z"), SpherePoint(1, 1, 1), "sec")


@given(fields, points)
def test_symmetrized_property(f, p):
    assert idn.symmetrized_decomposition_residual(f, p) < 1e-10


# --- geometric momentum -----------------------------------------------------

@given(fields, points)
def test_geometric_components(f, p):
    assert idn.geometric_momentum_residual(f, p) < 1e-10
    assert idn.momentum_split_residual(f, p) < 1e-10


@given(points)
def test_geometric_momentum_of_radial_field(p):
    # for f = f(r): -i grad f = e_r P_r f + Pi f leaves Pi f = i e_r f / r
    f = corpus_field("exp(-r)")
    pi = idn.geometric_momentum(f, p)
    np.testing.assert_allclose(pi, 1j * p.e_r * f.value(p.cartesian) / p.r, atol=1e-14)


def test_hbar_scales_momenta():
    f, p = corpus_field("x2y"), SpherePoint(1.2, 0.9, 0.4)
    np.testing.assert_allclose(idn.geometric_momentum(f, p, hbar=3.0), 3 * idn.geometric_momentum(f, p))


# --- P_r squared ------------------------------------------------------------

def test_s_wave_has_no_angular_part():
    f = corpus_field("exp(-r)")
    for p in point_grid(8):
        assert abs(idn.angular_momentum_squared(f, p)) < 1e-14
        assert idn.pr_squared_residual(f, p) < 1e-12


@pytest.mark.parametrize("name", ["z exp(-r)", "(x2-y2) exp(-r2)"])
def test_pr_squared_examples(name):
    assert sweep(idn.pr_squared_residual, [corpus_field(name)]) < 1e-8


def test_pr_squared_corpus_coverage():
    assert len(field_corpus()) >= 5 and len(point_grid()) >= 50
    assert sweep(idn.pr_squared_residual) < 1e-8


def test_angular_momentum_squared_eigenvalue():
    # z exp(-r) is an l = 1 field: L^2 f = 2 f
    f = corpus_field("z exp(-r)")
    p = SpherePoint(0.7, 1.2, 0.3)
    assert idn.angular_momentum_squared(f, p) == pytest.approx(2 * f.value(p.cartesian), rel=1e-12)


# --- eigenfunctions ---------------------------------------------------------

def test_eigenfunction_gamma_zero_is_one_over_sin():
    th = np.linspace(0.1, 3.0, 7)
    u, _ = idn.rpi_z_eigenfunction(0.0, th)
    np.testing.assert_allclose(u, 1 / (np.sqrt(2 * np.pi) * np.sin(th)))
    assert idn.rpi_z_eigenfunction_residual(0.0, th) < 1e-15


@pytest.mark.parametrize("gamma", [1.0, -3.7])
def test_eigenfunction_examples(gamma):
    assert idn.rpi_z_eigenfunction_residual(gamma, [0.5, 1.0, 2.0]) < 1e-12


@settings(max_examples=50)
@given(st.floats(-20, 20), st.floats(0.01, np.pi - 0.01))
def test_eigenfunction_property(gamma, theta):
    assert idn.rpi_z_eigenfunction_residual(gamma, theta) < 1e-12 * max(1.0, abs(gamma))


def test_eigenfunction_derivative_against_differences():
    th, h = 1.1, 1e-6
    u, du = idn.rpi_z_eigenfunction(2.3, th)
    fd = (idn.rpi_z_eigenfunction(2.3, th + h)[0] - idn.rpi_z_eigenfunction(2.3, th - h)[0]) / (2 * h)
    assert abs(du - fd) < 1e-8


def test_eigenfunction_rejects_poles():
    with pytest.raises(DomainError):
        idn.rpi_z_eigenfunction_residual(1.0, [0.0, 1.0])
