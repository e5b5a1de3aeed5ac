import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import sph_harm_y

from radmom import operators as ops_mod
from radmom.angular import BasisTruncation, build_quadrature
from radmom.errors import AccuracyError, InvalidArgumentError
from radmom.operators import (
    OperatorMatrix,
    anticommutator,
    build_angular_momentum,
    build_direction_cosine,
    build_geometric_momentum,
    build_geometric_momentum_direct,
    commutator,
    direction_cosine_recursion,
    operator_set,
    rotation_conjugate,
    rotation_unitary,
)

LMAX = 8


@pytest.fixture(scope="module")
def basis():
    return BasisTruncation(LMAX)


@pytest.fixture(scope="module")
def ops(basis):
    return operator_set(basis)


def brute_force_matrix(fn, l_max, n=40):
    """<l'm'| fn(theta, phi) |lm> by a dense product rule and scipy harmonics."""
    x, w = np.polynomial.legendre.leggauss(n)
    th = np.arccos(x)
    ph = np.arange(2 * n) * np.pi / n
    T, P = np.meshgrid(th, ph, indexing="ij")
    W = np.outer(w, np.full(2 * n, np.pi / n))
    idx = [(l, m) for l in range(l_max + 1) for m in range(-l, l + 1)]
    Y = np.array([sph_harm_y(l, m, T, P) for l, m in idx])
    F = fn(T, P)
    return np.einsum("aij,ij,bij->ab", Y.conj(), W * F, Y)


# --- angular momentum -------------------------------------------------------

def test_lz_and_lx_elements():
    b = BasisTruncation(2)
    assert build_angular_momentum("z", b).element((1, 1), (1, 1)) == pytest.approx(1.0)
    assert build_angular_momentum("x", b).element((1, 1), (1, 0)) == pytest.approx(1 / np.sqrt(2))


def test_angular_momentum_algebra_full_matrix(ops):
    for i, j, k in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")):
        res = commutator(ops[f"L{i}"], ops[f"L{j}"]) - 1j * ops[f"L{k}"]
        assert np.abs(res.data).max() < 1e-13


def test_casimir(ops, basis):
    l2 = ops["Lx"] @ ops["Lx"] + ops["Ly"] @ ops["Ly"] + ops["Lz"] @ ops["Lz"]
    ls = basis.l_values
    np.testing.assert_allclose(l2.data, np.diag(ls * (ls + 1)).astype(complex), atol=1e-12)


def test_hbar_scaling():
    b = BasisTruncation(2)
    np.testing.assert_allclose(build_angular_momentum("y", b, hbar=2.5).data,
                               2.5 * build_angular_momentum("y", b).data)


def test_unknown_axis():
    with pytest.raises(InvalidArgumentError):
        build_angular_momentum("w", BasisTruncation(1))


# --- direction cosines ------------------------------------------------------

def test_gaunt_element():
    erz = build_direction_cosine("z", BasisTruncation(3))
    assert erz.element((1, 0), (0, 0)) == pytest.approx(0.5773503, abs=1e-7)


def test_cos_theta_conserves_m(basis):
    erz = build_direction_cosine("z", basis).data
    m = basis.m_values
    assert np.abs(erz[m[:, None] != m[None, :]]).max() < 1e-15


@pytest.mark.parametrize("axis,fn", [
    ("x", lambda t, p: np.sin(t) * np.cos(p)),
    ("y", lambda t, p: np.sin(t) * np.sin(p)),
    ("z", lambda t, p: np.cos(t)),
])
def test_direction_cosine_against_independent_quadrature(axis, fn):
    ref = brute_force_matrix(fn, 4)
    b = BasisTruncation(4)
    np.testing.assert_allclose(direction_cosine_recursion(axis, b), ref, atol=1e-13)
    np.testing.assert_allclose(build_direction_cosine(axis, b).data, ref, atol=1e-13)


def test_unit_vector_identity(ops, basis):
    s = ops["erx"] @ ops["erx"] + ops["ery"] @ ops["ery"] + ops["erz"] @ ops["erz"]
    n = s.interior(2).shape[0]
    assert np.abs(s.interior(2) - np.eye(n)).max() < 1e-12
    assert s.contaminated_shells == 2


def test_aliasing_quadrature_rejected():
    b = BasisTruncation(4)
    with pytest.raises(AccuracyError):
        build_direction_cosine("x", b, build_quadrature(5, 9))


# --- geometric momentum -----------------------------------------------------

def test_rpi_z_from_constant_harmonic():
    rpz = build_geometric_momentum("z", BasisTruncation(3))
    assert rpz.element((1, 0), (0, 0)) == pytest.approx(1j / np.sqrt(3), abs=1e-13)
    assert abs(rpz.element((0, 0), (0, 0))) < 1e-15


def test_rpi_diagonal_vanishes(ops):
    for ax in "xyz":
        assert np.abs(np.diag(ops[f"rPi{ax}"].data)).max() < 1e-14


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_two_constructions_agree(axis, ops, basis):
    direct = build_geometric_momentum_direct(axis, basis)
    assert np.linalg.norm((direct - ops[f"rPi{axis}"]).interior(1)) < 1e-10


def test_rpi_z_against_independent_quadrature():
    # rPi_z = i (sin d_theta + cos) applied to scipy harmonics, projected by a dense product rule
    # d_theta Y_lm = m cot Y_lm + sqrt((l-m)(l+m+1)) e^{-i phi} Y_l,m+1
    l_max, n = 3, 40
    x, w = np.polynomial.legendre.leggauss(n)
    th = np.arccos(x)
    ph = np.arange(2 * n) * np.pi / n
    T, P = np.meshgrid(th, ph, indexing="ij")
    W = np.outer(w, np.full(2 * n, np.pi / n))
    idx = [(l, m) for l in range(l_max + 2) for m in range(-l, l + 1)]
    Y = {lm: sph_harm_y(lm[0], lm[1], T, P) for lm in idx}
    ref = np.zeros((16, 16), dtype=complex)
    for b, (l, m) in enumerate(idx[:16]):
        up = Y.get((l, m + 1), 0.0)
        dth = m / np.tan(T) * Y[(l, m)] + np.sqrt((l - m) * (l + m + 1)) * np.exp(-1j * P) * up
        applied = 1j * (np.sin(T) * dth + np.cos(T) * Y[(l, m)])
        for a, lm in enumerate(idx[:16]):
            ref[a, b] = np.sum(W * Y[lm].conj() * applied)
    ours = build_geometric_momentum("z", BasisTruncation(3)).data
    np.testing.assert_allclose(ours[:9, :9], ref[:9, :9], atol=1e-12)


def test_rpi_hermitian(ops):
    for ax in "xyz":
        assert ops[f"rPi{ax}"].hermiticity_residual() < 1e-12


def test_matrix_transversality(ops):
    assert ops_mod.transversality_residual(ops) < 1e-10


# --- algebra ----------------------------------------------------------------

def test_commutator_self_vanishes(ops):
    assert np.abs(commutator(ops["Lz"], ops["Lz"]).data).max() == 0


def test_so31_relations(ops):
    res = ops_mod.so31_residuals(ops)
    assert len(res) == 9
    assert max(res.values()) < 1e-10


def test_rpi_x_rpi_y_closes_on_lz(ops):
    r = commutator(ops["rPix"], ops["rPiy"]) + 1j * ops["Lz"]
    assert r.interior_norm(2) < 1e-10


def test_anticommutator_is_unhalved():
    b = BasisTruncation(1)
    lz = build_angular_momentum("z", b)
    np.testing.assert_allclose(anticommutator(lz, lz).data, 2 * (lz @ lz).data)


def test_contamination_bookkeeping(ops):
    assert ops["Lx"].contaminated_shells == 0
    assert ops["erx"].contaminated_shells == 1
    assert (ops["erx"] @ ops["rPiy"]).contaminated_shells == 2
    assert (ops["erx"] + ops["Lx"]).contaminated_shells == 1


def test_basis_mismatch_rejected(ops):
    with pytest.raises(InvalidArgumentError):
        ops["Lx"] @ build_angular_momentum("x", BasisTruncation(2))


# --- rotations --------------------------------------------------------------

def test_rotation_maps_lz_to_lx(ops):
    assert np.abs((rotation_conjugate("y", np.pi / 2, ops["Lz"]) - ops["Lx"]).data).max() < 1e-12


def test_rotation_maps_rpiz_to_rpix(ops):
    r = rotation_conjugate("y", np.pi / 2, ops["rPiz"]) - ops["rPix"]
    assert np.linalg.norm(r.interior(1)) < 1e-10


def test_rotation_maps_lz_to_ly(ops):
    assert np.abs((rotation_conjugate("x", -np.pi / 2, ops["Lz"]) - ops["Ly"]).data).max() < 1e-12


def test_zero_angle_is_identity(ops):
    np.testing.assert_allclose(rotation_conjugate("y", 0.0, ops["rPiz"]).data, ops["rPiz"].data, atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2 * np.pi, 2 * np.pi))
def test_rotation_is_unitary(angle):
    b = BasisTruncation(4)
    u = rotation_unitary(build_angular_momentum("y", b), angle)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(b.dimension), atol=1e-13)


def test_rotation_requires_exact_generator(ops):
    with pytest.raises(InvalidArgumentError):
        rotation_unitary(ops["rPiz"], 0.3)


# --- dumps ------------------------------------------------------------------

def test_dump_rows_lz():
    rows = ops_mod.dump_rows(build_angular_momentum("z", BasisTruncation(1)))
    assert rows == [("Lz", 1, -1, 1, -1, -1.0, 0.0), ("Lz", 1, 1, 1, 1, 1.0, 0.0)]


def test_operator_matrix_shape_validation():
    with pytest.raises(InvalidArgumentError):
        OperatorMatrix(np.zeros((3, 3)), BasisTruncation(1), "bad")
