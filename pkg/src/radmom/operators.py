"""Matrices of L_i, x_i / r and r Pi_i on a truncated spherical-harmonic basis.

The direction cosines x_i / r couple shell l only to l +/- 1, so any product
that passes through shell l_max + 1 is wrong in the top shells of a truncated
basis.  Each matrix records how many top shells are affected
(``contaminated_shells``); algebraic checks are made on the interior block.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import (
    AngularQuadrature,
    BasisTruncation,
    build_quadrature,
    default_quadrature,
    harmonics_on_grid,
    legendre_table,
    theta_part,
)
from .errors import AccuracyError, InvalidArgumentError

HBAR = 1.0
AXES = ("x", "y", "z")
CROSSCHECK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    data: np.ndarray
    basis: BasisTruncation
    name: str = ""
    hermitian: bool = False
    contaminated_shells: int = 0

    def __post_init__(self):
        n = self.basis.dimension
        if self.data.shape != (n, n):
            raise InvalidArgumentError(f"matrix shape {self.data.shape} does not match basis dimension {n}")
        self.data.setflags(write=False)

    @property
    def interior_l(self) -> int:
        """Largest l whose rows and columns are free of truncation error."""
        return self.basis.l_max - self.contaminated_shells

    def interior(self, shells: int | None = None) -> np.ndarray:
        """Sub-matrix over l <= l_max - shells (default: own contamination)."""
        k = self.contaminated_shells if shells is None else shells
        mask = self.basis.shell_mask(self.basis.l_max - k)
        return self.data[np.ix_(mask, mask)]

    def interior_norm(self, shells: int | None = None) -> float:
        return float(np.linalg.norm(self.interior(shells)))

    def element(self, row: tuple[int, int], col: tuple[int, int]) -> complex:
        (l1, m1), (l2, m2) = row, col
        return complex(self.data[l1 * (l1 + 1) + m1, l2 * (l2 + 1) + m2])

    def hermiticity_residual(self) -> float:
        """Largest elementwise deviation of the interior block from its adjoint."""
        block = self.interior()
        return float(np.abs(block - block.conj().T).max())

    def _check(self, other: "OperatorMatrix"):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if other.basis != self.basis:
            raise InvalidArgumentError(f"basis mismatch: {self.basis} vs {other.basis}")
        return None

    def _combine(self, other, data, name, contaminated):
        return OperatorMatrix(np.ascontiguousarray(data), self.basis, name, False, contaminated)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._combine(other, self.data + other.data, f"({self.name}+{other.name})",
                             max(self.contaminated_shells, other.contaminated_shells))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._combine(other, self.data - other.data, f"({self.name}-{other.name})",
                             max(self.contaminated_shells, other.contaminated_shells))

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._combine(other, self.data @ other.data, f"{self.name}{other.name}",
                             self.contaminated_shells + other.contaminated_shells)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return OperatorMatrix(self.data * scalar, self.basis, self.name,
                              self.hermitian and np.isreal(scalar), self.contaminated_shells)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def renamed(self, name: str, hermitian: bool | None = None) -> "OperatorMatrix":
        return OperatorMatrix(self.data.copy(), self.basis, name,
                              self.hermitian if hermitian is None else hermitian,
                              self.contaminated_shells)


def _axis(axis: str) -> str:
    if axis not in AXES:
        raise InvalidArgumentError(f"axis must be one of {AXES}, got {axis!r}")
    return axis


def _ladder(basis: BasisTruncation, hbar: float) -> np.ndarray:
    """Matrix of the raising operator L_+."""
    n = basis.dimension
    lp = np.zeros((n, n), dtype=complex)
    for l in range(basis.l_max + 1):
        for m in range(-l, l):
            lp[l * (l + 1) + m + 1, l * (l + 1) + m] = hbar * np.sqrt((l - m) * (l + m + 1.0))
    return lp


def build_angular_momentum(axis: str, basis: BasisTruncation, hbar: float = HBAR) -> OperatorMatrix:
    """Exact L_x, L_y or L_z from the ladder-operator matrix elements."""
    axis = _axis(axis)
    if axis == "z":
        data = np.diag(hbar * basis.m_values.astype(complex))
    else:
        lp = _ladder(basis, hbar)
        lm = lp.conj().T
        data = (lp + lm) / 2 if axis == "x" else (lp - lm) / 2j
    return OperatorMatrix(data, basis, f"L{axis}", hermitian=True, contaminated_shells=0)


def direction_cosine_recursion(axis: str, basis: BasisTruncation) -> np.ndarray:
    """x_i / r from the three-term recursions for cos(theta) and sin(theta) e^{+-i phi}.

    Used as an independent check on the quadrature build.
    """
    axis = _axis(axis)
    n = basis.dimension

    def flat(l, m):
        return l * (l + 1) + m

    def put(mat, lo, mo, li, mi, val):
        if 0 <= lo <= basis.l_max and abs(mo) <= lo:
            mat[flat(lo, mo), flat(li, mi)] += val

    out = np.zeros((n, n), dtype=complex)
    if axis == "z":
        for ix in basis.indices():
            l, m = ix.l, ix.m
            put(out, l + 1, m, l, m, np.sqrt(((l + 1.0) ** 2 - m * m) / ((2 * l + 1) * (2 * l + 3))))
            if l > 0:
                put(out, l - 1, m, l, m, np.sqrt((l * l - m * m) / ((2 * l - 1.0) * (2 * l + 1))))
        return out

    plus = np.zeros((n, n), dtype=complex)
    minus = np.zeros((n, n), dtype=complex)
    for ix in basis.indices():
        l, m = ix.l, ix.m
        d_up = (2 * l + 1.0) * (2 * l + 3)
        put(plus, l + 1, m + 1, l, m, -np.sqrt((l + m + 1.0) * (l + m + 2) / d_up))
        put(minus, l + 1, m - 1, l, m, np.sqrt((l - m + 1.0) * (l - m + 2) / d_up))
        if l > 0:
            d_dn = (2 * l - 1.0) * (2 * l + 1)
            put(plus, l - 1, m + 1, l, m, np.sqrt((l - m) * (l - m - 1.0) / d_dn))
            put(minus, l - 1, m - 1, l, m, -np.sqrt((l + m) * (l + m - 1.0) / d_dn))
    return (plus + minus) / 2 if axis == "x" else (plus - minus) / 2j


def _default_quadrature(basis: BasisTruncation) -> AngularQuadrature:
    return default_quadrature(basis.l_max)


def _project(basis: BasisTruncation, q: AngularQuadrature, applied: np.ndarray) -> np.ndarray:
    """<Y_a | applied_b> for samples ``applied`` of shape (dim, n_theta, n_phi)."""
    y = harmonics_on_grid(basis, q)
    w = q.theta_weights[None, :, None] * q.phi_weight
    n = basis.dimension
    return (np.conj(y) * w).reshape(n, -1) @ applied.reshape(n, -1).T


def build_direction_cosine(axis: str, basis: BasisTruncation,
                           q: AngularQuadrature | None = None) -> OperatorMatrix:
    """Matrix of the multiplication operator x_i / r by quadrature.

    Raises AccuracyError when the result disagrees with the recursion formulas
    by more than 1e-10, which happens when ``q`` cannot integrate products of
    degree 2 l_max + 1 exactly.
    """
    axis = _axis(axis)
    q = q or _default_quadrature(basis)
    theta, phi = q.grid()
    factor = {
        "x": np.sin(theta) * np.cos(phi),
        "y": np.sin(theta) * np.sin(phi),
        "z": np.cos(theta),
    }[axis]
    y = harmonics_on_grid(basis, q)
    data = _project(basis, q, factor[None] * y)
    err = np.abs(data - direction_cosine_recursion(axis, basis)).max()
    if err > CROSSCHECK_TOL:
        raise AccuracyError(
            f"direction cosine {axis}/r deviates from recursion by {err:.3g}; "
            f"quadrature {q.shape} too small for l_max={basis.l_max}"
        )
    return OperatorMatrix(data, basis, f"er{axis}", hermitian=True, contaminated_shells=1)


def build_geometric_momentum(axis: str, basis: BasisTruncation, q: AngularQuadrature | None = None,
                             hbar: float = HBAR,
                             direction_cosines: dict[str, OperatorMatrix] | None = None) -> OperatorMatrix:
    """r Pi_i from the cross product: r Pi = L x e_r - i hbar e_r.

    ``direction_cosines`` may supply prebuilt x_i / r matrices keyed by axis.
    """
    axis = _axis(axis)
    j, k = {"x": ("y", "z"), "y": ("z", "x"), "z": ("x", "y")}[axis]
    er = direction_cosines or {}
    lj = build_angular_momentum(j, basis, hbar)
    lk = build_angular_momentum(k, basis, hbar)
    ej = er.get(j) or build_direction_cosine(j, basis, q)
    ek = er.get(k) or build_direction_cosine(k, basis, q)
    ei = er.get(axis) or build_direction_cosine(axis, basis, q)
    cross = lj @ ek - lk @ ej
    rpi = cross - (1j * hbar) * ei
    return OperatorMatrix(np.array(rpi.data), basis, f"rPi{axis}", hermitian=True,
                          contaminated_shells=1)


def _theta_derivative_table(basis: BasisTruncation, theta: np.ndarray) -> np.ndarray:
    """d Theta_lm / d theta for every basis state.

    Uses d/dtheta Y_lm = (c+ e^{-i phi} Y_l,m+1 - c- e^{i phi} Y_l,m-1) / 2.
    """
    table = legendre_table(basis.l_max, theta)
    out = np.zeros((basis.dimension,) + theta.shape)
    for ix in basis.indices():
        l, m = ix.l, ix.m
        acc = np.zeros(theta.shape)
        if m + 1 <= l:
            acc += np.sqrt((l - m) * (l + m + 1.0)) * theta_part(l, m + 1, theta, table)
        if m - 1 >= -l:
            acc -= np.sqrt((l + m) * (l - m + 1.0)) * theta_part(l, m - 1, theta, table)
        out[ix.flat] = acc / 2
    return out


def apply_geometric_momentum(axis: str, basis: BasisTruncation, q: AngularQuadrature,
                             hbar: float = HBAR) -> np.ndarray:
    """Samples of r Pi_i Y_lm on the grid of ``q`` for every basis state."""
    axis = _axis(axis)
    theta, phi = q.grid()
    m = basis.m_values[:, None, None]
    eimp = np.exp(1j * m * phi[None])
    table = legendre_table(basis.l_max, q.theta_nodes)
    th = np.array([theta_part(ix.l, ix.m, q.theta_nodes, table) for ix in basis.indices()])
    dth = _theta_derivative_table(basis, q.theta_nodes)
    y = th[:, :, None] * eimp
    dy = dth[:, :, None] * eimp
    dphi_over_sin = 1j * m * y / np.sin(theta)[None]
    ct, st = np.cos(theta)[None], np.sin(theta)[None]
    cp, sp = np.cos(phi)[None], np.sin(phi)[None]
    if axis == "x":
        return -1j * hbar * (ct * cp * dy - sp * dphi_over_sin - st * cp * y)
    if axis == "y":
        return -1j * hbar * (ct * sp * dy + cp * dphi_over_sin - st * sp * y)
    return 1j * hbar * (st * dy + ct * y)


def build_geometric_momentum_direct(axis: str, basis: BasisTruncation,
                                    q: AngularQuadrature | None = None,
                                    hbar: float = HBAR) -> OperatorMatrix:
    """r Pi_i by applying the differential operator to each Y_lm and projecting."""
    axis = _axis(axis)
    q = q or _default_quadrature(basis)
    if not q.exact_for_degree(2 * basis.l_max + 1):
        raise AccuracyError(f"quadrature {q.shape} is not exact for degree {2 * basis.l_max + 1}")
    data = _project(basis, q, apply_geometric_momentum(axis, basis, q, hbar))
    return OperatorMatrix(data, basis, f"rPi{axis}", hermitian=True, contaminated_shells=1)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    if a.basis != b.basis:
        raise InvalidArgumentError(f"basis mismatch: {a.basis} vs {b.basis}")
    data = a.data @ b.data - b.data @ a.data
    return OperatorMatrix(data, a.basis, f"[{a.name},{b.name}]", False,
                          a.contaminated_shells + b.contaminated_shells)


def anticommutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """AB + BA (no factor 1/2)."""
    if a.basis != b.basis:
        raise InvalidArgumentError(f"basis mismatch: {a.basis} vs {b.basis}")
    data = a.data @ b.data + b.data @ a.data
    return OperatorMatrix(data, a.basis, f"{{{a.name},{b.name}}}", False,
                          a.contaminated_shells + b.contaminated_shells)


def rotation_unitary(generator: OperatorMatrix, angle: float, hbar: float = HBAR) -> np.ndarray:
    """exp(-i angle G / hbar) via the eigendecomposition of the hermitian generator.

    Generators that do not mix shells are diagonalized one l-block at a time.
    """
    g = generator.data
    if not generator.hermitian or generator.contaminated_shells or not np.allclose(g, g.conj().T, atol=1e-13):
        raise InvalidArgumentError(f"generator {generator.name!r} must be an exact hermitian matrix")
    ls = generator.basis.l_values
    if np.any(g[ls[:, None] != ls[None, :]]):
        blocks = [np.arange(g.shape[0])]
    else:
        blocks = [np.flatnonzero(ls == l) for l in range(generator.basis.l_max + 1)]
    u = np.zeros_like(g, dtype=complex)
    for idx in blocks:
        evals, vecs = np.linalg.eigh(g[np.ix_(idx, idx)])
        u[np.ix_(idx, idx)] = (vecs * np.exp(-1j * angle * evals / hbar)) @ vecs.conj().T
    return u


def rotation_conjugate(generator_axis: str, angle: float, a: OperatorMatrix,
                       hbar: float = HBAR) -> OperatorMatrix:
    """exp(-i angle L_axis / hbar) A exp(+i angle L_axis / hbar)."""
    gen = build_angular_momentum(generator_axis, a.basis, hbar)
    u = rotation_unitary(gen, angle, hbar)
    data = u @ a.data @ u.conj().T
    return OperatorMatrix(data, a.basis, f"R{generator_axis}({angle:g}){a.name}", a.hermitian,
                          a.contaminated_shells)


def operator_set(basis: BasisTruncation, q: AngularQuadrature | None = None,
                 hbar: float = HBAR) -> dict[str, OperatorMatrix]:
    """All nine matrices keyed by their dump names (Lx, erx, rPix, ...)."""
    q = q or _default_quadrature(basis)
    er = {ax: build_direction_cosine(ax, basis, q) for ax in AXES}
    ops = {}
    for ax in AXES:
        ops[f"L{ax}"] = build_angular_momentum(ax, basis, hbar)
        ops[f"er{ax}"] = er[ax]
        ops[f"rPi{ax}"] = build_geometric_momentum(ax, basis, q, hbar, direction_cosines=er)
    return ops


def so31_residuals(ops: dict[str, OperatorMatrix], hbar: float = HBAR) -> dict[str, float]:
    """Interior Frobenius residuals of the nine commutation relations.

    [rPi_i, rPi_j] = -i hbar eps_ijk L_k, [L_i, rPi_j] = i hbar eps_ijk rPi_k,
    [L_i, L_j] = i hbar eps_ijk L_k, for (i, j, k) cyclic.
    """
    out = {}
    for i, j, k in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")):
        pp = commutator(ops[f"rPi{i}"], ops[f"rPi{j}"]) + (1j * hbar) * ops[f"L{k}"]
        lp = commutator(ops[f"L{i}"], ops[f"rPi{j}"]) - (1j * hbar) * ops[f"rPi{k}"]
        ll = commutator(ops[f"L{i}"], ops[f"L{j}"]) - (1j * hbar) * ops[f"L{k}"]
        out[f"[rPi{i},rPi{j}]"] = pp.interior_norm(2)
        out[f"[L{i},rPi{j}]"] = lp.interior_norm(2)
        out[f"[L{i},L{j}]"] = ll.interior_norm(2)
    return out


def transversality_residual(ops: dict[str, OperatorMatrix]) -> float:
    """Interior norm of sum_i ((e_r)_i (r Pi)_i + (r Pi)_i (e_r)_i)."""
    total = None
    for ax in AXES:
        term = anticommutator(ops[f"er{ax}"], ops[f"rPi{ax}"])
        total = term if total is None else total + term
    return total.interior_norm(2)


def dump_rows(op: OperatorMatrix, threshold: float = 1e-14) -> list[tuple]:
    """Nonzero elements as (name, l', m', l, m, re, im) tuples."""
    idx = op.basis.indices()
    rows = []
    for a, b in zip(*np.nonzero(np.abs(op.data) > threshold)):
        v = op.data[a, b]
        re = float(v.real) if abs(v.real) > threshold else 0.0
        im = float(v.imag) if abs(v.imag) > threshold else 0.0
        rows.append((op.name, idx[a].l, idx[a].m, idx[b].l, idx[b].m, re, im))
    return rows
