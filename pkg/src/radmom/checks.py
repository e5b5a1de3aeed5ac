"""Verification suites run by ``radmom verify``.

Each suite returns a list of :class:`CheckResult`; a check passes when its
residual is at most the (scaled) tolerance, or at least the threshold for
lower-bound checks.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import angular, hydrogen, identities, operators, transforms


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    paper_eq: str
    residual: float
    tolerance: float
    lower_bound: bool = False

    @property
    def passed(self) -> bool:
        if self.lower_bound:
            return self.residual > self.tolerance
        return bool(self.residual <= self.tolerance)


@dataclass(frozen=True)
class SuiteConfig:
    l_max: int = 20
    n_theta: int | None = None
    n_phi: int | None = None
    gamma_max: float = 40.0
    gamma_points: int = 1601
    tolerance_scale: float = 1.0

    @property
    def quadrature(self) -> angular.AngularQuadrature:
        return angular.default_quadrature(self.l_max, self.n_theta, self.n_phi)


def _check(cfg, check_id, eq, residual, tol):
    return CheckResult(check_id, eq, float(residual), tol * cfg.tolerance_scale)


def angular_suite(cfg: SuiteConfig) -> list[CheckResult]:
    basis = angular.BasisTruncation(cfg.l_max)
    q = angular.build_quadrature(max(2, cfg.l_max + 1), max(2, 2 * cfg.l_max + 1))
    gram = angular.gram_matrix(basis, q)
    y = angular.harmonics_on_grid(basis, q)
    conj_err = 0.0
    for ix in basis.indices():
        partner = angular.BasisIndex(ix.l, -ix.m).flat
        conj_err = max(conj_err, np.abs(np.conj(y[ix.flat]) - (-1) ** ix.m * y[partner]).max())
    return [
        _check(cfg, "ylm_orthonormality", "Y_lm basis", np.linalg.norm(gram - np.eye(basis.dimension)), 1e-12),
        _check(cfg, "ylm_conjugation", "Y_lm basis", conj_err, 1e-14),
        _check(cfg, "theta_weight_sum", "sum of GL weights = 2", abs(q.theta_weights.sum() - 2), 1e-14),
    ]


def operator_suite(cfg: SuiteConfig) -> list[CheckResult]:
    basis = angular.BasisTruncation(cfg.l_max)
    q = cfg.quadrature
    ops = operators.operator_set(basis, q)
    out = [_check(cfg, f"so31 {name}", "[L,rPi] so(3,1)", res, 1e-10)
           for name, res in operators.so31_residuals(ops).items()]
    out.append(_check(cfg, "matrix_transversality", "sum {e_r,rPi} = 0", operators.transversality_residual(ops), 1e-10))
    unit = ops["erx"] @ ops["erx"] + ops["ery"] @ ops["ery"] + ops["erz"] @ ops["erz"]
    eye = np.eye(basis.dimension)
    out.append(_check(cfg, "unit_vector_square", "e_r . e_r = 1",
                      np.linalg.norm(unit.interior(2) - eye[:unit.interior(2).shape[0], :unit.interior(2).shape[0]]),
                      1e-12))
    for ax in operators.AXES:
        direct = operators.build_geometric_momentum_direct(ax, basis, q)
        out.append(_check(cfg, f"rPi{ax} direct_vs_cross", "rPi = L x e_r - i e_r",
                          np.linalg.norm((direct - ops[f"rPi{ax}"]).interior(1)), 1e-10))
        out.append(_check(cfg, f"rPi{ax} hermitian", "rPi hermitian", ops[f"rPi{ax}"].hermiticity_residual(), 1e-12))
        j, k = {"x": ("y", "z"), "y": ("z", "x"), "z": ("x", "y")}[ax]
        cross = ops[f"L{j}"] @ ops[f"er{k}"] - ops[f"L{k}"] @ ops[f"er{j}"]
        real_part = cross - direct - 1j * ops[f"er{ax}"]
        out.append(_check(cfg, f"Lxer_{ax} = rPi + i hbar er", "L x e_r", real_part.interior_norm(1), 1e-10))
        comm = operators.commutator(ops[f"L{ax}"], ops[f"rPi{ax}"])
        out.append(_check(cfg, f"[L{ax},rPi{ax}] = 0", "commuting pair", comm.interior_norm(2), 1e-10))
    rot = operators.rotation_conjugate
    out += [
        _check(cfg, "rotate Lz -> Lx", "rotation",
               np.abs((rot("y", np.pi / 2, ops["Lz"]) - ops["Lx"]).data).max(), 1e-12),
        _check(cfg, "rotate Lz -> Ly", "rotation",
               np.abs((rot("x", -np.pi / 2, ops["Lz"]) - ops["Ly"]).data).max(), 1e-12),
        _check(cfg, "rotate rPiz -> rPix", "rotation",
               np.linalg.norm((rot("y", np.pi / 2, ops["rPiz"]) - ops["rPix"]).interior(1)), 1e-10),
        _check(cfg, "rotate rPiz -> rPiy", "rotation",
               np.linalg.norm((rot("x", -np.pi / 2, ops["rPiz"]) - ops["rPiy"]).interior(1)), 1e-10),
    ]
    lz = ops["Lz"].interior(2)
    ev = np.linalg.eigvalsh(lz)
    out.append(_check(cfg, "Lz integer spectrum", "Lz = m hbar", np.abs(ev - np.round(ev)).max(), 1e-12))
    return out


def identity_suite(cfg: SuiteConfig) -> list[CheckResult]:
    fields = identities.field_corpus()
    points = identities.point_grid()
    sweep = identities.sweep

    def gradient_error(f, p):
        return np.linalg.norm(identities.spherical_gradient(f, p) - f.cart_gradient(p.cartesian))

    gate = max(f.consistency_error(p.cartesian) for f in fields for p in points)
    z = identities.corpus_field("z")
    tan_res = identities.symmetrized_decomposition_residual(z, identities.SpherePoint(1.0, np.pi / 4, 0.3), "tan")
    eig = max(identities.rpi_z_eigenfunction_residual(g, np.linspace(0.05, np.pi - 0.05, 64))
              for g in (0.0, 1.0, -1.0, 3.7, -3.7))
    return [
        _check(cfg, "corpus_fd_gate", "field derivatives", gate, 1e-6),
        _check(cfg, "spherical_gradient", "grad in spherical", sweep(gradient_error, fields, points), 1e-10),
        _check(cfg, "gradient_decomposition", "grad = e_r d_r + grad_tran", sweep(identities.decomposition_residual, fields, points),
               1e-10),
        _check(cfg, "transversality", "{e_r, grad_tran} = 0", sweep(identities.transversality_residual, fields, points), 1e-10),
        _check(cfg, "symmetrized_cot_half", "e_r P_r + P_tran split",
               sweep(identities.symmetrized_decomposition_residual, fields, points), 1e-10),
        CheckResult("symmetrized_tan_fails", "P_theta with tan", tan_res, 0.1, lower_bound=True),
        _check(cfg, "geometric_components", "Pi_i components",
               sweep(identities.geometric_momentum_residual, fields, points), 1e-10),
        _check(cfg, "momentum_split", "p = e_r P_r + Pi", sweep(identities.momentum_split_residual, fields, points), 1e-10),
        _check(cfg, "pr_squared", "P_r^2 = p^2 - L^2/r^2", sweep(identities.pr_squared_residual, fields, points), 1e-8),
        _check(cfg, "rpi_z_eigenfunction", "rPi_z eigenfunction", eig, 1e-12),
    ]


def hydrogen_suite(cfg: SuiteConfig) -> list[CheckResult]:
    g = hydrogen.ground_state()
    states = [hydrogen.HydrogenState(n, l) for n in (1, 2, 3) for l in range(n)]
    norm_err = max(abs(hydrogen.radial_norm(s) - 1) for s in states)
    inv_r = max(abs(hydrogen.expectation_inverse_r(s) - 1 / s.n ** 2) for s in states)
    p = np.linspace(0, 10, 101)
    amp = np.abs(hydrogen.momentum_amplitude(g, p) / hydrogen.momentum_amplitude_closed_form(p) - 1).max()
    pz = np.linspace(-8, 8, 161)
    marg = hydrogen.marginal_pz(g, pz).values
    marg_err = np.abs(marg / hydrogen.marginal_pz_closed_form(pz) - 1).max()
    return [
        _check(cfg, "radial_normalization", "int R^2 r^2 dr = 1", norm_err, 1e-10),
        _check(cfg, "inverse_r_ground", "<1/r> = 1/a0",
               abs(hydrogen.expectation_inverse_r(g) - 1.0), 1e-10),
        _check(cfg, "inverse_r_all", "<1/r> = 1/(n^2 a0)", inv_r, 1e-10),
        _check(cfg, "amplitude_closed_form", "c(p)", amp, 1e-6),
        _check(cfg, "amplitude_normalization", "c(p)",
               abs(hydrogen.amplitude_normalization(g) - hydrogen.fourier_prefactor()) / hydrogen.fourier_prefactor(),
               1e-8),
        _check(cfg, "marginal_pz_closed_form", "|c(p_z)|^2", marg_err, 1e-6),
    ]


def transform_suite(cfg: SuiteConfig) -> list[CheckResult]:
    grid = transforms.GammaGrid(cfg.gamma_max, cfg.gamma_points)
    gam = grid.values
    near = np.linspace(-10, 10, 401)
    q0 = transforms.q_coeff(0, near)
    ratio = np.abs(np.abs(q0 / transforms.q00_analytic(near)) - 1).max()
    raw = np.abs(transforms.q_coeff_raw(0, near) / transforms.q00_analytic(near) - np.sqrt(2 * np.pi)).max()
    parseval = max(abs(np.trapezoid(np.abs(transforms.q_coeff(l, gam)) ** 2, gam) - 1) for l in (0, 1, 2))
    combined = transforms.combined_z_distribution(grid)
    v = combined.values
    bracket = transforms.pz_density_closed_form(gam) - transforms.piz_density_closed_form(gam)
    pos = (gam > 0) & (gam <= 6)
    crossings = transforms.sign_changes(bracket[pos])
    return [
        _check(cfg, "q00_closed_form", "Q_00", ratio, 1e-8),
        _check(cfg, "q_raw_ratio_sqrt2pi", "raw/Q_00 = sqrt(2pi)", raw, 1e-8),
        _check(cfg, "parseval_l012", "int |Q_l0|^2 = 1", parseval, 1e-6),
        _check(cfg, "piz_density_integral", "|Q_00|^2/a0",
               abs(transforms.pi_z_density(hydrogen.ground_state(), grid).normalization - 1), 1e-6),
        _check(cfg, "fig2_odd", "gamma (pz - Pi_z) odd", np.abs(v + v[::-1]).max(), 0.0),
        _check(cfg, "fig2_zero_at_origin", "value 0 at gamma=0", abs(combined.at(0.0)), 0.0),
        _check(cfg, "fig2_symmetric_sum", "zero mean", abs(v.sum()), 1e-12),
        _check(cfg, "fig2_bracket_integral", "int (pz - Pi_z) = 0", abs(np.trapezoid(bracket, gam)), 1e-8),
        # sign changes of the signed curve must sit at the crossings of the two densities
        _check(cfg, "fig2_sign_changes_at_crossings", "zeros at density crossings",
               abs(transforms.sign_changes(v[pos]) - crossings), 0.0),
    ]


SUITES = {
    "angular": angular_suite,
    "operators": operator_suite,
    "identities": identity_suite,
    "hydrogen": hydrogen_suite,
    "transforms": transform_suite,
}


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("RADMOM_THREADS", "")))
    except ValueError:
        return min(len(SUITES), os.cpu_count() or 1)


def run_all(cfg: SuiteConfig) -> list[CheckResult]:
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        futures = [pool.submit(fn, cfg) for fn in SUITES.values()]
        return [res for fut in futures for res in fut.result()]
