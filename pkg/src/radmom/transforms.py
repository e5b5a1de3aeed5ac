"""Expansion coefficients in the continuum eigenbasis of r Pi_z and the z-distributions.

With u = ln tan(theta/2) one has sin(theta) = sech(u), cos(theta) = -tanh(u)
and d(theta) = sech(u) du, so the projection of Y_l0 onto the eigenfunction
with eigenvalue gamma hbar becomes a Fourier integral over the real line

    raw(l, gamma) = sqrt(2 pi) * int Theta_l0(theta(u)) sech(u) exp(i gamma u) du.

The coefficients are reported divided by sqrt(2 pi), the scale for which
int |Q_l0(gamma)|^2 d(gamma) = 1 and for which Q_00 = (sqrt(pi)/2) sech(pi gamma / 2).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angular import theta_part
from .errors import AccuracyError, InvalidArgumentError, UnsupportedStateError
from .hydrogen import HydrogenState, expectation_inverse_r

U_CUTOFF = 40.0
MAX_SPACING = 0.05
MAX_L = 100
RAW_TO_NORMALIZED = np.sqrt(2 * np.pi)


@dataclass(frozen=True)
class GammaGrid:
    """Uniform grid k * spacing, k = -K..K; symmetric bit for bit and containing 0."""

    half_range: float = 40.0
    n_points: int = 1601

    def __post_init__(self):
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise InvalidArgumentError(f"gamma grid needs an odd number of points >= 3, got {self.n_points}")
        if self.half_range <= 0:
            raise InvalidArgumentError(f"half range must be positive, got {self.half_range}")

    @property
    def spacing(self) -> float:
        return self.half_range / (self.n_points // 2)

    @property
    def values(self) -> np.ndarray:
        k = np.arange(-(self.n_points // 2), self.n_points // 2 + 1)
        return k * self.spacing


@dataclass(frozen=True, eq=False)
class DistributionCurve:
    """Sampled curve; ``kind`` is "density" (non-negative) or "signed"."""

    grid: np.ndarray
    values: np.ndarray
    kind: str = "density"
    label: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.shape != values.shape or grid.ndim != 1:
            raise InvalidArgumentError("grid and values must be 1-d arrays of equal length")
        if self.kind not in ("density", "signed"):
            raise InvalidArgumentError(f"unknown curve kind {self.kind!r}")
        if self.kind == "density" and np.any(values < 0):
            raise InvalidArgumentError("density values must be non-negative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def normalization(self) -> float:
        """Trapezoid integral of the values over the grid."""
        return float(np.trapezoid(self.values, self.grid))

    def at(self, x: float) -> float:
        i = np.flatnonzero(self.grid == x)
        if i.size == 0:
            raise InvalidArgumentError(f"{x} is not a grid point")
        return float(self.values[i[0]])


def _as_grid_values(grid) -> np.ndarray:
    return grid.values if isinstance(grid, GammaGrid) else np.asarray(grid, dtype=float)


def u_spacing(gamma_max: float, l: int = 0) -> float:
    """Trapezoid step in u: resolves the oscillation exp(i gamma u) and the l-th harmonic."""
    return min(MAX_SPACING, np.pi / (8 * abs(gamma_max) + 1), 2.0 / (l + 1))


def _half_line_sum(l: int, g: np.ndarray) -> np.ndarray:
    """Trapezoid value of int Theta_l0 sech(u) exp(i g u) du for non-negative ``g``.

    Theta_l0(theta(-u)) = (-1)^l Theta_l0(theta(u)), so the sum folds onto
    u >= 0 as a cosine (even l) or sine (odd l) series.
    """
    h = u_spacing(g.max() if g.size else 0.0, l)
    n = int(np.ceil(U_CUTOFF / h))
    u = np.arange(n + 1) * (U_CUTOFF / n)
    du = u[1]
    f = theta_part(l, 0, 2 * np.arctan(np.exp(u))) / np.cosh(u) * du
    f[1:] *= 2
    chunk = max(1, 4_000_000 // u.size)
    out = np.empty(g.size, dtype=complex)
    for start in range(0, g.size, chunk):
        phase = np.outer(g[start:start + chunk], u)
        if l % 2 == 0:
            out[start:start + chunk] = np.cos(phase) @ f
        else:
            out[start:start + chunk] = 1j * (np.sin(phase[:, 1:]) @ f[1:])
    return out


def q_coeff_raw(l: int, gamma):
    """Projection of Y_l0 onto the r Pi_z eigenfunctions exactly as the integral is written.

    Real-line trapezoid rule on |u| <= 40; the integrand decays like exp(-|u|).
    The step is chosen per octave of |gamma|.
    """
    if l < 0:
        raise InvalidArgumentError(f"l must be non-negative, got {l}")
    if l > MAX_L:
        raise AccuracyError(f"l={l} exceeds the resolved range l <= {MAX_L}")
    gamma = np.asarray(gamma, dtype=float)
    flat = gamma.ravel()
    # evaluate once per distinct |gamma| so that mirrored points agree bit for bit
    g, back = np.unique(np.abs(flat), return_inverse=True)
    band = np.where(g <= 1, 0, np.ceil(np.log2(np.maximum(g, 1))).astype(int))
    vals = np.empty(g.size, dtype=complex)
    for b in np.unique(band):
        sel = band == b
        vals[sel] = _half_line_sum(l, g[sel])
    out = vals[back.ravel()] * RAW_TO_NORMALIZED
    # the integrand is real times exp(i gamma u), so Q(-gamma) = conj(Q(gamma))
    out = np.where(flat < 0, np.conj(out), out).reshape(gamma.shape)
    return out[()] if out.ndim == 0 else out


def q_coeff(l: int, gamma):
    """Q_l0(gamma) on the unit-norm scale: q_coeff_raw / sqrt(2 pi)."""
    return q_coeff_raw(l, gamma) / RAW_TO_NORMALIZED


def _sech(x):
    e = np.exp(-np.abs(x))
    return 2 * e / (1 + e * e)


def q00_analytic(gamma):
    """(sqrt(pi) / 2) sech(pi gamma / 2)."""
    return np.sqrt(np.pi) / 2 * _sech(np.pi * np.asarray(gamma, dtype=float) / 2)


def pi_z_density(s: HydrogenState, grid) -> DistributionCurve:
    """Density of Pi_z per unit hbar d(gamma): |Q_00|^2 scaled by a0 <1/r>."""
    if (s.n, s.l, s.m) != (1, 0, 0):
        raise UnsupportedStateError("the Pi_z density is defined here for the ground state only")
    gamma = _as_grid_values(grid)
    scale = s.a0 * expectation_inverse_r(s)
    values = np.abs(q_coeff(0, gamma)) ** 2 * scale
    return DistributionCurve(gamma, values, "density", label="Pi_z",
                             metadata={"inverse_r_scale": scale})


def pz_density_closed_form(gamma):
    return 8 / (3 * np.pi) / (1 + np.asarray(gamma, dtype=float) ** 2) ** 3


def piz_density_closed_form(gamma):
    return np.pi / 4 * _sech(np.pi * np.asarray(gamma, dtype=float) / 2) ** 2


def combined_z_distribution(grid, pz_values=None, piz_values=None) -> DistributionCurve:
    """gamma * [pz density - Pi_z density], natural units.

    Defaults to the closed forms (8/3pi)(1+gamma^2)^-3 and (pi/4) sech^2(pi gamma/2);
    sampled densities on the same grid may be passed instead.
    """
    gamma = _as_grid_values(grid)
    pz = pz_density_closed_form(gamma) if pz_values is None else np.asarray(pz_values, dtype=float)
    piz = piz_density_closed_form(gamma) if piz_values is None else np.asarray(piz_values, dtype=float)
    return DistributionCurve(gamma, gamma * (pz - piz), "signed", label="erPr_z")


def expand_state_in_gamma(s: HydrogenState, grid) -> DistributionCurve:
    """|Q_l0(gamma)|^2 for the angular part of ``s``."""
    if s.m != 0:
        raise UnsupportedStateError("only the m = 0 sector has a well-defined gamma expansion")
    gamma = _as_grid_values(grid)
    return DistributionCurve(gamma, np.abs(q_coeff(s.l, gamma)) ** 2, "density", label=f"Q_{s.l}0")


def sign_changes(values) -> int:
    """Number of strict sign changes, ignoring exact zeros."""
    s = np.sign(np.asarray(values))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))
