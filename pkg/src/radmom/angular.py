"""Quadrature on the sphere and orthonormal spherical harmonics.

Harmonics use the Condon-Shortley phase, so that

    Y_lm(theta, phi) = Theta_lm(theta) exp(i m phi),
    conj(Y_lm) = (-1)^m Y_l,-m.

The theta part is evaluated with the usual fully normalized upward recursion
in l, seeded on the diagonal l = m.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class BasisIndex:
    l: int
    m: int

    def __post_init__(self):
        if self.l < 0 or abs(self.m) > self.l:
            raise InvalidArgumentError(f"invalid harmonic index (l={self.l}, m={self.m})")

    @property
    def flat(self) -> int:
        return self.l * (self.l + 1) + self.m

    @classmethod
    def from_flat(cls, k: int) -> "BasisIndex":
        if k < 0:
            raise InvalidArgumentError(f"negative flat index {k}")
        l = int(np.floor(np.sqrt(k)))
        return cls(l, k - l * (l + 1))


@dataclass(frozen=True)
class BasisTruncation:
    """All harmonics with l <= l_max, ordered by flat index l(l+1) + m."""

    l_max: int

    def __post_init__(self):
        if self.l_max < 0:
            raise InvalidArgumentError(f"l_max must be non-negative, got {self.l_max}")

    @property
    def dimension(self) -> int:
        return (self.l_max + 1) ** 2

    def indices(self) -> list[BasisIndex]:
        return [BasisIndex(l, m) for l in range(self.l_max + 1) for m in range(-l, l + 1)]

    @property
    def l_values(self) -> np.ndarray:
        return np.array([ix.l for ix in self.indices()])

    @property
    def m_values(self) -> np.ndarray:
        return np.array([ix.m for ix in self.indices()])

    def shell_mask(self, l_cut: int) -> np.ndarray:
        """Boolean mask of basis states with l <= l_cut."""
        return self.l_values <= l_cut


@dataclass(frozen=True)
class AngularQuadrature:
    """Gauss-Legendre in cos(theta) times a uniform rule in phi.

    ``theta_weights`` carry the measure sin(theta) d(theta), so they sum to 2.
    """

    theta_nodes: np.ndarray
    theta_weights: np.ndarray
    n_phi: int
    phi_nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "phi_nodes", 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi)

    @property
    def n_theta(self) -> int:
        return self.theta_nodes.size

    @property
    def phi_weight(self) -> float:
        return 2.0 * np.pi / self.n_phi

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_theta, self.n_phi)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid (theta, phi) of shape ``(n_theta, n_phi)``."""
        return np.meshgrid(self.theta_nodes, self.phi_nodes, indexing="ij")

    def integrate(self, values: np.ndarray) -> complex:
        values = np.asarray(values)
        if values.shape[-2:] != self.shape:
            raise InvalidArgumentError(
                f"samples of shape {values.shape} do not match quadrature grid {self.shape}"
            )
        return np.einsum("...tp,t->...", values, self.theta_weights) * self.phi_weight

    def exact_for_degree(self, degree: int) -> bool:
        """True if products of band-limited functions up to ``degree`` integrate exactly."""
        return 2 * self.n_theta - 1 >= degree and self.n_phi > degree


def build_quadrature(n_theta: int, n_phi: int) -> AngularQuadrature:
    if n_theta < 2 or n_phi < 2:
        raise InvalidArgumentError(f"quadrature needs n_theta >= 2 and n_phi >= 2, got ({n_theta}, {n_phi})")
    x, w = np.polynomial.legendre.leggauss(n_theta)
    # ascending theta
    theta = np.arccos(x[::-1])
    return AngularQuadrature(theta_nodes=theta, theta_weights=w[::-1].copy(), n_phi=n_phi)


def default_quadrature(l_max: int, n_theta: int | None = None, n_phi: int | None = None) -> AngularQuadrature:
    """Rule exact for products of three harmonics of degree <= l_max.

    n_phi = 2 l_max + 2 rather than 2 l_max + 1 so that e^{i(m - m' +/- 1) phi}
    products from the direction cosines do not alias.
    """
    return build_quadrature(n_theta or max(2, l_max + 1), n_phi or max(2, 2 * l_max + 2))


def legendre_table(l_max: int, theta) -> np.ndarray:
    """Normalized theta parts Theta_lm for 0 <= m <= l <= l_max.

    Returns an array of shape ``(l_max + 1, l_max + 1) + theta.shape`` indexed
    ``[l, m]``; entries with m > l are zero.
    """
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    s = np.sin(theta)
    out = np.zeros((l_max + 1, l_max + 1) + theta.shape)
    diag = np.full(theta.shape, 1.0 / np.sqrt(FOUR_PI))
    for m in range(l_max + 1):
        if m > 0:
            diag = -np.sqrt((2 * m + 1) / (2.0 * m)) * s * diag
        out[m, m] = diag
        if m + 1 <= l_max:
            out[m + 1, m] = np.sqrt(2 * m + 3.0) * x * diag
        for l in range(m + 2, l_max + 1):
            a = np.sqrt((4.0 * l * l - 1) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1) ** 2 - 1))
            out[l, m] = a * (x * out[l - 1, m] - b * out[l - 2, m])
    return out


def theta_part(l: int, m: int, theta, table: np.ndarray | None = None) -> np.ndarray:
    """Theta_lm(theta) for any |m| <= l, using Theta_l,-m = (-1)^m Theta_lm."""
    if table is None:
        table = legendre_table(l, theta)
    val = table[l, abs(m)]
    return (-1) ** m * val if m < 0 else val


def eval_ylm(idx: BasisIndex, theta, phi):
    """Orthonormal spherical harmonic Y_lm(theta, phi) with Condon-Shortley phase.

    >>> round(float(eval_ylm(BasisIndex(0, 0), 0.3, 1.0).real), 7)
    0.2820948
    """
    if not isinstance(idx, BasisIndex):
        idx = BasisIndex(*idx)
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(theta > np.pi):
        raise InvalidArgumentError("theta must lie in [0, pi]")
    val = theta_part(idx.l, idx.m, theta) * np.exp(1j * idx.m * np.asarray(phi, dtype=float))
    return val[()] if np.ndim(val) == 0 else val


def theta_table(basis: BasisTruncation, theta) -> np.ndarray:
    """Theta_lm for every basis state, shape ``(dimension,) + theta.shape``."""
    theta = np.asarray(theta, dtype=float)
    table = legendre_table(basis.l_max, theta)
    rows = [theta_part(ix.l, ix.m, theta, table) for ix in basis.indices()]
    return np.array(rows)


def harmonics_on_grid(basis: BasisTruncation, q: AngularQuadrature) -> np.ndarray:
    """All Y_lm of ``basis`` sampled on the quadrature grid, shape ``(dim, n_theta, n_phi)``."""
    th = theta_table(basis, q.theta_nodes)
    phase = np.exp(1j * np.outer(basis.m_values, q.phi_nodes))
    return th[:, :, None] * phase[:, None, :]


def inner_product(f, g, q: AngularQuadrature) -> complex:
    """<f, g> = sum w_theta (2 pi / n_phi) conj(f) g over the grid of ``q``."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != q.shape or g.shape != q.shape:
        raise InvalidArgumentError(
            f"sampled functions {f.shape}, {g.shape} do not match quadrature grid {q.shape}"
        )
    return complex(q.integrate(np.conj(f) * g))


def gram_matrix(basis: BasisTruncation, q: AngularQuadrature) -> np.ndarray:
    """Matrix of inner products <Y_a, Y_b> for all basis pairs."""
    y = harmonics_on_grid(basis, q)
    weighted = y * q.theta_weights[None, :, None] * q.phi_weight
    return np.einsum("atp,btp->ab", np.conj(y), weighted)
