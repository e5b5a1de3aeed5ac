"""Hydrogen bound states (n <= 3) and their momentum-space distributions.

Lengths are in units of the Bohr radius ``a0`` unless given explicitly;
momenta in units of b = hbar / a0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial.laguerre import laggauss
from scipy import integrate

from .angular import BasisIndex, eval_ylm
from .errors import InvalidArgumentError, UnsupportedStateError

HBAR = 1.0
N_MAX = 3
LAGUERRE_NODES = 64
# the integrand of a state with principal number n is below 1e-14 beyond this many n a0
EXTENT_IN_N_A0 = 32.0


def _radial_coefficients(n: int, l: int) -> tuple[float, list[float]]:
    """Prefactor and polynomial coefficients in rho = r / a0 of R_nl (times a0^{3/2})."""
    table = {
        (1, 0): (2.0, [1.0]),
        (2, 0): (1 / np.sqrt(2), [1.0, -1 / 2]),
        (2, 1): (1 / (2 * np.sqrt(6)), [0.0, 1.0]),
        (3, 0): (2 / (3 * np.sqrt(3)), [1.0, -2 / 3, 2 / 27]),
        (3, 1): (8 / (27 * np.sqrt(6)), [0.0, 1.0, -1 / 6]),
        (3, 2): (4 / (81 * np.sqrt(30)), [0.0, 0.0, 1.0]),
    }
    return table[(n, l)]


@dataclass(frozen=True)
class RadialGrid:
    """Gauss-Laguerre rule for integrals of g(r) r^2 dr on [0, inf).

    The rule is exact for g(r) = exp(-r / scale) * polynomial of degree
    <= 2 n_nodes - 3.
    """

    n_nodes: int = LAGUERRE_NODES
    scale: float = 0.5

    @cached_property
    def _rule(self) -> tuple[np.ndarray, np.ndarray]:
        x, w = laggauss(self.n_nodes)
        r = self.scale * x
        weights = w * np.exp(x) * x ** 2 * self.scale ** 3
        return r, weights

    @property
    def nodes(self) -> np.ndarray:
        return self._rule[0]

    @property
    def weights(self) -> np.ndarray:
        return self._rule[1]

    def integrate(self, g) -> float:
        """Sum of weights times ``g(nodes)``; ``g`` is a callable or an array of samples."""
        vals = g(self.nodes) if callable(g) else np.asarray(g)
        return np.sum(self.weights * vals, axis=-1)


@dataclass(frozen=True)
class HydrogenState:
    n: int
    l: int = 0
    m: int = 0
    a0: float = 1.0

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.l < self.n or abs(self.m) > self.l:
            raise InvalidArgumentError(f"invalid quantum numbers (n={self.n}, l={self.l}, m={self.m})")
        if self.n > N_MAX:
            raise UnsupportedStateError(f"only n <= {N_MAX} is tabulated, got n={self.n}")
        if self.a0 <= 0:
            raise InvalidArgumentError(f"Bohr radius must be positive, got {self.a0}")

    def radial(self, r):
        """R_nl(r), normalized so that int R^2 r^2 dr = 1."""
        pref, coeffs = _radial_coefficients(self.n, self.l)
        rho = np.asarray(r, dtype=float) / self.a0
        poly = np.polynomial.polynomial.polyval(rho, coeffs)
        return pref * self.a0 ** -1.5 * poly * np.exp(-rho / self.n)

    def radial_grid(self, n_nodes: int = LAGUERRE_NODES) -> RadialGrid:
        """Rule whose weight matches R_nl^2, i.e. exp(-2 r / (n a0))."""
        return RadialGrid(n_nodes, self.n * self.a0 / 2)

    def radial_times_r_scalar(self):
        """Plain-float callable r -> r R_nl(r) for scalar adaptive quadrature."""
        pref, coeffs = _radial_coefficients(self.n, self.l)
        pref *= self.a0 ** -1.5
        a0, n = self.a0, self.n

        def f(r):
            rho = r / a0
            poly = 0.0
            for c in reversed(coeffs):
                poly = poly * rho + c
            return pref * poly * math.exp(-rho / n) * r

        return f

    @property
    def extent(self) -> float:
        return EXTENT_IN_N_A0 * self.n * self.a0


def ground_state(a0: float = 1.0) -> HydrogenState:
    return HydrogenState(1, 0, 0, a0)


def psi_value(s: HydrogenState, r, theta, phi):
    """psi_nlm(r, theta, phi) = R_nl(r) Y_lm(theta, phi)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidArgumentError("r must be non-negative")
    return s.radial(r) * eval_ylm(BasisIndex(s.l, s.m), theta, phi)


def radial_norm(s: HydrogenState) -> float:
    return float(s.radial_grid().integrate(lambda r: s.radial(r) ** 2))


def expectation_inverse_r(s: HydrogenState) -> float:
    """<1/r> = int R_nl^2 r dr."""
    return float(s.radial_grid().integrate(lambda r: s.radial(r) ** 2 / r))


def _require_s_wave(s: HydrogenState):
    if s.l != 0:
        raise UnsupportedStateError("momentum distributions are implemented for l = 0 states only")


def radial_transform(s: HydrogenState, p, hbar: float = HBAR) -> np.ndarray:
    """int R_n0(r) j0(p r / hbar) r^2 dr for each momentum in ``p``.

    Gauss-Laguerre while the oscillation is resolved by the nodes; beyond that
    an adaptive Fourier-sine quadrature (QUADPACK QAWF).
    """
    _require_s_wave(s)
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p < 0):
        raise InvalidArgumentError("momentum magnitude must be non-negative")
    k = p / hbar
    grid = RadialGrid(LAGUERRE_NODES, s.n * s.a0)
    out = np.empty_like(k)
    resolved = k * s.extent <= LAGUERRE_NODES
    if np.any(resolved):
        r = grid.nodes
        j0 = np.sinc(np.outer(k[resolved], r) / np.pi)
        out[resolved] = j0 @ (grid.weights * s.radial(r))
    f = s.radial_times_r_scalar()
    for i in np.nonzero(~resolved)[0]:
        val, _ = integrate.quad(f, 0, np.inf, weight="sin", wvar=k[i])
        out[i] = val / k[i]
    return out


def fourier_prefactor(hbar: float = HBAR) -> float:
    """(2 pi hbar)^{-3/2} sqrt(4 pi): the l = 0 plane-wave prefactor."""
    return np.sqrt(4 * np.pi) * (2 * np.pi * hbar) ** -1.5


_NORM_CACHE: dict[tuple, float] = {}


def amplitude_normalization(s: HydrogenState, hbar: float = HBAR) -> float:
    """Constant N with int |N I(p)|^2 4 pi p^2 dp = 1, found by quadrature."""
    _require_s_wave(s)
    key = (s.n, s.a0, hbar)
    if key not in _NORM_CACHE:
        b = hbar / s.a0

        def integrand(t):
            # p = b tan(t) maps [0, pi/2) onto [0, inf)
            p = b * np.tan(t)
            return 4 * np.pi * p ** 2 * radial_transform(s, p, hbar)[0] ** 2 * b / np.cos(t) ** 2

        total, _ = integrate.quad(integrand, 0, np.pi / 2, epsabs=0, epsrel=1e-13, limit=200)
        _NORM_CACHE[key] = 1 / np.sqrt(total)
    return _NORM_CACHE[key]


def momentum_amplitude(s: HydrogenState, p, hbar: float = HBAR):
    """c(p) = N int R_n0(r) j0(p r / hbar) r^2 dr, unit-normalized over d^3p."""
    val = amplitude_normalization(s, hbar) * radial_transform(s, p, hbar)
    return val[0] if np.ndim(p) == 0 else val


def momentum_amplitude_closed_form(p, a0: float = 1.0, hbar: float = HBAR):
    """Ground-state amplitude 2^{3/2} b^{5/2} / (pi (p^2 + b^2)^2), b = hbar / a0."""
    b = hbar / a0
    p = np.asarray(p, dtype=float)
    return 2 ** 1.5 * b ** 2.5 / (np.pi * (p ** 2 + b ** 2) ** 2)


def marginal_pz_closed_form(pz, a0: float = 1.0, hbar: float = HBAR):
    """Ground-state z-marginal (8 b^5 / 3 pi) / (b^2 + pz^2)^3."""
    b = hbar / a0
    pz = np.asarray(pz, dtype=float)
    return 8 * b ** 5 / (3 * np.pi * (b ** 2 + pz ** 2) ** 3)


_GL_SEGMENT = np.polynomial.legendre.leggauss(8)


def _segment_nodes(lo: np.ndarray, hi: np.ndarray, max_len: float):
    """Gauss-Legendre nodes and weights covering each [lo_i, hi_i], split into pieces <= max_len."""
    x, w = _GL_SEGMENT
    nodes, weights, owner = [], [], []
    for i, (a, c) in enumerate(zip(lo, hi)):
        pieces = max(1, int(np.ceil((c - a) / max_len)))
        edges = np.linspace(a, c, pieces + 1)
        for e0, e1 in zip(edges[:-1], edges[1:]):
            half = (e1 - e0) / 2
            nodes.append(e0 + half * (x + 1))
            weights.append(half * w)
            owner.append(np.full(x.size, i))
    return np.concatenate(nodes), np.concatenate(weights), np.concatenate(owner)


def marginal_pz(s: HydrogenState, pz_grid, hbar: float = HBAR):
    """Distribution of p_z: 2 pi int_{|pz|}^inf |c(p)|^2 p dp at each grid point.

    Returned as a DistributionCurve over ``pz_grid``.
    """
    from .transforms import DistributionCurve

    _require_s_wave(s)
    pz = np.asarray(pz_grid, dtype=float)
    b = hbar / s.a0
    u = np.unique(np.abs(pz))
    norm = amplitude_normalization(s, hbar)

    def density(p):
        return (norm * radial_transform(s, p, hbar)) ** 2 * p

    # pieces between consecutive |pz| values, accumulated from the top down
    nodes, weights, owner = _segment_nodes(u[:-1], u[1:], 0.25 * b)
    seg = np.zeros(u.size)
    if nodes.size:
        np.add.at(seg, owner, weights * density(nodes))
    top = u[-1]
    tail, _ = integrate.quad(lambda p: density(np.array([p]))[0], top, np.inf,
                             epsabs=1e-16, epsrel=1e-10, limit=200)
    cumulative = np.empty(u.size)
    cumulative[-1] = tail
    cumulative[:-1] = tail + np.cumsum(seg[:-1][::-1])[::-1]
    values = 2 * np.pi * cumulative[np.searchsorted(u, np.abs(pz))]
    return DistributionCurve(pz, values, "density", label="pz")
