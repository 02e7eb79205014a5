"""Wigner matrices, Haar quadrature and the carrier spaces H_s on SU(2).

Spins are floats that are integer multiples of 1/2. Matrix indices run over
m = j, j-1, ..., -j. A carrier state of weight s is a finite combination of
the basis functions

    phi_{jm}(x) = D^j_{s m}(x^-1),   |s| <= j <= j_max,

which satisfy phi(x h_w) = exp(i s w) phi(x) for h_w = exp(w J3), that is
pi_s(h_w) = exp(-i s w).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .groups import su2_exp, su2_inverse, su2_matrix, su2_mul

J_CAP = 6


def _twice(j: float) -> int:
    t = round(2 * j)
    if abs(2 * j - t) > 1e-12 or t < 0:
        raise ValueError(f"{j} is not a non-negative half-integer")
    return t


def spins(j_lo: float, j_hi: float) -> list[float]:
    return [t / 2 for t in range(_twice(j_lo), _twice(j_hi) + 1, 2)]


def m_values(j: float) -> np.ndarray:
    return j - np.arange(_twice(j) + 1)


@lru_cache(maxsize=None)
def spin_matrices(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hermitian S1, S2, S3 for spin j (S3 diagonal, ladder S+ and S-)."""
    m = m_values(j)
    d = len(m)
    plus = np.zeros((d, d))
    for i in range(1, d):
        mm = m[i]
        plus[i - 1, i] = np.sqrt(j * (j + 1) - mm * (mm + 1))
    minus = plus.T
    s1 = (plus + minus) / 2
    s2 = (plus - minus) / 2j
    s3 = np.diag(m).astype(complex)
    return s1.astype(complex), s2, s3


def generator_matrix(j: float, a: int) -> np.ndarray:
    """Spin-j image of J_a, namely -i S_a."""
    return -1j * spin_matrices(j)[a]


@lru_cache(maxsize=None)
def _s2_eigen(j: float) -> tuple[np.ndarray, np.ndarray]:
    return np.linalg.eigh(spin_matrices(j)[1])


def small_d(j: float, beta: np.ndarray) -> np.ndarray:
    """exp(-i beta S2), real, for an array of angles."""
    vals, vecs = _s2_eigen(j)
    beta = np.asarray(beta, dtype=float)
    phase = np.exp(-1j * beta[..., None] * vals)
    return np.einsum("ik,...k,jk->...ij", vecs, phase, vecs.conj()).real


def euler_angles(u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(alpha, beta, gamma) with u = exp(alpha J3) exp(beta J2) exp(gamma J3)."""
    U = su2_matrix(np.asarray(u, dtype=float))
    a, b = U[..., 0, 0], U[..., 0, 1]
    beta = 2 * np.arctan2(np.abs(b), np.abs(a))
    arg_a, arg_mb = np.angle(a), np.angle(-b)
    return -arg_a - arg_mb, beta, -arg_a + arg_mb


def euler_to_su2(alpha, beta, gamma) -> np.ndarray:
    z = np.array([0.0, 0.0, 1.0])
    y = np.array([0.0, 1.0, 0.0])
    alpha, beta, gamma = (np.asarray(t, dtype=float)[..., None] for t in (alpha, beta, gamma))
    return su2_mul(su2_mul(su2_exp(alpha * z), su2_exp(beta * y)), su2_exp(gamma * z))


def wigner_from_euler(j: float, alpha, beta, gamma) -> np.ndarray:
    m = m_values(j)
    left = np.exp(-1j * np.asarray(alpha)[..., None] * m)
    right = np.exp(-1j * np.asarray(gamma)[..., None] * m)
    return left[..., :, None] * small_d(j, beta) * right[..., None, :]


def wigner_matrix(j: float, u: np.ndarray, j_cap: float = J_CAP) -> np.ndarray:
    """D^j(u) for one element or a batch of shape (..., 4)."""
    if j > j_cap:
        raise ValueError(f"spin {j} exceeds j_cap = {j_cap}")
    return wigner_from_euler(j, *euler_angles(u))


# ---------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class GroupGrid:
    """Product rule for normalised Haar measure on SU(2).

    Trapezoid nodes in alpha on [0, 2pi) and gamma on [0, 4pi), Gauss-Legendre
    in cos(beta). Integrates every D^J_{MN} with J <= band_limit exactly.
    """

    band_limit: int
    alpha: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, band_limit: int = 2 * J_CAP, orders: tuple[int, int, int] | None = None) -> GroupGrid:
        n_a, n_b, n_g = orders or (2 * band_limit + 2, band_limit + 1, 2 * band_limit + 2)
        a = 2 * np.pi * np.arange(n_a) / n_a
        g = 4 * np.pi * np.arange(n_g) / n_g
        x, wb = np.polynomial.legendre.leggauss(n_b)
        b = np.arccos(x)
        A, B, G = np.meshgrid(a, b, g, indexing="ij")
        W = np.broadcast_to(wb[None, :, None] / (2 * n_a * n_g), A.shape)
        return cls(band_limit, A.ravel(), B.ravel(), G.ravel(), W.ravel().copy())

    @property
    def size(self) -> int:
        return len(self.weights)

    @cached_property
    def elements(self) -> np.ndarray:
        return euler_to_su2(self.alpha, self.beta, self.gamma)

    def wigner(self, j: float) -> np.ndarray:
        return wigner_from_euler(j, self.alpha, self.beta, self.gamma)


@lru_cache(maxsize=8)
def cached_grid(band_limit: int = 2 * J_CAP) -> GroupGrid:
    return GroupGrid.build(band_limit)


def haar_integrate(f, grid: GroupGrid) -> complex:
    """Normalised Haar integral of a function vectorised over (N, 4) arrays."""
    return complex(np.sum(grid.weights * np.asarray(f(grid.elements))))


# ---------------------------------------------------------------- carrier states


@dataclass(frozen=True)
class CarrierState:
    s: float
    j_max: float
    coeffs: np.ndarray

    def __post_init__(self):
        if _twice(self.j_max) < _twice(abs(self.s)) or (_twice(self.j_max) - _twice(abs(self.s))) % 2:
            raise ValueError("j_max must be |s| plus a non-negative integer")
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.shape != (carrier_dim(self.s, self.j_max),):
            raise ValueError(f"expected {carrier_dim(self.s, self.j_max)} coefficients, got {self.coeffs.shape}")

    @property
    def spins(self) -> list[float]:
        return spins(abs(self.s), self.j_max)

    def blocks(self) -> list[tuple[float, np.ndarray]]:
        out, start = [], 0
        for j in self.spins:
            d = _twice(j) + 1
            out.append((j, self.coeffs[start : start + d]))
            start += d
        return out

    @classmethod
    def from_blocks(cls, s: float, j_max: float, blocks) -> CarrierState:
        return cls(s, j_max, np.concatenate([np.asarray(b, dtype=complex) for b in blocks]))

    @classmethod
    def basis(cls, s: float, j_max: float, j: float, m: float) -> CarrierState:
        c = np.zeros(carrier_dim(s, j_max), dtype=complex)
        start = 0
        for jj in spins(abs(s), j_max):
            if abs(jj - j) < 1e-12:
                c[start + round(jj - m)] = 1.0
                return cls(s, j_max, c)
            start += _twice(jj) + 1
        raise ValueError(f"no basis state (j={j}, m={m}) in H_{s} up to {j_max}")

    @classmethod
    def random(cls, s: float, j_max: float, rng: np.random.Generator, normalise: bool = True) -> CarrierState:
        n = carrier_dim(s, j_max)
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        state = cls(s, j_max, c)
        return state.scaled(1 / state.norm()) if normalise else state

    def norm(self) -> float:
        """L2 norm under normalised Haar measure."""
        return float(np.sqrt(sum(np.sum(np.abs(c) ** 2) / (2 * j + 1) for j, c in self.blocks())))

    def scaled(self, c: complex) -> CarrierState:
        return CarrierState(self.s, self.j_max, c * self.coeffs)

    def __add__(self, other: CarrierState) -> CarrierState:
        a, b = _common(self, other)
        return CarrierState(a.s, a.j_max, a.coeffs + b.coeffs)

    def __sub__(self, other: CarrierState) -> CarrierState:
        return self + other.scaled(-1)

    def extended(self, j_max: float) -> CarrierState:
        pad = carrier_dim(self.s, j_max) - len(self.coeffs)
        if pad < 0:
            raise ValueError("cannot shrink a state")
        return CarrierState(self.s, j_max, np.concatenate([self.coeffs, np.zeros(pad, complex)]))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return evaluate_state(self, x)


def _common(a: CarrierState, b: CarrierState) -> tuple[CarrierState, CarrierState]:
    if a.s != b.s:
        raise ValueError("states of different weight")
    j = max(a.j_max, b.j_max)
    return a.extended(j), b.extended(j)


def carrier_dim(s: float, j_max: float) -> int:
    return sum(_twice(j) + 1 for j in spins(abs(s), j_max))


def basis_row(j: float, s: float, x: np.ndarray) -> np.ndarray:
    """phi_{jm}(x) = D^j_{s m}(x^-1) for all m, shape (..., 2j+1)."""
    D = wigner_matrix(j, su2_inverse(np.asarray(x, dtype=float)), j_cap=np.inf)
    return D[..., round(j - s), :]


def evaluate_state(phi: CarrierState, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1], dtype=complex)
    for j, c in phi.blocks():
        out = out + basis_row(j, phi.s, x) @ c
    return out if out.ndim else complex(out)


def left_translate(phi: CarrierState, w: np.ndarray) -> CarrierState:
    """x -> phi(w^-1 x)."""
    return CarrierState.from_blocks(
        phi.s, phi.j_max, [wigner_matrix(j, w, j_cap=np.inf) @ c for j, c in phi.blocks()]
    )


def angular_momentum_apply(a: int, phi: CarrierState) -> CarrierState:
    """(J_a phi)(x) = d/dt phi(exp(t J_a) x) at t = 0, with a in {1, 2, 3}."""
    return CarrierState.from_blocks(
        phi.s, phi.j_max, [1j * spin_matrices(j)[a - 1] @ c for j, c in phi.blocks()]
    )


def angular_momentum_matrix(a: int, s: float, j_max: float) -> np.ndarray:
    cols = []
    n = carrier_dim(s, j_max)
    for k in range(n):
        e = np.zeros(n, complex)
        e[k] = 1
        cols.append(angular_momentum_apply(a, CarrierState(s, j_max, e)).coeffs)
    return np.stack(cols, axis=1)


class TruncationLoss(ValueError):
    def __init__(self, residual: float):
        super().__init__(f"projection onto the truncated carrier space lost {residual:.3e} in L2 norm")
        self.residual = residual


def project_state(func, s: float, j_max: float, grid: GroupGrid) -> tuple[CarrierState, float]:
    """Orthogonal projection of a function on SU(2) onto the span of phi_{jm}.

    ``func`` must accept an (N, 4) array. Returns the projected state and
    the L2 norm of what was dropped, both computed by quadrature; exact
    when the integrands stay within the grid band limit.
    """
    x = grid.elements
    values = np.asarray(func(x), dtype=complex)
    blocks = []
    for j in spins(abs(s), j_max):
        rows = basis_row(j, s, x)
        blocks.append((2 * j + 1) * np.einsum("n,nm,n->m", grid.weights, rows.conj(), values))
    state = CarrierState.from_blocks(s, j_max, blocks)
    diff = values - evaluate_state(state, x)
    return state, float(np.sqrt(np.sum(grid.weights * np.abs(diff) ** 2)))
