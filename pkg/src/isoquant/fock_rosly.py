"""The Fock-Rosly bracket on ISO(3)~ (genus 0, one marked point).

Points are written in the chart (p, j) -> exp_star(p, j), and observables
are functions of the six coordinates ``z = (p1, p2, p3, j1, j2, j3)``.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import product
from typing import Callable, NamedTuple

import numpy as np

from .groups import adjoint_matrix, su2_exp
from .lie import EPS

CHART_MARGIN = 1e-6
COORDS = ("p1", "p2", "p3", "j1", "j2", "j3")


class ChartSingular(ValueError):
    """|p| too close to 0 or 2pi for the planar inverse of 1 - Ad(u)."""


class PhasePoint(NamedTuple):
    p: np.ndarray
    j: np.ndarray

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.p, float), np.asarray(self.j, float)])

    @classmethod
    def from_z(cls, z) -> PhasePoint:
        z = np.asarray(z, dtype=float)
        return cls(z[:3], z[3:])


# ---------------------------------------------------------------- observables


class Observable:
    """A function of (p, j) together with its gradient in R^6."""

    def __init__(self, value: Callable[[np.ndarray], float], gradient: Callable[[np.ndarray], np.ndarray] | None = None, h: float = 1e-5):
        self._value = value
        self._gradient = gradient
        self.h = h

    def __call__(self, point) -> float:
        return self._value(_z(point))

    def gradient(self, point) -> np.ndarray:
        z = _z(point)
        if self._gradient is not None:
            return np.asarray(self._gradient(z), dtype=float)
        return central_gradient(self._value, z, self.h)


def _z(point) -> np.ndarray:
    return point.z if isinstance(point, PhasePoint) else np.asarray(point, dtype=float)


def central_gradient(f: Callable[[np.ndarray], float], z: np.ndarray, h: float) -> np.ndarray:
    out = np.empty(len(z))
    for i in range(len(z)):
        e = np.zeros(len(z))
        e[i] = h
        out[i] = (f(z + e) - f(z - e)) / (2 * h)
    return out


def richardson_gradient(f: Callable[[np.ndarray], float], z: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """Central differences at h and h/2 combined to fourth order."""
    return (4 * central_gradient(f, z, h / 2) - central_gradient(f, z, h)) / 3


class Polynomial(Observable):
    """Polynomial in (p, j) stored as {exponent tuple: coefficient}."""

    def __init__(self, terms: dict[tuple[int, ...], float] | None = None):
        self.terms = {k: float(v) for k, v in (terms or {}).items() if v != 0}
        super().__init__(self._eval, self._grad)

    @classmethod
    def coordinate(cls, name: str | int) -> Polynomial:
        i = COORDS.index(name) if isinstance(name, str) else name
        e = [0] * 6
        e[i] = 1
        return cls({tuple(e): 1.0})

    @classmethod
    def constant(cls, c: float) -> Polynomial:
        return cls({(0,) * 6: c})

    @classmethod
    def random(cls, rng: np.random.Generator, degree: int = 2, density: float = 0.5) -> Polynomial:
        terms = {}
        for e in product(range(degree + 1), repeat=6):
            if 0 < sum(e) <= degree and rng.random() < density:
                terms[e] = rng.standard_normal()
        return cls(terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _eval(self, z: np.ndarray) -> float:
        return float(sum(c * np.prod(z ** np.array(e)) for e, c in self.terms.items()))

    def derivative(self, i: int) -> Polynomial:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = out.get(tuple(d), 0.0) + c * e[i]
        return Polynomial(out)

    def _grad(self, z: np.ndarray) -> np.ndarray:
        return np.array([self.derivative(i)._eval(z) for i in range(6)])

    def __add__(self, other: Polynomial) -> Polynomial:
        out = defaultdict(float, self.terms)
        for e, c in other.terms.items():
            out[e] += c
        return Polynomial(out)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + other.scale(-1.0)

    def scale(self, c: float) -> Polynomial:
        return Polynomial({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: Polynomial) -> Polynomial:
        out = defaultdict(float)
        for (e1, c1), (e2, c2) in product(self.terms.items(), other.terms.items()):
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return Polynomial(out)

    def __repr__(self) -> str:
        return f"Polynomial({self.terms})"


def coordinate_functions() -> dict[str, Polynomial]:
    return {name: Polynomial.coordinate(name) for name in COORDS}


def mass_casimir() -> Polynomial:
    c = coordinate_functions()
    return c["p1"] * c["p1"] + c["p2"] * c["p2"] + c["p3"] * c["p3"]


def spin_casimir() -> Polynomial:
    c = coordinate_functions()
    return c["p1"] * c["j1"] + c["p2"] * c["j2"] + c["p3"] * c["j3"]


# ---------------------------------------------------------------- vector fields


def _cross_matrix(p: np.ndarray) -> np.ndarray:
    """K with (K g)_b = eps_bcd p_c g_d."""
    return np.einsum("bcd,c->bd", EPS, p)


def _planar_inverse(m: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Inverse of m restricted to the plane orthogonal to the unit vector n."""
    e1 = np.cross(n, np.eye(3)[np.argmin(np.abs(n))])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    basis = np.stack([e1, e2], axis=1)
    return basis @ np.linalg.inv(basis.T @ m @ basis) @ basis.T


def vector_field_matrix(point: PhasePoint, which: str, axial: bool = False) -> np.ndarray:
    """3x6 matrix whose row a holds the (d/dp, d/dj) coefficients of X_a.

    ``which`` is one of ``"JL", "PL", "JR", "PR"``. The rotation fields
    carry the planar operators Ad(u)/(1 - Ad(u)) and 1/(Ad(u) - 1) on the
    plane orthogonal to p. With ``axial=True`` the component along p is
    added as well, which makes J^L and J^R the exact generators of the
    left and right group actions in this chart; the axial pieces cancel in
    the Fock-Rosly combination.
    """
    p = np.asarray(point.p, dtype=float)
    j = np.asarray(point.j, dtype=float)
    u = su2_exp(p)
    ad_u = adjoint_matrix(u)
    out = np.zeros((3, 6))
    if which == "PR":
        out[:, 3:] = np.eye(3)
        return out
    if which == "PL":
        out[:, 3:] = -ad_u
        return out
    if which not in ("JL", "JR"):
        raise ValueError(f"unknown vector field {which!r}")

    mu = np.linalg.norm(p)
    if mu < CHART_MARGIN or abs(mu - 2 * np.pi) < CHART_MARGIN or mu > 2 * np.pi:
        raise ChartSingular(f"|p| = {mu} outside the chart domain (0, 2pi)")
    n = p / mu
    K = _cross_matrix(p)
    inv = _planar_inverse(ad_u - np.eye(3), n)
    if which == "JR":
        out[:, :3] = inv @ K
        out[:, 3:] = -np.einsum("abc,b->ac", EPS, j)
        sign = 1.0
    else:
        out[:, :3] = -ad_u @ inv @ K
        sign = -1.0
    if axial:
        out[:, :3] += sign * np.outer(n, n)
    return out


def apply_field(point: PhasePoint, which: str, f: Observable) -> np.ndarray:
    """The three numbers X_a f at the point."""
    return vector_field_matrix(point, which) @ f.gradient(point)


# ---------------------------------------------------------------- brackets


def fr_bracket_vf(f1: Observable, f2: Observable, point: PhasePoint) -> float:
    """Fock-Rosly bracket from the left/right vector fields and r = P_a (x) J_a."""
    X = {w: vector_field_matrix(point, w) for w in ("JL", "PL", "JR", "PR")}
    g1, g2 = f1.gradient(point), f2.gradient(point)
    a = {w: m @ g1 for w, m in X.items()}
    b = {w: m @ g2 for w, m in X.items()}
    sym = a["PR"] @ b["JR"] + a["PL"] @ b["JL"] - a["JR"] @ b["PR"] - a["JL"] @ b["PL"]
    return float(0.5 * sym + a["PR"] @ b["JL"] - a["JL"] @ b["PR"])


def _coord_form(g1: np.ndarray, g2: np.ndarray, z: np.ndarray) -> float:
    p, j = z[:3], z[3:]
    gp1, gj1, gp2, gj2 = g1[:3], g1[3:], g2[:3], g2[3:]
    return float(
        np.einsum("abc,a,b,c->", EPS, gp1, gj2, p)
        + np.einsum("abc,a,b,c->", EPS, gj1, gp2, p)
        + np.einsum("abc,a,b,c->", EPS, gj1, gj2, j)
    )


def fr_bracket_coord(f1: Observable, f2: Observable, point) -> float:
    """eps_abc (d_pa f1 d_jb f2 p_c + d_ja f1 d_pb f2 p_c + d_ja f1 d_jb f2 j_c)."""
    z = _z(point)
    return _coord_form(f1.gradient(z), f2.gradient(z), z)


def fr_bracket_coord_as_printed(f1: Observable, f2: Observable, point) -> float:
    """The coordinate form with f1 in both slots of the j-j term, as typeset
    in the source formula. Kept to show that it cannot give {j1, j2} = j3."""
    z = _z(point)
    g1, g2 = f1.gradient(z), f2.gradient(z)
    p, j = z[:3], z[3:]
    return float(
        np.einsum("abc,a,b,c->", EPS, g1[:3], g2[3:], p)
        + np.einsum("abc,a,b,c->", EPS, g1[3:], g2[:3], p)
        + np.einsum("abc,a,b,c->", EPS, g1[3:], g1[3:], j)
    )


def poisson_tensor(point) -> np.ndarray:
    """6x6 matrix of {z_i, z_k} for the Lie-Poisson structure on iso(3)*."""
    z = _z(point)
    p, j = z[:3], z[3:]
    pi = np.zeros((6, 6))
    pi[3:, 3:] = np.einsum("abc,c->ab", EPS, j)
    pi[3:, :3] = np.einsum("abc,c->ab", EPS, p)
    pi[:3, 3:] = -pi[3:, :3].T
    return pi


def kk_bracket(f1: Observable, f2: Observable, point) -> float:
    """Kostant-Kirillov bracket via the chain rule on {j,j} = eps j, {j,p} = eps p."""
    z = _z(point)
    return float(f1.gradient(z) @ poisson_tensor(z) @ f2.gradient(z))


Bracket = Callable[[Observable, Observable, object], float]


def poly_bracket(f1: Polynomial, f2: Polynomial) -> Polynomial:
    """Exact polynomial of {f1, f2} under the coordinate form."""
    c = coordinate_functions()
    zs = [c[n] for n in COORDS]
    d1 = [f1.derivative(i) for i in range(6)]
    d2 = [f2.derivative(i) for i in range(6)]
    out = Polynomial()
    for a, b, k in product(range(3), repeat=3):
        e = EPS[a, b, k]
        if e == 0:
            continue
        out = out + (d1[a] * d2[3 + b] * zs[k]).scale(e)
        out = out + (d1[3 + a] * d2[b] * zs[k]).scale(e)
        out = out + (d1[3 + a] * d2[3 + b] * zs[3 + k]).scale(e)
    return out


def bracket_observable(f1: Observable, f2: Observable, bracket: Bracket, h: float = 1e-3) -> Observable:
    """{f1, f2} as an observable with a Richardson-refined gradient."""
    value = lambda z: bracket(f1, f2, z)  # noqa: E731
    return Observable(value, lambda z: richardson_gradient(value, z, h))


def jacobi_residual(
    f1: Observable, f2: Observable, f3: Observable, point, bracket: Bracket = fr_bracket_coord
) -> float:
    """|{f1,{f2,f3}} + {f2,{f3,f1}} + {f3,{f1,f2}}| at the point.

    Polynomials under the coordinate or Kostant-Kirillov bracket use exact
    polynomial inner brackets; anything else falls back to finite
    differences.
    """
    z = _z(point)
    exact = all(isinstance(f, Polynomial) for f in (f1, f2, f3)) and bracket in (fr_bracket_coord, kk_bracket)
    inner = poly_bracket if exact else (lambda a, b: bracket_observable(a, b, bracket))
    total = (
        bracket(f1, inner(f2, f3), z)
        + bracket(f2, inner(f3, f1), z)
        + bracket(f3, inner(f1, f2), z)
    )
    return abs(total)


def coordinate_bracket_table(bracket: Bracket = fr_bracket_coord) -> list[tuple[str, str, dict[str, float]]]:
    """{z_i, z_k} for all coordinate pairs, each expressed in the coordinates.

    Every bracket here is linear in (p, j), so evaluating at the unit points
    recovers the coefficients.
    """
    c = coordinate_functions()
    rows = []
    for a, b in product(COORDS, repeat=2):
        coeffs = {}
        for k, name in enumerate(COORDS):
            e = np.zeros(6)
            e[k] = 1.0
            v = bracket(c[a], c[b], e)
            if v != 0:
                coeffs[name] = v
        rows.append((a, b, coeffs))
    return rows
