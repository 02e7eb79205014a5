"""Holonomies of flat ISO(3)~ connections on a genus-g surface with marked points."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .groups import (
    ClassUndefined,
    ISO3Element,
    adjoint_matrix,
    conjugacy_invariants,
    exp_star,
    iso3_conjugate,
    iso3_inverse,
    iso3_mul,
    iso3_product,
    random_iso3,
    random_su2,
    sample_orbit,
    su2_exp,
    su2_inverse,
    su2_mul,
)


class ClassMismatch(ValueError):
    """The solved generator does not lie in the class the caller required."""


@dataclass(frozen=True)
class SurfaceData:
    genus: int
    classes: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if 2 * self.genus + self.marked < 1:
            raise ValueError("need 2g + m >= 1")
        for mu, _ in self.classes:
            if not 0 <= mu < 2 * np.pi:
                raise ValueError(f"class angle {mu} outside [0, 2pi)")

    @property
    def marked(self) -> int:
        return len(self.classes)


@dataclass
class HolonomySet:
    """Holonomies A_i, B_i around handles and L_i around marked points."""

    A: list[ISO3Element] = field(default_factory=list)
    B: list[ISO3Element] = field(default_factory=list)
    L: list[ISO3Element] = field(default_factory=list)

    def __post_init__(self):
        if len(self.A) != len(self.B):
            raise ValueError("need as many A as B holonomies")

    @property
    def genus(self) -> int:
        return len(self.A)

    def generators(self) -> list[ISO3Element]:
        out = []
        for a, b in zip(self.A, self.B):
            out += [a, b]
        return out + list(self.L)

    def to_json(self) -> str:
        return json.dumps(
            {
                "A": [g.to_list() for g in self.A],
                "B": [g.to_list() for g in self.B],
                "L": [g.to_list() for g in self.L],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> HolonomySet:
        data = json.loads(text)
        conv = lambda xs: [ISO3Element.from_list(x) for x in xs]  # noqa: E731
        return cls(conv(data["A"]), conv(data["B"]), conv(data["L"]))


def group_commutator(x: ISO3Element, y: ISO3Element) -> ISO3Element:
    return iso3_product(x, y, iso3_inverse(x), iso3_inverse(y))


def handle_product(H: HolonomySet) -> ISO3Element:
    """[B_g, A_g^-1] ... [B_1, A_1^-1]."""
    out = ISO3Element.identity()
    for a, b in zip(H.A, H.B):
        out = iso3_mul(group_commutator(b, iso3_inverse(a)), out)
    return out


def momentum_map(H: HolonomySet) -> ISO3Element:
    """[B_g, A_g^-1] ... [B_1, A_1^-1] L_m ... L_1."""
    out = handle_product(H)
    for ell in reversed(H.L):
        out = iso3_mul(out, ell)
    return out


def relation_defect(H: HolonomySet) -> float:
    mu = momentum_map(H)
    return float(np.linalg.norm(mu.a) + np.linalg.norm(mu.u - np.array([1.0, 0, 0, 0])))


def gauge_transform(H: HolonomySet, g: ISO3Element) -> HolonomySet:
    conj = lambda xs: [iso3_conjugate(g, x) for x in xs]  # noqa: E731
    return HolonomySet(conj(H.A), conj(H.B), conj(H.L))


def _rotation_taking(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Some unit quaternion v with Ad(v) x = y for |x| = |y|."""
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0:
        return np.array([1.0, 0, 0, 0])
    xh, yh = x / nx, y / ny
    axis = np.cross(xh, yh)
    sin = np.linalg.norm(axis)
    cos = float(np.clip(xh @ yh, -1, 1))
    if sin < 1e-14:
        if cos > 0:
            return np.array([1.0, 0, 0, 0])
        perp = np.cross(xh, np.eye(3)[np.argmin(np.abs(xh))])
        return su2_exp(np.pi * perp / np.linalg.norm(perp))
    return su2_exp(np.arctan2(sin, cos) * axis / sin)


def solve_commutator(target: ISO3Element, rng: np.random.Generator) -> tuple[ISO3Element, ISO3Element]:
    """Random (A, B) with [B, A^-1] = target.

    The rotation parts are chosen so that A^-1 and target A^-1 are conjugate
    in SU(2); the translations then satisfy a linear 3x6 system whose
    solution is drawn at random from its affine solution space.
    """
    z = target.u
    z0, zv = z[0], z[1:]
    m = rng.standard_normal(3)
    m /= np.linalg.norm(m)
    # (1 - z0) cos(alpha) + (zv.m) sin(alpha) = 0 makes w and z w share a trace
    c = np.array([-(zv @ m), 1 - z0])
    if np.linalg.norm(c) < 1e-14:
        alpha = rng.uniform(0, 2 * np.pi)
    else:
        alpha = np.arctan2(c[1], c[0])
    w = np.concatenate([[np.cos(alpha)], np.sin(alpha) * m])
    zw = su2_mul(z, w)
    v0 = _rotation_taking(w[1:], zw[1:])
    # randomise within the coset of the centraliser of w
    v = su2_mul(v0, su2_exp(rng.uniform(0, 4 * np.pi) * _axis(w)))

    # translation of [B, A^-1] with B = (b, v), A^-1 = (x, w):
    #   (1 - Ad(v w v^-1)) b + (Ad(v) - Ad(z)) x
    vwv = su2_mul(su2_mul(v, w), su2_inverse(v))
    M = np.hstack([np.eye(3) - adjoint_matrix(vwv), adjoint_matrix(v) - adjoint_matrix(z)])
    particular, *_ = np.linalg.lstsq(M, target.a, rcond=None)
    _, _, vt = np.linalg.svd(M)
    null = vt[3:].T
    sol = particular + null @ rng.standard_normal(null.shape[1])
    b, x = sol[:3], sol[3:]
    a_inv = ISO3Element(x, w)
    return iso3_inverse(a_inv), ISO3Element(b, v)


def _axis(u: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(u[1:])
    if n < 1e-14:
        return np.array([0.0, 0.0, 1.0])
    return u[1:] / n


@dataclass
class FlatConnection:
    holonomies: HolonomySet
    solved_class: tuple[float, float] | None
    """(mu, s) of the generator solved for, or None when the generator is a
    commutator pair or its rotation part is -1."""


def random_flat_connection(
    surface: SurfaceData,
    rng: np.random.Generator,
    strict: bool = False,
    tol: float = 1e-9,
    translation_scale: float = 1.0,
) -> FlatConnection:
    """Sample a point of mu^-1(1).

    Handle holonomies and L_1..L_{m-1} are drawn freely (the L_i on their
    prescribed classes) and the last generator is solved for: L_m when
    m >= 1, otherwise the last handle pair. With ``strict`` the class
    recorded for L_m in ``surface`` must be met, else ClassMismatch.
    """
    g, m = surface.genus, surface.marked
    L = []
    for mu, s in surface.classes[: max(m - 1, 0)]:
        L.append(exp_star(sample_orbit(mu, s, rng, spread=translation_scale)))

    if m >= 1:
        A = [random_iso3(rng, translation_scale) for _ in range(g)]
        B = [random_iso3(rng, translation_scale) for _ in range(g)]
        partial = HolonomySet(A, B, [])
        head = handle_product(partial)
        tail = iso3_product(*reversed(L)) if L else ISO3Element.identity()
        last = iso3_mul(iso3_inverse(head), iso3_inverse(tail))
        H = HolonomySet(A, B, L + [last])
        try:
            achieved = conjugacy_invariants(last)
        except ClassUndefined:
            achieved = None
        if strict:
            want = surface.classes[-1]
            if achieved is None or abs(achieved[0] - want[0]) > tol or abs(achieved[1] - want[1]) > tol:
                raise ClassMismatch(f"solved L_m lies in class {achieved}, required {want}")
        return FlatConnection(H, achieved)

    A = [random_iso3(rng, translation_scale) for _ in range(g - 1)]
    B = [random_iso3(rng, translation_scale) for _ in range(g - 1)]
    target = iso3_inverse(handle_product(HolonomySet(A, B, [])))
    a_last, b_last = solve_commutator(target, rng)
    return FlatConnection(HolonomySet(A + [a_last], B + [b_last], []), None)


def random_gauge(rng: np.random.Generator, scale: float = 1.0) -> ISO3Element:
    return ISO3Element(scale * rng.standard_normal(3), random_su2(rng))
