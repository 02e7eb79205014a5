"""SU(2) and ISO(3)~ group calculus.

SU(2) elements are unit quaternions ``q = (q0, q1, q2, q3)`` stored as
numpy arrays of shape ``(..., 4)``. The matching 2x2 matrix is
``q0 I + i (q1 tau1 + q2 tau2 + q3 tau3)``, which with the generators
``J_a = -(i/2) tau_a`` gives ``exp(theta n.J) = (cos(theta/2), -sin(theta/2) n)``.

ISO(3)~ elements are ``(a, u)`` pairs with ``a`` a translation 3-vector.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])
MINUS_ONE = np.array([-1.0, 0.0, 0.0, 0.0])

SMALL_ANGLE = 1e-4
NEAR_MINUS_ONE = 1e-9


class LogUndefined(ValueError):
    """Logarithm requested at u = -1, the image of the radius-2pi sphere."""


class ClassUndefined(ValueError):
    """Conjugacy invariants requested for an element with rotation part -1."""


# ---------------------------------------------------------------- SU(2)


def su2_mul(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    u0, uv = u[..., 0], u[..., 1:]
    v0, vv = v[..., 0], v[..., 1:]
    out = np.empty(np.broadcast_shapes(u.shape, v.shape))
    out[..., 0] = u0 * v0 - np.sum(uv * vv, axis=-1)
    out[..., 1:] = u0[..., None] * vv + v0[..., None] * uv - np.cross(uv, vv)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def su2_inverse(u: np.ndarray) -> np.ndarray:
    out = np.array(u, dtype=float, copy=True)
    out[..., 1:] *= -1
    return out


def su2_matrix(u: np.ndarray) -> np.ndarray:
    return u[..., 0, None, None] * np.eye(2) + 1j * np.einsum("...a,aij->...ij", u[..., 1:], PAULI)


def su2_from_matrix(m: np.ndarray) -> np.ndarray:
    # m = q0 + i q.tau  =>  q0 = Re tr/2, q_a = Im tr(tau_a m)/2
    q0 = np.real(np.trace(m, axis1=-2, axis2=-1)) / 2
    qv = np.imag(np.einsum("aij,...ji->...a", PAULI, m)) / 2
    q = np.concatenate([np.asarray(q0)[..., None], qv], axis=-1)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def adjoint_matrix(u: np.ndarray) -> np.ndarray:
    """SO(3) matrix with u J_b u^-1 = J_a Ad(u)_ab."""
    w0 = u[..., 0]
    w = -u[..., 1:]
    eye = np.broadcast_to(np.eye(3), u.shape[:-1] + (3, 3))
    cross = np.zeros(u.shape[:-1] + (3, 3))
    cross[..., 0, 1], cross[..., 0, 2] = -w[..., 2], w[..., 1]
    cross[..., 1, 0], cross[..., 1, 2] = w[..., 2], -w[..., 0]
    cross[..., 2, 0], cross[..., 2, 1] = -w[..., 1], w[..., 0]
    return (
        (w0**2 - np.sum(w * w, axis=-1))[..., None, None] * eye
        + 2 * w[..., :, None] * w[..., None, :]
        + 2 * w0[..., None, None] * cross
    )


def su2_exp(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1)
    half = theta / 2
    # sin(theta/2)/theta, with the series near zero
    with np.errstate(invalid="ignore", divide="ignore"):
        sinc = np.where(theta < SMALL_ANGLE, 0.5 - theta**2 / 48, np.sin(half) / np.where(theta == 0, 1, theta))
    out = np.empty(v.shape[:-1] + (4,))
    out[..., 0] = np.cos(half)
    out[..., 1:] = -sinc[..., None] * v
    return out


def su2_log(u: np.ndarray) -> np.ndarray:
    """Principal logarithm with |log u| in [0, 2pi)."""
    u = np.asarray(u, dtype=float)
    q0 = u[..., 0]
    s = np.linalg.norm(u[..., 1:], axis=-1)
    if np.any((q0 < 0) & (s < NEAR_MINUS_ONE)):
        raise LogUndefined("su2_log is undefined at u = -1")
    theta = 2 * np.arctan2(s, q0)
    with np.errstate(invalid="ignore", divide="ignore"):
        # theta / sin(theta/2); series 2/q0 * (1 - (s/q0)^2/3) near identity
        ratio = np.where(
            (s < SMALL_ANGLE) & (q0 > 0),
            (2 / q0) * (1 - (s / q0) ** 2 / 3),
            theta / np.where(s == 0, 1, s),
        )
    return -ratio[..., None] * u[..., 1:]


def su2_angle(u: np.ndarray) -> np.ndarray:
    """Rotation angle in [0, 2pi]."""
    return 2 * np.arctan2(np.linalg.norm(u[..., 1:], axis=-1), u[..., 0])


def su2_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(np.asarray(u) - np.asarray(v), axis=-1)))


def random_su2(rng: np.random.Generator, size: int | tuple | None = None) -> np.ndarray:
    shape = () if size is None else (size,) if isinstance(size, int) else tuple(size)
    q = rng.standard_normal(shape + (4,))
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def rotation_about(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    return su2_exp(angle * axis / np.linalg.norm(axis))


# ---------------------------------------------------------------- ISO(3)~


class ISO3Element(NamedTuple):
    a: np.ndarray
    u: np.ndarray

    @classmethod
    def identity(cls) -> ISO3Element:
        return cls(np.zeros(3), IDENTITY.copy())

    def to_list(self) -> list[list[float]]:
        return [list(map(float, self.a)), list(map(float, self.u))]

    @classmethod
    def from_list(cls, data) -> ISO3Element:
        a, u = data
        return cls(np.asarray(a, dtype=float), np.asarray(u, dtype=float))


def iso3_mul(g: ISO3Element, h: ISO3Element) -> ISO3Element:
    return ISO3Element(g.a + adjoint_matrix(g.u) @ h.a, su2_mul(g.u, h.u))


def iso3_inverse(g: ISO3Element) -> ISO3Element:
    uinv = su2_inverse(g.u)
    return ISO3Element(-(adjoint_matrix(uinv) @ g.a), uinv)


def iso3_conjugate(g: ISO3Element, h: ISO3Element) -> ISO3Element:
    """g h g^-1."""
    return iso3_mul(iso3_mul(g, h), iso3_inverse(g))


def iso3_product(*elements: ISO3Element) -> ISO3Element:
    out = ISO3Element.identity()
    for g in elements:
        out = iso3_mul(out, g)
    return out


def iso3_distance(g: ISO3Element, h: ISO3Element) -> float:
    return float(np.linalg.norm(g.a - h.a) + np.linalg.norm(g.u - h.u))


def random_iso3(rng: np.random.Generator, scale: float = 1.0) -> ISO3Element:
    return ISO3Element(scale * rng.standard_normal(3), random_su2(rng))


# ---------------------------------------------------------------- orbits and classes


class CoadjointPoint(NamedTuple):
    """Coordinates (p, j) of xi* = p^a P*_a + j^a J*_a."""

    p: np.ndarray
    j: np.ndarray


def exp_star(point: CoadjointPoint) -> ISO3Element:
    """(p, j) -> (Ad(u) j, u) with u = exp(p.J)."""
    u = su2_exp(point.p)
    return ISO3Element(adjoint_matrix(u) @ np.asarray(point.j, dtype=float), u)


def log_star(g: ISO3Element) -> CoadjointPoint:
    """Preimage of exp_star for u != -1."""
    return CoadjointPoint(su2_log(g.u), adjoint_matrix(su2_inverse(g.u)) @ g.a)


def conjugacy_invariants(g: ISO3Element) -> tuple[float, float]:
    """(mu, s) labelling the conjugacy class of g.

    mu is the rotation angle in [0, 2pi) and s the projection of the
    body-frame translation onto the rotation axis. For u = 1 the axis is
    undefined and s = 0 is returned.
    """
    try:
        p = su2_log(g.u)
    except LogUndefined as exc:
        raise ClassUndefined("classes with rotation part -1 carry no (mu, s) label") from exc
    mu = float(np.linalg.norm(p))
    if mu == 0.0:
        return 0.0, 0.0
    j = adjoint_matrix(su2_inverse(g.u)) @ g.a
    return mu, float(p @ j / mu)


def _unit_orthogonal(n: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    t = rng.standard_normal(3)
    t -= (t @ n) * n
    return t / np.linalg.norm(t)


def sample_orbit(mu: float, s: float, rng: np.random.Generator, spread: float = 1.0) -> CoadjointPoint:
    """Random point on the co-adjoint orbit with p.p = mu^2 and p.j = mu s.

    For mu = 0 the orbit is the sphere |j| = |s| (a point when s = 0).
    """
    if mu < 0:
        raise ValueError("mu must be non-negative")
    n = rng.standard_normal(3)
    n /= np.linalg.norm(n)
    if mu == 0:
        return CoadjointPoint(np.zeros(3), abs(s) * n)
    t = spread * rng.standard_normal() * _unit_orthogonal(n, rng)
    return CoadjointPoint(mu * n, s * n + t)


# ---------------------------------------------------------------- kappa family


def exp_kappa(k: np.ndarray, kappa: float) -> np.ndarray:
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return su2_exp(kappa * np.asarray(k, dtype=float))


def log_kappa(u: np.ndarray, kappa: float) -> np.ndarray:
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return su2_log(u) / kappa


def momentum_add_exact(k1: np.ndarray, k2: np.ndarray, kappa: float) -> np.ndarray:
    """log_kappa(exp_kappa(k1) exp_kappa(k2)); raises LogUndefined at -1."""
    return log_kappa(su2_mul(exp_kappa(k1, kappa), exp_kappa(k2, kappa)), kappa)


def momentum_add_bch(k1: np.ndarray, k2: np.ndarray, kappa: float, order: int = 3) -> np.ndarray:
    """Baker-Campbell-Hausdorff truncation of the curved momentum addition."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    out = k1 + k2
    if order >= 2:
        out = out + 0.5 * kappa * np.cross(k1, k2)
    if order >= 3:
        d = np.sum(k1 * k2, axis=-1)[..., None]
        n1 = np.sum(k1 * k1, axis=-1)[..., None]
        n2 = np.sum(k2 * k2, axis=-1)[..., None]
        out = out + kappa**2 / 12 * (d * (k1 + k2) - n1 * k2 - n2 * k1)
    return out
