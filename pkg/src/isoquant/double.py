"""Pure-point elements of D(SU(2)) and of the A_0 / A_kappa family.

An element with n tensor slots is a finite sum

    F(h_1, u_1, ..., h_n, u_n) = sum_i f_i(h_1, ..., h_n) delta_{w_i1}(u_1) ... delta_{w_in}(u_n)

stored as a tuple of ``Term(f, ws)``. For D(SU(2)) the ``h`` arguments are
unit quaternions; for A_0 and A_kappa they are momenta in R^3. Every ``f``
must be vectorised over leading axes of its arguments.

The R-element is not a pure-point element in this sense (its delta is keyed
to the other tensor factor), so it is represented by its action on states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .groups import (
    IDENTITY,
    ISO3Element,
    adjoint_matrix,
    exp_kappa,
    momentum_add_exact,
    su2_exp,
    su2_inverse,
    su2_mul,
)
from .harmonic import (
    CarrierState,
    GroupGrid,
    TruncationLoss,
    angular_momentum_apply,
    basis_row,
    cached_grid,
    carrier_dim,
    left_translate,
    project_state,
    spin_matrices,
    spins,
)

TRUNCATION_TOL = 1e-10
MATCH_TOL = 1e-9

State = Callable[..., np.ndarray]


class Const:
    """Constant function; lets representation code stay in the Wigner basis."""

    def __init__(self, value: complex = 1.0):
        self.value = complex(value)

    def __call__(self, *args: np.ndarray) -> np.ndarray:
        shape = np.broadcast_shapes(*(np.shape(a)[:-1] for a in args)) if args else ()
        return np.full(shape, self.value, dtype=complex)

    def __repr__(self) -> str:
        return f"Const({self.value})"


class Term(NamedTuple):
    f: Callable[..., np.ndarray]
    ws: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class PurePointElement:
    terms: tuple[Term, ...]
    slots: int = 1

    def __post_init__(self):
        for t in self.terms:
            if len(t.ws) != self.slots:
                raise ValueError("term has the wrong number of group slots")

    @classmethod
    def single(cls, f, w) -> PurePointElement:
        f = f if callable(f) else Const(f)
        return cls((Term(f, (np.asarray(w, dtype=float),)),))

    @classmethod
    def of(cls, *pairs) -> PurePointElement:
        return cls(tuple(cls.single(f, w).terms[0] for f, w in pairs))

    def __add__(self, other: PurePointElement) -> PurePointElement:
        if self.slots != other.slots:
            raise ValueError("slot counts differ")
        return PurePointElement(self.terms + other.terms, self.slots)

    def scaled(self, c: complex) -> PurePointElement:
        return PurePointElement(
            tuple(Term(_scaled(t.f, c), t.ws) for t in self.terms), self.slots
        )


def _scaled(f, c):
    if isinstance(f, Const):
        return Const(c * f.value)
    return lambda *hs: c * f(*hs)


def unit() -> PurePointElement:
    """h -> 1 times delta_e; also the unit of A_0 (first argument a momentum)."""
    return PurePointElement.single(Const(1.0), IDENTITY)


def _ad(u: np.ndarray, k: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", adjoint_matrix(u), k)


def _conj(w: np.ndarray, h: np.ndarray) -> np.ndarray:
    return su2_mul(su2_mul(w, h), su2_inverse(w))


# ---------------------------------------------------------------- D(SU(2)) Hopf data


def dsu2_multiply(F1: PurePointElement, F2: PurePointElement) -> PurePointElement:
    """Slot-wise product; one slot reads (f, w) . (g, u) = (f(h) g(w^-1 h w), w u)."""
    if F1.slots != F2.slots:
        raise ValueError("slot counts differ")
    terms = []
    for t1 in F1.terms:
        for t2 in F2.terms:
            terms.append(Term(_product_fn(t1, t2, _dsu2_twist), tuple(su2_mul(a, b) for a, b in zip(t1.ws, t2.ws))))
    return PurePointElement(tuple(terms), F1.slots)


def _dsu2_twist(w: np.ndarray, h: np.ndarray) -> np.ndarray:
    return _conj(su2_inverse(w), h)


def _a0_twist(w: np.ndarray, k: np.ndarray) -> np.ndarray:
    return _ad(su2_inverse(w), k)


def _product_fn(t1: Term, t2: Term, twist):
    if isinstance(t1.f, Const) and isinstance(t2.f, Const):
        return Const(t1.f.value * t2.f.value)
    f, g, ws = t1.f, t2.f, t1.ws

    def fg(*hs):
        return f(*hs) * g(*(twist(w, h) for w, h in zip(ws, hs)))

    return fg


def comultiply(F: PurePointElement, compose, slot: int = 0) -> PurePointElement:
    """Split ``slot`` in two: f(.., compose(h, h'), ..) with the group label doubled."""
    terms = []
    for t in F.terms:
        terms.append(Term(_split_fn(t.f, compose, slot), t.ws[: slot + 1] + t.ws[slot:]))
    return PurePointElement(tuple(terms), F.slots + 1)


def _split_fn(f, compose, slot):
    if isinstance(f, Const):
        return f

    def g(*hs):
        return f(*hs[:slot], compose(hs[slot], hs[slot + 1]), *hs[slot + 2 :])

    return g


def dsu2_comultiply(F: PurePointElement, slot: int = 0) -> PurePointElement:
    return comultiply(F, su2_mul, slot)


def counit(F: PurePointElement, zero: np.ndarray, slot: int = 0):
    """Evaluate ``slot`` at the neutral point and integrate its delta away.

    For a one-slot element the result is a number.
    """
    if F.slots == 1:
        return complex(sum(np.asarray(t.f(zero)) for t in F.terms)) if F.terms else 0j
    terms = []
    for t in F.terms:
        f = t.f

        def g(*hs, f=f):
            return f(*hs[:slot], zero, *hs[slot:])

        terms.append(Term(f if isinstance(f, Const) else g, t.ws[:slot] + t.ws[slot + 1 :]))
    return PurePointElement(tuple(terms), F.slots - 1)


def dsu2_counit(F: PurePointElement, slot: int = 0):
    return counit(F, IDENTITY, slot)


def dsu2_antipode(F: PurePointElement, slot: int = 0) -> PurePointElement:
    """SF(h, u) = F(u^-1 h^-1 u, u^-1): term (f, w) -> (h -> f(w h^-1 w^-1), w^-1)."""

    def pull(w, h):
        return _conj(w, su2_inverse(h))

    return _antipode(F, slot, pull)


def _antipode(F, slot, pull):
    terms = []
    for t in F.terms:
        w = t.ws[slot]
        f = t.f
        if isinstance(f, Const):
            g = f
        else:

            def g(*hs, f=f, w=w):
                return f(*hs[:slot], pull(w, hs[slot]), *hs[slot + 1 :])

        ws = t.ws[:slot] + (su2_inverse(w),) + t.ws[slot + 1 :]
        terms.append(Term(g, ws))
    return PurePointElement(tuple(terms), F.slots)


def multiply_slots(G: PurePointElement, twist=_dsu2_twist, slot: int = 0) -> PurePointElement:
    """Algebra product of slots ``slot`` and ``slot + 1`` of one element.

    The one-slot multiplication rule applied to a non-factorised kernel:
    phi(.., h, twist(w, h), ..) with group label w w'.
    """
    if G.slots < 2:
        raise ValueError("need at least two slots")
    terms = []
    for t in G.terms:
        f, w = t.f, t.ws[slot]

        def g(*hs, f=f, w=w):
            h = hs[slot]
            return f(*hs[:slot], h, twist(w, h), *hs[slot + 1 :])

        ws = t.ws[:slot] + (su2_mul(t.ws[slot], t.ws[slot + 1]),) + t.ws[slot + 2 :]
        terms.append(Term(f if isinstance(f, Const) else g, ws))
    return PurePointElement(tuple(terms), G.slots - 1)


# ---------------------------------------------------------------- A_0 and A_kappa


ZERO_MOMENTUM = np.zeros(3)


def a0_multiply(f1: PurePointElement, f2: PurePointElement) -> PurePointElement:
    """(f . g)(k, u) = int dw f(k, w) g(Ad(w^-1) k, w^-1 u)."""
    if f1.slots != f2.slots:
        raise ValueError("slot counts differ")
    terms = []
    for t1 in f1.terms:
        for t2 in f2.terms:
            terms.append(Term(_product_fn(t1, t2, _a0_twist), tuple(su2_mul(a, b) for a, b in zip(t1.ws, t2.ws))))
    return PurePointElement(tuple(terms), f1.slots)


def a0_coproduct(f: PurePointElement, slot: int = 0) -> PurePointElement:
    return comultiply(f, np.add, slot)


def coproduct_kappa(f: PurePointElement, kappa: float, slot: int = 0) -> PurePointElement:
    """Deformed coproduct: momenta in the split slot combine by curved addition."""
    return comultiply(f, lambda k1, k2: _batched_add(k1, k2, kappa), slot)


def _batched_add(k1: np.ndarray, k2: np.ndarray, kappa: float) -> np.ndarray:
    return momentum_add_exact(np.asarray(k1, float), np.asarray(k2, float), kappa)


def a0_counit(f: PurePointElement, slot: int = 0):
    return counit(f, ZERO_MOMENTUM, slot)


def a0_antipode(f: PurePointElement, slot: int = 0) -> PurePointElement:
    """Sf(k, u) = f(-Ad(u^-1) k, u^-1)."""
    return _antipode(f, slot, lambda w, k: -_ad(w, k))


def exp_pullback(F: PurePointElement, kappa: float) -> PurePointElement:
    """EXP_kappa^*: pull the group-valued arguments back to momenta."""
    terms = []
    for t in F.terms:
        f = t.f
        if isinstance(f, Const):
            g = f
        else:

            def g(*ks, f=f):
                return f(*(exp_kappa(k, kappa) for k in ks))

        terms.append(Term(g, t.ws))
    return PurePointElement(tuple(terms), F.slots)


def plane_wave(g: ISO3Element) -> PurePointElement:
    """f_{a,u}(k, v) = exp(i a.k) delta_u(v)."""
    a = np.asarray(g.a, dtype=float)
    return PurePointElement.single(lambda k: np.exp(1j * (np.asarray(k) @ a)), g.u)


# ---------------------------------------------------------------- comparison and norms


def _clusters(terms: Sequence[Term]) -> list[tuple[tuple[np.ndarray, ...], list]]:
    out: list[tuple[tuple[np.ndarray, ...], list]] = []
    for t in terms:
        for ws, fs in out:
            if all(np.max(np.abs(a - b)) < MATCH_TOL for a, b in zip(ws, t.ws)):
                fs.append(t.f)
                break
        else:
            out.append((t.ws, [t.f]))
    return out


def pp_residual(F1: PurePointElement, F2: PurePointElement, samples: Sequence[Sequence[np.ndarray]]) -> float:
    """max |F1 - F2| over sampled first arguments, matching delta supports.

    Terms are grouped by their group labels; ``samples`` is a sequence of
    argument tuples, one entry per slot.
    """
    if F1.slots != F2.slots:
        raise ValueError("slot counts differ")
    tagged = [Term(t.f, t.ws) for t in F1.terms] + [Term(_scaled(t.f, -1.0), t.ws) for t in F2.terms]
    worst = 0.0
    for _, fs in _clusters(tagged):
        for args in samples:
            v = sum(np.asarray(f(*args)) for f in fs)
            worst = max(worst, float(np.max(np.abs(v))))
    return worst


def pp_norm(F: PurePointElement, samples: Sequence[Sequence[np.ndarray]]) -> float:
    """Diagnostic for ||F||_1: sum over distinct supports of the sampled sup."""
    return float(
        sum(max(abs(sum(np.asarray(f(*args)) for f in fs)) for args in samples) for _, fs in _clusters(F.terms))
    )


# ---------------------------------------------------------------- irreps


class DoubleIrrepLabel(NamedTuple):
    """(mu, s): class of exp(mu J3) and U(1) weight; (0, j) is spin j."""

    mu: float
    s: float


class EuclideanIrrepLabel(NamedTuple):
    """(M, s): momentum sphere of radius M and U(1) weight."""

    M: float
    s: float


def h_mu(mu: float) -> np.ndarray:
    return su2_exp(np.array([0.0, 0.0, mu]))


def momentum_on_sphere(x: np.ndarray, M: float) -> np.ndarray:
    """k(x, M) = Ad(x) (0, 0, M)."""
    return M * adjoint_matrix(np.asarray(x, dtype=float))[..., :, 2]


def _group_exact(F: PurePointElement, mu: float) -> bool:
    central = np.isclose(np.cos(mu / 2), 1) or np.isclose(np.cos(mu / 2), -1)
    return central or all(isinstance(t.f, Const) for t in F.terms)


def double_rep_apply(
    label: DoubleIrrepLabel,
    F: PurePointElement,
    phi,
    mode: str = "auto",
    grid: GroupGrid | None = None,
):
    """(Pi(F) phi)(x) = sum_i f_i(x h_mu x^-1) phi(w_i^-1 x).

    A CarrierState stays a CarrierState when every f_i is evaluated at a
    single point (constant f_i, or mu in {0, 2pi}); with ``mode="wigner"``
    other cases are projected on ``grid`` and TruncationLoss is raised if the
    projection drops more than 1e-10. Otherwise a callable is returned.
    """
    h = h_mu(label.mu)
    if isinstance(phi, CarrierState) and mode != "function" and _group_exact(F, label.mu):
        out = phi.scaled(0)
        for t in F.terms:
            c = complex(np.asarray(t.f(h)))
            out = out + left_translate(phi, t.ws[0]).scaled(c)
        return out

    def result(x):
        x = np.asarray(x, dtype=float)
        conj = _conj(x, h)
        return sum(np.asarray(t.f(conj)) * phi(su2_mul(su2_inverse(t.ws[0]), x)) for t in F.terms)

    if mode == "wigner":
        return _project_or_raise(result, phi, grid)
    return result


def _project_or_raise(func, phi: CarrierState, grid: GroupGrid | None, j_max: float | None = None) -> CarrierState:
    grid = grid or cached_grid()
    state, residual = project_state(func, phi.s, j_max if j_max is not None else phi.j_max, grid)
    if residual > TRUNCATION_TOL:
        raise TruncationLoss(residual)
    return state


def euclidean_rep_apply(label: EuclideanIrrepLabel, f: PurePointElement, phi):
    """(Pi(f) phi)(x) = sum_i f_i(k(x, M)) phi(w_i^-1 x)."""

    def result(x):
        x = np.asarray(x, dtype=float)
        k = momentum_on_sphere(x, label.M)
        return sum(np.asarray(t.f(k)) * phi(su2_mul(su2_inverse(t.ws[0]), x)) for t in f.terms)

    return result


def plane_wave_apply(g: ISO3Element, label: EuclideanIrrepLabel, phi):
    """x -> exp(i a.k(x, M)) phi(u^-1 x)."""
    a, uinv = np.asarray(g.a, dtype=float), su2_inverse(g.u)

    def result(x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * (momentum_on_sphere(x, label.M) @ a)) * phi(su2_mul(uinv, x))

    return result


GENERATORS = ("P1", "P2", "P3", "J1", "J2", "J3")


def generator_apply(X: str, label: EuclideanIrrepLabel, phi, grid: GroupGrid | None = None, h: float = 1e-5):
    """Lie-algebra action: P_a -> multiplication by i k_a(x, M), J_a -> -J_a.

    On a CarrierState both are exact; P_a raises j_max by one and is computed
    by projection on a grid whose band limit covers the product.
    """
    kind, a = X[0], int(X[1])
    if X not in GENERATORS:
        raise ValueError(f"unknown generator {X!r}")
    if isinstance(phi, CarrierState):
        if kind == "J":
            return angular_momentum_apply(a, phi).scaled(-1)
        grid = grid or cached_grid(max(2 * (int(np.ceil(phi.j_max)) + 1), 2))

        def mult(x):
            return 1j * momentum_on_sphere(x, label.M)[..., a - 1] * phi(x)

        return _project_or_raise(mult, phi, grid, j_max=phi.j_max + 1)

    if kind == "P":
        return lambda x: 1j * momentum_on_sphere(np.asarray(x, float), label.M)[..., a - 1] * phi(x)

    def rot(x):
        x = np.asarray(x, dtype=float)
        e = np.zeros(3)
        e[a - 1] = h
        plus = phi(su2_mul(su2_exp(-e), x))
        minus = phi(su2_mul(su2_exp(e), x))
        # d/dt phi(exp(-t J_a) x)
        return (plus - minus) / (2 * h)

    return rot


# ---------------------------------------------------------------- tensor states


@dataclass(frozen=True)
class TensorState:
    """Element of H_{s_1} (x) ... (x) H_{s_n} in the product Wigner basis."""

    s: tuple[float, ...]
    j_max: tuple[float, ...]
    coeffs: np.ndarray

    @classmethod
    def random(cls, s, j_max, rng: np.random.Generator, normalise: bool = True) -> TensorState:
        shape = tuple(carrier_dim(a, b) for a, b in zip(s, j_max))
        c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        out = cls(tuple(s), tuple(j_max), c)
        return out.scaled(1 / out.norm()) if normalise else out

    @classmethod
    def product(cls, *states: CarrierState) -> TensorState:
        c = states[0].coeffs
        for st in states[1:]:
            c = np.multiply.outer(c, st.coeffs)
        return cls(tuple(st.s for st in states), tuple(st.j_max for st in states), c)

    def scaled(self, c: complex) -> TensorState:
        return TensorState(self.s, self.j_max, c * self.coeffs)

    def norm(self) -> float:
        w = self.coeffs
        for slot, (s, jm) in enumerate(zip(self.s, self.j_max)):
            weights = np.concatenate([np.full(round(2 * j + 1), 1 / (2 * j + 1)) for j in _spins(s, jm)])
            shape = [1] * w.ndim
            shape[slot] = -1
            w = w * np.sqrt(weights).reshape(shape)
        return float(np.linalg.norm(w))

    def _rows(self, slot: int, x: np.ndarray) -> np.ndarray:
        s, jm = self.s[slot], self.j_max[slot]
        return np.concatenate([basis_row(j, s, x) for j in _spins(s, jm)], axis=-1)

    def __call__(self, *xs: np.ndarray) -> np.ndarray:
        if len(xs) != len(self.s):
            raise ValueError(f"expected {len(self.s)} arguments")
        letters = "abcdefgh"[: len(xs)]
        rows = [self._rows(i, np.asarray(x, dtype=float)) for i, x in enumerate(xs)]
        subscripts = ",".join("..." + c for c in letters) + "," + letters + "->..."
        return _finish(np.einsum(subscripts, *rows, self.coeffs))

    def angular_momentum(self, a: int, slot: int) -> TensorState:
        """Exact left-generator J_a acting in one slot."""
        s, jm = self.s[slot], self.j_max[slot]
        blocks = [1j * spin_matrices(j)[a - 1] for j in _spins(s, jm)]
        op = _block_diag(blocks)
        c = np.moveaxis(np.tensordot(op, self.coeffs, axes=([1], [slot])), 0, slot)
        return TensorState(self.s, self.j_max, c)


def _finish(out):
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def _spins(s, jm):
    return spins(abs(s), jm)


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for b in blocks:
        d = len(b)
        out[i : i + d, i : i + d] = b
        i += d
    return out


# ---------------------------------------------------------------- R-element


def r_slot_action(Phi: State, i: int, j: int, mu: float) -> State:
    """R acting in slots (i, j): x_j -> x_i h_mu x_i^-1 x_j."""
    h = h_mu(mu)

    def out(*xs):
        xs = [np.asarray(x, dtype=float) for x in xs]
        ys = list(xs)
        ys[j] = su2_mul(_conj(xs[i], h), xs[j])
        return Phi(*ys)

    return out


def r_element_apply(label1: DoubleIrrepLabel, label2: DoubleIrrepLabel, Phi: State) -> State:
    """(R Phi)(x1, x2) = Phi(x1, x1 h_mu1 x1^-1 x2)."""
    return r_slot_action(Phi, 0, 1, label1.mu)


def qybe_residual(labels: Sequence[DoubleIrrepLabel], Phi: State, samples) -> float:
    """max |R12 R13 R23 Phi - R23 R13 R12 Phi| over sample triples."""
    mu = [lab.mu for lab in labels]
    lhs = r_slot_action(r_slot_action(r_slot_action(Phi, 1, 2, mu[1]), 0, 2, mu[0]), 0, 1, mu[0])
    rhs = r_slot_action(r_slot_action(r_slot_action(Phi, 0, 1, mu[0]), 0, 2, mu[0]), 1, 2, mu[1])
    return max(float(np.max(np.abs(lhs(*x) - rhs(*x)))) for x in samples)


def classical_r_apply(label1: EuclideanIrrepLabel, label2: EuclideanIrrepLabel, Phi: TensorState) -> State:
    """(r Phi)(x1, x2) = -i k_a(x1, M1) (J_a in slot 2) Phi."""
    derived = [Phi.angular_momentum(a, 1) for a in (1, 2, 3)]

    def out(x1, x2):
        k = momentum_on_sphere(np.asarray(x1, dtype=float), label1.M)
        return -1j * sum(k[..., a] * derived[a](x1, x2) for a in range(3))

    return out


class KappaDomainError(ValueError):
    pass


def r_kappa_apply(label1: EuclideanIrrepLabel, label2: EuclideanIrrepLabel, kappa: float, Phi: State) -> State:
    """(R_kappa Phi)(x1, x2) = Phi(x1, exp_kappa(k(x1, M1)) x2)."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if kappa * label1.M >= 2 * np.pi:
        raise KappaDomainError("kappa M1 must stay below 2pi")

    def out(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        k = momentum_on_sphere(x1, label1.M)
        return Phi(x1, su2_mul(exp_kappa(k, kappa), np.asarray(x2, dtype=float)))

    return out


def r_limit_residual(
    label1: EuclideanIrrepLabel, label2: EuclideanIrrepLabel, kappa: float, Phi: TensorState, samples
) -> float:
    """max |R_kappa Phi - Phi - i kappa r Phi| over sample pairs."""
    rk = r_kappa_apply(label1, label2, kappa, Phi)
    rc = classical_r_apply(label1, label2, Phi)
    return max(
        float(np.max(np.abs(rk(x1, x2) - Phi(x1, x2) - 1j * kappa * rc(x1, x2)))) for x1, x2 in samples
    )
