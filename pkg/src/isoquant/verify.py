"""Verification suites and convergence scans behind the command line."""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from . import double as dq
from . import fock_rosly as fr
from . import harmonic as hm
from . import lie
from . import moduli as md
from .groups import (
    adjoint_matrix,
    conjugacy_invariants,
    exp_star,
    iso3_conjugate,
    iso3_distance,
    iso3_mul,
    momentum_add_bch,
    momentum_add_exact,
    random_iso3,
    random_su2,
    sample_orbit,
    su2_exp,
    su2_inverse,
    su2_mul,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    jmax: float = 2.0
    band_limit: int = 2 * hm.J_CAP
    kappa_start: float = 0.1
    halvings: int = 7
    tol: dict = field(default_factory=dict)
    timing: bool = False

    def __post_init__(self):
        if self.halvings < 2:
            raise ConfigError("halvings must be at least 2 to estimate an order")
        if self.kappa_start <= 0:
            raise ConfigError("kappa-start must be positive")
        if self.band_limit < 1:
            raise ConfigError("band-limit must be positive")
        if abs(2 * self.jmax - round(2 * self.jmax)) > 1e-12 or self.jmax < 0.5:
            raise ConfigError("jmax must be a half-integer of at least 1/2")
        if any(v < 0 for v in self.tol.values()):
            raise ConfigError("tolerances must be non-negative")


@dataclass(frozen=True)
class CheckReport:
    check: str
    residual: float
    tol: float
    ms: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.residual <= self.tol else "fail"

    def as_dict(self) -> dict:
        return {"check": self.check, "residual": self.residual, "tol": self.tol, "status": self.status, "ms": self.ms}


@dataclass(frozen=True)
class ScanRow:
    check: str
    kappa: float | None
    residual: float
    ratio: float | None
    status: str

    def as_dict(self) -> dict:
        return {"check": self.check, "kappa": self.kappa, "residual": self.residual, "ratio": self.ratio, "status": self.status}


Check = Callable[[np.random.Generator, RunConfig], float]
SUITES: dict[str, dict[str, tuple[Check, float]]] = {}


def check(suite: str, name: str, tol: float):
    def register(fn: Check) -> Check:
        SUITES.setdefault(suite, {})[name] = (fn, tol)
        return fn

    return register


def check_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def run_verify(suite: str, cfg: RunConfig) -> list[CheckReport]:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    checks = SUITES[suite]
    unknown = set(cfg.tol) - set(checks)
    if unknown:
        raise ConfigError(f"no check named {sorted(unknown)} in suite {suite}")
    reports = []
    for name in sorted(checks):
        fn, tol = checks[name]
        start = time.perf_counter()
        residual = float(fn(check_rng(cfg.seed, name), cfg))
        ms = (time.perf_counter() - start) * 1e3 if cfg.timing else 0.0
        reports.append(CheckReport(name, residual, float(cfg.tol.get(name, tol)), round(ms, 1)))
    return reports


def _max(values) -> float:
    return float(max(np.max(np.abs(v)) for v in values))


def _jmax_for(s: float, jmax: float) -> float:
    j = jmax if (2 * jmax - 2 * abs(s)) % 2 == 0 else jmax - 0.5
    return max(j, abs(s))


# ---------------------------------------------------------------- bialgebra


def expected_cocommutator(x: int) -> np.ndarray:
    """delta(P_a) = eps_abc P_b (x) P_c and delta(J_a) = 0."""
    out = np.zeros((6, 6))
    if x < 3:
        out[:3, :3] = lie.levi_civita()[x]
    return out


def expected_dual_bracket(x: int, y: int) -> np.ndarray:
    """[J_a, J_b]* = eps_abc J_c, all brackets involving P vanish."""
    out = np.zeros(6)
    if x >= 3 and y >= 3:
        out[3:] = lie.levi_civita()[x - 3, y - 3]
    return out


@check("bialgebra", "jacobi", 1e-14)
def _(rng, cfg):
    return lie.jacobi_residual(lie.iso3())


@check("bialgebra", "cybe", 1e-14)
def _(rng, cfg):
    return np.max(np.abs(lie.cybe_defect(lie.iso3(), lie.classical_r())))


@check("bialgebra", "cocommutator_basis", 1e-15)
def _(rng, cfg):
    alg, r = lie.iso3(), lie.classical_r()
    return _max(lie.cocommutator(alg, r, e) - expected_cocommutator(i) for i, e in enumerate(np.eye(6)))


@check("bialgebra", "dual_bracket_basis", 1e-14)
def _(rng, cfg):
    alg, E = lie.iso3(), np.eye(6)
    return _max(
        lie.dual_bracket(alg, E[i], E[k]) - expected_dual_bracket(i, k) for i, k in product(range(6), repeat=2)
    )


@check("bialgebra", "cocycle", 1e-12)
def _(rng, cfg):
    alg, r = lie.iso3(), lie.classical_r()
    return _max(lie.cocycle_defect(alg, r, *rng.standard_normal((2, 6))) for _ in range(100))


@check("bialgebra", "symmetric_part", 1e-15)
def _(rng, cfg):
    alg = lie.iso3()
    return np.max(np.abs(lie.symmetric_part(lie.classical_r()) - lie.pairing_tensor(alg)))


@check("bialgebra", "invariance", 1e-12)
def _(rng, cfg):
    alg = lie.iso3()
    return lie.invariance_defect(alg, lie.symmetric_part(lie.classical_r()))


# ---------------------------------------------------------------- fock-rosly


def expected_coordinate_bracket(a: str, b: str) -> dict[str, float]:
    """{j_a, j_b} = eps_abc j_c, {j_a, p_b} = eps_abc p_c, {p_a, p_b} = 0."""
    ka, ia = a[0], int(a[1]) - 1
    kb, ib = b[0], int(b[1]) - 1
    eps = lie.levi_civita()
    if ka == "p" and kb == "p":
        return {}
    out_kind = "j" if ka == kb == "j" else "p"
    sign = 1.0 if ka == "j" else -1.0
    first, second = (ia, ib) if ka == "j" else (ib, ia)
    return {f"{out_kind}{c + 1}": sign * eps[first, second, c] for c in range(3) if eps[first, second, c]}


def generic_point(rng: np.random.Generator, margin: float = 0.1) -> fr.PhasePoint:
    n = rng.standard_normal(3)
    n /= np.linalg.norm(n)
    return fr.PhasePoint(rng.uniform(margin, 2 * np.pi - margin) * n, rng.standard_normal(3))


@check("fock-rosly", "coordinate_table", 1e-15)
def _(rng, cfg):
    worst = 0.0
    for a, b, got in fr.coordinate_bracket_table():
        want = expected_coordinate_bracket(a, b)
        for k in set(got) | set(want):
            worst = max(worst, abs(got.get(k, 0.0) - want.get(k, 0.0)))
    return worst


@check("fock-rosly", "momenta_commute", 1e-15)
def _(rng, cfg):
    c = fr.coordinate_functions()
    pts = [generic_point(rng) for _ in range(20)]
    return _max(fr.fr_bracket_coord(c[f"p{a}"], c[f"p{b}"], z) for z in pts for a in (1, 2, 3) for b in (1, 2, 3))


@check("fock-rosly", "jacobi", 1e-8)
def _(rng, cfg):
    out = []
    for _ in range(100):
        fs = [fr.Polynomial.random(rng, degree=2, density=0.3) for _ in range(3)]
        out.append(fr.jacobi_residual(*fs, generic_point(rng)))
    return max(out)


@check("fock-rosly", "casimirs", 1e-8)
def _(rng, cfg):
    out = []
    for _ in range(20):
        f = fr.Polynomial.random(rng, degree=3, density=0.2)
        z = generic_point(rng)
        out += [fr.fr_bracket_coord(fr.mass_casimir(), f, z), fr.fr_bracket_coord(fr.spin_casimir(), f, z)]
    return _max(out)


@check("fock-rosly", "vf_vs_coord", 1e-8)
def _(rng, cfg):
    out = []
    for _ in range(200):
        f1, f2 = (fr.Polynomial.random(rng, degree=2, density=0.4) for _ in range(2))
        z = generic_point(rng)
        out.append(fr.fr_bracket_vf(f1, f2, z) - fr.fr_bracket_coord(f1, f2, z))
    return _max(out)


@check("fock-rosly", "kk_vs_coord", 1e-12)
def _(rng, cfg):
    out = []
    for _ in range(50):
        f1, f2 = (fr.Polynomial.random(rng, degree=2, density=0.4) for _ in range(2))
        z = generic_point(rng)
        out.append(fr.kk_bracket(f1, f2, z) - fr.fr_bracket_coord(f1, f2, z))
    return _max(out)


# ---------------------------------------------------------------- moduli

SURFACES = ((0, 3), (1, 0), (1, 1), (2, 0))


def random_classes(rng: np.random.Generator, m: int) -> tuple[tuple[float, float], ...]:
    return tuple((float(rng.uniform(0.1, 2 * np.pi - 0.1)), float(rng.uniform(-3, 3))) for _ in range(m))


@check("moduli", "relation_defect", 1e-10)
def _(rng, cfg):
    out = []
    for g, m in SURFACES:
        for _ in range(100):
            fc = md.random_flat_connection(md.SurfaceData(g, random_classes(rng, m)), rng)
            out.append(md.relation_defect(fc.holonomies))
    return max(out)


@check("moduli", "momentum_map_equivariance", 1e-10)
def _(rng, cfg):
    out = []
    for g, m in SURFACES:
        for _ in range(25):
            H = md.HolonomySet(
                [random_iso3(rng) for _ in range(g)],
                [random_iso3(rng) for _ in range(g)],
                [random_iso3(rng) for _ in range(m)],
            )
            k = md.random_gauge(rng)
            out.append(iso3_distance(md.momentum_map(md.gauge_transform(H, k)), iso3_conjugate(k, md.momentum_map(H))))
    return max(out)


@check("moduli", "gauge_class_invariance", 1e-9)
def _(rng, cfg):
    out = []
    for g, m in SURFACES:
        for _ in range(25):
            H = md.random_flat_connection(md.SurfaceData(g, random_classes(rng, m)), rng).holonomies
            H2 = md.gauge_transform(H, md.random_gauge(rng))
            for x, y in zip(H.generators(), H2.generators()):
                out.append(np.subtract(conjugacy_invariants(x), conjugacy_invariants(y)))
    return _max(out)


@check("moduli", "orbit_correspondence", 1e-10)
def _(rng, cfg):
    out = []
    for _ in range(200):
        mu, s = rng.uniform(0.01, 2 * np.pi - 0.01), rng.uniform(-3, 3)
        got = conjugacy_invariants(exp_star(sample_orbit(mu, s, rng)))
        out.append(np.subtract(got, (mu, s)))
    return _max(out)


@check("moduli", "json_roundtrip", 0.0)
def _(rng, cfg):
    H = md.random_flat_connection(md.SurfaceData(1, random_classes(rng, 2)), rng).holonomies
    back = md.HolonomySet.from_json(H.to_json())
    return max(iso3_distance(x, y) for x, y in zip(H.generators(), back.generators()))


# ---------------------------------------------------------------- hopf


def random_group_function(rng: np.random.Generator, dim: int = 4):
    a, b = rng.standard_normal(dim), rng.standard_normal(dim)
    c = complex(*rng.standard_normal(2))
    return lambda h: c * np.exp(1j * (np.asarray(h) @ a)) + np.cos(np.asarray(h) @ b)


def random_element(rng: np.random.Generator, n_terms: int = 2, dim: int = 4) -> dq.PurePointElement:
    return dq.PurePointElement.of(*((random_group_function(rng, dim), random_su2(rng)) for _ in range(n_terms)))


def group_samples(rng: np.random.Generator, slots: int, n: int = 50):
    return [tuple(random_su2(rng) for _ in range(slots)) for _ in range(n)]


def momentum_samples(rng: np.random.Generator, slots: int, n: int = 50, scale: float = 0.5):
    return [tuple(scale * rng.standard_normal(3) for _ in range(slots)) for _ in range(n)]


@check("hopf", "unit", 1e-10)
def _(rng, cfg):
    F, S = random_element(rng), group_samples(rng, 1)
    return max(
        dq.pp_residual(dq.dsu2_multiply(dq.unit(), F), F, S),
        dq.pp_residual(dq.dsu2_multiply(F, dq.unit()), F, S),
    )


@check("hopf", "associativity", 1e-10)
def _(rng, cfg):
    F, G, H = (random_element(rng) for _ in range(3))
    m = dq.dsu2_multiply
    return dq.pp_residual(m(m(F, G), H), m(F, m(G, H)), group_samples(rng, 1))


@check("hopf", "coassociativity", 1e-10)
def _(rng, cfg):
    F = random_element(rng)
    D = dq.dsu2_comultiply
    return dq.pp_residual(D(D(F), 0), D(D(F), 1), group_samples(rng, 3))


@check("hopf", "counit", 1e-10)
def _(rng, cfg):
    F, S = random_element(rng), group_samples(rng, 1)
    DF = dq.dsu2_comultiply(F)
    return max(dq.pp_residual(dq.dsu2_counit(DF, k), F, S) for k in (0, 1))


@check("hopf", "antipode", 1e-10)
def _(rng, cfg):
    F, S = random_element(rng), group_samples(rng, 1)
    DF = dq.dsu2_comultiply(F)
    target = dq.unit().scaled(dq.dsu2_counit(F))
    return max(dq.pp_residual(dq.multiply_slots(dq.dsu2_antipode(DF, k)), target, S) for k in (0, 1))


@check("hopf", "coproduct_multiplicative", 1e-10)
def _(rng, cfg):
    F, G = random_element(rng), random_element(rng)
    D, m = dq.dsu2_comultiply, dq.dsu2_multiply
    return dq.pp_residual(D(m(F, G)), m(D(F), D(G)), group_samples(rng, 2))


@check("hopf", "group_algebra_embedding", 1e-12)
def _(rng, cfg):
    w1, w2 = random_su2(rng), random_su2(rng)
    got = dq.dsu2_multiply(dq.PurePointElement.single(1.0, w1), dq.PurePointElement.single(1.0, w2))
    return dq.pp_residual(got, dq.PurePointElement.single(1.0, su2_mul(w1, w2)), group_samples(rng, 1, 5))


@check("hopf", "exp_pullback", 1e-10)
def _(rng, cfg):
    kappa = rng.uniform(0.1, 1.0)
    F, G = random_element(rng), random_element(rng)
    E = lambda X: dq.exp_pullback(X, kappa)  # noqa: E731
    S1, S2 = momentum_samples(rng, 1), momentum_samples(rng, 2)
    return max(
        dq.pp_residual(E(dq.dsu2_multiply(F, G)), dq.a0_multiply(E(F), E(G)), S1),
        dq.pp_residual(E(dq.dsu2_antipode(F)), dq.a0_antipode(E(F)), S1),
        dq.pp_residual(E(dq.dsu2_comultiply(F)), dq.coproduct_kappa(E(F), kappa), S2),
    )


@check("hopf", "a0_hopf", 1e-10)
def _(rng, cfg):
    f, g = random_element(rng, dim=3), random_element(rng, dim=3)
    S1, S2, S3 = (momentum_samples(rng, k) for k in (1, 2, 3))
    D, m = dq.a0_coproduct, dq.a0_multiply
    twist = lambda w, k: adjoint_matrix(su2_inverse(w)) @ k  # noqa: E731
    return max(
        dq.pp_residual(D(D(f), 0), D(D(f), 1), S3),
        dq.pp_residual(D(m(f, g)), m(D(f), D(g)), S2),
        dq.pp_residual(dq.multiply_slots(dq.a0_antipode(D(f)), twist=twist), dq.unit().scaled(dq.a0_counit(f)), S1),
    )


@check("hopf", "kappa_coassociativity", 1e-10)
def _(rng, cfg):
    kappa = rng.uniform(0.1, 1.0)
    f = random_element(rng, dim=3)
    D = lambda x, k: dq.coproduct_kappa(x, kappa, k)  # noqa: E731
    return dq.pp_residual(D(D(f, 0), 0), D(D(f, 0), 1), momentum_samples(rng, 3))


# ---------------------------------------------------------------- qybe


def random_double_label(rng: np.random.Generator, s: float) -> dq.DoubleIrrepLabel:
    return dq.DoubleIrrepLabel(float(rng.uniform(0, 2 * np.pi)), s)


WEIGHTS = (0.5, 0.0, 1.0)


@check("qybe", "qybe", 1e-12)
def _(rng, cfg):
    out = []
    for _ in range(20):
        s = tuple(rng.choice(WEIGHTS, 3))
        labels = [random_double_label(rng, x) for x in s]
        Phi = dq.TensorState.random(s, tuple(_jmax_for(x, cfg.jmax) for x in s), rng)
        out.append(dq.qybe_residual(labels, Phi, group_samples(rng, 3, 5)))
    return max(out)


@check("qybe", "r_inverse", 1e-12)
def _(rng, cfg):
    out = []
    for _ in range(10):
        Phi = dq.TensorState.random((0.5, 0.0), (_jmax_for(0.5, cfg.jmax), _jmax_for(0, cfg.jmax)), rng)
        mu = rng.uniform(0, 2 * np.pi)
        back = dq.r_slot_action(dq.r_slot_action(Phi, 0, 1, -mu), 0, 1, mu)
        out += [back(*x) - Phi(*x) for x in group_samples(rng, 2, 10)]
    return _max(out)


@check("qybe", "r_kappa_consistency", 1e-12)
def _(rng, cfg):
    out = []
    for _ in range(10):
        Phi = dq.TensorState.random((0.5, 1.0), (_jmax_for(0.5, cfg.jmax), _jmax_for(1, cfg.jmax)), rng)
        M, kappa = rng.uniform(0.1, 3), rng.uniform(0.01, 1)
        lab1, lab2 = dq.EuclideanIrrepLabel(M, 0.5), dq.EuclideanIrrepLabel(1.0, 1.0)
        rk = dq.r_kappa_apply(lab1, lab2, kappa, Phi)
        re = dq.r_element_apply(dq.DoubleIrrepLabel(kappa * M, 0.5), dq.DoubleIrrepLabel(0, 1.0), Phi)
        out += [rk(*x) - re(*x) for x in group_samples(rng, 2, 10)]
    return _max(out)


@check("qybe", "kappa_scaling", 0.0)
def _(rng, cfg):
    Phi = dq.TensorState.random((0.5, 0.0), (_jmax_for(0.5, cfg.jmax), _jmax_for(0, cfg.jmax)), rng)
    out = []
    for c in (2.0, 0.5, 8.0):
        a = dq.r_kappa_apply(dq.EuclideanIrrepLabel(1.5, 0.5), dq.EuclideanIrrepLabel(1, 0), 0.25, Phi)
        b = dq.r_kappa_apply(dq.EuclideanIrrepLabel(1.5 * c, 0.5), dq.EuclideanIrrepLabel(1, 0), 0.25 / c, Phi)
        out += [a(*x) - b(*x) for x in group_samples(rng, 2, 10)]
    return _max(out)


# ---------------------------------------------------------------- representations


@check("representations", "wigner_homomorphism", 1e-12)
def _(rng, cfg):
    out = []
    for j in hm.spins(0, 3):
        u, v = random_su2(rng, 20), random_su2(rng, 20)
        out.append(hm.wigner_matrix(j, su2_mul(u, v)) - hm.wigner_matrix(j, u) @ hm.wigner_matrix(j, v))
    return _max(out)


@check("representations", "wigner_unitarity", 1e-12)
def _(rng, cfg):
    out = []
    for j in hm.spins(0, 3):
        D = hm.wigner_matrix(j, random_su2(rng, 20))
        out.append(D @ np.conj(np.swapaxes(D, -1, -2)) - np.eye(round(2 * j + 1)))
    return _max(out)


@check("representations", "schur_orthogonality", 1e-10)
def _(rng, cfg):
    grid = hm.GroupGrid.build(cfg.band_limit)
    top = min(cfg.band_limit / 2, hm.J_CAP)
    worst = 0.0
    blocks = {j: grid.wigner(j).reshape(grid.size, -1) for j in hm.spins(0, top)}
    for j1, B1 in blocks.items():
        for j2, B2 in blocks.items():
            gram = (B1.conj() * grid.weights[:, None]).T @ B2
            want = np.eye(len(gram)) / (2 * j1 + 1) if j1 == j2 else 0.0
            worst = max(worst, float(np.max(np.abs(gram - want))))
    return worst


@check("representations", "carrier_equivariance", 1e-12)
def _(rng, cfg):
    out = []
    for s in (0.0, 0.5, -1.0, 1.5):
        jm = _jmax_for(s, max(cfg.jmax, abs(s)))
        for j in hm.spins(abs(s), jm):
            for m in hm.m_values(j):
                phi = hm.CarrierState.basis(s, jm, j, m)
                x, w = random_su2(rng, 5), rng.uniform(0, 4 * np.pi, 5)
                h = su2_exp(w[:, None] * np.array([0, 0, 1.0]))
                out.append(phi(su2_mul(x, h)) - np.exp(1j * s * w) * phi(x))
    return _max(out)


@check("representations", "rep_property", 1e-10)
def _(rng, cfg):
    out = []
    for _ in range(10):
        s = float(rng.choice(WEIGHTS))
        label = random_double_label(rng, s)
        phi = hm.CarrierState.random(s, _jmax_for(s, cfg.jmax), rng)
        F, G = random_element(rng), random_element(rng)
        x = random_su2(rng, 20)
        lhs = dq.double_rep_apply(label, dq.dsu2_multiply(F, G), phi)
        rhs = dq.double_rep_apply(label, F, dq.double_rep_apply(label, G, phi))
        out.append(lhs(x) - rhs(x))
    return _max(out)


@check("representations", "spin_j_reduction", 1e-12)
def _(rng, cfg):
    out = []
    for j in hm.spins(0, cfg.jmax):
        F = random_element(rng)
        phi = hm.CarrierState.random(j, j, rng)
        got = dq.double_rep_apply(dq.DoubleIrrepLabel(0.0, j), F, phi)
        want = sum(
            (hm.left_translate(phi, t.ws[0]).scaled(complex(t.f(np.array([1.0, 0, 0, 0])))) for t in F.terms),
            phi.scaled(0),
        )
        out.append(got.coeffs - want.coeffs)
    return _max(out)


@check("representations", "plane_wave_group_law", 1e-10)
def _(rng, cfg):
    out = []
    for _ in range(10):
        s = float(rng.choice(WEIGHTS))
        label = dq.EuclideanIrrepLabel(rng.uniform(0.1, 3), s)
        phi = hm.CarrierState.random(s, _jmax_for(s, cfg.jmax), rng)
        g1, g2 = random_iso3(rng), random_iso3(rng)
        lhs = dq.plane_wave_apply(g1, label, dq.plane_wave_apply(g2, label, phi))
        rhs = dq.plane_wave_apply(iso3_mul(g1, g2), label, phi)
        x = random_su2(rng, 20)
        out.append(lhs(x) - rhs(x))
    return _max(out)


@check("representations", "generator_commutators", 1e-10)
def _(rng, cfg):
    alg = lie.iso3()
    s = 0.5
    label = dq.EuclideanIrrepLabel(rng.uniform(0.5, 2), s)
    phi = hm.CarrierState.random(s, _jmax_for(s, min(cfg.jmax, 2.5)), rng)
    apply = lambda X, st: dq.generator_apply(dq.GENERATORS[X], label, st)  # noqa: E731
    worst = 0.0
    for a, b in product(range(6), repeat=2):
        lhs = apply(a, apply(b, phi)) - apply(b, apply(a, phi))
        rhs = phi.scaled(0)
        for c in range(6):
            if alg.structure_constants[a, b, c]:
                rhs = rhs + apply(c, phi).scaled(alg.structure_constants[a, b, c])
        worst = max(worst, float(np.max(np.abs((lhs - rhs).coeffs))))
    return worst


# ---------------------------------------------------------------- scans

R_LIMIT_BAND = (3.5, 4.5)
R_LIMIT_ORDER = (1.8, 2.2)
BCH_BAND = (7.0, 9.0)
BCH_ORDER = (2.8, 3.2)


def kappa_schedule(cfg: RunConfig) -> np.ndarray:
    return cfg.kappa_start * 0.5 ** np.arange(cfg.halvings + 1)


def r_limit_residuals(cfg: RunConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    Phi = dq.TensorState.random((0.5, 0.0), (_jmax_for(0.5, cfg.jmax), _jmax_for(0, cfg.jmax)), rng)
    lab1, lab2 = dq.EuclideanIrrepLabel(1.0, 0.5), dq.EuclideanIrrepLabel(0.7, 0.0)
    samples = group_samples(rng, 2, 20)
    kappas = kappa_schedule(cfg)
    return kappas, np.array([dq.r_limit_residual(lab1, lab2, k, Phi, samples) for k in kappas])


def bch_residuals(cfg: RunConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    k1, k2 = rng.standard_normal(3), rng.standard_normal(3)
    kappas = kappa_schedule(cfg)
    res = [np.linalg.norm(momentum_add_exact(k1, k2, k) - momentum_add_bch(k1, k2, k, order=3)) for k in kappas]
    return kappas, np.array(res)


SCANS = {
    "r-limit": (r_limit_residuals, R_LIMIT_BAND, R_LIMIT_ORDER),
    "bch": (bch_residuals, BCH_BAND, BCH_ORDER),
}


def run_scan(name: str, cfg: RunConfig) -> list[ScanRow]:
    if name not in SCANS:
        raise ConfigError(f"unknown scan {name!r}")
    fn, band, order_band = SCANS[name]
    kappas, res = fn(cfg, check_rng(cfg.seed, name))
    ratios = res[:-1] / res[1:]
    rows = [ScanRow(name, float(kappas[0]), float(res[0]), None, "-")]
    for k, r, q in zip(kappas[1:], res[1:], ratios):
        rows.append(ScanRow(name, float(k), float(r), float(q), "pass" if band[0] <= q <= band[1] else "fail"))
    mean = float(np.mean(ratios))
    order = float(np.log2(mean))
    ok = order_band[0] <= order <= order_band[1] and all(r.status == "pass" for r in rows[1:])
    rows.append(ScanRow(f"{name}:order", None, order, mean, "pass" if ok else "fail"))
    return rows
