from itertools import product

import numpy as np
import pytest

from isoquant import double as dq
from isoquant import harmonic as hm
from isoquant.groups import (
    IDENTITY,
    ISO3Element,
    adjoint_matrix,
    exp_kappa,
    iso3_mul,
    momentum_add_exact,
    random_iso3,
    random_su2,
    su2_exp,
    su2_inverse,
    su2_mul,
)


def rfun(rng, dim=4):
    a, b = rng.standard_normal(dim), rng.standard_normal(dim)
    return lambda h: np.exp(1j * (np.asarray(h) @ a)) + np.cos(np.asarray(h) @ b)


def relement(rng, n=2, dim=4):
    return dq.PurePointElement.of(*((rfun(rng, dim), random_su2(rng)) for _ in range(n)))


def gsamples(rng, slots, n=50):
    return [tuple(random_su2(rng) for _ in range(slots)) for _ in range(n)]


def ksamples(rng, slots, n=50):
    return [tuple(0.5 * rng.standard_normal(3) for _ in range(slots)) for _ in range(n)]


def conj(w, h):
    return su2_mul(su2_mul(w, h), su2_inverse(w))


# ---------------------------------------------------------------- Hopf structure


def test_unit_and_group_algebra_embedding():
    rng = np.random.default_rng(0)
    F = relement(rng)
    S = gsamples(rng, 1)
    assert dq.pp_residual(dq.dsu2_multiply(dq.unit(), F), F, S) <= 1e-12
    w1, w2 = random_su2(rng), random_su2(rng)
    prod = dq.dsu2_multiply(dq.PurePointElement.single(1.0, w1), dq.PurePointElement.single(1.0, w2))
    assert len(prod.terms) == 1 and isinstance(prod.terms[0].f, dq.Const)
    assert np.allclose(prod.terms[0].ws[0], su2_mul(w1, w2))


def test_multiply_against_mollified_delta():
    # replace delta_{w1} by a Gaussian bump of width 1e-2 in local coordinates
    # v = w1 exp(x) and integrate the product formula numerically
    rng = np.random.default_rng(1)
    f, g = rfun(rng), rfun(rng)
    w1, w2 = random_su2(rng), random_su2(rng)
    got = dq.dsu2_multiply(dq.PurePointElement.single(f, w1), dq.PurePointElement.single(g, w2))
    width = 1e-2
    x, wx = np.polynomial.hermite_e.hermegauss(7)
    pts = np.array(list(product(x, repeat=3))) * width
    wts = np.prod(np.array(list(product(wx, repeat=3))), axis=1)
    wts /= wts.sum()
    v = su2_mul(w1, su2_exp(pts))
    for h in random_su2(rng, 20):
        mollified = np.sum(wts * f(h) * g(conj(su2_inverse(v), h)))
        exact = got.terms[0].f(h)
        assert abs(mollified - exact) <= 1e-3


def test_coassociativity_counit_and_comultiplicativity():
    rng = np.random.default_rng(2)
    F, G = relement(rng), relement(rng)
    D = dq.dsu2_comultiply
    assert dq.pp_residual(D(D(F), 0), D(D(F), 1), gsamples(rng, 3)) <= 1e-12
    for k in (0, 1):
        assert dq.pp_residual(dq.dsu2_counit(D(F), k), F, gsamples(rng, 1)) <= 1e-12
    assert dq.pp_residual(D(dq.dsu2_multiply(F, G)), dq.dsu2_multiply(D(F), D(G)), gsamples(rng, 2)) <= 1e-10


def test_coproduct_of_unit():
    rng = np.random.default_rng(3)
    one = dq.unit()
    tensor = dq.PurePointElement((dq.Term(dq.Const(1.0), (IDENTITY, IDENTITY)),), slots=2)
    assert dq.pp_residual(dq.dsu2_comultiply(one), tensor, gsamples(rng, 2, 5)) == 0
    assert dq.dsu2_counit(one) == 1


def test_antipode_axiom():
    rng = np.random.default_rng(4)
    F = relement(rng)
    target = dq.unit().scaled(dq.dsu2_counit(F))
    for k in (0, 1):
        lhs = dq.multiply_slots(dq.dsu2_antipode(dq.dsu2_comultiply(F), k))
        assert dq.pp_residual(lhs, target, gsamples(rng, 1)) <= 1e-10


def test_antipode_formula():
    rng = np.random.default_rng(5)
    f, w = rfun(rng), random_su2(rng)
    S = dq.dsu2_antipode(dq.PurePointElement.single(f, w))
    h = random_su2(rng)
    assert np.allclose(S.terms[0].ws[0], su2_inverse(w))
    assert S.terms[0].f(h) == pytest.approx(f(conj(w, su2_inverse(h))))


def test_counit_of_constant():
    w = random_su2(np.random.default_rng(6))
    assert dq.dsu2_counit(dq.PurePointElement.of((2.0, w), (3.0, IDENTITY))) == 5


def test_pp_norm_diagnostic():
    rng = np.random.default_rng(7)
    w = random_su2(rng)
    F = dq.PurePointElement.of((2.0, w), (-0.5, w), (1.0, IDENTITY))
    assert dq.pp_norm(F, gsamples(rng, 1, 3)) == pytest.approx(2.5)


def test_slot_mismatch():
    rng = np.random.default_rng(8)
    with pytest.raises(ValueError):
        dq.dsu2_multiply(relement(rng), dq.dsu2_comultiply(relement(rng)))
    with pytest.raises(ValueError):
        dq.multiply_slots(relement(rng))


# ---------------------------------------------------------------- A_0 and A_kappa


def test_exp_pullback_intertwines():
    rng = np.random.default_rng(9)
    kappa = 0.4
    F, G = relement(rng), relement(rng)
    E = lambda X: dq.exp_pullback(X, kappa)  # noqa: E731
    S1, S2 = ksamples(rng, 1), ksamples(rng, 2)
    assert dq.pp_residual(E(dq.dsu2_multiply(F, G)), dq.a0_multiply(E(F), E(G)), S1) <= 1e-12
    assert dq.pp_residual(E(dq.dsu2_antipode(F)), dq.a0_antipode(E(F)), S1) <= 1e-12
    assert dq.pp_residual(E(dq.dsu2_comultiply(F)), dq.coproduct_kappa(E(F), kappa), S2) <= 1e-12


def test_a0_hopf_axioms():
    rng = np.random.default_rng(10)
    f = relement(rng, dim=3)
    D = dq.a0_coproduct
    twist = lambda w, k: adjoint_matrix(su2_inverse(w)) @ k  # noqa: E731
    assert dq.pp_residual(D(D(f), 0), D(D(f), 1), ksamples(rng, 3)) <= 1e-12
    lhs = dq.multiply_slots(dq.a0_antipode(D(f)), twist=twist)
    assert dq.pp_residual(lhs, dq.unit().scaled(dq.a0_counit(f)), ksamples(rng, 1)) <= 1e-12


def test_kappa_coproduct_counit_leg_and_coassociativity():
    rng = np.random.default_rng(11)
    f = relement(rng, dim=3)
    Df = dq.coproduct_kappa(f, 0.5)
    for (k1,) in ksamples(rng, 1, 10):
        assert Df.terms[0].f(k1, np.zeros(3)) == pytest.approx(f.terms[0].f(k1))
    D = lambda x, k: dq.coproduct_kappa(x, 0.5, k)  # noqa: E731
    assert dq.pp_residual(D(Df, 0), D(Df, 1), ksamples(rng, 3)) <= 1e-10


def test_kappa_coproduct_tends_linearly_to_flat():
    rng = np.random.default_rng(12)
    a = rng.standard_normal(3)
    f = dq.PurePointElement.single(lambda k: np.exp(1j * (np.asarray(k) @ a)), IDENTITY)
    k1, k2 = rng.standard_normal((2, 3))
    slope = abs(a @ np.cross(k1, k2)) / 2
    for kappa in (1e-4, 1e-5):
        diff = dq.coproduct_kappa(f, kappa).terms[0].f(k1, k2) - dq.a0_coproduct(f).terms[0].f(k1, k2)
        assert abs(diff) / kappa == pytest.approx(slope, rel=1e-3)


def test_plane_wave_element_pulls_back_momentum_addition():
    rng = np.random.default_rng(13)
    g = random_iso3(rng)
    pw = dq.plane_wave(g)
    k = rng.standard_normal(3)
    assert pw.terms[0].f(k) == pytest.approx(np.exp(1j * g.a @ k))
    assert np.array_equal(pw.terms[0].ws[0], g.u)


# ---------------------------------------------------------------- representations


def test_unit_acts_trivially_and_spin_j_sector():
    rng = np.random.default_rng(14)
    phi = hm.CarrierState.random(1.0, 3.0, rng)
    out = dq.double_rep_apply(dq.DoubleIrrepLabel(1.1, 1.0), dq.unit(), phi)
    assert isinstance(out, hm.CarrierState) and np.allclose(out.coeffs, phi.coeffs)
    F = relement(rng)
    got = dq.double_rep_apply(dq.DoubleIrrepLabel(0.0, 1.0), F, phi)
    x = random_su2(rng, 10)
    want = sum(t.f(IDENTITY) * phi(su2_mul(su2_inverse(t.ws[0]), x)) for t in F.terms)
    assert np.allclose(got(x), want)


@pytest.mark.parametrize("mu,s", [(0.0, 0.5), (1.3, 0.5), (2.2, -1.0), (np.pi, 0.0)])
def test_representation_property(mu, s):
    rng = np.random.default_rng(15)
    label = dq.DoubleIrrepLabel(mu, s)
    phi = hm.CarrierState.random(s, abs(s) + 2, rng)
    F, G = relement(rng), relement(rng)
    x = random_su2(rng, 50)
    lhs = dq.double_rep_apply(label, dq.dsu2_multiply(F, G), phi)
    rhs = dq.double_rep_apply(label, F, dq.double_rep_apply(label, G, phi))
    assert np.max(np.abs(lhs(x) - rhs(x))) <= 1e-10


def test_action_preserves_equivariance():
    rng = np.random.default_rng(16)
    s = 0.5
    phi = hm.CarrierState.random(s, 2.5, rng)
    psi = dq.double_rep_apply(dq.DoubleIrrepLabel(1.7, s), relement(rng), phi)
    x, w = random_su2(rng, 10), rng.uniform(0, 4 * np.pi, 10)
    h = su2_exp(w[:, None] * np.array([0.0, 0, 1]))
    assert np.allclose(psi(su2_mul(x, h)), np.exp(1j * s * w) * psi(x))
    Phi = dq.TensorState.random((0.5, 1.0), (1.5, 2.0), rng)
    R = dq.r_element_apply(dq.DoubleIrrepLabel(0.9, 0.5), dq.DoubleIrrepLabel(0.3, 1.0), Phi)
    x2 = random_su2(rng, 10)
    assert np.allclose(R(su2_mul(x, h), x2), np.exp(0.5j * w) * R(x, x2))
    assert np.allclose(R(x, su2_mul(x2, h)), np.exp(1j * w) * R(x, x2))


def test_wigner_mode_projection():
    rng = np.random.default_rng(17)
    phi = hm.CarrierState.random(0.5, 1.5, rng)
    label = dq.DoubleIrrepLabel(1.2, 0.5)
    # h0 is a class function, so f(x h x^-1) = cos(mu/2) exactly
    F = dq.PurePointElement.single(lambda h: h[..., 0] + 0j, random_su2(rng))
    out = dq.double_rep_apply(label, F, phi, mode="wigner", grid=hm.GroupGrid.build(6))
    want = hm.left_translate(phi, F.terms[0].ws[0]).scaled(np.cos(0.6))
    assert np.allclose(out.coeffs, want.coeffs, atol=1e-12)
    with pytest.raises(hm.TruncationLoss):
        dq.double_rep_apply(label, relement(rng), phi, mode="wigner", grid=hm.GroupGrid.build(6))


def test_plane_wave_actions():
    rng = np.random.default_rng(18)
    label = dq.EuclideanIrrepLabel(1.3, 0.5)
    phi = hm.CarrierState.random(0.5, 1.5, rng)
    u, a, x = random_su2(rng), rng.standard_normal(3), random_su2(rng, 10)
    pure = dq.plane_wave_apply(ISO3Element(np.zeros(3), u), label, phi)
    assert np.allclose(pure(x), hm.left_translate(phi, u)(x))
    shift = dq.plane_wave_apply(ISO3Element(a, IDENTITY), label, phi)
    assert shift(IDENTITY) == pytest.approx(np.exp(1j * a[2] * 1.3) * phi(IDENTITY))
    g1, g2 = random_iso3(rng), random_iso3(rng)
    lhs = dq.plane_wave_apply(g1, label, dq.plane_wave_apply(g2, label, phi))
    assert np.allclose(lhs(x), dq.plane_wave_apply(iso3_mul(g1, g2), label, phi)(x), atol=1e-10)
    via_element = dq.euclidean_rep_apply(label, dq.plane_wave(g1), phi)
    assert np.allclose(via_element(x), dq.plane_wave_apply(g1, label, phi)(x))


def test_generators():
    rng = np.random.default_rng(19)
    label = dq.EuclideanIrrepLabel(1.3, 0.5)
    phi = hm.CarrierState.random(0.5, 1.5, rng)
    P3 = dq.generator_apply("P3", label, phi)
    assert P3.j_max == 2.5
    assert P3(IDENTITY) == pytest.approx(1j * 1.3 * phi(IDENTITY))
    x = random_su2(rng, 10)
    for X in dq.GENERATORS:
        exact = dq.generator_apply(X, label, phi)
        pointwise = dq.generator_apply(X, label, lambda y: phi(y))
        assert np.allclose(exact(x), pointwise(x), atol=1e-8)
    with pytest.raises(ValueError):
        dq.generator_apply("Q1", label, phi)


def test_generator_commutators_follow_structure_constants():
    from isoquant.lie import iso3

    c = iso3().structure_constants
    label = dq.EuclideanIrrepLabel(0.8, 1.0)
    phi = hm.CarrierState.random(1.0, 2.0, np.random.default_rng(20))
    act = lambda a, st: dq.generator_apply(dq.GENERATORS[a], label, st)  # noqa: E731
    for a, b in product(range(6), repeat=2):
        lhs = act(a, act(b, phi)) - act(b, act(a, phi))
        rhs = phi.scaled(0)
        for k in range(6):
            if c[a, b, k]:
                rhs = rhs + act(k, phi).scaled(c[a, b, k])
        assert np.max(np.abs((lhs - rhs).coeffs)) <= 1e-10


# ---------------------------------------------------------------- R-element


def test_tensor_state_evaluation():
    rng = np.random.default_rng(21)
    a, b = hm.CarrierState.random(0.5, 1.5, rng), hm.CarrierState.random(0.0, 1.0, rng)
    T = dq.TensorState.product(a, b)
    x1, x2 = random_su2(rng, 5), random_su2(rng, 5)
    assert np.allclose(T(x1, x2), a(x1) * b(x2))
    assert T.norm() == pytest.approx(a.norm() * b.norm())
    J = T.angular_momentum(2, 1)
    assert np.allclose(J(x1, x2), a(x1) * hm.angular_momentum_apply(2, b)(x2))


def test_r_element_trivial_and_inverse():
    rng = np.random.default_rng(22)
    Phi = dq.TensorState.random((0.5, 0.0), (1.5, 1.0), rng)
    x1, x2 = random_su2(rng, 10), random_su2(rng, 10)
    ident = dq.r_element_apply(dq.DoubleIrrepLabel(0.0, 0.5), dq.DoubleIrrepLabel(1.0, 0.0), Phi)
    assert np.max(np.abs(ident(x1, x2) - Phi(x1, x2))) <= 1e-14
    back = dq.r_slot_action(dq.r_slot_action(Phi, 0, 1, -0.8), 0, 1, 0.8)
    assert np.max(np.abs(back(x1, x2) - Phi(x1, x2))) <= 1e-12


def test_qybe_and_scrambled_order():
    rng = np.random.default_rng(23)
    for _ in range(20):
        labels = [dq.DoubleIrrepLabel(rng.uniform(0, 2 * np.pi), s) for s in (0.5, 0.0, 1.0)]
        Phi = dq.TensorState.random((0.5, 0.0, 1.0), (1.5, 1.0, 2.0), rng)
        assert dq.qybe_residual(labels, Phi, gsamples(rng, 3, 5)) <= 1e-12
    mu = [lab.mu for lab in labels]
    lhs = dq.r_slot_action(dq.r_slot_action(dq.r_slot_action(Phi, 1, 2, mu[1]), 0, 2, mu[0]), 0, 1, mu[0])
    wrong = dq.r_slot_action(dq.r_slot_action(dq.r_slot_action(Phi, 0, 2, mu[0]), 1, 2, mu[1]), 0, 1, mu[0])
    assert max(abs(lhs(*x) - wrong(*x)) for x in gsamples(rng, 3, 10)) > 1e-3
    zero = [dq.DoubleIrrepLabel(0.0, 0.5)] + labels[1:]
    assert dq.qybe_residual(zero, Phi, gsamples(rng, 3, 5)) <= 1e-12


def test_r_kappa_matches_r_element_and_scaling():
    rng = np.random.default_rng(24)
    Phi = dq.TensorState.random((0.5, 1.0), (1.5, 2.0), rng)
    M, kappa = 1.7, 0.3
    l1, l2 = dq.EuclideanIrrepLabel(M, 0.5), dq.EuclideanIrrepLabel(1.0, 1.0)
    rk = dq.r_kappa_apply(l1, l2, kappa, Phi)
    re = dq.r_element_apply(dq.DoubleIrrepLabel(kappa * M, 0.5), dq.DoubleIrrepLabel(0.0, 1.0), Phi)
    for x in gsamples(rng, 2, 10):
        assert abs(rk(*x) - re(*x)) <= 1e-12
    scaled = dq.r_kappa_apply(dq.EuclideanIrrepLabel(4 * M, 0.5), l2, kappa / 4, Phi)
    for x in gsamples(rng, 2, 10):
        assert rk(*x) == scaled(*x)


def test_r_kappa_domain_and_trivial_cases():
    rng = np.random.default_rng(25)
    Phi = dq.TensorState.random((0.0, 0.0), (1.0, 1.0), rng)
    l2 = dq.EuclideanIrrepLabel(1.0, 0.0)
    with pytest.raises(dq.KappaDomainError):
        dq.r_kappa_apply(dq.EuclideanIrrepLabel(10.0, 0.0), l2, 1.0, Phi)
    zero = dq.EuclideanIrrepLabel(0.0, 0.0)
    x = gsamples(rng, 2, 5)
    assert dq.r_limit_residual(zero, l2, 0.1, Phi, x) <= 1e-14
    rc = dq.classical_r_apply(zero, l2, Phi)
    assert all(rc(*xx) == 0 for xx in x)
    near = dq.r_kappa_apply(dq.EuclideanIrrepLabel(1.0, 0.0), l2, 1e-9, Phi)
    assert all(abs(near(*xx) - Phi(*xx)) < 1e-7 for xx in x)


def test_r_limit_is_second_order():
    rng = np.random.default_rng(26)
    Phi = dq.TensorState.random((0.5, 0.0), (1.5, 2.0), rng)
    l1, l2 = dq.EuclideanIrrepLabel(1.0, 0.5), dq.EuclideanIrrepLabel(0.7, 0.0)
    x = gsamples(rng, 2, 20)
    res = np.array([dq.r_limit_residual(l1, l2, k, Phi, x) for k in 0.1 * 0.5 ** np.arange(8)])
    ratios = res[:-1] / res[1:]
    assert np.all((ratios >= 3.5) & (ratios <= 4.5))
    assert 1.8 <= np.log2(ratios.mean()) <= 2.2


def test_r_limit_constant_is_stable():
    rng = np.random.default_rng(27)
    l1, l2 = dq.EuclideanIrrepLabel(1.0, 0.5), dq.EuclideanIrrepLabel(0.7, 0.0)
    x = gsamples(rng, 2, 20)
    C = [dq.r_limit_residual(l1, l2, 0.01, dq.TensorState.random((0.5, 0.0), (1.5, 2.0), rng), x) / 1e-4 for _ in range(10)]
    print(f"second-order constant C in [{min(C):.3f}, {max(C):.3f}]")
    assert max(C) / min(C) <= 10


def test_r_kappa_expands_to_exp_of_rotation():
    # d/dkappa (R_kappa Phi) at 0 equals i r Phi
    rng = np.random.default_rng(28)
    Phi = dq.TensorState.random((0.5, 1.0), (1.5, 1.0), rng)
    l1, l2 = dq.EuclideanIrrepLabel(2.0, 0.5), dq.EuclideanIrrepLabel(1.0, 1.0)
    h = 1e-5
    plus = dq.r_kappa_apply(l1, l2, h, Phi)
    for x1, x2 in gsamples(rng, 2, 5):
        k = dq.momentum_on_sphere(x1, 2.0)
        direct = Phi(x1, su2_mul(exp_kappa(k, h), x2))
        assert plus(x1, x2) == pytest.approx(direct)
        deriv = (plus(x1, x2) - Phi(x1, x2)) / h
        assert deriv == pytest.approx(1j * dq.classical_r_apply(l1, l2, Phi)(x1, x2), abs=1e-4)


def test_momentum_on_sphere():
    assert np.allclose(dq.momentum_on_sphere(IDENTITY, 2.5), [0, 0, 2.5])
    x = random_su2(np.random.default_rng(29), 10)
    assert np.allclose(np.linalg.norm(dq.momentum_on_sphere(x, 2.5), axis=-1), 2.5)


def test_momentum_addition_matches_group_product():
    k1, k2 = np.array([0.3, 0.1, -0.2]), np.array([-0.1, 0.4, 0.2])
    lhs = exp_kappa(momentum_add_exact(k1, k2, 0.8), 0.8)
    assert np.allclose(lhs, su2_mul(exp_kappa(k1, 0.8), exp_kappa(k2, 0.8)))
