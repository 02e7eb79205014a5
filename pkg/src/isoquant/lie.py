"""Structure constants and tensor calculus for su(2), iso(3) and their
lambda-deformed relatives.

Tensors are plain numpy arrays indexed in the basis order of the algebra.
For iso(3) that order is ``(P1, P2, P3, J1, J2, J3)``, so an element of
``g (x) g`` is a 6x6 array ``T`` with ``T[alpha, beta]`` the coefficient of
``X_alpha (x) X_beta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-12


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


EPS = levi_civita()


@dataclass(frozen=True)
class LieAlgebraData:
    """A real Lie algebra given by structure constants.

    ``structure_constants[a, b, c]`` is the coefficient of ``X_c`` in
    ``[X_a, X_b]``. ``pairing`` is the Gram matrix of the invariant form.
    """

    name: str
    structure_constants: np.ndarray
    basis_labels: tuple[str, ...]
    pairing: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def basis(self, label: str) -> np.ndarray:
        e = np.zeros(self.dim)
        e[self.basis_labels.index(label)] = 1.0
        return e


def su2() -> LieAlgebraData:
    """su(2) in the basis J1, J2, J3 with [J_a, J_b] = eps_abc J_c."""
    return LieAlgebraData(
        name="su2",
        structure_constants=EPS.copy(),
        basis_labels=("J1", "J2", "J3"),
        pairing=np.eye(3),
    )


def deformed_algebra(lam: float = 0.0, signature: str = "euclidean") -> LieAlgebraData:
    """The six-dimensional algebra spanned by P_a, J_a with

        [J_a, J_b] = eps_abc J^c,  [J_a, P_b] = eps_abc P^c,
        [P_a, P_b] = lam eps_abc J^c,

    indices raised with delta (euclidean) or diag(1, -1, -1) (lorentzian).
    ``lam = 0`` with euclidean signature is iso(3).
    """
    if signature == "euclidean":
        eta = np.ones(3)
    elif signature == "lorentzian":
        eta = np.array([1.0, -1.0, -1.0])
    else:
        raise ValueError(f"unknown signature {signature!r}")

    raised = EPS * eta[None, None, :]
    c = np.zeros((6, 6, 6))
    P, J = slice(0, 3), slice(3, 6)
    c[J, J, J] = raised
    c[J, P, P] = raised
    c[P, J, P] = -raised.transpose(1, 0, 2)
    c[P, P, J] = lam * raised

    pairing = np.zeros((6, 6))
    pairing[P, J] = np.diag(eta)
    pairing[J, P] = np.diag(eta)
    name = "iso3" if (lam == 0 and signature == "euclidean") else f"comrels(lam={lam},{signature})"
    return LieAlgebraData(
        name=name,
        structure_constants=c,
        basis_labels=("P1", "P2", "P3", "J1", "J2", "J3"),
        pairing=pairing,
    )


def iso3() -> LieAlgebraData:
    return deformed_algebra(0.0, "euclidean")


def _check_dim(alg: LieAlgebraData, *arrays: np.ndarray) -> None:
    for a in arrays:
        if any(n != alg.dim for n in np.shape(a)):
            raise ValueError(f"array of shape {np.shape(a)} does not match dim {alg.dim} of {alg.name}")


def bracket(alg: LieAlgebraData, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    _check_dim(alg, x, y)
    return np.einsum("a,b,abc->c", x, y, alg.structure_constants)


def ad(alg: LieAlgebraData, x: np.ndarray) -> np.ndarray:
    """Matrix of ad_x, acting on coefficient vectors from the left."""
    _check_dim(alg, x)
    return np.einsum("a,abc->cb", x, alg.structure_constants)


def jacobi_residual(alg: LieAlgebraData) -> float:
    """max |[[X_a, X_b], X_c] + cyclic| over all basis triples."""
    c = alg.structure_constants
    # [[X_a,X_b],X_c] = c_ab^e c_ec^f X_f
    t = np.einsum("abe,ecf->abcf", c, c)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc)))


def classical_r(alg: LieAlgebraData | None = None) -> np.ndarray:
    """r = P_a (x) J_a for iso(3)."""
    if alg is not None and alg.name != "iso3":
        raise ValueError("the classical r-matrix is only provided for iso(3)")
    r = np.zeros((6, 6))
    r[np.arange(3), 3 + np.arange(3)] = 1.0
    return r


def pairing_tensor(alg: LieAlgebraData) -> np.ndarray:
    """Symmetric element of g (x) g dual to the invariant pairing.

    Normalised as half the split Casimir, so that ``r + sigma(r)`` equals
    twice this tensor for a compatible r-matrix.
    """
    return 0.5 * np.linalg.inv(alg.pairing)


def symmetric_part(r: np.ndarray) -> np.ndarray:
    return 0.5 * (r + r.T)


def act_on_tensor(alg: LieAlgebraData, x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """(ad_x (x) 1 (x) ... + ... + 1 (x) ... (x) ad_x) t for a tensor of any rank."""
    m = ad(alg, x)
    out = np.zeros_like(t, dtype=np.result_type(m, t))
    for axis in range(t.ndim):
        moved = np.tensordot(m, t, axes=([1], [axis]))
        out += np.moveaxis(moved, 0, axis)
    return out


def invariance_defect(alg: LieAlgebraData, t: np.ndarray) -> float:
    _check_dim(alg, t)
    worst = 0.0
    for e in np.eye(alg.dim):
        worst = max(worst, float(np.max(np.abs(act_on_tensor(alg, e, t)))))
    return worst


def cybe_defect(alg: LieAlgebraData, r: np.ndarray) -> np.ndarray:
    """[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23] as a rank-3 tensor."""
    _check_dim(alg, r)
    c = alg.structure_constants
    t12_13 = np.einsum("ab,gd,agm->mbd", r, r, c)
    t12_23 = np.einsum("ab,gd,bgm->amd", r, r, c)
    t13_23 = np.einsum("ab,gd,bdm->agm", r, r, c)
    return t12_13 + t12_23 + t13_23


def cocommutator(alg: LieAlgebraData, r: np.ndarray, x: np.ndarray) -> np.ndarray:
    """delta(x) = (ad_x (x) 1 + 1 (x) ad_x) r."""
    _check_dim(alg, r, x)
    return act_on_tensor(alg, x, r)


def cocycle_defect(alg: LieAlgebraData, r: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    lhs = cocommutator(alg, r, bracket(alg, x, y))
    rhs = act_on_tensor(alg, x, cocommutator(alg, r, y)) - act_on_tensor(alg, y, cocommutator(alg, r, x))
    return lhs - rhs


def dual_bracket(
    alg: LieAlgebraData, xi: np.ndarray, eta: np.ndarray, r: np.ndarray | None = None
) -> np.ndarray:
    """Lie bracket on g* induced by the co-commutator, transported to g.

    ``xi`` and ``eta`` are g-coefficient vectors standing for the functionals
    ``<xi, .>`` and ``<eta, .>``; the result is returned the same way. With
    the iso(3) pairing, ``dual_bracket(J1, J2) == J3``.
    """
    if r is None:
        r = classical_r(alg)
    _check_dim(alg, xi, eta, r)
    g = alg.pairing
    xi_flat, eta_flat = g @ xi, g @ eta
    deltas = np.stack([cocommutator(alg, r, e) for e in np.eye(alg.dim)])
    covector = np.einsum("a,b,gab->g", xi_flat, eta_flat, deltas)
    return np.linalg.solve(g, covector)
