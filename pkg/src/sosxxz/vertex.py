"""Six-vertex R-matrix, boundary K-matrices, monodromy and transfer matrices.

Everything here lives in the vertex picture: the trigonometric six-vertex
R-matrix with crossing parameter eta, the general non-diagonal boundary
matrices, the inhomogeneous bulk monodromy T and its hatted partner, the
double-row monodromy matrices around either boundary, the open-chain
transfer matrix, and the boundary Hamiltonian together with its
reconstruction from the transfer-matrix derivative.
"""

from __future__ import annotations

from cmath import cosh, exp, sinh
from functools import reduce

import numpy as np

from . import tensor as tn
from .errors import DegenerateParameter, FormMismatch, NonIdentityResidue, NotHomogeneous
from .params import ModelParams, assert_generic, sample_points
from .report import ResidualReport
from .tensor import Operator

AUX = "a0"


def site_legs(N: int) -> tuple[str, ...]:
    return tuple(f"s{i}" for i in range(1, N + 1))


def chain_legs(N: int, aux: str = AUX) -> tuple[str, ...]:
    return (aux,) + site_legs(N)


def gamma_sign(N: int) -> complex:
    return complex((-1) ** N)


def gamma_hat(lam: complex, p: ModelParams) -> complex:
    v = gamma_sign(p.N)
    for x in p.xi:
        v *= sinh(lam + x - p.eta) * sinh(lam + x + p.eta)
    return v


def gamma_tilde(lam: complex, p: ModelParams) -> complex:
    v = gamma_sign(p.N)
    for x in p.xi:
        v *= sinh(lam + x) * sinh(lam + x + 2 * p.eta)
    return v


def c1(p: ModelParams) -> complex:
    return -8 * sinh(p.delta) * sinh(p.delta_bar - p.eta) * sinh(p.zeta) * sinh(p.zeta_bar - p.eta)


def r4(lam: complex, eta: complex) -> np.ndarray:
    """Six-vertex R-matrix as a raw 4x4 block."""
    sl, se = sinh(lam), sinh(eta)
    sle = sinh(lam + eta)
    return np.array(
        [
            [sle, 0, 0, 0],
            [0, sl, se, 0],
            [0, se, sl, 0],
            [0, 0, 0, sle],
        ],
        dtype=complex,
    )


def dr4(lam: complex, eta: complex) -> np.ndarray:
    """Analytic lambda-derivative of the R-matrix block."""
    cl = cosh(lam)
    cle = cosh(lam + eta)
    return np.array(
        [
            [cle, 0, 0, 0],
            [0, cl, 0, 0],
            [0, 0, cl, 0],
            [0, 0, 0, cle],
        ],
        dtype=complex,
    )


def r_matrix(lam: complex, p: ModelParams, legs=("v1", "v2")) -> Operator:
    return tn.on(r4(lam, p.eta), legs)


def k2_minus(lam: complex, delta: complex, zeta: complex, tau: complex, eps: float) -> np.ndarray:
    """General boundary matrix K_-(lambda; delta, zeta, tau) as a 2x2 block."""
    d1 = sinh(delta + lam)
    d2 = sinh(zeta + lam)
    if abs(d1) <= eps or abs(d2) <= eps:
        raise DegenerateParameter("K_- denominator sinh(delta+lam) or sinh(zeta+lam) vanishes")
    den = 2 * d1 * d2
    cp = cosh(delta + zeta)
    cm = cosh(delta - zeta)
    s2 = sinh(2 * lam)
    return np.array(
        [
            [(cp * exp(-lam) - cm * exp(lam)) / den, exp(-tau) * s2 / den],
            [-exp(tau) * s2 / den, (cp * exp(lam) - cm * exp(-lam)) / den],
        ],
        dtype=complex,
    )


def dk2_minus(lam: complex, delta: complex, zeta: complex, tau: complex, eps: float) -> np.ndarray:
    """Analytic lambda-derivative of the K_- block (quotient rule)."""
    d1 = sinh(delta + lam)
    d2 = sinh(zeta + lam)
    if abs(d1) <= eps or abs(d2) <= eps:
        raise DegenerateParameter("K_- denominator vanishes in derivative")
    den = 2 * d1 * d2
    dden = 2 * sinh(delta + zeta + 2 * lam)
    cp = cosh(delta + zeta)
    cm = cosh(delta - zeta)
    s2 = sinh(2 * lam)
    c2 = cosh(2 * lam)
    num = np.array(
        [
            [cp * exp(-lam) - cm * exp(lam), exp(-tau) * s2],
            [-exp(tau) * s2, cp * exp(lam) - cm * exp(-lam)],
        ],
        dtype=complex,
    )
    dnum = np.array(
        [
            [-cp * exp(-lam) - cm * exp(lam), 2 * exp(-tau) * c2],
            [-2 * exp(tau) * c2, cp * exp(lam) + cm * exp(-lam)],
        ],
        dtype=complex,
    )
    return (dnum * den - num * dden) / den**2


def k2(lam: complex, side: str, p: ModelParams) -> np.ndarray:
    """Boundary block: K_- at lambda, or K_+(lam) = K_-(-lam-eta; barred)."""
    if side in ("minus", "left"):
        return k2_minus(lam, p.delta, p.zeta, p.tau, p.eps_pole)
    if side in ("plus", "right"):
        return k2_minus(-lam - p.eta, p.delta_bar, p.zeta_bar, p.tau_bar, p.eps_pole)
    raise ValueError(f"unknown side {side!r}")


def k_matrix(lam: complex, side: str, p: ModelParams, leg: str = AUX) -> Operator:
    return tn.on(k2(lam, side, p), (leg,))


def bulk_monodromy(lam: complex, p: ModelParams, aux: str = AUX) -> Operator:
    """T_0(lam) = R_{01}(lam - xi_1) ... R_{0N}(lam - xi_N)."""
    legs = chain_legs(p.N, aux)
    factors = [
        tn.embed(tn.on(r4(lam - p.xi[k], p.eta), (aux, f"s{k + 1}")), legs)
        for k in range(p.N)
    ]
    return reduce(lambda a, b: a @ b, factors)


def hat_monodromy(lam: complex, p: ModelParams, aux: str = AUX, via_inverse: bool = False) -> Operator:
    """That_0(lam) = R_{N0}(lam + xi_N) ... R_{10}(lam + xi_1).

    With ``via_inverse`` the equivalent form gamma_hat(lam) T_0(-lam)^{-1}
    is used instead (raises DegenerateParameter if T_0(-lam) is singular).
    """
    legs = chain_legs(p.N, aux)
    if via_inverse:
        t = bulk_monodromy(-lam, p, aux)
        try:
            inv = np.linalg.inv(t.data)
        except np.linalg.LinAlgError as exc:
            raise DegenerateParameter("T_0(-lam) is singular") from exc
        if not np.all(np.isfinite(inv.view(float))) or tn.max_abs(inv) * np.finfo(float).eps * t.dim > 1e-4:
            raise DegenerateParameter("T_0(-lam) is numerically singular")
        return tn.on(gamma_hat(lam, p) * inv, legs)
    factors = [
        tn.embed(tn.on(r4(lam + p.xi[k], p.eta), (f"s{k + 1}", aux)), legs)
        for k in reversed(range(p.N))
    ]
    return reduce(lambda a, b: a @ b, factors)


def double_row(lam: complex, side: str, p: ModelParams, aux: str = AUX) -> Operator:
    """Double-row monodromy: U_- for side "minus", U_+^{t_0} for side "plus"."""
    assert_generic(p, [lam])
    legs = chain_legs(p.N, aux)
    if side == "minus":
        t = bulk_monodromy(lam, p, aux)
        that = hat_monodromy(lam, p, aux)
        km = tn.embed(k_matrix(lam, "minus", p, aux), legs)
        return t @ km @ that
    if side == "plus":
        t_t = tn.partial_transpose(bulk_monodromy(lam, p, aux), aux)
        that_t = tn.partial_transpose(hat_monodromy(lam, p, aux), aux)
        kp_t = tn.embed(tn.on(k2(lam, "plus", p).T, (aux,)), legs)
        return t_t @ kp_t @ that_t
    raise ValueError(f"unknown side {side!r}")


def double_row_blocks(lam: complex, side: str, p: ModelParams) -> dict[str, Operator]:
    """Named 2x2 blocks over the auxiliary space of the double-row matrix.

    The "plus" side follows the transposed layout, whose off-diagonal
    blocks are C_+ (upper) and B_+ (lower).
    """
    u = double_row(lam, side, p)
    if side == "minus":
        names = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}
    else:
        names = {"A": (0, 0), "C": (0, 1), "B": (1, 0), "D": (1, 1)}
    return {name: tn.block(u, AUX, r, c) for name, (r, c) in names.items()}


def transfer_xxz(lam: complex, p: ModelParams, tol: float = 1e-11) -> Operator:
    """Open-chain transfer matrix; both trace forms are computed and compared."""
    legs = chain_legs(p.N)
    um = double_row(lam, "minus", p)
    kp = tn.embed(tn.on(k2(lam, "plus", p), (AUX,)), legs)
    form1 = tn.partial_trace(kp @ um, AUX)

    up_t = double_row(lam, "plus", p)
    km_t = tn.embed(tn.on(k2(lam, "minus", p).T, (AUX,)), legs)
    form2 = tn.partial_trace(km_t @ up_t, AUX)

    res = tn.rel_residual(form1, form2)
    if res > tol:
        raise FormMismatch(f"transfer-matrix trace forms disagree: {res:.3e}")
    return form1


def hamiltonian_direct(p: ModelParams) -> Operator:
    """Open XXZ Hamiltonian with general non-diagonal boundary fields.

    This is the conserved charge produced by the transfer-matrix
    derivative for the K-matrices used here: site 1 carries the boundary
    adjacent to K_+ (barred parameters), site N the one adjacent to K_-.
    The sign pattern of the boundary fields is fixed by that derivative.
    """
    N, eta = p.N, p.eta
    legs = site_legs(N)
    h = Operator(np.zeros((2**N, 2**N), dtype=complex), legs)
    for i in range(1, N):
        a, b = f"s{i}", f"s{i + 1}"
        h = h + tn.embed(tn.on(np.kron(tn.SX, tn.SX), (a, b)), legs)
        h = h + tn.embed(tn.on(np.kron(tn.SY, tn.SY), (a, b)), legs)
        h = h + cosh(eta) * tn.embed(tn.on(np.kron(tn.SZ, tn.SZ), (a, b)), legs)

    def boundary_term(delta, zeta, tau, leg, z_sign, xy_sign):
        pref = sinh(eta) / (sinh(zeta) * sinh(delta))
        m = z_sign * cosh(zeta) * cosh(delta) * tn.SZ + xy_sign * (
            sinh(tau) * tn.SX - 1j * cosh(tau) * tn.SY
        )
        return pref * tn.embed(tn.on(m, (leg,)), legs)

    h = h + boundary_term(p.delta_bar, p.zeta_bar, p.tau_bar, "s1", +1, +1)
    h = h + boundary_term(p.delta, p.zeta, p.tau, f"s{N}", -1, -1)
    return h


def transfer_at_zero_scalar(p: ModelParams) -> complex:
    """Scalar value of T_XXZ(0), which is a multiple of the identity."""
    return sinh(p.eta) ** (2 * p.N) * complex(np.trace(k2(0, "plus", p)))


def transfer_norm_constant(p: ModelParams) -> complex:
    """Normalization making the transfer derivative reproduce the Hamiltonian:
    H = transfer_norm_constant * d/dlam T_XXZ(lam)|_0 + const."""
    return sinh(p.eta) / transfer_at_zero_scalar(p)


def transfer_derivative_at_zero(p: ModelParams) -> Operator:
    """d/dlam T_XXZ(lam) at lam = 0 via the product rule (homogeneous chain).

    Each factor of tr_0 { K_+ R_{01}..R_{0N} K_- R_{N0}..R_{10} } is
    differentiated analytically.
    """
    if not p.homogeneous():
        raise NotHomogeneous("transfer-matrix derivative needs xi_m = 0")
    N = p.N
    legs = chain_legs(N)

    def emb(mat, on_legs):
        return tn.embed(tn.on(mat, on_legs), legs)

    factors = []
    dfactors = []
    factors.append(emb(k2(0, "plus", p), (AUX,)))
    dfactors.append(emb(-dk2_minus(-p.eta, p.delta_bar, p.zeta_bar, p.tau_bar, p.eps_pole), (AUX,)))
    for k in range(1, N + 1):
        factors.append(emb(r4(0, p.eta), (AUX, f"s{k}")))
        dfactors.append(emb(dr4(0, p.eta), (AUX, f"s{k}")))
    factors.append(emb(k2(0, "minus", p), (AUX,)))
    dfactors.append(emb(dk2_minus(0, p.delta, p.zeta, p.tau, p.eps_pole), (AUX,)))
    for k in reversed(range(1, N + 1)):
        factors.append(emb(r4(0, p.eta), (f"s{k}", AUX)))
        dfactors.append(emb(dr4(0, p.eta), (f"s{k}", AUX)))

    total = Operator(np.zeros((2 ** (N + 1),) * 2, dtype=complex), legs)
    for j in range(len(factors)):
        prod = None
        for i, f in enumerate(factors):
            g = dfactors[i] if i == j else f
            prod = g if prod is None else prod @ g
        total = total + prod
    return tn.partial_trace(total, AUX)


def hamiltonian(p: ModelParams, mode: str = "direct", tol: float = 1e-8):
    """Hamiltonian builder.

    mode "direct" returns (H, 0.0).  mode "from_transfer" returns
    (H_candidate, kappa) with H_candidate = c1 * T'(0) and kappa the
    measured identity shift H_candidate - H_direct = kappa * Id; raises
    NonIdentityResidue if the difference is not a multiple of the identity.
    """
    if mode == "direct":
        return hamiltonian_direct(p), 0.0
    if mode != "from_transfer":
        raise ValueError(f"unknown mode {mode!r}")
    h_cand = transfer_norm_constant(p) * transfer_derivative_at_zero(p)
    h_dir = hamiltonian_direct(p)
    diff = h_cand.data - h_dir.data
    kappa = complex(np.trace(diff) / diff.shape[0])
    resid = tn.max_abs(diff - kappa * np.eye(diff.shape[0])) / max(tn.max_abs(h_cand), 1e-300)
    if resid > tol:
        raise NonIdentityResidue(f"H_candidate - H_direct deviates from identity: {resid:.3e}")
    return h_cand, kappa


# ----------------------------------------------------------------------
# identity checks


def ybe_residual(l1: complex, l2: complex, l3: complex, eta: complex) -> float:
    legs = ("v1", "v2", "v3")

    def rr(x, a, b):
        return tn.embed(tn.on(r4(x, eta), (a, b)), legs)

    lhs = rr(l1 - l2, "v1", "v2") @ rr(l1 - l3, "v1", "v3") @ rr(l2 - l3, "v2", "v3")
    rhs = rr(l2 - l3, "v2", "v3") @ rr(l1 - l3, "v1", "v3") @ rr(l1 - l2, "v1", "v2")
    return tn.rel_residual(lhs, rhs)


def unitarity_residual(lam: complex, eta: complex) -> float:
    lhs = r4(lam, eta) @ tn.swapped4(r4(-lam, eta))
    rhs = -sinh(lam - eta) * sinh(lam + eta) * np.eye(4)
    return tn.rel_residual(lhs, rhs)


def z2_residual(lam: complex, eta: complex) -> float:
    yy = np.kron(tn.SY, tn.SY)
    r = r4(lam, eta)
    return tn.rel_residual(yy @ r @ yy, r)


def crossing_residual(lam: complex, eta: complex) -> float:
    y1 = np.kron(tn.SY, tn.ID2)
    lhs = -y1 @ tn.transpose_first4(r4(-lam - eta, eta)) @ y1
    rhs = tn.swapped4(r4(lam, eta))
    return tn.rel_residual(lhs, rhs)


def reflection_residual(l1: complex, l2: complex, p: ModelParams) -> float:
    """Boundary Yang-Baxter equation for K_- on two auxiliary legs."""
    legs = ("v1", "v2")
    eta = p.eta

    def rr(x):
        return tn.on(r4(x, eta), legs)

    def rs(x):
        return tn.on(tn.swapped4(r4(x, eta)), legs)

    k1 = tn.embed(tn.on(k2(l1, "minus", p), ("v1",)), legs)
    k2_ = tn.embed(tn.on(k2(l2, "minus", p), ("v2",)), legs)
    lhs = rr(l1 - l2) @ k1 @ rs(l1 + l2) @ k2_
    rhs = k2_ @ rr(l1 + l2) @ k1 @ rs(l1 - l2)
    return tn.rel_residual(lhs, rhs)


def dual_reflection_residual(l1: complex, l2: complex, p: ModelParams) -> float:
    """Dual boundary Yang-Baxter equation for K_+."""
    legs = ("v1", "v2")
    eta = p.eta

    def rr(x):
        return tn.on(r4(x, eta), legs)

    def rs(x):
        return tn.on(tn.swapped4(r4(x, eta)), legs)

    k1 = tn.embed(tn.on(k2(l1, "plus", p).T, ("v1",)), legs)
    k2_ = tn.embed(tn.on(k2(l2, "plus", p).T, ("v2",)), legs)
    lhs = rr(l2 - l1) @ k1 @ rs(-(l1 + l2) - 2 * eta) @ k2_
    rhs = k2_ @ rr(-(l1 + l2) - 2 * eta) @ k1 @ rs(l2 - l1)
    return tn.rel_residual(lhs, rhs)


def reflection_algebra_residual(l1: complex, l2: complex, p: ModelParams) -> float:
    """Reflection-algebra relation satisfied by the double-row matrix U_-."""
    a1, a2 = "x1", "x2"
    legs = (a1, a2) + site_legs(p.N)
    eta = p.eta

    def rr(x):
        return tn.embed(tn.on(r4(x, eta), (a1, a2)), legs)

    def rs(x):
        return tn.embed(tn.on(tn.swapped4(r4(x, eta)), (a1, a2)), legs)

    u1 = tn.embed(double_row(l1, "minus", p), legs, target_legs=(a1,) + site_legs(p.N))
    u2 = tn.embed(double_row(l2, "minus", p), legs, target_legs=(a2,) + site_legs(p.N))
    lhs = rr(l1 - l2) @ u1 @ rs(l1 + l2) @ u2
    rhs = u2 @ rr(l1 + l2) @ u1 @ rs(l1 - l2)
    return tn.rel_residual(lhs, rhs)


def dual_reflection_algebra_residual(l1: complex, l2: complex, p: ModelParams) -> float:
    """Dual reflection-algebra relation satisfied by U_+^{t_0}."""
    a1, a2 = "x1", "x2"
    legs = (a1, a2) + site_legs(p.N)
    eta = p.eta

    def rr(x):
        return tn.embed(tn.on(r4(x, eta), (a1, a2)), legs)

    def rs(x):
        return tn.embed(tn.on(tn.swapped4(r4(x, eta)), (a1, a2)), legs)

    u1 = tn.embed(double_row(l1, "plus", p), legs, target_legs=(a1,) + site_legs(p.N))
    u2 = tn.embed(double_row(l2, "plus", p), legs, target_legs=(a2,) + site_legs(p.N))
    lhs = rr(l2 - l1) @ u1 @ rs(-(l1 + l2) - 2 * eta) @ u2
    rhs = u2 @ rr(-(l1 + l2) - 2 * eta) @ u1 @ rs(l2 - l1)
    return tn.rel_residual(lhs, rhs)


VERTEX_CHECKS = (
    "ybe",
    "unitarity",
    "z2",
    "crossing",
    "reflection",
    "dual_reflection",
    "reflection_algebra",
    "dual_reflection_algebra",
)


def vertex_identity_suite(
    check: str, p: ModelParams, seed: int = 0, trials: int = 20
) -> ResidualReport:
    """Evaluate one named vertex identity at seeded random spectral points."""
    rng = np.random.default_rng(seed)
    residuals = []
    for _ in range(trials):
        pts = sample_points(rng, p, 3)
        if check == "ybe":
            residuals.append(ybe_residual(pts[0], pts[1], pts[2], p.eta))
        elif check == "unitarity":
            residuals.append(unitarity_residual(pts[0], p.eta))
        elif check == "z2":
            residuals.append(z2_residual(pts[0], p.eta))
        elif check == "crossing":
            residuals.append(crossing_residual(pts[0], p.eta))
        elif check == "reflection":
            residuals.append(reflection_residual(pts[0], pts[1], p))
        elif check == "dual_reflection":
            residuals.append(dual_reflection_residual(pts[0], pts[1], p))
        elif check == "reflection_algebra":
            residuals.append(reflection_algebra_residual(pts[0], pts[1], p))
        elif check == "dual_reflection_algebra":
            residuals.append(dual_reflection_algebra_residual(pts[0], pts[1], p))
        else:
            raise ValueError(f"unknown vertex check {check!r}")
    return ResidualReport(check=check, residuals=tuple(residuals), seed=seed)
