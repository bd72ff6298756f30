"""Dynamical (SOS) layer: gauge matrices, dynamical R-matrix, monodromies.

Operator-valued dynamical shifts like theta - eta * sum_i sigma^z_i are
resolved per computational-basis configuration of the shift legs, read
off the input (column) state.  For shifts involving the auxiliary space
itself (which does not commute with the matrix it parameterizes) this
realizes the normal ordering in which the sigma^z argument acts first.
"""

from __future__ import annotations

from cmath import cosh, exp, sinh
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable

import numpy as np

from . import tensor as tn
from . import vertex as vx
from .errors import ConstraintViolated, DegenerateParameter
from .params import DynParams, ModelParams, sample_points
from .report import ResidualReport
from .tensor import Operator
from .vertex import AUX, chain_legs, site_legs


# ----------------------------------------------------------------------
# gauge (vertex-face) matrices


def gauge_s2(lam: complex, theta: complex, omega: complex, eps: float = 0.0) -> np.ndarray:
    """Local gauge matrix S(lam; theta, omega); det S = -2 e^{-omega} sinh(theta)."""
    if abs(sinh(theta)) <= eps:
        raise DegenerateParameter(f"gauge matrix singular: |sinh(theta)| <= {eps:.1e}")
    return exp(lam / 2) * np.array(
        [
            [exp(-(lam + theta + omega)), exp(-(lam - theta + omega))],
            [1.0, 1.0],
        ],
        dtype=complex,
    )


def gauge_s2_inv(lam: complex, theta: complex, omega: complex, eps: float = 0.0) -> np.ndarray:
    """Closed-form inverse of the gauge matrix."""
    if abs(sinh(theta)) <= eps:
        raise DegenerateParameter(f"gauge matrix singular: |sinh(theta)| <= {eps:.1e}")
    det_m = -2 * exp(-lam - omega) * sinh(theta)
    return (exp(-lam / 2) / det_m) * np.array(
        [
            [1.0, -exp(-(lam - theta + omega))],
            [-1.0, exp(-(lam + theta + omega))],
        ],
        dtype=complex,
    )


def gauge_s_tilde2(lam: complex, theta: complex, omega: complex, eps: float = 0.0) -> np.ndarray:
    """S-tilde = sigma^y S sigma^y."""
    return tn.SY @ gauge_s2(lam, theta, omega, eps) @ tn.SY


def gauge_s_tilde2_inv(lam: complex, theta: complex, omega: complex, eps: float = 0.0) -> np.ndarray:
    return tn.SY @ gauge_s2_inv(lam, theta, omega, eps) @ tn.SY


def gauge_s(lam: complex, theta: complex, omega: complex, leg: str = AUX) -> Operator:
    return tn.on(gauge_s2(lam, theta, omega), (leg,))


def gauge_s_tilde(lam: complex, theta: complex, omega: complex, leg: str = AUX) -> Operator:
    return tn.on(gauge_s_tilde2(lam, theta, omega), (leg,))


# ----------------------------------------------------------------------
# dynamical R-matrix and crossed L-operators


def dyn_r4(lam: complex, theta: complex, eta: complex, eps: float = 0.0) -> np.ndarray:
    """Dynamical R-matrix (trigonometric SOS weights) as a raw 4x4 block."""
    st = sinh(theta)
    if abs(st) <= eps:
        raise DegenerateParameter(f"|sinh(theta)| <= {eps:.1e} in dynamical R")
    sl, se = sinh(lam), sinh(eta)
    sle = sinh(lam + eta)
    return np.array(
        [
            [sle, 0, 0, 0],
            [0, sl * sinh(theta - eta) / st, se * sinh(theta - lam) / st, 0],
            [0, se * sinh(theta + lam) / st, sl * sinh(theta + eta) / st, 0],
            [0, 0, 0, sle],
        ],
        dtype=complex,
    )


_L_LEGS = ("c1", "c2")


def crossed_l4(lam: complex, theta: complex, eta: complex, kind: str = "L", eps: float = 0.0) -> np.ndarray:
    """Crossed L-operator on two legs as a raw 4x4 block.

    kind "L":    L^{t1}_{12}(lam; th) = R^{t1}_{12}(lam; th + eta sz_1) sinh(th - eta sz_2)/sinh th
    kind "Lhat": Lhat^{t1}_{21}(lam; th) = R^{t1}_{21}(lam; th - eta sz_1) sinh(th + eta sz_2)/sinh th
    """
    if abs(sinh(theta)) <= eps:
        raise DegenerateParameter("crossed L needs |sinh(theta)| > eps")
    sz2 = tn.leg_sz(_L_LEGS, "c2")
    # the sigma^z_1 argument acts first: resolve it on the columns of the
    # untransposed matrix, then transpose the first leg
    if kind == "L":
        base = tn.charge_resolved(
            _L_LEGS,
            [("c1", +1)],
            lambda c: tn.on(dyn_r4(lam, theta + eta * c, eta, eps), _L_LEGS),
        )
        pref = np.array([sinh(theta - eta * s) / sinh(theta) for s in sz2])
    elif kind == "Lhat":
        base = tn.charge_resolved(
            _L_LEGS,
            [("c1", -1)],
            lambda c: tn.on(tn.swapped4(dyn_r4(lam, theta + eta * c, eta, eps)), _L_LEGS),
        )
        pref = np.array([sinh(theta + eta * s) / sinh(theta) for s in sz2])
    else:
        raise ValueError(f"unknown crossed L kind {kind!r}")
    return tn.transpose_first4(base.data) @ np.diag(pref)


# ----------------------------------------------------------------------
# diagonal SOS boundary matrices


def k2_minus_diag(lam: complex, delta: complex, zeta: complex, eps: float = 0.0) -> np.ndarray:
    """Diagonalized boundary matrix of the height picture."""
    d1, d2 = sinh(delta + lam), sinh(zeta + lam)
    if abs(d1) <= eps or abs(d2) <= eps:
        raise DegenerateParameter("diagonal K_- denominator vanishes")
    return np.diag([sinh(delta - lam) / d1, sinh(zeta - lam) / d2]).astype(complex)


def k2_plus_diag(lam: complex, delta_bar: complex, zeta_bar: complex, eta: complex, eps: float = 0.0) -> np.ndarray:
    """K_+ of the height picture: K_-(-lam - eta; delta_bar, zeta_bar)."""
    return k2_minus_diag(-lam - eta, delta_bar, zeta_bar, eps)


def tilde_k2_plus(lam: complex, delta_bar: complex, zeta_bar: complex, eta: complex, eps: float = 0.0) -> np.ndarray:
    """sinh(tb - eta sz)/sinh(tb) * K_-(-lam-eta; db, zb), tb = db - zb (2x2 diagonal)."""
    tb = delta_bar - zeta_bar
    if abs(sinh(tb)) <= eps:
        raise DegenerateParameter("|sinh(delta_bar - zeta_bar)| too small")
    base = k2_minus_diag(-lam - eta, delta_bar, zeta_bar, eps)
    return np.diag([sinh(tb - eta) / sinh(tb), sinh(tb + eta) / sinh(tb)]) @ base


def tilde_k2_minus(lam: complex, delta: complex, zeta: complex, eta: complex, eps: float = 0.0) -> np.ndarray:
    """sinh(th - eta sz)/sinh(th) * K_+(-lam-eta; d, z) = ... * K_-(lam; d, z)."""
    th = delta - zeta
    if abs(sinh(th)) <= eps:
        raise DegenerateParameter("|sinh(delta - zeta)| too small")
    base = k2_minus_diag(lam, delta, zeta, eps)
    return np.diag([sinh(th - eta) / sinh(th), sinh(th + eta) / sinh(th)]) @ base


# ----------------------------------------------------------------------
# dynamical monodromy matrices


def dyn_monodromy(lam: complex, theta: complex, kind: str, p: ModelParams) -> Operator:
    """Dynamical monodromy matrices on legs (aux, s1..sN).

    kind "T":    R_{01}(lam-xi_1; th - eta sum_{i>1} sz_i) ... R_{0N}(lam-xi_N; th)
    kind "That": R_{N0}(lam+xi_N; th) ... R_{10}(lam+xi_1; th - eta sum_{i>1} sz_i)
    kind "V":    L^{t0}_{0N}(lam-xi_N; th + eta sum_{i<N} sz_i) ... L^{t0}_{01}(lam-xi_1; th)
    kind "Vhat": Lhat^{t0}_{10}(lam+xi_1; th) ... Lhat^{t0}_{N0}(lam+xi_N; th + eta sum_{i<N} sz_i)
    """
    N, eta, eps = p.N, p.eta, p.eps_pole
    legs = chain_legs(N)

    def t_factor(k: int) -> Operator:
        shift = [(f"s{i}", -1) for i in range(k + 1, N + 1)]
        return tn.charge_resolved(
            legs,
            shift,
            lambda c: tn.embed(
                tn.on(dyn_r4(lam - p.xi[k - 1], theta + eta * c, eta, eps), (AUX, f"s{k}")), legs
            ),
        )

    def that_factor(k: int) -> Operator:
        shift = [(f"s{i}", -1) for i in range(k + 1, N + 1)]
        return tn.charge_resolved(
            legs,
            shift,
            lambda c: tn.embed(
                tn.on(dyn_r4(lam + p.xi[k - 1], theta + eta * c, eta, eps), (f"s{k}", AUX)), legs
            ),
        )

    def v_factor(k: int) -> Operator:
        # sigma^z_0 resolves on columns of the untransposed factor, so the
        # auxiliary transposition is applied after the charge resolution
        shift = [(f"s{i}", +1) for i in range(1, k)] + [(AUX, +1)]
        base = tn.charge_resolved(
            legs,
            shift,
            lambda c: tn.embed(
                tn.on(dyn_r4(lam - p.xi[k - 1], theta + eta * c, eta, eps), (AUX, f"s{k}")), legs
            ),
        )
        below = tn.sz_sum(legs, [f"s{i}" for i in range(1, k)])
        szk = tn.leg_sz(legs, f"s{k}")
        pref = np.array(
            [sinh(theta + eta * (b - s)) / sinh(theta + eta * b) for b, s in zip(below, szk)]
        )
        return tn.partial_transpose(base, AUX) @ tn.column_diag(legs, pref)

    def vhat_factor(k: int) -> Operator:
        shift = [(f"s{i}", +1) for i in range(1, k)] + [(AUX, -1)]
        base = tn.charge_resolved(
            legs,
            shift,
            lambda c: tn.embed(
                tn.on(dyn_r4(lam + p.xi[k - 1], theta + eta * c, eta, eps), (f"s{k}", AUX)), legs
            ),
        )
        below = tn.sz_sum(legs, [f"s{i}" for i in range(1, k)])
        szk = tn.leg_sz(legs, f"s{k}")
        pref = np.array(
            [sinh(theta + eta * (b + s)) / sinh(theta + eta * b) for b, s in zip(below, szk)]
        )
        return tn.partial_transpose(base, AUX) @ tn.column_diag(legs, pref)

    if kind == "T":
        factors = [t_factor(k) for k in range(1, N + 1)]
    elif kind == "That":
        factors = [that_factor(k) for k in reversed(range(1, N + 1))]
    elif kind == "V":
        factors = [v_factor(k) for k in reversed(range(1, N + 1))]
    elif kind == "Vhat":
        factors = [vhat_factor(k) for k in range(1, N + 1)]
    else:
        raise ValueError(f"unknown monodromy kind {kind!r}")
    return reduce(lambda a, b: a @ b, factors)


def dyn_monodromy_inverse_form(lam: complex, theta: complex, kind: str, p: ModelParams) -> Operator:
    """That and Vhat from the inversion identities (two-path consistency)."""
    legs = chain_legs(p.N)
    if kind == "That":
        t = dyn_monodromy(-lam, theta, "T", p)
        return tn.on(vx.gamma_hat(lam, p) * np.linalg.inv(t.data), legs)
    if kind == "Vhat":
        v = dyn_monodromy(-lam - 2 * p.eta, theta, "V", p)
        return tn.on(vx.gamma_tilde(lam, p) * np.linalg.inv(v.data), legs)
    raise ValueError(f"no inverse form for kind {kind!r}")


# ----------------------------------------------------------------------
# dynamical double-row monodromy matrices and their blocks


def dyn_double_row(lam: complex, theta: complex, side: str, p: ModelParams) -> Operator:
    """U_-(lam; theta) for side "minus", U_+^{t_0}(lam; theta) for side "plus".

    The minus side uses the diagonal K_-(lam; delta, zeta); the plus side
    the diagonal K_+(lam) = K_-(-lam-eta; delta_bar, zeta_bar).
    """
    legs = chain_legs(p.N)
    if side == "minus":
        t = dyn_monodromy(lam, theta, "T", p)
        that = dyn_monodromy(lam, theta, "That", p)
        km = tn.embed(tn.on(k2_minus_diag(lam, p.delta, p.zeta, p.eps_pole), (AUX,)), legs)
        return t @ km @ that
    if side == "plus":
        v = dyn_monodromy(lam, theta, "V", p)
        vhat = dyn_monodromy(lam, theta, "Vhat", p)
        kp = tn.embed(
            tn.on(k2_minus_diag(-lam - p.eta, p.delta_bar, p.zeta_bar, p.eps_pole), (AUX,)), legs
        )
        return v @ kp @ vhat
    raise ValueError(f"unknown side {side!r}")


_BLOCK_INDEX = {
    "minus": {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)},
    # layout of U_+^{t_0}: upper-right block is C_+, lower-left is B_+
    "plus": {"A": (0, 0), "C": (0, 1), "B": (1, 0), "D": (1, 1)},
}

BLOCK_WEIGHT = {"A": 0, "D": 0, "B": -2, "C": +2}


def dyn_block(lam: complex, theta: complex, side: str, name: str, p: ModelParams) -> Operator:
    r, c = _BLOCK_INDEX[side][name]
    return tn.block(dyn_double_row(lam, theta, side, p), AUX, r, c)


@dataclass(frozen=True)
class DynOperator:
    """A dynamical-parameter-resolved operator with zero-weight metadata."""

    eval: Callable[[complex], Operator]
    weight: int

    def at(self, theta: complex) -> Operator:
        return self.eval(theta)


def dyn_block_family(lam: complex, side: str, name: str, p: ModelParams) -> DynOperator:
    return DynOperator(
        eval=lambda theta: dyn_block(lam, theta, side, name, p),
        weight=BLOCK_WEIGHT[name],
    )


def modified_d_minus(lam: complex, theta: complex, p: ModelParams) -> Operator:
    """Modified diagonal generator D-tilde of the minus reflection algebra."""
    legs = site_legs(p.N)
    a = dyn_block(lam, theta, "minus", "A", p)
    d = dyn_block(lam, theta, "minus", "D", p)
    sz = tn.sz_sum(legs, legs)
    s2 = sinh(2 * lam + p.eta)
    if abs(s2) <= p.eps_pole:
        raise DegenerateParameter("|sinh(2 lam + eta)| too small for modified D_-")
    for s in np.unique(sz):
        if abs(sinh(theta - p.eta * s)) <= p.eps_pole:
            raise DegenerateParameter("|sinh(theta - eta S^z)| too small for modified D_-")
    front = np.array([sinh(theta - p.eta * s + p.eta) / sinh(theta - p.eta * s) for s in sz])
    inner = np.array(
        [
            sinh(theta - p.eta * s + 2 * lam + p.eta)
            * sinh(p.eta)
            / (s2 * sinh(theta - p.eta * s + p.eta))
            for s in sz
        ]
    )
    f = tn.column_diag(legs, front)
    g = tn.column_diag(legs, inner)
    return f @ (d - g @ a)


# ----------------------------------------------------------------------
# gauge rows and auxiliary-space gauges with operator shifts


def gauge_row_minus(
    theta: complex,
    omega: complex,
    p: ModelParams,
    legs=None,
    extra_shift: tuple[tuple[str, int], ...] = (),
) -> Operator:
    """S_-({xi}; theta) = S_N(xi_N; theta) ... S_1(xi_1; theta - eta sum_{i>1} sz_i).

    ``extra_shift`` adds weighted legs to every factor's dynamical argument
    (used for the theta - eta sz_aux variants in the gauge relations).
    """
    legs = site_legs(p.N) if legs is None else tuple(legs)
    factors = []
    for k in reversed(range(1, p.N + 1)):
        shift = [(f"s{i}", -1) for i in range(k + 1, p.N + 1)] + list(extra_shift)
        factors.append(
            tn.charge_resolved(
                legs,
                shift,
                lambda c, k=k: tn.embed(
                    tn.on(gauge_s2(p.xi[k - 1], theta + p.eta * c, omega, p.eps_pole), (f"s{k}",)), legs
                ),
            )
        )
    return reduce(lambda a, b: a @ b, factors)


def gauge_row_plus(
    theta: complex,
    omega: complex,
    p: ModelParams,
    legs=None,
    extra_shift: tuple[tuple[str, int], ...] = (),
) -> Operator:
    """S_+({xi}; theta) = S_1(xi_1; theta) ... S_N(xi_N; theta + eta sum_{i<N} sz_i)."""
    legs = site_legs(p.N) if legs is None else tuple(legs)
    factors = []
    for k in range(1, p.N + 1):
        shift = [(f"s{i}", +1) for i in range(1, k)] + list(extra_shift)
        factors.append(
            tn.charge_resolved(
                legs,
                shift,
                lambda c, k=k: tn.embed(
                    tn.on(gauge_s2(p.xi[k - 1], theta + p.eta * c, omega, p.eps_pole), (f"s{k}",)), legs
                ),
            )
        )
    return reduce(lambda a, b: a @ b, factors)


def gauge_aux_shifted(
    lam: complex,
    theta: complex,
    omega: complex,
    p: ModelParams,
    sz_weight: int = -1,
    tilde: bool = False,
    inverse: bool = False,
    eta_offset: int = 0,
) -> Operator:
    """S_0(lam; theta + sz_weight * eta * S^z + eta_offset * eta) on the chain legs.

    ``tilde`` selects the sigma^y-conjugated gauge; ``inverse`` its inverse.
    """
    legs = chain_legs(p.N)
    build2 = (
        gauge_s_tilde2_inv if (tilde and inverse)
        else gauge_s_tilde2 if tilde
        else gauge_s2_inv if inverse
        else gauge_s2
    )
    shift = [(l, sz_weight) for l in site_legs(p.N)]
    return tn.charge_resolved(
        legs,
        shift,
        lambda c: tn.embed(
            tn.on(build2(lam, theta + p.eta * (c + eta_offset), omega, p.eps_pole), (AUX,)), legs
        ),
    )


# ----------------------------------------------------------------------
# SOS transfer matrices


def sos_transfer(mu: complex, theta: complex, which: str, p: ModelParams) -> Operator:
    """Height-picture transfer matrices with diagonal dressed boundaries.

    "SOS1": Tr_0 ( K~_+(mu; db, zb) U_-(mu; theta) )
    "SOS2": Tr_0 ( U_+^{t_0}(mu; theta) K~_-^{t_0}(mu; d, z) )
    """
    if which == "SOS1":
        kt = tilde_k2_plus(mu, p.delta_bar, p.zeta_bar, p.eta, p.eps_pole)
        a = dyn_block(mu, theta, "minus", "A", p)
        d = dyn_block(mu, theta, "minus", "D", p)
        return kt[0, 0] * a + kt[1, 1] * d
    if which == "SOS2":
        kt = tilde_k2_minus(mu, p.delta, p.zeta, p.eta, p.eps_pole)
        a = dyn_block(mu, theta, "plus", "A", p)
        d = dyn_block(mu, theta, "plus", "D", p)
        return kt[0, 0] * a + kt[1, 1] * d
    raise ValueError(f"unknown transfer kind {which!r}")


def constraint_residuals(p: ModelParams, s: int) -> tuple[float, float]:
    """Residuals of the two boundary constraints at sector s."""
    lhs = cosh(p.delta_bar - p.zeta_bar)
    base = p.delta - p.zeta - p.eta * s
    r1 = abs(lhs - cosh(base + p.tau_bar - p.tau - p.eta))
    r2 = abs(lhs - cosh(base - p.tau_bar + p.tau + p.eta))
    return float(r1), float(r2)


def require_constraints(p: ModelParams, s: int, tol: float = 1e-10) -> None:
    r1, r2 = constraint_residuals(p, s)
    if r1 > tol or r2 > tol:
        raise ConstraintViolated(
            f"boundary constraints fail at sector {s}: residuals {r1:.3e}, {r2:.3e}"
        )


def gauge_coefficient_matrix(lam: complex, s: int, shift: int, p: ModelParams) -> np.ndarray:
    """S^{-1}(-lam; th - eta s) K_+(lam) S(lam; th - eta (s + shift)) with th = delta - zeta.

    The off-diagonal entries of this 2x2 matrix must vanish (shift = -2 for
    the B coefficient, +2 for the C one) when the boundary constraints hold.
    """
    th = p.delta - p.zeta
    sinv = gauge_s2_inv(-lam, th - p.eta * s, p.tau, p.eps_pole)
    kp = vx.k2(lam, "plus", p)
    sm = gauge_s2(lam, th - p.eta * (s + shift), p.tau, p.eps_pole)
    return sinv @ kp @ sm


@lru_cache(maxsize=None)
def sector_indices(n_sites: int) -> dict[int, np.ndarray]:
    """Computational-basis indices per total-sigma^z eigenvalue."""
    legs = site_legs(n_sites)
    sz = tn.sz_sum(legs, legs)
    return {int(s): np.nonzero(sz == s)[0] for s in np.unique(sz)}


def restrict_to_sector(op: Operator, s: int) -> np.ndarray:
    idx = sector_indices(len(op.legs))[s]
    return op.data[np.ix_(idx, idx)]


def sector_leakage(op: Operator, weight: int) -> float:
    """Largest relative weight of the image outside the declared target sector."""
    sectors = sector_indices(len(op.legs))
    worst = 0.0
    scale = max(tn.max_abs(op), 1e-300)
    for s, idx in sectors.items():
        target = sectors.get(s + weight)
        cols = op.data[:, idx]
        mask = np.ones(op.dim, dtype=bool)
        if target is not None:
            mask[target] = False
        leak = np.max(np.abs(cols[mask, :])) if mask.any() and cols.size else 0.0
        worst = max(worst, float(leak) / scale)
    return worst


# ----------------------------------------------------------------------
# discrete symmetries relating the two reflection algebras


def string_operator(pauli: np.ndarray, n_sites: int) -> np.ndarray:
    """Product of one Pauli matrix over all sites (2^N matrix)."""
    out = np.eye(1, dtype=complex)
    for _ in range(n_sites):
        out = np.kron(out, pauli)
    return out


def site_reversal_matrix(n_legs: int, n_sites: int) -> np.ndarray:
    """Permutation reversing the site order; leading legs stay in place."""
    fixed = n_legs - n_sites
    d = 2**n_legs
    perm = np.zeros(d, dtype=int)
    for col in range(d):
        bits = [(col >> (n_legs - 1 - j)) & 1 for j in range(n_legs)]
        nb = bits[:fixed] + bits[fixed:][::-1]
        row = 0
        for bj in nb:
            row = (row << 1) | bj
        perm[col] = row
    mat = np.zeros((d, d), dtype=complex)
    mat[perm, np.arange(d)] = 1.0
    return mat


def isomorphism_image(lam: complex, theta: complex, p: ModelParams) -> Operator:
    """Image of the minus double-row matrix under the algebra isomorphism.

    Returns Gy P U_-(-lam-eta; theta) P Gy built with the barred boundary
    pair and with inhomogeneities reversed and negated; this reproduces
    U_+^{t_0}(lam; theta) exactly (Gy is the sigma^y string and P the
    site-order reversal).
    """
    mapped = p.replace(
        delta=p.delta_bar,
        zeta=p.zeta_bar,
        xi=tuple(-x for x in reversed(p.xi)),
    )
    u = dyn_double_row(-lam - p.eta, theta, "minus", mapped)
    legs = chain_legs(p.N)
    gy = tn.embed(tn.on(string_operator(tn.SY, p.N), site_legs(p.N)), legs).data
    perm = site_reversal_matrix(p.N + 1, p.N)
    return tn.on(gy @ perm @ u.data @ perm.T @ gy, legs)


def gamma_parity_image(lam: complex, p: ModelParams) -> tuple[Operator, Operator]:
    """Both sides of the parity relation for the minus double-row matrix:
    sigma^x_0 U_-(lam; delta-zeta) sigma^x_0  =  Gx U_-(lam; zeta-delta)|_swapped Gx."""
    legs = chain_legs(p.N)
    theta = p.delta - p.zeta
    x0 = tn.embed(tn.on(tn.SX, (AUX,)), legs)
    lhs = x0 @ dyn_double_row(lam, theta, "minus", p) @ x0
    swapped = p.replace(delta=p.zeta, zeta=p.delta)
    gx = tn.embed(tn.on(string_operator(tn.SX, p.N), site_legs(p.N)), legs)
    rhs = gx @ dyn_double_row(lam, -theta, "minus", swapped) @ gx
    return lhs, rhs


# ----------------------------------------------------------------------
# named identity checks


def _r3(x: complex, t: complex, eta: complex, a: str, b: str, legs) -> Operator:
    return tn.embed(tn.on(dyn_r4(x, t, eta), (a, b)), legs)


def _r3_shift(x, theta, eta, a, b, shift_leg, w, legs, swap=False):
    mk = tn.swapped4 if swap else (lambda m: m)
    return tn.charge_resolved(
        legs, [(shift_leg, w)], lambda c: tn.embed(tn.on(mk(dyn_r4(x, theta + eta * c, eta)), (a, b)), legs)
    )


def dybe_residual(l1, l2, l3, theta, eta, form: int = 1) -> float:
    legs = ("v1", "v2", "v3")
    if form == 1:
        lhs = (
            _r3_shift(l1 - l2, theta, eta, "v1", "v2", "v3", -1, legs)
            @ _r3(l1 - l3, theta, eta, "v1", "v3", legs)
            @ _r3_shift(l2 - l3, theta, eta, "v2", "v3", "v1", -1, legs)
        )
        rhs = (
            _r3(l2 - l3, theta, eta, "v2", "v3", legs)
            @ _r3_shift(l1 - l3, theta, eta, "v1", "v3", "v2", -1, legs)
            @ _r3(l1 - l2, theta, eta, "v1", "v2", legs)
        )
    else:
        lhs = (
            _r3(l1 - l2, theta, eta, "v1", "v2", legs)
            @ _r3_shift(l1 - l3, theta, eta, "v1", "v3", "v2", +1, legs)
            @ _r3(l2 - l3, theta, eta, "v2", "v3", legs)
        )
        rhs = (
            _r3_shift(l2 - l3, theta, eta, "v2", "v3", "v1", +1, legs)
            @ _r3(l1 - l3, theta, eta, "v1", "v3", legs)
            @ _r3_shift(l1 - l2, theta, eta, "v1", "v2", "v3", +1, legs)
        )
    return tn.rel_residual(lhs, rhs)


def dyn_ice_residual(lam, theta, eta) -> float:
    r = dyn_r4(lam, theta, eta)
    zz = np.kron(tn.SZ, tn.ID2) + np.kron(tn.ID2, tn.SZ)
    return tn.max_abs(r @ zz - zz @ r) / max(tn.max_abs(r), 1e-300)


def dyn_unitarity_residual(lam, theta, eta) -> float:
    lhs = dyn_r4(lam, theta, eta) @ tn.swapped4(dyn_r4(-lam, theta, eta))
    rhs = -sinh(lam - eta) * sinh(lam + eta) * np.eye(4)
    return tn.rel_residual(lhs, rhs)


def dyn_crossing_residual(lam, theta, eta, form: int = 1) -> float:
    legs = _L_LEGS
    y1 = np.kron(tn.SY, tn.ID2)
    sz2 = tn.leg_sz(legs, "c2")
    if form == 1:
        base = tn.charge_resolved(
            legs, [("c1", +1)], lambda c: tn.on(dyn_r4(-lam - eta, theta + eta * c, eta), legs)
        )
        pref = np.diag([sinh(theta - eta * s) / sinh(theta) for s in sz2])
        lhs = -y1 @ tn.transpose_first4(base.data) @ y1 @ pref
        rhs = tn.swapped4(dyn_r4(lam, theta, eta))
    else:
        base = tn.charge_resolved(
            legs, [("c1", -1)], lambda c: tn.on(tn.swapped4(dyn_r4(-lam - eta, theta + eta * c, eta)), legs)
        )
        pref = np.diag([sinh(theta + eta * s) / sinh(theta) for s in sz2])
        lhs = -y1 @ tn.transpose_first4(base.data) @ y1 @ pref
        rhs = dyn_r4(lam, theta, eta)
    return tn.rel_residual(lhs, rhs)


def dyn_parity_residual(lam, theta, eta) -> float:
    r = dyn_r4(lam, theta, eta)
    r21 = tn.swapped4(r)
    xx = np.kron(tn.SX, tn.SX)
    yy = np.kron(tn.SY, tn.SY)
    res = max(
        tn.rel_residual(r21, xx @ r @ xx),
        tn.rel_residual(r21, yy @ r @ yy),
        tn.rel_residual(r21, dyn_r4(lam, -theta, eta)),
    )
    return res


def crossed_l_unitarity_residual(lam, theta, eta) -> float:
    lhs = crossed_l4(-lam - eta, theta, eta, "Lhat") @ crossed_l4(lam - eta, theta, eta, "L")
    rhs = -sinh(lam - eta) * sinh(lam + eta) * np.eye(4)
    return tn.rel_residual(lhs, rhs)


def crossed_l_ice_residual(lam, theta, eta) -> float:
    l = crossed_l4(lam, theta, eta, "L")
    dz = np.kron(tn.SZ, tn.ID2) - np.kron(tn.ID2, tn.SZ)
    return tn.max_abs(l @ dz - dz @ l) / max(tn.max_abs(l), 1e-300)


def crossed_l_parity_residual(lam, theta, eta) -> float:
    l = crossed_l4(lam, theta, eta, "L")
    xx = np.kron(tn.SX, tn.SX)
    return max(
        tn.rel_residual(xx @ l @ xx, crossed_l4(lam, theta, eta, "Lhat")),
        tn.rel_residual(xx @ l @ xx, crossed_l4(lam, -theta, eta, "L")),
    )


def vertex_face_residual(l1, l2, theta, omega, eta, form: int = 1) -> float:
    legs = _L_LEGS

    def s_at(leg, x, t):
        return tn.embed(tn.on(gauge_s2(x, t, omega), (leg,)), legs)

    def s_shift(leg, x, shift_leg, w):
        return tn.charge_resolved(
            legs, [(shift_leg, w)], lambda c: tn.embed(tn.on(gauge_s2(x, theta + eta * c, omega), (leg,)), legs)
        )

    rv = tn.on(vx.r4(l1 - l2, eta), legs)
    rd = tn.on(dyn_r4(l1 - l2, theta, eta), legs)
    if form == 1:
        lhs = rv @ s_at("c1", l1, theta) @ s_shift("c2", l2, "c1", -1)
        rhs = s_at("c2", l2, theta) @ s_shift("c1", l1, "c2", -1) @ rd
    else:
        lhs = rv @ s_at("c2", l2, theta) @ s_shift("c1", l1, "c2", +1)
        rhs = s_at("c1", l1, theta) @ s_shift("c2", l2, "c1", +1) @ rd
    return tn.rel_residual(lhs, rhs)


def k_minus_diag_residual(lam, p: ModelParams) -> float:
    theta = p.delta - p.zeta
    lhs = gauge_s2_inv(lam, theta, p.tau, p.eps_pole) @ vx.k2(lam, "minus", p) @ gauge_s2(-lam, theta, p.tau, p.eps_pole)
    return tn.rel_residual(lhs, k2_minus_diag(lam, p.delta, p.zeta, p.eps_pole))


def k_plus_diag_residual(lam, p: ModelParams) -> float:
    tb = p.delta_bar - p.zeta_bar
    lhs = (
        gauge_s_tilde2_inv(lam + p.eta, tb, p.tau_bar, p.eps_pole)
        @ vx.k2(lam, "plus", p).T
        @ gauge_s_tilde2(-lam - p.eta, tb, p.tau_bar, p.eps_pole)
    )
    return tn.rel_residual(lhs, k2_minus_diag(-lam - p.eta, p.delta_bar, p.zeta_bar, p.eps_pole))


def dyn_reflection_residual(l1, l2, p: ModelParams, dual: bool = False) -> float:
    """Reflection equation for the diagonal height-picture boundary matrices."""
    legs = _L_LEGS
    eta = p.eta
    if not dual:
        theta = p.delta - p.zeta
        k1 = tn.embed(tn.on(k2_minus_diag(l1, p.delta, p.zeta, p.eps_pole), ("c1",)), legs)
        k2_ = tn.embed(tn.on(k2_minus_diag(l2, p.delta, p.zeta, p.eps_pole), ("c2",)), legs)
        rr = lambda x: tn.on(dyn_r4(x, theta, eta), legs)
        rs = lambda x: tn.on(tn.swapped4(dyn_r4(x, theta, eta)), legs)
        lhs = rr(l1 - l2) @ k1 @ rs(l1 + l2) @ k2_
        rhs = k2_ @ rr(l1 + l2) @ k1 @ rs(l1 - l2)
    else:
        tb = p.delta_bar - p.zeta_bar
        k1 = tn.embed(tn.on(k2_plus_diag(l1, p.delta_bar, p.zeta_bar, eta, p.eps_pole), ("c1",)), legs)
        k2_ = tn.embed(tn.on(k2_plus_diag(l2, p.delta_bar, p.zeta_bar, eta, p.eps_pole), ("c2",)), legs)
        rr = lambda x: tn.on(dyn_r4(x, tb, eta), legs)
        rs = lambda x: tn.on(tn.swapped4(dyn_r4(x, tb, eta)), legs)
        lhs = rr(l2 - l1) @ k1 @ rs(-(l1 + l2) - 2 * eta) @ k2_
        rhs = k2_ @ rr(-(l1 + l2) - 2 * eta) @ k1 @ rs(l2 - l1)
    return tn.rel_residual(lhs, rhs)


def reflection_equivalence_residual(l1, l2, p: ModelParams) -> float:
    """Vertex reflection-equation side against its gauge-conjugated height form."""
    legs = _L_LEGS
    eta = p.eta
    theta = p.delta - p.zeta
    om = p.tau

    def rr_v(x):
        return tn.on(vx.r4(x, eta), legs)

    def rs_v(x):
        return tn.on(tn.swapped4(vx.r4(x, eta)), legs)

    k1v = tn.embed(tn.on(vx.k2(l1, "minus", p), ("c1",)), legs)
    k2v = tn.embed(tn.on(vx.k2(l2, "minus", p), ("c2",)), legs)
    lhs = rr_v(l1 - l2) @ k1v @ rs_v(l1 + l2) @ k2v

    def s_shift(leg, x, shift_leg, w, inverse=False):
        b2 = gauge_s2_inv if inverse else gauge_s2
        return tn.charge_resolved(
            legs, [(shift_leg, w)], lambda c: tn.embed(tn.on(b2(x, theta + eta * c, om, p.eps_pole), (leg,)), legs)
        )

    k1d = tn.embed(tn.on(k2_minus_diag(l1, p.delta, p.zeta, p.eps_pole), ("c1",)), legs)
    k2d = tn.embed(tn.on(k2_minus_diag(l2, p.delta, p.zeta, p.eps_pole), ("c2",)), legs)
    rr = lambda x: tn.on(dyn_r4(x, theta, eta), legs)
    rs = lambda x: tn.on(tn.swapped4(dyn_r4(x, theta, eta)), legs)
    s2 = tn.embed(tn.on(gauge_s2(l2, theta, om, p.eps_pole), ("c2",)), legs)
    s1sh = s_shift("c1", l1, "c2", -1)
    sos_mid = rr(l1 - l2) @ k1d @ rs(l1 + l2) @ k2d
    s1inv = s_shift("c1", -l1, "c2", -1, inverse=True)
    s2inv = tn.embed(tn.on(gauge_s2_inv(-l2, theta, om, p.eps_pole), ("c2",)), legs)
    rhs = s2 @ s1sh @ sos_mid @ s1inv @ s2inv
    return tn.rel_residual(lhs, rhs)


def zero_weight_residual(lam, theta, p: ModelParams) -> float:
    legs = chain_legs(p.N)
    t = dyn_monodromy(lam, theta, "T", p)
    q = tn.column_diag(legs, tn.sz_sum(legs, legs))
    return tn.max_abs(t @ q - q @ t) / max(tn.max_abs(t), 1e-300)


def monodromy_inverse_residual(lam, theta, p: ModelParams, kind: str) -> float:
    direct = dyn_monodromy(lam, theta, kind, p)
    via = dyn_monodromy_inverse_form(lam, theta, kind, p)
    return tn.rel_residual(direct, via)


def monodromy_gauge_residual(lam, theta, omega, p: ModelParams, dual: bool = False) -> float:
    legs = chain_legs(p.N)
    if not dual:
        srow = tn.embed(gauge_row_minus(theta, omega, p), legs)
        lhs = srow @ gauge_aux_shifted(lam, theta, omega, p, -1) @ dyn_monodromy(lam, theta, "T", p)
        t0 = vx.bulk_monodromy(lam, p)
        s0 = tn.embed(tn.on(gauge_s2(lam, theta, omega, p.eps_pole), (AUX,)), legs)
        srow_aux = gauge_row_minus(theta, omega, p, legs=legs, extra_shift=((AUX, -1),))
        rhs = t0 @ s0 @ srow_aux
    else:
        srow = tn.embed(gauge_row_plus(theta, omega, p), legs)
        lhs = srow @ gauge_aux_shifted(lam + p.eta, theta, omega, p, +1, tilde=True) @ dyn_monodromy(lam, theta, "V", p)
        t0t = tn.partial_transpose(vx.bulk_monodromy(lam, p), AUX)
        s0t = tn.embed(tn.on(gauge_s_tilde2(lam + p.eta, theta, omega, p.eps_pole), (AUX,)), legs)
        srow_aux = gauge_row_plus(theta, omega, p, legs=legs, extra_shift=((AUX, -1),))
        rhs = t0t @ s0t @ srow_aux
    return tn.rel_residual(lhs, rhs)


def sos_algebra_residual(l1, l2, p: ModelParams, dual: bool = False) -> float:
    """Dynamical reflection algebra of the double-row matrices (minus or plus)."""
    a1, a2 = "x1", "x2"
    legs = (a1, a2) + site_legs(p.N)
    eta = p.eta
    slegs = site_legs(p.N)

    def rsh(x, theta, w, swap=False):
        mk = tn.swapped4 if swap else (lambda m: m)
        return tn.charge_resolved(
            legs, [(s, w) for s in slegs],
            lambda c: tn.embed(tn.on(mk(dyn_r4(x, theta + eta * c, eta)), (a1, a2)), legs),
        )

    if not dual:
        theta = p.delta - p.zeta
        u1 = tn.embed(dyn_double_row(l1, theta, "minus", p), legs, target_legs=(a1,) + slegs)
        u2 = tn.embed(dyn_double_row(l2, theta, "minus", p), legs, target_legs=(a2,) + slegs)
        lhs = rsh(l1 - l2, theta, -1) @ u1 @ rsh(l1 + l2, theta, -1, swap=True) @ u2
        rhs = u2 @ rsh(l1 + l2, theta, -1) @ u1 @ rsh(l1 - l2, theta, -1, swap=True)
    else:
        tb = p.delta_bar - p.zeta_bar
        u1 = tn.embed(dyn_double_row(l1, tb, "plus", p), legs, target_legs=(a1,) + slegs)
        u2 = tn.embed(dyn_double_row(l2, tb, "plus", p), legs, target_legs=(a2,) + slegs)
        lhs = rsh(l2 - l1, tb, +1) @ u1 @ rsh(-(l1 + l2) - 2 * eta, tb, +1, swap=True) @ u2
        rhs = u2 @ rsh(-(l1 + l2) - 2 * eta, tb, +1) @ u1 @ rsh(l2 - l1, tb, +1, swap=True)
    return tn.rel_residual(lhs, rhs)


def vsos_state_residual(lam, p: ModelParams, dual: bool = False) -> float:
    """Double-row vertex-face relations between the two pictures."""
    legs = chain_legs(p.N)
    if not dual:
        theta = p.delta - p.zeta
        om = p.tau
        srow = tn.embed(gauge_row_minus(theta, om, p), legs)
        lhs = srow @ gauge_aux_shifted(lam, theta, om, p, -1) @ dyn_double_row(lam, theta, "minus", p)
        rhs = vx.double_row(lam, "minus", p) @ srow @ gauge_aux_shifted(-lam, theta, om, p, -1)
    else:
        tb = p.delta_bar - p.zeta_bar
        om = p.tau_bar
        srow = tn.embed(gauge_row_plus(tb, om, p), legs)
        lhs = srow @ gauge_aux_shifted(lam + p.eta, tb, om, p, +1, tilde=True) @ dyn_double_row(lam, tb, "plus", p)
        rhs = vx.double_row(lam, "plus", p) @ srow @ gauge_aux_shifted(-lam - p.eta, tb, om, p, +1, tilde=True)
    return tn.rel_residual(lhs, rhs)


def gamma_parity_residual(lam, p: ModelParams) -> float:
    lhs, rhs = gamma_parity_image(lam, p)
    return tn.rel_residual(lhs, rhs)


def isomorphism_residual(lam, theta, p: ModelParams) -> float:
    lhs = dyn_double_row(lam, theta, "plus", p)
    rhs = isomorphism_image(lam, theta, p)
    return tn.rel_residual(lhs, rhs)


def commutation_ab_residual(l1, l2, p: ModelParams) -> float:
    """Three-term exchange relation of A_- past B_- at theta = delta - zeta."""
    eta = p.eta
    theta = p.delta - p.zeta
    slegs = site_legs(p.N)
    szv = tn.sz_sum(slegs, slegs)

    def dg(fn):
        return tn.column_diag(slegs, np.array([fn(s) for s in szv]))

    a1 = dyn_block(l1, theta, "minus", "A", p)
    b1 = dyn_block(l1, theta, "minus", "B", p)
    a2 = dyn_block(l2, theta, "minus", "A", p)
    b2 = dyn_block(l2, theta, "minus", "B", p)
    dt2 = tn.on(modified_d_minus(l2, theta, p).data, slegs)
    lb, lm = l1 + l2, l1 - l2
    c1 = dg(lambda s: -sinh(eta) * sinh(theta - eta * s - 2 * eta - lb) / (sinh(theta - eta * s - eta) * sinh(lb + eta)))
    c2 = sinh(lb) * sinh(lm - eta) / (sinh(lm) * sinh(lb + eta))
    c3 = dg(lambda s: -sinh(eta) * sinh(2 * l2) * sinh(lm - theta + eta * s + eta) / (sinh(theta - eta * s - eta) * sinh(lm) * sinh(2 * l2 + eta)))
    rhs = c1 @ (b1 @ dt2) + c2 * (b2 @ a1) + c3 @ (b1 @ a2)
    return tn.rel_residual(a1 @ b2, rhs)


def commutation_dtb_residual(l1, l2, p: ModelParams) -> float:
    """Three-term exchange relation of D-tilde_- past B_- at theta = delta - zeta."""
    eta = p.eta
    theta = p.delta - p.zeta
    slegs = site_legs(p.N)
    szv = tn.sz_sum(slegs, slegs)

    def dg(fn):
        return tn.column_diag(slegs, np.array([fn(s) for s in szv]))

    b1 = dyn_block(l1, theta, "minus", "B", p)
    a2 = dyn_block(l2, theta, "minus", "A", p)
    b2 = dyn_block(l2, theta, "minus", "B", p)
    dt1 = tn.on(modified_d_minus(l1, theta, p).data, slegs)
    dt2 = tn.on(modified_d_minus(l2, theta, p).data, slegs)
    lb, lm = l1 + l2, l1 - l2
    d1 = dg(
        lambda s: sinh(lb + theta - eta * s)
        / sinh(theta - eta * s - eta)
        * sinh(eta) * sinh(2 * l2) * sinh(2 * l1 + 2 * eta)
        / (sinh(lb + eta) * sinh(2 * l1 + eta) * sinh(2 * l2 + eta))
    )
    d2 = sinh(lm + eta) * sinh(lb + 2 * eta) / (sinh(lm) * sinh(lb + eta))
    d3 = dg(
        lambda s: -sinh(eta) * sinh(2 * (l1 + eta)) * sinh(lm + theta - eta * s - eta)
        / (sinh(lm) * sinh(2 * l1 + eta) * sinh(theta - eta * s - eta))
    )
    rhs = d1 @ (b1 @ a2) + d2 * (b2 @ dt1) + d3 @ (b1 @ dt2)
    return tn.rel_residual(dt1 @ b2, rhs)


SOS_CHECKS = (
    "dybe1",
    "dybe2",
    "ice",
    "unitarity",
    "crossing1",
    "crossing2",
    "parity",
    "l_unitarity",
    "l_ice",
    "l_parity",
    "vertex_face1",
    "vertex_face2",
    "k_minus_diag",
    "k_plus_diag",
    "dyn_reflection",
    "dual_dyn_reflection",
    "reflection_equivalence",
    "zero_weight",
    "that_inverse",
    "vhat_inverse",
    "monodromy_gauge",
    "dual_monodromy_gauge",
    "sos_algebra",
    "dual_sos_algebra",
    "vsos_state",
    "dual_vsos_state",
    "gamma_parity",
    "isomorphism",
    "commutation_ab",
    "commutation_dtb",
)


def sos_identity_suite(
    check: str, p: ModelParams, dyn: DynParams | None = None, seed: int = 0, trials: int = 20
) -> ResidualReport:
    """Evaluate one named height-picture identity at seeded random points."""
    dyn = DynParams.from_boundary(p) if dyn is None else dyn
    rng = np.random.default_rng(seed)
    eta = p.eta

    def draw_theta():
        for _ in range(10_000):
            t = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if min(abs(sinh(t + k * eta)) for k in range(-(p.N + 2), p.N + 3)) > 1e-2:
                return t
        raise DegenerateParameter("could not sample a generic dynamical parameter")

    residuals = []
    for _ in range(trials):
        pts = sample_points(rng, p, 3, thetas=(dyn.theta, dyn.theta_bar))
        free_theta = draw_theta()
        l1, l2, l3 = pts
        if check == "dybe1":
            residuals.append(dybe_residual(l1, l2, l3, free_theta, eta, form=1))
        elif check == "dybe2":
            residuals.append(dybe_residual(l1, l2, l3, free_theta, eta, form=2))
        elif check == "ice":
            residuals.append(dyn_ice_residual(l1, free_theta, eta))
        elif check == "unitarity":
            residuals.append(dyn_unitarity_residual(l1, free_theta, eta))
        elif check == "crossing1":
            residuals.append(dyn_crossing_residual(l1, free_theta, eta, form=1))
        elif check == "crossing2":
            residuals.append(dyn_crossing_residual(l1, free_theta, eta, form=2))
        elif check == "parity":
            residuals.append(dyn_parity_residual(l1, free_theta, eta))
        elif check == "l_unitarity":
            residuals.append(crossed_l_unitarity_residual(l1, free_theta, eta))
        elif check == "l_ice":
            residuals.append(crossed_l_ice_residual(l1, free_theta, eta))
        elif check == "l_parity":
            residuals.append(crossed_l_parity_residual(l1, free_theta, eta))
        elif check == "vertex_face1":
            residuals.append(vertex_face_residual(l1, l2, free_theta, dyn.omega, eta, form=1))
        elif check == "vertex_face2":
            residuals.append(vertex_face_residual(l1, l2, free_theta, dyn.omega, eta, form=2))
        elif check == "k_minus_diag":
            residuals.append(k_minus_diag_residual(l1, p))
        elif check == "k_plus_diag":
            residuals.append(k_plus_diag_residual(l1, p))
        elif check == "dyn_reflection":
            residuals.append(dyn_reflection_residual(l1, l2, p, dual=False))
        elif check == "dual_dyn_reflection":
            residuals.append(dyn_reflection_residual(l1, l2, p, dual=True))
        elif check == "reflection_equivalence":
            residuals.append(reflection_equivalence_residual(l1, l2, p))
        elif check == "zero_weight":
            residuals.append(zero_weight_residual(l1, free_theta, p))
        elif check == "that_inverse":
            residuals.append(monodromy_inverse_residual(l1, free_theta, p, "That"))
        elif check == "vhat_inverse":
            residuals.append(monodromy_inverse_residual(l1, free_theta, p, "Vhat"))
        elif check == "monodromy_gauge":
            residuals.append(monodromy_gauge_residual(l1, free_theta, dyn.omega, p, dual=False))
        elif check == "dual_monodromy_gauge":
            residuals.append(monodromy_gauge_residual(l1, free_theta, dyn.omega, p, dual=True))
        elif check == "sos_algebra":
            residuals.append(sos_algebra_residual(l1, l2, p, dual=False))
        elif check == "dual_sos_algebra":
            residuals.append(sos_algebra_residual(l1, l2, p, dual=True))
        elif check == "vsos_state":
            residuals.append(vsos_state_residual(l1, p, dual=False))
        elif check == "dual_vsos_state":
            residuals.append(vsos_state_residual(l1, p, dual=True))
        elif check == "gamma_parity":
            residuals.append(gamma_parity_residual(l1, p))
        elif check == "isomorphism":
            residuals.append(isomorphism_residual(l1, free_theta, p))
        elif check == "commutation_ab":
            residuals.append(commutation_ab_residual(l1, l2, p))
        elif check == "commutation_dtb":
            residuals.append(commutation_dtb_residual(l1, l2, p))
        else:
            raise ValueError(f"unknown height-picture check {check!r}")
    return ResidualReport(check=check, residuals=tuple(residuals), seed=seed)
