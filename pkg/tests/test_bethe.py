from cmath import cosh, sinh

import numpy as np
import pytest

from sosxxz import bethe as bt
from sosxxz import sos
from sosxxz import vertex as vx
from sosxxz.errors import BadSector, DegenerateParameter, NoConvergence
from sosxxz.params import generic_params, sample_points


def test_apply_constraints_direct_substitution():
    p = generic_params(2).replace(eta=0.7, tau=0.3)
    pc = bt.apply_constraints(p, bt.BoundaryConstraint(s=0, n=0, m=0))
    assert pc.tau_bar == pytest.approx(1.0)
    assert (pc.delta_bar - pc.zeta_bar) == pytest.approx(p.delta - p.zeta)


def test_constraints_solve_cosh_conditions():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = generic_params(2).replace(
            delta=complex(rng.uniform(0.4, 1.2), rng.uniform(-0.5, 0.5)),
            zeta=complex(rng.uniform(0.4, 1.2), rng.uniform(-0.5, 0.5)),
            tau=complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)),
        )
        pc = bt.apply_constraints(p, bt.BoundaryConstraint(s=0, n=1, m=1))
        base = pc.delta - pc.zeta
        lhs = cosh(pc.delta_bar - pc.zeta_bar)
        assert abs(lhs - cosh(base + pc.tau_bar - pc.tau - pc.eta)) < 1e-13
        assert abs(lhs - cosh(base - pc.tau_bar + pc.tau + pc.eta)) < 1e-13


def test_bad_sector():
    p = generic_params(2)
    with pytest.raises(BadSector):
        bt.apply_constraints(p, bt.BoundaryConstraint(s=2))
    with pytest.raises(BadSector):
        bt.apply_constraints(p, bt.BoundaryConstraint(s=1))


def test_y2_is_swapped_y1(p2):
    lam = 0.21 + 0.12j
    roots = (lam,)
    swapped = p2.replace(delta=p2.zeta, zeta=p2.delta, delta_bar=p2.zeta_bar, zeta_bar=p2.delta_bar)
    assert bt.bethe_y("b2", lam, roots, 0, p2) == bt.bethe_y("b1", lam, roots, 0, swapped)


def test_lambda2_is_swapped_lambda1(p2):
    mu = 0.17 - 0.23j
    roots = (0.31 + 0.21j,)
    swapped = p2.replace(delta=p2.zeta, zeta=p2.delta, delta_bar=p2.zeta_bar, zeta_bar=p2.delta_bar)
    assert bt.eigenvalue_lambda("L2", mu, roots, p2) == bt.eigenvalue_lambda("L1", mu, roots, swapped)


def test_lambda1_second_term_vanishes_at_xi(p2):
    roots = (0.31 + 0.21j,)
    mu = p2.xi[0]
    full = bt.eigenvalue_lambda("L1", mu, roots, p2)
    d, z, db, zb = p2.delta, p2.zeta, p2.delta_bar, p2.zeta_bar
    eta = p2.eta
    t1 = (
        sinh(zb - mu) * sinh(db + mu) * sinh(d - mu) * sinh(2 * mu + 2 * eta)
        / (sinh(zb - mu - eta) * sinh(db - mu - eta) * sinh(d + mu) * sinh(2 * mu + eta))
    )
    for li in roots:
        t1 *= sinh(mu + li) * sinh(mu - li - eta) / (sinh(mu + li + eta) * sinh(mu - li))
    for xj in p2.xi:
        t1 *= sinh(mu + xj + eta) * sinh(mu - xj + eta)
    assert abs(full - t1) < 1e-13 * abs(t1)


def test_solver_finds_verified_solutions(constrained2):
    sols = bt.find_bethe_solutions("b1", 1, constrained2, seed=1)
    assert len(sols) >= 1
    for sol in sols:
        assert max(sol.residuals) < 1e-10
        assert sol.sector == 0


def test_root_reflection_invariance(constrained2):
    p = constrained2
    sol = bt.solve_bethe("b1", 1, p, seed=1)
    lam = sol.roots[0]
    reflected = (-lam - p.eta,)
    r0 = bt.bethe_residual("b1", sol.roots, p)
    r1 = bt.bethe_residual("b1", reflected, p)
    assert max(r1) < max(max(r0) * 10, 1e-9)


def test_sector_count_sanity(constrained2):
    sols = bt.find_bethe_solutions("b1", 1, constrained2, seed=1)
    sector_dim = len(sos.sector_indices(constrained2.N)[0])
    assert len(sols) <= sector_dim


def test_solver_no_convergence(constrained2):
    with pytest.raises(NoConvergence):
        bt.solve_bethe("b1", 1, constrained2, guesses=[[100.0 + 0.0j]], max_iter=2)


def test_eigenvalue_matches_dense_diagonalization(constrained2):
    p = constrained2
    mu = 0.17 - 0.23j
    theta = p.delta - p.zeta
    sols = bt.find_bethe_solutions("b1", 1, p, seed=1)
    idx = sos.sector_indices(p.N)[0]
    block = sos.sos_transfer(mu, theta, "SOS1", p).data[np.ix_(idx, idx)]
    eigs = np.linalg.eigvals(block)
    for sol in sols:
        lam = bt.branch_eigenvalue("b1", mu, sol.roots, p)
        assert np.min(np.abs(eigs - lam)) / abs(lam) < 1e-8


@pytest.mark.parametrize("branch", ["b1", "b2", "p1", "p2"])
def test_all_families_give_eigenstates(branch, constrained2):
    p = constrained2
    spec = bt.BRANCHES[branch]
    m = 1  # N = 2, s = 0 gives M = 1 for every family
    sols = bt.find_bethe_solutions(branch, m, p, seed=2)
    assert sols, branch
    rng = np.random.default_rng(4)
    mus = sample_points(rng, p, 2)
    theta = bt.branch_theta(branch, p)
    for sol in sols:
        psi = bt.bethe_state(branch, sol, p)
        for mu in mus:
            lam = bt.branch_eigenvalue(branch, mu, sol.roots, p)
            t = sos.sos_transfer(mu, theta, spec.sos_kind, p)
            assert np.linalg.norm(t.data @ psi - lam * psi) / (np.linalg.norm(psi) * abs(lam)) < 1e-8
            v = bt.vertex_eigenstate(branch, sol, p)
            tv = vx.transfer_xxz(mu, p)
            assert np.linalg.norm(tv.data @ v - lam * v) / (np.linalg.norm(v) * abs(lam)) < 1e-8


def test_minus_and_plus_families_build_the_same_states(constrained2):
    p = constrained2
    sols_m = bt.find_bethe_solutions("b1", 1, p, seed=2)
    sols_p = bt.find_bethe_solutions("p1", 1, p, seed=2)
    roots_m = sorted((round(s.roots[0].real, 8), round(s.roots[0].imag, 8)) for s in sols_m)
    roots_p = sorted((round(s.roots[0].real, 8), round(s.roots[0].imag, 8)) for s in sols_p)
    assert roots_m == roots_p
    sol = sols_m[0]
    a = bt.vertex_eigenstate("b1", sol, p)
    b = bt.vertex_eigenstate("p1", bt.BetheSolution("p1", sol.roots, 1, sol.residuals, sol.sector), p)
    overlap = 1 - abs(np.conj(a) @ b) ** 2 / ((np.conj(a) @ a).real * (np.conj(b) @ b).real)
    assert abs(overlap) < 1e-8


def test_plus_family_gauge_binding(constrained3):
    """At s = 1 the two dynamical parameters differ; only the barred pair
    (theta_bar, tau_bar) sends plus states to vertex eigenstates."""
    p = constrained3
    mu = 0.17 - 0.23j
    sols = bt.find_bethe_solutions("p1", 1, p, seed=5)
    assert sols
    sol = sols[0]
    lam = bt.branch_eigenvalue("p1", mu, sol.roots, p)
    tv = vx.transfer_xxz(mu, p)
    good = bt.vertex_eigenstate("p1", sol, p)  # defaults to (theta_bar, tau_bar)
    r_good = np.linalg.norm(tv.data @ good - lam * good) / (np.linalg.norm(good) * abs(lam))
    assert r_good < 1e-8
    bad = bt.vertex_eigenstate("p1", sol, p, gauge_theta=p.delta - p.zeta)
    r_bad = np.linalg.norm(tv.data @ bad - lam * bad) / (np.linalg.norm(bad) * abs(lam))
    assert r_bad > 1e-3


def test_energy_single_root_closed_form():
    p = generic_params(2)
    c1v = vx.c1(p)
    lam = -p.eta / 2 + 0.3j  # a generic point, then the closed-form point
    sol = bt.BetheSolution("b1", (-p.eta / 2 + 0.5,), 1, (0.0,), 0)
    # epsilon at lam = -eta/2 equals -c1 sinh(eta) / sinh^2(eta/2)
    at = bt.BetheSolution("b1", (-p.eta / 2,), 1, (0.0,), 0)
    e = bt.energy(at, p) - c1v * p.N * cosh(p.eta) / sinh(p.eta)
    expect = -c1v * sinh(p.eta) / sinh(p.eta / 2) ** 2
    assert abs(e - expect) < 1e-12 * abs(expect)


def test_energy_reflection_invariant(constrained2):
    p = constrained2
    sol = bt.solve_bethe("b1", 1, p, seed=1)
    reflected = bt.BetheSolution("b1", tuple(-z - p.eta for z in sol.roots), 1, sol.residuals, 0)
    assert abs(bt.energy(sol, p) - bt.energy(reflected, p)) < 1e-12 * abs(bt.energy(sol, p))


def test_energy_pole_raises(p2):
    sol = bt.BetheSolution("b1", (0.0,), 1, (0.0,), 0)
    with pytest.raises(DegenerateParameter):
        bt.energy(sol, p2)


def test_hamiltonian_energy_matches_rayleigh(constrained2):
    p = constrained2.replace(xi=(0,) * constrained2.N)
    h_dir = vx.hamiltonian_direct(p)
    _, kappa = vx.hamiltonian(p, "from_transfer")
    sols = bt.find_bethe_solutions("b1", 1, p, seed=3)
    assert len(sols) >= 2
    c1v = vx.c1(p)
    offsets = []
    for sol in sols:
        v = bt.vertex_eigenstate("b1", sol, p)
        rq = (np.conj(v) @ (h_dir.data @ v)) / (np.conj(v) @ v)
        he = bt.hamiltonian_energy("b1", sol, p, kappa)
        assert abs(rq - he) < 1e-7 * abs(rq)
        # the conventional energy formula is affine in the eigenvalue with slope
        # 2 sinh(eta) / c1; the measured offset must be state-independent
        e_disp = bt.energy(sol, p)
        offsets.append(rq - 2 * sinh(p.eta) / c1v * (e_disp - c1v * p.N * cosh(p.eta) / sinh(p.eta)))
    assert abs(offsets[0] - offsets[1]) < 1e-7 * max(abs(offsets[0]), 1.0)
