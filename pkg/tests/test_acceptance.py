"""Acceptance criteria, each run at its stated tolerance.

Every criterion is a function returning ``(passed, detail)``.  Under pytest
each one becomes a test, and a one-line PASS/FAIL summary per criterion is
printed at the end of the session (see ``conftest.py``).  Running this file
directly prints the same lines.
"""

import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from tproduct import Tensor3, t_eigenvalues, tensor_norm, tprod
from tproduct.examples import (gen_example, random_f_diagonalizable, random_hermitian,
                               random_jordan_type, random_normal, scaled_to_norm)
from tproduct.fileio import read_grid, write_grid
from tproduct.ode import abel_liouville, fundamental_set, ode_residual, solve_ivp, t_exp, wronskian
from tproduct.perturbation import (bauer_fike_bound, generalized_bf_bound, gershgorin_disks,
                                   kahan_regions)
from tproduct.pseudospectra import (DEFAULT_EPSILONS, check_pseudo_properties,
                                    perturbation_witness, pseudo_grid, resolvent_quantity)
from tproduct.transform import blockdiag, to_faces

from oracles import crandn, dense_bcirc, dense_eigs, matched_distance

RESULTS = {}


def _rand(rng, m, n):
    return Tensor3(crandn(rng, m, m, n))


def ac1_oracle_spectrum():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        m, n = rng.integers(2, 6, size=2)
        a = _rand(rng, m, n)
        d = matched_distance(t_eigenvalues(a).eigenvalues, dense_eigs(a.data))
        worst = max(worst, d / tensor_norm(a))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10
    return ok, "max dist/||A||_2 = %.2e (<= 1e-8), %.2f s (< 10 s)" % (worst, elapsed)


def ac2_examples():
    start = time.perf_counter()
    a0, a1, a2 = (gen_example(k, 20) for k in ("A0", "A1", "A2"))
    l0, l1, l2 = (t_eigenvalues(a).eigenvalues for a in (a0, a1, a2))
    elapsed = time.perf_counter() - start
    zeros = int(np.sum(np.abs(l0) <= 1e-8))
    nonzero = l0[np.abs(l0) > 1e-8]
    expected = 3 * np.cos(np.arange(1, 21) * np.pi / 21)
    cos_err = matched_distance(nonzero, expected) if nonzero.size == 20 else np.inf
    # the dense oracle must agree on each claim
    d0, d1, d2 = (dense_eigs(a.data) for a in (a0, a1, a2))
    oracle_ok = (int(np.sum(np.abs(d0) <= 1e-8)) == 40 and np.abs(d1.imag).max() <= 1e-8
                 and np.abs(d2.imag).max() > 1e-3)
    im1, im2 = np.abs(l1.imag).max(), np.abs(l2.imag).max()
    ok = (zeros == 40 and cos_err <= 1e-8 and im1 <= 1e-8 and im2 > 1e-3 and oracle_ok
          and elapsed < 2)
    return ok, ("A0: %d zeros, cos err %.1e; A1 max|Im| %.1e; A2 max|Im| %.3f; "
                "oracle agrees %s; %.2f s" % (zeros, cos_err, im1, im2, oracle_ok, elapsed))


def ac3_definitions():
    rng = np.random.default_rng(103)
    worst_rel = worst_norm = worst_eig = 0.0
    for _ in range(200):
        m, n = rng.integers(1, 5, size=2)
        a = _rand(rng, m, n)
        z = complex(crandn(rng)) * 2
        bc = dense_bcirc(a.data)
        smin = np.linalg.svd(z * np.eye(m * n) - bc, compute_uv=False)[-1]
        rq = resolvent_quantity(a, z)
        worst_rel = max(worst_rel, abs(1 / rq - smin) / smin)
        E, nrm = perturbation_witness(a, z)
        worst_norm = max(worst_norm, abs(np.linalg.norm(E, 2) - smin) / smin, abs(nrm - smin) / smin)
        ev = np.linalg.eigvals(blockdiag(to_faces(a)) + E)
        worst_eig = max(worst_eig, np.abs(ev - z).min())
    ok = worst_rel <= 1e-10 and worst_norm <= 1e-10 and worst_eig <= 1e-8
    return ok, ("|1/R - sigma_min|/sigma_min %.1e; ||E||_2 vs sigma_min %.1e; "
                "z in spec(A+E) to %.1e" % (worst_rel, worst_norm, worst_eig))


def ac4_normal_pseudospectrum():
    rng = np.random.default_rng(104)
    _, a, lam = random_normal(rng, 4, 3)
    lam = lam.ravel()
    bad = checked = 0
    for eps in (1e-1, 3e-1, 1.0):
        grid = pseudo_grid(a, None, 100, 100, (eps,))
        dist = np.abs(grid.points[..., None] - lam).min(axis=-1)
        keep = np.abs(dist - eps) > grid.cell_diagonal
        bad += int((grid.member(eps)[keep] != (dist <= eps)[keep]).sum())
        checked += int(keep.sum())
    return bad == 0, "%d mismatches over %d grid points away from the boundary" % (bad, checked)


def ac5_laws():
    rng = np.random.default_rng(105)
    totals = {"shift": 0, "scaling": 0, "conjugation": 0}
    for _ in range(20):
        m, n = rng.integers(2, 4, size=2)
        a = _rand(rng, m, n)
        c = complex(crandn(rng)) * 1.5
        eps = float(10 ** rng.uniform(-2, -0.5))
        rep = check_pseudo_properties(a, c, eps, None, 60, 60)
        for name in totals:
            totals[name] += getattr(rep, name).interior_violations
    ok = sum(totals.values()) == 0
    return ok, "interior violations: " + ", ".join("%s %d" % kv for kv in totals.items())


def ac6_bauer_fike():
    rng = np.random.default_rng(106)
    violations = 0
    worst_normal = 0.0
    normal_count = 0
    for trial in range(100):
        m, n = rng.integers(2, 5, size=2)
        if trial % 4 == 0:
            P, a, _ = random_normal(rng, m, n)
            normal = True
            normal_count += 1
        else:
            a, P, _ = random_f_diagonalizable(rng, m, n)
            normal = False
        for size in 10 ** rng.uniform(-6, -2, size=10):
            delta = scaled_to_norm(_rand(rng, m, n), size)
            rep = bauer_fike_bound(a, P, delta)
            violations += rep.observed > rep.bound
            if normal:
                worst_normal = max(worst_normal, abs(rep.bound - tensor_norm(delta)))
    ok = violations == 0 and worst_normal <= 1e-12
    return ok, ("%d violations in 1000 cases; normal instances (%d) |bound - ||d||_2| <= %.1e"
                % (violations, normal_count, worst_normal))


def ac7_generalized_bauer_fike():
    rng = np.random.default_rng(107)
    layouts = [[2], [3], [2, 1], [3, 1], [2, 2], [3, 2], [1, 2, 1]]
    violations = 0
    qs = set()
    for trial in range(100):
        blocks = layouts[trial % len(layouts)]
        n = int(rng.integers(1, 4))
        a = random_jordan_type(rng, blocks, n)
        delta = scaled_to_norm(_rand(rng, sum(blocks), n), 10 ** rng.uniform(-8, -2))
        rep = generalized_bf_bound(a, delta)
        qs.add(rep.detail["q"])
        theta, q = rep.detail["theta"], rep.detail["q"]
        violations += rep.observed > max(theta, theta ** (1 / q))
    ok = violations == 0 and {2, 3} <= qs
    return ok, "%d violations in 100 trials; nilpotency indices seen %s" % (violations, sorted(qs))


def ac8_kahan():
    rng = np.random.default_rng(108)
    uncovered = 0
    worst_gap = -np.inf
    for _ in range(100):
        m, n = rng.integers(2, 5, size=2)
        a = random_hermitian(rng, m, n)
        e = scaled_to_norm(_rand(rng, m, n), 10 ** rng.uniform(-5, -2))
        _, rep = kahan_regions(a, e)
        uncovered += rep.detail["uncovered"]
        worst_gap = max(worst_gap, rep.detail["max_abs_imag"] - rep.detail["norm_E_y"])
    ok = uncovered == 0 and worst_gap <= 1e-9
    return ok, "%d uncovered eigenvalues; max(|Im mu| - ||E_y||_2) = %.2e" % (uncovered, worst_gap)


def ac9_gershgorin():
    rng = np.random.default_rng(109)
    violations = {"raw": 0, "schur": 0}
    for _ in range(200):
        m, n = rng.integers(1, 6, size=2)
        a = _rand(rng, m, n)
        lam = dense_eigs(a.data)
        for mode in violations:
            inside = gershgorin_disks(a, mode).contains(lam, tol=1e-12 * tensor_norm(a))
            violations[mode] += int((~inside).sum())
    ok = sum(violations.values()) == 0
    return ok, "violations: raw %d, schur %d" % (violations["raw"], violations["schur"])


def ac10_ode():
    rng = np.random.default_rng(110)
    semi = 0.0
    for _ in range(20):
        m, n = rng.integers(1, 4, size=2)
        a = _rand(rng, m, n)
        t, s = rng.uniform(0, 1, size=2)
        lhs = t_exp(a, t + s).data
        rhs = tprod(t_exp(a, t), t_exp(a, s)).data
        semi = max(semi, np.abs(lhs - rhs).max() / max(1.0, np.abs(lhs).max()))
    a = _rand(rng, 2, 3)
    x = solve_ivp(a, Tensor3(crandn(rng, 2, 1, 3)), [0])
    hs = [1e-2, 5e-3, 2.5e-3]
    res = [ode_residual(a, x, 0.5, h) for h in hs]
    ratios = [res[0] / res[1], res[1] / res[2]]
    sols = fundamental_set(a)
    w0 = wronskian(sols, 0.0)
    w_err, w_min = 0.0, np.inf
    for t in np.linspace(0.1, 2.0, 10):
        w = wronskian(sols, t)
        ref = abel_liouville(a, w0, t)
        w_min = min(w_min, abs(w))
        w_err = max(w_err, abs(w - ref) / abs(ref))
    ok = (semi <= 1e-10 and all(3.5 <= r <= 4.5 for r in ratios) and w_min > 0
          and w_err <= 1e-8)
    return ok, ("semigroup %.1e; FD ratios %.3f, %.3f; min |W| %.2e; "
                "Abel-Liouville rel err %.1e" % (semi, ratios[0], ratios[1], w_min, w_err))


def ac11_grids():
    times = {}
    far = 0.0
    rows_ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for name in ("A0", "A1", "A2", "A3"):
            start = time.perf_counter()
            a = gen_example(name, 20)
            grid = pseudo_grid(a, None, 200, 200, DEFAULT_EPSILONS)
            path = Path(tmp) / ("%s.csv" % name)
            write_grid(path, grid, {"example": name, "N": 20})
            times[name] = time.perf_counter() - start
            _, _, val, meta = read_grid(path)
            rows_ok &= len(val) == 200 * 200 and len(meta["epsilons"]) == 10
            if name == "A0":
                far = float(np.abs(grid.points[grid.member(0.1)].imag).max())
    ok = max(times.values()) < 60 and far > 0.5 and rows_ok
    return ok, ("%s; A0 max |Im z| at eps=0.1: %.3f; row counts ok %s"
                % (", ".join("%s %.1f s" % kv for kv in times.items()), far, rows_ok))


CRITERIA = [
    (1, "oracle spectrum equivalence", ac1_oracle_spectrum),
    (2, "A0/A1/A2 reproduction", ac2_examples),
    (3, "pseudospectrum definition equivalence", ac3_definitions),
    (4, "normal-tensor pseudospectrum", ac4_normal_pseudospectrum),
    (5, "shift/scaling/conjugation laws", ac5_laws),
    (6, "Bauer-Fike", ac6_bauer_fike),
    (7, "generalized Bauer-Fike", ac7_generalized_bauer_fike),
    (8, "Kahan regions", ac8_kahan),
    (9, "Gershgorin", ac9_gershgorin),
    (10, "ODE propagator and Wronskian", ac10_ode),
    (11, "example grids", ac11_grids),
]


def summary_line(number, title, ok, detail):
    return "criterion %2d %-38s %s  %s" % (number, title, "PASS" if ok else "FAIL", detail)


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail = fn()
    RESULTS[number] = summary_line(number, title, ok, detail)
    print(RESULTS[number])
    assert ok, detail


if __name__ == "__main__":
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        print(summary_line(number, title, ok, detail), flush=True)
