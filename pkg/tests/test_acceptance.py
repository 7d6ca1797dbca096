"""Acceptance criteria 1-10.

Each test prints one ``[criterion N] PASS|FAIL ...`` line.  Run as a script
(``python tests/test_acceptance.py``) to get the ten lines without pytest.
"""
from __future__ import annotations

import math
import sys
import time

import numpy as np
import pytest

from radialwave.catalog import SolutionFamily, field_jet, sample_interior, standard_instances, verify_residual
from radialwave.core import CompatibilityError, ModelParams, PowerKind
from radialwave.foliation import (AnsatzCase, ansatz_coefficient_check, standard_gh_instances,
                                  standard_potential_instances, verify_instance, verify_potential_instance)
from radialwave.liealg import generators, group_action_suite, jacobi, lie_bracket
from radialwave.reconstruct import (GHSolution, GridSpec, PerturbedGH, ReconstructionProblem, reconstruct,
                                    seed_from_family)
from radialwave.reduction import ODEKind, ReducedODE, constant_solutions, ode_residual, reduction_suite
from radialwave.simulator import SimConfig, Status, fit_blowup_rate, run, run_convergence

_LINES: dict = {}


def _line(number: int, ok: bool, detail: str, capsys=None) -> None:
    text = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {detail}"
    _LINES[number] = text
    if capsys is not None:
        with capsys.disabled():
            print("\n" + text)
    else:
        print(text)


# ---------------------------------------------------------------------------
# criterion bodies: each returns (ok, detail)
# ---------------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    fams = standard_instances()
    reports = [verify_residual(f, sample_interior(f, 50, rng), tol=1e-9) for f in fams]
    elapsed = time.perf_counter() - start
    ids = {f.id for f in fams}
    worst = max(r.max_residual for r in reports)
    points = sum(len(r.samples) - r.errors for r in reports)
    ok = (len(ids) == 15 and len(fams) == 45 and points == 45 * 50
          and all(r.passed for r in reports) and worst < 1e-9 and elapsed < 5.0)
    return ok, f"{len(fams)} instances of {len(ids)} families, {points} points, max residual {worst:.2e}, {elapsed:.2f} s"


def criterion_2():
    P = ModelParams.at_power(PowerKind.CONFORMAL, 5, 1)
    rng = np.random.default_rng(0)
    good = SolutionFamily("IV6", P)
    bad = SolutionFamily("IV6", P, as_printed=True)
    rg = verify_residual(good, sample_interior(good, 50, rng))
    rb = verify_residual(bad, sample_interior(bad, 50, rng))
    ode = ReducedODE(ODEKind.INVER_CANONICAL, P)
    required = constant_solutions(ode)
    printed = float(field_jet(bad, 0.0, 1.0).v)
    ok = (rg.passed and not rb.passed and rb.max_residual > 0.1 and required == [2.0]
          and abs(printed - 4.0) < 1e-12 and abs(ode_residual(ode, 0.0, printed, 0.0, 0.0)) > 1.0)
    return ok, (f"corrected residual {rg.max_residual:.2e}; as-printed residual {rb.max_residual:.3f}; "
                f"v as printed {printed:g} vs required {required[0]:g}")


def criterion_3():
    failures = []
    for n in (2, 3, 4, 5, 7):
        P = ModelParams.at_power(PowerKind.CONFORMAL, n)
        g = generators(P)
        Xt, Xs, Xi = g["X_trans"], g["X_scal"], g["X_inver"]
        if lie_bracket(Xt, Xs) != Xt:
            failures.append(f"n={n} [trans,scal]")
        if lie_bracket(Xt, Xi) != Xs.scale(2):
            failures.append(f"n={n} [trans,inver]")
        if lie_bracket(Xs, Xi) != Xi:
            failures.append(f"n={n} [scal,inver]")
        for a in (Xt, Xs, Xi):
            for b in (Xt, Xs, Xi):
                for c in (Xt, Xs, Xi):
                    if not jacobi(a, b, c).is_zero():
                        failures.append(f"n={n} Jacobi")
    return not failures, "exact rational brackets and Jacobi for n in {2,3,4,5,7}" + (
        f"; failures {failures}" if failures else "")


def criterion_4():
    reports = [verify_instance(i, 20) for i in standard_gh_instances()]
    ids = {r.solution.split("[")[0] for r in reports}
    worst = max(r.max_residual for r in reports)
    pts_ok = all(r.points == 400 for r in reports)
    ansatz = ansatz_coefficient_check(AnsatzCase.Q, 3, 3.0, 1)
    ok = len(ids) == 10 and all(r.passed for r in reports) and worst < 1e-9 and pts_ok and not ansatz.solvable
    return ok, (f"{len(ids)} (G,H) families, {len(reports)} instances on 20x20 grids, max residual {worst:.2e}; "
                f"a=b=q ansatz consistent candidates: {len(ansatz.consistent)}")


def criterion_5():
    reports = [verify_potential_instance(i, 20) for i in standard_potential_instances()]
    curl = max(r.detail["curl"] for r in reports)
    match = max(r.detail["match"] for r in reports)
    ok = curl < 1e-9 and match < 1e-10 and all(r.passed for r in reports)
    return ok, f"{len(reports)} potentials, max mixed-partial defect {curl:.2e}, max induced mismatch {match:.2e}"


def criterion_6():
    P = ModelParams(3, 3.0, 1)
    Pc = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)
    u1 = SolutionFamily("U1", P, c=0.0, branch=1)
    prob = ReconstructionProblem(GHSolution("S1", P, -1), (1.5, 1.0), seed_from_family(u1, 1.5, 1.0),
                                 GridSpec((1.0, 2.0), (0.5, 1.5)))
    r1 = reconstruct(prob)
    u6 = SolutionFamily("U6", Pc, c=0.5, branch=1)
    prob6 = ReconstructionProblem(GHSolution("C1", Pc, 1), (1.5, 0.5), seed_from_family(u6, 1.5, 0.5),
                                  GridSpec((1.0, 2.0), (0.2, 0.8)))
    r6 = reconstruct(prob6)
    e1, e6 = r1.relative_error(u1), r6.relative_error(u6)
    mixed = max(r1.path_discrepancy, r6.path_discrepancy)
    try:
        reconstruct(ReconstructionProblem(PerturbedGH(prob6.gh, dH=1e-3), prob6.seed, prob6.constant, prob6.grid))
        raised = False
    except CompatibilityError:
        raised = True
    out = e1 < 1e-6 and e6 < 1e-6 and mixed < 1e-8 and raised
    return out, (f"S1->U1 {e1:.2e}, C1->U6 {e6:.2e}, mixed-path {mixed:.2e}, "
                 f"corrupted pair raises CompatibilityError: {raised}")


def criterion_7():
    checks = [r for r in reduction_suite() if r.name.startswith("closed-form/")]
    worst = max(r.value for r in checks)
    kinds = sorted({r.name.split("/")[1] for r in checks})
    ok = len(checks) >= 15 and all(r.passed for r in checks) and worst < 1e-6
    return ok, f"{len(checks)} zero-energy quadratures ({', '.join(kinds)}), max |v - closed form| {worst:.2e}"


def criterion_8():
    start = time.perf_counter()
    P = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)
    fam = SolutionFamily("U8", P, c=1.0, branch=-1)
    template = SimConfig(P, fam, t0=1.0, t_end=3.0, r_max=20.0, N=100)
    conv = run_convergence(template, [100, 200, 400], fam)
    res = run(SimConfig(P, fam, t0=1.0, t_end=3.0, r_max=20.0, N=400))
    drift = res.energy_drift()
    elapsed = time.perf_counter() - start
    ok = (abs(conv.order - 2.0) <= 0.2 and res.state.status == Status.COMPLETED and drift < 1e-4
          and elapsed < 60.0)
    return ok, (f"L2 order {conv.order:.3f} (Linf {conv.order_linf:.3f}), energy drift {drift:.2e} "
                f"on t in [1,3] at N=400, {elapsed:.2f} s")


def criterion_9():
    start = time.perf_counter()
    P = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)
    c = -1.0
    fam = SolutionFamily("U6", P, c=c, branch=-1)
    a = math.sqrt(P.k / (P.n * P.n - 1.0))
    t_star = abs(a / c)
    t_pred = 0.0
    res = run(SimConfig(P, fam, t0=t_pred - t_star, t_end=t_pred + t_star, r_max=1.0, N=800))
    elapsed = time.perf_counter() - start
    if res.state.status != Status.BLOWUP:
        return False, f"no blow-up detected ({res.state.status.value})"
    fit = fit_blowup_rate(res)
    terr = abs(res.state.t_blowup - t_pred)
    ok = terr <= 0.05 * t_star and abs(fit.exponent - (1 - P.n) / 2) <= 0.05 and elapsed < 120.0
    return ok, (f"t_b = {res.state.t_blowup:.3e} vs predicted {t_pred:g} (|dt|/t* = {terr / t_star:.2e}), "
                f"exponent {fit.exponent:.4f} vs {(1 - P.n) / 2:g}, {elapsed:.2f} s")


def criterion_10():
    reports = group_action_suite(standard_instances(), np.random.default_rng(0), count=20, tol=1e-9)
    actions = [r for r in reports if r.transformation != "involution-twice" and r.points > 0]
    twice = [r for r in reports if r.transformation == "involution-twice"]
    worst = max(r.max_residual for r in actions)
    worst2 = max(r.max_residual for r in twice)
    kinds = sorted({r.transformation for r in actions})
    ok = all(r.passed for r in reports) and worst < 1e-9 and worst2 < 1e-9 and len(twice) > 0
    return ok, (f"{len(actions)} transformed solutions ({', '.join(kinds)}), max residual {worst:.2e}; "
                f"involution twice max deviation {worst2:.2e}")


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance_criterion(number, capsys):
    ok, detail = CRITERIA[number]()
    _line(number, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, fn in CRITERIA.items():
        ok, detail = fn()
        _line(i, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
