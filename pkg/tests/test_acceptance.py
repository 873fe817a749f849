"""Acceptance suite: one test per release criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see every verdict.
Criterion 4 (branch continuity at a fixed offset) is expected to fail: the
general-branch/degenerate-branch gap at offset 1e-4*gamma genuinely
reaches 2.081e-4 at the (p=0.9, gamma*t=pi, N=1) corner — verified with
50-digit arithmetic — so the asserted 1e-4 bound is tighter than the
formulas' actual modulus of continuity.  The assertion is kept as stated
rather than loosened; the companion scaling checks (gap linear in the
offset) do hold and pass in tests/test_analytic.py.
"""

import time

import numpy as np
import pytest

from zenoscreen.analytic import (
    FreeDecayParams,
    ScreenParams,
    free_decay_coeffs,
    minimal_erasures,
    screened_coeffs,
    screened_fidelity,
)
from zenoscreen.cli import main
from zenoscreen.lindblad import IntegratorConfig, evolve
from zenoscreen.protocols import (
    AtomCavityModel,
    FieldScreenModel,
    InternalHamiltonian,
    erase_casing,
    run_atom_screening,
    run_field_screening,
    xi_moment_probe,
)
from zenoscreen.quantum import (
    QubitParams,
    extract_coefficients,
    fock_density,
    partial_trace,
    qubit_state,
    tensor,
)

GRID_P = (0.1, 0.5, 0.9)
GRID_RATIO = (0.1, 0.25, 1.0, 4.0)
GRID_GT = (0.5, np.pi)
GRID_N = (1, 2, 8, 32)


def report(number, name, ok, detail):
    verdict = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} ({name}): {verdict} - {detail}")
    return ok


def test_criterion_1_free_decay_oracle():
    started = time.time()
    worst = 0.0
    config = IntegratorConfig()
    times = np.linspace(0.0, 2 * np.pi, 25)
    for p in GRID_P:
        q = QubitParams(p)
        decay = FreeDecayParams(1.0)
        from zenoscreen.reporting import _free_decay_model

        model = _free_decay_model(1.0)
        rho = qubit_state(q)
        previous = 0.0
        for t in times:
            rho = evolve(model, rho, float(t - previous), config)
            previous = t
            got = extract_coefficients(rho, q.psi)
            want = free_decay_coeffs(q, decay, float(t))
            worst = max(worst, abs(got.P - want.P), abs(got.V - want.V))
    elapsed = time.time() - started
    ok = worst <= 1e-8 and elapsed <= 10.0
    assert report(
        1,
        "free-decay oracle",
        ok,
        f"max |dP|,|dV| = {worst:.3e} (tol 1e-08), {elapsed:.1f}s",
    )


def test_criterion_2_screened_coefficient_oracle():
    started = time.time()
    worst = 0.0
    config = IntegratorConfig()
    for p in GRID_P:
        q = QubitParams(p)
        for ratio in GRID_RATIO:
            model = AtomCavityModel(ratio, 1.0, fock_cutoff=1)
            for gt in GRID_GT:
                for n in GRID_N:
                    trace = run_atom_screening(q, model, gt, n, config)
                    got = trace.coefficients[-1]
                    want = screened_coeffs(q, ScreenParams(ratio, 1.0, n, gt))
                    worst = max(worst, abs(got.P - want.P), abs(got.V - want.V))
    elapsed = time.time() - started
    ok = worst <= 1e-6 and elapsed <= 60.0
    assert report(
        2,
        "screened-coefficient oracle",
        ok,
        f"96-point grid incl. critical point, max dev = {worst:.3e} (tol 1e-06), {elapsed:.1f}s",
    )


def test_criterion_3_limit_claim():
    q = QubitParams(0.9)
    f_large = screened_fidelity(q, ScreenParams(1.0, 1.0, 10**4, np.pi))
    ratios = []
    for n in (64, 128, 256, 512):
        gap_n = 1.0 - screened_fidelity(q, ScreenParams(1.0, 1.0, n, np.pi))
        gap_2n = 1.0 - screened_fidelity(q, ScreenParams(1.0, 1.0, 2 * n, np.pi))
        ratios.append(gap_n / gap_2n)
    ok = f_large >= 0.999 and all(1.8 <= r <= 2.2 for r in ratios)
    assert report(
        3,
        "unity limit",
        ok,
        f"F(N=1e4) = {f_large:.6f} (>= 0.999), gap ratios = "
        + ", ".join(f"{r:.3f}" for r in ratios),
    )


def test_criterion_4_branch_continuity_bound():
    gamma = 1.0
    offsets = (1e-3, 1e-4, 1e-5)
    worst_at = {eps: 0.0 for eps in offsets}
    worst_point = None
    for p in GRID_P:
        q = QubitParams(p)
        for gt in GRID_GT:
            for n in GRID_N:
                reference = screened_coeffs(q, ScreenParams(gamma / 4, gamma, n, gt))
                for eps in offsets:
                    for sign in (+1, -1):
                        c = screened_coeffs(
                            q, ScreenParams(gamma / 4 + sign * eps * gamma, gamma, n, gt)
                        )
                        dev = max(abs(c.P - reference.P), abs(c.V - reference.V))
                        if dev > worst_at[eps]:
                            worst_at[eps] = dev
                            if eps == 1e-4:
                                worst_point = (p, gt, n)
    decreasing = worst_at[1e-3] > worst_at[1e-4] > worst_at[1e-5]
    ok = worst_at[1e-4] <= 1e-4 and decreasing
    assert report(
        4,
        "branch continuity",
        ok,
        f"max |general - degenerate| at eps=1e-4*gamma: {worst_at[1e-4]:.3e} "
        f"(bound 1e-04, worst at p,gt,N={worst_point}); "
        f"eps sweep {worst_at[1e-3]:.2e} > {worst_at[1e-4]:.2e} > {worst_at[1e-5]:.2e} "
        f"decreasing={decreasing}",
    )


def test_criterion_5_minimal_erasure_curve():
    q = QubitParams(0.9)
    ratios = (0.5, 1.0, 2.0, 4.0)
    goldens = (199, 795, 3179, 12716)  # self-generated, pinned for regression
    counts = [minimal_erasures(q, r, 1.0, np.pi, 0.99) for r in ratios]
    increasing = all(b > a for a, b in zip(counts, counts[1:]))
    logs = np.log(counts)
    second_diffs = np.diff(logs, 2)
    sub_exponential = bool(np.all(second_diffs <= 0.1))
    ok = increasing and sub_exponential and tuple(counts) == goldens
    assert report(
        5,
        "erasure-budget curve",
        ok,
        f"N_min = {counts} (goldens {list(goldens)}), second diffs of log N = "
        + ", ".join(f"{d:+.4f}" for d in second_diffs)
        + " (tol +0.1)",
    )


def test_criterion_6_field_screening():
    started = time.time()
    model = FieldScreenModel(1.0, 1.0, InternalHamiltonian.detuning(1.0))
    amp = 1 / np.sqrt(2)
    fidelities = {}
    for n in (64, 128, 256, 512, 1024):
        trace = run_field_screening((amp, amp), model, np.pi, n)
        fidelities[n] = trace.fidelities[-1]
    ratios = [
        (1.0 - fidelities[n]) / (1.0 - fidelities[2 * n]) for n in (64, 128, 256, 512)
    ]
    probes = []
    for kappa, gamma, n in ((1.0, 1.0, 16), (1.0, 1.0, 64), (0.5, 2.0, 32), (2.0, 0.5, 8)):
        probe_model = FieldScreenModel(kappa, gamma, InternalHamiltonian.none())
        probes.append(max(xi_moment_probe(probe_model, np.pi, n)))
    elapsed = time.time() - started
    ok = (
        fidelities[256] >= 0.99
        and all(1.8 <= r <= 2.2 for r in ratios)
        and max(probes) <= 1e-10
    )
    assert report(
        6,
        "field screening",
        ok,
        f"F(N=256) = {fidelities[256]:.6f} (>= 0.99), gap ratios = "
        + ", ".join(f"{r:.3f}" for r in ratios)
        + f", max moment probe = {max(probes):.2e} (tol 1e-10), {elapsed:.1f}s",
    )


def test_criterion_7_physicality_suite():
    """Trace, Hermiticity and positivity along instrumented trajectories.

    Every evolve() call in the suite already enforces trace drift <= 1e-10
    and min eigenvalue >= -1e-9 internally; here a representative sample of
    protocol trajectories is instrumented explicitly at each segment
    boundary, and the cutoff-1 results are compared against cutoff-3.
    """
    config = IntegratorConfig()
    worst_trace = worst_herm = 0.0
    worst_eig = 0.0
    for p, ratio, gt, n in (
        (0.9, 1.0, np.pi, 8),
        (0.5, 0.25, np.pi, 4),
        (0.1, 4.0, 0.5, 8),
        (0.9, 0.1, 0.5, 2),
    ):
        q = QubitParams(p)
        model = AtomCavityModel(ratio, 1.0).lindblad_model()
        rho = tensor(qubit_state(q), fock_density(2))
        for _ in range(n):
            rho = evolve(model, rho, gt / n, config)
            m = rho.elements
            worst_trace = max(worst_trace, abs(np.trace(m).real - 1.0))
            worst_herm = max(worst_herm, float(np.max(np.abs(m - m.conj().T))))
            worst_eig = min(worst_eig, float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0]))
            rho = erase_casing(rho, 1)

    leak = 0.0
    for p, ratio, gt, n in ((0.9, 1.0, np.pi, 4), (0.5, 4.0, 0.5, 2)):
        q = QubitParams(p)
        finals = [
            run_atom_screening(q, AtomCavityModel(ratio, 1.0, cut), gt, n, config).coefficients[-1]
            for cut in (1, 3)
        ]
        leak = max(leak, abs(finals[0].P - finals[1].P), abs(finals[0].V - finals[1].V))
    amp = 1 / np.sqrt(2)
    field_finals = [
        run_field_screening(
            (amp, amp), FieldScreenModel(1.0, 1.0, InternalHamiltonian.detuning(1.0), cut),
            np.pi, 4, config,
        ).fidelities[-1]
        for cut in (1, 3)
    ]
    leak = max(leak, abs(field_finals[0] - field_finals[1]))

    ok = worst_trace <= 1e-10 and worst_herm <= 1e-10 and worst_eig >= -1e-9 and leak <= 1e-10
    assert report(
        7,
        "physicality suite",
        ok,
        f"trace drift {worst_trace:.2e} (tol 1e-10), herm defect {worst_herm:.2e} (tol 1e-10), "
        f"min eig {worst_eig:.2e} (tol -1e-9), cutoff 1-vs-3 gap {leak:.2e} (tol 1e-10)",
    )


def test_criterion_8_determinism(tmp_path):
    commands = [
        ["free-decay", "--samples", "6"],
        ["screen-atom", "--omega", "1.0", "--n-list", "1,4", "--samples", "4"],
        ["screen-atom", "--omega", "0.25", "--n-list", "1,2", "--samples", "3",
         "--variant", "simulated"],
        ["sweep-n", "--omega-ratios", "0.5,1"],
        ["screen-field", "--n-list", "2,4"],
    ]
    identical = True
    for idx, argv in enumerate(commands):
        paths = [tmp_path / f"run{idx}_{rep}.csv" for rep in (0, 1)]
        for path in paths:
            assert main(argv + ["--out", str(path)]) == 0
        identical = identical and paths[0].read_bytes() == paths[1].read_bytes()

    grid = tmp_path / "grid.txt"
    grid.write_text("0.9 1.0 0.5 2\n0.5 0.25 3.141592653589793 4\n")
    from zenoscreen.reporting import build_runspec, cmd_validate

    spec = build_runspec("validate", {"grid": str(grid)})
    first = cmd_validate(spec)
    second = cmd_validate(spec)
    identical = identical and first[1] == second[1] and first[0] == second[0] == 0

    assert report(
        8,
        "determinism",
        identical,
        f"{len(commands)} CSV subcommands and validate byte-identical across reruns",
    )
