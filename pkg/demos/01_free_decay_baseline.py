#!/usr/bin/env python3
"""Baseline: how fast an unprotected qubit dies in a zero-temperature reservoir.

A qubit prepared in sqrt(1-p)|g> + sqrt(p)|e> and coupled directly to an
absorbing environment loses its excited population as exp(-gamma t) and its
coherence as exp(-gamma t/2), so the overlap with the initial state decays
exponentially.  This script evaluates the closed form, re-derives the same
numbers by integrating the master equation, and writes the comparison as
CSV and SVG.
"""

from pathlib import Path

import numpy as np

from zenoscreen import (
    Coefficients,
    FreeDecayParams,
    IntegratorConfig,
    QubitParams,
    extract_coefficients,
    fidelity,
    free_decay_coeffs,
    evolve,
    qubit_state,
)
from zenoscreen.reporting import CsvTable, _free_decay_model, write_csv, write_svg

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

p, gamma = 0.9, 1.0
q = QubitParams(p)
decay = FreeDecayParams(gamma)
initial = Coefficients(p, np.sqrt(p * (1 - p)))

# integrate the master equation alongside the closed form
model = _free_decay_model(gamma)
config = IntegratorConfig()
rho = qubit_state(q)
rows = []
previous = 0.0
for t in np.linspace(0.0, 2 * np.pi, 81):
    rho = evolve(model, rho, float(t) - previous, config)
    previous = float(t)
    numeric = extract_coefficients(rho, q.psi)
    closed = free_decay_coeffs(q, decay, float(t))
    rows.append((float(t), closed.P, closed.V, numeric.P, numeric.V, fidelity(initial, closed)))

table = CsvTable(("t", "P_analytic", "V_analytic", "P_numeric", "V_numeric", "F"), tuple(rows))
write_csv(table, str(OUT / "free_decay.csv"))
write_svg(table, str(OUT / "free_decay.svg"), title="free decay, p=0.9, gamma=1")

print("unprotected qubit, p=0.9, gamma=1")
print(f"{'gamma*t':>8} {'P':>10} {'V':>10} {'F':>10}")
for t, P, V, _, _, F in rows[::16]:
    print(f"{t:8.3f} {P:10.5f} {V:10.5f} {F:10.5f}")
worst = max(max(abs(r[1] - r[3]), abs(r[2] - r[4])) for r in rows)
print(f"\nclosed form vs integrator: max deviation {worst:.2e}")
print(f"wrote {OUT / 'free_decay.csv'} and {OUT / 'free_decay.svg'}")
