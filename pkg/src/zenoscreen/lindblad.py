"""Numerical integration of Lindblad master equations.

The generator implemented here is

    drho/dt = -i[H, rho] + sum_k (r_k/2) (2 L_k rho L_k+  -  L_k+ L_k rho  -  rho L_k+ L_k)

with the Hamiltonian supplied in angular-frequency units (already divided
by hbar) and each collapse operator L_k paired with a nonnegative rate
r_k.  For every model in this package the state space is tiny (dimension
<= ~16), so the default integrator is a deliberately simple, trustworthy
scheme: classical fourth-order Runge-Kutta with step-doubling error
control.  Each trial step h is compared against two half steps; the
Richardson estimate |y_half - y_full|/15 is accepted when it stays below
h * (abs_tol + rel_tol * |y|), i.e. the error is controlled per unit
time, which keeps the accumulated error over the whole interval near the
configured tolerance.

``evolve_expm`` provides an independent cross-check backend: it builds the
matrix of the generator acting on vectorized density matrices via
Kronecker identities and applies scipy's expm.  It shares no stepping or
generator-assembly code with ``evolve`` and is used in tests to confirm
the Runge-Kutta results; it is deliberately not the default, so that the
time-stepped route remains an independent witness for the closed-form
solutions elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .quantum import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    HilbertSpace,
    Operator,
    Tolerances,
)

__all__ = [
    "IntegrationError",
    "IntegratorConfig",
    "LindbladModel",
    "lindblad_rhs",
    "evolve",
    "evolve_expm",
]


class IntegrationError(RuntimeError):
    """The integrator exceeded its step budget or produced an unphysical state."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Step-control settings for ``evolve``.

    ``initial_step=None`` starts from duration/16.  ``fixed_step`` disables
    adaptivity and forces uniform steps of (approximately) the given size;
    it exists for convergence-order measurements.
    """

    initial_step: float | None = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_steps: int = 10**7
    fixed_step: float | None = None

    def __post_init__(self):
        if self.initial_step is not None and self.initial_step <= 0:
            raise ValueError("initial_step must be positive")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.fixed_step is not None and self.fixed_step <= 0:
            raise ValueError("fixed_step must be positive")


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian (as angular frequency) plus (collapse operator, rate) pairs."""

    space: HilbertSpace
    hamiltonian: Operator
    collapses: tuple[tuple[Operator, float], ...] = ()
    tol: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self):
        object.__setattr__(self, "collapses", tuple((op, float(r)) for op, r in self.collapses))
        h = self.hamiltonian
        if h.space.dim != self.space.dim:
            raise ValueError("hamiltonian dimension does not match model space")
        defect = np.max(np.abs(h.elements - h.elements.conj().T))
        if defect > self.tol.herm:
            raise ValueError(f"hamiltonian not Hermitian: defect {defect:.3e}")
        for op, rate in self.collapses:
            if op.space.dim != self.space.dim:
                raise ValueError("collapse operator dimension does not match model space")
            if rate < 0:
                raise ValueError(f"collapse rate must be >= 0, got {rate}")


def _rhs_matrix_func(model: LindbladModel):
    """Right-hand side acting on raw matrices, with daggers precomputed."""
    h = model.hamiltonian.elements
    terms = []
    for op, rate in model.collapses:
        l = op.elements
        ld = l.conj().T
        terms.append((l, ld, rate, 0.5 * rate * (ld @ l)))

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = -1j * (h @ rho - rho @ h)
        for l, ld, rate, half_ldl in terms:
            out += rate * (l @ rho @ ld)
            out -= half_ldl @ rho + rho @ half_ldl
        return out

    return rhs


def lindblad_rhs(model: LindbladModel, rho: DensityMatrix) -> np.ndarray:
    """Time derivative drho/dt of the master equation at the given state."""
    if rho.dim != model.space.dim:
        raise ValueError("state dimension does not match model space")
    return _rhs_matrix_func(model)(rho.elements)


def _generator_matrix(model: LindbladModel) -> np.ndarray:
    """Matrix of the master-equation generator on row-major-flattened states.

    Built column by column from the matrix-valued right-hand side, so the
    time stepper exercises exactly the generator that ``lindblad_rhs``
    defines while paying one matrix-vector product per evaluation.
    """
    d = model.space.dim
    rhs = _rhs_matrix_func(model)
    gen = np.empty((d * d, d * d), dtype=complex)
    basis = np.zeros((d, d), dtype=complex)
    for k in range(d * d):
        i, j = divmod(k, d)
        basis[i, j] = 1.0
        gen[:, k] = rhs(basis).ravel()
        basis[i, j] = 0.0
    return gen


def _rk4_step(gen: np.ndarray, y: np.ndarray, h: float) -> np.ndarray:
    k1 = gen @ y
    k2 = gen @ (y + 0.5 * h * k1)
    k3 = gen @ (y + 0.5 * h * k2)
    k4 = gen @ (y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _finalize(model: LindbladModel, y: np.ndarray) -> DensityMatrix:
    d = model.space.dim
    m = y.reshape(d, d)
    drift = abs(m.trace() - 1.0)
    if drift > model.tol.trace:
        raise IntegrationError(f"trace drifted by {drift:.3e} > {model.tol.trace:.0e}")
    m = m / m.trace()
    min_eig = np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0]
    if min_eig < -model.tol.psd:
        raise IntegrationError(f"positivity violated: min eigenvalue {min_eig:.3e}")
    return DensityMatrix(model.space, m, model.tol)


def evolve(
    model: LindbladModel,
    rho0: DensityMatrix,
    duration: float,
    config: IntegratorConfig = DEFAULT_CONFIG,
) -> DensityMatrix:
    """Propagate ``rho0`` for ``duration`` under the master equation.

    Steps are accepted only when the step-doubling error estimate is below
    h*(abs_tol + rel_tol*|y|).  The final trace is renormalized when its
    drift is within the trace tolerance and an IntegrationError is raised
    otherwise, as it is when positivity is violated or the step budget is
    exhausted.
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    if rho0.space != model.space:
        raise ValueError("state space does not match model space")
    if duration == 0.0:
        return rho0

    gen = _generator_matrix(model)
    y = rho0.elements.ravel().copy()

    if config.fixed_step is not None:
        n = max(1, round(duration / config.fixed_step))
        if n > config.max_steps:
            raise IntegrationError(f"fixed-step plan needs {n} steps > max_steps")
        h = duration / n
        for _ in range(n):
            y = _rk4_step(gen, y, h)
        return _finalize(model, y)

    t = 0.0
    h = config.initial_step if config.initial_step is not None else duration / 16.0
    steps = 0
    while t < duration:
        h = min(h, duration - t)
        y_full = _rk4_step(gen, y, h)
        y_half = _rk4_step(gen, _rk4_step(gen, y, 0.5 * h), 0.5 * h)
        err = np.max(np.abs(y_half - y_full)) / 15.0
        budget = h * (config.abs_tol + config.rel_tol * np.max(np.abs(y_half)))
        if err <= budget:
            t += h
            y = y_half
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * (budget / err) ** 0.25))
        else:
            factor = max(0.1, 0.9 * (budget / err) ** 0.25)
        h *= factor
        steps += 1
        if steps > config.max_steps:
            raise IntegrationError(f"exceeded max_steps={config.max_steps} at t={t:.6g}")
        if h < duration * 1e-15:
            raise IntegrationError(f"step size underflow at t={t:.6g}")
    return _finalize(model, y)


def evolve_expm(model: LindbladModel, rho0: DensityMatrix, duration: float) -> DensityMatrix:
    """Cross-check backend: exact exponential of the vectorized generator.

    The generator matrix is assembled here from Kronecker identities
    (vec(A rho B) = (A kron B^T) vec(rho) for row-major vec), independently
    of the stepping path used by ``evolve``.
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    d = model.space.dim
    if rho0.dim != d:
        raise ValueError("state dimension does not match model space")
    eye = np.eye(d, dtype=complex)
    h = model.hamiltonian.elements
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for op, rate in model.collapses:
        l = op.elements
        ldl = l.conj().T @ l
        gen += rate * (
            np.kron(l, l.conj()) - 0.5 * np.kron(ldl, eye) - 0.5 * np.kron(eye, ldl.T)
        )
    y = scipy.linalg.expm(gen * duration) @ rho0.elements.ravel()
    return _finalize(model, y)
