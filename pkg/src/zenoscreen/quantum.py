"""Dense linear algebra for finite-dimensional quantum states and operators.

Everything in this package lives on small composite Hilbert spaces (a
two-level system tensored with one or two truncated field modes, total
dimension well under ~20), so states and operators are stored as full
complex matrices.  Density matrices are validated on construction:
Hermitian, unit trace, and positive semidefinite, each within a
configurable tolerance.

Basis conventions, fixed once and used everywhere:

* composite spaces list the system factor first, auxiliary factors after;
* for a two-level system, index 0 is the ground state |g> and index 1 the
  excited state |e>;
* field-mode (Fock) states are indexed by ascending photon number, so
  index 0 is the vacuum.

A qubit prepared in the superposition sqrt(1-p)|g> + exp(-i*psi)*sqrt(p)|e>
has density matrix

    rho = (1-P)|g><g| + P|e><e| + V (exp(i*psi)|g><e| + exp(-i*psi)|e><g|)

with excited-state population P = p and interference coefficient
V = sqrt(p(1-p)).  Zero-temperature decay shrinks P and V but never
rotates the relative phase psi; ``extract_coefficients`` enforces this and
returns the *signed* coefficient V, which can become negative when a
coherent exchange with an auxiliary mode flips the sign of the coherence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "PhaseConsistencyError",
    "HilbertSpace",
    "Operator",
    "DensityMatrix",
    "QubitParams",
    "Coefficients",
    "qubit_state",
    "tensor",
    "partial_trace",
    "fidelity_with_pure",
    "extract_coefficients",
    "identity_operator",
    "destroy_operator",
    "number_operator",
    "sigma_minus",
    "fock_density",
    "pure_density",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances for state validation.

    herm / trace / psd bound the Hermiticity defect, trace deviation and
    the most negative eigenvalue allowed in a density matrix; phase bounds
    the transverse (phase-inconsistent) part of a qubit coherence; phys is
    the slack allowed on the physical ranges of extracted coefficients.
    """

    herm: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    phase: float = 1e-6
    phys: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


class PhaseConsistencyError(ValueError):
    """Qubit coherence is not aligned with the expected relative phase."""


@dataclass(frozen=True)
class HilbertSpace:
    """Composite Hilbert space described by the dimension of each tensor factor."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be >= 1, got {self.factor_dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return prod(self.factor_dims)

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)


def _as_square_matrix(elements, dim: int) -> np.ndarray:
    m = np.array(elements, dtype=complex)
    if m.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class Operator:
    """A (not necessarily Hermitian) linear operator on a HilbertSpace."""

    space: HilbertSpace
    elements: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "elements", _as_square_matrix(self.elements, self.space.dim))

    def dagger(self) -> "Operator":
        return Operator(self.space, self.elements.conj().T)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state on a HilbertSpace."""

    space: HilbertSpace
    elements: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, compare=False, repr=False)

    def __post_init__(self):
        m = _as_square_matrix(self.elements, self.space.dim)
        herm_defect = np.max(np.abs(m - m.conj().T))
        if herm_defect > self.tol.herm:
            raise ValueError(f"not Hermitian: defect {herm_defect:.3e} > {self.tol.herm:.0e}")
        trace_dev = abs(m.trace() - 1.0)
        if trace_dev > self.tol.trace:
            raise ValueError(f"trace deviates from 1 by {trace_dev:.3e} > {self.tol.trace:.0e}")
        min_eig = np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0]
        if min_eig < -self.tol.psd:
            raise ValueError(f"not positive semidefinite: min eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "elements", m)

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class QubitParams:
    """Initial pure qubit state: excited-state probability p and relative phase psi."""

    p: float
    psi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def ket(self) -> np.ndarray:
        """Amplitudes (ground, excited) of the pure superposition."""
        return np.array(
            [np.sqrt(1.0 - self.p), np.exp(-1j * self.psi) * np.sqrt(self.p)], dtype=complex
        )


@dataclass(frozen=True)
class Coefficients:
    """Excited-state population P and signed interference coefficient V of a qubit state.

    V is the component of the coherence <e|rho|g> along the expected phase
    direction exp(-i*psi).  For any physical state |V| <= sqrt(P(1-P));
    the sign of V flips when coherent exchange with an auxiliary mode
    carries the coherence through zero.
    """

    P: float
    V: float
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, compare=False, repr=False)

    def __post_init__(self):
        slack = self.tol.phys
        if not -slack <= self.P <= 1.0 + slack:
            raise ValueError(f"population P={self.P} outside [0, 1]")
        bound = np.sqrt(max(self.P * (1.0 - self.P), 0.0)) + slack
        if abs(self.V) > bound:
            raise ValueError(f"|V|={abs(self.V):.6g} exceeds sqrt(P(1-P))={bound:.6g}")


def qubit_state(params: QubitParams, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Rank-1 density matrix of the pure superposition described by ``params``."""
    ket = params.ket()
    return DensityMatrix(HilbertSpace((2,)), np.outer(ket, ket.conj()), tol)


def tensor(a, b):
    """Kronecker product of two states or two operators; a's factors come first."""
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        space = HilbertSpace(a.space.factor_dims + b.space.factor_dims)
        return DensityMatrix(space, np.kron(a.elements, b.elements), a.tol)
    if isinstance(a, Operator) and isinstance(b, Operator):
        space = HilbertSpace(a.space.factor_dims + b.space.factor_dims)
        return Operator(space, np.kron(a.elements, b.elements))
    raise TypeError("tensor requires two DensityMatrix or two Operator operands")


def _traced_elements(rho: DensityMatrix, keep: int) -> np.ndarray:
    dims = rho.space.factor_dims
    n = len(dims)
    t = rho.elements.reshape(dims + dims)
    remaining = list(range(n))
    for axis in reversed([i for i in range(n) if i != keep]):
        pos = remaining.index(axis)
        t = np.trace(t, axis1=pos, axis2=pos + len(remaining))
        remaining.pop(pos)
    return t


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced density matrix on factor ``keep``, tracing out all other factors."""
    dims = rho.space.factor_dims
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep={keep} does not name a factor of {dims}")
    reduced = _traced_elements(rho, keep)
    return DensityMatrix(HilbertSpace((dims[keep],)), reduced, rho.tol)


def fidelity_with_pure(rho: DensityMatrix, params: QubitParams) -> float:
    """Overlap <Psi|rho|Psi> of a qubit state with the pure superposition ``params``."""
    if rho.dim != 2:
        raise ValueError(f"expected a 2-dimensional qubit state, got dim {rho.dim}")
    ket = params.ket()
    return float(np.real(ket.conj() @ rho.elements @ ket))


def extract_coefficients(
    rho: DensityMatrix, psi: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> Coefficients:
    """Population and signed interference coefficient of a qubit state.

    The coherence <e|rho|g> must point along +-exp(-i*psi): zero-temperature
    decay and resonant exchange never rotate the relative phase, so a
    transverse component beyond ``tol.phase`` signals a modelling error and
    raises PhaseConsistencyError.
    """
    if rho.dim != 2:
        raise ValueError(f"expected a 2-dimensional qubit state, got dim {rho.dim}")
    population = float(np.real(rho.elements[1, 1]))
    aligned = rho.elements[1, 0] * np.exp(1j * psi)
    if abs(aligned.imag) > tol.phase:
        raise PhaseConsistencyError(
            f"coherence phase deviates from psi={psi}: transverse part {aligned.imag:.3e}"
        )
    return Coefficients(population, float(aligned.real), tol)


def identity_operator(space: HilbertSpace) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=complex))


def destroy_operator(dim: int) -> Operator:
    """Annihilation operator on a single mode truncated to ``dim`` Fock levels."""
    return Operator(
        HilbertSpace((dim,)), np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    )


def number_operator(dim: int) -> Operator:
    return Operator(HilbertSpace((dim,)), np.diag(np.arange(dim, dtype=float)).astype(complex))


def sigma_minus() -> Operator:
    """Two-level lowering operator |g><e|."""
    return Operator(HilbertSpace((2,)), np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def fock_density(dim: int, n: int = 0, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Density matrix of the Fock state |n> on a ``dim``-level mode (vacuum by default)."""
    if not 0 <= n < dim:
        raise ValueError(f"Fock level {n} outside truncated mode of dimension {dim}")
    m = np.zeros((dim, dim), dtype=complex)
    m[n, n] = 1.0
    return DensityMatrix(HilbertSpace((dim,)), m, tol)


def pure_density(
    space: HilbertSpace, amplitudes, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Density matrix |psi><psi| of a normalized amplitude vector on ``space``."""
    v = np.asarray(amplitudes, dtype=complex)
    if v.shape != (space.dim,):
        raise ValueError(f"amplitude vector must have length {space.dim}, got {v.shape}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"amplitudes not normalized: |v| = {norm}")
    return DensityMatrix(space, np.outer(v / norm, (v / norm).conj()), tol)
