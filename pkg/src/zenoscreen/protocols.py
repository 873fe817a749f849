"""Erasure-screened storage protocols, simulated segment by segment.

Both protocols follow the same template: couple the stored qubit to an
auxiliary "casing" mode that is the only part of the system touched by
the zero-temperature reservoir, evolve the joint state for t/N, then
erase the casing — discard its state and restore the ground state — and
repeat N times.  Erasure is modelled as an instantaneous trace-and-reset
channel; an optional finite-duration variant (a strong extra damping
interval) is available to probe how fast a real reset must be.

Two concrete realizations are provided:

* an atomic qubit exchanging its excitation with a damped cavity mode at
  Rabi frequency omega, the cavity losing photons at rate gamma;
* a photonic qubit (vacuum/one-photon superposition of mode a) leaking
  through a coupling kappa into an auxiliary cavity mode b whose
  amplitude decays at rate gamma, while mode a may additionally undergo
  an internal number-conserving evolution (detuning or Kerr).

Conventions pinned by unit tests: the two-mode coupling Hamiltonian is
i*kappa*(a b+ - a+ b), which reproduces the amplitude equations
d<a>/dt = -kappa <b> and d<b>/dt = +kappa <a> - gamma <b>; the collapse
operator of mode b carries rate 2*gamma so that the *amplitude* <b>
decays at gamma (the energy then decays at 2*gamma).

Total excitation never grows in either protocol, and the initial states
carry at most one quantum, so a Fock cutoff of 1 is exact.  When a larger
cutoff is used, the population of the topmost retained level is monitored
and an excess beyond ``leak_tol`` raises TruncationLeakError.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lindblad import DEFAULT_CONFIG, IntegratorConfig, LindbladModel, evolve
from .quantum import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    QubitParams,
    destroy_operator,
    extract_coefficients,
    fidelity_with_pure,
    fock_density,
    partial_trace,
    pure_density,
    qubit_state,
    sigma_minus,
    tensor,
)

__all__ = [
    "LEAK_TOL",
    "TruncationLeakError",
    "InternalHamiltonian",
    "AtomCavityModel",
    "FieldScreenModel",
    "ProtocolTrace",
    "erase_casing",
    "run_atom_screening",
    "run_field_screening",
    "xi_moment_probe",
]

LEAK_TOL = 1e-8

# Upper limit on kappa*t/N and gamma*t/N accepted in strict short-time mode.
SHORT_TIME_LIMIT = 0.1


class TruncationLeakError(RuntimeError):
    """Population reached the topmost retained Fock level of a truncated mode."""


@dataclass(frozen=True)
class InternalHamiltonian:
    """Number-conserving evolution of the stored field mode.

    kind is one of "none", "detuning" (strength * n) or "kerr"
    (strength * n^2); number conservation is what keeps a finite Fock
    truncation exact.
    """

    kind: str = "none"
    strength: float = 0.0

    _KINDS = ("none", "detuning", "kerr")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"kind must be one of {self._KINDS}, got {self.kind!r}")

    @classmethod
    def none(cls) -> "InternalHamiltonian":
        return cls("none", 0.0)

    @classmethod
    def detuning(cls, delta: float) -> "InternalHamiltonian":
        return cls("detuning", delta)

    @classmethod
    def kerr(cls, chi: float) -> "InternalHamiltonian":
        return cls("kerr", chi)

    def level_frequencies(self, dim: int) -> np.ndarray:
        """Angular frequency of each Fock level under the internal evolution."""
        n = np.arange(dim, dtype=float)
        if self.kind == "none":
            return np.zeros(dim)
        if self.kind == "detuning":
            return self.strength * n
        return self.strength * n**2


@dataclass(frozen=True)
class AtomCavityModel:
    """Atomic qubit resonantly coupled to a damped cavity used as the casing."""

    omega: float
    gamma: float
    fock_cutoff: int = 1

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("omega must be >= 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.fock_cutoff < 1:
            raise ValueError("fock_cutoff must be >= 1")

    @property
    def space(self) -> HilbertSpace:
        return HilbertSpace((2, self.fock_cutoff + 1))

    def lindblad_model(self) -> LindbladModel:
        cavity_dim = self.fock_cutoff + 1
        sm = sigma_minus().elements
        a = destroy_operator(cavity_dim).elements
        coupling = 1j * self.omega * (np.kron(sm, a.conj().T) - np.kron(sm.conj().T, a))
        photon_loss = Operator(self.space, np.kron(np.eye(2, dtype=complex), a))
        return LindbladModel(
            self.space, Operator(self.space, coupling), ((photon_loss, self.gamma),)
        )


@dataclass(frozen=True)
class FieldScreenModel:
    """Stored field mode coupled through an auxiliary damped cavity (the casing)."""

    kappa: float
    gamma: float
    internal: InternalHamiltonian = field(default_factory=InternalHamiltonian.none)
    fock_cutoff: int = 1

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.fock_cutoff < 1:
            raise ValueError("fock_cutoff must be >= 1")

    @property
    def mode_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def space(self) -> HilbertSpace:
        return HilbertSpace((self.mode_dim, self.mode_dim))

    def lindblad_model(self) -> LindbladModel:
        dim = self.mode_dim
        a = destroy_operator(dim).elements
        eye = np.eye(dim, dtype=complex)
        coupling = 1j * self.kappa * (np.kron(a, a.conj().T) - np.kron(a.conj().T, a))
        internal = np.kron(np.diag(self.internal.level_frequencies(dim)).astype(complex), eye)
        # amplitude of mode b decays at gamma, hence the Lindblad rate 2*gamma
        casing_loss = Operator(self.space, np.kron(eye, a))
        return LindbladModel(
            self.space, Operator(self.space, coupling + internal), ((casing_loss, 2.0 * self.gamma),)
        )


@dataclass(frozen=True)
class ProtocolTrace:
    """Per-segment record of a screening run.

    ``coefficients`` holds a Coefficients value per boundary for the atom
    protocol and the reduced stored-mode DensityMatrix for the field
    protocol.  Entry 0 describes the initial state at time 0.
    """

    times: tuple[float, ...]
    fidelities: tuple[float, ...]
    coefficients: tuple

    def __post_init__(self):
        if not len(self.times) == len(self.fidelities) == len(self.coefficients):
            raise ValueError("trace fields must have equal length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")


def erase_casing(rho_joint: DensityMatrix, casing_factor: int) -> DensityMatrix:
    """Trace out the casing factor and restore it to its ground state.

    The stored system's reduced state is untouched; the casing ends in
    |0><0| regardless of what it held.
    """
    dims = rho_joint.space.factor_dims
    n = len(dims)
    if not 0 <= casing_factor < n:
        raise ValueError(f"casing_factor={casing_factor} does not name a factor of {dims}")
    others = [i for i in range(n) if i != casing_factor]

    t = rho_joint.elements.reshape(dims + dims)
    remaining = list(range(n))
    for label in [casing_factor]:
        pos = remaining.index(label)
        t = np.trace(t, axis1=pos, axis2=pos + len(remaining))
        remaining.pop(pos)
    kept_dim = int(np.prod([dims[i] for i in others])) if others else 1
    reduced = t.reshape(kept_dim, kept_dim)

    ground = np.zeros((dims[casing_factor], dims[casing_factor]), dtype=complex)
    ground[0, 0] = 1.0
    combined = np.kron(reduced, ground)

    # kron above orders factors as (others..., casing); permute back
    order = others + [casing_factor]
    axis_perm = [order.index(label) for label in range(n)]
    shaped = combined.reshape(tuple(dims[i] for i in order) * 2)
    restored = shaped.transpose(axis_perm + [p + n for p in axis_perm]).reshape(
        rho_joint.dim, rho_joint.dim
    )
    return DensityMatrix(rho_joint.space, restored, rho_joint.tol)


def _top_level_population(rho: DensityMatrix, factor: int) -> float:
    dims = rho.space.factor_dims
    t = rho.elements.reshape(dims + dims)
    top = dims[factor] - 1
    idx = [slice(None)] * (2 * len(dims))
    idx[factor] = top
    idx[factor + len(dims)] = top
    sub = t[tuple(idx)]
    # remaining row/col axes pair up; their joint trace is the population
    k = int(np.sqrt(sub.size))
    return float(np.real(np.trace(sub.reshape(k, k))))


def _check_leak(rho: DensityMatrix, factors: list[int], cutoff: int, leak_tol: float):
    # with at most one initial excitation, cutoff 1 is exact and its top
    # level is legitimately occupied; only a deeper truncation is monitored
    if cutoff <= 1:
        return
    for f in factors:
        pop = _top_level_population(rho, f)
        if pop > leak_tol:
            raise TruncationLeakError(
                f"population {pop:.3e} at top Fock level of factor {f} exceeds {leak_tol:.0e}"
            )


def _augmented_with_damping(model: LindbladModel, op: Operator, rate: float) -> LindbladModel:
    return LindbladModel(model.space, model.hamiltonian, model.collapses + ((op, rate),))


def run_atom_screening(
    q: QubitParams,
    m: AtomCavityModel,
    total_time: float,
    n_erasures: int,
    config: IntegratorConfig = DEFAULT_CONFIG,
    leak_tol: float = LEAK_TOL,
    erasure_duration: float = 0.0,
    erasure_rate: float = 0.0,
) -> ProtocolTrace:
    """Run the atomic screening protocol and record every segment boundary.

    Starting from the qubit state tensored with the cavity vacuum, the
    joint state evolves for t/N under the coupled damped dynamics and the
    cavity is then erased, N times over.  Fidelity (against the initial
    pure state) and the extracted (P, V) pair are recorded after every
    erasure; entry 0 is the initial state.

    With ``erasure_duration`` > 0 the instantaneous reset is replaced by an
    interval of strong extra cavity damping at ``erasure_rate``; each such
    interval extends the recorded boundary times beyond ``total_time``, and
    the analytic expressions no longer apply exactly.
    """
    if total_time < 0:
        raise ValueError("total_time must be >= 0")
    if n_erasures < 1:
        raise ValueError("n_erasures must be >= 1")
    if erasure_duration < 0 or erasure_rate < 0:
        raise ValueError("erasure parameters must be >= 0")
    if erasure_duration > 0 and erasure_rate == 0:
        raise ValueError("finite-duration erasure requires a positive erasure_rate")

    model = m.lindblad_model()
    cavity_vacuum = fock_density(m.fock_cutoff + 1)
    rho = tensor(qubit_state(q), cavity_vacuum)
    if erasure_duration > 0:
        photon_loss = model.collapses[0][0]
        eraser = _augmented_with_damping(model, photon_loss, erasure_rate)

    times = [0.0]
    fidelities = [1.0]
    coefficients = [extract_coefficients(partial_atom(rho), q.psi)]

    if total_time == 0:
        return ProtocolTrace(tuple(times), tuple(fidelities), tuple(coefficients))

    tau = total_time / n_erasures
    clock = 0.0
    for _ in range(n_erasures):
        rho = evolve(model, rho, tau, config)
        clock += tau
        _check_leak(rho, [1], m.fock_cutoff, leak_tol)
        if erasure_duration > 0:
            rho = evolve(eraser, rho, erasure_duration, config)
            clock += erasure_duration
        else:
            rho = erase_casing(rho, casing_factor=1)
        atom = partial_atom(rho)
        times.append(clock)
        fidelities.append(fidelity_with_pure(atom, q))
        coefficients.append(extract_coefficients(atom, q.psi))
    return ProtocolTrace(tuple(times), tuple(fidelities), tuple(coefficients))


def partial_atom(rho_joint: DensityMatrix) -> DensityMatrix:
    """Reduced state of the stored system (factor 0) of a joint state."""
    return partial_trace(rho_joint, keep=0)


def run_field_screening(
    initial: tuple[complex, complex],
    m: FieldScreenModel,
    total_time: float,
    n_erasures: int,
    config: IntegratorConfig = DEFAULT_CONFIG,
    leak_tol: float = LEAK_TOL,
    strict_regime: bool = False,
) -> ProtocolTrace:
    """Run the photonic screening protocol and record every segment boundary.

    ``initial`` holds the (vacuum, one-photon) amplitudes of the stored
    mode.  Fidelity is measured against the internally evolved target,
    i.e. the initial superposition propagated by the internal Hamiltonian
    alone; perfect screening preserves that evolution while removing the
    reservoir's influence.  With ``strict_regime`` the per-segment phases
    kappa*t/N and gamma*t/N must stay below SHORT_TIME_LIMIT.
    """
    if total_time < 0:
        raise ValueError("total_time must be >= 0")
    if n_erasures < 1:
        raise ValueError("n_erasures must be >= 1")
    alpha, beta = complex(initial[0]), complex(initial[1])
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm}")
    tau = total_time / n_erasures
    if strict_regime and max(m.kappa * tau, m.gamma * tau) > SHORT_TIME_LIMIT:
        raise ValueError(
            f"short-time regime violated: kappa*t/N={m.kappa * tau:.3g}, "
            f"gamma*t/N={m.gamma * tau:.3g} exceed {SHORT_TIME_LIMIT}"
        )

    dim = m.mode_dim
    model = m.lindblad_model()
    stored_amps = np.zeros(dim, dtype=complex)
    stored_amps[0], stored_amps[1] = alpha, beta
    rho = tensor(pure_density(HilbertSpace((dim,)), stored_amps), fock_density(dim))
    level_freqs = m.internal.level_frequencies(dim)

    def target_fidelity(rho_a: DensityMatrix, t: float) -> float:
        target = stored_amps * np.exp(-1j * level_freqs * t)
        return float(np.real(target.conj() @ rho_a.elements @ target))

    times = [0.0]
    reduced0 = partial_atom(rho)
    fidelities = [target_fidelity(reduced0, 0.0)]
    reduced_states = [reduced0]

    if total_time == 0:
        return ProtocolTrace(tuple(times), tuple(fidelities), tuple(reduced_states))

    for k in range(1, n_erasures + 1):
        rho = evolve(model, rho, tau, config)
        _check_leak(rho, [0, 1], m.fock_cutoff, leak_tol)
        rho = erase_casing(rho, casing_factor=1)
        reduced = partial_atom(rho)
        times.append(k * tau)
        fidelities.append(target_fidelity(reduced, k * tau))
        reduced_states.append(reduced)
    return ProtocolTrace(tuple(times), tuple(fidelities), tuple(reduced_states))


# normally ordered moment exponents (m, n) for <a+^m a^n> with 1 <= m+n <= 2
MOMENT_ORDERS = ((0, 1), (1, 0), (1, 1), (0, 2), (2, 0))


def xi_moment_probe(
    m: FieldScreenModel,
    total_time: float,
    n_erasures: int,
    config: IntegratorConfig = DEFAULT_CONFIG,
) -> list[float]:
    """Magnitudes of the stored mode's normally ordered moments after a vacuum run.

    The protocol is run with the stored mode initially in vacuum; at zero
    temperature the reservoir injects nothing, so every moment
    <a+^m a^n> with 1 <= m+n <= 2 (ordered as MOMENT_ORDERS) must vanish.
    """
    trace = run_field_screening((1.0, 0.0), m, total_time, n_erasures, config)
    rho_a = trace.coefficients[-1].elements
    a = destroy_operator(m.mode_dim).elements
    ad = a.conj().T
    values = []
    for mm, nn in MOMENT_ORDERS:
        op = np.linalg.matrix_power(ad, mm) @ np.linalg.matrix_power(a, nn)
        values.append(float(abs(np.trace(rho_a @ op))))
    return values
