import numpy as np
import pytest

from zenoscreen.lindblad import (
    IntegrationError,
    IntegratorConfig,
    LindbladModel,
    evolve,
    evolve_expm,
    lindblad_rhs,
)
from zenoscreen.quantum import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    QubitParams,
    fock_density,
    qubit_state,
    sigma_minus,
    tensor,
)

QUBIT = HilbertSpace((2,))


def decay_model(gamma=1.0):
    zero = Operator(QUBIT, np.zeros((2, 2), dtype=complex))
    return LindbladModel(QUBIT, zero, ((sigma_minus(), gamma),))


def jaynes_cummings_model(omega, gamma, cutoff=1):
    space = HilbertSpace((2, cutoff + 1))
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)
    sm = sigma_minus().elements
    h = 1j * omega * (np.kron(sm, a.conj().T) - np.kron(sm.conj().T, a))
    loss = Operator(space, np.kron(np.eye(2, dtype=complex), a))
    return LindbladModel(space, Operator(space, h), ((loss, gamma),))


def random_model(rng, dim, n_collapses=2):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    space = HilbertSpace((dim,))
    h = Operator(space, (g + g.conj().T) / 2)
    collapses = []
    for _ in range(n_collapses):
        l = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        collapses.append((Operator(space, l / np.linalg.norm(l)), float(rng.uniform(0.2, 1.0))))
    return LindbladModel(space, h, tuple(collapses))


def random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(HilbertSpace((dim,)), rho / np.trace(rho))


class TestRhs:
    def test_zero_model(self):
        model = LindbladModel(QUBIT, Operator(QUBIT, np.zeros((2, 2))))
        out = lindblad_rhs(model, fock_density(2))
        assert np.allclose(out, 0.0)

    def test_ground_state_stationary(self):
        out = lindblad_rhs(decay_model(1.0), qubit_state(QubitParams(0.0)))
        assert np.allclose(out, 0.0, atol=1e-15)

    def test_excited_state_rates(self):
        # expanding the 2x2 master equation by hand: the excited population
        # drains at rate gamma and reappears in the ground state
        out = lindblad_rhs(decay_model(1.0), qubit_state(QubitParams(1.0)))
        assert out[1, 1].real == pytest.approx(-1.0)
        assert out[0, 0].real == pytest.approx(+1.0)
        assert abs(out[0, 1]) < 1e-15

    def test_traceless_and_hermitian(self):
        rng = np.random.default_rng(21)
        for dim in (2, 3, 4):
            model = random_model(rng, dim)
            out = lindblad_rhs(model, random_density(rng, dim))
            assert abs(np.trace(out)) < 1e-13
            assert np.max(np.abs(out - out.conj().T)) < 1e-13

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lindblad_rhs(decay_model(), fock_density(3))

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            LindbladModel(QUBIT, Operator(QUBIT, np.zeros((2, 2))), ((sigma_minus(), -1.0),))

    def test_non_hermitian_hamiltonian_rejected(self):
        with pytest.raises(ValueError):
            LindbladModel(QUBIT, sigma_minus())


class TestEvolve:
    def test_zero_duration(self):
        rho0 = qubit_state(QubitParams(0.4, 0.2))
        assert evolve(decay_model(), rho0, 0.0) is rho0

    def test_free_decay_matches_closed_form(self):
        p, gamma, t = 0.9, 1.0, np.pi
        rho = evolve(decay_model(gamma), qubit_state(QubitParams(p)), t)
        assert rho.elements[1, 1].real == pytest.approx(p * np.exp(-gamma * t), abs=1e-9)
        assert rho.elements[1, 0].real == pytest.approx(
            np.sqrt(p * (1 - p)) * np.exp(-gamma * t / 2), abs=1e-9
        )

    def test_unitary_phase_advance(self):
        # H = delta |e><e| with delta*t = pi flips the coherence sign and
        # leaves the populations alone
        delta = 2.0
        h = Operator(QUBIT, np.diag([0.0, delta]).astype(complex))
        model = LindbladModel(QUBIT, h)
        rho0 = qubit_state(QubitParams(0.5))
        rho = evolve(model, rho0, np.pi / delta)
        assert rho.elements[0, 1] == pytest.approx(-rho0.elements[0, 1], abs=1e-9)
        assert rho.elements[1, 1].real == pytest.approx(0.5, abs=1e-12)

    def test_physicality_along_trajectory(self):
        rng = np.random.default_rng(42)
        for trial in range(6):
            dim = int(rng.integers(2, 5))
            model = random_model(rng, dim)
            rho = random_density(rng, dim)
            for _ in range(3):  # three chained segments sample the trajectory
                rho = evolve(model, rho, 0.25)
                m = rho.elements
                assert abs(np.trace(m) - 1.0) < 1e-10
                assert np.max(np.abs(m - m.conj().T)) < 1e-10
                assert np.linalg.eigvalsh((m + m.conj().T) / 2)[0] > -1e-9

    def test_convergence_order_at_least_four(self):
        # forced uniform steps against the exponential closed form
        p, gamma = 0.9, 1.0
        errors = []
        for h in (0.1, 0.05, 0.025):
            rho = evolve(
                decay_model(gamma),
                qubit_state(QubitParams(p)),
                1.0,
                IntegratorConfig(fixed_step=h),
            )
            errors.append(abs(rho.elements[1, 1].real - p * np.exp(-gamma)))
        orders = [np.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
        assert min(orders) > 3.9  # measured ~4.03; an order-3 scheme would give ~3

    def test_joint_vacuum_ground_state_is_fixed_point(self):
        model = jaynes_cummings_model(1.0, 1.0)
        rho0 = tensor(qubit_state(QubitParams(0.0)), fock_density(2))
        rho = evolve(model, rho0, 1.0)
        assert np.max(np.abs(rho.elements - rho0.elements)) < 1e-12

    def test_matches_exponential_backend(self):
        rng = np.random.default_rng(9)
        for dim in (2, 3):
            model = random_model(rng, dim)
            rho0 = random_density(rng, dim)
            stepped = evolve(model, rho0, 0.8)
            exact = evolve_expm(model, rho0, 0.8)
            assert np.max(np.abs(stepped.elements - exact.elements)) < 1e-9

    def test_max_steps_exceeded(self):
        with pytest.raises(IntegrationError, match="max_steps"):
            evolve(
                decay_model(),
                qubit_state(QubitParams(0.9)),
                1.0,
                IntegratorConfig(max_steps=3),
            )

    def test_space_mismatch(self):
        with pytest.raises(ValueError):
            evolve(jaynes_cummings_model(1.0, 1.0), fock_density(4), 0.1)

    def test_negative_duration(self):
        with pytest.raises(ValueError):
            evolve(decay_model(), qubit_state(QubitParams(0.5)), -1.0)


class TestIntegratorConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 0.0},
            {"abs_tol": -1e-10},
            {"max_steps": 0},
            {"initial_step": 0.0},
            {"fixed_step": -0.1},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            IntegratorConfig(**kwargs)
