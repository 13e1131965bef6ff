import numpy as np
import pytest
from scipy.linalg import expm

from tomokraus import (
    DensityMatrix,
    KrausSet,
    ValidationError,
    VonNeumannModel,
    apply_channel_oracle,
    coherent_state,
    displacement_element,
    displacement_matrix,
    fock_state,
    hermite_function,
    hermite_functions,
    joint_unitary_kraus,
    make_state,
    mixture,
    momentum_operator,
    qubit_channel,
    random_density_matrix,
    random_kraus_set,
    thermal_state,
    von_neumann_kraus,
)


class TestHermite:
    def test_ground_state_at_origin(self):
        assert hermite_function(0, 0.0) == pytest.approx(np.pi ** -0.25, abs=1e-12)
        assert hermite_function(0, 0.0) == pytest.approx(0.7511255, abs=1e-7)

    def test_odd_function_vanishes_at_origin(self):
        assert hermite_function(1, 0.0) == 0.0

    def test_orthonormal_by_gauss_hermite(self):
        q, w = np.polynomial.hermite.hermgauss(128)
        psi = hermite_functions(21, q)
        gram = (psi * (w * np.exp(q * q))) @ psi.T
        assert np.max(np.abs(gram - np.eye(21))) < 1e-10

    def test_three_term_recurrence(self):
        q = np.linspace(-10, 10, 401)
        psi = hermite_functions(42, q)
        n = np.arange(1, 41)[:, None]
        resid = q * psi[1:41] - np.sqrt(n / 2) * psi[0:40] - np.sqrt((n + 1) / 2) * psi[2:42]
        assert np.max(np.abs(resid)) < 1e-10

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            hermite_function(-1, 0.0)


class TestDisplacement:
    def test_origin(self):
        assert displacement_element(0, 0, 0.0, 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("mu,nu", [(0.3, -0.7), (1.5, 0.2), (-2.0, 1.1)])
    def test_vacuum_element(self, mu, nu):
        assert displacement_element(0, 0, mu, nu) == pytest.approx(np.exp(-(mu ** 2 + nu ** 2) / 4), abs=1e-14)

    def test_vacuum_element_by_quadrature(self):
        # <0| e^{-i mu q - i nu p} |0> = e^{+i mu nu / 2} int psi0(q) psi0(q - nu) e^{-i mu q} dq
        mu, nu = 0.8, -0.5
        q = np.linspace(-12, 12, 4001)
        f = hermite_function(0, q) * hermite_function(0, q - nu) * np.exp(-1j * mu * q)
        val = np.exp(0.5j * mu * nu) * np.trapezoid(f, q)
        assert abs(val - displacement_element(0, 0, mu, nu)) < 1e-10

    @pytest.mark.parametrize("mu,nu", [(0.0, 0.0), (0.4, 0.9), (-1.3, 0.6), (2.0, -2.0)])
    def test_rows_unitary(self, mu, nu):
        m = displacement_matrix(16, mu, nu, cols=120)
        assert np.max(np.abs(m @ m.conj().T - np.eye(16))) < 1e-10

    def test_identity_at_origin(self):
        assert np.max(np.abs(displacement_matrix(12, 0.0, 0.0) - np.eye(12))) < 1e-15

    def test_matches_matrix_exponential(self):
        from tomokraus import position_operator

        dim, mu, nu = 60, 0.7, -0.4
        big = expm(-1j * (mu * position_operator(dim) + nu * momentum_operator(dim)))
        assert np.max(np.abs(big[:10, :10] - displacement_matrix(10, mu, nu))) < 1e-10


class TestStates:
    def test_fock(self):
        assert np.allclose(make_state("fock", 4, 0).matrix, np.diag([1, 0, 0, 0]))

    def test_mixture(self):
        rho = make_state("mixture", 4, [0.5, 0.5], [fock_state(0, 4), fock_state(1, 4)])
        assert np.allclose(rho.matrix, np.diag([0.5, 0.5, 0, 0]))

    def test_mixture_weights_validated(self):
        with pytest.raises(ValidationError):
            mixture([0.5, 0.6], [fock_state(0, 2), fock_state(1, 2)])

    def test_thermal_geometric_series(self):
        with pytest.warns(UserWarning):
            rho = thermal_state(1.0, 16)
        assert abs(np.trace(rho.matrix).real - 1) < 1e-6
        # discarded weight of the geometric series with ratio 1/2
        assert rho.leakage == pytest.approx(0.5 ** 16, rel=1e-9)
        d = np.diag(rho.matrix).real
        assert np.allclose(d[1:] / d[:-1], 0.5)

    def test_coherent_leakage_reported(self):
        with pytest.warns(UserWarning):
            rho = coherent_state(2.0, 6)
        assert rho.leakage > 1e-3
        assert abs(np.trace(rho.matrix) - 1) < 1e-12

    @pytest.mark.parametrize("bad", [np.array([[1, 0.1], [0, 0]]), np.diag([0.7, 0.7]), np.diag([1.5, -0.5])])
    def test_density_invariants(self, bad):
        with pytest.raises(ValidationError):
            DensityMatrix(bad)

    def test_dimension_floor(self):
        with pytest.raises(ValidationError):
            fock_state(0, 1)


class TestOracle:
    def test_identity(self, rng):
        rho = random_density_matrix(5, rng=rng)
        out = apply_channel_oracle(rho, KrausSet([np.eye(5)]))
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-15

    def test_phase_flip_half_kills_coherence(self):
        plus = DensityMatrix(np.full((2, 2), 0.5))
        out = apply_channel_oracle(plus, qubit_channel("phase_flip", 0.5).kraus)
        assert abs(out.matrix[0, 1]) < 1e-15

    def test_total_amplitude_damping(self):
        out = apply_channel_oracle(fock_state(1, 2), qubit_channel("amplitude_damping", 1.0).kraus)
        assert np.allclose(out.matrix, np.diag([1, 0]))

    def test_trace_and_hermiticity_random_sets(self, rng):
        for _ in range(100):
            dim = int(rng.integers(2, 9))
            kraus = random_kraus_set(dim, int(rng.integers(1, 4)), rng)
            out = apply_channel_oracle(random_density_matrix(dim, rng=rng), kraus).matrix
            assert abs(np.trace(out) - 1) < 1e-12
            assert np.max(np.abs(out - out.conj().T)) < 1e-12

    def test_linear_in_state(self, rng):
        kraus = random_kraus_set(4, 3, rng)
        r1, r2 = random_density_matrix(4, rng=rng), random_density_matrix(4, rng=rng)
        a = 0.37
        mix = DensityMatrix(a * r1.matrix + (1 - a) * r2.matrix)
        lhs = apply_channel_oracle(mix, kraus).matrix
        rhs = a * apply_channel_oracle(r1, kraus).matrix + (1 - a) * apply_channel_oracle(r2, kraus).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_incomplete_set_flags_drift(self):
        kraus = KrausSet([np.diag([1.0, 0.0])], check=False)
        out = apply_channel_oracle(fock_state(1, 2), kraus)
        assert "trace-drift" in out.flags
        assert out.state is None


class TestKrausSet:
    def test_incomplete_rejected(self):
        with pytest.raises(ValidationError):
            KrausSet([np.diag([1.0, 0.5])])

    def test_without_and_scaled(self):
        k = qubit_channel("phase_flip", 0.3).kraus
        assert len(k.without(0).operators) == 1
        assert np.allclose(k.scaled(1, 0.9).operators[1], 0.9 * k.operators[1])
        with pytest.raises(ValidationError):
            KrausSet([np.eye(2)]).without(0)


class TestJointUnitary:
    def test_trivial(self):
        k = joint_unitary_kraus(np.eye(4), [1.0], 2)
        ops = [a for a in k.operators if np.any(a)]
        assert len(ops) == 1 and np.allclose(ops[0], np.eye(2))

    def test_random_unitary_complete(self, rng):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u = expm(-1j * (h + h.conj().T))
        k = joint_unitary_kraus(u, [0.5, 0.5], 2)
        assert k.completeness_residual() <= 1e-10

    def test_non_unitary_rejected(self):
        with pytest.raises(ValidationError):
            joint_unitary_kraus(np.diag([1.0, 1.0, 1.0, 0.5]), [1.0], 2)

    def test_controlled_shift_matches_von_neumann(self, rng):
        # kappa = 2 makes the Gaussian pointer the oscillator ground state
        a, g, pointer = (-1.0, 0.0, 1.0), 0.7, 40
        u = expm(-1j * g * np.kron(np.diag(a), momentum_operator(pointer)))
        p = np.zeros(pointer)
        p[0] = 1.0
        joint = joint_unitary_kraus(u, p, pointer)
        rho = random_density_matrix(3, rng=rng)
        ref = apply_channel_oracle(rho, von_neumann_kraus(VonNeumannModel(a, g, 2.0))).matrix
        assert np.max(np.abs(apply_channel_oracle(rho, joint).matrix - ref)) <= 1e-4
