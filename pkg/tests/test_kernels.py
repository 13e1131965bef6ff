import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import expm

from tomokraus import (
    DensityMatrix,
    GeneralizedObjectError,
    KrausSet,
    RayGrid,
    ValidationError,
    apply_channel_oracle,
    apply_kernel,
    apply_kernel_quadrature,
    completeness_check,
    displacement_matrix,
    fock_state,
    hermite_functions,
    joint_unitary_kraus,
    kraus_symbols,
    kraus_symbols_from_joint,
    partial_kernel,
    postprocess_dequantizer_symbol,
    qubit_channel,
    random_density_matrix,
    random_kraus_set,
    scalar_product,
    symbol_from_operator,
    tomogram_from_density,
    total_kernel,
    triple_trace,
)

PLUS = DensityMatrix(np.full((2, 2), 0.5))


def _points(rng, n, unit=False):
    th = rng.uniform(0, 2 * np.pi, n)
    r = np.ones(n) if unit else rng.uniform(0.3, 1.5, n)
    return np.stack([rng.uniform(-1.5, 1.5, n), r * np.cos(th), r * np.sin(th)], axis=1)


class TestKrausSymbols:
    def test_identity(self, grid):
        (f,) = kraus_symbols(KrausSet([np.eye(3)]), grid)
        assert np.array_equal(f.values, symbol_from_operator(np.eye(3), grid).values)

    def test_phase_flip_second_symbol_real(self, grid):
        f = kraus_symbols(qubit_channel("phase_flip", 0.3).kraus, grid)[1]
        assert np.max(np.abs(f.values.imag)) < 1e-15
        u00 = np.exp(-grid.x ** 2) / np.sqrt(np.pi)
        u11 = 2 * grid.x ** 2 * u00
        assert np.max(np.abs(f.values.real - np.sqrt(0.7) * (u00 - u11))) < 1e-12

    def test_joint_route_matches_matrix_route(self, coarse, rng):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u = expm(-0.4j * (h + h.conj().T))
        p = [0.7, 0.3]
        via_joint = kraus_symbols_from_joint(u, p, 2, 2, coarse, RayGrid(8.0, 129, 16))
        via_matrix = kraus_symbols(joint_unitary_kraus(u, p, 2), coarse)
        assert len(via_joint) == len(via_matrix) == 4
        for a, b in zip(via_joint, via_matrix):
            assert np.max(np.abs(a.values - b.values)) <= 1e-5


class TestPartialKernel:
    def test_identity(self, grid, rng):
        t = tomogram_from_density(random_density_matrix(4, rng=rng), grid)
        out = apply_kernel(t, partial_kernel(np.eye(4)))
        assert np.max(np.abs(out.values - t.values)) < 1e-6

    def test_scaled_identity_is_delta(self, grid):
        p = 0.3
        pk = partial_kernel(np.sqrt(p) * np.eye(2))
        assert pk.identity_weight == pytest.approx(p)
        t = tomogram_from_density(PLUS, grid)
        assert np.max(np.abs(apply_kernel(t, pk).values - p * t.values)) < 1e-6

    def test_lowering_kernel_closed_form(self, rng):
        # (gamma / 2pi) T_0(x) int T_1(Xb + X', mub, nub) e^{-iX'} dX'
        gamma = 0.4
        pk = partial_kernel(np.sqrt(gamma) * np.array([[0, 1], [0, 0]]))
        xb, x = _points(rng, 4), _points(rng, 3, unit=True)
        vals = pk.evaluate(xb, x)

        def t1(X, mu, nu):
            r = np.hypot(mu, nu)
            return hermite_functions(2, X / r)[1] ** 2 / r

        t0 = np.exp(-x[:, 0] ** 2) / np.sqrt(np.pi)
        for i, (Xb, mb, nb) in enumerate(xb):
            re = quad(lambda y: t1(Xb + y, mb, nb) * np.cos(y), -30, 30, limit=400)[0]
            im = quad(lambda y: -t1(Xb + y, mb, nb) * np.sin(y), -30, 30, limit=400)[0]
            ref = gamma / (2 * np.pi) * (re + 1j * im) * t0
            assert np.max(np.abs(vals[i] - ref)) < 1e-6


class TestTotalKernel:
    def test_unitary_preserves_purity(self, grid, rng):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        kern = total_kernel(KrausSet([expm(-0.5j * (h + h.conj().T))]))
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi[3] = 0
        t = tomogram_from_density(DensityMatrix(np.outer(psi, psi.conj()) / np.vdot(psi, psi).real), grid)
        out = apply_kernel(t, kern)
        assert abs(scalar_product(out, out) - scalar_product(t, t)) < 1e-6

    def test_partials_sum_to_total(self):
        for ch in (qubit_channel("phase_flip", 0.3), qubit_channel("amplitude_damping", 0.3)):
            kern = ch.kernel
            assert np.max(np.abs(sum(p.coefficients for p in kern.partials) - kern.coefficients)) < 1e-15
            assert sum(p.identity_weight for p in kern.partials) == pytest.approx(kern.identity_weight)

    def test_amplitude_damping_matches_oracle(self, grid, rng):
        ch = qubit_channel("amplitude_damping", 0.3)
        rho = random_density_matrix(2, rng=rng)
        out = apply_kernel(tomogram_from_density(rho, grid), ch.kernel)
        ref = tomogram_from_density(apply_channel_oracle(rho, ch.kraus).state, grid)
        assert np.max(np.abs(out.values - ref.values)) <= 1e-5

    def test_hermiticity_and_trace(self, rng):
        kern = total_kernel(random_kraus_set(5, 3, rng))
        assert kern.hermiticity_residual() < 1e-14
        assert kern.completeness_residual() < 1e-10

    def test_incomplete_set_warning_in_metadata(self):
        kern = total_kernel(KrausSet([np.diag([1.0, 0.5])], check=False))
        assert kern.metadata["warning"] == "incomplete Kraus set"
        assert kern.metadata["completeness_residual"] == pytest.approx(0.75)

    def test_kind_flag(self):
        assert total_kernel(KrausSet([np.eye(2)])).kind == "generalized"
        from tomokraus import basis_projector_channel

        assert basis_projector_channel(3).kernel.kind == "regular"


class TestApplyKernel:
    def test_identity(self, grid, rng):
        t = tomogram_from_density(random_density_matrix(5, rng=rng), grid)
        out = apply_kernel(t, total_kernel(KrausSet([np.eye(5)])))
        assert np.max(np.abs(out.values - t.values)) < 1e-6

    def test_dephasing(self, grid):
        out = apply_kernel(tomogram_from_density(PLUS, grid), qubit_channel("phase_flip", 0.5).kernel)
        ref = tomogram_from_density(DensityMatrix(np.eye(2) / 2), grid)
        assert np.max(np.abs(out.values - ref.values)) <= 1e-5

    def test_projector_kernel_scales_basis_tomogram(self, grid, rng):
        rho = random_density_matrix(4, rng=rng)
        t = tomogram_from_density(rho, grid)
        for m in range(3):
            proj = np.zeros((4, 4))
            proj[m, m] = 1
            out = apply_kernel(t, partial_kernel(proj))
            ref = rho.matrix[m, m].real * tomogram_from_density(fock_state(m, 4), grid).values
            assert np.max(np.abs(out.values - ref)) < 1e-8

    def test_random_sets_match_oracle(self, grid, rng):
        worst = 0.0
        for _ in range(50):
            n = int(rng.integers(2, 9))
            kraus = random_kraus_set(n, int(rng.integers(1, 4)), rng)
            rho = random_density_matrix(n, rank=2, rng=rng)
            out = apply_kernel(tomogram_from_density(rho, grid), total_kernel(kraus))
            ref = tomogram_from_density(apply_channel_oracle(rho, kraus).state, grid)
            worst = max(worst, float(np.max(np.abs(out.values - ref.values))))
            out.check()
        assert worst <= 1e-5

    def test_linear(self, grid, rng):
        kern = total_kernel(random_kraus_set(4, 2, rng))
        r1, r2 = random_density_matrix(4, rng=rng), random_density_matrix(4, rng=rng)
        t1, t2 = tomogram_from_density(r1, grid), tomogram_from_density(r2, grid)
        tm = tomogram_from_density(DensityMatrix(0.25 * r1.matrix + 0.75 * r2.matrix), grid)
        lhs = apply_kernel(tm, kern).values
        rhs = 0.25 * apply_kernel(t1, kern).values + 0.75 * apply_kernel(t2, kern).values
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_provenance(self, grid):
        out = apply_kernel(tomogram_from_density(PLUS, grid), qubit_channel("phase_flip", 0.5).kernel)
        assert out.provenance["channels"] == ["phase-flip"]


class TestQuadratureRoute:
    def test_identity(self, coarse, rng):
        t = tomogram_from_density(random_density_matrix(3, rng=rng), coarse)
        out = apply_kernel_quadrature(t, total_kernel(KrausSet([np.eye(3)])))
        assert np.max(np.abs(out.values - t.values)) < 2e-3

    def test_amplitude_damping(self, coarse):
        t = tomogram_from_density(fock_state(1, 2), coarse)
        kern = qubit_channel("amplitude_damping", 0.5).kernel
        assert np.max(np.abs(apply_kernel_quadrature(t, kern).values - apply_kernel(t, kern).values)) <= 1e-3

    def test_rotation(self, coarse, rng):
        t = tomogram_from_density(random_density_matrix(4, rng=rng), coarse)
        kern = total_kernel(KrausSet([np.diag(np.exp(-0.8j * np.arange(4)))]))
        assert np.max(np.abs(apply_kernel_quadrature(t, kern).values - apply_kernel(t, kern).values)) <= 1e-3

    def test_budget_guard(self, grid):
        t = tomogram_from_density(PLUS, grid)
        with pytest.raises(ValidationError):
            apply_kernel_quadrature(t, qubit_channel("phase_flip", 0.5).kernel)


class TestCompleteness:
    def test_identity(self, grid):
        k = KrausSet([np.eye(3)])
        rep = completeness_check(kraus_symbols(k, grid), k.weights, 3)
        assert rep.smeared_residual <= 1e-4 and rep.passed

    def test_phase_flip_weak_constraint(self, grid):
        k = qubit_channel("phase_flip", 0.3).kraus
        rep = completeness_check(kraus_symbols(k, grid), k.weights, 2)
        assert abs(rep.weak_value - 2) <= 1e-5

    def test_dropping_amplitude_damping_element(self, grid):
        k = qubit_channel("amplitude_damping", 0.5).kraus
        for i in range(2):
            broken = k.without(i)
            rep = completeness_check(kraus_symbols(broken, grid), broken.weights, 2)
            assert rep.residual > 0.1 and not rep.passed

    def test_generalized_symbols_refused(self, grid):
        f = kraus_symbols(KrausSet([np.eye(2)]), grid)[0]
        from dataclasses import replace

        with pytest.raises(GeneralizedObjectError):
            completeness_check([replace(f, generalized=True)], None, 2)


class TestTripleTrace:
    def test_zero_frequencies(self):
        tt = triple_trace((0.3, 0, 0), (0.2, 0, 0), (-0.1, 0, 0), (0.0, 0.6, 0.8))
        assert tt.on_surface()
        assert tt.prefactor == pytest.approx(np.exp(0.4j) / (2 * np.pi) ** 3)

    def test_phase_antisymmetric_under_swap(self, rng):
        for _ in range(5):
            x1, xb, x2, x = (tuple(rng.normal(size=3)) for _ in range(4))
            assert triple_trace(x1, xb, x2, x).symplectic_phase == pytest.approx(
                -triple_trace(x2, xb, x1, x).symplectic_phase)

    def test_constraint_argument(self, rng):
        for _ in range(5):
            x1, xb, x2, x = (rng.normal(size=3) for _ in range(4))
            tt = triple_trace(x1, xb, x2, x)
            ref = (xb[1] + x1[1] + x2[1]) * x[2] - (xb[2] + x1[2] + x2[2]) * x[1]
            assert tt.argument == pytest.approx(ref)
            c = np.array(tt.constraint)
            freqs = np.array([xb[1], xb[2], x1[1], x1[2], x2[1], x2[2]])
            assert c[:6] @ freqs == pytest.approx(ref)
            assert c[6:] @ x[1:] == pytest.approx(ref)

    def test_phase_matches_operator_product(self):
        # W(a) W(b) W(c) = W(a + b + c) exp(i phase) for W(mu, nu) = exp(-i mu q - i nu p)
        big = 150
        x1, xb, x2 = (0.3, 0.4, -0.2), (1.1, 0.5, 0.7), (-0.4, -0.3, 0.25)
        prod = displacement_matrix(big, x1[1], x1[2]) @ displacement_matrix(big, xb[1], xb[2]) \
            @ displacement_matrix(big, x2[1], x2[2])
        tt = triple_trace(x1, xb, x2, (0.7, 1.0, 0.5))
        total = displacement_matrix(big, x1[1] + xb[1] + x2[1], x1[2] + xb[2] + x2[2])
        assert np.max(np.abs(prod[:10, :10] - total[:10, :10] * np.exp(1j * tt.symplectic_phase))) < 1e-12

    def test_structural_values(self, rng):
        tt = triple_trace(*(tuple(rng.normal(size=3)) for _ in range(4)))
        assert not tt.on_surface() and tt.value() == 0.0
        on = triple_trace((0, 0.1, 0.2), (0, 0.3, 0.1), (0, 0.1, 0.1), (0.5, 0.5, 0.4))
        with pytest.raises(GeneralizedObjectError):
            on.value()


class TestDequantizerSymbol:
    def test_pointwise_refused(self):
        with pytest.raises(GeneralizedObjectError):
            postprocess_dequantizer_symbol((0.4, 0.6, 0.8))(0.1, 0.2, 0.3)

    def test_regularized_on_constraint(self):
        ds = postprocess_dequantizer_symbol((0.4, 0.6, 0.8))
        form = ds.regularized(0.6, 0.8)
        assert form.on_constraint()
        assert form.phase == pytest.approx(np.exp(-0.4j))
        with pytest.raises(GeneralizedObjectError):
            form.value()

    def test_regularized_off_constraint(self):
        assert postprocess_dequantizer_symbol((0.4, 0.6, 0.8)).regularized(0.1, 0.3).value() == 0.0

    def test_smeared_matches_finite_dimensional_trace(self):
        xbar = (0.6, 0.8, 0.5)
        ds = postprocess_dequantizer_symbol(xbar)
        val = ds.smeared(lambda m, n: np.exp(-((m - 0.3) ** 2 + (n - 0.1) ** 2) / 2))
        n_basis = 24
        r, th = np.hypot(xbar[1], xbar[2]), np.arctan2(xbar[2], xbar[1])
        psi = hermite_functions(n_basis, np.array([xbar[0] / r]))[:, 0]
        idx = np.arange(n_basis)
        umat = np.outer(psi, psi) * np.exp(1j * th * (idx[None, :] - idx[:, None])) / r
        t, w = np.polynomial.hermite_e.hermegauss(40)
        mm, nn = np.meshgrid(0.3 + t, 0.1 + t, indexing="ij")
        disp = displacement_matrix(n_basis, mm, nn)
        brute = np.sum(np.outer(w, w) * np.einsum("il,abil->ab", umat, disp))
        assert abs(brute - val) <= 1e-3
