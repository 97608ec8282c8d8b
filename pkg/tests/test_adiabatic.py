"""Tests for the piecewise-constant adiabatic evolution and its diagnostics."""

import numpy as np
import pytest

from hafactor import (
    BitSplit,
    Schedule,
    adiabatic_time_estimate,
    build_bitwise_hamiltonian,
    build_equations,
    evolve,
    fidelity,
    init_bounds,
    initial_matrix,
    interpolate,
    prepare_initial_ground,
    propagate,
    refine_bounds,
    spectrum_trace,
    step_unitary,
)


@pytest.fixture(scope="module")
def spec551():
    split = BitSplit(10, 5, 5, "A")
    system = build_equations(551, split)
    residual = propagate(system, refine_bounds(system, init_bounds(split)))
    return build_bitwise_hamiltonian(residual)


class TestSchedule:
    def test_defaults(self):
        s = Schedule()
        assert s.total_time == 3.5 and s.steps == 20
        assert s.tau == pytest.approx(0.175)
        assert s.phase_tau == pytest.approx(2 * np.pi * 0.175)

    def test_validation(self):
        with pytest.raises(ValueError):
            Schedule(total_time=-1)
        with pytest.raises(ValueError):
            Schedule(steps=0)
        with pytest.raises(ValueError):
            Schedule(interpolation="cubic")


class TestInterpolate:
    def test_endpoints(self, spec551):
        h0 = interpolate(spec551, 0.0)
        h1 = interpolate(spec551, 1.0)
        assert np.allclose(h0, initial_matrix(3))
        assert np.allclose(h1, np.diag(spec551.final_diagonal()))

    def test_midpoint_linear(self, spec551):
        h = interpolate(spec551, 0.5)
        assert np.allclose(h, 0.5 * interpolate(spec551, 0.0) + 0.5 * interpolate(spec551, 1.0))

    def test_out_of_range(self, spec551):
        with pytest.raises(ValueError):
            interpolate(spec551, 1.5)


class TestStepUnitary:
    def test_zero_time_is_identity(self):
        h = initial_matrix(2)
        assert np.allclose(step_unitary(h, 0.0), np.eye(4))

    def test_sigma_x_quarter_period(self):
        sx = np.array([[0.0, 1.0], [1.0, 0.0]])
        u = step_unitary(sx, np.pi / 2)
        assert np.allclose(u, -1j * sx, atol=1e-12)

    def test_diagonal_phases(self):
        h = np.diag([0.0, 2.0])
        u = step_unitary(h, np.pi / 2)
        assert np.allclose(u, np.diag([1.0, np.exp(-1j * np.pi)]))

    def test_unitarity(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        h = a + a.conj().T
        u = step_unitary(h, 0.37)
        assert np.abs(u.conj().T @ u - np.eye(8)).max() < 1e-10


class TestInitialGround:
    def test_single_qubit_minus(self):
        psi = prepare_initial_ground(1)
        assert np.allclose(psi, np.array([1, -1]) / np.sqrt(2))

    def test_three_qubits_signs(self):
        psi = prepare_initial_ground(3)
        assert np.allclose(np.abs(psi), 1 / np.sqrt(8))
        assert psi[0b000] > 0 and psi[0b111] < 0 and psi[0b101] > 0

    def test_is_ground_of_transverse_field(self):
        for k in (1, 2, 3):
            psi = prepare_initial_ground(k)
            h = initial_matrix(k)
            assert np.allclose(h @ psi, -k * psi)


class TestFidelity:
    def test_identical(self):
        p = np.array([0.5, 0.5, 0.0])
        assert fidelity(p, p) == pytest.approx(1.0)

    def test_disjoint(self):
        assert fidelity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_partial_overlap(self):
        a = np.array([1.0, 0.0])
        b = np.array([0.5, 0.5])
        assert fidelity(a, b) == pytest.approx(1 / np.sqrt(2))

    def test_validation(self):
        with pytest.raises(ValueError):
            fidelity(np.array([1.0]), np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            fidelity(np.array([-0.1, 1.1]), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            fidelity(np.array([0.0, 0.0]), np.array([0.5, 0.5]))


class TestEvolve:
    def test_trace_shapes(self, spec551):
        trace = evolve(spec551, Schedule(total_time=3.5, steps=20))
        assert trace.s_values.shape == (21,)
        assert trace.probabilities.shape == (21, 8)
        assert trace.energies.shape == (21, 8)
        assert trace.s_values[0] == 0.0 and trace.s_values[-1] == 1.0

    def test_zero_time_stays_uniform(self, spec551):
        trace = evolve(spec551, Schedule(total_time=0.0, steps=1))
        assert np.allclose(trace.final_probabilities, 1 / 8)

    def test_probabilities_normalized(self, spec551):
        trace = evolve(spec551, Schedule())
        assert np.allclose(trace.probabilities.sum(axis=1), 1.0, atol=1e-9)
        assert trace.max_norm_error < 1e-9
        assert trace.max_unitarity_defect < 1e-10

    def test_target_is_uniform_over_ground_pair(self, spec551):
        trace = evolve(spec551, Schedule())
        expected = np.zeros(8)
        expected[[0b011, 0b100]] = 0.5
        assert np.allclose(trace.target_distribution, expected)

    def test_csv_export(self, spec551, tmp_path):
        trace = evolve(spec551, Schedule(steps=5))
        path = tmp_path / "trace.csv"
        trace.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("step,s,E_0")
        assert len(lines) == 7  # header + 6 records


class TestSpectrum:
    def test_endpoint_spectra(self, spec551):
        trace = spectrum_trace(spec551, samples=3)
        # s = 0: transverse field on 3 qubits has binomial levels -3,-1,-1,-1,1,1,1,3
        assert np.allclose(trace.energies[0], [-3, -1, -1, -1, 1, 1, 1, 3])
        assert np.allclose(trace.energies[-1], sorted(spec551.final_diagonal()))

    def test_positive_gap_before_crossing(self, spec551):
        trace = spectrum_trace(spec551, samples=101)
        gaps = trace.energies[:, 1] - trace.energies[:, 0]
        assert (gaps[:-1] > 0).all()
        # doubly degenerate ground space exactly at s = 1
        assert gaps[-1] == pytest.approx(0.0, abs=1e-9)

    def test_sample_validation(self, spec551):
        with pytest.raises(ValueError):
            spectrum_trace(spec551, samples=1)

    def test_csv(self, spec551, tmp_path):
        path = tmp_path / "spec.csv"
        spectrum_trace(spec551, samples=5).to_csv(path)
        assert len(path.read_text().splitlines()) == 6


class TestTimeEstimate:
    def test_finite_and_positive(self, spec551):
        t = adiabatic_time_estimate(spec551, epsilon=0.1)
        assert 0 < t < np.inf

    def test_monotone_in_epsilon(self, spec551):
        loose = adiabatic_time_estimate(spec551, epsilon=0.5)
        tight = adiabatic_time_estimate(spec551, epsilon=0.05)
        assert tight > loose

    def test_epsilon_validation(self, spec551):
        with pytest.raises(ValueError):
            adiabatic_time_estimate(spec551, epsilon=0.0)
        with pytest.raises(ValueError):
            adiabatic_time_estimate(spec551, epsilon=1.0)


class TestAdiabaticConvergence:
    def test_slower_is_better(self, spec551):
        fast = evolve(spec551, Schedule(total_time=3.5, steps=20))
        slow = evolve(spec551, Schedule(total_time=50.0, steps=500))
        pair = [0b011, 0b100]
        assert slow.final_probabilities[pair].sum() > fast.final_probabilities[pair].sum()
        assert slow.final_fidelity >= fast.final_fidelity
