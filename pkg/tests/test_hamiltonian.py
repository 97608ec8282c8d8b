"""Tests for the diagonal cost Hamiltonian construction."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from hafactor import (
    BitSplit,
    PseudoBooleanPolynomial,
    QubitCapExceeded,
    NothingToSolve,
    Variable,
    VarKind,
    build_bitwise_hamiltonian,
    build_equations,
    build_peng_hamiltonian,
    encode_carry,
    enumerate_splits,
    init_bounds,
    initial_matrix,
    propagate,
    refine_bounds,
    to_matrix,
)


def P(i):
    return Variable(VarKind.FACTOR_P, i)


def Q(i):
    return Variable(VarKind.FACTOR_Q, i)


def _residual(n, l_p, l_q, case):
    split = BitSplit(n.bit_length(), l_p, l_q, case)
    system = build_equations(n, split)
    return propagate(system, refine_bounds(system, init_bounds(split)))


class TestCarryEncoding:
    def test_range_zero_one(self):
        enc = encode_carry(Variable(VarKind.CARRY, 3, bound=(0, 1)), 0, 1, 0)
        assert enc.offset == 0 and len(enc.ancillas) == 1
        assert str(enc.expression()) == "a0"

    def test_range_zero_two_overshoots(self):
        enc = encode_carry(Variable(VarKind.CARRY, 3, bound=(0, 2)), 0, 2, 0)
        assert len(enc.ancillas) == 2  # covers 0..3; overshoot penalized elsewhere
        assert enc.expression().evaluate(
            {enc.ancillas[0]: 1, enc.ancillas[1]: 1}
        ) == 3

    def test_offset_range(self):
        enc = encode_carry(Variable(VarKind.CARRY, 3, bound=(1, 2)), 1, 2, 4)
        assert enc.offset == 1 and len(enc.ancillas) == 1
        assert enc.ancillas[0].index == 4

    def test_fixed_carry_rejected(self):
        with pytest.raises(ValueError):
            encode_carry(Variable(VarKind.CARRY, 3, bound=(2, 2)), 2, 2, 0)


@pytest.fixture(scope="module")
def spec():
    return build_bitwise_hamiltonian(_residual(551, 5, 5, "A"))


class TestBitwise551:
    def test_qubit_assignment(self, spec):
        assert spec.num_qubits == 3
        assert spec.qubit_map.qubits == [P(1), P(2), P(3)]

    def test_pauli_terms(self, spec):
        got = {(tuple(sorted(t.z_support)), t.coeff) for t in spec.terms}
        assert got == {
            ((), Fraction(3, 2)),
            ((0, 1), Fraction(1, 2)),
            ((1, 2), Fraction(-1, 2)),
            ((0, 2), Fraction(1, 2)),
        }

    def test_spectrum(self, spec):
        diag = spec.final_diagonal()
        assert sorted(diag.tolist()) == [0.0, 0.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]

    def test_ground_states(self, spec):
        # |011> and |100> with qubit 0 as the most significant bit
        assert spec.ground_states() == [0b011, 0b100]

    def test_json(self, spec):
        doc = spec.to_json()
        assert doc["qubits"] == 3
        assert doc["map"]["qubits"] == ["p1", "p2", "p3"]
        assert {tuple(t["z"]): t["coeff"] for t in doc["terms"]} == {
            (): 1.5, (0, 1): 0.5, (0, 2): 0.5, (1, 2): -0.5,
        }


class TestBitwiseGeneral:
    def test_single_variable_squared_deviation(self):
        # (x - 1)**2 -> (I + Z)/2: energy 1 on |0>, 0 on |1>
        from hafactor.simplify import ResidualSystem
        split = BitSplit(10, 5, 5, "A")
        eq = PseudoBooleanPolynomial.var(P(1)) - 1
        r = ResidualSystem([eq], [P(1)], [], {}, {}, split, 551)
        spec = build_bitwise_hamiltonian(r)
        assert {(tuple(sorted(t.z_support)), t.coeff) for t in spec.terms} == {
            ((), Fraction(1, 2)), ((0,), Fraction(1, 2)),
        }
        assert spec.final_diagonal().tolist() == [1.0, 0.0]

    def test_143_zero_energy_states(self):
        spec = build_bitwise_hamiltonian(_residual(143, 4, 4, "A"))
        assert spec.num_qubits == 2
        assert spec.ground_states() == [0b01, 0b10]

    def test_diagonal_equals_summed_squares(self):
        # for several residuals, the realized diagonal matches direct
        # evaluation of sum(e**2) over all bit assignments
        for n, l_p, l_q, case in ((551, 5, 5, "A"), (143, 4, 4, "A"), (899, 5, 5, "A")):
            r = _residual(n, l_p, l_q, case)
            if not r.free_vars:
                continue
            spec = build_bitwise_hamiltonian(r)
            diag = spec.final_diagonal()
            k = spec.num_qubits
            for b in range(1 << k):
                values = spec.qubit_map.decode_basis_state(b)
                energy = sum(eq.evaluate(values) ** 2 for eq in r.equations)
                assert diag[b] == pytest.approx(energy)

    def test_zero_energy_iff_residual_solution(self):
        from hafactor import solve_residual_exhaustively
        r = _residual(551, 5, 5, "A")
        spec = build_bitwise_hamiltonian(r)
        solutions = {
            tuple(sol[v] for v in r.free_vars)
            for sol in solve_residual_exhaustively(r)
        }
        for b in spec.ground_states():
            values = spec.qubit_map.decode_basis_state(b)
            assert tuple(values[v] for v in r.free_vars) in solutions
        assert len(spec.ground_states()) == len(solutions)

    def test_empty_residual_rejected(self):
        r = _residual(9, 2, 2, "A")
        with pytest.raises(NothingToSolve):
            build_bitwise_hamiltonian(r)


class TestPengMode:
    def test_21(self):
        split = BitSplit(5, 3, 2, "A")
        spec = build_peng_hamiltonian(21, split)
        assert spec.num_qubits == 1  # only p1 is free; q is pinned to 3
        diag = spec.final_diagonal()
        # zero energy exactly at the encoding of 7*3
        zeros = spec.ground_states()
        assert diag[zeros].max() == 0.0
        assert zeros == [1]  # p1 = 1 -> p = 7
        values = spec.qubit_map.decode_basis_state(zeros[0])
        assert 1 + 2 * values[P(1)] + 4 == 7

    def test_15_single_qubit_free(self):
        split = BitSplit(4, 3, 2, "B")
        spec = build_peng_hamiltonian(15, split)
        assert spec.num_qubits == 1
        assert spec.final_diagonal()[spec.ground_states()[0]] == 0.0

    def test_9_no_free_bits(self):
        split = BitSplit(4, 2, 2, "A")
        spec = build_peng_hamiltonian(9, split)
        assert spec.num_qubits == 0

    def test_cap(self):
        split = BitSplit(20, 10, 10, "A")
        with pytest.raises(QubitCapExceeded):
            build_peng_hamiltonian((1 << 19) + 1, split, qubit_cap=10)


class TestMatrices:
    def test_initial_single_qubit_is_sigma_x(self):
        assert initial_matrix(1).tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_initial_row_sums(self):
        for k in (2, 3):
            h = initial_matrix(k)
            assert (h.sum(axis=1) == k).all()
            assert (h == h.T).all()

    def test_to_matrix_parts(self):
        spec = build_bitwise_hamiltonian(_residual(551, 5, 5, "A"))
        h_i = to_matrix(spec, "initial")
        h_f = to_matrix(spec, "final")
        assert h_i.shape == h_f.shape == (8, 8)
        assert np.allclose(np.diag(spec.final_diagonal()), h_f)
        with pytest.raises(ValueError):
            to_matrix(spec, "middle")

    def test_to_matrix_cap(self):
        spec = build_bitwise_hamiltonian(_residual(551, 5, 5, "A"))
        with pytest.raises(QubitCapExceeded):
            to_matrix(spec, "final", qubit_cap=2)


def test_carry_ancillas_round_trip():
    # any residual that keeps a live carry must decode it back exactly
    for n in range(9, 600, 2):
        try:
            splits = enumerate_splits(n)
        except ValueError:
            continue
        for split in splits:
            from hafactor import InfeasibleSplit
            try:
                system = build_equations(n, split)
                r = propagate(system, refine_bounds(system, init_bounds(split)))
            except InfeasibleSplit:
                continue
            carries = [v for v in r.free_vars if not v.is_binary]
            if not carries or len(r.free_vars) > 8:
                continue
            spec = build_bitwise_hamiltonian(r)
            for b in range(1 << spec.num_qubits):
                values = spec.qubit_map.decode_basis_state(b)
                for c in carries:
                    lo, _ = r.carry_bounds[c]
                    assert values[c] >= lo
            return  # one witness is enough
