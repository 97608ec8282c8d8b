"""End-to-end pipeline and command-line interface tests."""

import json

import pytest

from hafactor import (
    Method,
    NotFactorable,
    PipelineConfig,
    QubitCapExceeded,
    Schedule,
    brute_force_factor,
    decode,
    factor,
)
from hafactor.cli import main


class TestBruteForce:
    def test_biprimes(self):
        assert brute_force_factor(551) == (19, 29)
        assert brute_force_factor(143) == (11, 13)
        assert brute_force_factor(4) == (2, 2)

    def test_prime_raises(self):
        with pytest.raises(NotFactorable):
            brute_force_factor(13)

    def test_too_small(self):
        with pytest.raises(ValueError):
            brute_force_factor(3)


class TestFactor:
    def test_551_hybrid(self):
        result = factor(551)
        assert (result.p, result.q) == (19, 29)
        assert result.method is Method.HYBRID_ADIABATIC
        assert result.qubits == 3 and result.residual_vars == 3
        assert result.verified and result.biprime
        assert result.final_fidelity >= 0.99
        assert result.solution_probability >= 0.98
        assert not result.used_fallback

    def test_143_hybrid(self):
        result = factor(143)
        assert (result.p, result.q) == (11, 13)
        assert result.method is Method.HYBRID_ADIABATIC
        assert result.qubits == 2

    def test_classical_shortcuts(self):
        for n, p, q in ((9, 3, 3), (15, 3, 5), (21, 3, 7), (25, 5, 5)):
            result = factor(n)
            assert (result.p, result.q) == (p, q)
            assert result.method is Method.CLASSICAL_ONLY
            assert result.qubits == 0 and result.final_fidelity is None

    def test_35_symmetric_factorization(self):
        # the balanced split leaves one genuinely free bit (5*7 vs 7*5)
        result = factor(35)
        assert (result.p, result.q) == (5, 7)
        assert result.verified

    def test_even(self):
        result = factor(14)
        assert (result.p, result.q) == (2, 7)
        assert result.method is Method.CLASSICAL_ONLY

    def test_prime_raises(self):
        with pytest.raises(NotFactorable):
            factor(13)
        with pytest.raises(NotFactorable):
            factor(97)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            factor(3)
        with pytest.raises(ValueError):
            factor("551")

    def test_split_override(self):
        result = factor(551, PipelineConfig(split_override=(5, 5)))
        assert (result.p, result.q) == (19, 29)

    def test_qubit_cap(self):
        # force the quantum stage below the residual size; every split either
        # propagates to a contradiction or needs more qubits than allowed
        with pytest.raises(QubitCapExceeded):
            factor(551, PipelineConfig(qubit_cap=2, exhaustive_fallback=False))

    def test_non_biprime_composite(self):
        result = factor(45)  # 3 * 3 * 5
        assert result.p * result.q == 45
        assert result.verified and not result.biprime

    def test_peng_mode(self):
        result = factor(21, PipelineConfig(mode="peng"))
        assert (result.p, result.q) == (3, 7)
        assert result.method is Method.PENG_GLOBAL

    def test_result_json_schema(self):
        doc = factor(551).to_json()
        assert doc == {
            "n": 551,
            "p": 19,
            "q": 29,
            "method": "hybrid-adiabatic",
            "split": {"l_p": 5, "l_q": 5, "case": "A"},
            "residual_vars": 3,
            "qubits": 3,
            "final_fidelity": pytest.approx(doc["final_fidelity"]),
            "verified": True,
        }
        assert doc["final_fidelity"] >= 0.99
        json.dumps(doc)  # serializable


@pytest.fixture(scope="module")
def run551():
    return factor(551)


class TestDecode:
    def test_solution_states(self, run551):
        spec, residual, split = run551.hamiltonian, run551.residual, run551.split
        p, q, ok = decode(0b011, spec, residual, split)
        assert (p, q, ok) == (29, 19, True)
        p, q, ok = decode(0b100, spec, residual, split)
        assert (p, q, ok) == (19, 29, True)

    def test_non_solution_flagged(self, run551):
        spec, residual, split = run551.hamiltonian, run551.residual, run551.split
        p, q, ok = decode(0b000, spec, residual, split)
        assert not ok
        assert (p, q) == (17, 31)  # decodes to a bit pattern, fails arithmetic
        assert p * q != 551


class TestCli:
    def test_factor_text(self, capsys):
        assert main(["factor", "551"]) == 0
        out = capsys.readouterr().out
        assert "551 = 19 * 29" in out and "hybrid-adiabatic" in out

    def test_factor_json(self, capsys):
        assert main(["factor", "143", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert (doc["p"], doc["q"]) == (11, 13)

    def test_factor_options_and_dumps(self, tmp_path, capsys):
        residual = tmp_path / "residual.json"
        ham = tmp_path / "h.json"
        trace = tmp_path / "trace.csv"
        code = main([
            "factor", "551", "--steps", "20", "--total-time", "3.5",
            "--split", "5,5",
            "--dump-residual", str(residual),
            "--dump-hamiltonian", str(ham),
            "--trace", str(trace),
        ])
        assert code == 0
        rdoc = json.loads(residual.read_text())
        assert rdoc["free_variables"] == ["p1", "p2", "p3"]
        hdoc = json.loads(ham.read_text())
        assert hdoc["qubits"] == 3
        assert trace.read_text().splitlines()[0].startswith("step,s,")

    def test_prime_exit_code(self, capsys):
        assert main(["factor", "13"]) == 2

    def test_cap_exit_code(self, capsys):
        assert main(["factor", "551", "--qubit-cap", "2"]) == 3

    def test_invalid_input_exit_code(self, capsys):
        assert main(["factor", "3"]) == 4

    def test_spectrum(self, tmp_path, capsys):
        out = tmp_path / "spectrum.csv"
        assert main(["spectrum", "551", "--samples", "11", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("s,E_0")
        assert len(lines) == 12

    def test_spectrum_classical_case(self, tmp_path, capsys):
        out = tmp_path / "spectrum.csv"
        assert main(["spectrum", "15", "--out", str(out)]) == 2
