"""End-to-end hybrid factorization: classical reduction, then adiabatic solve.

For each candidate bit-length split the pipeline builds the column equations,
refines the carry bounds, and propagates constraints.  When propagation pins
every bit, the factors come out classically.  Otherwise the residual system is
compiled to a diagonal Hamiltonian, evolved adiabatically, and the high-
probability basis states are decoded and verified arithmetically: since
verification is just multiplication, a misread never yields a wrong answer,
only a move to the next candidate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import adiabatic, hamiltonian
from .equations import BitSplit, enumerate_splits, build_equations
from .hamiltonian import DEFAULT_QUBIT_CAP, HamiltonianSpec, QubitCapExceeded
from .polynomial import Variable, VarKind
from .simplify import (
    InfeasibleSplit,
    ResidualSystem,
    init_bounds,
    propagate,
    refine_bounds,
    solve_residual_exhaustively,
)


class NotFactorable(ValueError):
    """No split produced a verified factor pair (prime or malformed input)."""


class Method(enum.Enum):
    CLASSICAL_ONLY = "classical-only"
    HYBRID_ADIABATIC = "hybrid-adiabatic"
    PENG_GLOBAL = "peng-global"


@dataclass
class PipelineConfig:
    schedule: adiabatic.Schedule = field(default_factory=adiabatic.Schedule)
    qubit_cap: int = DEFAULT_QUBIT_CAP
    threshold: float = 0.2  # per-state decode threshold; two-fold ground ~ 0.5 each
    mode: str = "hybrid"  # "hybrid" or "peng"
    split_override: tuple[int, int] | None = None  # (l_p, l_q)
    exhaustive_fallback: bool = True  # classical fallback if no decoded state verifies
    exhaustive_cap: int = 20

    def __post_init__(self):
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")


@dataclass
class FactorResult:
    n: int
    p: int
    q: int
    method: Method
    split: BitSplit | None
    residual_vars: int
    qubits: int
    final_fidelity: float | None
    verified: bool
    biprime: bool
    solution_probability: float | None = None
    used_fallback: bool = False
    trace: adiabatic.AdiabaticTrace | None = None
    residual: ResidualSystem | None = None
    hamiltonian: HamiltonianSpec | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "method": self.method.value,
            "split": None
            if self.split is None
            else {"l_p": self.split.l_p, "l_q": self.split.l_q, "case": self.split.case},
            "residual_vars": self.residual_vars,
            "qubits": self.qubits,
            "final_fidelity": self.final_fidelity,
            "verified": self.verified,
        }


def brute_force_factor(n: int) -> tuple[int, int]:
    """Trial division oracle; smallest factor first."""
    if n < 4:
        raise ValueError("n must be >= 4")
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d, n // d
        d += 1
    raise NotFactorable(f"{n} is prime")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def assemble_factors(values, split: BitSplit) -> tuple[int, int]:
    """Read p and q off a complete bit assignment."""
    p = sum(values[Variable(VarKind.FACTOR_P, j)] << j for j in range(split.l_p))
    q = sum(values[Variable(VarKind.FACTOR_Q, k)] << k for k in range(split.l_q))
    return p, q


def decode(
    b: int,
    spec: HamiltonianSpec,
    residual: ResidualSystem,
    split: BitSplit,
) -> tuple[int, int, bool]:
    """Decode basis state b into a candidate (p, q); the flag marks whether the
    underlying assignment actually satisfies the residual equations."""
    partial = spec.qubit_map.decode_basis_state(b)
    free_assignment = {v: partial[v] for v in residual.free_vars}
    ok = residual.satisfies(free_assignment)
    values = residual.complete(free_assignment)
    p, q = assemble_factors(values, split)
    return p, q, ok


def _result(n, p, q, **kw) -> FactorResult:
    p, q = sorted((p, q))
    return FactorResult(
        n=n, p=p, q=q, verified=(p * q == n), biprime=is_prime(p) and is_prime(q), **kw
    )


def _splits(n: int, cfg: PipelineConfig) -> list[BitSplit]:
    if cfg.split_override is not None:
        l_p, l_q = cfg.split_override
        l_n = n.bit_length()
        case = "A" if l_n == l_p + l_q else "B"
        return [BitSplit(l_n, l_p, l_q, case)]
    return enumerate_splits(n)


def factor(n: int, cfg: PipelineConfig | None = None) -> FactorResult:
    """Factor n; raises NotFactorable for primes and QubitCapExceeded when the
    only viable residuals are too large to simulate."""
    cfg = cfg or PipelineConfig()
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"n must be an integer >= 4, got {n!r}")

    if n % 2 == 0:
        # factors of 2 are stripped classically; no bitwise system needed
        return _result(
            n, 2, n // 2,
            method=Method.CLASSICAL_ONLY, split=None, residual_vars=0,
            qubits=0, final_fidelity=None,
        )

    if cfg.mode == "peng":
        return _factor_peng(n, cfg)

    cap_hit = False
    for split in _splits(n, cfg):
        try:
            system = build_equations(n, split)
            table = refine_bounds(system, init_bounds(split))
            residual = propagate(system, table)
        except InfeasibleSplit:
            continue

        if not residual.free_vars:
            p, q = assemble_factors(residual.complete({}), split)
            if p * q == n:
                return _result(
                    n, p, q,
                    method=Method.CLASSICAL_ONLY, split=split, residual_vars=0,
                    qubits=0, final_fidelity=None, residual=residual,
                )
            continue

        spec = hamiltonian.build_bitwise_hamiltonian(residual)
        if spec.num_qubits > cfg.qubit_cap:
            cap_hit = True
            continue
        trace = adiabatic.evolve(spec, cfg.schedule, cfg.qubit_cap)

        candidates = sorted(
            (b for b in range(len(trace.final_probabilities))
             if trace.final_probabilities[b] >= cfg.threshold),
            key=lambda b: -trace.final_probabilities[b],
        )
        solution_prob = 0.0
        found = None
        for b in candidates:
            p, q, ok = decode(b, spec, residual, split)
            if ok and p * q == n:
                solution_prob += float(trace.final_probabilities[b])
                if found is None:
                    found = (p, q)
        if found is not None:
            return _result(
                n, *found,
                method=Method.HYBRID_ADIABATIC, split=split,
                residual_vars=len(residual.free_vars), qubits=spec.num_qubits,
                final_fidelity=trace.final_fidelity,
                solution_probability=solution_prob,
                trace=trace, residual=residual, hamiltonian=spec,
            )

        if cfg.exhaustive_fallback and len(residual.free_vars) <= cfg.exhaustive_cap:
            for sol in solve_residual_exhaustively(residual, cfg.exhaustive_cap):
                p, q = assemble_factors(residual.complete(sol), split)
                if p * q == n:
                    return _result(
                        n, p, q,
                        method=Method.HYBRID_ADIABATIC, split=split,
                        residual_vars=len(residual.free_vars), qubits=spec.num_qubits,
                        final_fidelity=trace.final_fidelity,
                        used_fallback=True,
                        trace=trace, residual=residual, hamiltonian=spec,
                    )

    if cap_hit:
        raise QubitCapExceeded(f"all viable residuals for {n} exceed the qubit cap")
    raise NotFactorable(f"no verified factorization found for {n} (prime or not a biprime)")


def _factor_peng(n: int, cfg: PipelineConfig) -> FactorResult:
    """Global-cost cross-check mode for tiny n (no classical reduction)."""
    for split in _splits(n, cfg):
        spec = hamiltonian.build_peng_hamiltonian(n, split, cfg.qubit_cap)
        if spec.num_qubits == 0:
            p = 1 + (1 << (split.l_p - 1))
            q = 1 + (1 << (split.l_q - 1))
            if p * q == n:
                return _result(
                    n, p, q, method=Method.PENG_GLOBAL, split=split,
                    residual_vars=0, qubits=0, final_fidelity=None,
                )
            continue
        trace = adiabatic.evolve(spec, cfg.schedule, cfg.qubit_cap)
        order = sorted(
            range(len(trace.final_probabilities)),
            key=lambda b: -trace.final_probabilities[b],
        )
        for b in order:
            if trace.final_probabilities[b] < cfg.threshold:
                break
            values = spec.qubit_map.decode_basis_state(b)
            values.update(
                {
                    Variable(VarKind.FACTOR_P, 0): 1,
                    Variable(VarKind.FACTOR_P, split.l_p - 1): 1,
                    Variable(VarKind.FACTOR_Q, 0): 1,
                    Variable(VarKind.FACTOR_Q, split.l_q - 1): 1,
                }
            )
            p, q = assemble_factors(values, split)
            if p * q == n:
                return _result(
                    n, p, q, method=Method.PENG_GLOBAL, split=split,
                    residual_vars=spec.num_qubits, qubits=spec.num_qubits,
                    final_fidelity=trace.final_fidelity, trace=trace,
                    hamiltonian=spec,
                )
    raise NotFactorable(f"peng mode found no verified factorization for {n}")
