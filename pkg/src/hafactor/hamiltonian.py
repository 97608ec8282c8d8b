"""Diagonal cost Hamiltonians over qubits from pseudo-boolean equation systems.

Each residual equation e = 0 contributes the penalty e**2 after every bit
variable x is mapped to the single-qubit number operator W = (I - Z)/2, whose
eigenvalues on |0> and |1> are exactly 0 and 1.  The summed penalty is then
expanded into Z-type Pauli strings with exact dyadic-rational coefficients, so
the construction is bit-exact; floats only appear when a matrix is realized.
Surviving bounded carries are embedded first as offset + sum 2**t a_t over
fresh ancilla bits.

The initial Hamiltonian is always the transverse field sum_i sigma_x^i, whose
ground state |-...-> is trivial to prepare.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .equations import BitSplit
from .polynomial import PseudoBooleanPolynomial, Variable, VarKind
from .simplify import ResidualSystem

DEFAULT_QUBIT_CAP = 14


class QubitCapExceeded(ValueError):
    pass


class NothingToSolve(ValueError):
    """The residual system has no free variables; the classical stage already won."""


@dataclass(frozen=True)
class CarryEncoding:
    offset: int
    ancillas: tuple[Variable, ...]  # weight 2**t for the t-th entry

    def expression(self) -> PseudoBooleanPolynomial:
        expr = PseudoBooleanPolynomial.const(self.offset)
        for t, a in enumerate(self.ancillas):
            expr = expr + (1 << t) * PseudoBooleanPolynomial.var(a)
        return expr


def encode_carry(v: Variable, lo: int, hi: int, next_index: int) -> CarryEncoding:
    """Binary encoding v = lo + sum 2**t a_t with ceil(log2(hi-lo+1)) ancillas.

    The encoded range may overshoot hi (next power of two); spurious values
    are penalized through the squared equations, not here.
    """
    if hi <= lo:
        raise ValueError(f"carry {v} is fixed ([{lo}, {hi}]), nothing to encode")
    width = (hi - lo).bit_length()
    ancillas = tuple(Variable(VarKind.ANCILLA, next_index + t) for t in range(width))
    return CarryEncoding(lo, ancillas)


@dataclass
class QubitMap:
    """Qubit i <-> i-th entry of `qubits`; qubit 0 is the leftmost ket label
    (most significant bit of the basis index)."""

    qubits: list[Variable]
    carry_encodings: dict[Variable, CarryEncoding] = field(default_factory=dict)

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def qubit_of(self, v: Variable) -> int:
        return self.qubits.index(v)

    def decode_basis_state(self, b: int) -> dict[Variable, int]:
        """Bit values of every mapped variable at computational basis index b,
        with encoded carries reassembled to their integer values."""
        k = self.num_qubits
        bits = {v: (b >> (k - 1 - i)) & 1 for i, v in enumerate(self.qubits)}
        out = {v: val for v, val in bits.items() if v.kind is not VarKind.ANCILLA}
        for carry, enc in self.carry_encodings.items():
            out[carry] = enc.offset + sum(
                (1 << t) * bits[a] for t, a in enumerate(enc.ancillas)
            )
        return out

    def to_json(self) -> dict:
        return {
            "qubits": [v.name for v in self.qubits],
            "carry_encodings": {
                c.name: {"offset": e.offset, "ancillas": [a.name for a in e.ancillas]}
                for c, e in self.carry_encodings.items()
            },
        }


@dataclass(frozen=True)
class PauliTerm:
    z_support: frozenset[int]
    coeff: Fraction


@dataclass
class HamiltonianSpec:
    """Final diagonal Hamiltonian (Z strings) plus the implicit transverse part."""

    terms: list[PauliTerm]
    num_qubits: int
    qubit_map: QubitMap

    def term_dict(self) -> dict[frozenset[int], Fraction]:
        return {t.z_support: t.coeff for t in self.terms}

    def final_diagonal(self) -> np.ndarray:
        """Energies of the computational basis states, qubit 0 most significant."""
        k = self.num_qubits
        dim = 1 << k
        idx = np.arange(dim)
        signs = [1 - 2 * ((idx >> (k - 1 - i)) & 1) for i in range(k)]
        diag = np.zeros(dim)
        for term in self.terms:
            contrib = np.full(dim, float(term.coeff))
            for q in term.z_support:
                contrib = contrib * signs[q]
            diag += contrib
        return diag

    def ground_states(self, tol: float = 1e-9) -> list[int]:
        diag = self.final_diagonal()
        return [int(b) for b in np.flatnonzero(diag <= diag.min() + tol)]

    def to_json(self) -> dict:
        return {
            "qubits": self.num_qubits,
            "map": self.qubit_map.to_json(),
            "terms": [
                {"z": sorted(t.z_support), "coeff": float(t.coeff)}
                for t in sorted(self.terms, key=lambda t: sorted(t.z_support))
            ],
        }


def _pauli_expand(cost: PseudoBooleanPolynomial, qubit_of: dict[Variable, int]):
    """x_i -> (I - Z_i)/2 on every monomial, merged over equal Z supports."""
    acc: dict[frozenset[int], Fraction] = {frozenset(): Fraction(cost.constant)}
    for mono, coeff in cost.terms.items():
        qubits = [qubit_of[v] for v in mono]
        d = len(qubits)
        base = Fraction(coeff, 1 << d)
        for r in range(d + 1):
            for subset in itertools.combinations(qubits, r):
                key = frozenset(subset)
                acc[key] = acc.get(key, Fraction(0)) + base * (-1) ** r
    return [PauliTerm(z, c) for z, c in acc.items() if c != 0]


def _spec_from_cost(
    cost: PseudoBooleanPolynomial, qubit_map: QubitMap
) -> HamiltonianSpec:
    qubit_of = {v: i for i, v in enumerate(qubit_map.qubits)}
    terms = _pauli_expand(cost, qubit_of)
    terms.sort(key=lambda t: (len(t.z_support), sorted(t.z_support)))
    return HamiltonianSpec(terms, qubit_map.num_qubits, qubit_map)


def build_bitwise_hamiltonian(r: ResidualSystem) -> HamiltonianSpec:
    """Sum of squared residual equations as a diagonal Pauli expansion.

    The minimum eigenvalue is 0 exactly when the residual system is
    satisfiable, and the zero-energy basis states decode to its solutions.
    """
    if not r.free_vars:
        raise NothingToSolve("residual system has no free variables")

    binaries = [v for v in r.free_vars if v.is_binary]
    carries = [v for v in r.free_vars if not v.is_binary]
    qubits = list(binaries)
    encodings: dict[Variable, CarryEncoding] = {}
    equations = list(r.equations)
    next_anc = 0
    for c in carries:
        lo, hi = r.carry_bounds[c]
        enc = encode_carry(c, lo, hi, next_anc)
        next_anc += len(enc.ancillas)
        encodings[c] = enc
        qubits.extend(enc.ancillas)
        equations = [eq.substitute(c, enc.expression()) for eq in equations]

    cost = PseudoBooleanPolynomial.const(0)
    for eq in equations:
        cost = cost + eq * eq
    return _spec_from_cost(cost, QubitMap(qubits, encodings))


def build_peng_hamiltonian(
    n: int, split: BitSplit, qubit_cap: int = DEFAULT_QUBIT_CAP
) -> HamiltonianSpec:
    """Global cost (n - P*Q)**2 over the free middle bits of both factors.

    The first and last bits of p and q are pinned to 1, so the register holds
    l_p + l_q - 4 qubits.  No classical simplification is involved; this is
    the cross-check mode for tiny n.
    """
    p_free = [Variable(VarKind.FACTOR_P, j) for j in range(1, split.l_p - 1)]
    q_free = [Variable(VarKind.FACTOR_Q, k) for k in range(1, split.l_q - 1)]
    if len(p_free) + len(q_free) > qubit_cap:
        raise QubitCapExceeded(
            f"{len(p_free) + len(q_free)} qubits exceed cap {qubit_cap}"
        )
    p_poly = PseudoBooleanPolynomial.const(1 + (1 << (split.l_p - 1)))
    for j, v in enumerate(p_free, start=1):
        p_poly = p_poly + (1 << j) * PseudoBooleanPolynomial.var(v)
    q_poly = PseudoBooleanPolynomial.const(1 + (1 << (split.l_q - 1)))
    for k, v in enumerate(q_free, start=1):
        q_poly = q_poly + (1 << k) * PseudoBooleanPolynomial.var(v)

    diff = PseudoBooleanPolynomial.const(n) - p_poly * q_poly
    cost = diff * diff
    return _spec_from_cost(cost, QubitMap(p_free + q_free))


def initial_matrix(k: int) -> np.ndarray:
    """Dense transverse field sum_i sigma_x^i on k qubits."""
    dim = 1 << k
    h = np.zeros((dim, dim))
    for b in range(dim):
        for i in range(k):
            h[b, b ^ (1 << (k - 1 - i))] += 1.0
    return h


def to_matrix(
    spec: HamiltonianSpec, part: str, qubit_cap: int = DEFAULT_QUBIT_CAP
) -> np.ndarray:
    """Dense Hermitian realization of either Hamiltonian part.

    part is "initial" (transverse field) or "final" (diagonal cost).
    """
    if spec.num_qubits > qubit_cap:
        raise QubitCapExceeded(f"{spec.num_qubits} qubits exceed cap {qubit_cap}")
    if part == "initial":
        return initial_matrix(spec.num_qubits)
    if part == "final":
        return np.diag(spec.final_diagonal())
    raise ValueError(f"part must be 'initial' or 'final', got {part!r}")
