"""Bitwise factoring equations for an odd composite n = p*q.

Writing p and q in binary with the least- and most-significant bits pinned to
1, the product decomposes column by column into

    sum_{k=alpha_m..beta_m} p_{m-k} q_k + C_m  =  n_m + 2 C_{m+1}

for m = 0 .. l_p+l_q-2, where C_m is the cumulative integer carry flowing into
column m (C_0 is identically zero) and n_m is the m-th bit of n.  The carry
out of the last column is forced by the bit-length case: it equals the top bit
of n when l_n = l_p + l_q and zero when l_n = l_p + l_q - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .polynomial import PseudoBooleanPolynomial, Variable, VarKind


@dataclass(frozen=True)
class BitSplit:
    """A candidate bit-length assignment (l_p, l_q) for the two factors."""

    l_n: int
    l_p: int
    l_q: int
    case: str  # "A": l_n = l_p + l_q, "B": l_n = l_p + l_q - 1

    def __post_init__(self):
        expected = self.l_p + self.l_q if self.case == "A" else self.l_p + self.l_q - 1
        if self.case not in ("A", "B"):
            raise ValueError(f"case must be 'A' or 'B', got {self.case!r}")
        if self.l_n != expected:
            raise ValueError(f"inconsistent split {self}")
        half = -(-self.l_n // 2)
        if not (2 <= self.l_q <= half <= self.l_p):
            raise ValueError(f"split violates l_q <= ceil(l_n/2) <= l_p: {self}")

    @property
    def num_columns(self) -> int:
        # equations exist for m = 0 .. l_p + l_q - 2
        return self.l_p + self.l_q - 1

    @property
    def terminal_carry_index(self) -> int:
        return self.l_p + self.l_q - 1

    @property
    def terminal_carry_value(self) -> int:
        return 1 if self.case == "A" else 0


def absolute_carry_bound(split: BitSplit, i: int) -> int:
    """Inductive upper bound on the cumulative carry C_i, independent of n."""
    l_p, l_q = split.l_p, split.l_q
    if 1 <= i <= l_q - 1:
        return i - 1
    if l_q <= i <= l_p:
        return l_q - 1
    if l_p + 1 <= i <= l_p + l_q - 2:
        return l_p + l_q - i
    if i == split.terminal_carry_index:
        return 1
    raise ValueError(f"no carry C_{i} in split {split}")


def enumerate_splits(n: int) -> list[BitSplit]:
    """All valid bit-length splits for n, balanced split first then decreasing l_q.

    Requires n odd and >= 9 (even factors are stripped upstream; below 9 there
    is no room for two >= 2-bit factors).
    """
    if n % 2 == 0:
        raise ValueError(f"n must be odd, got {n}")
    if n < 9:
        raise ValueError(f"n must be >= 9, got {n}")
    l_n = n.bit_length()
    half = -(-l_n // 2)
    splits = []
    for l_q in range(half, 1, -1):
        for case, l_p in (("A", l_n - l_q), ("B", l_n + 1 - l_q)):
            if l_p >= half and l_p >= 2:
                splits.append(BitSplit(l_n, l_p, l_q, case))
    splits.sort(key=lambda s: (not (s.l_p == s.l_q == half), -s.l_q, s.case))
    return splits


@dataclass(frozen=True)
class FactoringEquation:
    """One column of the multiplication table, stored as lhs - n_m - 2*C_{m+1} = 0."""

    m: int
    lhs: PseudoBooleanPolynomial  # cross terms + incoming carry
    n_m: int
    poly: PseudoBooleanPolynomial  # lhs - n_m - 2*C_{m+1}


@dataclass
class EquationSystem:
    split: BitSplit
    n: int
    equations: list[FactoringEquation]
    p_bits: list[Variable]
    q_bits: list[Variable]
    carries: dict[int, Variable]  # index m -> C_m, for m = 1 .. l_p+l_q-1
    fixed: dict[Variable, int] = field(default_factory=dict)

    def variables(self) -> list[Variable]:
        return sorted(set(self.p_bits) | set(self.q_bits) | set(self.carries.values()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "split": {
                "l_n": self.split.l_n,
                "l_p": self.split.l_p,
                "l_q": self.split.l_q,
                "case": self.split.case,
            },
            "equations": [
                {"m": eq.m, "lhs": str(eq.lhs), "n_m": eq.n_m} for eq in self.equations
            ],
            "fixed": {v.name: val for v, val in sorted(self.fixed.items())},
        }


def build_equations(n: int, split: BitSplit) -> EquationSystem:
    """Construct the full column-wise equation system for n under `split`."""
    l_p, l_q = split.l_p, split.l_q
    p_bits = [Variable(VarKind.FACTOR_P, j) for j in range(l_p)]
    q_bits = [Variable(VarKind.FACTOR_Q, k) for k in range(l_q)]
    carries = {
        i: Variable(VarKind.CARRY, i, bound=(0, absolute_carry_bound(split, i)))
        for i in range(1, split.terminal_carry_index + 1)
    }

    fixed = {
        p_bits[0]: 1,
        p_bits[-1]: 1,
        q_bits[0]: 1,
        q_bits[-1]: 1,
        carries[split.terminal_carry_index]: split.terminal_carry_value,
    }

    equations = []
    for m in range(split.num_columns):
        alpha = max(0, m - l_p + 1)
        beta = min(m, l_q - 1)
        lhs = PseudoBooleanPolynomial.const(0)
        for k in range(alpha, beta + 1):
            lhs = lhs + PseudoBooleanPolynomial.var(p_bits[m - k]) * PseudoBooleanPolynomial.var(q_bits[k])
        if m >= 1:
            lhs = lhs + PseudoBooleanPolynomial.var(carries[m])
        n_m = (n >> m) & 1
        poly = lhs - n_m - 2 * PseudoBooleanPolynomial.var(carries[m + 1])
        equations.append(FactoringEquation(m, lhs, n_m, poly))

    return EquationSystem(split, n, equations, p_bits, q_bits, carries, fixed)


def true_carries(n: int, p: int, q: int) -> dict[int, int]:
    """Cumulative carries induced by the true factors (long-multiplication oracle)."""
    l_p, l_q = p.bit_length(), q.bit_length()
    carries = {0: 0}
    for m in range(l_p + l_q - 1):
        s = sum(
            ((p >> (m - k)) & 1) * ((q >> k) & 1)
            for k in range(max(0, m - l_p + 1), min(m, l_q - 1) + 1)
        )
        n_m = (n >> m) & 1
        total = s + carries[m]
        assert (total - n_m) % 2 == 0 and total >= n_m, "not the true factors"
        carries[m + 1] = (total - n_m) // 2
    return carries


def matrix_view(system: EquationSystem) -> dict:
    """Banded matrix rendering: rows are columns of the product, entries are
    q-bit symbols multiplying the p-vector, plus the carry and rhs vectors."""
    split = system.split
    l_p, l_q, l_n = split.l_p, split.l_q, split.l_n

    def q_symbol(k: int) -> str:
        if k in (0, l_q - 1):
            return "1"
        return f"q{k}"

    rows = []
    for m in range(l_n):
        row = []
        for j in range(l_p):
            k = m - j
            row.append(q_symbol(k) if 0 <= k <= l_q - 1 else "0")
        rows.append(row)

    p_vector = ["1"] + [f"p{j}" for j in range(1, l_p - 1)] + ["1"]
    carry_in = ["0" if m <= 1 else f"C{m}" for m in range(l_n)]
    carry_out = ["C%d" % (m + 1) if 0 < m and m + 1 <= split.terminal_carry_index else "0"
                 for m in range(l_n)]
    rhs = [(system.n >> m) & 1 for m in range(l_n)]
    return {
        "matrix": rows,
        "p_vector": p_vector,
        "carry_in": carry_in,
        "carry_out": carry_out,
        "rhs_bits": rhs,
    }
