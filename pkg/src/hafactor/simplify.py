"""Classical pre-processing: carry-bound refinement and constraint propagation.

The carry variables are initialized with their absolute inductive bounds and
then tightened per equation: each equation is linear in its carries, so from
S(bits) + sum a_i C_i + const = 0 every carry range can be narrowed using the
exact range of the remaining part.  Bit ranges are computed by enumerating the
equation's own binary variables (each column touches only a band of bits, so
this stays cheap); above a size cap we fall back to sound term-wise intervals.

Interleaved with the refinement, a small fixpoint rule set propagates
consequences:

  R1  a carry whose range collapses is fixed,
  R2  a variable taking the same value in every satisfying assignment of a
      single equation is fixed (covers "sum of k binaries = 0/k" and more),
  R3  an equation of the exact shape x + y - 1 = 0 eliminates one variable by
      the substitution y = 1 - x,
  R4  equations reduced to constants are dropped when zero and signal an
      infeasible split otherwise,
  R5  idempotence cleanup x(1-x) = 0 (automatic in the polynomial algebra).

What survives is the residual system handed to the quantum stage, together
with a substitution log that replays residual solutions back to full bit
assignments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .equations import BitSplit, EquationSystem, absolute_carry_bound
from .polynomial import PseudoBooleanPolynomial, Variable, VarKind

_ENUM_BIT_CAP = 16      # max binary variables enumerated per equation
_ENUM_CARRY_CAP = 4096  # max carry combinations enumerated per equation
_MAX_ROUNDS = 10_000


class InfeasibleSplit(Exception):
    """The split admits no solution; the pipeline moves on to the next one."""


@dataclass
class BoundTable:
    """Inclusive [lo, hi] range per carry variable; ranges only ever shrink."""

    ranges: dict[Variable, tuple[int, int]]

    def lo(self, v: Variable) -> int:
        return self.ranges[v][0]

    def hi(self, v: Variable) -> int:
        return self.ranges[v][1]

    def narrow(self, v: Variable, lo: int, hi: int) -> bool:
        """Intersect; returns True if the range changed."""
        cur_lo, cur_hi = self.ranges[v]
        new_lo, new_hi = max(cur_lo, lo), min(cur_hi, hi)
        if new_lo > new_hi:
            raise InfeasibleSplit(f"empty range for {v}: [{new_lo}, {new_hi}]")
        if (new_lo, new_hi) != (cur_lo, cur_hi):
            self.ranges[v] = (new_lo, new_hi)
            return True
        return False

    def width(self) -> int:
        return sum(hi - lo for lo, hi in self.ranges.values())

    def copy(self) -> "BoundTable":
        return BoundTable(dict(self.ranges))


def init_bounds(split: BitSplit) -> BoundTable:
    """Absolute carry bounds: lo = 0 everywhere, hi per the inductive formula;
    the terminal carry is pinned by the bit-length case."""
    ranges = {}
    for i in range(1, split.terminal_carry_index):
        v = Variable(VarKind.CARRY, i, bound=(0, absolute_carry_bound(split, i)))
        ranges[v] = (0, absolute_carry_bound(split, i))
    t = Variable(VarKind.CARRY, split.terminal_carry_index)
    ranges[t] = (split.terminal_carry_value, split.terminal_carry_value)
    return BoundTable(ranges)


# ---------------------------------------------------------------------------
# per-equation analysis


def _split_carries(poly: PseudoBooleanPolynomial):
    """Decompose into (binary-only part, {carry: coeff}).  Carries are
    structurally linear, so a carry monomial is always the bare variable."""
    carries: dict[Variable, int] = {}
    bin_terms: dict = {}
    for mono, coeff in poly.terms.items():
        if len(mono) == 1 and not mono[0].is_binary:
            carries[mono[0]] = coeff
        else:
            bin_terms[mono] = coeff
    return PseudoBooleanPolynomial(bin_terms, poly.constant), carries


def _bit_grid(bin_part: PseudoBooleanPolynomial):
    """Evaluate the binary-only part over all assignments of its variables.

    Returns (variables, columns, values) as numpy arrays, or None when the
    variable count exceeds the enumeration cap.
    """
    variables = sorted(bin_part.variables())
    b = len(variables)
    if b > _ENUM_BIT_CAP:
        return None
    size = 1 << b
    index = {v: i for i, v in enumerate(variables)}
    cols = [((np.arange(size) >> (b - 1 - i)) & 1).astype(np.int64) for i in range(b)]
    values = np.full(size, bin_part.constant, dtype=np.int64)
    for mono, coeff in bin_part.terms.items():
        term = np.full(size, coeff, dtype=np.int64)
        for v in mono:
            term = term * cols[index[v]]
        values += term
    return variables, cols, values


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _refine_equation(poly: PseudoBooleanPolynomial, table: BoundTable) -> bool:
    """Tighten the range of every carry in one equation.  Returns True on change."""
    bin_part, carries = _split_carries(poly)
    grid = _bit_grid(bin_part)
    if grid is None:
        s_lo, s_hi = bin_part.bounds()
    else:
        _, _, values = grid
        s_lo, s_hi = int(values.min()), int(values.max())

    changed = False
    for v, a in carries.items():
        rest_lo, rest_hi = s_lo, s_hi
        for u, b in carries.items():
            if u is v:
                continue
            ulo, uhi = table.ranges[u]
            rest_lo += min(b * ulo, b * uhi)
            rest_hi += max(b * ulo, b * uhi)
        # a*v = -rest  =>  v in the integer range of -rest/a
        if a > 0:
            lo, hi = _ceil_div(-rest_hi, a), (-rest_lo) // a
        else:
            lo, hi = _ceil_div(rest_lo, -a), rest_hi // (-a)
        changed |= table.narrow(v, lo, hi)
    return changed


def _forced_values(poly: PseudoBooleanPolynomial, table: BoundTable):
    """Variables constant across every satisfying assignment of one equation.

    Returns {var: value}, or raises InfeasibleSplit when the equation has no
    satisfying assignment.  None when the equation is too large to enumerate.
    """
    bin_part, carries = _split_carries(poly)
    grid = _bit_grid(bin_part)
    if grid is None:
        return None
    variables, cols, values = grid

    carry_vars = sorted(carries)
    domains = [range(table.lo(c), table.hi(c) + 1) for c in carry_vars]
    combos = 1
    for d in domains:
        combos *= len(d)
    if combos > _ENUM_CARRY_CAP:
        return None

    union = np.zeros(len(values), dtype=bool)
    carry_seen: dict[Variable, set[int]] = {c: set() for c in carry_vars}
    for combo in itertools.product(*domains):
        offset = sum(carries[c] * val for c, val in zip(carry_vars, combo))
        mask = values + offset == 0
        if mask.any():
            union |= mask
            for c, val in zip(carry_vars, combo):
                carry_seen[c].add(val)

    if not union.any():
        raise InfeasibleSplit(f"unsatisfiable equation: {poly} = 0")

    forced: dict[Variable, int] = {}
    for i, v in enumerate(variables):
        col = cols[i][union]
        if col.min() == col.max():
            forced[v] = int(col[0])
    for c, seen in carry_seen.items():
        if len(seen) == 1:
            forced[c] = seen.pop()
    return forced


def _complement_pair(poly: PseudoBooleanPolynomial):
    """Match the exact shape x + y - 1 = 0; returns (kept, eliminated) or None.

    The factor-p bit is kept when the pair mixes kinds, mirroring the
    elimination q_j = 1 - p_j.
    """
    if poly.constant != -1 or len(poly.terms) != 2:
        return None
    monos = list(poly.terms)
    if any(len(m) != 1 or poly.terms[m] != 1 or not m[0].is_binary for m in monos):
        return None
    x, y = sorted(m[0] for m in monos)
    return x, y  # sorted puts FACTOR_P before FACTOR_Q before ancillas


# ---------------------------------------------------------------------------
# public operations


def refine_bounds(system: EquationSystem, table: BoundTable) -> BoundTable:
    """Iterate the per-equation carry tightening to a fixpoint.

    Uses only the system's pre-fixed bits (no substitutions); raises
    InfeasibleSplit when a range empties.
    """
    table = table.copy()
    polys = [_apply_fixed(eq.poly, system.fixed) for eq in system.equations]
    changed = True
    rounds = 0
    while changed:
        changed = False
        for poly in polys:
            changed |= _refine_equation(poly, table)
        rounds += 1
        if rounds > _MAX_ROUNDS:
            raise RuntimeError("bound refinement failed to converge")
    return table


def _apply_fixed(poly: PseudoBooleanPolynomial, fixed) -> PseudoBooleanPolynomial:
    for v, val in fixed.items():
        if v in poly.variables():
            poly = poly.substitute(v, val)
    return poly


@dataclass
class ResidualSystem:
    """What is left for the quantum stage after classical propagation."""

    equations: list[PseudoBooleanPolynomial]  # each == 0
    free_vars: list[Variable]
    eliminated: list[tuple[Variable, PseudoBooleanPolynomial]]  # substitution log
    fixed: dict[Variable, int]
    carry_bounds: dict[Variable, tuple[int, int]]  # surviving unfixed carries
    split: BitSplit
    n: int

    def complete(self, assignment: dict[Variable, int]) -> dict[Variable, int]:
        """Extend a residual assignment to all original variables by adding the
        fixed values and replaying the substitution log."""
        values = dict(self.fixed)
        values.update(assignment)
        for v, expr in self.eliminated:
            values[v] = expr.evaluate(values)
        return values

    def satisfies(self, assignment: dict[Variable, int]) -> bool:
        return all(eq.evaluate(assignment) == 0 for eq in self.equations)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "split": {"l_p": self.split.l_p, "l_q": self.split.l_q, "case": self.split.case},
            "equations": [str(eq) for eq in self.equations],
            "free_variables": [v.name for v in self.free_vars],
            "eliminated": [{"variable": v.name, "expression": str(e)} for v, e in self.eliminated],
            "fixed": {v.name: val for v, val in sorted(self.fixed.items())},
            "carry_bounds": {v.name: list(r) for v, r in sorted(self.carry_bounds.items())},
        }


def propagate(system: EquationSystem, table: BoundTable) -> ResidualSystem:
    """Run the full rule set to a fixpoint and emit the residual system."""
    table = table.copy()
    fixed = dict(system.fixed)
    polys = [_apply_fixed(eq.poly, fixed) for eq in system.equations]
    # carries already pinned by the table (terminal carry) count as fixed
    for v, (lo, hi) in table.ranges.items():
        if lo == hi and v not in fixed:
            fixed[v] = lo
            polys = [p.substitute(v, lo) for p in polys]

    eliminated: list[tuple[Variable, PseudoBooleanPolynomial]] = []

    def fix(v: Variable, value: int):
        nonlocal polys
        fixed[v] = value
        if v in table.ranges:
            table.narrow(v, value, value)
        polys = [p.substitute(v, value) for p in polys]

    def substitute(v: Variable, expr: PseudoBooleanPolynomial):
        nonlocal polys, eliminated
        eliminated = [(u, e.substitute(v, expr)) for u, e in eliminated]
        eliminated.append((v, expr))
        polys = [p.substitute(v, expr) for p in polys]

    changed = True
    rounds = 0
    while changed:
        changed = False
        live = []
        for poly in polys:
            if poly.is_constant():
                if poly.constant != 0:  # R4
                    raise InfeasibleSplit(f"contradictory equation: {poly.constant} = 0")
                continue
            live.append(poly)
        if len(live) != len(polys):
            polys = live
            changed = True

        for poly in list(polys):
            if poly.is_constant():
                continue
            changed |= _refine_equation(poly, table)

        for v, (lo, hi) in list(table.ranges.items()):  # R1
            if lo == hi and v not in fixed:
                fix(v, lo)
                changed = True

        for poly in list(polys):  # R2
            if poly.is_constant():
                continue
            forced = _forced_values(poly, table)
            if forced:
                for v, val in forced.items():
                    if v not in fixed:
                        fix(v, val)
                        changed = True

        for poly in list(polys):  # R3
            pair = _complement_pair(poly)
            if pair is not None:
                kept, gone = pair
                substitute(gone, 1 - PseudoBooleanPolynomial.var(kept))
                changed = True
                break  # re-normalize before scanning further

        rounds += 1
        if rounds > _MAX_ROUNDS:
            raise RuntimeError("propagation failed to converge")

    residual = [p for p in polys if not p.is_constant()]
    occurring = {v for p in residual for v in p.variables()}
    # a variable may drop out of every equation without being determined
    # (e.g. a balanced split of n = p*q where both bit orders solve the
    # system); it is still free and must be enumerated by the solver
    gone = {v for v, _ in eliminated}
    registry = set(system.p_bits) | set(system.q_bits) | set(system.carries.values())
    unconstrained = registry - occurring - gone - set(fixed)
    free = sorted(occurring | unconstrained)
    carry_bounds = {v: table.ranges[v] for v in free if not v.is_binary}
    return ResidualSystem(
        equations=residual,
        free_vars=free,
        eliminated=eliminated,
        fixed=fixed,
        carry_bounds=carry_bounds,
        split=system.split,
        n=system.n,
    )


def solve_residual_exhaustively(
    r: ResidualSystem, cap: int = 20
) -> list[dict[Variable, int]]:
    """All satisfying assignments over the free variables, by enumeration.

    Binary variables range over {0, 1}; surviving carries over their bounded
    ranges.  Raises ValueError when the search space exceeds 2**cap.
    """
    domains = []
    for v in r.free_vars:
        lo, hi = r.carry_bounds.get(v, (0, 1))
        domains.append(range(lo, hi + 1))
    total = 1
    for d in domains:
        total *= len(d)
    if total > (1 << cap):
        raise ValueError(f"residual search space {total} exceeds 2**{cap}")
    solutions = []
    for combo in itertools.product(*domains):
        assignment = dict(zip(r.free_vars, combo))
        if r.satisfies(assignment):
            solutions.append(assignment)
    return solutions
