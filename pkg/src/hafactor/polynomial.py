"""Exact multilinear pseudo-boolean polynomials with integer coefficients.

A polynomial is a map from monomials to non-zero integer coefficients plus an
integer constant.  A monomial is a sorted tuple of distinct variables; binary
variables are idempotent (x*x = x), so multilinearity is enforced on every
product.  Carry variables are bounded non-negative integers and may only occur
linearly: a monomial never contains more than one carry, and a carry is never
multiplied by another variable.  Everything here is immutable and pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class VarKind(enum.IntEnum):
    FACTOR_P = 0
    FACTOR_Q = 1
    CARRY = 2
    ANCILLA = 3


_PREFIX = {
    VarKind.FACTOR_P: "p",
    VarKind.FACTOR_Q: "q",
    VarKind.CARRY: "C",
    VarKind.ANCILLA: "a",
}


class EncodingError(ValueError):
    """A structurally invalid expression was built (e.g. a carry*carry product)."""


@dataclass(frozen=True, order=True)
class Variable:
    """A named binary bit or a bounded integer carry.

    Identity (equality, hashing, ordering) is by (kind, index) only; the bound
    is descriptive metadata.  Binary kinds always carry the bound (0, 1).
    """

    kind: VarKind
    index: int
    bound: tuple[int, int] = field(default=(0, 1), compare=False)

    def __post_init__(self):
        lo, hi = self.bound
        if self.kind is VarKind.CARRY:
            if not (0 <= lo <= hi):
                raise ValueError(f"bad carry bound {self.bound}")
        elif self.bound != (0, 1):
            raise ValueError(f"binary variable must have bound (0, 1), got {self.bound}")
        if self.index < 0:
            raise ValueError("variable index must be non-negative")

    @property
    def is_binary(self) -> bool:
        return self.kind is not VarKind.CARRY

    @property
    def name(self) -> str:
        return f"{_PREFIX[self.kind]}{self.index}"

    def __repr__(self):
        return self.name


Monomial = tuple[Variable, ...]
Assignment = Mapping[Variable, int]


def _merge_monomials(a: Monomial, b: Monomial) -> Monomial:
    """Sorted union with idempotence for binary variables.

    Raises EncodingError if the result would contain a carry variable of
    degree > 1 or a carry multiplied by anything else.
    """
    merged = tuple(sorted(set(a) | set(b)))
    carries = sum(1 for v in merged if not v.is_binary)
    if carries and (carries > 1 or len(merged) > 1):
        raise EncodingError(f"carry variables must stay linear: {a} * {b}")
    # distinct carries collapse nothing, but c*c would have slipped through the
    # set union -- catch it explicitly
    for v in a:
        if not v.is_binary and v in b:
            raise EncodingError(f"carry squared: {v}")
    return merged


class PseudoBooleanPolynomial:
    """Immutable multilinear polynomial; supports +, -, * with ints and peers."""

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Mapping[Monomial, int] | None = None, constant: int = 0):
        clean = {}
        for mono, coeff in (terms or {}).items():
            if coeff:
                clean[tuple(sorted(mono))] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "constant", constant)

    # ---- constructors ----
    @classmethod
    def const(cls, value: int) -> "PseudoBooleanPolynomial":
        return cls({}, value)

    @classmethod
    def var(cls, v: Variable) -> "PseudoBooleanPolynomial":
        return cls({(v,): 1})

    # ---- structure ----
    def variables(self) -> set[Variable]:
        return {v for mono in self.terms for v in mono}

    def is_constant(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, PseudoBooleanPolynomial):
            return NotImplemented
        return self.constant == other.constant and self.terms == other.terms

    def __hash__(self):
        return hash((self.constant, frozenset(self.terms.items())))

    # ---- arithmetic ----
    def __add__(self, other):
        other = _coerce(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            c = terms.get(mono, 0) + coeff
            if c:
                terms[mono] = c
            else:
                terms.pop(mono, None)
        return PseudoBooleanPolynomial(terms, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self):
        return PseudoBooleanPolynomial(
            {m: -c for m, c in self.terms.items()}, -self.constant
        )

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return PseudoBooleanPolynomial()
            return PseudoBooleanPolynomial(
                {m: c * other for m, c in self.terms.items()}, self.constant * other
            )
        other = _coerce(other)
        out: dict[Monomial, int] = {}
        for ma, ca in list(self.terms.items()) + [((), self.constant)]:
            if ca == 0:
                continue
            for mb, cb in list(other.terms.items()) + [((), other.constant)]:
                if cb == 0:
                    continue
                mono = _merge_monomials(ma, mb)
                out[mono] = out.get(mono, 0) + ca * cb
        constant = out.pop((), 0)
        return PseudoBooleanPolynomial(out, constant)

    __rmul__ = __mul__

    # ---- semantics ----
    def evaluate(self, assignment: Assignment) -> int:
        """Exact integer value; raises KeyError for an unassigned variable."""
        total = self.constant
        for mono, coeff in self.terms.items():
            prod = coeff
            for v in mono:
                prod *= assignment[v]
            total += prod
        return total

    def substitute(
        self, v: Variable, expr: "PseudoBooleanPolynomial | int"
    ) -> "PseudoBooleanPolynomial":
        """Replace every occurrence of v by expr and re-canonicalize."""
        expr = _coerce(expr)
        out = PseudoBooleanPolynomial.const(self.constant)
        for mono, coeff in self.terms.items():
            if v in mono:
                rest = PseudoBooleanPolynomial({tuple(u for u in mono if u != v): coeff})
                out = out + rest * expr
            else:
                out = out + PseudoBooleanPolynomial({mono: coeff})
        return out

    def bounds(self, fixed: Assignment | None = None) -> tuple[int, int]:
        """Term-wise (interval) min/max over all completions of `fixed`.

        Always contains the true range but may be loose when terms are
        correlated; unassigned variables range over their declared bound.
        """
        fixed = fixed or {}
        lo = hi = self.constant
        for mono, coeff in self.terms.items():
            plo = phi = 1
            for v in mono:
                if v in fixed:
                    vlo = vhi = fixed[v]
                else:
                    vlo, vhi = v.bound
                # all variable ranges are non-negative, so products are monotone
                plo *= vlo
                phi *= vhi
            if coeff >= 0:
                lo += coeff * plo
                hi += coeff * phi
            else:
                lo += coeff * phi
                hi += coeff * plo
        return lo, hi

    # ---- rendering ----
    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        parts = []
        for mono, coeff in self.sorted_terms():
            body = "*".join(v.name for v in mono)
            if coeff == 1:
                text = body
            elif coeff == -1:
                text = f"-{body}"
            else:
                text = f"{coeff}*{body}"
            parts.append(text)
        if self.constant or not parts:
            parts.append(str(self.constant))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = __str__


def _coerce(x) -> PseudoBooleanPolynomial:
    if isinstance(x, PseudoBooleanPolynomial):
        return x
    if isinstance(x, int):
        return PseudoBooleanPolynomial.const(x)
    raise TypeError(f"cannot coerce {type(x)} to polynomial")


def multiply(a: PseudoBooleanPolynomial, b: PseudoBooleanPolynomial) -> PseudoBooleanPolynomial:
    return a * b


def substitute(
    p: PseudoBooleanPolynomial, v: Variable, e: PseudoBooleanPolynomial | int
) -> PseudoBooleanPolynomial:
    return p.substitute(v, e)


def evaluate(p: PseudoBooleanPolynomial, a: Assignment) -> int:
    return p.evaluate(a)


def bounds(p: PseudoBooleanPolynomial, fixed: Assignment | None = None) -> tuple[int, int]:
    return p.bounds(fixed)


def exact_range(
    p: PseudoBooleanPolynomial,
    fixed: Assignment | None = None,
    ranges: Mapping[Variable, tuple[int, int]] | None = None,
) -> tuple[int, int]:
    """Brute-force min/max by enumerating every completion of `fixed`.

    Test oracle counterpart of `bounds`; exponential in the free variable
    count, so callers should cap it.  `ranges` overrides carry bounds.
    """
    from itertools import product

    fixed = dict(fixed or {})
    ranges = ranges or {}
    free = sorted(v for v in p.variables() if v not in fixed)
    domains = []
    for v in free:
        lo, hi = ranges.get(v, v.bound)
        domains.append(range(lo, hi + 1))
    lo = hi = None
    for combo in product(*domains):
        fixed.update(zip(free, combo))
        val = p.evaluate(fixed)
        lo = val if lo is None else min(lo, val)
        hi = val if hi is None else max(hi, val)
    return lo, hi
