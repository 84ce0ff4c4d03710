"""Sparse multivariate polynomials with exact rational coefficients.

Variables are indexed symbols ``a1, f2, g3, r1, p4, q2, u, v``.  A
polynomial is a ``{monomial: Fraction}`` mapping with no zero entries,
so two polynomials are equal exactly when their mappings are equal.
Monomials are tuples of ``(VarId, exponent)`` pairs in a fixed variable
order, which keeps printing and hashing deterministic.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import NamedTuple, Union

__all__ = [
    "ROLES",
    "VarId",
    "Monomial",
    "PolyRing",
    "Poly",
    "RingMismatchError",
    "MissingVariableError",
    "poly_add",
    "poly_mul",
    "poly_eval",
]

ROLES = ("a", "f", "g", "r", "p", "q", "u", "v")
_ROLE_RANK = {role: k for k, role in enumerate(ROLES)}
_UNINDEXED = frozenset({"u", "v"})


class RingMismatchError(ValueError):
    pass


class MissingVariableError(KeyError):
    pass


class VarId(NamedTuple):
    role: str
    index: int = 0

    @property
    def sort_key(self) -> tuple[int, int]:
        return _ROLE_RANK[self.role], self.index

    def __str__(self) -> str:
        return self.role if self.role in _UNINDEXED else f"{self.role}{self.index}"


def make_var(role: str, index: int = 0) -> VarId:
    if role not in _ROLE_RANK:
        raise ValueError(f"unknown variable role {role!r}")
    if role in _UNINDEXED:
        if index:
            raise ValueError(f"variable {role!r} takes no index")
    elif index < 1:
        raise ValueError(f"variable {role!r} needs an index >= 1")
    return VarId(role, index)


Monomial = tuple  # tuple[tuple[VarId, int], ...], sorted by VarId.sort_key
ONE: Monomial = ()


def _mono(powers: Mapping[VarId, int]) -> Monomial:
    items = [(var, exp) for var, exp in powers.items() if exp]
    if any(exp < 0 for _, exp in items):
        raise ValueError("negative exponent")
    return tuple(sorted(items, key=lambda item: item[0].sort_key))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers = dict(m1)
    for var, exp in m2:
        powers[var] = powers.get(var, 0) + exp
    return _mono(powers)


Scalar = Union[int, Fraction]


class PolyRing:
    """A polynomial ring context: Q[variables]."""

    __slots__ = ("variables", "_varset")

    def __init__(self, variables: Iterable[VarId]):
        variables = tuple(sorted(set(variables), key=lambda v: v.sort_key))
        self.variables = variables
        self._varset = frozenset(variables)

    @classmethod
    def construction(cls, n: int) -> PolyRing:
        """Ring of the substitution: a_i, f_i, g_i, r_i for i <= n, plus u, v."""
        vars_ = [make_var(role, i) for role in "afgr" for i in range(1, n + 1)]
        return cls(vars_ + [make_var("u"), make_var("v")])

    @classmethod
    def cyclic(cls, n: int) -> PolyRing:
        """Ring of the linear parameters p_i, q_i for i <= n."""
        return cls(make_var(role, i) for role in "pq" for i in range(1, n + 1))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(map(str, self.variables))})"

    def __contains__(self, var: VarId) -> bool:
        return var in self._varset

    def var(self, role: str, index: int = 0) -> Poly:
        var = make_var(role, index)
        if var not in self._varset:
            raise RingMismatchError(f"{var} is not a variable of {self!r}")
        return Poly(self, {((var, 1),): Fraction(1)})

    def const(self, value: Scalar) -> Poly:
        return Poly(self, {ONE: Fraction(value)})

    @property
    def zero(self) -> Poly:
        return Poly(self, {})

    @property
    def one(self) -> Poly:
        return self.const(1)

    def from_terms(self, terms: Mapping[Mapping[VarId, int] | Monomial, Scalar]) -> Poly:
        """Build a polynomial from ``{powers: coefficient}``; powers may be a dict."""
        out: dict[Monomial, Fraction] = {}
        for powers, coeff in terms.items():
            mono = _mono(powers) if isinstance(powers, Mapping) else _mono(dict(powers))
            for var, _ in mono:
                if var not in self._varset:
                    raise RingMismatchError(f"{var} is not a variable of {self!r}")
            out[mono] = out.get(mono, Fraction(0)) + Fraction(coeff)
        return Poly(self, out)


class Poly:
    """Immutable sparse polynomial over Q in a given ring."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, Fraction]):
        self.ring = ring
        self._terms = {m: c for m, c in terms.items() if c}

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other: Poly | Scalar) -> Poly:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other: Poly | Scalar) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, 0) + coeff
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Poly | Scalar) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> Poly:
        return (-self) + other

    def __mul__(self, other: Poly | Scalar) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def variables(self) -> set[VarId]:
        return {var for mono in self._terms for var, _ in mono}

    def degree(self, roles: str | Iterable[str] | None = None) -> int:
        """Maximum total degree over monomials, optionally counting only some roles."""
        return max((_mono_degree(m, roles) for m in self._terms), default=0)

    def monomial_degrees(self, roles: str | Iterable[str] | None = None) -> set[int]:
        return {_mono_degree(m, roles) for m in self._terms}

    def eval(self, assignment: Mapping[VarId, Scalar]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            value = coeff
            for var, exp in mono:
                try:
                    value *= Fraction(assignment[var]) ** exp
                except KeyError:
                    raise MissingVariableError(f"no value for variable {var}") from None
            total += value
        return total

    def substitute_sign(self, role: str) -> Poly:
        """Image under x -> -x for every variable of the given role."""
        out = {}
        for mono, coeff in self._terms.items():
            odd = sum(exp for var, exp in mono if var.role == role) % 2
            out[mono] = -coeff if odd else coeff
        return Poly(self.ring, out)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_mono_order):
            coeff = self._terms[mono]
            factors = [str(var) if exp == 1 else f"{var}^{exp}" for var, exp in mono]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _mono_degree(mono: Monomial, roles) -> int:
    if roles is None:
        return sum(exp for _, exp in mono)
    return sum(exp for var, exp in mono if var.role in roles)


def _mono_order(mono: Monomial):
    return (-sum(exp for _, exp in mono), [(var.sort_key, -exp) for var, exp in mono])


def poly_add(lhs: Poly, rhs: Poly) -> Poly:
    return lhs + rhs


def poly_mul(lhs: Poly, rhs: Poly) -> Poly:
    return lhs * rhs


def poly_eval(p: Poly, assignment: Mapping[VarId, Scalar]) -> Fraction:
    return p.eval(assignment)
