"""Parametric solutions of  sum a_i x_i^4 = sum a_i y_i^4.

The construction writes

    x_i = (f_i + g_i) u + r_i v,    y_i = (f_i - g_i) u + r_i v,

picks g from the cyclic differences of p so the v^3 coefficient of the
resulting cubic in (u, v) telescopes to zero, picks f from the cyclic
differences of q so the u v^2 coefficient does too, and then solves the
remaining linear equation for (u, v).  Everything is exact.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .numeric import (
    NoPrimitiveForm,
    format_rational,
    gcd_all,
    lcm_all,
    parse_rational,
    rational_content,
)

__all__ = [
    "PreconditionError",
    "DegenerateConstructionError",
    "ProblemSpec",
    "GeneralParams",
    "N3SpecialParams",
    "TrivialityFlags",
    "RationalSolution",
    "IntegerSolution",
    "compute_g",
    "compute_f",
    "compute_uv",
    "assemble_solution",
    "solve_general",
    "solve_n3_special",
    "normalize_params",
    "verify_equation",
    "side_sums",
    "classify",
    "nontriviality_check",
    "to_primitive",
]

Number = Union[int, Fraction]


class PreconditionError(ValueError):
    """A parameter violates a condition the construction relies on.

    ``index`` is 1-based when the violation is tied to a position.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class DegenerateConstructionError(ValueError):
    """The parameter point gives u = 0, which the derivation excludes."""


def _fractions(values: Sequence[Number]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class ProblemSpec:
    """An equation instance: n terms per side with coefficients a."""

    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.a)
        for k, coeff in enumerate(a, 1):
            if isinstance(coeff, bool) or int(coeff) != coeff:
                raise PreconditionError(f"coefficient a{k} is not an integer", k)
        a = tuple(int(c) for c in a)
        object.__setattr__(self, "a", a)
        if len(a) < 2:
            raise PreconditionError(f"need n >= 2 coefficients, got {len(a)}")
        for k, coeff in enumerate(a, 1):
            if coeff == 0:
                raise PreconditionError(f"coefficient a{k} is zero", k)

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class GeneralParams:
    """Free parameters p, q, r of the n-term family (cyclic: index n+1 is 1)."""

    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]
    r: tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("p", "q", "r"):
            object.__setattr__(self, name, _fractions(getattr(self, name)))
        if not len(self.p) == len(self.q) == len(self.r):
            raise PreconditionError("p, q and r must have the same length")

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": "general",
            "p": [format_rational(v) for v in self.p],
            "q": [format_rational(v) for v in self.q],
            "r": [format_rational(v) for v in self.r],
        }


@dataclass(frozen=True)
class N3SpecialParams:
    """Parameters of the simplified three-term family (p3 = q3 = 0)."""

    p1: Fraction
    p2: Fraction
    q1: Fraction
    q2: Fraction
    r1: Fraction
    r2: Fraction
    r3: Fraction
    lam: Fraction = Fraction(1)
    mu: Fraction = Fraction(1)

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def r(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.r1, self.r2, self.r3

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": "n3_special"}
        out["p"] = [format_rational(self.p1), format_rational(self.p2)]
        out["q"] = [format_rational(self.q1), format_rational(self.q2)]
        out["r"] = [format_rational(v) for v in self.r]
        out["lambda"] = format_rational(self.lam)
        out["mu"] = format_rational(self.mu)
        return out


Params = Union[GeneralParams, N3SpecialParams]


def params_from_dict(data: dict[str, Any]) -> Params | None:
    if not data:
        return None
    p = [parse_rational(s) for s in data["p"]]
    q = [parse_rational(s) for s in data["q"]]
    r = [parse_rational(s) for s in data["r"]]
    if data.get("family") == "n3_special":
        return N3SpecialParams(
            *p, *q, *r, lam=parse_rational(data["lambda"]), mu=parse_rational(data["mu"])
        )
    return GeneralParams(p, q, r)


@dataclass(frozen=True)
class TrivialityFlags:
    """Per-index x_i = y_i / x_i = -y_i markers plus the signed-permutation marker."""

    equals: tuple[bool, ...]
    negated: tuple[bool, ...]
    signed_permutation: bool

    @property
    def fully_nontrivial(self) -> bool:
        return not any(self.equals) and not any(self.negated)

    def to_dict(self) -> dict[str, Any]:
        return {
            "equals": list(self.equals),
            "negated": list(self.negated),
            "signed_permutation": self.signed_permutation,
            "fully_nontrivial": self.fully_nontrivial,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TrivialityFlags:
        return cls(
            tuple(bool(b) for b in data["equals"]),
            tuple(bool(b) for b in data["negated"]),
            bool(data["signed_permutation"]),
        )


@dataclass(frozen=True)
class RationalSolution:
    spec: ProblemSpec
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    f: tuple[Fraction, ...]
    g: tuple[Fraction, ...]
    u: Fraction
    v: Fraction
    params: Params | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.spec.n,
            "a": [str(c) for c in self.spec.a],
            "x": [format_rational(v) for v in self.x],
            "y": [format_rational(v) for v in self.y],
            "flags": classify(self.spec.a, self.x, self.y).to_dict(),
            "audit": audit_dict(self),
            "params": self.params.to_dict() if self.params else {},
        }


def audit_dict(sol: RationalSolution) -> dict[str, Any]:
    return {
        "f": [format_rational(v) for v in sol.f],
        "g": [format_rational(v) for v in sol.g],
        "u": format_rational(sol.u),
        "v": format_rational(sol.v),
    }


@dataclass(frozen=True)
class IntegerSolution:
    """Primitive, sign-free integer solution with canonical side order."""

    spec: ProblemSpec
    x: tuple[int, ...]
    y: tuple[int, ...]
    flags: TrivialityFlags
    params: Params | None = field(default=None, compare=False)

    @property
    def height(self) -> int:
        return max(self.x + self.y)

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.spec.a, self.x, self.y

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.spec.n,
            "a": [str(c) for c in self.spec.a],
            "x": [str(v) for v in self.x],
            "y": [str(v) for v in self.y],
            "height": str(self.height),
            "flags": self.flags.to_dict(),
            "params": self.params.to_dict() if self.params else {},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> IntegerSolution:
        spec = ProblemSpec(tuple(int(c) for c in data["a"]))
        x = tuple(int(v) for v in data["x"])
        y = tuple(int(v) for v in data["y"])
        if len(x) != spec.n or len(y) != spec.n:
            raise ValueError("solution sides do not match the coefficient count")
        if int(data.get("n", spec.n)) != spec.n:
            raise ValueError("n does not match the coefficient count")
        if "height" in data and int(data["height"]) != max(x + y):
            raise ValueError("stored height does not match the entries")
        flags = TrivialityFlags.from_dict(data["flags"]) if "flags" in data else classify(spec.a, x, y)
        return cls(spec, x, y, flags, params_from_dict(data.get("params") or {}))


# -- construction steps ------------------------------------------------------


def _check_lengths(spec: ProblemSpec, params: GeneralParams) -> None:
    if len(params.p) != spec.n:
        raise PreconditionError(f"expected {spec.n} values for p, q, r; got {len(params.p)}")


def compute_g(spec: ProblemSpec, params: GeneralParams) -> tuple[Fraction, ...]:
    """g_i = (p_i - p_{i+1}) / (a_i r_i^3); the g-sum weighted by a_i r_i^3 telescopes."""
    _check_lengths(spec, params)
    n, p, r = spec.n, params.p, params.r
    for i in range(n):
        if r[i] == 0:
            raise PreconditionError(f"r{i + 1} must be nonzero", i + 1)
    g = []
    for i in range(n):
        nxt = (i + 1) % n
        if p[i] == p[nxt]:
            raise PreconditionError(f"p{i + 1} equals p{nxt + 1} (gives g{i + 1} = 0)", i + 1)
        g.append((p[i] - p[nxt]) / (spec.a[i] * r[i] ** 3))
    return tuple(g)


def compute_f(
    spec: ProblemSpec, params: GeneralParams, g: Sequence[Fraction]
) -> tuple[Fraction, ...]:
    _check_lengths(spec, params)
    n, q, r = spec.n, params.q, params.r
    for i, gi in enumerate(g, 1):
        if gi == 0:
            raise PreconditionError(f"g{i} must be nonzero", i)
    return tuple(
        (q[i] - q[(i + 1) % n]) / (spec.a[i] * g[i] * r[i] ** 2) for i in range(n)
    )


def compute_uv(
    spec: ProblemSpec,
    params: GeneralParams | N3SpecialParams,
    f: Sequence[Fraction],
    g: Sequence[Fraction],
) -> tuple[Fraction, Fraction]:
    """The (u, v) root of the linear factor left after the u^2 factor is removed."""
    a, r = spec.a, params.r
    u = Fraction(0)
    v = Fraction(0)
    for ai, fi, gi, ri in zip(a, f, g, r):
        f2, g2 = fi * fi, gi * gi
        u += ai * gi * ri * (3 * f2 + g2)
        v -= ai * fi * gi * (f2 + g2)
    return u, v


def assemble_solution(
    spec: ProblemSpec,
    params: Params | None,
    f: Sequence[Fraction],
    g: Sequence[Fraction],
    u: Fraction,
    v: Fraction,
) -> RationalSolution:
    if u == 0:
        raise DegenerateConstructionError("degenerate construction: u = 0")
    r = params.r
    x = tuple((fi + gi) * u + ri * v for fi, gi, ri in zip(f, g, r))
    y = tuple((fi - gi) * u + ri * v for fi, gi, ri in zip(f, g, r))
    return RationalSolution(spec, x, y, tuple(f), tuple(g), u, v, params)


def solve_general(spec: ProblemSpec, params: GeneralParams) -> RationalSolution:
    g = compute_g(spec, params)
    f = compute_f(spec, params, g)
    u, v = compute_uv(spec, params, f, g)
    return assemble_solution(spec, params, f, g, u, v)


def solve_n3_special(spec: ProblemSpec, params: N3SpecialParams) -> RationalSolution:
    """Three-term family with p3 = q3 = 0 and free scalings lam (for f) and mu (for g)."""
    if spec.n != 3:
        raise PreconditionError(f"the three-term family needs n = 3, got n = {spec.n}")
    P = params
    for k, ri in enumerate(P.r, 1):
        if ri == 0:
            raise PreconditionError(f"r{k} must be nonzero", k)
    if P.mu == 0:
        raise PreconditionError("mu must be nonzero")
    if P.p1 == 0:
        raise PreconditionError("p1 must be nonzero", 1)
    if P.p2 == 0:
        raise PreconditionError("p2 must be nonzero", 2)
    s = P.p1 + P.p2
    if s == 0:
        raise PreconditionError("p1 + p2 must be nonzero")
    a1, a2, a3 = spec.a
    r1, r2, r3 = P.r
    f = (
        P.lam * P.p1 * P.p2 * r1 * (P.q1 + P.q2),
        P.lam * P.p1 * P.q2 * r2 * s,
        P.lam * P.p2 * P.q1 * r3 * s,
    )
    g = (
        -P.mu * a2 * a3 * r2**3 * r3**3 * s,
        P.mu * a1 * a3 * P.p2 * r1**3 * r3**3,
        P.mu * a1 * a2 * P.p1 * r1**3 * r2**3,
    )
    u, v = compute_uv(spec, P, f, g)
    return assemble_solution(spec, P, f, g, u, v)


def normalize_params(spec: ProblemSpec, params: GeneralParams) -> GeneralParams:
    """Rescale p and q so that g and f become coprime integer vectors.

    Scaling p by 1/c_g divides g by c_g; scaling q by 1/(c_f c_g) then
    divides f by c_f.  The result is another point of the same family.
    """
    g = compute_g(spec, params)
    f = compute_f(spec, params, g)
    c_g = rational_content(g)
    c_f = rational_content(f)
    return GeneralParams(
        tuple(pi / c_g for pi in params.p),
        tuple(qi / (c_f * c_g) for qi in params.q),
        params.r,
    )


# -- checks ------------------------------------------------------------------


def side_sums(spec: ProblemSpec, x: Sequence[Number], y: Sequence[Number]) -> tuple[Fraction, Fraction]:
    if len(x) != spec.n or len(y) != spec.n:
        raise PreconditionError(
            f"expected {spec.n} values per side, got {len(x)} and {len(y)}"
        )
    lhs = sum((ai * Fraction(xi) ** 4 for ai, xi in zip(spec.a, x)), Fraction(0))
    rhs = sum((ai * Fraction(yi) ** 4 for ai, yi in zip(spec.a, y)), Fraction(0))
    return lhs, rhs


def verify_equation(spec: ProblemSpec, x: Sequence[Number], y: Sequence[Number]) -> bool:
    lhs, rhs = side_sums(spec, x, y)
    return lhs == rhs


def classify(a: Sequence[int], x: Sequence[Number], y: Sequence[Number]) -> TrivialityFlags:
    equals = tuple(xi == yi for xi, yi in zip(x, y))
    negated = tuple(xi == -yi for xi, yi in zip(x, y))
    lhs = Counter((ai, abs(xi)) for ai, xi in zip(a, x))
    rhs = Counter((ai, abs(yi)) for ai, yi in zip(a, y))
    return TrivialityFlags(equals, negated, lhs == rhs)


def nontriviality_check(sol: RationalSolution | IntegerSolution) -> TrivialityFlags:
    """Flags for a solution.

    Integer solutions are sign-free, so their flags are the ones recorded
    from the signed values at reduction time.
    """
    if isinstance(sol, IntegerSolution):
        return sol.flags
    return classify(sol.spec.a, sol.x, sol.y)


def to_primitive(sol: RationalSolution | IntegerSolution) -> IntegerSolution:
    """Clear denominators, divide out the gcd, drop signs, order the sides."""
    values = [Fraction(v) for v in sol.x + sol.y]
    scale = lcm_all(v.denominator for v in values)
    ints = [int(v * scale) for v in values]
    try:
        common = gcd_all(ints)
    except NoPrimitiveForm:
        raise NoPrimitiveForm("no primitive form: the solution is identically zero") from None
    n = sol.spec.n
    signed_x = [v // common for v in ints[:n]]
    signed_y = [v // common for v in ints[n:]]
    flags = nontriviality_check(sol) if isinstance(sol, IntegerSolution) else classify(sol.spec.a, signed_x, signed_y)
    x = tuple(abs(v) for v in signed_x)
    y = tuple(abs(v) for v in signed_y)
    if y < x:
        x, y = y, x
    return IntegerSolution(sol.spec, x, y, flags, sol.params)
