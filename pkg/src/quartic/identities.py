"""Certification of the algebra behind the construction.

Two identities are checked symbolically in the polynomial ring:

* substituting x_i, y_i into sum a_i (x_i^4 - y_i^4) gives exactly
  8u (A u^3 + B u^2 v + 3C u v^2 + D v^3);
* the cyclic sums of (p_i - p_{i+1}) and (q_i - q_{i+1}) vanish, which is
  what D and C become once g and f are chosen.

The remaining step (f carries g in its denominator) is checked on random
rational points by running the whole pipeline and evaluating the equation
directly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .construction import (
    DegenerateConstructionError,
    GeneralParams,
    ProblemSpec,
    classify,
    solve_general,
    to_primitive,
    verify_equation,
)
from .numeric import gcd_all
from .polyring import Poly, PolyRing

__all__ = [
    "CertificationReport",
    "CubicFormCoeffs",
    "build_quartic_difference",
    "build_cubic_form_coeffs",
    "verify_expansion_identity",
    "verify_telescoping",
    "random_identity_trial",
    "n2_triviality_trial",
    "draw_rational",
    "draw_general_params",
]


@dataclass
class CertificationReport:
    identity: str
    n: int
    status: str
    trials: int = 0
    degenerate: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "certified"

    def to_dict(self) -> dict[str, Any]:
        out = {
            "identity": self.identity,
            "n": self.n,
            "status": self.status,
            "trials": self.trials,
            "degenerate": self.degenerate,
        }
        out.update(self.details)
        return out


@dataclass(frozen=True)
class CubicFormCoeffs:
    """Coefficients of u^3, u^2 v, 3 u v^2 and v^3 in the substituted equation."""

    A: Poly
    B: Poly
    C: Poly
    D: Poly


def _require_n(n: int, minimum: int) -> None:
    if not isinstance(n, int) or n < minimum:
        raise ValueError(f"n must be an integer >= {minimum}, got {n!r}")


def build_quartic_difference(n: int, ring: PolyRing | None = None) -> Poly:
    _require_n(n, 2)
    R = ring or PolyRing.construction(n)
    u, v = R.var("u"), R.var("v")
    total = R.zero
    for i in range(1, n + 1):
        a, f, g, r = (R.var(role, i) for role in "afgr")
        x = (f + g) * u + r * v
        y = (f - g) * u + r * v
        total = total + a * (x**4 - y**4)
    return total


def build_cubic_form_coeffs(n: int, ring: PolyRing | None = None) -> CubicFormCoeffs:
    _require_n(n, 2)
    R = ring or PolyRing.construction(n)
    A = B = C = D = R.zero
    for i in range(1, n + 1):
        a, f, g, r = (R.var(role, i) for role in "afgr")
        A = A + a * f * g * (f**2 + g**2)
        B = B + a * g * r * (3 * f**2 + g**2)
        C = C + a * f * g * r**2
        D = D + a * g * r**3
    return CubicFormCoeffs(A, B, C, D)


def verify_expansion_identity(n: int) -> CertificationReport:
    R = PolyRing.construction(n)
    lhs = build_quartic_difference(n, R)
    k = build_cubic_form_coeffs(n, R)
    u, v = R.var("u"), R.var("v")
    rhs = 8 * u * (k.A * u**3 + k.B * u**2 * v + 3 * k.C * u * v**2 + k.D * v**3)
    residual = lhs - rhs
    return CertificationReport(
        "expansion",
        n,
        "certified" if residual.is_zero() else "failed",
        details={"monomials": len(lhs), "residual_monomials": len(residual)},
    )


def verify_telescoping(n: int) -> CertificationReport:
    _require_n(n, 2)
    R = PolyRing.cyclic(n)
    sums = {}
    for role in "pq":
        s = R.zero
        for i in range(1, n + 1):
            s = s + R.var(role, i) - R.var(role, i % n + 1)
        sums[role] = s
    ok = all(s.is_zero() for s in sums.values())
    return CertificationReport(
        "telescoping",
        n,
        "certified" if ok else "failed",
        details={"p_sum_zero": sums["p"].is_zero(), "q_sum_zero": sums["q"].is_zero()},
    )


# -- randomized pipeline checks ----------------------------------------------


def draw_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _draw_nonzero_int(rng: random.Random, bound: int) -> int:
    while True:
        value = rng.randint(-bound, bound)
        if value:
            return value


def _draw_nonzero_rational(rng: random.Random, bound: int) -> Fraction:
    while True:
        value = draw_rational(rng, bound)
        if value:
            return value


def draw_general_params(rng: random.Random, n: int, bound: int) -> tuple[GeneralParams, int]:
    """Random valid parameters; returns them with the number of rejected p draws."""
    redrawn = 0
    while True:
        p = [draw_rational(rng, bound) for _ in range(n)]
        if all(p[i] != p[(i + 1) % n] for i in range(n)):
            break
        redrawn += 1
    q = [draw_rational(rng, bound) for _ in range(n)]
    r = [_draw_nonzero_rational(rng, bound) for _ in range(n)]
    return GeneralParams(p, q, r), redrawn


def _primitive_ok(sol) -> bool:
    prim = to_primitive(sol)
    return (
        gcd_all(prim.x + prim.y) == 1
        and verify_equation(prim.spec, prim.x, prim.y)
        and to_primitive(prim) == prim
    )


def random_identity_trial(
    n: int, seed: int = 0, bound: int = 1000, trials: int = 100
) -> CertificationReport:
    """Run the full construction on random rational points and check the equation.

    A trial is degenerate when u = 0; it is counted and skipped.
    """
    _require_n(n, 3)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rng = random.Random(seed)
    tally = dict.fromkeys(
        ("passed", "failed", "redrawn", "equals", "negated", "signed_permutation",
         "fully_nontrivial", "primitive_failed"), 0
    )
    degenerate = 0
    for _ in range(trials):
        spec = ProblemSpec(tuple(_draw_nonzero_int(rng, bound) for _ in range(n)))
        params, redrawn = draw_general_params(rng, n, bound)
        tally["redrawn"] += redrawn
        try:
            sol = solve_general(spec, params)
        except DegenerateConstructionError:
            degenerate += 1
            continue
        good = verify_equation(spec, sol.x, sol.y) and all(
            xi - yi == 2 * gi * sol.u and xi + yi == 2 * (fi * sol.u + ri * sol.v)
            for xi, yi, fi, gi, ri in zip(sol.x, sol.y, sol.f, sol.g, params.r)
        )
        tally["passed" if good else "failed"] += 1
        flags = classify(spec.a, sol.x, sol.y)
        tally["equals"] += any(flags.equals)
        tally["negated"] += any(flags.negated)
        tally["signed_permutation"] += flags.signed_permutation
        tally["fully_nontrivial"] += flags.fully_nontrivial
        tally["primitive_failed"] += not _primitive_ok(sol)
    ok = tally["failed"] == 0 and tally["equals"] == 0 and tally["primitive_failed"] == 0
    return CertificationReport(
        "random_pipeline", n, "certified" if ok else "failed", trials, degenerate, tally
    )


def n2_triviality_trial(seed: int = 0, bound: int = 1000, trials: int = 500) -> CertificationReport:
    """For n = 2 every construction collapses to x_i = -y_i with f_i u + r_i v = 0."""
    rng = random.Random(seed)
    collapsed = broken = degenerate = 0
    for _ in range(trials):
        spec = ProblemSpec((_draw_nonzero_int(rng, bound), _draw_nonzero_int(rng, bound)))
        params, _ = draw_general_params(rng, 2, bound)
        try:
            sol = solve_general(spec, params)
        except DegenerateConstructionError:
            degenerate += 1
            continue
        if all(
            xi == -yi and fi * sol.u + ri * sol.v == 0
            for xi, yi, fi, ri in zip(sol.x, sol.y, sol.f, params.r)
        ):
            collapsed += 1
        else:
            broken += 1
    return CertificationReport(
        "n2_forced_triviality",
        2,
        "certified" if broken == 0 else "failed",
        trials,
        degenerate,
        {"collapsed": collapsed, "counterexamples": broken},
    )
