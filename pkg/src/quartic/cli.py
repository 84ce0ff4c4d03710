"""``quartic`` command line.

Exit codes: 0 success, 2 precondition or usage error, 3 degenerate
construction (u = 0), 4 verification failure.
"""
from __future__ import annotations

import json
import os
import sys

import click

from .construction import (
    DegenerateConstructionError,
    GeneralParams,
    N3SpecialParams,
    PreconditionError,
    ProblemSpec,
    audit_dict,
    side_sums,
    solve_general,
    solve_n3_special,
    to_primitive,
)
from .identities import (
    n2_triviality_trial,
    random_identity_trial,
    verify_expansion_identity,
    verify_telescoping,
)
from .journal import JournalCorruptError, JournalError, best_per_coeffs, journal_append, read_journal
from .numeric import NoPrimitiveForm, format_rational, parse_integer, parse_rational
from .search import SearchConfig, SolutionRecord, run_search

EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_INVALID = 4
JOURNAL_ENV = "QUARTIC_JOURNAL"


class CommandError(click.ClickException):
    def __init__(self, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.exit_code = exit_code


def emit(obj) -> None:
    click.echo(json.dumps(obj, ensure_ascii=False))


def _split(text: str, parse, what: str) -> list:
    try:
        return [parse(item) for item in text.split(",")]
    except ValueError as exc:
        raise CommandError(f"bad {what}: {exc}") from None


def ints(what: str):
    return lambda ctx, param, value: None if value is None else _split(value, parse_integer, what)


def rationals(what: str):
    return lambda ctx, param, value: None if value is None else _split(value, parse_rational, what)


def one_rational(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise CommandError(f"bad --{param.name}: {exc}") from None


def int_range(ctx, param, value):
    if value is None:
        return None
    lo, sep, hi = value.partition("..")
    try:
        if not sep:
            raise ValueError("expected lo..hi")
        lo, hi = parse_integer(lo), parse_integer(hi)
    except ValueError as exc:
        raise CommandError(f"bad range {value!r} for --{param.name}: {exc}") from None
    if lo > hi:
        raise CommandError(f"empty range {value!r} for --{param.name}")
    return lo, hi


def make_spec(coeffs) -> ProblemSpec:
    try:
        return ProblemSpec(tuple(coeffs))
    except PreconditionError as exc:
        raise CommandError(str(exc)) from None


def run_construction(build):
    try:
        return build()
    except PreconditionError as exc:
        raise CommandError(f"precondition violated: {exc}") from None
    except DegenerateConstructionError as exc:
        raise CommandError(str(exc), EXIT_DEGENERATE) from None


def append_or_fail(path, record):
    try:
        return journal_append(path, record)
    except JournalCorruptError as exc:
        raise CommandError(f"corrupt journal: {exc}") from None
    except JournalError as exc:
        raise CommandError(str(exc), EXIT_INVALID) from None


def emit_solution(sol, raw: bool, journal: str | None) -> None:
    if raw:
        emit(sol.to_dict())
        return
    try:
        prim = to_primitive(sol)
    except NoPrimitiveForm as exc:
        raise CommandError(str(exc), EXIT_DEGENERATE) from None
    out = prim.to_dict()
    out["audit"] = audit_dict(sol)
    emit(out)
    if journal:
        result = append_or_fail(journal, SolutionRecord(prim))
        click.echo(f"journal: {result.status} {result.record.key}", err=True)


@click.group()
def main():
    """Construct, verify and search solutions of sum a_i x_i^4 = sum a_i y_i^4."""


@main.command()
@click.option("--coeffs", required=True, callback=ints("--coeffs"), help="a_1,...,a_n")
@click.option("--p", "p", required=True, callback=rationals("--p"))
@click.option("--q", "q", required=True, callback=rationals("--q"))
@click.option("--r", "r", required=True, callback=rationals("--r"))
@click.option("--raw", is_flag=True, help="Print the rational solution without reduction.")
@click.option("--journal", type=click.Path(dir_okay=False), default=None)
def solve(coeffs, p, q, r, raw, journal):
    """Solve with the general n-term family."""
    spec = make_spec(coeffs)
    if not len(p) == len(q) == len(r) == spec.n:
        raise CommandError(f"--p, --q and --r need {spec.n} values each")
    sol = run_construction(lambda: solve_general(spec, GeneralParams(p, q, r)))
    emit_solution(sol, raw, journal)


@main.command()
@click.option("--coeffs", required=True, callback=ints("--coeffs"))
@click.option("--p", "p", required=True, callback=rationals("--p"), help="p1,p2")
@click.option("--q", "q", required=True, callback=rationals("--q"), help="q1,q2")
@click.option("--r", "r", required=True, callback=rationals("--r"), help="r1,r2,r3")
@click.option("--lambda", "lam", default="1", callback=one_rational)
@click.option("--mu", default="1", callback=one_rational)
@click.option("--raw", is_flag=True)
@click.option("--journal", type=click.Path(dir_okay=False), default=None)
def solve3(coeffs, p, q, r, lam, mu, raw, journal):
    """Solve with the simplified three-term family."""
    spec = make_spec(coeffs)
    if spec.n != 3 or len(p) != 2 or len(q) != 2 or len(r) != 3:
        raise CommandError("solve3 needs 3 coefficients, 2 values for --p and --q, 3 for --r")
    params = N3SpecialParams(*p, *q, *r, lam=lam, mu=mu)
    sol = run_construction(lambda: solve_n3_special(spec, params))
    emit_solution(sol, raw, journal)


def _load_solution_json(source: str):
    stream = sys.stdin if source == "-" else open(source, encoding="utf-8")
    try:
        data = json.load(stream)
    except json.JSONDecodeError as exc:
        raise CommandError(f"cannot parse solution JSON: {exc}") from None
    finally:
        if stream is not sys.stdin:
            stream.close()
    try:
        a = [parse_integer(str(c)) for c in data["a"]]
        x = [parse_rational(str(v)) for v in data["x"]]
        y = [parse_rational(str(v)) for v in data["y"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CommandError(f"solution JSON lacks a, x, y: {exc}") from None
    return a, x, y


@main.command()
@click.option("--coeffs", callback=ints("--coeffs"))
@click.option("--x", "x", callback=rationals("--x"))
@click.option("--y", "y", callback=rationals("--y"))
@click.option("--json", "json_source", default=None, help="Read a, x, y from a solution JSON file ('-' for stdin).")
def verify(coeffs, x, y, json_source):
    """Check the equation directly."""
    if json_source is not None:
        coeffs, x, y = _load_solution_json(json_source)
    if coeffs is None or x is None or y is None:
        raise CommandError("need --coeffs, --x and --y (or --json)")
    spec = make_spec(coeffs)
    try:
        lhs, rhs = side_sums(spec, x, y)
    except PreconditionError as exc:
        raise CommandError(str(exc)) from None
    if lhs == rhs:
        click.echo("VALID")
        return
    click.echo("INVALID")
    click.echo(f"lhs = {format_rational(lhs)}")
    click.echo(f"rhs = {format_rational(rhs)}")
    sys.exit(EXIT_INVALID)


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--trials", type=click.IntRange(min=0), default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bound", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--symbolic-only", is_flag=True)
@click.option("--random-only", is_flag=True)
def identity(n, trials, seed, bound, symbolic_only, random_only):
    """Certify the identities the construction rests on."""
    if symbolic_only and random_only:
        raise CommandError("--symbolic-only and --random-only are exclusive")
    if n < 2:
        raise CommandError("n must be >= 2")
    if random_only and n < 3:
        raise CommandError("the random pipeline check needs n >= 3")
    checks = []
    if not random_only:
        checks += [verify_expansion_identity(n), verify_telescoping(n)]
    if not symbolic_only:
        if n >= 3:
            checks.append(random_identity_trial(n, seed=seed, bound=bound, trials=trials))
        else:
            checks.append(n2_triviality_trial(seed=seed, bound=bound, trials=trials))
    ok = all(c.ok for c in checks)
    emit({"n": n, "status": "certified" if ok else "failed", "checks": [c.to_dict() for c in checks]})
    if not ok:
        sys.exit(EXIT_INVALID)


@main.command()
@click.option("--coeffs", required=True, callback=ints("--coeffs"))
@click.option("--range", "pq_range", default="-10..10", show_default=True, callback=int_range,
              help="Inclusive lo..hi for every p_i and q_i.")
@click.option("--r-range", default="-2..2", show_default=True, callback=int_range,
              help="Inclusive lo..hi for r_i; zero is skipped.")
@click.option("--mode", type=click.Choice(["random", "exhaustive"]), default="random", show_default=True)
@click.option("--budget", type=click.IntRange(min=0), default=10_000, show_default=True)
@click.option("--top", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--height-bound", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--lanes", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--no-normalize", is_flag=True, help="Use raw integer points without rescaling f and g.")
@click.option("--journal", type=click.Path(dir_okay=False), default=None)
def search(coeffs, pq_range, r_range, mode, budget, top, height_bound, seed, lanes, no_normalize, journal):
    """Look for small primitive nontrivial solutions."""
    spec = make_spec(coeffs)
    try:
        config = SearchConfig(
            spec, pq_range, pq_range, r_range, mode=mode, budget=budget, height_bound=height_bound,
            top_k=top, seed=seed, lanes=lanes, normalize=not no_normalize,
        )
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    result = run_search(config)
    emit(result.to_dict())
    if journal:
        for record in result.records:
            outcome = append_or_fail(journal, record)
            click.echo(f"journal: {outcome.status} {record.key}", err=True)


@main.command()
@click.argument("action", type=click.Choice(["list", "best"]))
@click.option("--path", type=click.Path(dir_okay=False), default=None,
              help=f"Journal file; defaults to ${JOURNAL_ENV}.")
@click.option("--coeffs", callback=ints("--coeffs"), default=None)
def journal(action, path, coeffs):
    """List journal records, or the lowest-height record per coefficient vector."""
    path = path or os.environ.get(JOURNAL_ENV)
    if not path:
        raise CommandError(f"no journal path: pass --path or set {JOURNAL_ENV}")
    try:
        records = read_journal(path)
    except JournalCorruptError as exc:
        raise CommandError(f"corrupt journal: {exc}") from None
    except OSError as exc:
        raise CommandError(f"cannot read journal: {exc}") from None
    if coeffs is not None:
        records = [rec for rec in records if list(rec.solution.spec.a) == coeffs]
    if action == "best":
        records = list(best_per_coeffs(records).values())
    for rec in records:
        emit(rec.to_dict())


if __name__ == "__main__":  # pragma: no cover
    main()
