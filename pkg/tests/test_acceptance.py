"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line for each.
"""
import json
import random
import time
from fractions import Fraction

import pytest
from click.testing import CliRunner

from quartic.cli import main
from quartic.construction import (
    GeneralParams,
    N3SpecialParams,
    ProblemSpec,
    nontriviality_check,
    solve_general,
    solve_n3_special,
    to_primitive,
    verify_equation,
)
from quartic.identities import build_quartic_difference, n2_triviality_trial
from quartic.numeric import gcd_all
from quartic.polyring import PolyRing, make_var

runner = CliRunner()


def cli(*args):
    start = time.perf_counter()
    res = runner.invoke(main, list(args), catch_exceptions=False)
    return res, time.perf_counter() - start


@pytest.fixture(scope="module")
def identity_runs():
    out = {}
    start = time.perf_counter()
    for n in (3, 4, 5, 6):
        res, _ = cli("identity", "--n", str(n), "--trials", "1000", "--seed", str(n))
        out[n] = (res.exit_code, json.loads(res.stdout))
    for n in (2,):
        res, _ = cli("identity", "--n", str(n), "--symbolic-only")
        out[n] = (res.exit_code, json.loads(res.stdout))
    out["elapsed"] = time.perf_counter() - start
    return out


def test_criterion_1_reference_n3_fixture():
    """criterion 1: solve3 reproduces 6707,12802,3237 | 11227,6474,4141 exactly in < 1 s"""
    res, elapsed = cli("solve3", "--coeffs", "1,1,61", "--p", "61,-56", "--q", "61,-21",
                       "--r", "1,2,-1", "--lambda", "1/4270", "--mu", "1/488")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    sides = {tuple(out["x"]), tuple(out["y"])}
    assert sides == {("6707", "12802", "3237"), ("11227", "6474", "4141")}
    assert elapsed < 1.0


def test_criterion_2_reference_n4_fixture():
    """criterion 2: solve reproduces 576,220,527,159 | 600,416,453,37 with audit g, f, u, v in < 1 s"""
    res, elapsed = cli("solve", "--coeffs", "1,1,1,19", "--p", "10,4,-4,-9", "--q", "1,-2,6,1",
                       "--r", "1,2,1,-1")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert {tuple(out["x"]), tuple(out["y"])} == {("576", "220", "527", "159"), ("600", "416", "453", "37")}
    assert out["audit"]["g"] == ["6", "1", "5", "1"]
    assert out["audit"]["f"] == ["1/2", "-2", "1", "0"]
    assert (out["audit"]["u"], out["audit"]["v"]) == ("735/2", "-915/4")
    assert elapsed < 1.0


def test_criterion_3_identity_suite(identity_runs):
    """criterion 3: 1000 random trials for n=3..6 all satisfy the equation; symbolic identities for n=2..5; < 60 s"""
    for n in (3, 4, 5, 6):
        code, out = identity_runs[n]
        assert code == 0 and out["status"] == "certified"
        trial = out["checks"][2]
        assert trial["trials"] == 1000
        assert trial["failed"] == 0
        assert trial["passed"] == 1000 - trial["degenerate"]
    for n in (2, 3, 4, 5):
        _, out = identity_runs[n]
        by_name = {c["identity"]: c for c in out["checks"]}
        assert by_name["expansion"]["status"] == "certified"
        assert by_name["telescoping"]["p_sum_zero"] and by_name["telescoping"]["q_sum_zero"]
    assert identity_runs["elapsed"] < 60.0


def test_criterion_4_n2_forced_triviality():
    """criterion 4: 500 random n=2 parameter sets all give x_i = -y_i and f_i u + r_i v = 0"""
    report = n2_triviality_trial(seed=2024, bound=1000, trials=500)
    assert report.details["counterexamples"] == 0
    assert report.details["collapsed"] + report.degenerate == 500
    assert report.details["collapsed"] > 0


def test_criterion_5_nontriviality_soundness(identity_runs):
    """criterion 5: no trial has x_i = y_i; x_i = -y_i is flagged; the p=(2,1,0) instance is flagged"""
    for n in (3, 4, 5, 6):
        trial = identity_runs[n][1]["checks"][2]
        assert trial["equals"] == 0
        assert trial["fully_nontrivial"] == trial["passed"] - trial["negated"]
    spec = ProblemSpec((1, 1, 1))
    sol = solve_general(spec, GeneralParams((2, 1, 0), (1, 0, 0), (1, 1, 1)))
    flags = nontriviality_check(sol)
    assert flags.negated == (False, False, True)
    assert not any(flags.equals)
    assert flags.signed_permutation and not flags.fully_nontrivial


def test_criterion_6_primitive_reduction(identity_runs):
    """criterion 6: primitive forms have gcd 1, satisfy the equation and are idempotent"""
    for n in (3, 4, 5, 6):
        assert identity_runs[n][1]["checks"][2]["primitive_failed"] == 0
    fixtures = [
        solve_n3_special(ProblemSpec((1, 1, 61)), N3SpecialParams(
            61, -56, 61, -21, 1, 2, -1, lam=Fraction(1, 4270), mu=Fraction(1, 488))),
        solve_general(ProblemSpec((1, 1, 1, 19)),
                      GeneralParams((10, 4, -4, -9), (1, -2, 6, 1), (1, 2, 1, -1))),
    ]
    for sol in fixtures:
        prim = to_primitive(sol)
        assert gcd_all(prim.x + prim.y) == 1
        assert verify_equation(prim.spec, prim.x, prim.y)
        assert to_primitive(prim) == prim


def test_criterion_7_desk_scale_search():
    """criterion 7: 50 000-draw search finds a nontrivial primitive solution <= 20000 in < 120 s, deterministically"""
    args = ["search", "--coeffs", "1,1,61", "--mode", "random", "--budget", "50000", "--seed", "1",
            "--range=-61..61", "--r-range=-2..2", "--height-bound", "20000"]
    first, t1 = cli(*args, "--lanes", "1")
    again, _ = cli(*args, "--lanes", "1")
    four, t4 = cli(*args, "--lanes", "4")
    assert first.exit_code == again.exit_code == four.exit_code == 0
    assert t1 < 120.0 and t4 < 120.0
    assert first.stdout == again.stdout
    assert first.stdout == four.stdout
    out = json.loads(first.stdout)
    assert out["solutions"]
    spec = ProblemSpec((1, 1, 61))
    for sol in out["solutions"]:
        x = [int(v) for v in sol["x"]]
        y = [int(v) for v in sol["y"]]
        assert sol["flags"]["fully_nontrivial"] and not sol["flags"]["signed_permutation"]
        assert gcd_all(x + y) == 1 and verify_equation(spec, x, y)
        assert max(x + y) <= 20000


def _rand_poly(rng, ring, variables):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        powers = frozenset((v, rng.randint(1, 3)) for v in rng.sample(variables, rng.randint(0, 2)))
        terms[powers] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return ring.from_terms(terms)


def test_criterion_8_ring_laws():
    """criterion 8: ring laws, evaluation morphism, parity and homogeneity on 200 random instances each"""
    rng = random.Random(8)
    variables = [make_var("a", 1), make_var("f", 1), make_var("g", 2), make_var("u")]
    ring = PolyRing(variables)
    for _ in range(200):
        p, q, r = (_rand_poly(rng, ring, variables) for _ in range(3))
        pt = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for v in variables}
        assert (p + q) + r == p + (q + r) and (p * q) * r == p * (q * r)
        assert p + q == q + p and p * q == q * p
        assert p * (q + r) == p * q + p * r
        assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
        assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)
    quartics = {n: (PolyRing.construction(n), build_quartic_difference(n)) for n in (2, 3, 4, 5)}
    for n, (_, Q) in quartics.items():
        assert Q.substitute_sign("g") == -Q
        assert Q.monomial_degrees("uv") == {4} and Q.monomial_degrees("a") == {1}
    for _ in range(200):
        n = rng.choice((2, 3, 4, 5))
        R, Q = quartics[n]
        pt = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for v in R.variables}
        flipped = {v: -x if v.role == "g" else x for v, x in pt.items()}
        s = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        scaled = {v: s * x if v.role in "uv" else x for v, x in pt.items()}
        assert Q.eval(flipped) == -Q.eval(pt)
        assert Q.eval(scaled) == s**4 * Q.eval(pt)
