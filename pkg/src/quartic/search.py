"""Search the parameter space for small primitive nontrivial solutions.

Points are generated up front from the seed (or by grid order), split
into contiguous chunks, and evaluated on independent worker processes.
The merge keeps, for every canonical key, the record found at the
smallest point index, so the ranked output does not depend on how many
lanes were used.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import random
from collections import Counter
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .construction import (
    DegenerateConstructionError,
    GeneralParams,
    IntegerSolution,
    PreconditionError,
    ProblemSpec,
    normalize_params,
    params_from_dict,
    solve_general,
    to_primitive,
    verify_equation,
)

__all__ = [
    "SearchConfig",
    "SolutionRecord",
    "SearchResult",
    "height",
    "canonical_key",
    "generate_points",
    "evaluate_point",
    "run_search",
    "search_minimal",
]

MODES = ("random", "exhaustive")
COUNTERS = ("evaluated", "precondition_skipped", "degenerate", "pruned", "trivial",
            "signed_permutation", "duplicates", "kept")

Point = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def height(sol: IntegerSolution) -> int:
    return max(abs(v) for v in sol.x + sol.y)


def canonical_key(sol: IntegerSolution) -> str:
    return "|".join(",".join(map(str, part)) for part in (sol.spec.a, sol.x, sol.y))


def _per_index(ranges, n: int, name: str) -> tuple[tuple[int, int], ...]:
    """Accept one (lo, hi) pair for all indices or one pair per index."""
    ranges = tuple(ranges)
    if len(ranges) == 2 and all(isinstance(v, int) for v in ranges):
        return ((int(ranges[0]), int(ranges[1])),) * n
    pairs = tuple((int(lo), int(hi)) for lo, hi in ranges)
    if len(pairs) != n:
        raise ValueError(f"{name} needs one range or {n} per-index ranges, got {len(pairs)}")
    return pairs


def _ranges_json(ranges: tuple[tuple[int, int], ...]) -> list[str]:
    return [f"{lo}..{hi}" for lo, hi in ranges]


@dataclass(frozen=True)
class SearchConfig:
    """Search settings.  Ranges are inclusive; give one (lo, hi) for every
    index or a sequence of n pairs.  Zero is never drawn for r."""

    spec: ProblemSpec
    p_range: Sequence
    q_range: Sequence
    r_range: Sequence
    mode: str = "random"
    budget: int = 10_000
    height_bound: int | None = None
    top_k: int = 10
    seed: int = 0
    lanes: int = 1
    normalize: bool = True

    def __post_init__(self):
        n = self.spec.n
        for name in ("p_range", "q_range", "r_range"):
            ranges = _per_index(getattr(self, name), n, name)
            for k, (lo, hi) in enumerate(ranges, 1):
                if lo > hi:
                    raise ValueError(f"{name} for index {k} is empty: {lo}..{hi}")
            object.__setattr__(self, name, ranges)
        if not all(self.r_values):
            raise ValueError("r range contains no nonzero value")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.top_k < 1:
            raise ValueError("top-k must be >= 1")
        if self.lanes < 1:
            raise ValueError("lanes must be >= 1")
        if self.height_bound is not None and self.height_bound < 1:
            raise ValueError("height bound must be >= 1")

    @property
    def r_values(self) -> tuple[tuple[int, ...], ...]:
        """Nonzero candidates for each r_i."""
        return tuple(tuple(v for v in range(lo, hi + 1) if v) for lo, hi in self.r_range)

    def to_dict(self) -> dict[str, Any]:
        """Everything that determines the result; the lane count does not."""
        return {
            "a": [str(c) for c in self.spec.a],
            "p_range": _ranges_json(self.p_range),
            "q_range": _ranges_json(self.q_range),
            "r_range": _ranges_json(self.r_range),
            "mode": self.mode,
            "budget": self.budget,
            "height_bound": None if self.height_bound is None else str(self.height_bound),
            "top_k": self.top_k,
            "seed": self.seed,
            "normalize": self.normalize,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SolutionRecord:
    solution: IntegerSolution
    point: GeneralParams | None = None
    config_digest: str | None = None
    discovered_at: str | None = None

    @property
    def key(self) -> str:
        return canonical_key(self.solution)

    @property
    def height(self) -> int:
        return height(self.solution)

    @property
    def rank(self) -> tuple[int, tuple]:
        return self.height, self.solution.key

    def to_dict(self) -> dict[str, Any]:
        out = self.solution.to_dict()
        out["key"] = self.key
        out["point"] = self.point.to_dict() if self.point else {}
        out["config_digest"] = self.config_digest
        out["discovered_at"] = self.discovered_at
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SolutionRecord:
        sol = IntegerSolution.from_dict(data)
        record = cls(
            sol,
            params_from_dict(data.get("point") or {}),
            data.get("config_digest"),
            data.get("discovered_at"),
        )
        if "key" in data and data["key"] != record.key:
            raise ValueError("stored key does not match the solution")
        return record


@dataclass
class SearchResult:
    config: SearchConfig
    records: list[SolutionRecord]
    report: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "config_digest": self.config.digest(),
            "report": dict(self.report),
            "solutions": [r.to_dict() for r in self.records],
        }


def generate_points(config: SearchConfig) -> Iterator[Point]:
    n = config.spec.n
    p_vals = [range(lo, hi + 1) for lo, hi in config.p_range]
    q_vals = [range(lo, hi + 1) for lo, hi in config.q_range]
    r_vals = config.r_values
    if config.mode == "exhaustive":
        grid = itertools.product(*r_vals, *p_vals, *q_vals)
        for flat in itertools.islice(grid, config.budget):
            yield flat[n:2 * n], flat[2 * n:], flat[:n]
        return
    rng = random.Random(config.seed)
    for _ in range(config.budget):
        p = tuple(rng.randint(lo, hi) for lo, hi in config.p_range)
        q = tuple(rng.randint(lo, hi) for lo, hi in config.q_range)
        r = tuple(rng.choice(vals) for vals in r_vals)
        yield p, q, r


def evaluate_point(
    spec: ProblemSpec,
    point: Point,
    height_bound: int | None = None,
    normalize: bool = True,
) -> tuple[str, IntegerSolution | None]:
    """Classify one grid point; returns (outcome, solution or None)."""
    params = GeneralParams(*point)
    try:
        effective = normalize_params(spec, params) if normalize else params
        sol = to_primitive(solve_general(spec, effective))
    except PreconditionError:
        return "precondition_skipped", None
    except DegenerateConstructionError:
        return "degenerate", None
    if height_bound is not None and height(sol) > height_bound:
        return "pruned", None
    if not sol.flags.fully_nontrivial:
        return "trivial", None
    if sol.flags.signed_permutation:
        return "signed_permutation", None
    if not verify_equation(spec, sol.x, sol.y):  # pragma: no cover - construction is an identity
        raise AssertionError(f"construction produced a non-solution at {point}")
    return "kept", sol


def _run_chunk(spec: ProblemSpec, start: int, points: Sequence[Point],
               height_bound: int | None, normalize: bool):
    counts: Counter[str] = Counter()
    found: dict[tuple, tuple[int, Point, IntegerSolution]] = {}
    for offset, point in enumerate(points):
        outcome, sol = evaluate_point(spec, point, height_bound, normalize)
        counts["evaluated"] += 1
        counts[outcome] += 1
        if sol is not None:
            if sol.key in found:
                counts["duplicates"] += 1
            else:
                found[sol.key] = (start + offset, point, sol)
    return counts, list(found.values())


def _chunks(points: list[Point], pieces: int) -> Iterator[tuple[int, list[Point]]]:
    size = max(1, -(-len(points) // pieces))
    for start in range(0, len(points), size):
        yield start, points[start:start + size]


def run_search(config: SearchConfig) -> SearchResult:
    spec = config.spec
    points = list(generate_points(config))
    args = (spec, config.height_bound, config.normalize)
    if config.lanes == 1 or len(points) < 2:
        outputs = [_run_chunk(spec, 0, points, *args[1:])]
    else:
        with ProcessPoolExecutor(max_workers=config.lanes) as pool:
            futures = [
                pool.submit(_run_chunk, spec, start, chunk, *args[1:])
                for start, chunk in _chunks(points, config.lanes * 4)
            ]
            outputs = [f.result() for f in futures]

    counts: Counter[str] = Counter()
    best: dict[tuple, tuple[int, Point, IntegerSolution]] = {}
    for chunk_counts, found in outputs:
        counts.update(chunk_counts)
        for index, point, sol in found:
            held = best.get(sol.key)
            if held is None:
                best[sol.key] = (index, point, sol)
            else:
                counts["duplicates"] += 1
                if index < held[0]:
                    best[sol.key] = (index, point, sol)
    counts["kept"] = len(best)

    digest = config.digest()
    records = [
        SolutionRecord(sol, GeneralParams(*point), digest)
        for _, point, sol in best.values()
    ]
    records.sort(key=lambda rec: rec.rank)
    report = {name: counts.get(name, 0) for name in COUNTERS}
    return SearchResult(config, records[:config.top_k], report)


def search_minimal(config: SearchConfig) -> list[SolutionRecord]:
    return run_search(config).records
