"""Exhaustive verification of low-weight error correction.

Under the all-zero codeword every error pattern is a set of flipped variable
nodes.  ``verify_guarantee`` decodes all patterns up to a given weight and
reports any that are not corrected within the iteration cap.  Weight-three
patterns are also classified by the shape of the subgraph they induce.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .decoders import (
    DecodeResult,
    DecoderRule,
    TwoBitMessage,
    TwoBitRule,
    decode_batch,
    iterate_decoder,
)
from .graph import TannerGraph, as_subset

__all__ = [
    "ErrorPattern",
    "GuaranteeReport",
    "MessageTrace",
    "UnclassifiablePattern",
    "verify_guarantee",
    "classify_pattern",
    "trace_messages",
    "CASE_NAMES",
]

CASE_NAMES = {
    1: "no shared checks",
    2: "one pair shares a check",
    3: "one check shared by all three",
    4: "chain: two pairs share distinct checks",
    5: "triangle: three pairs share three distinct checks",
}


@dataclass(frozen=True)
class ErrorPattern:
    flipped_variables: tuple[int, ...]

    @classmethod
    def of(cls, g: TannerGraph, members) -> "ErrorPattern":
        return cls(as_subset(g, members))

    @property
    def weight(self) -> int:
        return len(self.flipped_variables)

    def as_vector(self, n: int) -> np.ndarray:
        x = np.zeros(n, dtype=np.uint8)
        x[list(self.flipped_variables)] = 1
        return x


@dataclass
class GuaranteeReport:
    all_corrected: bool
    failures: list[tuple[ErrorPattern, DecodeResult]] = field(default_factory=list)
    patterns_checked: int = 0
    classified_counts: dict[int, int] = field(default_factory=dict)
    unclassifiable: int = 0
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "all_corrected": self.all_corrected,
            "patterns_checked": self.patterns_checked,
            "truncated": self.truncated,
            "classified_counts": {str(k): v for k, v in sorted(self.classified_counts.items())},
            "unclassifiable": self.unclassifiable,
            "failures": [
                {
                    "pattern": list(p.flipped_variables),
                    "converged": bool(r.converged),
                    "iterations": int(r.iterations_used),
                    "estimate_support": np.flatnonzero(r.final_estimate).tolist(),
                }
                for p, r in self.failures
            ],
        }


class UnclassifiablePattern(ValueError):
    """Two flipped variables share more than one check (a 4-cycle)."""


def classify_pattern(g: TannerGraph, p: ErrorPattern | tuple[int, ...]) -> int:
    """Case label 1..5 of a weight-three pattern from the checks its pairs share."""
    members = p.flipped_variables if isinstance(p, ErrorPattern) else tuple(p)
    if len(members) != 3 or len(set(members)) != 3:
        raise ValueError("classification needs exactly three distinct variables")
    checks = [set(g.var_adjacency[v]) for v in members]
    shared = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        common = checks[i] & checks[j]
        if len(common) > 1:
            raise UnclassifiablePattern(
                f"variables {members[i]} and {members[j]} share checks {sorted(common)}"
            )
        shared.extend(common)
    if len(shared) == 3:
        return 3 if len(set(shared)) == 1 else 5
    return {0: 1, 1: 2, 2: 4}[len(shared)]


def _patterns(n: int, weight: int):
    for k in range(weight + 1):
        yield from itertools.combinations(range(n), k)


def _decode_chunk(args):
    g, rule, cap, patterns = args
    n = g.n_variables
    r = np.zeros((len(patterns), n), dtype=np.uint8)
    for i, p in enumerate(patterns):
        r[i, list(p)] = 1
    res = decode_batch(rule, g, r, max_iterations=cap)
    bad = np.flatnonzero(res.first_zero == 0)
    return [
        (patterns[i], DecodeResult(bool(res.converged[i]), int(res.iterations[i]), res.estimates[i]))
        for i in bad
    ]


def verify_guarantee(
    g: TannerGraph,
    rule: DecoderRule | None = None,
    weight: int = 3,
    iteration_cap: int = 3,
    first_failure: bool = False,
    workers: int = 1,
    chunk: int = 8192,
) -> GuaranteeReport:
    """Decode every pattern of weight ``0..weight`` and collect the failures.

    A pattern counts as corrected when the estimate equals the all-zero word
    at some iteration up to ``iteration_cap``.  Patterns are enumerated in
    lexicographic order within each weight; with ``first_failure`` the run
    stops after the chunk containing the first failure and reports only it.
    """
    rule = rule or TwoBitRule(2, 2, 1)
    if weight < 0 or iteration_cap < 1:
        raise ValueError("weight must be >= 0 and iteration_cap >= 1")
    if not g.is_left_regular():
        raise ValueError("verification requires a left-regular graph")
    gen = _patterns(g.n_variables, weight)
    jobs = []
    while True:
        block = list(itertools.islice(gen, chunk))
        if not block:
            break
        jobs.append((g, rule, iteration_cap, block))

    failures: list = []
    checked = 0
    truncated = False
    if workers > 1 and len(jobs) > 1 and not first_failure:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, found in zip(jobs, pool.map(_decode_chunk, jobs)):
                checked += len(job[3])
                failures.extend(found)
    else:
        for job in jobs:
            found = _decode_chunk(job)
            checked += len(job[3])
            failures.extend(found)
            if first_failure and found:
                failures = found[:1]
                truncated = checked < sum(comb(g.n_variables, k) for k in range(weight + 1))
                break

    counts: Counter = Counter()
    unclassifiable = 0
    if weight >= 3 and not truncated:
        for p in itertools.combinations(range(g.n_variables), 3):
            try:
                counts[classify_pattern(g, p)] += 1
            except UnclassifiablePattern:
                unclassifiable += 1
    return GuaranteeReport(
        all_corrected=not failures,
        failures=[(ErrorPattern(tuple(p)), r) for p, r in failures],
        patterns_checked=checked,
        classified_counts=dict(sorted(counts.items())),
        unclassifiable=unclassifiable,
        truncated=truncated,
    )


@dataclass
class MessageTrace:
    """Per-iteration edge messages; edges are in variable-major order."""

    edge_vars: np.ndarray
    edge_checks: np.ndarray
    v2c: list[np.ndarray]
    c2v: list[np.ndarray]
    estimates: list[np.ndarray]
    labels: tuple[str, ...] | None = None

    def corrected_at(self) -> int | None:
        for j, est in enumerate(self.estimates, start=1):
            if not est.any():
                return j
        return None

    def incoming(self, iteration: int, v: int) -> list:
        """Check-to-variable messages into ``v`` at ``iteration``."""
        sel = self.edge_vars == v
        vals = self.c2v[iteration - 1][sel]
        return [self.labels[x] for x in vals] if self.labels else vals.tolist()

    def outgoing(self, iteration: int, v: int) -> list:
        sel = self.edge_vars == v
        vals = self.v2c[iteration - 1][sel]
        return [self.labels[x] for x in vals] if self.labels else vals.tolist()

    def format(self, variables=None) -> str:
        variables = sorted(set(self.edge_vars.tolist())) if variables is None else variables
        lines = []
        for j in range(1, len(self.estimates) + 1):
            lines.append(f"iteration {j}")
            for v in variables:
                checks = self.edge_checks[self.edge_vars == v].tolist()
                lines.append(
                    f"  v{v}: out {self.outgoing(j, v)} in {self.incoming(j, v)} "
                    f"checks {checks} -> {int(self.estimates[j - 1][v])}"
                )
        return "\n".join(lines)


def trace_messages(
    g: TannerGraph, rule: DecoderRule, p: ErrorPattern | tuple[int, ...], iterations: int = 3
) -> MessageTrace:
    """Replay decoding of a pattern for ``iterations`` and keep every edge message."""
    members = p.flipped_variables if isinstance(p, ErrorPattern) else tuple(p)
    r = np.zeros(g.n_variables, dtype=np.uint8)
    r[list(members)] = 1
    v2c, c2v, est = [], [], []
    for _, e, a, b in iterate_decoder(rule, g, r[None, :], iterations):
        v2c.append(a[0].copy())
        c2v.append(b[0].copy())
        est.append(e[0].copy())
    labels = tuple(m.label for m in TwoBitMessage) if isinstance(rule, TwoBitRule) else None
    return MessageTrace(g.edge_vars, g.edge_checks, v2c, c2v, est, labels)
