"""Expansion certification of Tanner graphs and fixture construction.

An expansion condition ``s→b`` requires every set of ``s`` variable nodes to
have at least ``b`` distinct check neighbours.  The checker searches for
violating subsets with a reverse search whose pruning is exact.

Let the *excess* of a variable set ``T`` be ``Σ deg(v) - |N(T)|`` and let
``δ_T(v)`` be the number of checks of ``v`` that touch another member of
``T``.  Removing ``v`` lowers the excess by exactly ``δ_T(v)``, and
``Σ_v δ_T(v) ≤ 2·excess(T)``.  Every set therefore has a member whose removal
costs at most ``⌊2·excess/|T|⌋``.  Taking ``parent(T) = T - argmin δ`` (ties to
the largest index) arranges all subsets in a tree in which excess can fall
by at most that amount per level, which gives a per-level excess floor below
which no descendant can violate any condition.  The search covers
disconnected subsets too.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import TannerGraph

__all__ = [
    "ExpansionConditionSet",
    "ExpansionReport",
    "FixtureError",
    "check_expansion",
    "check_girth6",
    "excess_floors",
    "construct_fixture",
    "random_girth6_graph",
    "FIXTURE_KINDS",
    "GADGETS",
    "Gadget",
    "default_checks",
]

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class ExpansionConditionSet:
    """Sorted ``(subset_size, min_neighbors)`` pairs plus an optional girth requirement."""

    conditions: tuple[tuple[int, int], ...]
    require_girth6: bool = True
    name: str = "custom"

    def __post_init__(self):
        conds = tuple(sorted((int(s), int(b)) for s, b in self.conditions))
        sizes = [s for s, _ in conds]
        if len(set(sizes)) != len(sizes):
            raise ValueError("condition sizes must be distinct")
        if any(s < 1 or b < 0 for s, b in conds):
            raise ValueError("condition sizes must be positive and bounds non-negative")
        object.__setattr__(self, "conditions", conds)

    @classmethod
    def theorem1(cls) -> "ExpansionConditionSet":
        """Conditions under which (2,2,1) corrects three errors in three iterations."""
        return cls(((4, 11), (5, 12), (6, 14), (8, 16), (9, 18)), True, "theorem1")

    @classmethod
    def gallager_b(cls) -> "ExpansionConditionSet":
        """Three-error conditions for Gallager B on column-weight-four codes."""
        return cls(((4, 11), (5, 12), (6, 14), (7, 16), (8, 18)), True, "gallagerB-08CKVM")

    @classmethod
    def parse(cls, text: str) -> "ExpansionConditionSet":
        """``theorem1``, ``gallagerB-08CKVM`` or ``custom:4:11,5:12,...``."""
        key = text.strip()
        if key == "theorem1":
            return cls.theorem1()
        if key.lower() in ("gallagerb-08ckvm", "gallagerb"):
            return cls.gallager_b()
        if key.startswith("custom:"):
            pairs = []
            for item in key[len("custom:"):].split(","):
                try:
                    s, b = item.split(":")
                    pairs.append((int(s), int(b)))
                except ValueError:
                    raise ValueError(f"bad condition {item!r}; expected size:bound") from None
            if not pairs:
                raise ValueError("custom condition set is empty")
            return cls(tuple(pairs), True, "custom")
        raise ValueError(f"unknown condition set {text!r}")

    @property
    def max_size(self) -> int:
        return max((s for s, _ in self.conditions), default=0)

    def bound(self, size: int) -> int | None:
        return dict(self.conditions).get(size)

    def restricted(self, sizes) -> "ExpansionConditionSet":
        keep = tuple((s, b) for s, b in self.conditions if s in set(sizes))
        return ExpansionConditionSet(keep, self.require_girth6, self.name)

    def __str__(self) -> str:
        return ",".join(f"{s}->{b}" for s, b in self.conditions)


@dataclass
class ExpansionReport:
    passed: bool
    violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    checked_subset_count: int = 0
    truncated: bool = False
    girth6: bool = True
    four_cycle: tuple[int, int, int, int] | None = None

    def violated_sizes(self) -> list[int]:
        return sorted({len(s) for s, _ in self.violations})

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "truncated": self.truncated,
            "girth6": self.girth6,
            "four_cycle": list(self.four_cycle) if self.four_cycle else None,
            "checked_subset_count": self.checked_subset_count,
            "violations": [{"subset": list(s), "neighbors": k} for s, k in self.violations],
        }


def check_girth6(g: TannerGraph) -> tuple[bool, tuple[int, int, int, int] | None]:
    """True iff no two variables share two checks; otherwise a witness ``(v0, v1, c0, c1)``."""
    owner: dict[tuple[int, int], int] = {}
    for v, checks in enumerate(g.var_adjacency):
        cs = sorted(checks)
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                key = (cs[i], cs[j])
                if key in owner:
                    return False, (owner[key], v, cs[i], cs[j])
                owner[key] = v
    return True, None


def excess_floors(conds: ExpansionConditionSet, min_degree: int) -> list[int]:
    """Minimum excess a set of each size must have to lie on a path to a violation."""
    smax = conds.max_size
    floors = [np.iinfo(np.int64).max] * (smax + 1)
    for s, b in conds.conditions:
        need = min_degree * s - b + 1
        for k in range(s, 0, -1):
            floors[k] = min(floors[k], need)
            if k >= 2:
                need -= (2 * need) // k
    return [max(0, int(f)) for f in floors]


class _Budget(Exception):
    pass


class _Search:
    """Reverse search over variable subsets; see the module docstring."""

    def __init__(self, g: TannerGraph, conds: ExpansionConditionSet, budget: int, find_all: bool):
        self.va = g.var_adjacency
        self.deg = [len(a) for a in self.va]
        self.n = g.n_variables
        self.bounds = dict(conds.conditions)
        self.smax = conds.max_size
        self.floors = excess_floors(conds, min(self.deg) if self.deg else 0)
        self.budget = budget
        self.find_all = find_all
        mates = [set() for _ in range(self.n)]
        for vs in g.check_adjacency:
            for u in vs:
                mates[u].update(vs)
        self.mates = [sorted(m - {u}) for u, m in enumerate(mates)]
        self.cover = [0] * g.n_checks
        self.members: list[int] = []
        self.nodes = 0
        self.violations: list[tuple[tuple[int, ...], int]] = []
        self.roots_hit: list[int] = []

    def _delta(self, v: int) -> int:
        cover = self.cover
        return sum(cover[c] >= 2 for c in self.va[v])

    def run_roots(self, roots) -> None:
        for v in roots:
            if self.violations and not self.find_all:
                return
            self.root = v
            self._add(v)
            self._visit(0, self.deg[v])
            self._remove(v)

    def _add(self, u: int) -> None:
        for c in self.va[u]:
            self.cover[c] += 1
        self.members.append(u)

    def _remove(self, u: int) -> None:
        for c in self.va[u]:
            self.cover[c] -= 1
        self.members.pop()

    def _visit(self, excess: int, n_nbrs: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget
        members = self.members
        k = len(members)
        b = self.bounds.get(k)
        if b is not None and n_nbrs < b:
            self.violations.append((tuple(sorted(members)), n_nbrs))
            self.roots_hit.append(self.root)
            if not self.find_all:
                return
        if k == self.smax:
            return
        need = self.floors[k + 1] - excess
        if need > 0:
            cands = set()
            for v in members:
                cands.update(self.mates[v])
            cands = sorted(cands.difference(members))
        else:
            in_set = set(members)
            cands = [u for u in range(self.n) if u not in in_set]
        cover, va = self.cover, self.va
        for u in cands:
            a = sum(cover[c] > 0 for c in va[u])
            if a < need:
                continue
            self._add(u)
            du = self._delta(u)
            canonical = True
            for v in members[:-1]:
                dv = self._delta(v)
                if dv < du or (dv == du and v > u):
                    canonical = False
                    break
            if canonical:
                self._visit(excess + a, n_nbrs + self.deg[u] - a)
            self._remove(u)
            if self.violations and not self.find_all:
                return


def _search_chunk(args):
    g, conds, budget, find_all, roots = args
    s = _Search(g, conds, budget, find_all)
    truncated = False
    try:
        s.run_roots(roots)
    except _Budget:
        truncated = True
    return s.violations, s.nodes, truncated, s.roots_hit


def check_expansion(
    g: TannerGraph,
    conds: ExpansionConditionSet | None = None,
    budget: int = DEFAULT_BUDGET,
    find_all: bool = False,
    workers: int = 1,
) -> ExpansionReport:
    """Search for subsets violating ``conds``; stop at the first unless ``find_all``.

    Violations are reported sorted by (size, subset).  With ``find_all`` the
    list is complete and independent of ``workers``; otherwise the reported
    violation is the first one in root order, also independent of
    ``workers``.  Exhausting ``budget`` subset visits sets ``truncated``.
    """
    conds = conds or ExpansionConditionSet.theorem1()
    girth_ok, witness = check_girth6(g)
    if not conds.conditions or g.n_variables == 0:
        passed = girth_ok or not conds.require_girth6
        return ExpansionReport(passed, [], 0, False, girth_ok, witness)
    roots = list(range(g.n_variables))
    if workers > 1:
        chunks = [roots[i::workers] for i in range(workers)]
        jobs = [(g, conds, budget // workers + 1, find_all, ch) for ch in chunks if ch]
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(_search_chunk, jobs))
    else:
        results = [_search_chunk((g, conds, budget, find_all, roots))]
    nodes = sum(r[1] for r in results)
    truncated = any(r[2] for r in results)
    if find_all:
        violations = sorted({v for r in results for v in r[0]}, key=lambda x: (len(x[0]), x[0]))
    else:
        # first violation in root order, as a sequential search would report it
        firsts = [(r[3][0], r[0][0]) for r in results if r[0]]
        violations = [min(firsts)[1]] if firsts else []
    passed = not violations and not truncated and (girth_ok or not conds.require_girth6)
    return ExpansionReport(passed, violations, nodes, truncated, girth_ok, witness)


# --------------------------------------------------------------------------
# fixtures

class FixtureError(RuntimeError):
    pass


def random_girth6_graph(
    n: int,
    m: int,
    gamma: int,
    rng: random.Random,
    seed_edges: list[tuple[int, int]] | None = None,
) -> TannerGraph | None:
    """Progressive edge growth; None if some variable cannot be completed.

    ``seed_edges`` are placed first.  Each new edge of a variable goes to a
    check that is unreachable from it, or else at maximal distance, breaking
    ties by minimum check degree and then at random.  Distance at least one
    in check hops keeps the girth at least six.
    """
    var_adj: list[list[int]] = [[] for _ in range(n)]
    chk_adj: list[list[int]] = [[] for _ in range(m)]
    for v, c in seed_edges or ():
        var_adj[v].append(c)
        chk_adj[c].append(v)
    order = list(range(n))
    rng.shuffle(order)
    for v in order:
        while len(var_adj[v]) < gamma:
            dist = {c: 0 for c in var_adj[v]}
            queue = deque(var_adj[v])
            while queue:
                c = queue.popleft()
                for u in chk_adj[c]:
                    for c2 in var_adj[u]:
                        if c2 not in dist:
                            dist[c2] = dist[c] + 1
                            queue.append(c2)
            cand = [c for c in range(m) if c not in dist]
            if not cand:
                far = max(dist.values())
                if far < 2:
                    return None
                cand = [c for c, d in dist.items() if d == far]
            dmin = min(len(chk_adj[c]) for c in cand)
            c = rng.choice([c for c in cand if len(chk_adj[c]) == dmin])
            var_adj[v].append(c)
            chk_adj[c].append(v)
    return TannerGraph(n, m, [sorted(a) for a in var_adj])


# Gadgets embedded at variables 0.. and checks 0.. of the host graph, each with
# a weight-three pattern it keeps from being corrected within three iterations.
# Variables 0, 1, 2 of the triangle-based gadgets are the flipped ones; they
# pairwise share checks 0, 1, 2 and own private checks 3..8.
@dataclass(frozen=True)
class Gadget:
    edges: tuple[tuple[int, int], ...]
    pattern: tuple[int, int, int]

    @property
    def n_variables(self) -> int:
        return 1 + max(v for v, _ in self.edges)

    @property
    def n_checks(self) -> int:
        return 1 + max(c for _, c in self.edges)


def _k4_core() -> tuple[tuple[int, int], ...]:
    # four variables pairwise sharing six distinct checks, one private check each
    pairs = list(itertools.combinations(range(4), 2))
    edges = [(a, k) for k, (a, _) in enumerate(pairs)] + [(b, k) for k, (_, b) in enumerate(pairs)]
    return tuple(sorted(edges + [(v, 6 + v) for v in range(4)]))


_TRIANGLE = ((0, 0), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2),
             (0, 3), (0, 4), (1, 5), (1, 6), (2, 7), (2, 8))

GADGETS = {
    # 4 variables on 10 checks
    "violate_4_11": Gadget(_k4_core(), (0, 1, 2)),
    # triangle plus variable 3 on two private checks and check 9, which it
    # shares with variable 4; variable 4 meets variable 5 on check 10 and both
    # sit on two private checks
    "violate_6_14": Gadget(
        _TRIANGLE
        + ((3, 3), (3, 5), (3, 9), (4, 6), (4, 7), (4, 9), (4, 10),
           (5, 4), (5, 5), (5, 10)),
        (0, 1, 2),
    ),
    # triangle plus variable 7 whose four checks 9..12 each meet a variable
    # with two private triangle checks; those pair up through checks 13, 14
    "violate_8_16": Gadget(
        _TRIANGLE
        + ((3, 5), (3, 8), (3, 9), (7, 9), (4, 4), (4, 5), (4, 10), (7, 10),
           (5, 3), (5, 7), (5, 11), (7, 11), (6, 6), (6, 7), (6, 12), (7, 12),
           (3, 13), (5, 13), (4, 14), (6, 14)),
        (0, 1, 2),
    ),
    # triangle plus variable 3 on one private check and checks 9, 10, 11;
    # variables 4, 5 meet it on 9, 10 and have mates 6, 7 on checks 12, 13;
    # variable 8 meets it on 11
    "violate_9_18": Gadget(
        _TRIANGLE
        + ((3, 7), (3, 9), (3, 10), (3, 11), (4, 3), (4, 8), (4, 9), (4, 12),
           (5, 4), (5, 6), (5, 10), (5, 13), (6, 4), (6, 5), (6, 12),
           (7, 3), (7, 7), (7, 13), (8, 6), (8, 8), (8, 11), (8, 14)),
        (0, 1, 2),
    ),
}

FIXTURE_KINDS = ("theorem1_positive",) + tuple(GADGETS)

_TARGET = {"violate_4_11": 4, "violate_6_14": 6, "violate_8_16": 8, "violate_9_18": 9}


def default_checks(n: int) -> int:
    """Check count at which grown graphs pass the theorem1 conditions reasonably often."""
    return int(round(np.interp(n, [30, 40, 50, 64], [34, 40, 46, 56],
                               left=34, right=56 + 0.7 * (n - 64))))


def _pattern_fails(g: TannerGraph, pattern, cap: int = 3) -> bool:
    from .decoders import TwoBitRule, decode_batch

    r = np.zeros((1, g.n_variables), dtype=np.uint8)
    r[0, list(pattern)] = 1
    return decode_batch(TwoBitRule(2, 2, 1), g, r, max_iterations=cap).first_zero[0] == 0


def construct_fixture(
    kind: str,
    n: int = 40,
    seed: int = 0,
    m: int | None = None,
    gamma: int = 4,
    attempts: int = 400,
) -> TannerGraph:
    """Build a ``gamma``-left-regular girth-6 test graph.

    ``theorem1_positive`` graphs are grown and rejected until every ``theorem1``
    condition holds.  ``violate_*`` graphs embed a gadget at variables
    ``0..k-1``; the result is accepted when every smaller condition holds,
    the named condition fails only on subsets of the gadget, and the
    gadget's error pattern is not corrected by (2,2,1) within three
    iterations.
    """
    if kind not in FIXTURE_KINDS:
        raise ValueError(f"unknown fixture kind {kind!r}; choose from {', '.join(FIXTURE_KINDS)}")
    if n < 30:
        raise ValueError("fixtures need n >= 30")
    m = m or default_checks(n)
    theorem1 = ExpansionConditionSet.theorem1()
    rng = random.Random(seed)
    if kind == "theorem1_positive":
        for _ in range(attempts):
            g = random_girth6_graph(n, m, gamma, rng)
            if g is not None and check_expansion(g, theorem1).passed:
                return g
        raise FixtureError(f"no {kind} graph with n={n}, m={m} after {attempts} attempts (seed {seed})")
    if gamma != 4:
        raise ValueError("violation gadgets are defined for gamma = 4")
    gadget = GADGETS[kind]
    target = _TARGET[kind]
    smaller = theorem1.restricted([s for s, _ in theorem1.conditions if s < target])
    exact = theorem1.restricted([target])
    inside = set(range(gadget.n_variables))
    for _ in range(attempts):
        g = random_girth6_graph(n, m, gamma, rng, list(gadget.edges))
        if g is None or not check_girth6(g)[0]:
            continue
        if smaller.conditions and not check_expansion(g, smaller).passed:
            continue
        if not _pattern_fails(g, gadget.pattern):
            continue
        rep = check_expansion(g, exact, find_all=True)
        if rep.passed or any(not inside.issuperset(sub) for sub, _ in rep.violations):
            continue
        return g
    raise FixtureError(f"could not embed {kind} gadget with n={n}, m={m} after {attempts} attempts (seed {seed})")
