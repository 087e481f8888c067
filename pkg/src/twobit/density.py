"""Density evolution for hard-decision decoders on the (γ, ρ)-regular ensemble.

The two-bit alphabet has four symbols, so message laws are exact length-4
probability vectors and each node update is an exact multinomial enumeration
over count vectors; no quantisation or FFT is needed.  Densities are indexed
like :class:`~twobit.decoders.TwoBitMessage`: ``(-S, -W, +W, +S)``.

The all-zero codeword is assumed, so the channel value is ``-C`` with
probability α and ``+C`` otherwise.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binom

from .decoders import (
    AlgorithmE,
    DecoderRule,
    GallagerA,
    GallagerB,
    TwoBitRule,
    _variable_symbol,
    format_decoder,
)

__all__ = [
    "MessageDensity",
    "EnsembleParams",
    "DEResult",
    "ThresholdResult",
    "compositions",
    "de_variable_step",
    "de_check_step",
    "de_error_probability",
    "run_de",
    "find_threshold",
    "find_threshold_dynamic",
    "resolve_rule",
    "threshold_sweep",
    "sweep_csv",
    "DEFAULT_EPS",
    "DEFAULT_MAX_ITERS",
]

DEFAULT_EPS = 1e-9
DEFAULT_MAX_ITERS = 500
STALL_WINDOW = 50
DYNAMIC_C_CANDIDATES = (1, 2, 3, 4, 5, 6)


@dataclass(frozen=True)
class MessageDensity:
    """Law of one two-bit message."""

    p_minusS: float
    p_minusW: float
    p_plusW: float
    p_plusS: float

    def __post_init__(self):
        arr = self.as_array()
        if np.any(arr < -1e-15) or np.any(arr > 1 + 1e-15):
            raise ValueError(f"probabilities out of [0, 1]: {arr}")
        if abs(arr.sum() - 1.0) > 1e-12:
            raise ValueError(f"density sums to {arr.sum()!r}, not 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_minusS, self.p_minusW, self.p_plusW, self.p_plusS], dtype=float)

    @classmethod
    def from_array(cls, p) -> "MessageDensity":
        p = np.clip(np.asarray(p, dtype=float), 0.0, None)
        p = p / p.sum()
        return cls(*map(float, p))

    @classmethod
    def point_mass(cls, symbol: int) -> "MessageDensity":
        p = np.zeros(4)
        p[int(symbol)] = 1.0
        return cls(*p)


@dataclass(frozen=True)
class EnsembleParams:
    gamma: int
    rho: int
    crossover: float = 0.0

    def __post_init__(self):
        if not 2 <= self.gamma < self.rho:
            raise ValueError(f"need rho > gamma >= 2, got gamma={self.gamma}, rho={self.rho}")
        if not 0.0 <= self.crossover <= 0.5:
            raise ValueError(f"crossover must lie in [0, 0.5], got {self.crossover}")

    @property
    def rate(self) -> float:
        return 1.0 - self.gamma / self.rho

    def with_crossover(self, alpha: float) -> "EnsembleParams":
        return dataclasses.replace(self, crossover=alpha)


@dataclass
class DEResult:
    converged: bool
    iterations: int
    final_error: float
    error_history: list[float] = field(default_factory=list)
    schedule: tuple[int, ...] | None = None

    def __iter__(self):
        return iter((self.converged, self.iterations, self.final_error))


@dataclass
class ThresholdResult:
    threshold: float
    iterations_at_threshold: int
    bisection_trace: list[tuple[float, bool]]
    found: bool = True
    schedule: tuple[int, ...] | None = None


# --------------------------------------------------------------------------
# multinomial machinery

@lru_cache(maxsize=None)
def compositions(d: int, k: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Count vectors of ``d`` draws over ``k`` symbols and their multinomial coefficients."""

    def rec(rem, parts):
        if parts == 1:
            yield (rem,)
            return
        for first in range(rem + 1):
            for tail in rec(rem - first, parts - 1):
                yield (first,) + tail

    rows = np.array(list(rec(d, k)), dtype=np.int64).reshape(-1, k)
    fd = factorial(d)
    coef = np.array([fd // prod(factorial(int(x)) for x in r) for r in rows], dtype=float)
    rows.setflags(write=False)
    coef.setflags(write=False)
    return rows, coef


def _count_probs(d: int, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rows, coef = compositions(d, len(p))
    return rows, coef * np.prod(np.asarray(p, float)[None, :] ** rows, axis=1)


def _normalise(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, None)
    return p / p.sum()


@lru_cache(maxsize=None)
def _check_map(d: int) -> np.ndarray:
    rows, _ = compositions(d)
    neg = rows[:, 0] + rows[:, 1]
    weak = rows[:, 1] + rows[:, 2]
    even = neg % 2 == 0
    return np.where(weak > 0, np.where(even, 2, 1), np.where(even, 3, 0))


def _density_array(d) -> np.ndarray:
    return d.as_array() if isinstance(d, MessageDensity) else np.asarray(d, float)


# --------------------------------------------------------------------------
# two-bit steps

def _var_step(p_chk: np.ndarray, gamma: int, alpha: float, c: int, s: int, w: int, strict: bool):
    rows, pr = _count_probs(gamma - 1, p_chk)
    t = rows @ np.array([-s, -w, w, s])
    out = np.zeros(4)
    for received, weight in ((1, alpha), (0, 1.0 - alpha)):
        sym = _variable_symbol(t + (-c if received else c), received, s, strict)
        out += np.bincount(sym, weights=weight * pr, minlength=4)
    return _normalise(out)


def _check_step(p_var: np.ndarray, rho: int) -> np.ndarray:
    _, pr = _count_probs(rho - 1, p_var)
    return _normalise(np.bincount(_check_map(rho - 1), weights=pr, minlength=4))


def _error_prob(p_chk: np.ndarray, gamma: int, alpha: float, c: int, s: int, w: int) -> float:
    rows, pr = _count_probs(gamma, p_chk)
    t = rows @ np.array([-s, -w, w, s])
    # received 1: wrong unless t - C > 0; received 0: wrong iff t + C < 0
    return float(alpha * pr[t - c <= 0].sum() + (1.0 - alpha) * pr[t + c < 0].sum())


def de_variable_step(
    rule: TwoBitRule,
    params: EnsembleParams,
    check_density: MessageDensity,
    iteration: int = 2,
    c: int | None = None,
) -> MessageDensity:
    """Law of a variable-to-check message given the law of incoming check messages.

    ``c`` overrides the rule's channel weight (used by the dynamic search).
    """
    alpha = params.crossover
    if iteration == 1:
        return MessageDensity(0.0, alpha, 1.0 - alpha, 0.0)
    c = rule.channel_weight(iteration) if c is None else c
    p = _var_step(_density_array(check_density), params.gamma, alpha, c, rule.s, rule.w,
                  rule.strict_override)
    return MessageDensity.from_array(p)


def de_check_step(params: EnsembleParams, var_density: MessageDensity) -> MessageDensity:
    """Law of a check-to-variable message given the law of incoming variable messages."""
    return MessageDensity.from_array(_check_step(_density_array(var_density), params.rho))


def de_error_probability(
    rule: TwoBitRule,
    params: EnsembleParams,
    check_density: MessageDensity,
    iteration: int = 2,
    c: int | None = None,
) -> float:
    """Probability that the bit decision is wrong after an iteration."""
    c = rule.channel_weight(iteration) if c is None else c
    return _error_prob(_density_array(check_density), params.gamma, params.crossover, c,
                       rule.s, rule.w)


# --------------------------------------------------------------------------
# iteration drivers

def _stalled(hist: list[float], window: int) -> bool:
    return len(hist) > window and min(hist[-window:]) >= hist[-window - 1]


def _drive(step, max_iters: int, eps: float, stall: int) -> DEResult:
    """Run ``step(j) -> (error, choice)`` until convergence, stall or the cap."""
    hist: list[float] = []
    choices: list[int] = []
    for j in range(1, max_iters + 1):
        err, choice = step(j)
        hist.append(err)
        if choice is not None:
            choices.append(choice)
        if err < eps:
            return DEResult(True, j, err, hist, tuple(choices) or None)
        if _stalled(hist, stall):
            break
    return DEResult(False, len(hist), hist[-1], hist, tuple(choices) or None)


def _run_twobit(rule: TwoBitRule, params: EnsembleParams, max_iters, eps, stall, candidates):
    g, rho, a = params.gamma, params.rho, params.crossover
    greedy = rule.dynamic and rule.c_schedule is None
    cands = tuple(candidates or DYNAMIC_C_CANDIDATES)
    state = {"var": np.array([0.0, a, 1.0 - a, 0.0]), "chk": None}

    def step(j):
        if greedy:
            best = None
            for c in cands:
                var = state["var"] if j == 1 else _var_step(state["chk"], g, a, c, rule.s, rule.w,
                                                             rule.strict_override)
                chk = _check_step(var, rho)
                err = _error_prob(chk, g, a, c, rule.s, rule.w)
                if best is None or err < best[0]:
                    best = (err, c, var, chk)
            err, c, state["var"], state["chk"] = best
            return err, c
        c = rule.channel_weight(j)
        if j > 1:
            state["var"] = _var_step(state["chk"], g, a, c, rule.s, rule.w, rule.strict_override)
        state["chk"] = _check_step(state["var"], rho)
        return _error_prob(state["chk"], g, a, c, rule.s, rule.w), None

    return _drive(step, max_iters, eps, stall)


def _majority_error(q: float, gamma: int, alpha: float) -> float:
    """Decision error when each of γ incoming bits is wrong w.p. ``q``."""
    k = np.arange(gamma + 1)
    pk = binom.pmf(k, gamma, q)
    return float(pk[2 * k > gamma].sum() + alpha * pk[2 * k == gamma].sum())


def _run_gallager(rule, params: EnsembleParams, max_iters, eps, stall):
    g, rho, a = params.gamma, params.rho, params.crossover
    state = {"p": a}
    dynamic = isinstance(rule, GallagerB) and rule.b is None
    if isinstance(rule, GallagerA):
        b_options = lambda j: (g - 1,)
    elif dynamic:
        b_options = lambda j: range((g - 1) // 2 + 1, g)
    else:
        b_options = lambda j: (rule.threshold(j, g),)

    def step(j):
        q = (1.0 - (1.0 - 2.0 * state["p"]) ** (rho - 1)) / 2.0
        err = _majority_error(q, g, a)
        best = None
        for b in b_options(j + 1):
            # received wrong: stays wrong unless ≥ b of γ-1 extrinsic are right
            p_next = a * binom.cdf(b - 1, g - 1, 1.0 - q) + (1.0 - a) * binom.sf(b - 1, g - 1, q)
            if best is None or p_next < best[0]:
                best = (p_next, b)
        state["p"] = float(best[0])
        return err, (best[1] if dynamic else None)

    res = _drive(step, max_iters, eps, stall)
    if dynamic and res.schedule:
        # entry j-1 belongs to iteration j; iteration 1 sends the channel bit
        res.schedule = (res.schedule[0],) + res.schedule[:-1] if len(res.schedule) > 1 else res.schedule
    return res


def _run_algorithm_e(rule: AlgorithmE, params: EnsembleParams, max_iters, eps, stall, candidates):
    g, rho, a = params.gamma, params.rho, params.crossover
    greedy = rule.weights is None
    cands = tuple(candidates) if candidates else tuple(range(g + 1))
    rows_v, _ = compositions(g - 1, 3)
    rows_d, _ = compositions(g, 3)
    tv = rows_v @ np.array([-1, 0, 1])
    td = rows_d @ np.array([-1, 0, 1])
    rows_c, _ = compositions(rho - 1, 3)
    c_out = np.where(rows_c[:, 1] > 0, 1, np.where(rows_c[:, 0] % 2 == 1, 0, 2))

    def chk_step(var):
        _, pr = _count_probs(rho - 1, var)
        return _normalise(np.bincount(c_out, weights=pr, minlength=3))

    def var_step(chk, w):
        _, pr = _count_probs(g - 1, chk)
        out = np.zeros(3)
        for r, weight in ((-1, a), (1, 1.0 - a)):
            out += np.bincount(np.sign(tv + w * r) + 1, weights=weight * pr, minlength=3)
        return _normalise(out)

    def err_prob(chk, w):
        _, pr = _count_probs(g, chk)
        return float(a * pr[td - w <= 0].sum() + (1.0 - a) * pr[td + w < 0].sum())

    state = {"var": np.array([a, 0.0, 1.0 - a]), "chk": None}

    def step(j):
        options = cands if greedy else (rule.weight(j),)
        best = None
        for w in options:
            var = state["var"] if j == 1 else var_step(state["chk"], w)
            chk = chk_step(var)
            err = err_prob(chk, w)
            if best is None or err < best[0]:
                best = (err, w, var, chk)
        err, w, state["var"], state["chk"] = best
        return err, (w if greedy else None)

    return _drive(step, max_iters, eps, stall)


def run_de(
    rule: DecoderRule,
    params: EnsembleParams,
    max_iters: int = DEFAULT_MAX_ITERS,
    eps: float = DEFAULT_EPS,
    stall: int = STALL_WINDOW,
    candidates: Sequence[int] | None = None,
) -> DEResult:
    """Evolve densities from iteration 1 until the decision error drops below ``eps``.

    Non-convergence is declared after ``max_iters`` iterations or when the
    error has not improved over ``stall`` consecutive iterations.  Decoders
    with unresolved schedules (dynamic two-bit, Gallager B without ``b``,
    Algorithm E without weights) pick their per-iteration parameter greedily
    from ``candidates`` and return the choice in ``DEResult.schedule``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if params.crossover == 0.0:
        return DEResult(True, 1, 0.0, [0.0], _trivial_schedule(rule, params, candidates))
    if isinstance(rule, TwoBitRule):
        return _run_twobit(rule, params, max_iters, eps, stall, candidates)
    if isinstance(rule, (GallagerA, GallagerB)):
        return _run_gallager(rule, params, max_iters, eps, stall)
    if isinstance(rule, AlgorithmE):
        return _run_algorithm_e(rule, params, max_iters, eps, stall, candidates)
    raise TypeError(f"unknown decoder rule {rule!r}")


def _trivial_schedule(rule, params, candidates):
    if isinstance(rule, TwoBitRule) and rule.dynamic and rule.c_schedule is None:
        return (2,) if 2 in (candidates or DYNAMIC_C_CANDIDATES) else (min(candidates),)
    if isinstance(rule, GallagerB) and rule.b is None:
        return (params.gamma - 1,)
    if isinstance(rule, AlgorithmE) and rule.weights is None:
        return (1,)
    return None


# --------------------------------------------------------------------------
# thresholds

def find_threshold(
    rule: DecoderRule,
    gamma: int,
    rho: int,
    precision: float = 1e-5,
    lo: float = 0.0,
    hi: float = 0.5,
    max_iters: int = DEFAULT_MAX_ITERS,
    eps: float = DEFAULT_EPS,
    candidates: Sequence[int] | None = None,
) -> ThresholdResult:
    """Largest crossover probability for which density evolution converges, by bisection."""
    if precision < 1e-6:
        raise ValueError("precision must be at least 1e-6")
    base = EnsembleParams(gamma, rho, 0.0)
    run = lambda a: run_de(rule, base.with_crossover(a), max_iters, eps, candidates=candidates)
    trace: list[tuple[float, bool]] = []

    top = run(hi)
    trace.append((hi, top.converged))
    if top.converged:
        return ThresholdResult(hi, top.iterations, trace, True, top.schedule)
    floor_alpha = lo if lo > 0 else precision
    bottom = run(floor_alpha)
    trace.append((floor_alpha, bottom.converged))
    if not bottom.converged:
        return ThresholdResult(0.0, 0, trace, False, None)
    lo, good = floor_alpha, bottom
    while hi - lo >= precision:
        mid = 0.5 * (lo + hi)
        res = run(mid)
        trace.append((mid, res.converged))
        if res.converged:
            lo, good = mid, res
        else:
            hi = mid
    return ThresholdResult(0.5 * (lo + hi), good.iterations, trace, True, good.schedule)


def find_threshold_dynamic(
    gamma: int,
    rho: int,
    s: int = 2,
    w: int = 1,
    c_candidates: Iterable[int] = DYNAMIC_C_CANDIDATES,
    precision: float = 1e-5,
    **kwargs,
) -> ThresholdResult:
    """Threshold of the two-bit decoder whose C is re-chosen at every iteration.

    At each iteration the candidate C minimising the post-iteration decision
    error is kept (greedy).  The schedule found at the largest converging α
    is returned and can be replayed with ``TwoBitRule(c_schedule=...)``.
    """
    cands = tuple(sorted(set(int(c) for c in c_candidates)))
    if not cands:
        raise ValueError("c_candidates must be non-empty")
    rule = TwoBitRule(cands[0], s, w, dynamic=True)
    return find_threshold(rule, gamma, rho, precision, candidates=cands, **kwargs)


def resolve_rule(
    rule: DecoderRule,
    gamma: int,
    rho: int,
    alpha: float,
    candidates: Sequence[int] | None = None,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> DecoderRule:
    """Fill in a channel-dependent schedule by running density evolution at ``alpha``.

    Rules that already have fixed parameters are returned unchanged.
    """
    needs = (
        (isinstance(rule, TwoBitRule) and rule.dynamic and rule.c_schedule is None)
        or (isinstance(rule, GallagerB) and rule.b is None)
        or (isinstance(rule, AlgorithmE) and rule.weights is None)
    )
    if not needs:
        return rule
    res = run_de(rule, EnsembleParams(gamma, rho, alpha), max_iters, candidates=candidates)
    sched = res.schedule
    if isinstance(rule, TwoBitRule):
        return dataclasses.replace(rule, c=sched[0], c_schedule=sched)
    if isinstance(rule, GallagerB):
        return GallagerB(sched)
    return AlgorithmE(sched)


def _sweep_cell(args):
    rule, gamma, rho, precision = args
    res = find_threshold(rule, gamma, rho, precision)
    return {
        "rule": format_decoder(rule),
        "gamma": gamma,
        "rho": rho,
        "rate": 1.0 - gamma / rho,
        "threshold": res.threshold if res.found else None,
        "iterations": res.iterations_at_threshold,
    }


def threshold_sweep(
    rules: Sequence[DecoderRule],
    gamma: int,
    rhos: int | Sequence[int],
    precision: float = 1e-5,
    workers: int = 1,
) -> list[dict]:
    """Thresholds for every (rule, ρ) pair, in input order."""
    rhos = [rhos] if isinstance(rhos, int) else list(rhos)
    jobs = [(r, gamma, rho, precision) for r in rules for rho in rhos]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_cell, jobs))
    return [_sweep_cell(j) for j in jobs]


def sweep_csv(rows: Sequence[dict]) -> str:
    lines = ["rule,gamma,rho,rate,threshold,iterations"]
    for r in rows:
        thr = "" if r["threshold"] is None else f"{r['threshold']:.5f}"
        lines.append(f"{r['rule']},{r['gamma']},{r['rho']},{r['rate']:.4f},{thr},{r['iterations']}")
    return "\n".join(lines) + "\n"
