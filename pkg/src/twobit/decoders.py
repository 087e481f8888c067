"""Hard-decision message-passing decoders for the binary symmetric channel.

The main family is the two-bit decoder parametrised by integer vote weights
``(C, S, W)``: messages live in the alphabet ``{-S, -W, +W, +S}``, the channel
bit contributes ``C`` votes, and outgoing messages carry both a value and a
strength.  Gallager A, Gallager B and the erasure decoder Algorithm E are
provided as baselines.

All decoders use the flooding schedule.  Batched decoding works on arrays of
shape ``(batch, n_edges)`` so that many received words can be processed in one
pass; this is what the exhaustive verifier and the simulator use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence, Union

import numpy as np
from scipy import sparse

from .graph import TannerGraph

__all__ = [
    "TwoBitMessage",
    "TwoBitRule",
    "GallagerA",
    "GallagerB",
    "AlgorithmE",
    "DecoderRule",
    "DecodeResult",
    "BatchResult",
    "UnresolvedScheduleError",
    "variable_update",
    "check_update",
    "decide",
    "gallager_a_update",
    "gallager_b_update",
    "algorithm_e_update",
    "algorithm_e_check_update",
    "decode",
    "decode_batch",
    "iterate_decoder",
    "extract_lookup_tables",
    "lookup_tables_csv",
    "parse_decoder",
    "format_decoder",
    "count_vectors",
]


class TwoBitMessage(IntEnum):
    """Symbols of the two-bit alphabet, ordered from strong 1 to strong 0."""

    MINUS_S = 0
    MINUS_W = 1
    PLUS_W = 2
    PLUS_S = 3

    @property
    def sign(self) -> int:
        return -1 if self < 2 else 1

    @property
    def strong(self) -> bool:
        return self in (TwoBitMessage.MINUS_S, TwoBitMessage.PLUS_S)

    @property
    def bits(self) -> str:
        """Two-bit wire code: -S→11, -W→01, W→00, S→10."""
        return ("11", "01", "00", "10")[self]

    @property
    def label(self) -> str:
        return ("-S", "-W", "W", "S")[self]

    def value(self, rule: "TwoBitRule") -> int:
        return rule.values[self]

    def negate(self) -> "TwoBitMessage":
        return TwoBitMessage(3 - self)

    @classmethod
    def from_label(cls, label: str) -> "TwoBitMessage":
        return cls(("-S", "-W", "W", "S").index(label.strip()))


MS, MW, PW, PS = (int(m) for m in TwoBitMessage)


class UnresolvedScheduleError(ValueError):
    """Raised when a decoder whose schedule is optimised per channel is run
    without having its schedule filled in (see ``density.resolve_rule``)."""


def _schedule_value(schedule: Sequence[int], iteration: int) -> int:
    return schedule[min(iteration, len(schedule)) - 1]


@dataclass(frozen=True)
class TwoBitRule:
    """Two-bit decoder ``(C, S, W)``.

    ``c_schedule`` optionally overrides ``C`` per iteration (entry ``j-1``
    applies to iteration ``j``; the last entry repeats).  This is how the
    dynamic decoder found by density evolution is replayed.

    ``strict_override`` selects how a variable node treats ``|t| == S``.  With
    the default (True) the outgoing message is strong only if its sign agrees
    with the channel value; a message that overrides the channel needs
    ``|t| > S``.  This is the rule tabulated in the update-rule table for
    ``(2, 2, 1)``.  With False, ``|t| >= S`` always gives a strong message.
    """

    c: int
    s: int
    w: int
    c_schedule: tuple[int, ...] | None = None
    strict_override: bool = True
    dynamic: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("c", "s", "w"):
            val = getattr(self, name)
            if int(val) != val or val < 1:
                raise ValueError(f"{name} must be a positive integer, got {val!r}")
        if self.s < self.w:
            raise ValueError("strong weight S must be at least the weak weight W")
        if self.c_schedule is not None:
            sched = tuple(int(x) for x in self.c_schedule)
            if not sched or min(sched) < 0:
                raise ValueError("c_schedule must be a non-empty list of non-negative integers")
            object.__setattr__(self, "c_schedule", sched)

    @property
    def values(self) -> tuple[int, int, int, int]:
        return (-self.s, -self.w, self.w, self.s)

    def channel_weight(self, iteration: int) -> int:
        if self.c_schedule is not None:
            return _schedule_value(self.c_schedule, iteration)
        if self.dynamic:
            raise UnresolvedScheduleError("dynamic two-bit decoder has no C schedule yet")
        return self.c

    def __str__(self) -> str:
        return format_decoder(self)


@dataclass(frozen=True)
class GallagerA:
    """Send the complement of the channel bit only if all extrinsic inputs agree on it."""

    def __str__(self) -> str:
        return "gallagerA"


@dataclass(frozen=True)
class GallagerB:
    """Gallager B with flip threshold ``b``.

    ``b`` is an integer, a per-iteration schedule, or None for the schedule
    that minimises the message error probability at each iteration of density
    evolution (Gallager's original choice; it depends on the channel and must
    be resolved before finite-length decoding).
    """

    b: int | tuple[int, ...] | None = None

    def __post_init__(self):
        if isinstance(self.b, (list, tuple)):
            object.__setattr__(self, "b", tuple(int(x) for x in self.b))
            if not self.b:
                raise ValueError("empty b schedule")

    def threshold(self, iteration: int, gamma: int) -> int:
        if self.b is None:
            raise UnresolvedScheduleError("Gallager B threshold schedule not resolved")
        b = self.b if isinstance(self.b, int) else _schedule_value(self.b, iteration)
        if not 1 <= b <= gamma - 1:
            raise ValueError(f"Gallager B threshold b={b} outside [1, {gamma - 1}]")
        return b

    def __str__(self) -> str:
        return format_decoder(self)


@dataclass(frozen=True)
class AlgorithmE:
    """Ternary decoder with erasures; ``weights[j-1]`` weights the channel at iteration ``j``."""

    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            if not w or min(w) < 0:
                raise ValueError("Algorithm E weights must be non-negative")
            object.__setattr__(self, "weights", w)

    def weight(self, iteration: int) -> int:
        if self.weights is None:
            raise UnresolvedScheduleError("Algorithm E weight schedule not resolved")
        return _schedule_value(self.weights, iteration)

    def __str__(self) -> str:
        return format_decoder(self)


DecoderRule = Union[TwoBitRule, GallagerA, GallagerB, AlgorithmE]


# --------------------------------------------------------------------------
# single-node rules

def _as_messages(incoming: Iterable) -> list[TwoBitMessage]:
    return [m if isinstance(m, TwoBitMessage) else TwoBitMessage(m) for m in incoming]


def _variable_symbol(t, received, s: int, strict: bool):
    """Vectorised variable-node output for vote total ``t`` (channel included)."""
    t = np.asarray(t)
    received = np.asarray(received)
    chan_neg = received == 1
    mag = np.abs(t)
    if strict:
        agrees = (t < 0) == chan_neg
        strong = (mag > s) | ((mag == s) & agrees)
    else:
        strong = mag >= s
    out = np.where(t > 0, np.where(strong, PS, PW), np.where(strong, MS, MW))
    return np.where(t == 0, np.where(chan_neg, MW, PW), out)


def variable_update(
    rule: TwoBitRule, incoming: Iterable, received: int, iteration: int = 2
) -> TwoBitMessage:
    """Outgoing variable-to-check message given the ``γ-1`` extrinsic inputs.

    >>> r = TwoBitRule(2, 2, 1)
    >>> variable_update(r, [TwoBitMessage.MINUS_S] * 2 + [TwoBitMessage.PLUS_W], 1).label
    '-S'
    """
    if iteration < 1:
        raise ValueError("iterations are numbered from 1")
    if iteration == 1:
        return TwoBitMessage.MINUS_W if received else TwoBitMessage.PLUS_W
    c = rule.channel_weight(iteration)
    t = sum(rule.values[m] for m in _as_messages(incoming)) + (-c if received else c)
    return TwoBitMessage(int(_variable_symbol(t, received, rule.s, rule.strict_override)))


def check_update(incoming: Iterable) -> TwoBitMessage:
    """Check-to-variable message: sign is the product, strong iff all inputs strong."""
    msgs = _as_messages(incoming)
    negative = sum(m < 2 for m in msgs) % 2 == 1
    strong = all(m.strong for m in msgs)
    if negative:
        return TwoBitMessage.MINUS_S if strong else TwoBitMessage.MINUS_W
    return TwoBitMessage.PLUS_S if strong else TwoBitMessage.PLUS_W


def decide(rule: TwoBitRule, incoming: Iterable, received: int, iteration: int = 1) -> int:
    """Bit estimate from all ``γ`` incoming messages; ties keep the channel bit."""
    c = rule.channel_weight(iteration)
    t = sum(rule.values[m] for m in _as_messages(incoming)) + (-c if received else c)
    if t > 0:
        return 0
    if t < 0:
        return 1
    return int(received)


def gallager_a_update(incoming: Sequence[int], received: int) -> int:
    flip = 1 - received
    return flip if incoming and all(m == flip for m in incoming) else received


def gallager_b_update(incoming: Sequence[int], received: int, b: int) -> int:
    if not 1 <= b <= len(incoming):
        raise ValueError(f"b={b} out of range for {len(incoming)} extrinsic inputs")
    flip = 1 - received
    return flip if sum(m == flip for m in incoming) >= b else received


def algorithm_e_update(incoming: Sequence[int], received: int, weight: int) -> int:
    """Ternary variable update; ``received`` is the channel bit (0 ↦ +1, 1 ↦ -1)."""
    t = weight * (1 - 2 * int(received)) + sum(incoming)
    return int(np.sign(t))


def algorithm_e_check_update(incoming: Sequence[int]) -> int:
    return int(np.prod(incoming)) if len(incoming) else 1


# --------------------------------------------------------------------------
# batched flooding decoders

@dataclass
class DecodeResult:
    converged: bool
    iterations_used: int
    final_estimate: np.ndarray
    trajectory: list[np.ndarray] | None = None


@dataclass
class BatchResult:
    converged: np.ndarray        # (B,) bool
    iterations: np.ndarray       # (B,) iteration at which the decoder halted
    estimates: np.ndarray        # (B, n) uint8
    first_zero: np.ndarray       # (B,) first iteration with an all-zero estimate, 0 if never

    def __len__(self) -> int:
        return len(self.converged)


@dataclass
class _Plan:
    """Incidence structure shared by all batched decoders for one graph."""

    g: TannerGraph
    ev: np.ndarray
    ec: np.ndarray
    var_inc: sparse.csr_matrix   # (E, n)
    chk_inc: sparse.csr_matrix   # (E, m)
    H_T: np.ndarray              # (n, m) int32
    var_deg: np.ndarray

    @classmethod
    def build(cls, g: TannerGraph) -> "_Plan":
        E = g.n_edges
        ev, ec = g.edge_vars, g.edge_checks
        ones = np.ones(E, dtype=np.int32)
        var_inc = sparse.csr_matrix((ones, (np.arange(E), ev)), shape=(E, g.n_variables))
        chk_inc = sparse.csr_matrix((ones, (np.arange(E), ec)), shape=(E, g.n_checks))
        return cls(g, ev, ec, var_inc, chk_inc, g.to_matrix().T.astype(np.int32), g.var_degrees)

    def per_var(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x @ self.var_inc)

    def per_check(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x @ self.chk_inc)

    def syndrome_ok(self, est: np.ndarray) -> np.ndarray:
        return ~((est.astype(np.int32) @ self.H_T) & 1).any(axis=1)


_PLANS: dict[int, tuple[TannerGraph, _Plan]] = {}


def _plan(g: TannerGraph) -> _Plan:
    hit = _PLANS.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    plan = _Plan.build(g)
    if len(_PLANS) > 32:
        _PLANS.clear()
    _PLANS[id(g)] = (g, plan)
    return plan


def _twobit_check(plan: _Plan, v2c: np.ndarray) -> np.ndarray:
    neg = (v2c < 2).astype(np.int32)
    weak = ((v2c == MW) | (v2c == PW)).astype(np.int32)
    ex_neg = plan.per_check(neg)[:, plan.ec] - neg
    ex_weak = plan.per_check(weak)[:, plan.ec] - weak
    odd = (ex_neg & 1).astype(bool)
    strong = ex_weak == 0
    return np.where(odd, np.where(strong, MS, MW), np.where(strong, PS, PW)).astype(np.int8)


def _iterate_twobit(rule: TwoBitRule, plan: _Plan, r: np.ndarray, max_iterations: int):
    vals = np.array(rule.values, dtype=np.int32)
    r_edge = r[:, plan.ev]
    sign_r = 1 - 2 * r.astype(np.int32)
    v2c = np.where(r_edge == 1, MW, PW).astype(np.int8)
    for j in range(1, max_iterations + 1):
        c = rule.channel_weight(j)
        if j > 1:
            t = c2v_total[:, plan.ev] - c2v_val + c * sign_r[:, plan.ev]
            v2c = _variable_symbol(t, r_edge, rule.s, rule.strict_override).astype(np.int8)
        c2v = _twobit_check(plan, v2c)
        c2v_val = vals[c2v]
        c2v_total = plan.per_var(c2v_val)
        t_v = c2v_total + c * sign_r
        est = np.where(t_v > 0, 0, np.where(t_v < 0, 1, r)).astype(np.uint8)
        yield j, est, v2c, c2v


def _iterate_gallager(rule: GallagerA | GallagerB, plan: _Plan, r: np.ndarray, max_iterations: int):
    deg = plan.var_deg
    r_edge = r[:, plan.ev].astype(np.int32)
    v2c = r_edge.copy()
    for j in range(1, max_iterations + 1):
        if j > 1:
            ex_ones = ones_total[:, plan.ev] - c2v
            n_ex = (deg - 1)[plan.ev]
            disagree = np.where(r_edge == 0, ex_ones, n_ex - ex_ones)
            if isinstance(rule, GallagerA):
                b = n_ex
            else:
                b = rule.threshold(j, int(deg.max()))
            v2c = np.where(disagree >= b, 1 - r_edge, r_edge)
        c2v = (plan.per_check(v2c)[:, plan.ec] - v2c) & 1
        ones_total = plan.per_var(c2v)
        twice = 2 * ones_total
        est = np.where(twice > deg, 1, np.where(twice < deg, 0, r)).astype(np.uint8)
        yield j, est, v2c.astype(np.int8), c2v.astype(np.int8)


def _iterate_algorithm_e(rule: AlgorithmE, plan: _Plan, r: np.ndarray, max_iterations: int):
    sign_r = 1 - 2 * r.astype(np.int32)
    sr_edge = sign_r[:, plan.ev]
    v2c = sr_edge.copy()
    for j in range(1, max_iterations + 1):
        w = rule.weight(j)
        if j > 1:
            v2c = np.sign(total[:, plan.ev] - c2v + w * sr_edge)
        zero = (v2c == 0).astype(np.int32)
        neg = (v2c < 0).astype(np.int32)
        ex_zero = plan.per_check(zero)[:, plan.ec] - zero
        ex_neg = plan.per_check(neg)[:, plan.ec] - neg
        c2v = np.where(ex_zero > 0, 0, 1 - 2 * (ex_neg & 1))
        total = plan.per_var(c2v)
        t_v = total + w * sign_r
        est = np.where(t_v > 0, 0, np.where(t_v < 0, 1, r)).astype(np.uint8)
        yield j, est, v2c.astype(np.int8), c2v.astype(np.int8)


def _check_compatible(rule: DecoderRule, g: TannerGraph) -> None:
    if isinstance(rule, (TwoBitRule, GallagerA, GallagerB)) and not g.is_left_regular():
        raise ValueError(f"{format_decoder(rule)} requires a left-regular graph")


def iterate_decoder(rule: DecoderRule, g: TannerGraph, received, max_iterations: int):
    """Yield ``(iteration, estimates, v2c, c2v)`` for a batch of received words.

    Messages are per edge in variable-major edge order.  No early stopping;
    callers decide when to halt.
    """
    _check_compatible(rule, g)
    r = np.atleast_2d(np.asarray(received, dtype=np.uint8))
    if r.shape[1] != g.n_variables:
        raise ValueError(f"received word has length {r.shape[1]}, graph has {g.n_variables} variables")
    plan = _plan(g)
    if isinstance(rule, TwoBitRule):
        return _iterate_twobit(rule, plan, r, max_iterations)
    if isinstance(rule, (GallagerA, GallagerB)):
        return _iterate_gallager(rule, plan, r, max_iterations)
    if isinstance(rule, AlgorithmE):
        return _iterate_algorithm_e(rule, plan, r, max_iterations)
    raise TypeError(f"unknown decoder rule {rule!r}")


def decode_batch(
    rule: DecoderRule,
    g: TannerGraph,
    received,
    max_iterations: int = 100,
    chunk: int = 4096,
) -> BatchResult:
    """Decode every row of ``received``; each frame halts on a zero syndrome.

    ``first_zero`` records the first iteration whose estimate was the all-zero
    word, which is what the weight-three verifier needs.
    """
    r_all = np.atleast_2d(np.asarray(received, dtype=np.uint8))
    B, n = r_all.shape
    if n != g.n_variables:
        raise ValueError(f"received word has length {n}, graph has {g.n_variables} variables")
    _check_compatible(rule, g)
    plan = _plan(g)
    converged = np.zeros(B, dtype=bool)
    iterations = np.full(B, max_iterations, dtype=np.int64)
    estimates = np.zeros((B, n), dtype=np.uint8)
    first_zero = np.zeros(B, dtype=np.int64)
    for start in range(0, B, chunk):
        idx = np.arange(start, min(B, start + chunk))
        live = np.ones(len(idx), dtype=bool)
        for j, est, _, _ in iterate_decoder(rule, g, r_all[idx], max_iterations):
            zero = ~est.any(axis=1)
            newly_zero = zero & (first_zero[idx] == 0) & live
            first_zero[idx[newly_zero]] = j
            ok = plan.syndrome_ok(est) & live
            hit = idx[ok]
            converged[hit] = True
            iterations[hit] = j
            estimates[hit] = est[ok]
            live &= ~ok
            if j == max_iterations:
                estimates[idx[live]] = est[live]
            if not live.any():
                break
    return BatchResult(converged, iterations, estimates, first_zero)


def decode(
    rule: DecoderRule,
    g: TannerGraph,
    received,
    max_iterations: int = 100,
    record_trajectory: bool = False,
) -> DecodeResult:
    """Decode one received word with the flooding schedule.

    Halts as soon as the estimate satisfies every check (at the earliest after
    iteration 1).
    """
    r = np.asarray(received, dtype=np.uint8)
    if r.ndim != 1:
        raise ValueError("decode expects a single received word; use decode_batch for batches")
    traj: list[np.ndarray] | None = [] if record_trajectory else None
    plan = None
    est = r.copy()
    j = 0
    for j, est_b, _, _ in iterate_decoder(rule, g, r[None, :], max_iterations):
        plan = plan or _plan(g)
        est = est_b[0]
        if traj is not None:
            traj.append(est.copy())
        if plan.syndrome_ok(est_b)[0]:
            return DecodeResult(True, j, est, traj)
    return DecodeResult(False, j, est, traj)


# --------------------------------------------------------------------------
# lookup tables

def count_vectors(d: int) -> np.ndarray:
    """All ``(n(-S), n(-W), n(W), n(S))`` with entries summing to ``d``."""
    rows = [
        (a, b, c, d - a - b - c)
        for a in range(d + 1)
        for b in range(d + 1 - a)
        for c in range(d + 1 - a - b)
    ]
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


@dataclass
class LookupTables:
    """Rows are ``(n_minusS, n_minusW, n_W, n_S, received, output)``."""

    update: list[tuple[int, int, int, int, int, str]]
    decision: list[tuple[int, int, int, int, int, int]]

    def decision_flips(self) -> list[tuple[int, int, int, int, int, int]]:
        """Decision rows whose estimate differs from the received bit."""
        return [row for row in self.decision if row[5] != row[4]]


def extract_lookup_tables(rule: TwoBitRule, gamma: int, iteration: int = 2) -> LookupTables:
    """Tabulate ``variable_update`` and ``decide`` over every count vector."""
    if gamma < 2:
        raise ValueError("gamma must be at least 2")
    order = {PS: 0, PW: 1, MW: 2, MS: 3}
    update = []
    for received in (1, 0):
        for cv in count_vectors(gamma - 1):
            msgs = [TwoBitMessage(k) for k in range(4) for _ in range(cv[k])]
            out = variable_update(rule, msgs, received, iteration)
            update.append((*map(int, cv), received, out.label))
    update.sort(key=lambda row: (-row[4], order[TwoBitMessage.from_label(row[5])], row[:4]))
    decision = []
    for received in (1, 0):
        for cv in count_vectors(gamma):
            msgs = [TwoBitMessage(k) for k in range(4) for _ in range(cv[k])]
            decision.append((*map(int, cv), received, decide(rule, msgs, received, iteration)))
    decision.sort(key=lambda row: (-row[4], row[5] == row[4], row[:4]))
    return LookupTables(update, decision)


def lookup_tables_csv(tables: LookupTables, which: str = "both", flips_only: bool = True) -> str:
    header = "n_minusS,n_minusW,n_W,n_S,received,output"
    parts = []
    if which in ("update", "both"):
        parts.append("\n".join([header] + [",".join(map(str, r)) for r in tables.update]))
    if which in ("decision", "both"):
        rows = tables.decision_flips() if flips_only else tables.decision
        parts.append("\n".join([header] + [",".join(map(str, r)) for r in rows]))
    return "\n\n".join(parts) + "\n"


# --------------------------------------------------------------------------
# decoder spec strings

_INTS = re.compile(r"^\d+(,\d+)*$")


def _int_list(text: str, what: str) -> tuple[int, ...]:
    text = text.strip()
    if not _INTS.match(text):
        raise ValueError(f"bad {what} list {text!r}")
    return tuple(int(x) for x in text.split(","))


def parse_decoder(spec: str) -> DecoderRule:
    """Parse a decoder description.

    Accepted forms::

        twobit:C,S,W            twobit:C,S,W:loose
        dyntwobit:S,W           dyntwobit:S,W:c=2,3,3
        gallagerA
        gallagerB               gallagerB:b=2      gallagerB:b=3,2,2
        algE                    algE:w=2,1,1
    """
    head, _, rest = spec.strip().partition(":")
    key = head.lower()
    if key == "twobit":
        body, _, opt = rest.partition(":")
        c, s, w = _int_list(body, "C,S,W") if body.count(",") == 2 else (None,) * 3
        if c is None:
            raise ValueError(f"twobit needs C,S,W, got {spec!r}")
        if opt not in ("", "loose"):
            raise ValueError(f"unknown twobit option {opt!r}")
        return TwoBitRule(c, s, w, strict_override=(opt != "loose"))
    if key == "dyntwobit":
        body, _, opt = rest.partition(":")
        sw = _int_list(body, "S,W")
        if len(sw) != 2:
            raise ValueError(f"dyntwobit needs S,W, got {spec!r}")
        sched = None
        if opt:
            if not opt.startswith("c="):
                raise ValueError(f"unknown dyntwobit option {opt!r}")
            sched = _int_list(opt[2:], "C schedule")
        return TwoBitRule(sched[0] if sched else 1, sw[0], sw[1], c_schedule=sched, dynamic=True)
    if key == "gallagera":
        if rest:
            raise ValueError("gallagerA takes no parameters")
        return GallagerA()
    if key == "gallagerb":
        if not rest:
            return GallagerB(None)
        if not rest.startswith("b="):
            raise ValueError(f"gallagerB expects b=..., got {rest!r}")
        b = _int_list(rest[2:], "b")
        return GallagerB(b[0] if len(b) == 1 else b)
    if key == "alge":
        if not rest:
            return AlgorithmE(None)
        if not rest.startswith("w="):
            raise ValueError(f"algE expects w=..., got {rest!r}")
        return AlgorithmE(_int_list(rest[2:], "weight"))
    raise ValueError(f"unknown decoder {spec!r}")


def format_decoder(rule: DecoderRule) -> str:
    """Inverse of :func:`parse_decoder`."""
    if isinstance(rule, TwoBitRule):
        if rule.dynamic:
            base = f"dyntwobit:{rule.s},{rule.w}"
            return base + (":c=" + ",".join(map(str, rule.c_schedule)) if rule.c_schedule else "")
        return f"twobit:{rule.c},{rule.s},{rule.w}" + ("" if rule.strict_override else ":loose")
    if isinstance(rule, GallagerA):
        return "gallagerA"
    if isinstance(rule, GallagerB):
        if rule.b is None:
            return "gallagerB"
        b = (rule.b,) if isinstance(rule.b, int) else rule.b
        return "gallagerB:b=" + ",".join(map(str, b))
    if isinstance(rule, AlgorithmE):
        return "algE" + ("" if rule.weights is None else ":w=" + ",".join(map(str, rule.weights)))
    raise TypeError(f"unknown decoder rule {rule!r}")
