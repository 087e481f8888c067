"""Monte Carlo frame and bit error rates on the binary symmetric channel.

Every frame draws its channel errors from its own stream, keyed by
``(seed, frame index)``, so results do not depend on how frames are split
across worker processes.  Frames are processed in fixed-size blocks and the
error-count stopping rule is evaluated only at block boundaries, in block
order, which keeps early stopping deterministic as well.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.stats import binomtest

from .decoders import DecoderRule, decode_batch, format_decoder, parse_decoder
from .density import resolve_rule
from .graph import TannerGraph, null_space_basis

__all__ = [
    "SimConfig",
    "FERReport",
    "bsc_sample",
    "wilson_interval",
    "estimate_fer",
    "fer_sweep",
    "fer_csv",
    "cell_seed",
    "worker_count",
    "FER_CSV_HEADER",
]

FER_CSV_HEADER = "decoder,alpha,frames,frame_errors,fer,ci_lo,ci_hi,ber,mean_iters"


@dataclass(frozen=True)
class SimConfig:
    """Settings for one Monte Carlo run.

    ``trials`` caps the number of frames; the run also stops once
    ``target_errors`` frame errors have been seen (checked per block).
    ``fixed_weight`` replaces the BSC by exactly that many random flips per
    frame.
    """

    crossover: float = 0.01
    trials: int = 10_000
    target_errors: int | None = 100
    max_iterations: int = 100
    seed: int = 0
    decoder: str = "twobit:2,2,1"
    fixed_weight: int | None = None
    random_codeword: bool = False
    block: int = 256

    def __post_init__(self):
        if not 0.0 <= self.crossover <= 0.5:
            raise ValueError(f"crossover must lie in [0, 0.5], got {self.crossover}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.block < 1 or self.max_iterations < 1:
            raise ValueError("block and max_iterations must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class FERReport:
    decoder: str
    alpha: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    wilson_ci_95: tuple[float, float]
    mean_iterations: float

    def csv_row(self) -> str:
        lo, hi = self.wilson_ci_95
        return (
            f"{self.decoder},{self.alpha:.6g},{self.frames},{self.frame_errors},"
            f"{self.fer:.6e},{lo:.6e},{hi:.6e},{self.ber:.6e},{self.mean_iterations:.4f}"
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["wilson_ci_95"] = list(self.wilson_ci_95)
        return d


def worker_count(requested: int | None = None) -> int:
    """``TWOBIT_THREADS`` overrides ``requested``; the default is one worker."""
    env = os.environ.get("TWOBIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"TWOBIT_THREADS must be an integer, got {env!r}") from None
    return max(1, int(requested or 1))


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), index]))


def bsc_sample(n: int, alpha: float, seed: int, trial: int, fixed_weight: int | None = None) -> np.ndarray:
    """Error vector for frame ``trial`` of the stream ``seed``.

    Flips are i.i.d. Bernoulli(``alpha``), or exactly ``fixed_weight``
    positions chosen uniformly when given.
    """
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"crossover must lie in [0, 0.5], got {alpha}")
    rng = _stream(seed, trial)
    if fixed_weight is not None:
        e = np.zeros(n, dtype=np.uint8)
        e[rng.choice(n, size=fixed_weight, replace=False)] = 1
        return e
    return (rng.random(n) < alpha).astype(np.uint8)


def wilson_interval(k: int, n: int) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    ci = binomtest(k, n).proportion_ci(confidence_level=0.95, method="wilson")
    return (float(ci.low), float(ci.high))


def _resolved(g: TannerGraph, decoder: str | DecoderRule, alpha: float) -> DecoderRule:
    rule = parse_decoder(decoder) if isinstance(decoder, str) else decoder
    gamma = g.left_degree
    if gamma is None:
        return rule
    rho = max(gamma + 1, int(round(g.n_edges / max(1, g.n_checks))))
    return resolve_rule(rule, gamma, rho, alpha)


def _run_block(args):
    g, rule, cfg, start, stop, basis = args
    n = g.n_variables
    frames = range(start, stop)
    errors = np.stack([bsc_sample(n, cfg.crossover, cfg.seed, t, cfg.fixed_weight) for t in frames])
    sent = np.zeros_like(errors)
    if cfg.random_codeword and basis is not None and len(basis):
        for i, t in enumerate(frames):
            coeffs = _stream(cfg.seed ^ 0x5A5A5A5A, t).integers(0, 2, size=len(basis), dtype=np.uint8)
            sent[i] = (coeffs.astype(np.int64) @ basis.astype(np.int64)) & 1
    res = decode_batch(rule, g, sent ^ errors, max_iterations=cfg.max_iterations)
    wrong = res.estimates != sent
    frame_err = wrong.any(axis=1)
    return int(frame_err.sum()), int(wrong.sum()), int(res.iterations.sum()), stop - start


def estimate_fer(g: TannerGraph, cfg: SimConfig, workers: int | None = None) -> FERReport:
    """Frame/bit error rates of ``cfg.decoder`` on ``g``.

    The all-zero codeword is sent unless ``cfg.random_codeword`` is set.
    Decoders whose schedule depends on the channel are resolved by density
    evolution at ``cfg.crossover`` with the graph's left degree and mean
    check degree.
    """
    rule = _resolved(g, cfg.decoder, cfg.crossover)
    workers = worker_count(workers)
    basis = null_space_basis(g) if cfg.random_codeword else None
    bounds = [(s, min(cfg.trials, s + cfg.block)) for s in range(0, cfg.trials, cfg.block)]
    jobs = [(g, rule, cfg, s, e, basis) for s, e in bounds]
    totals = np.zeros(4, dtype=np.int64)

    def absorb(result) -> bool:
        totals[:] += result
        return cfg.target_errors is not None and totals[0] >= cfg.target_errors

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i in range(0, len(jobs), workers):
                done = False
                for result in pool.map(_run_block, jobs[i:i + workers]):
                    if absorb(result):
                        done = True
                        break
                if done:
                    break
    else:
        for job in jobs:
            if absorb(_run_block(job)):
                break
    fe, be, iters, frames = (int(x) for x in totals)
    return FERReport(
        decoder=format_decoder(parse_decoder(cfg.decoder)) if isinstance(cfg.decoder, str) else format_decoder(cfg.decoder),
        alpha=cfg.crossover,
        frames=frames,
        frame_errors=fe,
        bit_errors=be,
        fer=fe / frames,
        ber=be / (frames * g.n_variables) if g.n_variables else 0.0,
        wilson_ci_95=wilson_interval(fe, frames),
        mean_iterations=iters / frames,
    )


def cell_seed(seed: int, decoder: str, alpha: float) -> int:
    """Stable 64-bit seed for one (decoder, α) cell of a sweep."""
    digest = hashlib.blake2b(f"{seed}|{decoder}|{alpha!r}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def fer_sweep(
    g: TannerGraph,
    decoders: Sequence[str],
    alphas: Sequence[float],
    cfg: SimConfig,
    workers: int | None = None,
) -> list[FERReport]:
    """``estimate_fer`` over the grid ``decoders × alphas``, decoder-major."""
    out = []
    for dec in decoders:
        for a in alphas:
            cell = SimConfig(**{**asdict(cfg), "decoder": dec, "crossover": float(a),
                                "seed": cell_seed(cfg.seed, dec, float(a))})
            out.append(estimate_fer(g, cell, workers))
    return out


def fer_csv(reports: Sequence[FERReport]) -> str:
    return "\n".join([FER_CSV_HEADER] + [r.csv_row() for r in reports]) + "\n"
