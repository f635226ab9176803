"""Monte Carlo cross-validation of the exact analyses.

Sampling uses numpy's Philox generator: counter-based, so a fixed seed fixes
the whole draw sequence and the i-th sample consumes uniforms
``[i*n, (i+1)*n)`` regardless of internal batching. Estimates are therefore
bit-reproducible for identical (deployment, quorums, samples, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact_analysis import Method, ReliabilityReport, StdErrs
from .fault_model import Deployment, ProtocolKind, require_valid
from .predicates import (
    FailureConfiguration,
    NodeStatus,
    QuorumSpec,
    raft_safe_structural,
)

_CHUNK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of one indicator, with its binomial standard error."""

    p_hat: float
    stderr: float
    samples: int
    seed: int

    @classmethod
    def from_successes(cls, successes: int, samples: int, seed: int) -> "McEstimate":
        p = successes / samples
        return cls(p, math.sqrt(p * (1.0 - p) / samples), samples, seed)


def sample_configuration(
    d: Deployment, rng: np.random.Generator
) -> FailureConfiguration:
    """Draw one failure configuration; advances ``rng`` by ``d.n`` uniforms."""
    u = rng.random(d.n)
    statuses = []
    for x, node in zip(u, d.nodes):
        p_byz = node.profile.p_byz
        if x < p_byz:
            statuses.append(NodeStatus.BYZANTINE)
        elif x < p_byz + node.profile.p_crash:
            statuses.append(NodeStatus.CRASHED)
        else:
            statuses.append(NodeStatus.CORRECT)
    return FailureConfiguration(statuses)


def estimate(
    d: Deployment,
    q: QuorumSpec,
    samples: int,
    seed: int,
    *,
    literal_theorem: bool = False,
) -> ReliabilityReport:
    """Sample mean of the safe/live/safe-and-live indicators.

    Plain averaging, no variance reduction: rare ten-nines quantities belong
    to the exact analyses, this is a statistical cross-check.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if d.n != q.n:
        raise ValueError(f"deployment has n={d.n} but quorum spec has n={q.n}")
    require_valid(d, q.protocol)

    rng = np.random.Generator(np.random.Philox(key=seed))
    p_byz = np.array([node.profile.p_byz for node in d.nodes])
    p_fail = p_byz + np.array([node.profile.p_crash for node in d.nodes])
    raft = q.protocol is ProtocolKind.RAFT

    n_safe = n_live = n_both = 0
    remaining = samples
    while remaining:
        m = min(_CHUNK, remaining)
        remaining -= m
        u = rng.random((m, d.n))
        byz = u < p_byz
        crashed = ~byz & (u < p_fail)
        n_byz = byz.sum(axis=1)
        n_correct = d.n - n_byz - crashed.sum(axis=1)
        if raft:
            live = n_correct >= max(q.q_per, q.q_vc)
            n_live += int(live.sum())
            if raft_safe_structural(q):
                n_safe += m
                n_both += int(live.sum())
        else:
            safe = (n_byz < 2 * q.q_eq - q.n) & (n_byz < q.q_per + q.q_vc - q.n)
            slack = q.q_vc_t - q.q_vc if literal_theorem else q.q_vc - q.q_vc_t
            live = (
                (n_byz <= slack)
                & (n_correct >= max(q.q_eq, q.q_per, q.q_vc))
                & (n_byz < q.q_vc_t)
            )
            n_safe += int(safe.sum())
            n_live += int(live.sum())
            n_both += int((safe & live).sum())

    est_safe = McEstimate.from_successes(n_safe, samples, seed)
    est_live = McEstimate.from_successes(n_live, samples, seed)
    est_both = McEstimate.from_successes(n_both, samples, seed)
    return ReliabilityReport(
        p_safe=est_safe.p_hat,
        p_live=est_live.p_hat,
        p_safe_and_live=est_both.p_hat,
        method=Method.MONTE_CARLO,
        n=d.n,
        quorums=q,
        stderr=StdErrs(est_safe.stderr, est_live.stderr, est_both.stderr),
        samples=samples,
        seed=seed,
    )
