"""Safety/liveness predicates over failure-count summaries and quorum sizes.

The predicates decide, for a given count of correct/crashed/Byzantine nodes
and a choice of quorum sizes, whether every run of the abstracted protocol
preserves agreement (safe) and whether progress remains possible (live).
They are count-only: which particular nodes hold each status never matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .errors import ModelMismatchError
from .fault_model import ProtocolKind


class NodeStatus(str, Enum):
    CORRECT = "correct"
    CRASHED = "crashed"
    BYZANTINE = "byzantine"


@dataclass(frozen=True)
class QuorumSpec:
    """Protocol identifier plus quorum sizes for an ``n``-node cluster.

    ``q_eq`` (non-equivocation) and ``q_vc_t`` (view-change trigger) exist
    only for PBFT; Raft uses just the persistence quorum ``q_per`` and the
    view-change quorum ``q_vc``.
    """

    protocol: ProtocolKind
    n: int
    q_per: int
    q_vc: int
    q_eq: int | None = None
    q_vc_t: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        required = {"q_per": self.q_per, "q_vc": self.q_vc}
        if self.protocol is ProtocolKind.PBFT:
            if self.q_eq is None or self.q_vc_t is None:
                raise ValueError("pbft requires q_eq and q_vc_t")
            required["q_eq"] = self.q_eq
            required["q_vc_t"] = self.q_vc_t
        else:
            if self.q_eq is not None or self.q_vc_t is not None:
                raise ValueError("q_eq/q_vc_t are only meaningful for pbft")
        for name, size in required.items():
            if not 1 <= size <= self.n:
                raise ValueError(
                    f"{name}={size} outside [1, n={self.n}]"
                )

    def sizes(self) -> dict[str, int]:
        out = {"q_per": self.q_per, "q_vc": self.q_vc}
        if self.protocol is ProtocolKind.PBFT:
            out = {
                "q_eq": self.q_eq,
                "q_per": self.q_per,
                "q_vc": self.q_vc,
                "q_vc_t": self.q_vc_t,
            }
        return out


class CountVector(NamedTuple):
    """Summary of a failure configuration: how many nodes hold each status."""

    n_correct: int
    n_crashed: int
    n_byz: int

    @property
    def total(self) -> int:
        return self.n_correct + self.n_crashed + self.n_byz


@dataclass(frozen=True)
class FailureConfiguration:
    """Per-node status assignment, aligned with deployment node order."""

    statuses: tuple[NodeStatus, ...]

    def __init__(self, statuses: Iterable[NodeStatus]) -> None:
        object.__setattr__(self, "statuses", tuple(statuses))

    def __len__(self) -> int:
        return len(self.statuses)

    def counts(self) -> CountVector:
        correct = crashed = byz = 0
        for status in self.statuses:
            if status is NodeStatus.CORRECT:
                correct += 1
            elif status is NodeStatus.CRASHED:
                crashed += 1
            else:
                byz += 1
        return CountVector(correct, crashed, byz)

    def indices(self, status: NodeStatus) -> list[int]:
        return [i for i, s in enumerate(self.statuses) if s is status]


def pbft_safe(c: CountVector, q: QuorumSpec) -> bool:
    """True iff no run of this configuration can commit conflicting values.

    Both conditions bound the Byzantine count by a quorum-overlap margin:
    any two non-equivocation quorums, and any persistence/view-change quorum
    pair, must overlap in at least one non-Byzantine node.
    """
    _expect(q, ProtocolKind.PBFT)
    return c.n_byz < 2 * q.q_eq - q.n and c.n_byz < q.q_per + q.q_vc - q.n


def pbft_live(
    c: CountVector, q: QuorumSpec, *, literal_theorem: bool = False
) -> bool:
    """True iff every required quorum can still be assembled.

    Condition (1) bounds how many view-change participants may be Byzantine
    while still leaving enough correct rebroadcasts to trigger stragglers
    into the new view. The published statement of that condition has the
    subtraction reversed (``n_byz <= q_vc_t - q_vc``), which is negative for
    every sane quorum choice and would force zero liveness; pass
    ``literal_theorem=True`` to evaluate that literal orientation for audit
    purposes. The default uses ``n_byz <= q_vc - q_vc_t``, the unique
    orientation consistent with the reference reliability figures.
    """
    _expect(q, ProtocolKind.PBFT)
    slack = q.q_vc_t - q.q_vc if literal_theorem else q.q_vc - q.q_vc_t
    return (
        c.n_byz <= slack
        and c.n_correct >= max(q.q_eq, q.q_per, q.q_vc)
        and c.n_byz < q.q_vc_t
    )


def raft_safe_structural(q: QuorumSpec) -> bool:
    """True iff Raft's quorum sizes force intersection; independent of the
    failure configuration (crash-only nodes never lie, so overlap in any
    node suffices)."""
    _expect(q, ProtocolKind.RAFT)
    return q.n < q.q_per + q.q_vc and q.n < 2 * q.q_vc


def raft_live(c: CountVector, q: QuorumSpec) -> bool:
    """True iff enough correct nodes remain to form both quorums."""
    _expect(q, ProtocolKind.RAFT)
    if c.n_byz:
        raise ModelMismatchError("raft configurations cannot contain Byzantine nodes")
    return c.n_correct >= max(q.q_per, q.q_vc)


def classify(
    cfg: FailureConfiguration,
    q: QuorumSpec,
    *,
    literal_theorem: bool = False,
) -> tuple[bool, bool]:
    """Summarize ``cfg`` to counts and apply the protocol's predicates.

    Returns ``(safe, live)``. For Raft, safety is structural and ignores the
    configuration entirely.
    """
    if len(cfg) != q.n:
        raise ValueError(
            f"configuration has {len(cfg)} statuses for an n={q.n} quorum spec"
        )
    counts = cfg.counts()
    return classify_counts(counts, q, literal_theorem=literal_theorem)


def classify_counts(
    counts: CountVector,
    q: QuorumSpec,
    *,
    literal_theorem: bool = False,
) -> tuple[bool, bool]:
    """Count-level core of :func:`classify`; also used by the analyses."""
    if counts.total != q.n:
        raise ValueError(f"counts {counts} do not sum to n={q.n}")
    if q.protocol is ProtocolKind.RAFT:
        return raft_safe_structural(q), raft_live(counts, q)
    return (
        pbft_safe(counts, q),
        pbft_live(counts, q, literal_theorem=literal_theorem),
    )


def _expect(q: QuorumSpec, protocol: ProtocolKind) -> None:
    if q.protocol is not protocol:
        raise ModelMismatchError(
            f"predicate for {protocol.value} called with {q.protocol.value} quorums"
        )
