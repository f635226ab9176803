"""Node fault profiles, time-varying fault curves, and deployment descriptions.

A node either behaves correctly for a whole analysis epoch, crashes at some
point within it, or acts Byzantine. The three outcomes are exclusive, so a
profile is a pair of probabilities with ``p_crash + p_byz <= 1`` and the
correct-behavior probability always derived, never stored.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ValidationError


class ProtocolKind(str, Enum):
    RAFT = "raft"
    PBFT = "pbft"


@dataclass(frozen=True)
class FaultProfile:
    """Per-epoch failure probabilities of a single node.

    Construction is unchecked so that :func:`validate_deployment` can report
    malformed profiles instead of the build blowing up halfway through; use
    ``issues()`` or the deployment validator to reject bad values.
    """

    p_crash: float
    p_byz: float = 0.0

    @property
    def p_correct(self) -> float:
        return 1.0 - self.p_crash - self.p_byz

    @property
    def p_fail(self) -> float:
        return self.p_crash + self.p_byz

    def issues(self) -> list[str]:
        problems = []
        for name, p in (("p_crash", self.p_crash), ("p_byz", self.p_byz)):
            if not math.isfinite(p) or p < 0.0 or p > 1.0:
                problems.append(f"{name}={p!r} outside [0, 1]")
        if not problems and self.p_crash + self.p_byz > 1.0:
            problems.append(
                f"p_crash + p_byz = {self.p_crash + self.p_byz!r} exceeds 1"
            )
        return problems


@dataclass(frozen=True)
class FaultCurve:
    """Piecewise-constant fault profile over time, in hours.

    Segments are ``(start_time, profile)`` pairs with strictly increasing
    start times; the first segment must start at time 0. Evaluation is
    right-continuous: at a boundary the new segment's profile applies.
    """

    segments: tuple[tuple[float, FaultProfile], ...]

    def __init__(self, segments: Iterable[tuple[float, FaultProfile]]) -> None:
        segs = tuple((float(t), profile) for t, profile in segments)
        if not segs:
            raise ValueError("fault curve needs at least one segment")
        if segs[0][0] != 0.0:
            raise ValueError("first segment must start at time 0")
        starts = [t for t, _ in segs]
        if any(a >= b for a, b in zip(starts, starts[1:])):
            raise ValueError("segment start times must be strictly increasing")
        object.__setattr__(self, "segments", segs)


def epoch_probability(curve: FaultCurve, t: float) -> FaultProfile:
    """Profile of the segment active at time ``t`` (hours, ``t >= 0``)."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    starts = [s for s, _ in curve.segments]
    return curve.segments[bisect_right(starts, t) - 1][1]


@dataclass(frozen=True)
class Node:
    """One deployment member: identity, fault profile, class tag, epoch cost."""

    node_id: str
    profile: FaultProfile
    class_label: str | None = None
    cost: float = 0.0


@dataclass(frozen=True)
class Deployment:
    """Ordered set of nodes. Node order is canonical: every report and
    failure configuration refers to nodes by index into this order."""

    nodes: tuple[Node, ...]

    def __init__(self, nodes: Iterable[Node]) -> None:
        node_tuple = tuple(nodes)
        if not node_tuple:
            raise ValueError("a deployment needs at least one node")
        object.__setattr__(self, "nodes", node_tuple)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def profiles(self) -> tuple[FaultProfile, ...]:
        return tuple(node.profile for node in self.nodes)

    def total_cost(self) -> float:
        return sum(node.cost for node in self.nodes)

    @classmethod
    def homogeneous(
        cls,
        n: int,
        profile: FaultProfile,
        *,
        cost: float = 0.0,
        class_label: str | None = None,
        prefix: str = "node",
    ) -> "Deployment":
        return cls(
            Node(f"{prefix}{i}", profile, class_label, cost) for i in range(n)
        )


class IssueKind(str, Enum):
    PROFILE = "profile"
    IDENTITY = "identity"
    MODEL_MISMATCH = "model-mismatch"
    COST = "cost"


@dataclass(frozen=True)
class ValidationIssue:
    kind: IssueKind
    node_id: str | None
    message: str

    def __str__(self) -> str:
        where = f" [{self.node_id}]" if self.node_id else ""
        return f"{self.kind.value}{where}: {self.message}"


def validate_deployment(
    d: Deployment, protocol: ProtocolKind
) -> list[ValidationIssue]:
    """Check a deployment against the protocol's fault model.

    Returns the list of problems found (empty means valid). Detection is
    order-insensitive: permuting the nodes yields the same set of issue
    kinds. Raft deployments must have ``p_byz = 0`` everywhere; silently
    folding Byzantine mass into crashes would misreport reliability, so a
    nonzero rate is a model mismatch rather than an approximation.
    """
    issues: list[ValidationIssue] = []
    seen: set[str] = set()
    for node in d.nodes:
        if node.node_id in seen:
            issues.append(
                ValidationIssue(
                    IssueKind.IDENTITY, node.node_id, "duplicate node_id"
                )
            )
        seen.add(node.node_id)
        for problem in node.profile.issues():
            issues.append(ValidationIssue(IssueKind.PROFILE, node.node_id, problem))
        if (
            protocol is ProtocolKind.RAFT
            and not node.profile.issues()
            and node.profile.p_byz > 0.0
        ):
            issues.append(
                ValidationIssue(
                    IssueKind.MODEL_MISMATCH,
                    node.node_id,
                    f"p_byz={node.profile.p_byz!r} but raft offers no "
                    "Byzantine guarantees",
                )
            )
        if not math.isfinite(node.cost) or node.cost < 0:
            issues.append(
                ValidationIssue(
                    IssueKind.COST, node.node_id, f"cost={node.cost!r} negative"
                )
            )
    return issues


def require_valid(d: Deployment, protocol: ProtocolKind) -> None:
    """Raise :class:`ValidationError` unless the deployment validates."""
    issues = validate_deployment(d, protocol)
    if issues:
        raise ValidationError(issues)


def profiles_of(members: Sequence[Node | FaultProfile]) -> list[FaultProfile]:
    """Normalize a mixed node/profile sequence to bare profiles."""
    return [m.profile if isinstance(m, Node) else m for m in members]
