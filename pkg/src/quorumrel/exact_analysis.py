"""Exact reliability computation by enumeration and by a count-distribution DP.

Both routes sum the probability of every failure configuration the
predicates classify as safe (respectively live). Enumeration walks the
``2^N`` (crash-only) or ``3^N`` (three-state) configuration space directly
and is the ground-truth oracle; the dynamic program convolves per-node
outcome probabilities into a joint (crashed, Byzantine) count distribution,
which is equivalent because the predicates are count-only, and it scales to
hundreds of nodes. Sums use exactly-rounded compensated summation
(``math.fsum``), so results do not depend on iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Mapping, Sequence

from .errors import CapacityError, ConstraintError
from .fault_model import (
    Deployment,
    FaultProfile,
    Node,
    ProtocolKind,
    profiles_of,
    require_valid,
)
from .predicates import CountVector, QuorumSpec, classify_counts

#: Largest n enumerated by default; beyond these the DP is authoritative.
ENUM_CAP_RAFT = 16  # 2^16 = 65536 configurations
ENUM_CAP_PBFT = 9  # 3^9 = 19683 configurations


class Method(str, Enum):
    ENUMERATION = "enumeration"
    COUNT_DP = "count-dp"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class StdErrs:
    """Per-probability standard errors of a Monte Carlo report."""

    p_safe: float
    p_live: float
    p_safe_and_live: float


@dataclass(frozen=True)
class ReliabilityReport:
    """Safety/liveness probabilities for one deployment and quorum choice."""

    p_safe: float
    p_live: float
    p_safe_and_live: float
    method: Method
    n: int
    quorums: QuorumSpec
    stderr: StdErrs | None = None
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        lo = max(0.0, self.p_safe + self.p_live - 1.0)
        hi = min(self.p_safe, self.p_live)
        # Tolerance covers float summation only; a larger breach is a bug.
        if not lo - 1e-9 <= self.p_safe_and_live <= hi + 1e-9:
            raise ValueError(
                f"joint probability {self.p_safe_and_live!r} outside "
                f"Frechet bounds [{lo!r}, {hi!r}]"
            )


@dataclass(frozen=True)
class CountDistribution:
    """Joint pmf of (crashed, Byzantine) counts over independent node faults."""

    n: int
    pmf: Mapping[tuple[int, int], float]

    def __post_init__(self) -> None:
        for (crashed, byz), p in self.pmf.items():
            if p < 0.0:
                raise ValueError(f"negative mass {p!r} at {(crashed, byz)}")
            if crashed + byz > self.n:
                raise ValueError(f"support point {(crashed, byz)} exceeds n={self.n}")
        mass = math.fsum(self.pmf.values())
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"total mass {mass!r} not within 1e-12 of 1")

    def marginal_byz(self, k: int) -> float:
        return math.fsum(p for (_, b), p in self.pmf.items() if b == k)

    def marginal_crashed(self, k: int) -> float:
        return math.fsum(p for (c, _), p in self.pmf.items() if c == k)


def count_distribution(d: Deployment) -> CountDistribution:
    """Exact joint pmf of crash/Byzantine counts via per-node convolution."""
    n = d.n
    cur = [[0.0] * (n + 1) for _ in range(n + 1)]
    cur[0][0] = 1.0
    for k, profile in enumerate(d.profiles(), start=1):
        p_ok, p_crash, p_byz = profile.p_correct, profile.p_crash, profile.p_byz
        nxt = [[0.0] * (n + 1) for _ in range(n + 1)]
        for crashed in range(k):
            row = cur[crashed]
            for byz in range(k - crashed):
                mass = row[byz]
                if mass == 0.0:
                    continue
                nxt[crashed][byz] += mass * p_ok
                nxt[crashed + 1][byz] += mass * p_crash
                if p_byz:
                    nxt[crashed][byz + 1] += mass * p_byz
        cur = nxt
    pmf = {
        (crashed, byz): cur[crashed][byz]
        for crashed in range(n + 1)
        for byz in range(n + 1 - crashed)
        if cur[crashed][byz] != 0.0
    }
    return CountDistribution(n, pmf)


def _classification_table(
    d: Deployment, q: QuorumSpec, literal_theorem: bool
) -> dict[tuple[int, int], tuple[bool, bool]]:
    """(crashed, byz) -> (safe, live), via the shared predicates."""
    n = d.n
    table = {}
    for crashed in range(n + 1):
        for byz in range(n + 1 - crashed):
            counts = CountVector(n - crashed - byz, crashed, byz)
            table[(crashed, byz)] = classify_counts(
                counts, q, literal_theorem=literal_theorem
            )
    return table


def enumerate_exact(
    d: Deployment,
    q: QuorumSpec,
    *,
    cap: int | None = None,
    literal_theorem: bool = False,
) -> ReliabilityReport:
    """Ground-truth report: sum exact probabilities of every configuration.

    Walks all per-node status assignments (two branches per node for Raft,
    three for PBFT; zero-probability branches are pruned). Capped because the
    space is exponential; past the cap, :func:`analyze_dp` is the tool.
    """
    _check_pair(d, q)
    if cap is None:
        cap = ENUM_CAP_RAFT if q.protocol is ProtocolKind.RAFT else ENUM_CAP_PBFT
    if d.n > cap:
        raise CapacityError(
            f"n={d.n} exceeds the enumeration cap of {cap} for "
            f"{q.protocol.value}; use analyze_dp for large deployments"
        )
    raft = q.protocol is ProtocolKind.RAFT
    branches = []
    for profile in d.profiles():
        opts = [(profile.p_correct, 0, 0), (profile.p_crash, 1, 0)]
        if not raft:
            opts.append((profile.p_byz, 0, 1))
        branches.append(opts)
    table = _classification_table(d, q, literal_theorem)

    safe_terms: list[float] = []
    live_terms: list[float] = []
    both_terms: list[float] = []
    stack = [(0, 1.0, 0, 0)]
    n = d.n
    while stack:
        depth, prob, crashed, byz = stack.pop()
        if prob == 0.0:
            continue
        if depth == n:
            safe, live = table[(crashed, byz)]
            if safe:
                safe_terms.append(prob)
            if live:
                live_terms.append(prob)
            if safe and live:
                both_terms.append(prob)
            continue
        for p, d_crashed, d_byz in branches[depth]:
            stack.append((depth + 1, prob * p, crashed + d_crashed, byz + d_byz))
    return ReliabilityReport(
        p_safe=math.fsum(safe_terms),
        p_live=math.fsum(live_terms),
        p_safe_and_live=math.fsum(both_terms),
        method=Method.ENUMERATION,
        n=d.n,
        quorums=q,
    )


def analyze_dp(
    d: Deployment, q: QuorumSpec, *, literal_theorem: bool = False
) -> ReliabilityReport:
    """Same probabilities as :func:`enumerate_exact`, from the count DP."""
    _check_pair(d, q)
    dist = count_distribution(d)
    table = _classification_table(d, q, literal_theorem)
    safe_terms: list[float] = []
    live_terms: list[float] = []
    both_terms: list[float] = []
    for key in sorted(dist.pmf):
        prob = dist.pmf[key]
        safe, live = table[key]
        if safe:
            safe_terms.append(prob)
        if live:
            live_terms.append(prob)
        if safe and live:
            both_terms.append(prob)
    return ReliabilityReport(
        p_safe=math.fsum(safe_terms),
        p_live=math.fsum(live_terms),
        p_safe_and_live=math.fsum(both_terms),
        method=Method.COUNT_DP,
        n=d.n,
        quorums=q,
    )


def at_least_k_failures(d: Deployment, k: int) -> float:
    """Exact tail mass P(total failures >= k); failures = crashed or Byzantine."""
    if not 0 <= k <= d.n:
        raise ValueError(f"k={k} outside [0, {d.n}]")
    pmf = [1.0]
    for profile in d.profiles():
        p = profile.p_fail
        nxt = [0.0] * (len(pmf) + 1)
        for j, mass in enumerate(pmf):
            nxt[j] += mass * (1.0 - p)
            nxt[j + 1] += mass * p
        pmf = nxt
    return math.fsum(pmf[k:])


def specific_quorum_loss(members: Sequence[Node | FaultProfile]) -> float:
    """Probability that every member of one specific quorum fails."""
    profiles = profiles_of(members)
    if not profiles:
        raise ValueError("member list must be non-empty")
    return math.prod(p.p_fail for p in profiles)


def random_quorum_contains_correct(
    d: Deployment, s: int, *, exhaustive_limit: int = 20
) -> float:
    """Probability that a uniformly random s-subset has >= 1 correct node.

    Exhaustive over all C(n, s) subsets up to ``exhaustive_limit`` nodes;
    above that, nodes are grouped by identical profile and the subset
    average becomes an exact multivariate hypergeometric sum over per-class
    pick counts.
    """
    n = d.n
    if not 1 <= s <= n:
        raise ValueError(f"s={s} outside [1, {n}]")
    p_fail = [node.profile.p_fail for node in d.nodes]
    if n <= exhaustive_limit:
        terms = [
            math.prod(p_fail[i] for i in subset)
            for subset in combinations(range(n), s)
        ]
        mean_loss = math.fsum(terms) / math.comb(n, s)
        return 1.0 - mean_loss

    class_sizes: dict[float, int] = {}
    for p in p_fail:
        class_sizes[p] = class_sizes.get(p, 0) + 1
    classes = sorted(class_sizes.items())
    terms = []

    def walk(idx: int, remaining: int, ways: int, loss: float) -> None:
        if idx == len(classes):
            if remaining == 0:
                terms.append(ways * loss)
            return
        p, size = classes[idx]
        for take in range(min(size, remaining) + 1):
            walk(idx + 1, remaining - take, ways * math.comb(size, take), loss * p**take)

    walk(0, s, 1, 1.0)
    return 1.0 - math.fsum(terms) / math.comb(n, s)


def constrained_quorum_durability(
    d: Deployment,
    quorum: Sequence[str],
    constraint: str | None = None,
) -> float:
    """Probability that at least one member of an explicit quorum survives.

    ``constraint``, when given, names a node class of which the quorum must
    include at least one member (e.g. a "reliable" class); it is an error if
    the deployment has no such node or the quorum does not satisfy it. Note
    this metric is survival of *any* member, deliberately simpler than full
    recovery semantics.
    """
    by_id = {node.node_id: node for node in d.nodes}
    members = []
    for node_id in quorum:
        if node_id not in by_id:
            raise ValueError(f"quorum member {node_id!r} not in deployment")
        members.append(by_id[node_id])
    if not members:
        raise ValueError("quorum must be non-empty")
    if constraint is not None:
        if all(node.class_label != constraint for node in d.nodes):
            raise ConstraintError(
                f"deployment has no node of class {constraint!r}"
            )
        if all(node.class_label != constraint for node in members):
            raise ConstraintError(
                f"quorum contains no node of class {constraint!r}"
            )
    return 1.0 - specific_quorum_loss(members)


def _check_pair(d: Deployment, q: QuorumSpec) -> None:
    if d.n != q.n:
        raise ValueError(f"deployment has n={d.n} but quorum spec has n={q.n}")
    require_valid(d, q.protocol)
