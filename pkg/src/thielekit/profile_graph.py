"""Bipartite candidate-voter approval structure and its structural analysis.

The structural parameter of interest is the smallest d such that no d voters
approve the same d candidates (the graph has no complete bipartite K_{d,d}
subgraph). Sparse profiles in this sense admit sunflower arguments: large
families of candidates whose approver sets pairwise intersect in one common
core, which is what the preprocessing rules exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence


@dataclass(frozen=True)
class ProfileGraph:
    """Immutable bipartite approval graph.

    ``approvals`` maps each voter to her approved candidates; ``approvers``
    is the exact transpose. Candidate deletion keeps voters in place (a voter
    may legitimately end up approving nothing after preprocessing).
    """

    candidates: tuple[str, ...]
    voters: tuple[str, ...]
    approvals: Mapping[str, frozenset[str]]
    approvers: Mapping[str, frozenset[str]]

    def __post_init__(self):
        object.__setattr__(self, "approvals", dict(self.approvals))
        object.__setattr__(self, "approvers", dict(self.approvers))

    @classmethod
    def from_approvals(
        cls,
        candidates: Sequence[str],
        approvals: Mapping[str, Iterable[str]],
        voters: Optional[Sequence[str]] = None,
    ) -> "ProfileGraph":
        cand_tuple = tuple(candidates)
        if len(set(cand_tuple)) != len(cand_tuple):
            raise ValueError("duplicate candidate ids")
        voter_tuple = tuple(voters) if voters is not None else tuple(approvals)
        if len(set(voter_tuple)) != len(voter_tuple):
            raise ValueError("duplicate voter ids")
        if set(voter_tuple) != set(approvals):
            raise ValueError("voter list and approvals disagree")
        cand_set = set(cand_tuple)
        app = {}
        for v in voter_tuple:
            approved = frozenset(approvals[v])
            unknown = approved - cand_set
            if unknown:
                raise ValueError(f"voter {v!r} approves unknown candidates {sorted(unknown)}")
            app[v] = approved
        approvers = {c: set() for c in cand_tuple}
        for v, approved in app.items():
            for c in approved:
                approvers[c].add(v)
        return cls(cand_tuple, voter_tuple, app, {c: frozenset(s) for c, s in approvers.items()})

    def degree(self, candidate: str) -> int:
        return len(self.approvers[candidate])

    def voter_degree(self, voter: str) -> int:
        return len(self.approvals[voter])

    def drop_candidates(self, candidates: Iterable[str]) -> "ProfileGraph":
        """Remove candidates; voters are preserved even if left isolated."""
        gone = set(candidates)
        unknown = gone - set(self.candidates)
        if unknown:
            raise ValueError(f"cannot drop unknown candidates {sorted(unknown)}")
        keep = tuple(c for c in self.candidates if c not in gone)
        approvals = {v: s - gone for v, s in self.approvals.items()}
        approvers = {c: s for c, s in self.approvers.items() if c not in gone}
        return ProfileGraph(keep, self.voters, approvals, approvers)

    def keep_voters(self, voters: Iterable[str]) -> "ProfileGraph":
        """Keep exactly the given voters; candidates are preserved."""
        keep = set(voters)
        unknown = keep - set(self.voters)
        if unknown:
            raise ValueError(f"cannot keep unknown voters {sorted(unknown)}")
        voter_tuple = tuple(v for v in self.voters if v in keep)
        approvals = {v: self.approvals[v] for v in voter_tuple}
        approvers = {c: self.approvers[c] & keep for c in self.candidates}
        return ProfileGraph(self.candidates, voter_tuple, approvals, approvers)


@dataclass(frozen=True)
class Sunflower:
    """Candidates whose approver sets pairwise intersect exactly in ``core``."""

    members: tuple[str, ...]
    core: frozenset[str]


@dataclass(frozen=True)
class DegreeStats:
    """Aggregate degree parameters of a profile graph.

    ``d`` is the smallest value for which no K_{d,d} exists; when the search
    cap was exhausted without finding such a value, ``d`` is cap+1 and
    ``determined`` is False.
    """

    delta_c: int
    delta_v: int
    d: int
    determined: bool = True


def contains_biclique(graph: ProfileGraph, a: int, b: int) -> bool:
    """True iff some a candidates are all approved by some b voters.

    Exact enumeration over candidate a-subsets, pruned by the running common
    approver set; exponential in a, which stays tiny here.
    """
    if a < 1 or b < 1:
        raise ValueError("biclique sides must be at least 1")
    eligible = sorted(
        (c for c in graph.candidates if graph.degree(c) >= b),
        key=lambda c: (-graph.degree(c), c),
    )
    if len(eligible) < a:
        return False

    def extend(start: int, need: int, common: Optional[frozenset]) -> bool:
        if need == 0:
            return True
        for i in range(start, len(eligible) - need + 1):
            nxt = graph.approvers[eligible[i]] if common is None else common & graph.approvers[eligible[i]]
            if len(nxt) >= b and extend(i + 1, need - 1, nxt):
                return True
        return False

    return extend(0, a, None)


def kdd_parameter(graph: ProfileGraph, cap: int = 4) -> int:
    """Smallest d <= cap with no K_{d,d}; cap+1 when not determined.

    Once K_{d,d} is absent it stays absent for every larger d, so the scan
    stops at the first miss.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    for d in range(1, cap + 1):
        if not contains_biclique(graph, d, d):
            return d
    return cap + 1


def degree_stats(graph: ProfileGraph, cap: int = 4) -> DegreeStats:
    delta_c = max((graph.degree(c) for c in graph.candidates), default=0)
    delta_v = max((graph.voter_degree(v) for v in graph.voters), default=0)
    d = kdd_parameter(graph, cap)
    return DegreeStats(delta_c, delta_v, d, determined=d <= cap)


def find_sunflower(graph: ProfileGraph, ell: int, w: int, d: int) -> Optional[Sunflower]:
    """Search for a sunflower of size >= w among candidates of degree <= ell.

    Core-growing search: greedily collect candidates (in id order) whose
    petals relative to the current core are pairwise disjoint; when fewer
    than w are collected, restrict to the candidates sharing the most-loaded
    petal voter and grow the core by that voter. In a graph with no K_{d,d}
    the core never needs more than d-1 voters, and whenever there are at
    least d*((w-1)*ell)^d candidates of degree <= ell the search succeeds.
    """
    if w < 1:
        raise ValueError("sunflower size must be at least 1")
    pool = sorted(c for c in graph.candidates if graph.degree(c) <= ell)
    if len(pool) < w:
        return None
    if w == 1:
        return Sunflower((pool[0],), graph.approvers[pool[0]])
    return _grow_sunflower(graph, pool, frozenset(), w, max(d, 1))


def _grow_sunflower(
    graph: ProfileGraph,
    pool: list[str],
    core: frozenset[str],
    w: int,
    d: int,
) -> Optional[Sunflower]:
    members = []
    used: set[str] = set()
    for c in pool:
        petal = graph.approvers[c] - core
        if used.isdisjoint(petal):
            members.append(c)
            used.update(petal)
    if len(members) >= w:
        return Sunflower(tuple(members), core)
    if len(core) >= d - 1:
        return None
    counts: dict[str, int] = {}
    for c in pool:
        for v in graph.approvers[c] - core:
            counts[v] = counts.get(v, 0) + 1
    if not counts:
        return None
    best = max(counts.values())
    if best < w:
        # No petal voter is shared by w candidates, so no deeper core can
        # assemble w members either.
        return None
    pivot = min(v for v, n in counts.items() if n == best)
    sub = [c for c in pool if pivot in graph.approvers[c]]
    return _grow_sunflower(graph, sub, core | {pivot}, w, d)


def high_degree_set(graph: ProfileGraph, voters: Iterable[str], beta: Fraction, d: int) -> tuple[str, ...]:
    """Candidates of degree >= d covering at least a 1/beta share of ``voters``.

    In a graph with no K_{d,d} and |voters|/(2*beta) > d, at most
    (d-1)*(2*beta)^(d-1) candidates can qualify.
    """
    x = set(voters)
    if not x:
        raise ValueError("the reference voter set must be nonempty")
    unknown = x - set(graph.voters)
    if unknown:
        raise ValueError(f"unknown voters {sorted(unknown)}")
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    need = Fraction(len(x)) / beta
    out = [
        c
        for c in sorted(graph.candidates)
        if graph.degree(c) >= d and len(graph.approvers[c] & x) >= need
    ]
    return tuple(out)
