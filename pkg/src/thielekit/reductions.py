"""Preprocessing pipeline: sunflower deletions and the lossy kernel.

Three stages, each a pure instance-to-instance function with a trace:

* the sunflower rule deletes the weakest member of a large sunflower and
  preserves the optimum committee score exactly;
* the candidate reduction keeps only a score-dependent set of candidates
  while losing at most an epsilon fraction of the optimum;
* the voter reduction thins groups of duplicate voters by a scale factor s,
  distorting any committee score by at most a bounded additive term.

Candidate reduction never touches voters and voter reduction never touches
candidates, so composing both (candidate stage first) yields a kernel whose
solutions lift back to the original instance unchanged; only their score is
recomputed there.

The two irrational constants that appear in the guarantees are replaced by
fixed rational bounds, rounded in the direction that keeps every inequality
valid: 1 - 1/e is replaced by the under-approximation 632120/1000000 and
e/(e-1) by the over-approximation 1582/1000.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .instance import Instance
from .profile_graph import degree_stats, find_sunflower
from .scoring import ONE, ZERO, as_rational, make_scorer, singleton_scores

# Rational stand-ins for 1 - 1/e (lower bound) and e/(e-1) (upper bound).
GREEDY_RATIO = Fraction(632120, 1000000)
INV_GREEDY_RATIO = Fraction(1582, 1000)


@dataclass(frozen=True)
class SunflowerDeletion:
    """One firing of the sunflower rule: the deleted member and its sunflower."""

    candidate: str
    members: tuple[str, ...]
    core: frozenset[str]


@dataclass(frozen=True)
class CandidateStageTrace:
    epsilon: Optional[Fraction]
    apx_opt: Optional[Fraction]
    case: Optional[str]  # "high-threshold" | "low-threshold" | None when skipped
    r: Optional[Fraction] = None
    split_threshold: Optional[Fraction] = None
    psi: Optional[Fraction] = None
    w_cap: Optional[Fraction] = None
    w_size: Optional[int] = None
    certified_candidate: Optional[str] = None
    removed: tuple[str, ...] = ()
    deletions: tuple[SunflowerDeletion, ...] = ()


@dataclass(frozen=True)
class VoterStageTrace:
    epsilon: Optional[Fraction]
    apx_opt: Optional[Fraction]
    eps_tilde: Optional[Fraction] = None
    eps_star: Optional[Fraction] = None
    scale_formula: Optional[Fraction] = None
    scale: Fraction = ONE  # effective s; 1 means the stage was an identity
    kept_multiplicities: Mapping[str, int] = field(default_factory=dict)
    removed: tuple[str, ...] = ()
    # The n in the scale denominator counts candidates, not voters: duplicate
    # classes are distinguished by their approval sets, which are candidate
    # subsets.
    size_convention: str = "candidates"


@dataclass(frozen=True)
class KernelTrace:
    """Provenance of a kernelization run; replaying it must reproduce the
    reduced instance exactly."""

    epsilon: Fraction
    candidate_stage: CandidateStageTrace
    voter_stage: VoterStageTrace
    original: Instance
    reduced: Instance

    @property
    def deleted_candidates(self) -> tuple[str, ...]:
        return self.candidate_stage.removed

    @property
    def voter_scale(self) -> Fraction:
        return self.voter_stage.scale

    @property
    def kept_voter_multiplicities(self) -> Mapping[str, int]:
        return self.voter_stage.kept_multiplicities

    @property
    def apx_opt(self) -> Optional[Fraction]:
        return self.candidate_stage.apx_opt

    @property
    def case_taken(self) -> Optional[str]:
        return self.candidate_stage.case

    def replay(self, original: Instance) -> Instance:
        out = original.drop_candidates(self.candidate_stage.removed)
        keep = [v for v in out.graph.voters if v not in set(self.voter_stage.removed)]
        return out.keep_voters(keep)


def apply_sunflower_rule(
    instance: Instance,
    w_cap: Fraction,
    w_size: int,
    exhaustive: bool = False,
) -> tuple[Instance, tuple[SunflowerDeletion, ...]]:
    """Delete the lowest-scoring member of a sunflower of size >= w_size.

    Every candidate degree must be at most ``w_cap``. With integer degrees
    capped by floor(w_cap), choosing w_size = floor(w_cap)*k + 1 makes each
    deletion preserve the optimum k-committee score exactly: a solution
    containing the deleted member can always swap to a member whose petal no
    solution voter touches. Smaller w_size values fire more often but carry
    no exactness promise.

    With ``exhaustive`` the rule loops until no qualifying sunflower remains.
    """
    w_cap = as_rational(w_cap)
    if w_size < 1:
        raise ValueError("sunflower size must be at least 1")
    graph = instance.graph
    too_big = [c for c in graph.candidates if graph.degree(c) > w_cap]
    if too_big:
        raise ValueError(
            f"candidate degree above the cap {w_cap}: {sorted(too_big)[:3]}"
        )
    ell = math.floor(w_cap)
    d = degree_stats(graph).d
    singles = singleton_scores(graph, instance.family)
    deletions: list[SunflowerDeletion] = []
    while True:
        flower = find_sunflower(graph, ell, w_size, d)
        if flower is None or len(flower.members) < w_size:
            break
        victim = min(flower.members, key=lambda c: (singles[c], c))
        deletions.append(SunflowerDeletion(victim, flower.members, flower.core))
        graph = graph.drop_candidates([victim])
        if not exhaustive:
            break
    reduced = dataclasses.replace(instance, graph=graph)
    return reduced, tuple(deletions)


def _require_eps(eps: Fraction) -> Fraction:
    eps = as_rational(eps)
    if not (0 < eps < 1):
        raise ValueError("epsilon must lie strictly between 0 and 1")
    return eps


def reduce_candidates(
    instance: Instance,
    eps: Fraction,
    *,
    override_r: Optional[int] = None,
    override_w_cap: Optional[Fraction] = None,
    override_w_size: Optional[int] = None,
) -> tuple[Instance, CandidateStageTrace]:
    """Shrink the candidate set, losing at most an eps fraction of the optimum.

    A greedy run estimates the optimum. When the estimate is high, only the
    ceil(r) candidates of highest singleton score are kept (the top set
    provably contains a near-optimal committee). When it is low, the optimum
    itself is bounded, so either one candidate's degree already certifies an
    optimal singleton, or the sunflower rule applies exhaustively under a
    degree cap derived from the bound.

    Voters are never touched. The natural constants only fire on enormous
    inputs; the override parameters substitute the derived r, degree cap and
    sunflower size so the mechanisms can be driven at test scale (overriding
    the cap skips the degree certificate, which is only sound for the
    derived value).
    """
    eps = _require_eps(eps)
    graph = instance.graph
    k = instance.k
    if k == 0 or not graph.candidates or not graph.voters:
        return instance, CandidateStageTrace(eps, ZERO, None)
    from .solvers import greedy  # deferred: solvers builds on this module

    apx_opt = greedy(instance).score
    stats = degree_stats(graph)
    d = stats.d
    lam_min = instance.family.lambda_min
    r = Fraction(override_r) if override_r is not None else Fraction(4 * d * k, 1) / (eps * lam_min) + k
    if r <= k:
        raise ValueError("r must exceed the committee size")
    split = Fraction(2 * k * (d - 1)) * r**d / ((r - k) * eps)
    if apx_opt > split:
        keep_n = math.ceil(r)
        singles = singleton_scores(graph, instance.family)
        order = sorted(graph.candidates, key=lambda c: (-singles[c], c))
        removed = tuple(sorted(order[keep_n:]))
        reduced = instance.drop_candidates(removed) if removed else instance
        trace = CandidateStageTrace(
            eps, apx_opt, "high-threshold", r=r, split_threshold=split, removed=removed
        )
        return reduced, trace
    psi: Optional[Fraction] = None
    if override_w_cap is not None:
        w_cap = as_rational(override_w_cap)
    else:
        psi = Fraction(math.ceil(INV_GREEDY_RATIO * split))
        w_cap = psi / lam_min
        certified = [c for c in sorted(graph.candidates) if graph.degree(c) >= w_cap]
        if certified:
            # That candidate alone already reaches the optimum bound, so the
            # instance collapses to it.
            winner = certified[0]
            removed = tuple(sorted(c for c in graph.candidates if c != winner))
            trace = CandidateStageTrace(
                eps,
                apx_opt,
                "low-threshold",
                r=r,
                split_threshold=split,
                psi=psi,
                w_cap=w_cap,
                certified_candidate=winner,
                removed=removed,
            )
            return instance.drop_candidates(removed), trace
    w_size = override_w_size if override_w_size is not None else math.floor(w_cap) * k + 1
    reduced, deletions = apply_sunflower_rule(instance, w_cap, w_size, exhaustive=True)
    trace = CandidateStageTrace(
        eps,
        apx_opt,
        "low-threshold",
        r=r,
        split_threshold=split,
        psi=psi,
        w_cap=w_cap,
        w_size=w_size,
        removed=tuple(dl.candidate for dl in deletions),
        deletions=deletions,
    )
    return reduced, trace


def reduce_voters(instance: Instance, eps: Fraction) -> tuple[Instance, VoterStageTrace]:
    """Thin duplicate-voter groups by the scale factor s.

    Voters are grouped by identical approval set (members of a group must
    carry identical vectors); each group of multiplicity m keeps floor(m/s)
    of its voters. Afterwards s * (reduced score) tracks the original score
    of every k-committee up to a bounded additive error. When the computed s
    is at most 1 the stage has no thinning power and returns the instance
    unchanged with an effective scale of 1, which satisfies the same bound
    trivially. Candidates and vectors are never touched.
    """
    eps = _require_eps(eps)
    graph = instance.graph
    k = instance.k
    if k == 0 or not graph.voters:
        return instance, VoterStageTrace(eps, ZERO)
    groups: dict[frozenset, list[str]] = {}
    for v in graph.voters:
        groups.setdefault(graph.approvals[v], []).append(v)
    for key, members in groups.items():
        vec0 = instance.family.vectors[members[0]]
        for v in members[1:]:
            if instance.family.vectors[v] != vec0:
                raise ValueError(
                    f"voters {members[0]!r} and {v!r} share an approval set but "
                    "carry different OWA vectors; only true duplicates merge"
                )
    from .solvers import greedy  # deferred: solvers builds on this module

    apx_opt = greedy(instance).score
    stats = degree_stats(graph)
    n = len(graph.candidates)
    eps_tilde = eps / 2
    eps_star = GREEDY_RATIO * eps_tilde
    s_formula = eps_star * apx_opt / Fraction(k * 10 * stats.d * n**stats.d)
    if s_formula <= 1:
        kept = {sorted(members)[0]: len(members) for members in groups.values()}
        trace = VoterStageTrace(
            eps,
            apx_opt,
            eps_tilde=eps_tilde,
            eps_star=eps_star,
            scale_formula=s_formula,
            scale=ONE,
            kept_multiplicities=kept,
        )
        return instance, trace
    kept_ids: list[str] = []
    kept_mult: dict[str, int] = {}
    for key in sorted(groups, key=lambda s: tuple(sorted(s))):
        members = sorted(groups[key])
        count = math.floor(Fraction(len(members)) / s_formula)
        kept_mult[members[0]] = count
        kept_ids.extend(members[:count])
    removed = tuple(sorted(set(graph.voters) - set(kept_ids)))
    reduced = instance.keep_voters(kept_ids)
    trace = VoterStageTrace(
        eps,
        apx_opt,
        eps_tilde=eps_tilde,
        eps_star=eps_star,
        scale_formula=s_formula,
        scale=s_formula,
        kept_multiplicities=kept_mult,
        removed=removed,
    )
    return reduced, trace


def kernelize(instance: Instance, eps: Fraction) -> tuple[Instance, KernelTrace]:
    """Candidate reduction then voter reduction, each run at eps/2.

    The composition keeps at least a (1 - eps/2)^2 >= 1 - eps fraction of the
    optimum reachable through identity lifting.
    """
    eps = _require_eps(eps)
    half = eps / 2
    after_candidates, cand_trace = reduce_candidates(instance, half)
    reduced, voter_trace = reduce_voters(after_candidates, half)
    trace = KernelTrace(eps, cand_trace, voter_trace, instance, reduced)
    return reduced, trace


def lift(solution, trace: KernelTrace):
    """Identity lifting: same members, score recomputed on the original."""
    from .solvers import Committee

    missing = set(solution.members) - set(trace.original.graph.candidates)
    if missing:
        raise ValueError(f"solution members absent from the original instance: {sorted(missing)}")
    scorer = make_scorer(trace.original.graph, trace.original.family)
    return Committee(
        members=tuple(sorted(solution.members)),
        score=scorer(solution.members),
        size_bound_used=solution.size_bound_used,
    )
