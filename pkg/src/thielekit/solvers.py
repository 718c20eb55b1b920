"""Committee-selection solvers.

All solvers operate on a sanitized, normalized :class:`~thielekit.instance.Instance`
and report exact rational scores in internal units. The menu:

* ``brute_force`` — exhaustive oracle, budgeted;
* ``greedy`` — marginal-gain greedy, within a 1 - 1/e factor of the optimum
  whenever every weight vector is non-increasing;
* ``fptas`` — decision-version approximation scheme: exact search after
  exhaustive sunflower deletions at low thresholds, search over a bounded
  top set of candidates at high thresholds;
* ``additive`` — recursive solver returning one extra committee seat in
  exchange for hitting the threshold exactly; its "no" answers are reliable;
* ``color_coding`` — randomized scheme for one shared weight vector,
  parameterized by the threshold; returned committees are always checked, so
  only the "no" side can err;
* ``pav_dispatch`` — PAV case analysis routing between harmonic-threshold
  shortcuts and color coding;
* ``decide_by_delta`` — optimization driver using the k * (max candidate
  degree) score ceiling as an immediate rejection certificate.

Determinism: every tie (argmax, top-r selection, probe order, coloring) is
broken by candidate id, and all randomness flows from a caller-supplied seed
through string-derived generators, so identical inputs give identical
outputs.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional

from .instance import Instance
from .profile_graph import ProfileGraph, degree_stats
from .reductions import apply_sunflower_rule
from .scoring import (
    ZERO,
    OwaFamily,
    OwaVector,
    as_rational,
    make_scorer,
    singleton_scores,
)

DEFAULT_SUBSET_BUDGET = 2_000_000
DEFAULT_PATTERN_BUDGET = 24  # cap on k * t' for pattern enumeration
DEFAULT_NODE_BUDGET = 50_000


class BudgetExceededError(RuntimeError):
    """An exhaustive search would exceed its configured budget."""


@dataclass(frozen=True)
class Committee:
    """A committee with its exact score on the instance it was reported for."""

    members: tuple[str, ...]
    score: Fraction
    size_bound_used: int

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if len(self.members) > self.size_bound_used:
            raise ValueError("committee exceeds its size bound")


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one solver run; ``committee is None`` means "no-instance"."""

    committee: Optional[Committee]
    stats: Mapping[str, Any] = field(default_factory=dict)

    @property
    def is_no_instance(self) -> bool:
        return self.committee is None


def _best_subset(
    graph: ProfileGraph,
    family: OwaFamily,
    pool: Iterable[str],
    size: int,
    budget: int,
) -> tuple[tuple[str, ...], Fraction, int]:
    """Best exactly-``size`` committee from ``pool`` (ties: lexicographic).

    Scores are monotone, so the best committee of size at most k is realized
    at size min(k, |pool|); callers rely on that.
    """
    ids = sorted(pool)
    size = min(size, len(ids))
    total = math.comb(len(ids), size)
    if total > budget:
        raise BudgetExceededError(
            f"{total} subsets of size {size} exceed the budget of {budget}"
        )
    scorer = make_scorer(graph, family)
    best: Optional[tuple[str, ...]] = None
    best_score = ZERO
    examined = 0
    for combo in itertools.combinations(ids, size):
        examined += 1
        sc = scorer(combo)
        if best is None or sc > best_score:
            best, best_score = combo, sc
    return (best if best is not None else ()), best_score, examined


def brute_force(instance: Instance, budget: int = DEFAULT_SUBSET_BUDGET) -> SolveOutcome:
    """Exhaustive optimum over all committees of size min(k, |C|).

    With a threshold set, certifies "no-instance" whenever the optimum falls
    short. This is the reference oracle the other solvers are tested against.
    """
    members, best_score, examined = _best_subset(
        instance.graph, instance.family, instance.graph.candidates, instance.k, budget
    )
    stats = {"solver": "exact", "subsets_examined": examined}
    if instance.t is not None and best_score < instance.t:
        return SolveOutcome(None, stats)
    return SolveOutcome(Committee(members, best_score, instance.k), stats)


def greedy(instance: Instance) -> Committee:
    """Iterated best-marginal selection, ties broken by candidate id.

    With non-increasing vectors every voter's satisfaction is monotone
    submodular, which puts the greedy score within a 1 - 1/e factor of the
    optimum.
    """
    graph, family, k = instance.graph, instance.family, instance.k
    rounds = min(k, len(graph.candidates))
    chosen: list[str] = []
    counts: dict[str, int] = {v: 0 for v in graph.voters}
    total = ZERO
    remaining = sorted(graph.candidates)
    for _ in range(rounds):
        best_c = None
        best_gain = None
        for c in remaining:
            gain = ZERO
            for v in graph.approvers[c]:
                gain += family.vectors[v].entry(counts[v] + 1)
            if best_gain is None or gain > best_gain:
                best_c, best_gain = c, gain
        chosen.append(best_c)
        remaining.remove(best_c)
        total += best_gain
        for v in graph.approvers[best_c]:
            counts[v] += 1
    return Committee(tuple(chosen), total, k)


def fptas(
    instance: Instance,
    eps: Fraction,
    *,
    override_r: Optional[int] = None,
    override_w_cap: Optional[Fraction] = None,
    override_w_size: Optional[int] = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> SolveOutcome:
    """Threshold-decision approximation scheme.

    Splits on the threshold t against a bound derived from r = 4dk/(eps *
    lambda_min) + k. Low thresholds are decided exactly: one candidate of
    degree >= t/lambda_min is itself a solution; otherwise all degrees are
    below the cap W, the sunflower rule runs exhaustively (preserving the
    optimum), and the survivors are searched outright. High thresholds
    restrict the search to the ceil(r) candidates of highest singleton score,
    which always retain a committee of score >= (1-eps)t when one of score
    >= t exists; the answer is accepted at the (1-eps)t mark.

    On instances whose optimum reaches t the outcome is never "no-instance".
    The natural r and W are enormous, which simply routes small instances
    into the exact low-threshold search; the overrides substitute test-scale
    values for r, W and the sunflower size.
    """
    eps = as_rational(eps)
    if not (0 < eps < 1):
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if instance.t is None:
        raise ValueError("fptas needs a decision threshold")
    t, k, graph = instance.t, instance.k, instance.graph
    stats: dict[str, Any] = {"solver": "fptas", "epsilon": str(eps)}
    if k == 0 or not graph.candidates or not graph.voters:
        stats["case"] = "degenerate"
        if t <= 0:
            return SolveOutcome(Committee((), ZERO, k), stats)
        return SolveOutcome(None, stats)
    d = degree_stats(graph).d
    lam_min = instance.family.lambda_min
    r = Fraction(override_r) if override_r is not None else Fraction(4 * d * k) / (eps * lam_min) + k
    if r <= k:
        raise ValueError("r must exceed the committee size")
    split = Fraction(2 * k * (d - 1)) * r**d / ((r - k) * eps)
    stats["r"] = str(r)
    stats["split_threshold"] = str(split)
    if t <= split:
        stats["case"] = "low-threshold"
        degree_cert = t / lam_min
        for c in sorted(graph.candidates):
            if graph.degree(c) >= degree_cert:
                scorer = make_scorer(graph, instance.family)
                stats["degree_certificate"] = c
                return SolveOutcome(Committee((c,), scorer([c]), k), stats)
        w_cap = as_rational(override_w_cap) if override_w_cap is not None else split / lam_min
        w_size = override_w_size if override_w_size is not None else math.floor(w_cap) * k + 1
        reduced, deletions = apply_sunflower_rule(instance, w_cap, w_size, exhaustive=True)
        stats["w_cap"] = str(w_cap)
        stats["w_size"] = w_size
        stats["sunflower_deletions"] = len(deletions)
        members, best_score, examined = _best_subset(
            graph, instance.family, reduced.graph.candidates, k, budget
        )
        stats["subsets_examined"] = examined
        if best_score >= t:
            return SolveOutcome(Committee(members, best_score, k), stats)
        return SolveOutcome(None, stats)
    stats["case"] = "high-threshold"
    keep_n = math.ceil(r)
    singles = singleton_scores(graph, instance.family)
    top = sorted(graph.candidates, key=lambda c: (-singles[c], c))[:keep_n]
    stats["top_candidates"] = len(top)
    members, best_score, examined = _best_subset(graph, instance.family, top, k, budget)
    stats["subsets_examined"] = examined
    if best_score >= (1 - eps) * t:
        return SolveOutcome(Committee(members, best_score, k), stats)
    return SolveOutcome(None, stats)


def additive(
    instance: Instance,
    *,
    budget: int = DEFAULT_SUBSET_BUDGET,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> SolveOutcome:
    """One extra seat instead of one epsilon: size <= k+1, score >= t.

    Recursive case analysis. Small candidate sets and small thresholds are
    decided exactly (the latter after exhaustive sunflower deletions under
    the degree cap t/lambda_min). Otherwise the approximation scheme runs at
    eps = lambda_min/(4k); if it certifies "no" the instance is a no-instance,
    and if it returns S', either some high-scoring candidate completes S' to
    the threshold using the spare seat, or every solution meets the
    high-scoring set H, in which case the solver branches on y in H and
    recurses with y's weight slots consumed. A "no-instance" answer is
    always reliable; a returned committee always has score >= t.
    """
    if instance.t is None:
        raise ValueError("additive needs a decision threshold")
    d = degree_stats(instance.graph).d
    counters = {"nodes": 0, "subsets_examined": 0, "sunflower_deletions": 0, "fptas_calls": 0}
    members = _additive_search(
        instance.graph, instance.family, instance.k, instance.t, d, counters, budget, node_budget
    )
    stats: dict[str, Any] = {"solver": "additive", **counters}
    if members is None:
        return SolveOutcome(None, stats)
    scorer = make_scorer(instance.graph, instance.family)
    committee = Committee(tuple(sorted(members)), scorer(members), instance.k + 1)
    return SolveOutcome(committee, stats)


def _additive_search(
    graph: ProfileGraph,
    family: OwaFamily,
    k: int,
    t: Fraction,
    d: int,
    counters: dict,
    budget: int,
    node_budget: int,
) -> Optional[frozenset]:
    counters["nodes"] += 1
    if counters["nodes"] > node_budget:
        raise BudgetExceededError(f"recursion exceeded {node_budget} nodes")
    if k == 0:
        return frozenset() if t <= 0 else None
    if not graph.candidates or not graph.voters:
        return frozenset() if t <= 0 else None
    level = Instance(graph, family, k, t)
    if len(graph.candidates) <= k * (d - 1) * (4 * k * k) ** (d - 1) + 1:
        members, best, examined = _best_subset(graph, family, graph.candidates, k, budget)
        counters["subsets_examined"] += examined
        return frozenset(members) if best >= t else None
    lam_min = family.lambda_min
    if t <= 8 * k**4 * d * lam_min:
        degree_cert = t / lam_min
        for c in sorted(graph.candidates):
            if graph.degree(c) >= degree_cert:
                return frozenset({c})
        w_size = math.floor(degree_cert) * k + 1
        reduced, deletions = apply_sunflower_rule(level, degree_cert, w_size, exhaustive=True)
        counters["sunflower_deletions"] += len(deletions)
        members, best, examined = _best_subset(
            graph, family, reduced.graph.candidates, k, budget
        )
        counters["subsets_examined"] += examined
        return frozenset(members) if best >= t else None
    counters["fptas_calls"] += 1
    eps = lam_min / (4 * k)
    outcome = fptas(level, eps, budget=budget)
    counters["subsets_examined"] += outcome.stats.get("subsets_examined", 0)
    if outcome.committee is None:
        return None
    s_prime = frozenset(outcome.committee.members)
    singles = singleton_scores(graph, family)
    h_size = math.floor(k * (d - 1) * (4 * k * k * lam_min) ** (d - 1)) + 1
    high = sorted(graph.candidates, key=lambda c: (-singles[c], c))[:h_size]
    scorer = make_scorer(graph, family)
    for x in sorted(high):
        if scorer(s_prime | {x}) >= t:
            return s_prime | {x}
    from .scoring import restrict

    for y in sorted(high):
        reduced_family = restrict(family, graph, {y})
        flagged = set(reduced_family.flagged_voters())
        sub_graph = graph.drop_candidates([y])
        if flagged:
            sub_graph = sub_graph.keep_voters([v for v in sub_graph.voters if v not in flagged])
        sub_family = reduced_family.keep(sub_graph.voters)
        sub = _additive_search(
            sub_graph, sub_family, k - 1, t - singles[y], d, counters, budget, node_budget
        )
        if sub is not None:
            return sub | {y}
    return None


def _shared_vector(instance: Instance) -> OwaVector:
    """The one weight vector all voters share, cut to k slots.

    Per-voter vectors may be prefixes of different lengths (a voter never
    needs more slots than approvals); they must all agree on their common
    prefix. Anything else is heterogeneous and rejected.
    """
    longest: Optional[OwaVector] = None
    for v in sorted(instance.family.vectors):
        vec = instance.family.vectors[v]
        if longest is None or len(vec) > len(longest):
            longest = vec
    if longest is None:
        raise ValueError("instance has no voters")
    for v, vec in instance.family.vectors.items():
        if vec.weights != longest.weights[: len(vec)]:
            raise ValueError(
                "voters carry different OWA vectors; this solver needs one shared vector"
            )
    return longest.truncated(instance.k) if instance.k <= len(longest) else longest


def color_coding(
    instance: Instance,
    seed: int,
    reps: Optional[int] = None,
    pattern_budget: int = DEFAULT_PATTERN_BUDGET,
) -> SolveOutcome:
    """Randomized threshold decision for one shared weight vector.

    For each guess t' of the number of positively-satisfied voters, color
    candidates with k colors and voters with t' colors uniformly at random;
    for every bipartite demand pattern on [k] x [t'], pick per candidate
    color class the first candidate (id order) whose approvers meet every
    demanded voter class, and accept the assembled set when its exact score
    reaches t. One good coloring of a solution committee exists per suitable
    t', so k^k * t'^t' repetitions (the default) succeed with constant
    probability; returned committees are always genuine, only "no-instance"
    can be wrong.

    t' ranges over 1..min(|V|, ceil(t / lambda_1)), a superset of the counts
    any solution can realize. Iteration stops at the first success.
    """
    if instance.t is None:
        raise ValueError("color_coding needs a decision threshold")
    shared = _shared_vector(instance)
    t, k, graph = instance.t, instance.k, instance.graph
    stats: dict[str, Any] = {"solver": "colorcoding", "seed": seed}
    if t <= 0:
        stats["repetitions_used"] = 0
        return SolveOutcome(Committee((), ZERO, k), stats)
    if k == 0 or not graph.candidates or not graph.voters:
        stats["repetitions_used"] = 0
        return SolveOutcome(None, stats)
    lam1 = shared.first
    if lam1 <= 0:
        stats["repetitions_used"] = 0
        return SolveOutcome(None, stats)
    t_upper = min(len(graph.voters), math.ceil(t / lam1))
    scorer = make_scorer(graph, instance.family)
    candidates = sorted(graph.candidates)
    voters = sorted(graph.voters)
    total_reps = 0
    for t_prime in range(1, t_upper + 1):
        if k * t_prime > pattern_budget:
            raise BudgetExceededError(
                f"k*t' = {k * t_prime} exceeds the pattern budget {pattern_budget}"
            )
        rounds = reps if reps is not None else k**k * t_prime**t_prime
        for rep in range(rounds):
            total_reps += 1
            rng = random.Random(f"{seed}:{t_prime}:{rep}")
            cand_color = {c: rng.randrange(k) for c in candidates}
            voter_color = {v: rng.randrange(t_prime) for v in voters}
            found = _match_patterns(
                graph, scorer, candidates, cand_color, voter_color, k, t_prime, t
            )
            if found is not None:
                stats.update(
                    {
                        "repetitions_used": total_reps,
                        "t_prime": t_prime,
                        "repetition": rep,
                    }
                )
                return SolveOutcome(Committee(tuple(sorted(found)), scorer(found), k), stats)
    stats["repetitions_used"] = total_reps
    return SolveOutcome(None, stats)


def _match_patterns(
    graph: ProfileGraph,
    scorer,
    candidates: list[str],
    cand_color: dict[str, int],
    voter_color: dict[str, int],
    k: int,
    t_prime: int,
    t: Fraction,
) -> Optional[frozenset]:
    size = 1 << t_prime
    # first candidate (id order) per color class whose voter-class mask
    # covers each demanded mask; superset minimization over subsets
    table: list[list[Optional[int]]] = [[None] * size for _ in range(k)]
    for idx in range(len(candidates) - 1, -1, -1):
        c = candidates[idx]
        mask = 0
        for v in graph.approvers[c]:
            mask |= 1 << voter_color[v]
        table[cand_color[c]][mask] = idx
    for i in range(k):
        row = table[i]
        for bit in range(t_prime):
            step = 1 << bit
            for m in range(size):
                if not m & step:
                    cand = row[m | step]
                    if cand is not None and (row[m] is None or cand < row[m]):
                        row[m] = cand
    seen: set[frozenset] = set()
    for pattern in itertools.product(range(size), repeat=k):
        chosen = frozenset(
            candidates[table[i][demand]]
            for i, demand in enumerate(pattern)
            if table[i][demand] is not None
        )
        if chosen in seen:
            continue
        seen.add(chosen)
        if scorer(chosen) >= t:
            return chosen
    return None


def _harmonic(j: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, j + 1)), ZERO)


def pav_dispatch(
    instance: Instance,
    seed: int = 0,
    reps: Optional[int] = None,
    pattern_budget: int = DEFAULT_PATTERN_BUDGET,
) -> SolveOutcome:
    """Threshold decision under PAV via case analysis.

    When the threshold is below the harmonic number reachable through a
    single busiest voter, her neighborhood already carries a certified
    solution in polynomial time; otherwise the committee size is bounded in
    terms of the threshold and color coding takes over.
    """
    if instance.t is None:
        raise ValueError("pav_dispatch needs a decision threshold")
    shared = _shared_vector(instance)
    for i, w in enumerate(shared.weights):
        if w != Fraction(1, i + 1):
            raise ValueError("pav_dispatch needs the PAV vector (1, 1/2, 1/3, ...)")
    t, k, graph = instance.t, instance.k, instance.graph
    delta_v = max((graph.voter_degree(v) for v in graph.voters), default=0)
    scorer = make_scorer(graph, instance.family)
    if k <= t:
        out = color_coding(instance, seed, reps, pattern_budget)
        stats = {"solver": "pav", "method": "colorcoding", **out.stats}
        stats["solver"] = "pav"
        return SolveOutcome(out.committee, stats)
    busiest = min(
        (v for v in graph.voters if graph.voter_degree(v) == delta_v),
        default=None,
    )
    if k <= delta_v and t <= _harmonic(k):
        members = tuple(sorted(graph.approvals[busiest])[:k])
        stats = {"solver": "pav", "method": "harmonic-k-of-busiest-voter", "voter": busiest}
        return SolveOutcome(Committee(members, scorer(members), k), stats)
    if k > delta_v and t <= _harmonic(delta_v):
        base = sorted(graph.approvals[busiest]) if busiest is not None else []
        pad = [c for c in sorted(graph.candidates) if c not in set(base)]
        members = tuple((base + pad)[:k])
        stats = {
            "solver": "pav",
            "method": "harmonic-full-neighborhood",
            "voter": busiest,
        }
        return SolveOutcome(Committee(members, scorer(members), k), stats)
    out = color_coding(instance, seed, reps, pattern_budget)
    stats = {"solver": "pav", "method": "colorcoding", **out.stats}
    stats["solver"] = "pav"
    return SolveOutcome(out.committee, stats)


def decide_by_delta(
    instance: Instance,
    engine: str = "exact",
    eps: Optional[Fraction] = None,
    seed: int = 0,
    reps: Optional[int] = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> SolveOutcome:
    """Optimization driver with the k * Delta_C score ceiling.

    No committee can score above k * (max candidate degree) once weights are
    normalized, so any caller-supplied threshold beyond that is rejected
    immediately. Without a threshold the optimum is found by the exact or
    greedy engine, or bracketed by bisection over the score grid (all
    achievable scores are multiples of 1/L for L the common denominator of
    the weights) using the approximate decision engines; those engines make
    the bisection result approximate in the same degree they are.
    """
    k, graph = instance.k, instance.graph
    delta_c = max((graph.degree(c) for c in graph.candidates), default=0)
    ceiling = Fraction(k * delta_c)
    if instance.t is not None:
        if instance.t > ceiling:
            return SolveOutcome(
                None,
                {"solver": "decide_by_delta", "method": "ceiling-certificate", "ceiling": str(ceiling)},
            )
        out = brute_force(instance, budget)
        stats = {"solver": "decide_by_delta", "method": "exact-decision", **out.stats}
        stats["solver"] = "decide_by_delta"
        return SolveOutcome(out.committee, stats)
    if engine == "exact":
        out = brute_force(instance, budget)
        stats = {"solver": "decide_by_delta", "method": "exact", **out.stats}
        stats["solver"] = "decide_by_delta"
        return SolveOutcome(out.committee, stats)
    if engine == "greedy":
        committee = greedy(instance)
        return SolveOutcome(committee, {"solver": "decide_by_delta", "method": "greedy"})
    if engine not in ("fptas", "colorcoding"):
        raise ValueError(f"unknown engine {engine!r}")
    denom = 1
    for vec in instance.family.vectors.values():
        for w in vec.weights:
            denom = math.lcm(denom, w.denominator)
    lo, hi = 0, int(ceiling * denom)
    best = Committee((), ZERO, k)
    probes = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        target = Fraction(mid, denom)
        probes += 1
        if engine == "fptas":
            out = fptas(instance.with_threshold(target), eps if eps is not None else Fraction(1, 4), budget=budget)
        else:
            out = color_coding(instance.with_threshold(target), seed=seed + mid, reps=reps)
        if out.committee is not None:
            if out.committee.score > best.score:
                best = Committee(out.committee.members, out.committee.score, k)
            achieved = int(out.committee.score * denom)
            if achieved >= mid:
                lo = achieved
            else:
                hi = mid - 1
        else:
            hi = mid - 1
    stats = {"solver": "decide_by_delta", "method": engine, "probes": probes, "grid_denominator": denom}
    return SolveOutcome(best, stats)
