"""Instance generators with structural control, and the property harness.

The generators are pure functions of their spec (same seed, same instance)
and enforce their structural promises by construction plus a final check:
``gen_kdd_free`` inserts edges only when no d candidates would end up
sharing d voters, ``gen_sunflower_fixture`` plants a sunflower with a known
core, and ``duplicate_heavy_instance`` builds the huge duplicate-voter
groups that give the voter reduction an actual scale factor above 1.

``run_property_suite`` wires every solver to the brute-force oracle over
these generators and raises with reproduction seeds on any failure.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

from .instance import Instance, family_from_rule, load_instance
from .profile_graph import (
    ProfileGraph,
    contains_biclique,
    degree_stats,
    find_sunflower,
    high_degree_set,
    kdd_parameter,
)
from .reductions import (
    GREEDY_RATIO,
    apply_sunflower_rule,
    kernelize,
    lift,
    reduce_voters,
)
from .scoring import (
    ONE,
    ZERO,
    OwaFamily,
    OwaVector,
    ThieleFunction,
    check_non_increasing,
    is_monotone_submodular,
    make_scorer,
    normalize,
    owa_from_thiele,
    restrict,
    score,
)
from . import solvers
from .solvers import Committee, brute_force, color_coding, fptas, greedy


class GenerationError(RuntimeError):
    """The generator exhausted its rejection budget."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Structural knobs for random instances.

    ``d`` is the promise: the generated graph contains no d voters approving
    the same d candidates. ``duplicates`` plants one group of identical
    voters per entry (each group gets a fresh approval set of size at most
    d-1, which keeps multiplicity harmless to the promise).
    """

    candidates: int
    voters: int
    d: int = 2
    max_voter_degree: int = 3
    duplicates: tuple[int, ...] = ()
    rule: str = "pav"  # pav | cc | av | random (per-voter random vectors)
    k: int = 2
    seed: int = 0


def _random_vector(rng: random.Random, length: int) -> OwaVector:
    entries = sorted(
        (Fraction(rng.randint(0, 6), rng.randint(1, 6)) for _ in range(length)),
        reverse=True,
    )
    if not entries:
        return OwaVector(())
    if entries[0] == 0:
        entries[0] = Fraction(1, rng.randint(1, 3))
    return OwaVector(tuple(entries))


def _admissible(graph_approvers, voter_set, candidate, d) -> bool:
    # Adding edge (candidate, voter) makes the voter a common neighbor of
    # every candidate subset of her approvals plus the new candidate; the
    # promise survives iff each such d-subset currently shares at most d-2
    # voters.
    others = sorted(voter_set)
    if len(others) < d - 1:
        return True
    from itertools import combinations

    base = graph_approvers[candidate]
    for group in combinations(others, d - 1):
        common = base
        for x in group:
            common = common & graph_approvers[x]
            if len(common) <= d - 2:
                break
        if len(common) > d - 2:
            return False
    return True


def gen_kdd_free(spec: GeneratorSpec) -> Instance:
    """Random instance whose graph provably has no K_{d,d}.

    Edges are inserted one voter at a time under the common-neighborhood
    check; approval sets are kept pairwise distinct except for the planted
    duplicate groups. Deterministic per seed.
    """
    if spec.d < 2:
        raise ValueError("the structural parameter d must be at least 2")
    base_count = spec.voters - sum(spec.duplicates)
    if base_count < 0:
        raise ValueError("duplicate multiplicities exceed the voter count")
    rng = random.Random(f"kdd:{spec.seed}")
    candidates = [f"c{i:02d}" for i in range(spec.candidates)]
    approvers: dict[str, frozenset[str]] = {c: frozenset() for c in candidates}
    approvals: dict[str, frozenset[str]] = {}
    seen_sets: set[frozenset[str]] = set()
    voter_ids: list[str] = []
    next_voter = 0

    def fresh_voter() -> str:
        nonlocal next_voter
        vid = f"v{next_voter:03d}"
        next_voter += 1
        return vid

    def place_voter(max_degree: int, forced_set: Optional[frozenset] = None) -> frozenset:
        nonlocal approvers
        for _ in range(400):
            if forced_set is not None:
                chosen = forced_set
            else:
                target = rng.randint(1, max(1, max_degree))
                picked: set[str] = set()
                for c in rng.sample(candidates, len(candidates)):
                    if len(picked) >= target:
                        break
                    if _admissible(approvers, picked, c, spec.d):
                        picked.add(c)
                chosen = frozenset(picked)
            if chosen and chosen not in seen_sets:
                vid = fresh_voter()
                voter_ids.append(vid)
                approvals[vid] = chosen
                for c in chosen:
                    approvers[c] = approvers[c] | {vid}
                seen_sets.add(chosen)
                return chosen
            if forced_set is not None:
                raise GenerationError("could not place the duplicate group distinctly")
        raise GenerationError("rejection budget exceeded while placing a voter")

    for _ in range(base_count):
        place_voter(spec.max_voter_degree)

    for multiplicity in spec.duplicates:
        if multiplicity < 1:
            raise ValueError("duplicate multiplicities must be positive")
        degree = rng.randint(1, max(1, min(spec.d - 1, spec.max_voter_degree)))
        group_set = None
        for _ in range(400):
            attempt = frozenset(rng.sample(candidates, min(degree, len(candidates))))
            if attempt and attempt not in seen_sets:
                group_set = attempt
                break
        if group_set is None:
            raise GenerationError("could not find a fresh approval set for duplicates")
        seen_sets.add(group_set)
        for _ in range(multiplicity):
            vid = fresh_voter()
            voter_ids.append(vid)
            approvals[vid] = group_set
            for c in group_set:
                approvers[c] = approvers[c] | {vid}

    graph = ProfileGraph.from_approvals(candidates, approvals, voter_ids)
    if contains_biclique(graph, spec.d, spec.d):
        raise GenerationError("generator violated its structural promise")
    if spec.rule == "random":
        slots = max(spec.k, 1)
        vectors = {
            v: _random_vector(rng, min(graph.voter_degree(v), slots)) for v in voter_ids
        }
        family = OwaFamily(vectors)
    else:
        family = family_from_rule(graph, spec.rule, spec.k)
    return load_instance(graph, family, spec.k)


def gen_sunflower_fixture(
    w: int,
    core_size: int,
    seed: int,
    extra_candidates: int = 2,
    rule: str = "pav",
    k: int = 2,
) -> Instance:
    """Instance with a planted sunflower of ``w`` members over a known core.

    Core voters approve every member; each member gets one or two private
    petal voters; decoy candidates only touch their own private voters, so
    the planted pairwise intersections stay exactly the core.
    """
    if w < 2:
        raise ValueError("a planted sunflower needs at least two members")
    rng = random.Random(f"sunflower:{seed}")
    members = [f"m{i:02d}" for i in range(w)]
    decoys = [f"z{i:02d}" for i in range(extra_candidates)]
    approvals: dict[str, frozenset[str]] = {}
    voter_ids: list[str] = []

    def add_voter(vid: str, approved) -> None:
        voter_ids.append(vid)
        approvals[vid] = frozenset(approved)

    for i in range(core_size):
        add_voter(f"u{i:02d}", members)
    petal_index = 0
    for m in members:
        for _ in range(rng.randint(1, 2)):
            add_voter(f"p{petal_index:03d}", [m])
            petal_index += 1
    for i, z in enumerate(decoys):
        add_voter(f"q{i:03d}", [z])
    graph = ProfileGraph.from_approvals(members + decoys, approvals, voter_ids)
    family = family_from_rule(graph, rule, k)
    return load_instance(graph, family, k)


def duplicate_heavy_instance(
    seed: int,
    groups: int = 2,
    base_multiplicity: int = 2500,
    k: int = 1,
    rule: str = "pav",
) -> Instance:
    """Tiny candidate set, huge duplicate-voter groups.

    Group sizes in the thousands are what push the voter-reduction scale
    factor above 1; each group approves its own single candidate, so the
    graph trivially keeps its structural promise.
    """
    rng = random.Random(f"dups:{seed}")
    candidates = [f"c{i:02d}" for i in range(groups)]
    approvals: dict[str, frozenset[str]] = {}
    voter_ids: list[str] = []
    counter = 0
    for i, c in enumerate(candidates):
        size = base_multiplicity - rng.randint(0, base_multiplicity // 3) if i else base_multiplicity
        for _ in range(max(size, 1)):
            vid = f"v{counter:05d}"
            counter += 1
            voter_ids.append(vid)
            approvals[vid] = frozenset([c])
    graph = ProfileGraph.from_approvals(candidates, approvals, voter_ids)
    family = family_from_rule(graph, rule, k)
    return load_instance(graph, family, k)


def random_instance(
    rng: random.Random,
    max_candidates: int = 12,
    max_voters: int = 16,
    d: int = 2,
    k_max: int = 3,
    rules: tuple[str, ...] = ("pav", "cc", "av", "random"),
) -> Instance:
    """One random desk-scale instance drawn through :func:`gen_kdd_free`."""
    m = rng.randint(3, max_candidates)
    n = rng.randint(3, max_voters)
    k = rng.randint(1, min(k_max, m))
    spec = GeneratorSpec(
        candidates=m,
        voters=n,
        d=d,
        max_voter_degree=rng.randint(1, 3),
        rule=rng.choice(list(rules)),
        k=k,
        seed=rng.randrange(2**30),
    )
    return gen_kdd_free(spec)


def oracle_best(instance: Instance) -> Committee:
    """Brute-force optimum, threshold ignored."""
    out = brute_force(instance.with_threshold(None))
    return out.committee


# ---------------------------------------------------------------------------
# Property suites


class PropertyFailure(AssertionError):
    """At least one property case failed; the report carries the seeds."""

    def __init__(self, report: dict):
        self.report = report
        lines = []
        for name, entry in report.items():
            for failure in entry["failures"]:
                lines.append(f"{name}: {failure}")
        super().__init__("property failures:\n" + "\n".join(lines))


@dataclass
class SuiteConfig:
    cases: int = 12
    seed: int = 20240817
    greedy_fn: Optional[Callable[[Instance], Committee]] = None
    suites: Optional[tuple[str, ...]] = None


def _random_thiele(rng: random.Random, max_len: int = 8) -> ThieleFunction:
    length = rng.randint(1, max_len - 1)
    vals = [ZERO]
    for _ in range(length):
        vals.append(vals[-1] + Fraction(rng.randint(0, 5), rng.randint(1, 5)))
    return ThieleFunction(tuple(vals))


def direct_submodularity_matches(f: ThieleFunction, slots: int) -> bool:
    """Enumerate f_v(S u {x1}) + f_v(S u {x2}) >= f_v(S u {x1,x2}) + f_v(S)
    over one voter approving ``slots`` candidates; report whether it holds
    everywhere (and monotonicity too)."""
    from itertools import combinations

    vals = f.values[: slots + 1]
    if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
        return False
    universe = list(range(slots))

    def f_v(committee: frozenset) -> Fraction:
        return f.values[len(committee)]

    for size in range(slots - 1):
        for s in combinations(universe, size):
            s_set = frozenset(s)
            rest = [x for x in universe if x not in s_set]
            for x1, x2 in combinations(rest, 2):
                lhs = f_v(s_set | {x1}) + f_v(s_set | {x2})
                rhs = f_v(s_set | {x1, x2}) + f_v(s_set)
                if lhs < rhs:
                    return False
    return True


def _suite_lemma1(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"lemma1:{config.seed}")
    failures = []
    for case in range(config.cases * 10):
        f = _random_thiele(rng)
        expect = is_monotone_submodular(f)
        vec = owa_from_thiele(f) if len(f) >= 2 else None
        if vec is not None and check_non_increasing(vec) != expect:
            failures.append(f"case {case}: conversion disagrees for {f.values}")
        slots = min(len(f) - 1, 5)
        if slots >= 2:
            direct = direct_submodularity_matches(f, slots)
            truncated_ok = not any(
                f.values[i] > f.values[i + 1] for i in range(slots)
            ) and check_non_increasing(
                [f.values[i + 1] - f.values[i] for i in range(slots)]
            )
            if direct != truncated_ok:
                failures.append(f"case {case}: direct enumeration disagrees for {f.values}")
    return failures


def _suite_score_identity(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"scoreid:{config.seed}")
    failures = []
    for case in range(config.cases):
        inst = random_instance(rng)
        graph, family = inst.graph, inst.family
        cands = sorted(graph.candidates)
        for _ in range(6):
            s = frozenset(rng.sample(cands, rng.randint(0, min(3, len(cands)))))
            rest = [c for c in cands if c not in s]
            if not rest:
                continue
            c = rng.choice(rest)
            lhs = score(graph, family, s | {c})
            rhs = score(graph, family, s) + score(graph, restrict(family, graph, s), [c])
            if lhs != rhs:
                failures.append(f"case {case}: identity broke on S={sorted(s)}, c={c}")
            if score(graph, family, s) > lhs:
                failures.append(f"case {case}: monotonicity broke on S={sorted(s)}, c={c}")
        # restriction composes over disjoint committees
        if len(cands) >= 2:
            half = len(cands) // 2
            s1, s2 = frozenset(cands[:half]), frozenset(cands[half : half + 2])
            once = restrict(family, graph, s1 | s2)
            twice = restrict(restrict(family, graph, s1), graph, s2)
            if once != twice:
                failures.append(f"case {case}: restriction does not compose")
    return failures


def _suite_normalize_argmax(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"norm:{config.seed}")
    failures = []
    for case in range(config.cases):
        inst = random_instance(rng, max_candidates=7, max_voters=8)
        factor = Fraction(rng.randint(2, 5))
        scaled = OwaFamily({v: vec.scaled(factor) for v, vec in inst.family.vectors.items()})
        normalized, _ = normalize(scaled)
        k = min(inst.k, len(inst.graph.candidates))
        from itertools import combinations

        def argmax_set(family):
            best = None
            out = []
            for combo in combinations(sorted(inst.graph.candidates), k):
                sc = score(inst.graph, family, combo)
                if best is None or sc > best:
                    best, out = sc, [combo]
                elif sc == best:
                    out.append(combo)
            return set(out)

        if argmax_set(scaled) != argmax_set(normalized):
            failures.append(f"case {case}: normalization changed the maximizers")
    return failures


def _suite_graph_structure(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"graph:{config.seed}")
    failures = []
    for case in range(config.cases):
        inst = random_instance(rng, d=rng.choice([2, 3]))
        graph = inst.graph
        for c in graph.candidates:
            for v in graph.approvers[c]:
                if c not in graph.approvals[v]:
                    failures.append(f"case {case}: transpose mismatch at ({c}, {v})")
        last = None
        for d in range(1, 5):
            has = contains_biclique(graph, d, d)
            if last is False and has:
                failures.append(f"case {case}: biclique containment not monotone")
            last = has
        stats = degree_stats(graph)
        if stats.d > min(stats.delta_v, stats.delta_c) + 1:
            failures.append(f"case {case}: d exceeds the degree bound")
        if graph.voters:
            x = set(rng.sample(sorted(graph.voters), max(1, len(graph.voters) // 2)))
            beta = Fraction(rng.randint(3, 7), 2)
            got = high_degree_set(graph, x, beta, 2)
            brute = tuple(
                c
                for c in sorted(graph.candidates)
                if graph.degree(c) >= 2 and len(graph.approvers[c] & x) >= Fraction(len(x)) / beta
            )
            if got != brute:
                failures.append(f"case {case}: high-degree set disagrees with the filter")
    return failures


def _suite_sunflower(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"sunflower:{config.seed}")
    failures = []
    for case in range(config.cases):
        w = rng.randint(2, 4)
        core = rng.randint(0, 2)
        inst = gen_sunflower_fixture(w, core, seed=rng.randrange(2**30))
        graph = inst.graph
        ell = max(graph.degree(c) for c in graph.candidates)
        flower = find_sunflower(graph, ell, w, d=core + 2)
        if flower is None or len(flower.members) < w:
            failures.append(f"case {case}: planted sunflower (w={w}, core={core}) not found")
            continue
        for i, a in enumerate(flower.members):
            for b in flower.members[i + 1 :]:
                if graph.approvers[a] & graph.approvers[b] != flower.core:
                    failures.append(f"case {case}: sunflower core mismatch on ({a}, {b})")
        # completeness at the size bound, d = 2
        ell2, w2 = 2, 3
        need = 2 * ((w2 - 1) * ell2) ** 2
        spec = GeneratorSpec(
            candidates=need,
            voters=3 * need,
            d=2,
            max_voter_degree=2,
            rule="pav",
            k=2,
            seed=rng.randrange(2**30),
        )
        big = gen_kdd_free(spec)
        capped = [c for c in big.graph.candidates if big.graph.degree(c) <= ell2]
        if len(capped) >= need:
            flower2 = find_sunflower(big.graph, ell2, w2, d=2)
            if flower2 is None or len(flower2.members) < w2:
                failures.append(f"case {case}: completeness bound missed a sunflower")
    return failures


def _suite_greedy_ratio(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"greedy:{config.seed}")
    failures = []
    greedy_fn = config.greedy_fn or greedy
    for case in range(config.cases):
        inst = random_instance(rng)
        got = greedy_fn(inst)
        opt = oracle_best(inst)
        if got.score < GREEDY_RATIO * opt.score:
            failures.append(f"case {case}: greedy fell below the guarantee (seed path)")
        av = replace(inst, family=family_from_rule(inst.graph, "av", inst.k))
        if greedy_fn(av).score != oracle_best(av).score:
            failures.append(f"case {case}: greedy missed the optimum on a modular instance")
    return failures


def sunflower_rule_fixture(seed: int) -> tuple[Instance, Fraction, int]:
    """Instance plus safe (degree cap, sunflower size) on which the rule fires."""
    rng = random.Random(f"rulefix:{seed}")
    k = rng.choice([1, 2])
    cap = rng.choice([1, 2])
    w_size = cap * k + 1
    inst = gen_sunflower_fixture(
        w=w_size + rng.randint(0, 2),
        core_size=0 if cap == 1 else rng.choice([0, 1]),
        seed=rng.randrange(2**30),
        extra_candidates=rng.randint(0, 3),
        k=k,
    )
    graph = inst.graph
    while max(graph.degree(c) for c in graph.candidates) > cap:
        # shave petal voters until every degree fits under the cap
        heavy = [c for c in sorted(graph.candidates) if graph.degree(c) > cap]
        drop = sorted(graph.approvers[heavy[0]])[cap:]
        keep = [v for v in graph.voters if v not in set(drop)]
        graph = graph.keep_voters(keep)
    inst = load_instance(graph, inst.family.keep(graph.voters), k)
    return inst, Fraction(cap), w_size


def _suite_sunflower_rule_exact(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"ruleexact:{config.seed}")
    failures = []
    for case in range(config.cases):
        inst, cap, w_size = sunflower_rule_fixture(rng.randrange(2**30))
        reduced, deletions = apply_sunflower_rule(inst, cap, w_size, exhaustive=True)
        if not deletions:
            failures.append(f"case {case}: the rule did not fire")
            continue
        before = oracle_best(inst).score
        after = oracle_best(reduced).score
        if before != after:
            failures.append(f"case {case}: optimum changed {before} -> {after}")
    return failures


def _suite_fptas(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"fptas:{config.seed}")
    failures = []
    for case in range(config.cases):
        inst = random_instance(rng)
        opt = oracle_best(inst)
        if opt.score <= 0:
            continue
        for eps in (Fraction(1, 4), Fraction(1, 2)):
            out = fptas(inst.with_threshold(opt.score), eps)
            if out.committee is None:
                failures.append(f"case {case}: no-instance on a yes-instance (eps={eps})")
            elif out.committee.score < (1 - eps) * opt.score:
                failures.append(f"case {case}: fptas score below (1-eps)t (eps={eps})")
    return failures


def _suite_additive(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"additive:{config.seed}")
    failures = []
    for case in range(config.cases):
        inst = random_instance(rng)
        opt = oracle_best(inst)
        yes = rng.random() < 0.5
        t = opt.score if yes else opt.score + Fraction(1, 7)
        if not yes and opt.score == 0:
            t = Fraction(1, 7)
        out = solvers.additive(inst.with_threshold(t))
        if yes:
            if out.committee is None:
                failures.append(f"case {case}: additive said no on a yes-instance")
            elif len(out.committee.members) > inst.k + 1 or out.committee.score < t:
                failures.append(f"case {case}: additive contract violated")
        else:
            if out.committee is None and opt.score >= t:
                failures.append(f"case {case}: additive said no but the oracle disagrees")
            if out.committee is not None and out.committee.score < t:
                failures.append(f"case {case}: additive returned a committee below t")
    return failures


def _suite_kernel(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"kernel:{config.seed}")
    failures = []
    for case in range(config.cases):
        heavy = case % 3 == 0
        if heavy:
            inst = duplicate_heavy_instance(rng.randrange(2**30), base_multiplicity=2800)
        else:
            inst = random_instance(rng, max_candidates=9, max_voters=12)
        opt = oracle_best(inst).score
        for eps in (Fraction(1, 4), Fraction(1, 2)):
            reduced, trace = kernelize(inst, eps)
            lifted = lift(brute_force(reduced.with_threshold(None)).committee, trace)
            if lifted.score < (1 - eps) * opt:
                failures.append(f"case {case}: kernel quality broke (eps={eps})")
            if trace.voter_stage.scale > 1 and len(reduced.graph.voters) >= len(inst.graph.voters):
                failures.append(f"case {case}: scale above 1 but voters did not shrink")
            if trace.replay(inst) != reduced:
                failures.append(f"case {case}: trace replay mismatch (eps={eps})")
    return failures


def _suite_voter_reduction(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"voterred:{config.seed}")
    failures = []
    from itertools import combinations

    for case in range(config.cases):
        if case % 2 == 0:
            inst = duplicate_heavy_instance(rng.randrange(2**30), groups=2, base_multiplicity=2600, k=1)
        else:
            spec = GeneratorSpec(
                candidates=rng.randint(3, 6),
                voters=rng.randint(8, 14),
                d=2,
                duplicates=(rng.randint(3, 5),),
                rule="pav",
                k=2,
                seed=rng.randrange(2**30),
            )
            inst = gen_kdd_free(spec)
        eps = rng.choice([Fraction(1, 4), Fraction(1, 2)])
        reduced, trace = reduce_voters(inst, eps)
        opt = oracle_best(inst).score
        bound = trace.eps_star / 2 * opt
        scorer_g = make_scorer(inst.graph, inst.family)
        scorer_r = make_scorer(reduced.graph, reduced.family)
        size = min(inst.k, len(inst.graph.candidates))
        for combo in combinations(sorted(inst.graph.candidates), size):
            gap = abs(scorer_g(combo) - trace.scale * scorer_r(combo))
            if gap > bound:
                failures.append(f"case {case}: |sco - s*sco'| = {gap} > {bound} on {combo}")
                break
    return failures


def _suite_colorcoding(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"cc:{config.seed}")
    failures = []
    for case in range(config.cases):
        spec = GeneratorSpec(
            candidates=rng.randint(4, 9),
            voters=rng.randint(4, 10),
            d=2,
            max_voter_degree=2,
            rule=rng.choice(["pav", "cc"]),
            k=2,
            seed=rng.randrange(2**30),
        )
        inst = gen_kdd_free(spec)
        opt = oracle_best(inst)
        if opt.score <= 0:
            continue
        out = color_coding(inst.with_threshold(opt.score), seed=rng.randrange(2**20))
        if out.committee is not None and out.committee.score < opt.score:
            failures.append(f"case {case}: color coding returned a committee below t")
    return failures


def _suite_determinism(config: SuiteConfig) -> list[str]:
    rng = random.Random(f"det:{config.seed}")
    failures = []
    inst = random_instance(rng, max_candidates=8, max_voters=10, rules=("pav",))
    opt = oracle_best(inst)
    t = opt.score if opt.score > 0 else Fraction(1)
    runs = {
        "exact": lambda: brute_force(inst.with_threshold(t)),
        "greedy": lambda: greedy(inst),
        "fptas": lambda: fptas(inst.with_threshold(t), Fraction(1, 4)),
        "additive": lambda: solvers.additive(inst.with_threshold(t)),
        "colorcoding": lambda: color_coding(inst.with_threshold(t), seed=7),
    }
    for name, run in runs.items():
        if repr(run()) != repr(run()):
            failures.append(f"{name}: two identical runs produced different results")
    return failures


_SUITES: dict[str, Callable[[SuiteConfig], list[str]]] = {
    "lemma1_equivalence": _suite_lemma1,
    "score_identity": _suite_score_identity,
    "normalize_argmax": _suite_normalize_argmax,
    "graph_structure": _suite_graph_structure,
    "sunflower": _suite_sunflower,
    "greedy_ratio": _suite_greedy_ratio,
    "sunflower_rule_exact": _suite_sunflower_rule_exact,
    "fptas_contract": _suite_fptas,
    "additive_contract": _suite_additive,
    "kernel_quality": _suite_kernel,
    "voter_reduction": _suite_voter_reduction,
    "colorcoding_onesided": _suite_colorcoding,
    "determinism": _suite_determinism,
}


def run_property_suite(config: Optional[SuiteConfig] = None) -> dict:
    """Run the configured suites; raise with reproduction seeds on failures.

    The returned report maps suite name to case count and failure list. The
    master seed in the config reproduces every failure deterministically.
    """
    config = config or SuiteConfig()
    names = config.suites or tuple(_SUITES)
    report = {}
    for name in names:
        failures = _SUITES[name](config)
        report[name] = {"cases": config.cases, "failures": failures, "seed": config.seed}
    if any(entry["failures"] for entry in report.values()):
        raise PropertyFailure(report)
    return report
