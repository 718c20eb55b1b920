"""Election instances: graph + weight family + committee size (+ threshold).

``load_instance`` is the one sanitizing entry point: it drops voters that
cannot ever contribute (empty approval set, empty or all-zero weight vector)
and rescales all weights so the largest leading weight is exactly 1. The
rescale factor is kept on the instance so reported scores can be converted
back to the units the input used. Preprocessing steps build reduced
instances directly without re-sanitizing.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .profile_graph import ProfileGraph
from .scoring import ONE, OwaFamily, OwaVector, as_rational, normalize, rule_vector


@dataclass(frozen=True)
class Instance:
    """A committee-selection instance over a sanitized, normalized family.

    ``t`` is the optional decision threshold in internal (normalized) units;
    ``scale`` converts internal scores back to original units.
    """

    graph: ProfileGraph
    family: OwaFamily
    k: int
    t: Optional[Fraction] = None
    scale: Fraction = ONE

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("committee size k must be a non-negative integer")
        if self.t is not None:
            object.__setattr__(self, "t", as_rational(self.t))
        object.__setattr__(self, "scale", as_rational(self.scale))
        if set(self.family.vectors) != set(self.graph.voters):
            raise ValueError("family must cover exactly the voters of the graph")

    def to_original_units(self, value: Fraction) -> Fraction:
        return value * self.scale

    def with_threshold(self, t: Optional[Fraction]) -> "Instance":
        return dataclasses.replace(self, t=t)

    def drop_candidates(self, candidates: Iterable[str]) -> "Instance":
        return dataclasses.replace(self, graph=self.graph.drop_candidates(candidates))

    def keep_voters(self, voters: Iterable[str]) -> "Instance":
        kept = self.graph.keep_voters(voters)
        return dataclasses.replace(self, graph=kept, family=self.family.keep(kept.voters))


def load_instance(
    graph: ProfileGraph,
    family: OwaFamily,
    k: int,
    t: Optional[Fraction] = None,
) -> Instance:
    """Sanitize and normalize a raw instance.

    Voters with an empty approval set or an empty/all-zero vector contribute
    0 to every committee and are removed up front; the remaining weights are
    divided by the largest leading weight (recorded as ``scale``), with ``t``
    rescaled to match.
    """
    if set(family.vectors) != set(graph.voters):
        raise ValueError("family must cover exactly the voters of the graph")
    t = None if t is None else as_rational(t)
    silent = {v for v in graph.voters if not graph.approvals[v]}
    silent.update(family.flagged_voters())
    if silent:
        keep = [v for v in graph.voters if v not in silent]
        graph = graph.keep_voters(keep)
        family = family.keep(keep)
    if not graph.voters:
        return Instance(graph, family, k, t, ONE)
    scale = family.lambda_max
    family, t = normalize(family, t)
    return Instance(graph, family, k, t, scale)


def family_from_rule(graph: ProfileGraph, rule: str, k: int, weights=None) -> OwaFamily:
    """Expand a shared scoring rule into per-voter vectors.

    Each voter's vector is cut to min(|approvals|, k) slots: entries past her
    approval count can never be consumed, and entries past k are only ever
    touched by the one-additive solver, whose guarantee survives truncation
    because scores are monotone in the kept prefix. For k = 0 a single slot
    is kept so the degenerate instance still carries the weight structure.
    """
    slots = max(k, 1)
    vectors = {}
    for v in graph.voters:
        length = min(graph.voter_degree(v), slots)
        vectors[v] = rule_vector(rule, length, weights)
    return OwaFamily(vectors)


def explicit_family(graph: ProfileGraph, per_voter: dict[str, OwaVector]) -> OwaFamily:
    """Per-voter vectors as given, truncated to each voter's approval count."""
    vectors = {}
    for v in graph.voters:
        vec = per_voter[v]
        vectors[v] = vec.truncated(graph.voter_degree(v))
    return OwaFamily(vectors)
