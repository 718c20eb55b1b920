"""Instance documents and run reports.

One canonical JSON text format carries instances ("format": 1): a candidate
id list, voter records with approval lists, and either one shared rule
(pav / cc / av / custom) or an explicit per-voter OWA vector, plus the
committee size k and an optional threshold t. Rationals travel as exact
strings, "7/2" or "3", never as decimals.

Reports serialize a solver run completely enough to reproduce it: solver
name, all parameters including the seed, structural stats, and the outcome.
Scores in reports are converted back to the units of the input document
(weights are rescaled at load so the largest leading weight is 1; the factor
is recorded under ``lambda_max``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional

from .instance import Instance, explicit_family, family_from_rule, load_instance
from .profile_graph import ProfileGraph, degree_stats
from .reductions import KernelTrace
from .scoring import OwaVector, as_rational, check_non_increasing

FORMAT_VERSION = 1
KNOWN_RULES = ("pav", "cc", "av", "custom")


class InstanceFormatError(ValueError):
    """The document violates the instance format."""


def _rational_str(value: Fraction) -> str:
    return str(value)


def _parse_rational(value, what: str) -> Fraction:
    if isinstance(value, float):
        raise InstanceFormatError(f"{what} must be an exact rational string, not a float")
    try:
        return as_rational(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"bad rational for {what}: {value!r}") from exc


def instance_from_document(doc: Mapping[str, Any]) -> Instance:
    """Build a sanitized, normalized instance from a parsed document."""
    if not isinstance(doc, Mapping):
        raise InstanceFormatError("instance document must be a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise InstanceFormatError(f"unsupported format {doc.get('format')!r}; expected {FORMAT_VERSION}")
    candidates = doc.get("candidates")
    if not isinstance(candidates, list) or not all(isinstance(c, str) for c in candidates):
        raise InstanceFormatError("candidates must be a list of string ids")
    if len(set(candidates)) != len(candidates):
        raise InstanceFormatError("duplicate candidate ids")
    voters_field = doc.get("voters")
    if not isinstance(voters_field, list):
        raise InstanceFormatError("voters must be a list of records")
    rule = doc.get("rule")
    if rule is not None:
        if not isinstance(rule, Mapping) or rule.get("type") not in KNOWN_RULES:
            raise InstanceFormatError(f"rule type must be one of {KNOWN_RULES}")
    k = doc.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise InstanceFormatError("k must be a non-negative integer")
    t = None if doc.get("t") is None else _parse_rational(doc["t"], "t")

    voter_ids: list[str] = []
    approvals: dict[str, list[str]] = {}
    explicit: dict[str, OwaVector] = {}
    cand_set = set(candidates)
    for record in voters_field:
        if not isinstance(record, Mapping) or not isinstance(record.get("id"), str):
            raise InstanceFormatError("each voter record needs a string id")
        vid = record["id"]
        if vid in approvals:
            raise InstanceFormatError(f"duplicate voter id {vid!r}")
        if vid in cand_set:
            raise InstanceFormatError(f"id {vid!r} is used for both a candidate and a voter")
        approved = record.get("approvals")
        if not isinstance(approved, list) or not all(isinstance(c, str) for c in approved):
            raise InstanceFormatError(f"voter {vid!r}: approvals must be a list of candidate ids")
        if len(set(approved)) != len(approved):
            raise InstanceFormatError(f"voter {vid!r}: duplicate approvals")
        unknown = set(approved) - cand_set
        if unknown:
            raise InstanceFormatError(f"voter {vid!r} approves unknown candidates {sorted(unknown)}")
        owa = record.get("owa")
        if (owa is None) == (rule is None):
            raise InstanceFormatError(
                f"voter {vid!r}: exactly one weight source required (shared rule or per-voter owa)"
            )
        if owa is not None:
            weights = [_parse_rational(w, f"voter {vid!r} owa entry") for w in owa]
            if any(w < 0 for w in weights):
                raise InstanceFormatError(f"voter {vid!r}: negative OWA weight")
            if not check_non_increasing(weights):
                raise InstanceFormatError(f"voter {vid!r}: OWA vector must be non-increasing")
            explicit[vid] = OwaVector(tuple(weights))
        voter_ids.append(vid)
        approvals[vid] = approved

    graph = ProfileGraph.from_approvals(candidates, approvals, voter_ids)
    if rule is not None:
        weights = None
        if rule["type"] == "custom":
            raw = rule.get("weights")
            if not isinstance(raw, list) or not raw:
                raise InstanceFormatError("custom rule needs a non-empty weights list")
            weights = [_parse_rational(w, "rule weight") for w in raw]
            if any(w < 0 for w in weights):
                raise InstanceFormatError("rule weights must be non-negative")
            if not check_non_increasing(weights):
                raise InstanceFormatError("OWA vector must be non-increasing")
        family = family_from_rule(graph, rule["type"], k, weights)
    else:
        family = explicit_family(graph, explicit)
    return load_instance(graph, family, k, t)


def parse_instance(text: str) -> Instance:
    """Parse the canonical JSON text format into an instance."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return instance_from_document(doc)


def instance_to_document(instance: Instance) -> dict:
    """Serialize an instance back to a document, in original units.

    Per-voter vectors are written explicitly (a shared rule is expanded at
    load and not reconstructed); parsing the result reproduces the instance
    exactly.
    """
    voters = []
    for v in instance.graph.voters:
        vec = instance.family.vectors[v]
        voters.append(
            {
                "id": v,
                "approvals": sorted(instance.graph.approvals[v]),
                "owa": [_rational_str(w * instance.scale) for w in vec.weights],
            }
        )
    doc: dict[str, Any] = {
        "format": FORMAT_VERSION,
        "candidates": list(instance.graph.candidates),
        "voters": voters,
        "k": instance.k,
    }
    if instance.t is not None:
        doc["t"] = _rational_str(instance.t * instance.scale)
    return doc


def serialize_instance(instance: Instance) -> str:
    return json.dumps(instance_to_document(instance), indent=2) + "\n"


@dataclass
class RunReport:
    """Everything needed to reproduce one solver run, plus its outcome."""

    solver: str
    outcome: str  # "committee" | "no-instance"
    committee: Optional[list[str]]
    score: Optional[str]  # original units
    parameters: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    trace: Optional[dict] = None
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "solver": self.solver,
            "outcome": self.outcome,
            "committee": self.committee,
            "score": self.score,
            "parameters": self.parameters,
            "stats": self.stats,
        }
        if self.trace is not None:
            out["trace"] = self.trace
        out["wall_time_s"] = self.wall_time_s
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def build_report(
    solver: str,
    instance: Instance,
    outcome,
    parameters: Mapping[str, Any],
    wall_time_s: float,
    trace: Optional[KernelTrace] = None,
) -> RunReport:
    """Assemble a report from a solve outcome, converting to original units."""
    stats = degree_stats(instance.graph)
    merged: dict[str, Any] = {
        "d": stats.d,
        "d_determined": stats.determined,
        "delta_C": stats.delta_c,
        "delta_V": stats.delta_v,
        "lambda_max": _rational_str(instance.scale),
        "candidates": len(instance.graph.candidates),
        "voters": len(instance.graph.voters),
    }
    for key, value in outcome.stats.items():
        if key != "solver":
            merged[key] = value
    committee = outcome.committee
    return RunReport(
        solver=solver,
        outcome="no-instance" if committee is None else "committee",
        committee=None if committee is None else list(committee.members),
        score=None if committee is None else _rational_str(instance.to_original_units(committee.score)),
        parameters=dict(parameters),
        stats=merged,
        trace=None if trace is None else kernel_trace_to_dict(trace),
        wall_time_s=wall_time_s,
    )


def kernel_trace_to_dict(trace: KernelTrace) -> dict:
    """Flatten a kernel trace for reports; all rationals become strings."""
    cand = trace.candidate_stage
    voter = trace.voter_stage

    def rat(x):
        return None if x is None else _rational_str(x)

    return {
        "epsilon": rat(trace.epsilon),
        "candidate_stage": {
            "epsilon": rat(cand.epsilon),
            "apx_opt": rat(cand.apx_opt),
            "case": cand.case,
            "r": rat(cand.r),
            "split_threshold": rat(cand.split_threshold),
            "psi": rat(cand.psi),
            "degree_cap": rat(cand.w_cap),
            "sunflower_size": cand.w_size,
            "certified_candidate": cand.certified_candidate,
            "removed_candidates": list(cand.removed),
            "sunflower_deletions": [
                {
                    "candidate": dl.candidate,
                    "members": list(dl.members),
                    "core": sorted(dl.core),
                }
                for dl in cand.deletions
            ],
        },
        "voter_stage": {
            "epsilon": rat(voter.epsilon),
            "apx_opt": rat(voter.apx_opt),
            "eps_tilde": rat(voter.eps_tilde),
            "eps_star": rat(voter.eps_star),
            "scale_formula": rat(voter.scale_formula),
            "scale": rat(voter.scale),
            "size_convention": voter.size_convention,
            "kept_multiplicities": {rep: count for rep, count in sorted(voter.kept_multiplicities.items())},
            "removed_voters": list(voter.removed),
        },
        "sizes": {
            "original": [len(trace.original.graph.candidates), len(trace.original.graph.voters)],
            "reduced": [len(trace.reduced.graph.candidates), len(trace.reduced.graph.voters)],
        },
    }
