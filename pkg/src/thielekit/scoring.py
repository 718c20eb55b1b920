"""Exact OWA scoring for approval-based committee elections.

Every weight and every score is a ``fractions.Fraction``; no floating point
enters the engine anywhere. Each voter carries an ordered weight vector: her
i-th approved committee member earns her the i-th weight. Vectors are
implicitly zero-padded on the right, so asking for a slot past the stored
length yields 0 rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction.

    Floats are rejected: a float in a weight or threshold would silently
    break the exactness guarantees of the whole engine.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def check_non_increasing(weights: Sequence[RationalLike]) -> bool:
    """True iff every consecutive pair satisfies w[i] >= w[i+1]."""
    ws = [as_rational(w) for w in weights]
    return all(a >= b for a, b in zip(ws, ws[1:]))


@dataclass(frozen=True)
class OwaVector:
    """A non-increasing sequence of non-negative weights, 1-indexed.

    ``entry(i)`` returns 0 for any index past the stored length (implicit
    zero padding), which is what lets short vectors stand in for longer ones.
    """

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(as_rational(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if any(w < 0 for w in ws):
            raise ValueError("OWA weights must be non-negative")
        if not check_non_increasing(ws):
            raise ValueError("OWA vector must be non-increasing")
        prefix = [ZERO]
        for w in ws:
            prefix.append(prefix[-1] + w)
        object.__setattr__(self, "_prefix", tuple(prefix))

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def entry(self, i: int) -> Fraction:
        """1-indexed weight; 0 past the stored length."""
        if i < 1:
            raise IndexError("OWA vectors are 1-indexed")
        if i <= len(self.weights):
            return self.weights[i - 1]
        return ZERO

    def prefix_sum(self, j: int) -> Fraction:
        """Sum of the first j weights (saturating at the stored length)."""
        if j <= 0:
            return ZERO
        prefix = self._prefix  # type: ignore[attr-defined]
        return prefix[min(j, len(prefix) - 1)]

    @property
    def first(self) -> Fraction:
        return self.entry(1) if self.weights else ZERO

    @property
    def is_zero(self) -> bool:
        """True when the vector is empty or all entries are 0."""
        return self.first == 0

    def drop_prefix(self, j: int) -> "OwaVector":
        """Remove the first j entries (the slots already consumed)."""
        if j < 0:
            raise ValueError("prefix length must be non-negative")
        return OwaVector(self.weights[j:])

    def truncated(self, length: int) -> "OwaVector":
        return OwaVector(self.weights[:max(length, 0)])

    def scaled(self, factor: Fraction) -> "OwaVector":
        return OwaVector(tuple(w * factor for w in self.weights))


@dataclass(frozen=True)
class ThieleFunction:
    """Cumulative satisfaction values f(0), f(1), ..., f(L) with f(0) = 0.

    Monotonicity is deliberately not enforced at construction so that the
    conversion and classification operations below can report on arbitrary
    candidate functions; standard rules are always non-decreasing.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_rational(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("a Thiele function needs at least f(0)")
        if vals[0] != 0:
            raise ValueError("a Thiele function must have f(0) = 0")
        if any(v < 0 for v in vals):
            raise ValueError("Thiele values must be non-negative")

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> Fraction:
        return self.values[i]

    @classmethod
    def pav(cls, slots: int) -> "ThieleFunction":
        """f(i) = 1 + 1/2 + ... + 1/i."""
        vals = [ZERO]
        for i in range(1, slots + 1):
            vals.append(vals[-1] + Fraction(1, i))
        return cls(tuple(vals))

    @classmethod
    def cc(cls, slots: int) -> "ThieleFunction":
        """f(i) = 1 for every i > 0."""
        return cls((ZERO,) + (ONE,) * slots)

    @classmethod
    def av(cls, slots: int) -> "ThieleFunction":
        """f(i) = i."""
        return cls(tuple(Fraction(i) for i in range(slots + 1)))


def _unchecked_vector(weights: tuple[Fraction, ...]) -> OwaVector:
    # Builds an OwaVector without the ordering check. Only for classification
    # of candidate weight sequences; such a vector must never enter an
    # instance (instance loading re-validates).
    vec = object.__new__(OwaVector)
    object.__setattr__(vec, "weights", weights)
    prefix = [ZERO]
    for w in weights:
        prefix.append(prefix[-1] + w)
    object.__setattr__(vec, "_prefix", tuple(prefix))
    return vec


def owa_from_thiele(f: ThieleFunction) -> OwaVector:
    """Convert cumulative satisfaction values to per-slot weights.

    The i-th weight is f(i) - f(i-1). A negative difference means f is not
    monotone, which has no OWA representation and is rejected. The result is
    non-increasing exactly when f has diminishing marginal gains; a vector
    that fails that check is still returned so callers can classify it.
    """
    if len(f) < 2:
        raise ValueError("need at least f(0) and f(1) to derive weights")
    diffs = tuple(f.values[i] - f.values[i - 1] for i in range(1, len(f)))
    if any(d < 0 for d in diffs):
        raise ValueError("Thiele function is not monotone (negative weight)")
    if not check_non_increasing(diffs):
        return _unchecked_vector(diffs)
    return OwaVector(diffs)


def is_monotone_submodular(f: ThieleFunction) -> bool:
    """True iff f is non-decreasing with non-increasing marginal gains.

    Equivalent to the per-slot weight vector of f being non-negative and
    non-increasing.
    """
    vals = f.values
    if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
        return False
    diffs = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return check_non_increasing(diffs)


def rule_vector(rule: str, length: int, weights: Optional[Sequence[RationalLike]] = None) -> OwaVector:
    """Per-slot weight vector of a named rule, cut to ``length`` slots.

    ``pav`` gives (1, 1/2, 1/3, ...), ``cc`` gives (1, 0, 0, ...), ``av``
    gives (1, 1, 1, ...). ``custom`` takes the weights verbatim, zero-padded
    or truncated to the requested length.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    if rule == "pav":
        return OwaVector(tuple(Fraction(1, i) for i in range(1, length + 1)))
    if rule == "cc":
        return OwaVector((ONE,) * min(1, length) + (ZERO,) * max(length - 1, 0))
    if rule == "av":
        return OwaVector((ONE,) * length)
    if rule == "custom":
        if weights is None:
            raise ValueError("custom rule needs explicit weights")
        ws = [as_rational(w) for w in weights][:length]
        ws += [ZERO] * (length - len(ws))
        return OwaVector(tuple(ws))
    raise ValueError(f"unknown rule {rule!r}")


@dataclass(frozen=True, eq=True)
class OwaFamily:
    """One OWA vector per voter id.

    A family may transiently contain empty or all-zero vectors (these appear
    after restriction); such voters are *flagged* and instance loading or the
    recursive solvers drop them before any further arithmetic.
    """

    vectors: Mapping[str, OwaVector]

    def __post_init__(self):
        object.__setattr__(self, "vectors", dict(self.vectors))

    def __len__(self) -> int:
        return len(self.vectors)

    def vector(self, voter: str) -> OwaVector:
        return self.vectors[voter]

    @property
    def lambda_min(self) -> Fraction:
        """Smallest leading weight over all voters."""
        if not self.vectors:
            raise ValueError("empty family has no lambda_min")
        return min(v.first for v in self.vectors.values())

    @property
    def lambda_max(self) -> Fraction:
        """Largest leading weight over all voters."""
        if not self.vectors:
            raise ValueError("empty family has no lambda_max")
        return max(v.first for v in self.vectors.values())

    def flagged_voters(self) -> tuple[str, ...]:
        """Voters whose vector is empty or all-zero, in id order."""
        return tuple(sorted(v for v, vec in self.vectors.items() if vec.is_zero))

    def keep(self, voters: Iterable[str]) -> "OwaFamily":
        keep = set(voters)
        return OwaFamily({v: vec for v, vec in self.vectors.items() if v in keep})

    def drop(self, voters: Iterable[str]) -> "OwaFamily":
        gone = set(voters)
        return OwaFamily({v: vec for v, vec in self.vectors.items() if v not in gone})


def normalize(family: OwaFamily, t: Optional[Fraction] = None) -> tuple[OwaFamily, Optional[Fraction]]:
    """Divide every weight by the largest leading weight; rescale t to match.

    Afterwards the largest leading weight is exactly 1. Scores computed
    against the normalized family are in units of the old lambda_max. An
    empty family is returned unchanged.
    """
    if not family.vectors:
        return family, t
    lam_max = family.lambda_max
    if lam_max <= 0:
        raise ValueError("cannot normalize an all-zero family")
    inv = ONE / lam_max
    scaled = OwaFamily({v: vec.scaled(inv) for v, vec in family.vectors.items()})
    new_t = None if t is None else t / lam_max
    return scaled, new_t


def score(graph, family: OwaFamily, committee: Iterable[str]) -> Fraction:
    """Total satisfaction of a committee: each voter sums the first
    ``|approvals ∩ committee|`` entries of her vector."""
    members = set(committee)
    unknown = members - set(graph.candidates)
    if unknown:
        raise ValueError(f"unknown candidate ids: {sorted(unknown)}")
    total = ZERO
    for voter in graph.voters:
        hits = len(graph.approvals[voter] & members)
        if hits:
            total += family.vectors[voter].prefix_sum(hits)
    return total


def make_scorer(graph, family: OwaFamily) -> Callable[[Iterable[str]], Fraction]:
    """Closure evaluating committee scores in O(sum of member degrees).

    Semantically identical to :func:`score`; used in the subset-search hot
    loops. Does not validate candidate ids.
    """
    approvers = graph.approvers
    vectors = family.vectors

    def scorer(members: Iterable[str]) -> Fraction:
        counts: dict[str, int] = {}
        for c in members:
            for v in approvers[c]:
                counts[v] = counts.get(v, 0) + 1
        total = ZERO
        for v, j in counts.items():
            total += vectors[v].prefix_sum(j)
        return total

    return scorer


def restrict(family: OwaFamily, graph, committee: Iterable[str]) -> OwaFamily:
    """Consume the slots a committee already occupies.

    Each voter loses the first ``|approvals ∩ committee|`` entries of her
    vector. Voters left with an empty or all-zero vector stay in the family
    but show up in :meth:`OwaFamily.flagged_voters`.
    """
    members = set(committee)
    unknown = members - set(graph.candidates)
    if unknown:
        raise ValueError(f"unknown candidate ids: {sorted(unknown)}")
    out = {}
    for voter, vec in family.vectors.items():
        hits = len(graph.approvals[voter] & members)
        out[voter] = vec.drop_prefix(min(hits, len(vec))) if hits else vec
    return OwaFamily(out)


def marginal(graph, family: OwaFamily, committee: Iterable[str], candidate: str) -> Fraction:
    """Score gain from adding ``candidate`` to ``committee``.

    Equals score(committee + candidate) - score(committee), and also the
    singleton score of the candidate under the restricted family.
    """
    members = set(committee)
    if candidate in members:
        raise ValueError(f"candidate {candidate!r} is already in the committee")
    if candidate not in graph.approvers:
        raise ValueError(f"unknown candidate id: {candidate!r}")
    gain = ZERO
    for voter in graph.approvers[candidate]:
        hits = len(graph.approvals[voter] & members)
        gain += family.vectors[voter].entry(hits + 1)
    return gain


def singleton_scores(graph, family: OwaFamily) -> dict[str, Fraction]:
    """Score of each candidate alone: the sum of leading weights over its
    approvers. Isolated candidates map to 0."""
    out = {}
    for c in graph.candidates:
        out[c] = sum((family.vectors[v].first for v in graph.approvers[c]), ZERO)
    return out
