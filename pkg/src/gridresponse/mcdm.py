"""Multi-criteria ranking of countermeasures.

Two strategies sit behind one interface:

``saw``          simple additive weighting over min-max normalized values.
``ivpf-choquet`` interval-valued Pythagorean fuzzification of the normalized
                 values, scored per criterion, then aggregated with a
                 discrete Choquet integral over a Sugeno lambda-measure
                 whose densities are the criterion weights scaled by kappa.

Raw criterion values are normalized per candidate set so that every
criterion is benefit-directed (larger is better) before either strategy
runs.  Ties in final scores always break lexicographically by
countermeasure id.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .catalog import CRITERIA, CountermeasureRecord, Criterion, CriterionSpec, Direction
from .errors import (
    DocumentSyntaxError,
    EmptyCandidateError,
    UnknownStrategyError,
    ValueRangeError,
)

WEIGHT_SUM_TOLERANCE = 1e-9
WEIGHT_RENORMALIZE_LIMIT = 1e-6

DEFAULT_DELTA = 0.05
DEFAULT_KAPPA = 0.9

_CRITERION_POSITION = {c: i for i, c in enumerate(CRITERIA)}


@dataclass(frozen=True)
class WeightVector:
    """Criterion weights in [0, 1] summing to 1."""

    weights: dict[Criterion, float]

    def __post_init__(self):
        if set(self.weights) != set(CRITERIA):
            raise ValueRangeError("weight vector must cover exactly the six criteria")
        for criterion, value in self.weights.items():
            if not 0.0 <= value <= 1.0:
                raise ValueRangeError(
                    f"weight {criterion.value}={value} outside [0, 1]",
                    element=criterion.value,
                )
        total = sum(self.weights.values())
        deviation = abs(total - 1.0)
        if deviation > WEIGHT_RENORMALIZE_LIMIT:
            raise ValueRangeError(f"weights sum to {total}, expected 1")
        if deviation > WEIGHT_SUM_TOLERANCE:
            warnings.warn(
                f"weights sum to {total}; renormalizing", stacklevel=2
            )
            renormalized = {c: v / total for c, v in self.weights.items()}
            object.__setattr__(self, "weights", renormalized)

    def __getitem__(self, criterion: Criterion) -> float:
        return self.weights[criterion]

    @classmethod
    def uniform(cls) -> "WeightVector":
        return cls({c: 1.0 / len(CRITERIA) for c in CRITERIA})

    @classmethod
    def focused(cls, focus: Criterion, value: float) -> "WeightVector":
        """Weight ``value`` on the focused criterion, the rest split equally."""
        if not 0.0 <= value <= 1.0:
            raise ValueRangeError(f"focus weight {value} outside [0, 1]")
        rest = (1.0 - value) / (len(CRITERIA) - 1)
        return cls({c: value if c is focus else rest for c in CRITERIA})


@dataclass(frozen=True)
class DecisionMatrix:
    """Benefit-directed normalized values per alternative and criterion."""

    alternatives: tuple[str, ...]
    values: dict[str, dict[Criterion, float]]


def normalize(
    records: Sequence[CountermeasureRecord],
    specs: Mapping[Criterion, CriterionSpec],
) -> DecisionMatrix:
    """Min-max normalize a candidate set so larger is always better.

    Benefit criteria map to (x - min) / (max - min), cost criteria to
    (max - x) / (max - min).  A criterion whose values do not vary within
    the set is uninformative and maps to 0.5 for every alternative.
    """
    if not records:
        raise EmptyCandidateError("cannot normalize an empty candidate set")
    alternatives = tuple(r.id for r in records)
    values: dict[str, dict[Criterion, float]] = {r.id: {} for r in records}
    for criterion in CRITERIA:
        raw = [r.criteria[criterion] for r in records]
        low, high = min(raw), max(raw)
        span = high - low
        for record, x in zip(records, raw):
            if span == 0.0:
                v = 0.5
            elif specs[criterion].direction is Direction.BENEFIT:
                v = (x - low) / span
            else:
                v = (high - x) / span
            values[record.id][criterion] = v
    return DecisionMatrix(alternatives=alternatives, values=values)


@dataclass(frozen=True)
class Ranking:
    """Scored alternatives, best first; score ties break by ascending id."""

    strategy: str
    entries: tuple[tuple[str, float], ...]

    def selected(self) -> str:
        return self.entries[0][0]


def _build_ranking(scores: Mapping[str, float], strategy: str) -> Ranking:
    ordered = tuple(sorted(scores.items(), key=lambda kv: (-kv[1], kv[0])))
    return Ranking(strategy=strategy, entries=ordered)


def saw_rank(matrix: DecisionMatrix, w: WeightVector) -> Ranking:
    """Simple additive weighting: score = sum of weight times normalized value."""
    scores = {
        alt: sum(w[c] * matrix.values[alt][c] for c in CRITERIA)
        for alt in matrix.alternatives
    }
    return _build_ranking(scores, "saw")


@dataclass(frozen=True)
class IvpfNumber:
    """Interval-valued Pythagorean fuzzy number.

    Membership and non-membership intervals satisfy
    0 <= mu_lo <= mu_hi, 0 <= nu_lo <= nu_hi and mu_hi^2 + nu_hi^2 <= 1.
    """

    mu_lo: float
    mu_hi: float
    nu_lo: float
    nu_hi: float

    def __post_init__(self):
        eps = 1e-12
        if not (-eps <= self.mu_lo <= self.mu_hi <= 1.0 + eps):
            raise ValueRangeError(f"membership interval [{self.mu_lo}, {self.mu_hi}] invalid")
        if not (-eps <= self.nu_lo <= self.nu_hi <= 1.0 + eps):
            raise ValueRangeError(f"non-membership interval [{self.nu_lo}, {self.nu_hi}] invalid")
        if self.mu_hi**2 + self.nu_hi**2 > 1.0 + eps:
            raise ValueRangeError(
                f"mu_hi^2 + nu_hi^2 = {self.mu_hi**2 + self.nu_hi**2} exceeds 1"
            )


def to_ivpfn(v: float, delta: float = DEFAULT_DELTA) -> IvpfNumber:
    """Fuzzify a normalized value into an IVPFN with half-width delta.

    The membership interval straddles v, the non-membership interval
    straddles 1 - v, and the upper non-membership bound is capped so the
    Pythagorean condition mu_hi^2 + nu_hi^2 <= 1 holds exactly.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueRangeError(f"value {v} outside [0, 1]")
    if not 0.0 <= delta <= 0.5:
        raise ValueRangeError(f"delta {delta} outside [0, 0.5]")
    mu_lo = max(0.0, v - delta)
    mu_hi = min(1.0, v + delta)
    nu_hi = min(math.sqrt(max(0.0, 1.0 - mu_hi**2)), (1.0 - v) + delta)
    nu_lo = max(0.0, min((1.0 - v) - delta, nu_hi))
    return IvpfNumber(mu_lo, mu_hi, nu_lo, nu_hi)


def ivpfn_score(x: IvpfNumber) -> float:
    """Score in [-1, 1]: mean squared membership minus mean squared non-membership."""
    return (x.mu_lo**2 + x.mu_hi**2 - x.nu_lo**2 - x.nu_hi**2) / 2.0


@dataclass(frozen=True)
class FuzzyMeasure:
    """Sugeno lambda-measure over the criterion set.

    mu(A) = (prod_{i in A} (1 + lam * g_i) - 1) / lam for lam != 0, and the
    additive sum of densities for lam = 0.  Construction guarantees
    mu(full set) = 1.
    """

    densities: dict[Criterion, float]
    lam: float

    def of(self, subset: Iterable[Criterion]) -> float:
        members = list(subset)
        if not members:
            return 0.0
        if self.lam == 0.0:
            return sum(self.densities[c] for c in members)
        product = 1.0
        for criterion in members:
            product *= 1.0 + self.lam * self.densities[criterion]
        return (product - 1.0) / self.lam


def _measure_defect(lam: float, densities: Sequence[float], total: float) -> float:
    """mu_lam(full set) - 1; its unique nonzero root normalizes the measure."""
    if lam == 0.0:
        return total - 1.0
    product = 1.0
    for g in densities:
        product *= 1.0 + lam * g
    return (product - 1.0) / lam - 1.0


def lambda_measure(w: WeightVector, kappa: float = DEFAULT_KAPPA) -> FuzzyMeasure:
    """Build the lambda-measure with densities g_i = kappa * w_i.

    lambda is the unique root > -1 of prod(1 + lambda * g_i) = 1 + lambda,
    found by bracketed bisection; it is 0 exactly when the densities sum
    to 1.  With fewer than two positive densities the lambda-rule cannot
    reach mu(full) = 1, so the measure degenerates to the additive measure
    on the weights themselves.
    """
    if not 0.0 < kappa <= 1.0:
        raise ValueRangeError(f"kappa {kappa} outside (0, 1]")
    densities = {c: kappa * w[c] for c in CRITERIA}
    positive = [g for g in densities.values() if g > 0.0]
    if len(positive) < 2:
        return FuzzyMeasure(densities={c: w[c] for c in CRITERIA}, lam=0.0)
    total = sum(densities.values())
    if abs(total - 1.0) <= 1e-12:
        return FuzzyMeasure(densities=densities, lam=0.0)
    values = list(densities.values())
    if total < 1.0:
        lo, hi = 0.0, 1.0
        while _measure_defect(hi, values, total) < 0.0:
            hi *= 2.0
            if hi > 1e15:
                raise RuntimeError("lambda-measure root finding failed to bracket")
    else:
        lo, hi = -1.0 + 1e-12, 0.0
    # defect is negative at lo and positive at hi on the chosen bracket;
    # bisect until the interval collapses to adjacent floats, so the raw
    # product identity prod(1 + lam*g) = 1 + lam holds to absolute 1e-9
    # even when small densities push lam into the thousands
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if mid == lo or mid == hi:
            break
        if _measure_defect(mid, values, total) < 0.0:
            lo = mid
        else:
            hi = mid
    lam = (lo + hi) / 2.0
    if abs(_measure_defect(lam, values, total)) > 1e-9:
        raise RuntimeError("lambda-measure root finding did not converge")
    return FuzzyMeasure(densities=densities, lam=lam)


def choquet_aggregate(scores: Mapping[Criterion, float], measure: FuzzyMeasure) -> float:
    """Discrete Choquet integral of per-criterion scores.

    Criteria are sorted by ascending score (ties by fixed criterion order);
    CI = sum_i s_(i) * (mu(A_i) - mu(A_{i+1})) where A_i holds the i-th
    smallest criterion and everything above it.
    """
    order = sorted(CRITERIA, key=lambda c: (scores[c], _CRITERION_POSITION[c]))
    result = 0.0
    for i, criterion in enumerate(order):
        upper = measure.of(order[i:])
        rest = measure.of(order[i + 1 :])
        result += scores[criterion] * (upper - rest)
    return result


def ivpf_choquet_rank(
    matrix: DecisionMatrix,
    w: WeightVector,
    delta: float = DEFAULT_DELTA,
    kappa: float = DEFAULT_KAPPA,
) -> Ranking:
    """Fuzzify, score and Choquet-aggregate every alternative, then rank."""
    measure = lambda_measure(w, kappa)
    scores = {}
    for alt in matrix.alternatives:
        per_criterion = {
            c: ivpfn_score(to_ivpfn(matrix.values[alt][c], delta)) for c in CRITERIA
        }
        scores[alt] = choquet_aggregate(per_criterion, measure)
    return _build_ranking(scores, "ivpf-choquet")


STRATEGIES: tuple[str, ...] = ("saw", "ivpf-choquet")


def rank_countermeasures(
    matrix: DecisionMatrix,
    w: WeightVector,
    strategy: str = "ivpf-choquet",
    *,
    delta: float = DEFAULT_DELTA,
    kappa: float = DEFAULT_KAPPA,
) -> Ranking:
    """Rank a normalized candidate set with the named strategy."""
    if strategy == "saw":
        return saw_rank(matrix, w)
    if strategy == "ivpf-choquet":
        return ivpf_choquet_rank(matrix, w, delta=delta, kappa=kappa)
    raise UnknownStrategyError(
        f"unknown strategy {strategy!r}; valid strategies: {', '.join(STRATEGIES)}",
        element=strategy,
    )


def weights_from_obj(obj: Any) -> WeightVector:
    """Build a WeightVector from a decoded weights document object."""
    if not isinstance(obj, dict):
        raise DocumentSyntaxError("weights document must be an object")
    weights = {}
    for key, value in obj.items():
        try:
            criterion = Criterion(key)
        except ValueError:
            raise DocumentSyntaxError(f"unknown criterion {key!r}", element=str(key)) from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentSyntaxError(f"weight {key} must be a number", element=str(key))
        weights[criterion] = float(value)
    missing = [c.value for c in CRITERIA if c not in weights]
    if missing:
        raise DocumentSyntaxError(f"missing weight for {missing[0]!r}", element=missing[0])
    return WeightVector(weights)


def parse_weights(text: str) -> WeightVector:
    """Parse a weights JSON document: one number per criterion id."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON: {exc}") from exc
    return weights_from_obj(obj)
