"""Monte Carlo sensitivity analysis over one focused criterion weight.

Each scenario draws the focused weight uniformly from [0, 1] (seeded),
splits the remainder equally over the other five criteria, re-runs the
per-node recommendation, and records the sum over attack nodes of the
selected countermeasure's raw value on the focused criterion.  That sum is
weight-independent for a fixed selection, so it plateaus exactly where the
selection stabilizes; for a cost-directed focus it trends downward as the
focus weight pushes selections toward cheaper candidates.

The per-scenario recommendations are independent; points are assembled in
scenario order, so evaluation order cannot change the result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from hashlib import sha256
from statistics import StatisticsError, linear_regression
from typing import Sequence

from .catalog import Catalog, Criterion
from .decision import recommend
from .errors import ValueRangeError
from .mcdm import DEFAULT_DELTA, DEFAULT_KAPPA, STRATEGIES, WeightVector
from .model import AttackGraph


@dataclass(frozen=True)
class SweepConfig:
    """Configuration for one sensitivity sweep."""

    focus: Criterion
    runs: int = 1000
    seed: int = 0
    strategy: str = "ivpf-choquet"
    delta: float = DEFAULT_DELTA
    kappa: float = DEFAULT_KAPPA
    record_alt_strategy: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueRangeError(f"runs must be at least 1, got {self.runs}")


@dataclass(frozen=True)
class SweepPoint:
    """One scenario: focus weight, full weight vector, score sum, fingerprint."""

    scenario: int
    w_focus: float
    weight_vector: WeightVector
    score_sum: float
    selection_fingerprint: str
    alt_score_sum: float | None = None


@dataclass(frozen=True)
class SweepResult:
    """All sweep points plus the OLS slope and the selection stability threshold."""

    config: SweepConfig
    points: tuple[SweepPoint, ...]
    slope: float | None
    stability_threshold: float | None


def selection_fingerprint(selected_ids: Sequence[str]) -> str:
    """Stable short hash of an ordered selected-countermeasure id list."""
    return sha256(",".join(selected_ids).encode("utf-8")).hexdigest()[:16]


def _score_sum(recommendations, catalog: Catalog, focus: Criterion) -> float:
    return sum(
        catalog.countermeasures[r.selected].criteria[focus] for r in recommendations
    )


def _ols_slope(points: Sequence[SweepPoint]) -> float | None:
    if len(points) < 2:
        return None
    try:
        slope, _ = linear_regression(
            [p.w_focus for p in points], [p.score_sum for p in points]
        )
    except StatisticsError:
        return None
    return slope


def _stability_threshold(points: Sequence[SweepPoint]) -> float | None:
    """Smallest sampled focus weight above which every selection agrees.

    Points are sorted by focus weight and walked from the top; the report
    is absent when even the topmost two points disagree.
    """
    if not points:
        return None
    ordered = sorted(points, key=lambda p: p.w_focus)
    top = ordered[-1].selection_fingerprint
    if len(ordered) >= 2 and ordered[-2].selection_fingerprint != top:
        return None
    threshold = ordered[-1].w_focus
    for point in reversed(ordered):
        if point.selection_fingerprint != top:
            break
        threshold = point.w_focus
    return threshold


def run_sweep(graph: AttackGraph, catalog: Catalog, config: SweepConfig) -> SweepResult:
    """Run a seeded sensitivity sweep and derive slope and stability."""
    rng = random.Random(config.seed)
    alt_strategy = next(s for s in STRATEGIES if s != config.strategy) if config.record_alt_strategy else None
    points = []
    for scenario in range(config.runs):
        w_focus = rng.random()
        weights = WeightVector.focused(config.focus, w_focus)
        recommendations = recommend(
            graph,
            catalog,
            weights,
            config.strategy,
            delta=config.delta,
            kappa=config.kappa,
        )
        alt_sum = None
        if alt_strategy is not None:
            alt_recommendations = recommend(
                graph, catalog, weights, alt_strategy, delta=config.delta, kappa=config.kappa
            )
            alt_sum = _score_sum(alt_recommendations, catalog, config.focus)
        points.append(
            SweepPoint(
                scenario=scenario,
                w_focus=w_focus,
                weight_vector=weights,
                score_sum=_score_sum(recommendations, catalog, config.focus),
                selection_fingerprint=selection_fingerprint(
                    [r.selected for r in recommendations]
                ),
                alt_score_sum=alt_sum,
            )
        )
    return SweepResult(
        config=config,
        points=tuple(points),
        slope=_ols_slope(points),
        stability_threshold=_stability_threshold(points),
    )


def stability_report(result: SweepResult) -> float | None:
    """Recompute the stability threshold from a result's points."""
    return _stability_threshold(result.points)


CSV_HEADER = "scenario,w_focus,score_sum,selection_fingerprint"


def _format_number(value: float) -> str:
    return format(value, ".9g")


def export_sweep_csv(result: SweepResult) -> str:
    """CSV rendering of the sweep points.

    Numbers use 9 significant digits so repeated exports of the same result
    are byte-identical.
    """
    lines = [CSV_HEADER]
    for point in result.points:
        lines.append(
            f"{point.scenario},{_format_number(point.w_focus)},"
            f"{_format_number(point.score_sum)},{point.selection_fingerprint}"
        )
    return "\n".join(lines) + "\n"


def sweep_result_to_obj(result: SweepResult) -> dict:
    """JSON-ready rendering of a sweep result, config echo included."""
    points = []
    for point in result.points:
        entry = {
            "scenario": point.scenario,
            "w_focus": point.w_focus,
            "weight_vector": {c.value: point.weight_vector[c] for c in point.weight_vector.weights},
            "score_sum": point.score_sum,
            "selection_fingerprint": point.selection_fingerprint,
        }
        if point.alt_score_sum is not None:
            entry["alt_score_sum"] = point.alt_score_sum
        points.append(entry)
    return {
        "focus": result.config.focus.value,
        "runs": result.config.runs,
        "seed": result.config.seed,
        "strategy": result.config.strategy,
        "slope": result.slope,
        "stability_threshold": result.stability_threshold,
        "points": points,
    }
