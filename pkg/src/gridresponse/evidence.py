"""Dempster-Shafer evidence combination and event-to-graph correlation.

IOC events carry a confidence that becomes a simple support mass
{malicious: confidence, benign: 0, uncertain: 1 - confidence}.  Events are
matched against template edges and folded together with Dempster's rule;
a template counts as detected when mean edge belief times edge coverage
reaches the detection threshold.

An edge models the connection that carries the attack into its target
action, so an event matches an edge when the event's technique equals the
edge's target-node technique and the event's origin/target host labels
equal the edge's origin/target ``host`` properties.  The template's stored
masses are reference annotations; correlation starts every matched edge
from the vacuous mass so the result reflects observed evidence only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Sequence

from .errors import DocumentSyntaxError, TotalConflictError, ValueRangeError
from .model import AttackEdge, AttackGraph, MassFunction, attack_graph_to_obj

VACUOUS_MASS = MassFunction(0.0, 0.0, 1.0)

# combining masses with conflict at or above this is rejected as total conflict
CONFLICT_LIMIT = 0.999

DEFAULT_DETECTION_THRESHOLD = 0.7

_HYPOTHESES = ("malicious", "benign")


def conflict(m1: MassFunction, m2: MassFunction) -> float:
    """Dempster conflict K: the mass assigned to contradictory intersections."""
    return m1.malicious * m2.benign + m1.benign * m2.malicious


def combine_dempster(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Combine two mass functions with Dempster's rule of combination.

    Raises TotalConflictError when the conflict K reaches CONFLICT_LIMIT;
    renormalizing by 1 - K is numerically meaningless that close to total
    conflict.
    """
    k = conflict(m1, m2)
    if k >= CONFLICT_LIMIT:
        raise TotalConflictError(f"conflict {k} at or above {CONFLICT_LIMIT}")
    norm = 1.0 - k
    malicious = (
        m1.malicious * m2.malicious
        + m1.malicious * m2.uncertain
        + m1.uncertain * m2.malicious
    ) / norm
    benign = (
        m1.benign * m2.benign
        + m1.benign * m2.uncertain
        + m1.uncertain * m2.benign
    ) / norm
    uncertain = m1.uncertain * m2.uncertain / norm
    # the division by 1 - K can land a component an ulp past the unit
    # interval (e.g. pure-benign x pure-uncertain); pin each component so
    # the result always satisfies the mass-function range contract
    return MassFunction(
        min(1.0, max(0.0, malicious)),
        min(1.0, max(0.0, benign)),
        min(1.0, max(0.0, uncertain)),
    )


def _check_hypothesis(hypothesis: str):
    if hypothesis not in _HYPOTHESES:
        raise ValueRangeError(
            f"hypothesis must be one of {_HYPOTHESES}, got {hypothesis!r}",
            element=hypothesis,
        )


def belief(mass: MassFunction, hypothesis: str) -> float:
    """Total mass committed exactly to the hypothesis."""
    _check_hypothesis(hypothesis)
    return mass.malicious if hypothesis == "malicious" else mass.benign


def plausibility(mass: MassFunction, hypothesis: str) -> float:
    """Total mass not contradicting the hypothesis; belief plus uncertainty."""
    return belief(mass, hypothesis) + mass.uncertain


@dataclass(frozen=True)
class IocEvent:
    """One indicator-of-compromise event from the detection layer."""

    timestamp: int
    technique_id: str
    origin: str
    target: str
    indicator: str
    confidence: float

    def __post_init__(self):
        if not 0.0 < self.confidence <= 1.0:
            raise ValueRangeError(
                f"event confidence {self.confidence} outside (0, 1]",
                element=self.indicator,
            )

    def mass(self) -> MassFunction:
        return MassFunction(self.confidence, 0.0, 1.0 - self.confidence)


_EVENT_FIELDS = ("timestamp", "technique_id", "origin", "target", "indicator", "confidence")


def parse_events(text: str) -> list[IocEvent]:
    """Parse an event stream: one JSON object per line, blank lines ignored."""
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        where = f"line {lineno}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DocumentSyntaxError(f"{where}: invalid JSON: {exc}", element=where) from exc
        if not isinstance(obj, dict):
            raise DocumentSyntaxError(f"{where}: event must be an object", element=where)
        missing = [k for k in _EVENT_FIELDS if k not in obj]
        if missing:
            raise DocumentSyntaxError(f"{where}: missing field {missing[0]!r}", element=where)
        unknown = [k for k in obj if k not in _EVENT_FIELDS]
        if unknown:
            raise DocumentSyntaxError(f"{where}: unknown field {unknown[0]!r}", element=where)
        if isinstance(obj["timestamp"], bool) or not isinstance(obj["timestamp"], int):
            raise DocumentSyntaxError(f"{where}: timestamp must be an integer", element=where)
        if isinstance(obj["confidence"], bool) or not isinstance(obj["confidence"], (int, float)):
            raise DocumentSyntaxError(f"{where}: confidence must be a number", element=where)
        for key in ("technique_id", "origin", "target", "indicator"):
            if not isinstance(obj[key], str):
                raise DocumentSyntaxError(f"{where}: {key} must be a string", element=where)
        events.append(
            IocEvent(
                timestamp=obj["timestamp"],
                technique_id=obj["technique_id"],
                origin=obj["origin"],
                target=obj["target"],
                indicator=obj["indicator"],
                confidence=float(obj["confidence"]),
            )
        )
    return events


def serialize_events(events: Iterable[IocEvent]) -> str:
    lines = []
    for event in events:
        lines.append(
            json.dumps(
                {
                    "timestamp": event.timestamp,
                    "technique_id": event.technique_id,
                    "origin": event.origin,
                    "target": event.target,
                    "indicator": event.indicator,
                    "confidence": event.confidence,
                }
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class CorrelationResult:
    """Outcome of correlating an event stream against one template."""

    template_id: str
    score: float
    coverage: float
    matched_edges: dict[tuple[str, str], MassFunction]
    instantiated_graph: AttackGraph | None


def _edge_matches(edge: AttackEdge, technique_by_node: dict[str, str], event: IocEvent) -> bool:
    return (
        technique_by_node[edge.to_id] == event.technique_id
        and edge.origin_props.get("host") == event.origin
        and edge.target_props.get("host") == event.target
    )


def correlate_events(
    events: Sequence[IocEvent],
    template: AttackGraph,
    threshold: float = DEFAULT_DETECTION_THRESHOLD,
) -> CorrelationResult:
    """Correlate an event stream against one attack-graph template.

    Each matching event's mass is folded into the edge's running mass with
    Dempster's rule (starting vacuous).  The score is the mean belief in
    'malicious' over matched edges times the fraction of template edges
    matched; detection fires at ``score >= threshold`` and then yields the
    template with evidence masses on the matched edges.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueRangeError(f"threshold {threshold} outside [0, 1]")
    technique_by_node = {n.id: n.technique_id for n in template.nodes}
    combined: dict[tuple[str, str], MassFunction] = {}
    for event in events:
        for edge in template.edges:
            if _edge_matches(edge, technique_by_node, event):
                key = (edge.from_id, edge.to_id)
                combined[key] = combine_dempster(combined.get(key, VACUOUS_MASS), event.mass())
    if template.edges and combined:
        coverage = len(combined) / len(template.edges)
        score = fmean(belief(m, "malicious") for m in combined.values()) * coverage
    else:
        coverage = 0.0
        score = 0.0
    instantiated = None
    if score >= threshold and combined:
        instantiated = AttackGraph(
            id=template.id,
            nodes=template.nodes,
            edges=tuple(
                AttackEdge(
                    from_id=e.from_id,
                    to_id=e.to_id,
                    mass=combined.get((e.from_id, e.to_id), e.mass),
                    origin_props=e.origin_props,
                    target_props=e.target_props,
                )
                for e in template.edges
            ),
        )
    return CorrelationResult(
        template_id=template.id,
        score=score,
        coverage=coverage,
        matched_edges=combined,
        instantiated_graph=instantiated,
    )


def correlate_many(
    events: Sequence[IocEvent],
    templates: Iterable[AttackGraph],
    threshold: float = DEFAULT_DETECTION_THRESHOLD,
) -> list[CorrelationResult]:
    """Correlate one event stream against several templates.

    Templates are independent; results are returned sorted by template id
    so concurrent evaluation cannot change the output.
    """
    results = [correlate_events(events, t, threshold) for t in templates]
    return sorted(results, key=lambda r: r.template_id)


def correlation_to_obj(result: CorrelationResult) -> dict:
    """JSON-ready detection report; matched edges sorted for stable output."""
    return {
        "template_id": result.template_id,
        "detected": result.instantiated_graph is not None,
        "score": result.score,
        "coverage": result.coverage,
        "matched_edges": [
            {
                "from": from_id,
                "to": to_id,
                "mass": {
                    "malicious": mass.malicious,
                    "benign": mass.benign,
                    "uncertain": mass.uncertain,
                },
            }
            for (from_id, to_id), mass in sorted(result.matched_edges.items())
        ],
        "instantiated_graph": (
            attack_graph_to_obj(result.instantiated_graph)
            if result.instantiated_graph is not None
            else None
        ),
    }
