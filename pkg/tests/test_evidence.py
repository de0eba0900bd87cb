"""Evidence combination and event correlation.

The combination rule is checked against an independent brute-force oracle
that enumerates the intersection table over the focal sets {malicious},
{benign} and the whole frame, so the implementation's algebra can never
drift from first principles unnoticed.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from gridresponse import (
    CONFLICT_LIMIT,
    VACUOUS_MASS,
    AttackEdge,
    AttackGraph,
    AttackNode,
    DocumentSyntaxError,
    IocEvent,
    LOCKHEED_MARTIN,
    MassFunction,
    TotalConflictError,
    ValueRangeError,
    belief,
    combine_dempster,
    conflict,
    correlate_events,
    correlate_many,
    correlation_to_obj,
    havex_template,
    parse_events,
    plausibility,
    serialize_events,
    stuxnet_template,
)

MAL, BEN, FRAME = "malicious", "benign", "frame"

_INTERSECTION = {
    (MAL, MAL): MAL,
    (MAL, FRAME): MAL,
    (FRAME, MAL): MAL,
    (BEN, BEN): BEN,
    (BEN, FRAME): BEN,
    (FRAME, BEN): BEN,
    (FRAME, FRAME): FRAME,
    (MAL, BEN): None,
    (BEN, MAL): None,
}


def combine_by_enumeration(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Brute-force oracle: walk the full focal-set intersection table."""
    focal1 = {MAL: m1.malicious, BEN: m1.benign, FRAME: m1.uncertain}
    focal2 = {MAL: m2.malicious, BEN: m2.benign, FRAME: m2.uncertain}
    pooled = {MAL: 0.0, BEN: 0.0, FRAME: 0.0, None: 0.0}
    for set1, mass1 in focal1.items():
        for set2, mass2 in focal2.items():
            pooled[_INTERSECTION[(set1, set2)]] += mass1 * mass2
    norm = 1.0 - pooled[None]
    # mirror the library: pin each renormalized component to [0, 1] so a
    # one-ulp division overshoot cannot violate the mass range contract
    return MassFunction(
        min(1.0, max(0.0, pooled[MAL] / norm)),
        min(1.0, max(0.0, pooled[BEN] / norm)),
        min(1.0, max(0.0, pooled[FRAME] / norm)),
    )


def random_mass(rng: random.Random) -> MassFunction:
    malicious = rng.random()
    benign = rng.uniform(0.0, 1.0 - malicious)
    return MassFunction(malicious, benign, 1.0 - malicious - benign)


masses = st.builds(
    lambda malicious, benign_share: MassFunction(
        malicious,
        (1.0 - malicious) * benign_share,
        max(0.0, 1.0 - malicious - (1.0 - malicious) * benign_share),
    ),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
)


def _assert_close(a: MassFunction, b: MassFunction, tol: float) -> None:
    assert abs(a.malicious - b.malicious) <= tol
    assert abs(a.benign - b.benign) <= tol
    assert abs(a.uncertain - b.uncertain) <= tol


class TestCombination:
    def test_worked_example_matches_hand_values(self):
        combined = combine_dempster(
            MassFunction(0.6, 0.2, 0.2), MassFunction(0.5, 0.3, 0.2)
        )
        assert combined.malicious == pytest.approx(0.52 / 0.72, abs=1e-9)
        assert combined.benign == pytest.approx(0.16 / 0.72, abs=1e-9)
        assert combined.uncertain == pytest.approx(0.04 / 0.72, abs=1e-9)
        assert combined.malicious == pytest.approx(0.7222, abs=5e-5)
        assert combined.benign == pytest.approx(0.2222, abs=5e-5)
        assert combined.uncertain == pytest.approx(0.0556, abs=5e-5)

    def test_worked_example_matches_enumeration_oracle(self):
        m1, m2 = MassFunction(0.6, 0.2, 0.2), MassFunction(0.5, 0.3, 0.2)
        _assert_close(combine_dempster(m1, m2), combine_by_enumeration(m1, m2), 1e-9)

    @given(m1=masses, m2=masses)
    def test_combination_equals_enumeration_oracle(self, m1, m2):
        if conflict(m1, m2) >= CONFLICT_LIMIT:
            return
        _assert_close(combine_dempster(m1, m2), combine_by_enumeration(m1, m2), 1e-12)

    def test_vacuous_mass_is_the_identity(self):
        m = MassFunction(0.55, 0.15, 0.3)
        _assert_close(combine_dempster(m, VACUOUS_MASS), m, 1e-12)
        _assert_close(combine_dempster(VACUOUS_MASS, m), m, 1e-12)

    def test_total_conflict_is_rejected(self):
        with pytest.raises(TotalConflictError):
            combine_dempster(MassFunction(1.0, 0.0, 0.0), MassFunction(0.0, 1.0, 0.0))

    def test_conflict_limit_boundary(self):
        certain = MassFunction(1.0, 0.0, 0.0)
        at_limit = MassFunction(0.0, CONFLICT_LIMIT, 1.0 - CONFLICT_LIMIT)
        with pytest.raises(TotalConflictError):
            combine_dempster(certain, at_limit)
        below = MassFunction(0.0, 0.998, 0.002)
        combined = combine_dempster(certain, below)
        assert combined.malicious == pytest.approx(1.0, abs=1e-12)

    def test_conflict_formula(self):
        m1, m2 = MassFunction(0.6, 0.2, 0.2), MassFunction(0.5, 0.3, 0.2)
        assert conflict(m1, m2) == pytest.approx(0.6 * 0.3 + 0.2 * 0.5, abs=1e-15)
        assert conflict(MassFunction(1, 0, 0), MassFunction(0, 1, 0)) == 1.0

    @given(m1=masses, m2=masses)
    def test_combination_is_commutative_and_normalized(self, m1, m2):
        if conflict(m1, m2) >= CONFLICT_LIMIT:
            return
        forward = combine_dempster(m1, m2)
        backward = combine_dempster(m2, m1)
        _assert_close(forward, backward, 1e-12)
        total = forward.malicious + forward.benign + forward.uncertain
        assert total == pytest.approx(1.0, abs=1e-9)

    @given(m1=masses, m2=masses, m3=masses)
    def test_combination_is_associative(self, m1, m2, m3):
        try:
            left = combine_dempster(combine_dempster(m1, m2), m3)
            right = combine_dempster(m1, combine_dempster(m2, m3))
        except TotalConflictError:
            return
        _assert_close(left, right, 1e-9)


class TestBeliefAndPlausibility:
    def test_belief_and_plausibility_values(self):
        m = MassFunction(0.6, 0.1, 0.3)
        assert belief(m, "malicious") == 0.6
        assert plausibility(m, "malicious") == pytest.approx(0.9)
        assert belief(m, "benign") == 0.1
        assert plausibility(m, "benign") == pytest.approx(0.4)

    @given(m=masses)
    def test_belief_plausibility_duality(self, m):
        assert belief(m, "malicious") + plausibility(m, "benign") == pytest.approx(
            1.0, abs=1e-9
        )
        assert belief(m, "malicious") <= plausibility(m, "malicious") + 1e-12

    def test_unknown_hypothesis_rejected(self):
        with pytest.raises(ValueRangeError):
            belief(VACUOUS_MASS, "suspicious")


class TestIocEvents:
    def test_confidence_must_be_positive(self):
        with pytest.raises(ValueRangeError, match="outside"):
            IocEvent(0, "T1", "a", "b", "probe", confidence=0.0)
        with pytest.raises(ValueRangeError):
            IocEvent(0, "T1", "a", "b", "probe", confidence=1.2)

    def test_event_mass_is_simple_support(self):
        event = IocEvent(0, "T1", "a", "b", "probe", confidence=0.8)
        mass = event.mass()
        assert mass.malicious == 0.8
        assert mass.benign == 0.0
        assert mass.uncertain == pytest.approx(0.2, abs=1e-12)

    def test_stream_round_trip(self):
        events = [
            IocEvent(0, "T1", "a", "b", "probe", 0.8),
            IocEvent(1, "T2", "b", "c", "beacon", 0.75),
        ]
        assert parse_events(serialize_events(events)) == events

    def test_blank_lines_ignored(self):
        text = serialize_events([IocEvent(0, "T1", "a", "b", "probe", 0.8)])
        assert len(parse_events("\n" + text + "\n\n")) == 1

    def test_empty_stream(self):
        assert parse_events("") == []
        assert serialize_events([]) == ""

    def test_parse_errors_name_the_line(self):
        good = serialize_events([IocEvent(0, "T1", "a", "b", "probe", 0.8)])
        with pytest.raises(DocumentSyntaxError, match="line 2") as excinfo:
            parse_events(good + "{broken\n")
        assert excinfo.value.element == "line 2"
        with pytest.raises(DocumentSyntaxError, match="line 1"):
            parse_events('{"timestamp": 0}\n')
        with pytest.raises(DocumentSyntaxError, match="unknown field"):
            parse_events(
                '{"timestamp": 0, "technique_id": "T1", "origin": "a", '
                '"target": "b", "indicator": "x", "confidence": 0.8, "severity": 1}\n'
            )
        with pytest.raises(DocumentSyntaxError, match="timestamp must be an integer"):
            parse_events(
                '{"timestamp": true, "technique_id": "T1", "origin": "a", '
                '"target": "b", "indicator": "x", "confidence": 0.8}\n'
            )
        with pytest.raises(DocumentSyntaxError, match="must be an object"):
            parse_events("[1, 2]\n")


def _matching_events(template: AttackGraph, confidence: float = 0.9) -> list[IocEvent]:
    technique_of = {n.id: n.technique_id for n in template.nodes}
    return [
        IocEvent(
            timestamp=i,
            technique_id=technique_of[edge.to_id],
            origin=edge.origin_props["host"],
            target=edge.target_props["host"],
            indicator=f"ioc-{i}",
            confidence=confidence,
        )
        for i, edge in enumerate(template.edges)
    ]


def _two_step_template() -> AttackGraph:
    nodes = (
        AttackNode("a", "first", "T1", LOCKHEED_MARTIN.stage(1)),
        AttackNode("b", "second", "T2", LOCKHEED_MARTIN.stage(2)),
    )
    edge = AttackEdge(
        from_id="a",
        to_id="b",
        mass=MassFunction(0.7, 0.1, 0.2),
        origin_props={"host": "h1"},
        target_props={"host": "h2"},
    )
    return AttackGraph(id="two-step", nodes=nodes, edges=(edge,))


class TestCorrelation:
    def test_empty_stream_scores_zero(self, havex_graph):
        result = correlate_events([], havex_graph)
        assert result.score == 0.0
        assert result.coverage == 0.0
        assert result.matched_edges == {}
        assert result.instantiated_graph is None

    def test_full_coverage_fires(self, havex_graph):
        events = _matching_events(havex_graph, confidence=0.9)
        result = correlate_events(events, havex_graph)
        assert result.coverage == 1.0
        assert result.score == pytest.approx(0.9, abs=1e-12)
        assert result.instantiated_graph is not None
        assert set(result.matched_edges) == {
            (e.from_id, e.to_id) for e in havex_graph.edges
        }

    def test_partial_coverage_stays_below_threshold(self, havex_graph):
        events = _matching_events(havex_graph, confidence=0.9)[:4]
        result = correlate_events(events, havex_graph)
        assert result.coverage == pytest.approx(4 / 9)
        assert result.score == pytest.approx(0.9 * 4 / 9, abs=1e-12)
        assert result.instantiated_graph is None

    def test_detection_fires_at_threshold_exactly(self):
        template = _two_step_template()
        event = IocEvent(0, "T2", "h1", "h2", "probe", confidence=0.7)
        result = correlate_events([event], template, threshold=0.7)
        assert result.score == pytest.approx(0.7, abs=1e-12)
        assert result.instantiated_graph is not None

    def test_matching_requires_technique_and_both_hosts(self):
        template = _two_step_template()
        wrong_technique = IocEvent(0, "T1", "h1", "h2", "x", 0.9)
        wrong_origin = IocEvent(0, "T2", "h9", "h2", "x", 0.9)
        wrong_target = IocEvent(0, "T2", "h1", "h9", "x", 0.9)
        for event in (wrong_technique, wrong_origin, wrong_target):
            assert correlate_events([event], template).matched_edges == {}

    def test_repeated_evidence_reinforces_an_edge(self):
        template = _two_step_template()
        event = IocEvent(0, "T2", "h1", "h2", "probe", confidence=0.8)
        result = correlate_events([event, event], template)
        mass = result.matched_edges[("a", "b")]
        # two independent 0.8-confidence sightings: 1 - 0.2^2
        assert mass.malicious == pytest.approx(0.96, abs=1e-12)
        assert result.score == pytest.approx(0.96, abs=1e-12)

    def test_evidence_starts_from_the_vacuous_mass(self):
        # the template's stored mass must not leak into the evidence
        template = _two_step_template()
        event = IocEvent(0, "T2", "h1", "h2", "probe", confidence=0.75)
        result = correlate_events([event], template)
        assert result.matched_edges[("a", "b")] == event.mass()

    def test_event_order_does_not_change_the_result(self, havex_graph):
        events = _matching_events(havex_graph, confidence=0.85)
        extra = IocEvent(99, "T0862", "vendor-portal", "eng-ws1", "dup", 0.6)
        stream = events + [extra]
        shuffled = stream[:]
        random.Random(7).shuffle(shuffled)
        first = correlate_events(stream, havex_graph)
        second = correlate_events(shuffled, havex_graph)
        assert first.coverage == second.coverage
        assert first.score == pytest.approx(second.score, abs=1e-9)
        for key, mass in first.matched_edges.items():
            _assert_close(mass, second.matched_edges[key], 1e-9)

    def test_instantiated_graph_carries_the_evidence(self, havex_graph):
        events = _matching_events(havex_graph, confidence=0.9)
        result = correlate_events(events, havex_graph)
        instantiated = result.instantiated_graph
        assert instantiated.id == havex_graph.id
        assert instantiated.nodes == havex_graph.nodes
        for edge in instantiated.edges:
            assert edge.mass == result.matched_edges[(edge.from_id, edge.to_id)]

    def test_threshold_out_of_range_rejected(self, havex_graph):
        with pytest.raises(ValueRangeError):
            correlate_events([], havex_graph, threshold=1.5)

    def test_correlate_many_sorts_by_template_id(self, havex_graph):
        events = _matching_events(havex_graph, confidence=0.9)
        results = correlate_many(events, [stuxnet_template(), havex_graph])
        assert [r.template_id for r in results] == [
            "havex-template",
            "stuxnet-template",
        ]
        assert results[0].instantiated_graph is not None
        assert results[1].instantiated_graph is None

    def test_report_object_shape(self, havex_graph):
        events = _matching_events(havex_graph, confidence=0.9)
        report = correlation_to_obj(correlate_events(events, havex_graph))
        assert report["detected"] is True
        assert report["template_id"] == "havex-template"
        froms = [entry["from"] for entry in report["matched_edges"]]
        assert froms == sorted(froms)
        assert report["instantiated_graph"]["id"] == "havex-template"
        empty = correlation_to_obj(correlate_events([], havex_graph))
        assert empty["detected"] is False
        assert empty["instantiated_graph"] is None
        assert empty["matched_edges"] == []
