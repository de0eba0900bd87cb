"""Per-node recommendations, attack-defense tree assembly, DOT export
and the tree document round-trip."""

from __future__ import annotations

import json

import pytest

from gridresponse import (
    CRITERIA,
    ADTree,
    AttackEdge,
    AttackGraph,
    AttackNode,
    Catalog,
    CountermeasureRecord,
    Criterion,
    CriterionSpec,
    Direction,
    DocumentSyntaxError,
    InvariantError,
    LOCKHEED_MARTIN,
    MassFunction,
    NodeRecommendation,
    Ranking,
    UnknownTechniqueError,
    WeightVector,
    adtree_from_obj,
    adtree_to_obj,
    build_adtree,
    export_adtree_document,
    export_dot,
    parse_adtree_document,
    recommend,
    recommendations_to_obj,
    topological_order,
)

_DIRECTIONS = {
    Criterion.COST_TO_IMPLEMENT: Direction.COST,
    Criterion.TIME_TO_IMPLEMENT: Direction.COST,
    Criterion.SETUP_LOCALITY: Direction.BENEFIT,
    Criterion.DURATION_OF_ACTIVATION: Direction.COST,
    Criterion.AREA_OF_IMPACT: Direction.BENEFIT,
    Criterion.TECHNICAL_IMPACT: Direction.COST,
}

COST_SET = {c for c, d in _DIRECTIONS.items() if d is Direction.COST}


def _specs() -> dict[Criterion, CriterionSpec]:
    return {
        c: CriterionSpec(id=c, direction=d, scale_note="0 low, 1 high")
        for c, d in _DIRECTIONS.items()
    }


def _record(cm_id: str, strength: float, name: str | None = None) -> CountermeasureRecord:
    """A record whose desirability rises with ``strength`` on every criterion."""
    criteria = {
        c: (1.0 - strength if c in COST_SET else strength) for c in CRITERIA
    }
    return CountermeasureRecord(id=cm_id, name=name or f"measure {cm_id}", criteria=criteria)


def _catalog(records, techniques) -> Catalog:
    from gridresponse import TechniqueRecord

    return Catalog(
        criterion_specs=_specs(),
        countermeasures={r.id: r for r in records},
        techniques={
            t_id: TechniqueRecord(
                id=t_id, name=f"technique {t_id}", tactic="execution", mitigations=tuple(m)
            )
            for t_id, m in techniques.items()
        },
    )


def _node(node_id: str, technique: str, stage: int, name: str | None = None) -> AttackNode:
    return AttackNode(node_id, name or f"step {node_id}", technique, LOCKHEED_MARTIN.stage(stage))


def _chain_graph(nodes: list[AttackNode]) -> AttackGraph:
    edges = tuple(
        AttackEdge(
            from_id=a.id,
            to_id=b.id,
            mass=MassFunction(0.5, 0.2, 0.3),
            origin_props={"host": "h1"},
            target_props={"host": "h2"},
        )
        for a, b in zip(nodes, nodes[1:])
    )
    return AttackGraph(id="custom", nodes=tuple(nodes), edges=edges)


class TestRecommend:
    def test_havex_recommendations_follow_the_topological_order(
        self, havex_graph, catalog, uniform_weights
    ):
        recommendations = recommend(havex_graph, catalog, uniform_weights)
        assert [r.node_id for r in recommendations] == topological_order(havex_graph)

    @pytest.mark.parametrize("strategy", ["saw", "ivpf-choquet"])
    def test_selected_always_mitigates_the_node_technique(
        self, havex_graph, catalog, uniform_weights, strategy
    ):
        for rec in recommend(havex_graph, catalog, uniform_weights, strategy):
            node = havex_graph.node(rec.node_id)
            candidates = {r.id for r in catalog.mitigations_for(node.technique_id)}
            assert rec.selected in candidates
            assert {e[0] for e in rec.ranking.entries} == candidates

    def test_selected_is_the_ranking_head_and_entries_descend(
        self, havex_graph, catalog, uniform_weights
    ):
        for rec in recommend(havex_graph, catalog, uniform_weights):
            assert rec.selected == rec.ranking.entries[0][0]
            scores = [score for _, score in rec.ranking.entries]
            assert scores == sorted(scores, reverse=True)

    def test_single_mitigation_is_always_selected(self):
        catalog = _catalog([_record("M1", 0.5)], {"T1": ["M1"]})
        graph = _chain_graph([_node("n1", "T1", 1)])
        for strategy in ("saw", "ivpf-choquet"):
            (rec,) = recommend(graph, catalog, WeightVector.uniform(), strategy)
            assert rec.selected == "M1"
            assert len(rec.ranking.entries) == 1

    def test_dominant_candidate_wins_under_any_weighting(self):
        catalog = _catalog(
            [_record("M-dom", 0.9), _record("M-mid", 0.5), _record("M-low", 0.1)],
            {"T1": ["M-mid", "M-dom", "M-low"]},
        )
        graph = _chain_graph([_node("n1", "T1", 1)])
        weight_grid = [WeightVector.uniform()] + [
            WeightVector.focused(c, v) for c in CRITERIA for v in (0.0, 0.5, 1.0)
        ]
        for strategy in ("saw", "ivpf-choquet"):
            for w in weight_grid:
                (rec,) = recommend(graph, catalog, w, strategy)
                assert rec.selected == "M-dom"

    def test_unknown_technique_names_the_node(self, catalog, uniform_weights):
        graph = _chain_graph([_node("n-bad", "T9999", 1)])
        with pytest.raises(UnknownTechniqueError) as excinfo:
            recommend(graph, catalog, uniform_weights)
        assert excinfo.value.element == "n-bad"
        assert "n-bad" in str(excinfo.value)

    def test_recommendations_object_shape(self, havex_graph, catalog, uniform_weights):
        recommendations = recommend(havex_graph, catalog, uniform_weights)
        obj = recommendations_to_obj(recommendations)
        assert len(obj) == 10
        first = obj[0]
        assert first["node_id"] == "s01"
        assert first["selected"] == recommendations[0].selected
        assert first["ranking"]["strategy"] == "ivpf-choquet"
        entry = first["ranking"]["entries"][0]
        assert entry["id"] == recommendations[0].selected
        assert isinstance(entry["score"], float)


class TestBuildAdtree:
    @pytest.fixture()
    def havex_tree(self, havex_graph, catalog, uniform_weights) -> ADTree:
        recommendations = recommend(havex_graph, catalog, uniform_weights)
        return build_adtree(havex_graph, recommendations, catalog)

    def test_root_is_the_final_action(self, havex_graph, havex_tree):
        assert havex_tree.root_id == topological_order(havex_graph)[-1] == "s10"

    def test_nodes_run_root_to_leaf(self, havex_graph, havex_tree):
        expected = list(reversed(topological_order(havex_graph)))
        assert [n.id for n in havex_tree.nodes] == expected
        assert havex_tree.nodes[0].parent_id is None
        for parent, child in zip(havex_tree.nodes, havex_tree.nodes[1:]):
            assert child.parent_id == parent.id

    def test_every_attack_node_carries_its_defense(
        self, havex_graph, catalog, uniform_weights, havex_tree
    ):
        selected_by_node = {
            r.node_id: r for r in recommend(havex_graph, catalog, uniform_weights)
        }
        for node in havex_tree.nodes:
            rec = selected_by_node[node.id]
            assert node.defense.id == node.id + "-defense"
            assert node.defense.countermeasure_id == rec.selected
            assert node.defense.name == catalog.countermeasures[rec.selected].name
            assert node.defense.score == dict(rec.ranking.entries)[rec.selected]

    def test_attack_fields_mirror_the_graph(self, havex_graph, havex_tree):
        for node in havex_tree.nodes:
            source = havex_graph.node(node.id)
            assert node.name == source.name
            assert node.technique_id == source.technique_id
            assert node.stage_index == source.kill_chain_stage.index
            assert node.stage_name == source.kill_chain_stage.name

    def test_missing_recommendation_is_detected(self, havex_graph, catalog, uniform_weights):
        recommendations = recommend(havex_graph, catalog, uniform_weights)[:-1]
        with pytest.raises(InvariantError) as excinfo:
            build_adtree(havex_graph, recommendations, catalog)
        assert excinfo.value.element == "s10"

    def test_defense_id_collision_is_detected(self):
        catalog = _catalog([_record("M1", 0.5)], {"T1": ["M1"]})
        nodes = [_node("a", "T1", 1), _node("a-defense", "T1", 2)]
        graph = _chain_graph(nodes)
        recommendations = recommend(graph, catalog, WeightVector.uniform())
        with pytest.raises(InvariantError) as excinfo:
            build_adtree(graph, recommendations, catalog)
        assert excinfo.value.element == "a-defense"


class TestExportDot:
    @pytest.fixture()
    def havex_dot(self, havex_graph, catalog, uniform_weights) -> str:
        recommendations = recommend(havex_graph, catalog, uniform_weights)
        return export_dot(build_adtree(havex_graph, recommendations, catalog))

    def test_matches_the_golden_file(self, havex_dot, golden_text):
        assert havex_dot == golden_text("havex_adtree.dot")

    def test_export_is_byte_stable(self, havex_graph, catalog, uniform_weights, havex_dot):
        again = export_dot(
            build_adtree(
                havex_graph, recommend(havex_graph, catalog, uniform_weights), catalog
            )
        )
        assert again == havex_dot

    def test_shapes_and_edges(self, havex_dot):
        assert havex_dot.count("shape=box") == 10
        assert havex_dot.count("shape=ellipse") == 10
        assert havex_dot.count(" -> ") == 19
        assert havex_dot.count("[style=dashed]") == 10
        assert havex_dot.count("<B>") == 10

    def test_defense_labels_are_bold_countermeasure_names(
        self, havex_graph, catalog, uniform_weights, havex_dot
    ):
        tree = build_adtree(
            havex_graph, recommend(havex_graph, catalog, uniform_weights), catalog
        )
        for node in tree.nodes:
            assert f"<B>{node.defense.name}</B>" in havex_dot

    def test_special_characters_are_escaped(self):
        catalog = _catalog(
            [_record("M1", 0.5, name='Block & isolate <fast> "now"')],
            {"T1": ["M1"]},
        )
        nodes = [_node("a", "T1", 1, name='step "one" \\ with & <brackets>')]
        graph = _chain_graph(nodes)
        tree = build_adtree(graph, recommend(graph, catalog, WeightVector.uniform()), catalog)
        dot = export_dot(tree)
        assert '\\"one\\"' in dot
        assert "\\\\ with" in dot
        assert "Block &amp; isolate &lt;fast&gt;" in dot


class TestAdtreeDocuments:
    @pytest.fixture()
    def havex_tree(self, havex_graph, catalog, uniform_weights) -> ADTree:
        recommendations = recommend(havex_graph, catalog, uniform_weights)
        return build_adtree(havex_graph, recommendations, catalog)

    def test_havex_round_trip_is_exact(self, havex_tree):
        document = export_adtree_document(havex_tree)
        assert parse_adtree_document(document) == havex_tree
        assert export_adtree_document(parse_adtree_document(document)) == document

    def test_single_node_round_trip(self):
        catalog = _catalog([_record("M1", 0.5)], {"T1": ["M1"]})
        graph = _chain_graph([_node("a", "T1", 1)])
        tree = build_adtree(graph, recommend(graph, catalog, WeightVector.uniform()), catalog)
        assert parse_adtree_document(export_adtree_document(tree)) == tree

    def test_document_holds_one_pair_per_attack_node(self, havex_tree):
        obj = adtree_to_obj(havex_tree)
        assert obj["root"] == "s10"
        assert len(obj["nodes"]) == 20
        kinds = [n["kind"] for n in obj["nodes"]]
        assert kinds == ["attack", "defense"] * 10

    def test_obj_round_trip(self, havex_tree):
        assert adtree_from_obj(adtree_to_obj(havex_tree)) == havex_tree

    @pytest.fixture()
    def small_obj(self) -> dict:
        catalog = _catalog([_record("M1", 0.5)], {"T1": ["M1"]})
        nodes = [_node("a", "T1", 1), _node("b", "T1", 2)]
        graph = _chain_graph(nodes)
        tree = build_adtree(graph, recommend(graph, catalog, WeightVector.uniform()), catalog)
        return adtree_to_obj(tree)

    def test_missing_defense_child(self, small_obj):
        small_obj["nodes"] = [
            n for n in small_obj["nodes"] if n["id"] != "a-defense"
        ]
        with pytest.raises(DocumentSyntaxError, match="lacks its defense child"):
            adtree_from_obj(small_obj)

    def test_defense_parent_mismatch(self, small_obj):
        for node in small_obj["nodes"]:
            if node["id"] == "b-defense":
                node["parent"] = "a"
        with pytest.raises(DocumentSyntaxError, match="lacks its defense child"):
            adtree_from_obj(small_obj)

    def test_attack_node_outside_the_path(self, small_obj):
        stray = dict(small_obj["nodes"][0])
        stray.update({"id": "x", "parent": None, "defense": "x-defense"})
        stray_defense = dict(small_obj["nodes"][1])
        stray_defense.update({"id": "x-defense", "parent": "x"})
        small_obj["nodes"] += [stray, stray_defense]
        with pytest.raises(InvariantError, match="outside the root path"):
            adtree_from_obj(small_obj)

    def test_two_attack_children(self, small_obj):
        second = dict(
            next(n for n in small_obj["nodes"] if n["id"] == "a" and n["kind"] == "attack")
        )
        second.update({"id": "c", "parent": "a", "defense": "c-defense"})
        third = dict(second)
        third.update({"id": "d", "defense": "d-defense"})
        small_obj["nodes"] += [second, third]
        with pytest.raises(InvariantError, match="has 2 attack children") as excinfo:
            adtree_from_obj(small_obj)
        assert excinfo.value.element == "a"

    def test_path_cycle_is_detected(self, small_obj):
        # point the root's parent at its own child to close a loop
        for node in small_obj["nodes"]:
            if node["kind"] == "attack" and node["parent"] is None:
                node["parent"] = "a"
        with pytest.raises(InvariantError, match="revisits"):
            adtree_from_obj(small_obj)

    def test_missing_root_attack_node(self, small_obj):
        small_obj["root"] = "ghost"
        with pytest.raises(DocumentSyntaxError, match="'ghost' missing"):
            adtree_from_obj(small_obj)

    def test_unknown_kind(self, small_obj):
        small_obj["nodes"][0]["kind"] = "mitigation"
        with pytest.raises(DocumentSyntaxError, match="unknown kind"):
            adtree_from_obj(small_obj)

    def test_missing_and_unknown_fields(self, small_obj):
        broken = json.loads(json.dumps(small_obj))
        del broken["nodes"][0]["technique_id"]
        with pytest.raises(DocumentSyntaxError, match="missing field 'technique_id'"):
            adtree_from_obj(broken)
        extra = json.loads(json.dumps(small_obj))
        extra["nodes"][1]["color"] = "red"
        with pytest.raises(DocumentSyntaxError, match="unknown field 'color'"):
            adtree_from_obj(extra)

    def test_top_level_structure_errors(self, small_obj):
        with pytest.raises(DocumentSyntaxError, match="must be an object"):
            adtree_from_obj([1])
        with pytest.raises(DocumentSyntaxError, match="missing field 'root'"):
            adtree_from_obj({"nodes": []})
        with pytest.raises(DocumentSyntaxError, match="unknown field 'extra'"):
            adtree_from_obj({"root": "a", "nodes": [], "extra": 1})
        with pytest.raises(DocumentSyntaxError, match="must be an array"):
            adtree_from_obj({"root": "a", "nodes": "none"})
        with pytest.raises(DocumentSyntaxError, match="objects with a 'kind'"):
            adtree_from_obj({"root": "a", "nodes": [42]})

    def test_invalid_json(self):
        with pytest.raises(DocumentSyntaxError, match="invalid JSON"):
            parse_adtree_document("{nope")
