"""Per-node countermeasure recommendation and the attack-defense tree.

Every attack node gets its own candidate set (the catalog mitigations for
its technique), normalized independently of other nodes, ranked by the
chosen strategy, and topped with the selected countermeasure.  The
recommendations assemble into an attack-defense tree: a conjunctive path
of attack nodes along the topological order, rooted at the final action,
with exactly one defense child per attack node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .catalog import Catalog
from .errors import DocumentSyntaxError, InvariantError, UnknownTechniqueError
from .mcdm import (
    DEFAULT_DELTA,
    DEFAULT_KAPPA,
    Ranking,
    WeightVector,
    normalize,
    rank_countermeasures,
)
from .model import AttackGraph, topological_order

DEFENSE_SUFFIX = "-defense"


@dataclass(frozen=True)
class NodeRecommendation:
    """Ranked candidates for one attack node; ``selected`` is the ranking head."""

    node_id: str
    ranking: Ranking
    selected: str


def recommend(
    graph: AttackGraph,
    catalog: Catalog,
    w: WeightVector,
    strategy: str = "ivpf-choquet",
    *,
    delta: float = DEFAULT_DELTA,
    kappa: float = DEFAULT_KAPPA,
) -> list[NodeRecommendation]:
    """Rank and select a countermeasure for every node, in topological order.

    Nodes are independent: each candidate set is normalized on its own, so
    a recommendation never depends on what other nodes' candidates look
    like.
    """
    recommendations = []
    for node_id in topological_order(graph):
        node = graph.node(node_id)
        try:
            records = catalog.mitigations_for(node.technique_id)
        except UnknownTechniqueError as exc:
            raise UnknownTechniqueError(
                f"node {node.id}: {exc}", element=node.id
            ) from exc
        matrix = normalize(records, catalog.criterion_specs)
        ranking = rank_countermeasures(matrix, w, strategy, delta=delta, kappa=kappa)
        recommendations.append(
            NodeRecommendation(node_id=node.id, ranking=ranking, selected=ranking.selected())
        )
    return recommendations


def ranking_to_obj(ranking: Ranking) -> dict:
    """Plain-object form of a ranking: strategy plus ordered (id, score) rows."""
    return {
        "strategy": ranking.strategy,
        "entries": [
            {"id": entry_id, "score": score} for entry_id, score in ranking.entries
        ],
    }


def recommendations_to_obj(recommendations: list[NodeRecommendation]) -> list[dict]:
    """Plain-object form of per-node recommendations, in the given order."""
    return [
        {
            "node_id": recommendation.node_id,
            "selected": recommendation.selected,
            "ranking": ranking_to_obj(recommendation.ranking),
        }
        for recommendation in recommendations
    ]


@dataclass(frozen=True)
class DefenseNode:
    """The selected countermeasure attached beneath one attack node."""

    id: str
    countermeasure_id: str
    name: str
    score: float


@dataclass(frozen=True)
class AdAttackNode:
    """One attack node in the tree; the root has ``parent_id`` None."""

    id: str
    name: str
    technique_id: str
    stage_index: int
    stage_name: str
    parent_id: str | None
    defense: DefenseNode


@dataclass(frozen=True)
class ADTree:
    """Attack-defense tree: attack nodes in root-to-leaf order."""

    root_id: str
    nodes: tuple[AdAttackNode, ...]


def build_adtree(
    graph: AttackGraph, recommendations: Sequence[NodeRecommendation], catalog: Catalog
) -> ADTree:
    """Assemble the attack-defense tree for a recommended graph.

    The root is the attack goal: the node with the highest kill-chain
    stage, which the deterministic topological order places last.  Attack
    nodes chain along that order; each carries exactly one defense child
    for its selected countermeasure.
    """
    by_node = {r.node_id: r for r in recommendations}
    missing = [n.id for n in graph.nodes if n.id not in by_node]
    if missing:
        raise InvariantError(
            f"no recommendation for node {missing[0]!r}", element=missing[0]
        )
    order = topological_order(graph)
    node_ids = set(order)
    tree_nodes = []
    parent = None
    for node_id in reversed(order):
        node = graph.node(node_id)
        recommendation = by_node[node_id]
        selected = recommendation.selected
        score = dict(recommendation.ranking.entries)[selected]
        defense_id = node_id + DEFENSE_SUFFIX
        if defense_id in node_ids:
            raise InvariantError(
                f"defense id {defense_id!r} collides with an attack node id",
                element=defense_id,
            )
        tree_nodes.append(
            AdAttackNode(
                id=node.id,
                name=node.name,
                technique_id=node.technique_id,
                stage_index=node.kill_chain_stage.index,
                stage_name=node.kill_chain_stage.name,
                parent_id=parent,
                defense=DefenseNode(
                    id=defense_id,
                    countermeasure_id=selected,
                    name=catalog.countermeasures[selected].name,
                    score=score,
                ),
            )
        )
        parent = node_id
    return ADTree(root_id=order[-1], nodes=tuple(tree_nodes))


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _html_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def export_dot(tree: ADTree) -> str:
    """Deterministic DOT text for the tree.

    Attack nodes are boxes labeled with step name, attack action and
    kill-chain stage; defense nodes are ellipses with the countermeasure
    name in bold.
    """
    lines = [
        "digraph adtree {",
        "  rankdir=TB;",
        '  node [fontname="Helvetica", fontsize=10];',
    ]
    path = list(reversed(tree.nodes))  # leaf-to-root becomes progression order
    for node in path:
        label = "\\n".join(
            _dot_escape(part)
            for part in (
                node.name,
                node.technique_id,
                f"stage {node.stage_index}: {node.stage_name}",
            )
        )
        lines.append(f'  "{_dot_escape(node.id)}" [shape=box, label="{label}"];')
    for node in path:
        lines.append(
            f'  "{_dot_escape(node.defense.id)}" [shape=ellipse, '
            f"label=<<B>{_html_escape(node.defense.name)}</B>>];"
        )
    for earlier, later in zip(path, path[1:]):
        lines.append(f'  "{_dot_escape(earlier.id)}" -> "{_dot_escape(later.id)}";')
    for node in path:
        lines.append(
            f'  "{_dot_escape(node.id)}" -> "{_dot_escape(node.defense.id)}" [style=dashed];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def adtree_to_obj(tree: ADTree) -> dict:
    nodes = []
    for node in tree.nodes:
        nodes.append(
            {
                "id": node.id,
                "kind": "attack",
                "name": node.name,
                "technique_id": node.technique_id,
                "kill_chain_stage": node.stage_index,
                "stage_name": node.stage_name,
                "parent": node.parent_id,
                "defense": node.defense.id,
            }
        )
        nodes.append(
            {
                "id": node.defense.id,
                "kind": "defense",
                "name": node.defense.name,
                "countermeasure_id": node.defense.countermeasure_id,
                "score": node.defense.score,
                "parent": node.id,
            }
        )
    return {"root": tree.root_id, "nodes": nodes}


def export_adtree_document(tree: ADTree) -> str:
    """JSON document for the tree; ``parse_adtree_document`` inverts it exactly."""
    return json.dumps(adtree_to_obj(tree), indent=2) + "\n"


_ATTACK_FIELDS = (
    "id",
    "kind",
    "name",
    "technique_id",
    "kill_chain_stage",
    "stage_name",
    "parent",
    "defense",
)
_DEFENSE_FIELDS = ("id", "kind", "name", "countermeasure_id", "score", "parent")


def adtree_from_obj(obj: Any) -> ADTree:
    if not isinstance(obj, dict):
        raise DocumentSyntaxError("adtree document must be an object")
    for key in ("root", "nodes"):
        if key not in obj:
            raise DocumentSyntaxError(f"adtree document: missing field {key!r}")
    unknown = [k for k in obj if k not in ("root", "nodes")]
    if unknown:
        raise DocumentSyntaxError(f"adtree document: unknown field {unknown[0]!r}")
    if not isinstance(obj["nodes"], list):
        raise DocumentSyntaxError("adtree field 'nodes' must be an array")

    attacks: dict[str, dict] = {}
    defenses: dict[str, dict] = {}
    for raw in obj["nodes"]:
        if not isinstance(raw, dict) or "kind" not in raw:
            raise DocumentSyntaxError("adtree nodes must be objects with a 'kind'")
        where = f"adtree node {raw.get('id', '?')!r}"
        if raw["kind"] == "attack":
            fields = _ATTACK_FIELDS
            target = attacks
        elif raw["kind"] == "defense":
            fields = _DEFENSE_FIELDS
            target = defenses
        else:
            raise DocumentSyntaxError(f"{where}: unknown kind {raw['kind']!r}")
        missing = [k for k in fields if k not in raw]
        if missing:
            raise DocumentSyntaxError(f"{where}: missing field {missing[0]!r}")
        unknown = [k for k in raw if k not in fields]
        if unknown:
            raise DocumentSyntaxError(f"{where}: unknown field {unknown[0]!r}")
        target[raw["id"]] = raw

    ordered: list[AdAttackNode] = []
    current: str | None = obj["root"]
    seen = set()
    while current is not None:
        if current not in attacks:
            raise DocumentSyntaxError(f"adtree attack node {current!r} missing")
        if current in seen:
            raise InvariantError(f"adtree path revisits node {current!r}", element=current)
        seen.add(current)
        raw = attacks[current]
        defense_raw = defenses.get(raw["defense"])
        if defense_raw is None or defense_raw["parent"] != current:
            raise DocumentSyntaxError(
                f"adtree attack node {current!r} lacks its defense child"
            )
        ordered.append(
            AdAttackNode(
                id=raw["id"],
                name=raw["name"],
                technique_id=raw["technique_id"],
                stage_index=raw["kill_chain_stage"],
                stage_name=raw["stage_name"],
                parent_id=raw["parent"],
                defense=DefenseNode(
                    id=defense_raw["id"],
                    countermeasure_id=defense_raw["countermeasure_id"],
                    name=defense_raw["name"],
                    score=float(defense_raw["score"]),
                ),
            )
        )
        # walk downward: the child is the attack node whose parent is current
        children = [a["id"] for a in attacks.values() if a["parent"] == current]
        if len(children) > 1:
            raise InvariantError(
                f"adtree attack node {current!r} has {len(children)} attack children",
                element=current,
            )
        current = children[0] if children else None
    if len(ordered) != len(attacks):
        raise InvariantError("adtree contains attack nodes outside the root path")
    if len(defenses) != len(attacks):
        raise InvariantError("adtree must hold exactly one defense node per attack node")
    return ADTree(root_id=obj["root"], nodes=tuple(ordered))


def parse_adtree_document(text: str) -> ADTree:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON: {exc}") from exc
    return adtree_from_obj(obj)
