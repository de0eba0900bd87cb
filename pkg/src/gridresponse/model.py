"""Attack-graph data model and its canonical JSON document format.

An attack graph is a DAG of attack actions.  Each node carries a kill-chain
stage and a technique id; each edge carries a Dempster-Shafer mass function
over {malicious, benign, uncertain} for the network connection it models,
plus origin/target host properties used for event matching.

Stage names are data, not code: ``KillChain`` instances can be built from
any ordered name list, so alternative chains can be configured.  The default
is the classic seven-stage chain shipped as ``LOCKHEED_MARTIN``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping

from .errors import (
    DocumentSyntaxError,
    InvariantError,
    UnknownReferenceError,
    ValueRangeError,
)

MASS_SUM_TOLERANCE = 1e-9

DEFAULT_STAGE_NAMES = (
    "Reconnaissance",
    "Weaponization",
    "Delivery",
    "Exploitation",
    "Installation",
    "Command & Control",
    "Actions on Objectives",
)


@dataclass(frozen=True, order=True)
class KillChainStage:
    """One stage of a kill chain, totally ordered by ``index`` (1-based)."""

    index: int
    name: str


@dataclass(frozen=True)
class KillChain:
    """An ordered, immutable sequence of kill-chain stages."""

    stages: tuple[KillChainStage, ...]

    def __post_init__(self):
        if not self.stages:
            raise InvariantError("kill chain must have at least one stage")
        names = [s.name for s in self.stages]
        if len(set(names)) != len(names):
            raise InvariantError("kill chain stage names must be unique")
        for position, stage in enumerate(self.stages, start=1):
            if stage.index != position:
                raise InvariantError(
                    f"kill chain stage {stage.name!r} has index {stage.index}, expected {position}",
                    element=stage.name,
                )

    @classmethod
    def from_names(cls, names) -> "KillChain":
        return cls(tuple(KillChainStage(i, n) for i, n in enumerate(names, start=1)))

    def __len__(self) -> int:
        return len(self.stages)

    def stage(self, index: int) -> KillChainStage:
        """Return the stage with the given 1-based index."""
        if not 1 <= index <= len(self.stages):
            raise ValueRangeError(
                f"kill-chain stage index {index} outside 1..{len(self.stages)}",
                element=str(index),
            )
        return self.stages[index - 1]


@dataclass(frozen=True)
class MassFunction:
    """Mass over the frame {malicious, benign} with uncertainty on the
    whole frame.  The three masses must each lie in [0, 1] and sum to 1
    within ``MASS_SUM_TOLERANCE``."""

    malicious: float
    benign: float
    uncertain: float

    def __post_init__(self):
        for label, value in (
            ("malicious", self.malicious),
            ("benign", self.benign),
            ("uncertain", self.uncertain),
        ):
            if not 0.0 <= value <= 1.0:
                raise InvariantError(f"mass {label}={value} outside [0, 1]", element=label)
        total = self.malicious + self.benign + self.uncertain
        if abs(total - 1.0) > MASS_SUM_TOLERANCE:
            raise InvariantError(f"mass values sum to {total}, expected 1")


@dataclass(frozen=True)
class AttackNode:
    """One attack action: a technique executed at some kill-chain stage."""

    id: str
    name: str
    technique_id: str
    kill_chain_stage: KillChainStage

    def __post_init__(self):
        if not self.id:
            raise InvariantError("attack node id must be non-empty")
        if not self.technique_id:
            raise InvariantError(f"node {self.id}: technique_id must be non-empty", element=self.id)


@dataclass(frozen=True)
class AttackEdge:
    """Directed connection between two attack actions.

    ``from_id``/``to_id`` reference node ids; ``origin_props``/``target_props``
    describe the hosts of the underlying network connection (the ``host`` key
    is what event correlation matches on).
    """

    from_id: str
    to_id: str
    mass: MassFunction
    origin_props: Mapping[str, str]
    target_props: Mapping[str, str]

    def __post_init__(self):
        if self.from_id == self.to_id:
            raise InvariantError(f"edge {self.key()}: self-loops are not allowed", element=self.key())

    def key(self) -> str:
        return f"{self.from_id}->{self.to_id}"


@dataclass(frozen=True)
class AttackGraph:
    """A validated attack graph: a DAG whose kill-chain stages never regress
    along an edge."""

    id: str
    nodes: tuple[AttackNode, ...]
    edges: tuple[AttackEdge, ...]

    def __post_init__(self):
        seen = set()
        for node in self.nodes:
            if node.id in seen:
                raise InvariantError(f"duplicate node id {node.id!r}", element=node.id)
            seen.add(node.id)
        for edge in self.edges:
            for endpoint in (edge.from_id, edge.to_id):
                if endpoint not in seen:
                    raise UnknownReferenceError(
                        f"edge {edge.key()} references unknown node {endpoint!r}",
                        element=edge.key(),
                    )
        by_id = {n.id: n for n in self.nodes}
        for edge in self.edges:
            if by_id[edge.from_id].kill_chain_stage.index > by_id[edge.to_id].kill_chain_stage.index:
                raise InvariantError(
                    f"edge {edge.key()}: kill-chain stage regresses "
                    f"({by_id[edge.from_id].kill_chain_stage.index} -> "
                    f"{by_id[edge.to_id].kill_chain_stage.index})",
                    element=edge.key(),
                )
        # rejects cycles; result is discarded here
        _kahn_order(self.nodes, self.edges)

    @cached_property
    def _nodes_by_id(self) -> dict[str, AttackNode]:
        return {n.id: n for n in self.nodes}

    def node(self, node_id: str) -> AttackNode:
        try:
            return self._nodes_by_id[node_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown node id {node_id!r}", element=node_id) from None


LOCKHEED_MARTIN = KillChain.from_names(DEFAULT_STAGE_NAMES)


def _kahn_order(nodes, edges) -> list[str]:
    indegree = {n.id: 0 for n in nodes}
    successors: dict[str, list[str]] = {n.id: [] for n in nodes}
    for edge in edges:
        indegree[edge.to_id] += 1
        successors[edge.from_id].append(edge.to_id)
    stage_of = {n.id: n.kill_chain_stage.index for n in nodes}
    # ties among available nodes break by ascending stage, then node id
    ready = [(stage_of[i], i) for i, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, node_id = heapq.heappop(ready)
        order.append(node_id)
        for succ in successors[node_id]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, (stage_of[succ], succ))
    if len(order) != len(nodes):
        stuck = sorted(set(indegree) - set(order))
        raise InvariantError(f"graph contains a cycle through {', '.join(stuck)}", element=stuck[0])
    return order


def topological_order(graph: AttackGraph) -> list[str]:
    """Deterministic topological order of node ids.

    Every edge goes from an earlier to a later position; ties among
    available nodes break by ascending kill-chain stage, then node id.
    """
    return _kahn_order(graph.nodes, graph.edges)


def _expect_object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise DocumentSyntaxError(f"{where} must be an object", element=where)
    return value


def _check_keys(obj: dict, required, where: str, optional=()):
    missing = [k for k in required if k not in obj]
    if missing:
        raise DocumentSyntaxError(f"{where}: missing field {missing[0]!r}", element=where)
    unknown = [k for k in obj if k not in required and k not in optional]
    if unknown:
        raise DocumentSyntaxError(f"{where}: unknown field {unknown[0]!r}", element=where)


def _string(obj: dict, key: str, where: str) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise DocumentSyntaxError(f"{where}: field {key!r} must be a string", element=where)
    return value


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentSyntaxError(f"{where} must be a number", element=where)
    return float(value)


def _props(obj: dict, key: str, where: str) -> dict[str, str]:
    value = _expect_object(obj[key], f"{where}.{key}")
    for k, v in value.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise DocumentSyntaxError(
                f"{where}.{key} entries must map strings to strings", element=where
            )
    return dict(value)


def attack_graph_from_obj(obj: Any, kill_chain: KillChain = LOCKHEED_MARTIN) -> AttackGraph:
    """Build a validated AttackGraph from an already-decoded document object."""
    top = _expect_object(obj, "attack graph document")
    _check_keys(top, ("id", "nodes", "edges"), "attack graph document")
    graph_id = _string(top, "id", "attack graph document")
    if not isinstance(top["nodes"], list) or not isinstance(top["edges"], list):
        raise DocumentSyntaxError("fields 'nodes' and 'edges' must be arrays", element=graph_id)

    nodes = []
    for raw in top["nodes"]:
        node_obj = _expect_object(raw, "node")
        where = f"node {node_obj.get('id', '?')!r}"
        _check_keys(node_obj, ("id", "name", "technique_id", "kill_chain_stage"), where)
        stage_index = node_obj["kill_chain_stage"]
        if isinstance(stage_index, bool) or not isinstance(stage_index, int):
            raise DocumentSyntaxError(f"{where}: kill_chain_stage must be an integer", element=node_obj.get("id"))
        if not 1 <= stage_index <= len(kill_chain):
            raise InvariantError(
                f"{where}: kill_chain_stage {stage_index} outside 1..{len(kill_chain)}",
                element=node_obj.get("id"),
            )
        nodes.append(
            AttackNode(
                id=_string(node_obj, "id", where),
                name=_string(node_obj, "name", where),
                technique_id=_string(node_obj, "technique_id", where),
                kill_chain_stage=kill_chain.stage(stage_index),
            )
        )

    edges = []
    for raw in top["edges"]:
        edge_obj = _expect_object(raw, "edge")
        where = f"edge {edge_obj.get('from', '?')}->{edge_obj.get('to', '?')}"
        _check_keys(edge_obj, ("from", "to", "mass", "origin_props", "target_props"), where)
        mass_obj = _expect_object(edge_obj["mass"], f"{where}.mass")
        _check_keys(mass_obj, ("malicious", "benign", "uncertain"), f"{where}.mass")
        values = {k: _number(v, f"{where}.mass.{k}") for k, v in mass_obj.items()}
        for label, value in values.items():
            if not 0.0 <= value <= 1.0:
                raise InvariantError(f"{where}: mass {label}={value} outside [0, 1]", element=where)
        total = values["malicious"] + values["benign"] + values["uncertain"]
        if abs(total - 1.0) > MASS_SUM_TOLERANCE:
            raise InvariantError(f"{where}: mass sums to {total}, expected 1", element=where)
        edges.append(
            AttackEdge(
                from_id=_string(edge_obj, "from", where),
                to_id=_string(edge_obj, "to", where),
                mass=MassFunction(values["malicious"], values["benign"], values["uncertain"]),
                origin_props=_props(edge_obj, "origin_props", where),
                target_props=_props(edge_obj, "target_props", where),
            )
        )

    return AttackGraph(id=graph_id, nodes=tuple(nodes), edges=tuple(edges))


def parse_attack_graph(text: str, kill_chain: KillChain = LOCKHEED_MARTIN) -> AttackGraph:
    """Parse and validate an attack-graph JSON document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON: {exc}") from exc
    return attack_graph_from_obj(obj, kill_chain)


def attack_graph_to_obj(graph: AttackGraph) -> dict:
    return {
        "id": graph.id,
        "nodes": [
            {
                "id": n.id,
                "name": n.name,
                "technique_id": n.technique_id,
                "kill_chain_stage": n.kill_chain_stage.index,
            }
            for n in graph.nodes
        ],
        "edges": [
            {
                "from": e.from_id,
                "to": e.to_id,
                "mass": {
                    "malicious": e.mass.malicious,
                    "benign": e.mass.benign,
                    "uncertain": e.mass.uncertain,
                },
                "origin_props": dict(e.origin_props),
                "target_props": dict(e.target_props),
            }
            for e in graph.edges
        ],
    }


def serialize_attack_graph(graph: AttackGraph) -> str:
    """Canonical JSON text for a graph; ``parse_attack_graph`` inverts it exactly."""
    return json.dumps(attack_graph_to_obj(graph), indent=2) + "\n"
