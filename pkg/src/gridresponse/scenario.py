"""Replayable intrusion scenarios for exercising the decision pipeline.

A scenario is a linear sequence of attack steps against named hosts, packaged
as fixture data.  From one scenario description this module derives both
sides of a simulation:

* the *template* attack graph a defender would hold ahead of time
  (:meth:`Scenario.template`), and
* a stream of indicator events replaying the intrusion, optionally diluted
  with background noise (:meth:`Scenario.emit_events`).

Chain edge ``i -> i+1`` carries the host properties of step ``i + 1`` —
the connection that performs that step — so a replayed event stream matches
the template edge for edge.  Noise pools use techniques and hosts that are
disjoint from every shipped template, so noise can never correlate.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DocumentSyntaxError, ValueRangeError
from .evidence import IocEvent
from .fixtures import fixture_text
from .model import (
    LOCKHEED_MARTIN,
    AttackEdge,
    AttackGraph,
    AttackNode,
    KillChain,
    MassFunction,
    _check_keys,
    _expect_object,
    _number,
    _props,
    _string,
)


def _text(value: object, where: str) -> str:
    if not isinstance(value, str):
        raise DocumentSyntaxError(f"{where} must be a string", element=where)
    return value

CONFIDENCE_RANGE = (0.7, 0.95)
NOISE_CONFIDENCE_RANGE = (0.3, 0.6)


@dataclass(frozen=True)
class ScenarioStep:
    """One attack action: who does what to whom, and what it leaves behind."""

    index: int
    kill_chain_stage: int
    action: str
    origin: str
    target: str
    technique_id: str
    indicator: str


@dataclass(frozen=True)
class NoisePool:
    """Benign background activity to dilute replayed event streams with."""

    techniques: tuple[str, ...]
    flows: tuple[tuple[str, str], ...]
    indicators: tuple[str, ...]


@dataclass(frozen=True)
class Scenario:
    """A named intrusion storyline over a fixed set of hosts."""

    id: str
    hosts: Mapping[str, Mapping[str, str]]
    steps: tuple[ScenarioStep, ...]
    edge_masses: tuple[MassFunction, ...]
    noise: NoisePool
    notes: str = ""

    def __post_init__(self) -> None:
        if len(self.steps) < 2:
            raise ValueRangeError(
                f"scenario {self.id!r} needs at least two steps",
                element=self.id,
            )
        for position, step in enumerate(self.steps, start=1):
            if step.index != position:
                raise ValueRangeError(
                    f"scenario {self.id!r} steps must be numbered contiguously "
                    f"from 1; found index {step.index} at position {position}",
                    element=self.id,
                )
            for host in (step.origin, step.target):
                if host not in self.hosts:
                    raise ValueRangeError(
                        f"scenario {self.id!r} step {step.index} references "
                        f"unknown host {host!r}",
                        element=self.id,
                    )
        if len(self.edge_masses) != len(self.steps) - 1:
            raise ValueRangeError(
                f"scenario {self.id!r} needs exactly "
                f"{len(self.steps) - 1} edge masses, "
                f"found {len(self.edge_masses)}",
                element=self.id,
            )

    def step(self, index: int) -> ScenarioStep:
        """Return the step with the given 1-based index."""
        if not 1 <= index <= len(self.steps):
            raise ValueRangeError(
                f"scenario {self.id!r} has no step {index}",
                element=self.id,
            )
        return self.steps[index - 1]

    def _host_props(self, host: str) -> dict[str, str]:
        return {"host": host, **self.hosts[host]}

    def template(self, kill_chain: KillChain = LOCKHEED_MARTIN) -> AttackGraph:
        """Build the template attack graph implied by the storyline.

        Nodes are the steps in order (``s01`` onwards); each chain edge
        carries the reference mass and the host endpoints of the step it
        leads into.
        """
        nodes = tuple(
            AttackNode(
                id=f"s{step.index:02d}",
                name=step.action,
                technique_id=step.technique_id,
                kill_chain_stage=kill_chain.stage(step.kill_chain_stage),
            )
            for step in self.steps
        )
        edges = tuple(
            AttackEdge(
                from_id=f"s{step.index - 1:02d}",
                to_id=f"s{step.index:02d}",
                mass=mass,
                origin_props=self._host_props(step.origin),
                target_props=self._host_props(step.target),
            )
            for step, mass in zip(self.steps[1:], self.edge_masses)
        )
        return AttackGraph(id=f"{self.id}-template", nodes=nodes, edges=edges)

    def emit_events(self, *, seed: int = 0, noise_rate: float = 0.0) -> list[IocEvent]:
        """Replay the storyline as a deterministic indicator stream.

        Each step yields one event whose hosts and technique mirror the step.
        After each step event, with probability ``noise_rate``, one benign
        event is drawn from the noise pool.  Timestamps are sequential
        integers; the same seed always yields the same stream byte for byte.
        """
        if not 0.0 <= noise_rate <= 1.0:
            raise ValueRangeError(
                f"noise_rate must lie in [0, 1], got {noise_rate}",
                element=self.id,
            )
        rng = random.Random(seed)
        events: list[IocEvent] = []
        timestamp = 0
        for step in self.steps:
            events.append(
                IocEvent(
                    timestamp=timestamp,
                    technique_id=step.technique_id,
                    origin=step.origin,
                    target=step.target,
                    indicator=step.indicator,
                    confidence=rng.uniform(*CONFIDENCE_RANGE),
                )
            )
            timestamp += 1
            if noise_rate > 0.0 and rng.random() < noise_rate:
                origin, target = rng.choice(self.noise.flows)
                events.append(
                    IocEvent(
                        timestamp=timestamp,
                        technique_id=rng.choice(self.noise.techniques),
                        origin=origin,
                        target=target,
                        indicator=rng.choice(self.noise.indicators),
                        confidence=rng.uniform(*NOISE_CONFIDENCE_RANGE),
                    )
                )
                timestamp += 1
        return events


def _mass_from_obj(obj: object, where: str) -> MassFunction:
    mapping = _expect_object(obj, where)
    _check_keys(mapping, {"malicious", "benign", "uncertain"}, where)
    return MassFunction(
        malicious=_number(mapping["malicious"], f"{where}.malicious"),
        benign=_number(mapping["benign"], f"{where}.benign"),
        uncertain=_number(mapping["uncertain"], f"{where}.uncertain"),
    )


def _step_from_obj(obj: object, where: str) -> ScenarioStep:
    mapping = _expect_object(obj, where)
    _check_keys(
        mapping,
        {"index", "stage", "action", "origin", "target", "technique_id", "indicator"},
        where,
    )
    index = mapping["index"]
    stage = mapping["stage"]
    for label, value in (("index", index), ("stage", stage)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise DocumentSyntaxError(
                f"{where}: field {label!r} must be an integer", element=where
            )
    return ScenarioStep(
        index=index,
        kill_chain_stage=stage,
        action=_string(mapping, "action", where),
        origin=_string(mapping, "origin", where),
        target=_string(mapping, "target", where),
        technique_id=_string(mapping, "technique_id", where),
        indicator=_string(mapping, "indicator", where),
    )


def _noise_from_obj(obj: object, where: str) -> NoisePool:
    mapping = _expect_object(obj, where)
    _check_keys(mapping, {"techniques", "flows", "indicators"}, where)
    for label in ("techniques", "flows", "indicators"):
        if not isinstance(mapping[label], list) or not mapping[label]:
            raise DocumentSyntaxError(
                f"{where}.{label} must be a non-empty array", element=where
            )
    flows: list[tuple[str, str]] = []
    for position, flow in enumerate(mapping["flows"]):
        if not isinstance(flow, list) or len(flow) != 2:
            raise DocumentSyntaxError(
                f"{where}.flows[{position}] must be an [origin, target] pair",
                element=where,
            )
        flows.append(
            (
                _text(flow[0], f"{where}.flows[{position}][0]"),
                _text(flow[1], f"{where}.flows[{position}][1]"),
            )
        )
    return NoisePool(
        techniques=tuple(
            _text(item, f"{where}.techniques[{position}]")
            for position, item in enumerate(mapping["techniques"])
        ),
        flows=tuple(flows),
        indicators=tuple(
            _text(item, f"{where}.indicators[{position}]")
            for position, item in enumerate(mapping["indicators"])
        ),
    )


def scenario_from_obj(obj: object) -> Scenario:
    """Build a :class:`Scenario` from a parsed scenario document."""
    mapping = _expect_object(obj, "scenario")
    _check_keys(
        mapping,
        {"id", "hosts", "steps", "edge_masses", "noise"},
        "scenario",
        optional={"notes"},
    )
    scenario_id = _string(mapping, "id", "scenario")
    hosts_obj = _expect_object(mapping["hosts"], "scenario.hosts")
    hosts = {host: _props(hosts_obj, host, "scenario.hosts") for host in hosts_obj}
    if not isinstance(mapping["steps"], list):
        raise DocumentSyntaxError("scenario.steps must be an array", element=scenario_id)
    steps = tuple(
        _step_from_obj(item, f"scenario.steps[{position}]")
        for position, item in enumerate(mapping["steps"])
    )
    if not isinstance(mapping["edge_masses"], list):
        raise DocumentSyntaxError(
            "scenario.edge_masses must be an array", element=scenario_id
        )
    edge_masses = tuple(
        _mass_from_obj(item, f"scenario.edge_masses[{position}]")
        for position, item in enumerate(mapping["edge_masses"])
    )
    notes = _string(mapping, "notes", "scenario") if "notes" in mapping else ""
    return Scenario(
        id=scenario_id,
        hosts=hosts,
        steps=steps,
        edge_masses=edge_masses,
        noise=_noise_from_obj(mapping["noise"], "scenario.noise"),
        notes=notes,
    )


def parse_scenario(text: str) -> Scenario:
    """Parse a JSON scenario document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON: {exc}") from exc
    return scenario_from_obj(obj)


def havex_scenario() -> Scenario:
    """The packaged Havex-style espionage scenario (ten steps)."""
    return parse_scenario(fixture_text("havex_scenario.json"))


def stuxnet_scenario() -> Scenario:
    """The packaged Stuxnet-style sabotage scenario (ten steps)."""
    return parse_scenario(fixture_text("stuxnet_scenario.json"))


SCENARIO_LOADERS = {
    "havex": havex_scenario,
    "stuxnet": stuxnet_scenario,
}


def load_scenario(name: str) -> Scenario:
    """Load a packaged scenario by name."""
    try:
        loader = SCENARIO_LOADERS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIO_LOADERS))
        raise ValueRangeError(
            f"unknown scenario {name!r}; packaged scenarios: {known}",
            element=name,
        ) from None
    return loader()


def havex_template() -> AttackGraph:
    """Template attack graph for the Havex-style scenario."""
    return havex_scenario().template()


def stuxnet_template() -> AttackGraph:
    """Template attack graph for the Stuxnet-style scenario."""
    return stuxnet_scenario().template()
