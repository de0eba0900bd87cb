"""Countermeasure catalog: techniques, mitigations and decision criteria.

The catalog maps technique ids to candidate countermeasures and scores every
countermeasure on six fixed criteria.  Criterion directions live in the
catalog document itself; the three effort criteria (cost to implement, time
to implement, duration of activation) are always cost-directed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import (
    DocumentSyntaxError,
    InvariantError,
    MissingCriterionError,
    UnknownReferenceError,
    UnknownTechniqueError,
    ValueRangeError,
)


class Criterion(str, Enum):
    """The six decision criteria, in fixed order."""

    COST_TO_IMPLEMENT = "cost_to_implement"
    TIME_TO_IMPLEMENT = "time_to_implement"
    SETUP_LOCALITY = "setup_locality"
    DURATION_OF_ACTIVATION = "duration_of_activation"
    AREA_OF_IMPACT = "area_of_impact"
    TECHNICAL_IMPACT = "technical_impact"


CRITERIA: tuple[Criterion, ...] = tuple(Criterion)

# these three measure effort and must always be cost-directed
COST_CRITERIA = frozenset(
    {
        Criterion.COST_TO_IMPLEMENT,
        Criterion.TIME_TO_IMPLEMENT,
        Criterion.DURATION_OF_ACTIVATION,
    }
)


def criterion_from_id(value: str) -> Criterion:
    """Look up a criterion by its id, naming the valid ids on failure."""
    try:
        return Criterion(value)
    except ValueError:
        known = ", ".join(c.value for c in CRITERIA)
        raise UnknownReferenceError(
            f"unknown criterion {value!r}; valid criteria: {known}", element=value
        ) from None


class Direction(str, Enum):
    BENEFIT = "benefit"
    COST = "cost"


@dataclass(frozen=True)
class CriterionSpec:
    """Direction and scale documentation for one criterion."""

    id: Criterion
    direction: Direction
    scale_note: str

    def __post_init__(self):
        if self.id in COST_CRITERIA and self.direction is not Direction.COST:
            raise InvariantError(
                f"criterion {self.id.value} must be cost-directed", element=self.id.value
            )


@dataclass(frozen=True)
class CountermeasureRecord:
    """One countermeasure with a value in [0, 1] for every criterion."""

    id: str
    name: str
    criteria: dict[Criterion, float]
    notes: str = ""

    def __post_init__(self):
        for criterion in CRITERIA:
            if criterion not in self.criteria:
                raise MissingCriterionError(
                    f"countermeasure {self.id}: missing criterion {criterion.value}",
                    element=self.id,
                )
        for criterion, value in self.criteria.items():
            if not 0.0 <= value <= 1.0:
                raise ValueRangeError(
                    f"countermeasure {self.id}: {criterion.value}={value} outside [0, 1]",
                    element=self.id,
                )


@dataclass(frozen=True)
class TechniqueRecord:
    """One attack technique with its non-empty list of mitigating countermeasures."""

    id: str
    name: str
    tactic: str
    mitigations: tuple[str, ...]
    notes: str = ""

    def __post_init__(self):
        if not self.mitigations:
            raise InvariantError(
                f"technique {self.id} has no mitigations", element=self.id
            )


@dataclass(frozen=True)
class Catalog:
    """Immutable catalog: criterion specs, countermeasures and techniques."""

    criterion_specs: dict[Criterion, CriterionSpec]
    countermeasures: dict[str, CountermeasureRecord]
    techniques: dict[str, TechniqueRecord]
    notes: str = ""

    def __post_init__(self):
        if set(self.criterion_specs) != set(CRITERIA):
            raise InvariantError("catalog must define exactly the six criteria")
        for technique in self.techniques.values():
            for mitigation_id in technique.mitigations:
                if mitigation_id not in self.countermeasures:
                    raise UnknownReferenceError(
                        f"technique {technique.id}: unknown mitigation {mitigation_id!r}",
                        element=mitigation_id,
                    )

    def mitigations_for(self, technique_id: str) -> list[CountermeasureRecord]:
        """Candidate countermeasures for a technique, in catalog order."""
        if technique_id not in self.techniques:
            raise UnknownTechniqueError(
                f"technique {technique_id!r} not in catalog", element=technique_id
            )
        technique = self.techniques[technique_id]
        return [self.countermeasures[mid] for mid in technique.mitigations]


def _expect(condition: bool, message: str, element: str | None = None):
    if not condition:
        raise DocumentSyntaxError(message, element=element)


def catalog_from_obj(obj: Any) -> Catalog:
    """Build a validated Catalog from an already-decoded document object."""
    _expect(isinstance(obj, dict), "catalog document must be an object")
    required = ("criteria", "countermeasures", "techniques")
    for key in required:
        _expect(key in obj, f"catalog document: missing field {key!r}")
    unknown = [k for k in obj if k not in required and k != "notes"]
    _expect(not unknown, f"catalog document: unknown field {unknown[0]!r}" if unknown else "")
    for key in required:
        _expect(isinstance(obj[key], list), f"catalog field {key!r} must be an array")

    specs: dict[Criterion, CriterionSpec] = {}
    for raw in obj["criteria"]:
        _expect(isinstance(raw, dict), "criterion entries must be objects")
        for key in ("id", "direction", "scale_note"):
            _expect(key in raw, f"criterion entry: missing field {key!r}")
        unknown = [k for k in raw if k not in ("id", "direction", "scale_note")]
        _expect(not unknown, f"criterion entry: unknown field {unknown[0]!r}" if unknown else "")
        try:
            criterion = Criterion(raw["id"])
        except ValueError:
            raise UnknownReferenceError(
                f"unknown criterion id {raw['id']!r}", element=str(raw["id"])
            ) from None
        try:
            direction = Direction(raw["direction"])
        except ValueError:
            raise DocumentSyntaxError(
                f"criterion {criterion.value}: direction must be 'benefit' or 'cost'",
                element=criterion.value,
            ) from None
        if criterion in specs:
            raise InvariantError(f"duplicate criterion {criterion.value}", element=criterion.value)
        _expect(isinstance(raw["scale_note"], str), f"criterion {criterion.value}: scale_note must be a string")
        specs[criterion] = CriterionSpec(criterion, direction, raw["scale_note"])

    countermeasures: dict[str, CountermeasureRecord] = {}
    for raw in obj["countermeasures"]:
        _expect(isinstance(raw, dict), "countermeasure entries must be objects")
        for key in ("id", "name", "criteria"):
            _expect(key in raw, f"countermeasure entry: missing field {key!r}")
        unknown = [k for k in raw if k not in ("id", "name", "criteria", "notes")]
        _expect(not unknown, f"countermeasure entry: unknown field {unknown[0]!r}" if unknown else "")
        cid = raw["id"]
        _expect(isinstance(cid, str) and cid != "", "countermeasure id must be a non-empty string")
        if cid in countermeasures:
            raise InvariantError(f"duplicate countermeasure id {cid!r}", element=cid)
        _expect(isinstance(raw["criteria"], dict), f"countermeasure {cid}: criteria must be an object", cid)
        values: dict[Criterion, float] = {}
        for key, value in raw["criteria"].items():
            try:
                criterion = Criterion(key)
            except ValueError:
                raise UnknownReferenceError(
                    f"countermeasure {cid}: unknown criterion {key!r}", element=cid
                ) from None
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DocumentSyntaxError(
                    f"countermeasure {cid}: {key} must be a number", element=cid
                )
            values[criterion] = float(value)
        countermeasures[cid] = CountermeasureRecord(
            id=cid,
            name=str(raw["name"]),
            criteria=values,
            notes=str(raw.get("notes", "")),
        )

    techniques: dict[str, TechniqueRecord] = {}
    for raw in obj["techniques"]:
        _expect(isinstance(raw, dict), "technique entries must be objects")
        for key in ("id", "name", "tactic", "mitigations"):
            _expect(key in raw, f"technique entry: missing field {key!r}")
        unknown = [k for k in raw if k not in ("id", "name", "tactic", "mitigations", "notes")]
        _expect(not unknown, f"technique entry: unknown field {unknown[0]!r}" if unknown else "")
        tid = raw["id"]
        _expect(isinstance(tid, str) and tid != "", "technique id must be a non-empty string")
        if tid in techniques:
            raise InvariantError(f"duplicate technique id {tid!r}", element=tid)
        _expect(isinstance(raw["mitigations"], list), f"technique {tid}: mitigations must be an array", tid)
        for mid in raw["mitigations"]:
            _expect(isinstance(mid, str), f"technique {tid}: mitigation ids must be strings", tid)
        techniques[tid] = TechniqueRecord(
            id=tid,
            name=str(raw["name"]),
            tactic=str(raw["tactic"]),
            mitigations=tuple(raw["mitigations"]),
            notes=str(raw.get("notes", "")),
        )

    return Catalog(
        criterion_specs=specs,
        countermeasures=countermeasures,
        techniques=techniques,
        notes=str(obj.get("notes", "")),
    )


def load_catalog(text: str) -> Catalog:
    """Parse and validate a catalog JSON document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON: {exc}") from exc
    return catalog_from_obj(obj)


def catalog_to_obj(catalog: Catalog) -> dict:
    obj: dict = {}
    if catalog.notes:
        obj["notes"] = catalog.notes
    obj["criteria"] = [
        {
            "id": spec.id.value,
            "direction": spec.direction.value,
            "scale_note": spec.scale_note,
        }
        for spec in (catalog.criterion_specs[c] for c in CRITERIA)
    ]
    obj["countermeasures"] = []
    for record in catalog.countermeasures.values():
        entry: dict = {
            "id": record.id,
            "name": record.name,
            "criteria": {c.value: record.criteria[c] for c in CRITERIA},
        }
        if record.notes:
            entry["notes"] = record.notes
        obj["countermeasures"].append(entry)
    obj["techniques"] = []
    for technique in catalog.techniques.values():
        entry = {
            "id": technique.id,
            "name": technique.name,
            "tactic": technique.tactic,
            "mitigations": list(technique.mitigations),
        }
        if technique.notes:
            entry["notes"] = technique.notes
        obj["techniques"].append(entry)
    return obj


def serialize_catalog(catalog: Catalog) -> str:
    """Canonical JSON text for a catalog; ``load_catalog`` inverts it."""
    return json.dumps(catalog_to_obj(catalog), indent=2) + "\n"


def load_default_catalog() -> Catalog:
    """Load the countermeasure catalog packaged with the distribution."""
    from .fixtures import fixture_text

    return load_catalog(fixture_text("catalog.json"))
