/** Runtime validation of API response bodies.
 *
 * Every decoder walks the raw JSON value and either returns the typed
 * shape or throws a DecodeError whose `path` points at the offending
 * field (e.g. "adtree.nodes[3].score"), so render errors can show where
 * a document went wrong instead of a blank panel. Unknown extra fields
 * are ignored: responses come from the service and may legitimately
 * grow.
 */

import type {
  AdtreeDocument,
  AdtreeNode,
  AnalyzeResponse,
  ApiErrorBody,
  CatalogResponse,
  CriterionSpec,
  NodeRecommendation,
  SweepPoint,
  SweepResponse,
} from "./api.js";

export class DecodeError extends Error {
  readonly path: string;

  constructor(path: string, expected: string) {
    super(`${path}: ${expected}`);
    this.name = "DecodeError";
    this.path = path;
  }
}

function isObject(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function obj(value: unknown, path: string): Record<string, unknown> {
  if (!isObject(value)) {
    throw new DecodeError(path, "must be an object");
  }
  return value;
}

function arr(value: unknown, path: string): unknown[] {
  if (!Array.isArray(value)) {
    throw new DecodeError(path, "must be an array");
  }
  return value;
}

function str(value: unknown, path: string): string {
  if (typeof value !== "string") {
    throw new DecodeError(path, "must be a string");
  }
  return value;
}

function num(value: unknown, path: string): number {
  if (typeof value !== "number" || Number.isNaN(value)) {
    throw new DecodeError(path, "must be a number");
  }
  return value;
}

function int(value: unknown, path: string): number {
  const n = num(value, path);
  if (!Number.isInteger(n)) {
    throw new DecodeError(path, "must be an integer");
  }
  return n;
}

function nullableNum(value: unknown, path: string): number | null {
  if (value === null) {
    return null;
  }
  return num(value, path);
}

function nullableStr(value: unknown, path: string): string | null {
  if (value === null) {
    return null;
  }
  return str(value, path);
}

function field(record: Record<string, unknown>, name: string, path: string): unknown {
  if (!(name in record)) {
    throw new DecodeError(`${path}.${name}`, "is missing");
  }
  return record[name];
}

function numberMap(value: unknown, path: string): Record<string, number> {
  const record = obj(value, path);
  const out: Record<string, number> = {};
  for (const [key, entry] of Object.entries(record)) {
    out[key] = num(entry, `${path}.${key}`);
  }
  return out;
}

function decodeAdtreeNode(value: unknown, path: string): AdtreeNode {
  const record = obj(value, path);
  const kind = str(field(record, "kind", path), `${path}.kind`);
  if (kind === "attack") {
    return {
      id: str(field(record, "id", path), `${path}.id`),
      kind,
      name: str(field(record, "name", path), `${path}.name`),
      technique_id: str(field(record, "technique_id", path), `${path}.technique_id`),
      kill_chain_stage: int(field(record, "kill_chain_stage", path), `${path}.kill_chain_stage`),
      stage_name: str(field(record, "stage_name", path), `${path}.stage_name`),
      parent: nullableStr(field(record, "parent", path), `${path}.parent`),
      defense: str(field(record, "defense", path), `${path}.defense`),
    };
  }
  if (kind === "defense") {
    return {
      id: str(field(record, "id", path), `${path}.id`),
      kind,
      name: str(field(record, "name", path), `${path}.name`),
      countermeasure_id: str(
        field(record, "countermeasure_id", path),
        `${path}.countermeasure_id`,
      ),
      score: num(field(record, "score", path), `${path}.score`),
      parent: str(field(record, "parent", path), `${path}.parent`),
    };
  }
  throw new DecodeError(`${path}.kind`, 'must be "attack" or "defense"');
}

export function decodeAdtree(value: unknown, path = "adtree"): AdtreeDocument {
  const record = obj(value, path);
  return {
    root: str(field(record, "root", path), `${path}.root`),
    nodes: arr(field(record, "nodes", path), `${path}.nodes`).map((node, i) =>
      decodeAdtreeNode(node, `${path}.nodes[${i}]`),
    ),
  };
}

function decodeRecommendation(value: unknown, path: string): NodeRecommendation {
  const record = obj(value, path);
  const ranking = obj(field(record, "ranking", path), `${path}.ranking`);
  return {
    node_id: str(field(record, "node_id", path), `${path}.node_id`),
    selected: str(field(record, "selected", path), `${path}.selected`),
    ranking: {
      strategy: str(field(ranking, "strategy", path), `${path}.ranking.strategy`),
      entries: arr(field(ranking, "entries", path), `${path}.ranking.entries`).map(
        (entry, i) => {
          const row = obj(entry, `${path}.ranking.entries[${i}]`);
          return {
            id: str(field(row, "id", path), `${path}.ranking.entries[${i}].id`),
            score: num(field(row, "score", path), `${path}.ranking.entries[${i}].score`),
          };
        },
      ),
    },
  };
}

export function decodeAnalyzeResponse(value: unknown): AnalyzeResponse {
  const record = obj(value, "response");
  return {
    recommendations: arr(
      field(record, "recommendations", "response"),
      "response.recommendations",
    ).map((entry, i) => decodeRecommendation(entry, `response.recommendations[${i}]`)),
    adtree: decodeAdtree(field(record, "adtree", "response"), "response.adtree"),
    dot: str(field(record, "dot", "response"), "response.dot"),
  };
}

function decodeSweepPoint(value: unknown, path: string): SweepPoint {
  const record = obj(value, path);
  const point: SweepPoint = {
    scenario: int(field(record, "scenario", path), `${path}.scenario`),
    w_focus: num(field(record, "w_focus", path), `${path}.w_focus`),
    weight_vector: numberMap(
      field(record, "weight_vector", path),
      `${path}.weight_vector`,
    ),
    score_sum: num(field(record, "score_sum", path), `${path}.score_sum`),
    selection_fingerprint: str(
      field(record, "selection_fingerprint", path),
      `${path}.selection_fingerprint`,
    ),
  };
  if ("alt_score_sum" in record) {
    point.alt_score_sum = num(record["alt_score_sum"], `${path}.alt_score_sum`);
  }
  return point;
}

export function decodeSweepResponse(value: unknown): SweepResponse {
  const record = obj(value, "sweep");
  return {
    focus: str(field(record, "focus", "sweep"), "sweep.focus"),
    runs: int(field(record, "runs", "sweep"), "sweep.runs"),
    seed: int(field(record, "seed", "sweep"), "sweep.seed"),
    strategy: str(field(record, "strategy", "sweep"), "sweep.strategy"),
    slope: nullableNum(field(record, "slope", "sweep"), "sweep.slope"),
    stability_threshold: nullableNum(
      field(record, "stability_threshold", "sweep"),
      "sweep.stability_threshold",
    ),
    points: arr(field(record, "points", "sweep"), "sweep.points").map((point, i) =>
      decodeSweepPoint(point, `sweep.points[${i}]`),
    ),
  };
}

function decodeCriterionSpec(value: unknown, path: string): CriterionSpec {
  const record = obj(value, path);
  const direction = str(field(record, "direction", path), `${path}.direction`);
  if (direction !== "cost" && direction !== "benefit") {
    throw new DecodeError(`${path}.direction`, 'must be "cost" or "benefit"');
  }
  return {
    id: str(field(record, "id", path), `${path}.id`),
    direction,
    scale_note: str(field(record, "scale_note", path), `${path}.scale_note`),
  };
}

export function decodeCatalogResponse(value: unknown): CatalogResponse {
  const record = obj(value, "catalog");
  const catalog: CatalogResponse = {
    criteria: arr(field(record, "criteria", "catalog"), "catalog.criteria").map(
      (spec, i) => decodeCriterionSpec(spec, `catalog.criteria[${i}]`),
    ),
    countermeasures: arr(
      field(record, "countermeasures", "catalog"),
      "catalog.countermeasures",
    ).map((entry, i) => {
      const path = `catalog.countermeasures[${i}]`;
      const row = obj(entry, path);
      return {
        id: str(field(row, "id", path), `${path}.id`),
        name: str(field(row, "name", path), `${path}.name`),
        criteria: numberMap(field(row, "criteria", path), `${path}.criteria`),
      };
    }),
    techniques: arr(field(record, "techniques", "catalog"), "catalog.techniques").map(
      (entry, i) => {
        const path = `catalog.techniques[${i}]`;
        const row = obj(entry, path);
        return {
          id: str(field(row, "id", path), `${path}.id`),
          name: str(field(row, "name", path), `${path}.name`),
          tactic: str(field(row, "tactic", path), `${path}.tactic`),
          mitigations: arr(field(row, "mitigations", path), `${path}.mitigations`).map(
            (m, j) => str(m, `${path}.mitigations[${j}]`),
          ),
        };
      },
    ),
  };
  if (typeof record["notes"] === "string") {
    catalog.notes = record["notes"];
  }
  return catalog;
}

export function decodeApiError(value: unknown): ApiErrorBody {
  const record = obj(value, "error response");
  const body: ApiErrorBody = {
    error: str(field(record, "error", "error response"), "error response.error"),
    detail: str(field(record, "detail", "error response"), "error response.detail"),
  };
  if ("element" in record) {
    body.element = str(record["element"], "error response.element");
  }
  return body;
}
