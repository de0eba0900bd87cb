/** Types mirroring the decision-support service's HTTP API.
 *
 * The console renders these payloads verbatim: every id, score, and
 * ordering shown in the UI comes straight from a response body. The
 * shapes are validated at runtime by decode.ts before use.
 */

export type Strategy = "saw" | "ivpf-choquet";

export const ENDPOINTS = {
  analyze: "/api/analyze",
  sensitivity: "/api/sensitivity",
  catalog: "/api/catalog",
  health: "/api/health",
} as const;

export interface StrategyOptions {
  delta?: number;
  kappa?: number;
}

export interface AnalyzeRequest {
  attack_graph: unknown;
  weights: Record<string, number>;
  strategy: Strategy;
  options?: StrategyOptions;
}

export interface SensitivityRequest {
  attack_graph: unknown;
  focus: string;
  runs: number;
  seed: number;
  strategy: Strategy;
  options?: StrategyOptions;
}

export interface RankingEntry {
  id: string;
  score: number;
}

export interface Ranking {
  strategy: string;
  entries: RankingEntry[];
}

export interface NodeRecommendation {
  node_id: string;
  selected: string;
  ranking: Ranking;
}

export interface AdtreeAttackNode {
  id: string;
  kind: "attack";
  name: string;
  technique_id: string;
  kill_chain_stage: number;
  stage_name: string;
  parent: string | null;
  defense: string;
}

export interface AdtreeDefenseNode {
  id: string;
  kind: "defense";
  name: string;
  countermeasure_id: string;
  score: number;
  parent: string;
}

export type AdtreeNode = AdtreeAttackNode | AdtreeDefenseNode;

export interface AdtreeDocument {
  root: string;
  nodes: AdtreeNode[];
}

export interface AnalyzeResponse {
  recommendations: NodeRecommendation[];
  adtree: AdtreeDocument;
  dot: string;
}

export interface SweepPoint {
  scenario: number;
  w_focus: number;
  weight_vector: Record<string, number>;
  score_sum: number;
  selection_fingerprint: string;
  alt_score_sum?: number;
}

export interface SweepResponse {
  focus: string;
  runs: number;
  seed: number;
  strategy: string;
  slope: number | null;
  stability_threshold: number | null;
  points: SweepPoint[];
}

export interface CriterionSpec {
  id: string;
  direction: "cost" | "benefit";
  scale_note: string;
}

export interface CountermeasureEntry {
  id: string;
  name: string;
  criteria: Record<string, number>;
  notes?: string;
}

export interface TechniqueEntry {
  id: string;
  name: string;
  tactic: string;
  mitigations: string[];
  notes?: string;
}

export interface CatalogResponse {
  notes?: string;
  criteria: CriterionSpec[];
  countermeasures: CountermeasureEntry[];
  techniques: TechniqueEntry[];
}

export interface ApiErrorBody {
  error: string;
  detail: string;
  element?: string;
}
