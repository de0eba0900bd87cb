/** Console state and the interactive decision loop.
 *
 * The app owns one mutable state snapshot and pushes it to a render
 * callback after every change. All ranking content in the state is
 * verbatim API payload — the console makes no ranking decisions of its
 * own. Weight changes renormalize the sliders immediately and issue one
 * analyze request each; when requests overlap, only the response to the
 * latest issued request is rendered (stale responses are discarded), so
 * a slider storm settles on exactly the final weights.
 */

import type {
  AnalyzeResponse,
  CatalogResponse,
  Strategy,
  StrategyOptions,
  SweepResponse,
} from "./api.js";
import { ApiClient, ApiRequestError, describeApiError } from "./client.js";
import { DecodeError } from "./decode.js";
import type { WeightState } from "./weights.js";
import { setWeight, toRequestWeights, uniformWeights } from "./weights.js";

export interface ConsoleState {
  catalog: CatalogResponse | null;
  weights: WeightState | null;
  strategy: Strategy;
  options: StrategyOptions;
  graph: unknown;
  lastResponse: AnalyzeResponse | null;
  sweep: SweepResponse | null;
  /** Dismissible error banner; null when nothing is wrong. */
  banner: string | null;
  /** How many analyze responses have actually been rendered. */
  analyzeRenders: number;
}

export type RenderCallback = (state: Readonly<ConsoleState>) => void;

function bannerText(error: unknown): string {
  if (error instanceof ApiRequestError) {
    return describeApiError(error);
  }
  if (error instanceof DecodeError) {
    return `invalid response from the service — ${error.message}`;
  }
  return String(error);
}

export class ConsoleApp {
  private readonly client: ApiClient;
  private readonly onRender: RenderCallback;
  private readonly state: ConsoleState;
  private analyzeSeq = 0;
  private sweepSeq = 0;

  constructor(client: ApiClient, onRender: RenderCallback) {
    this.client = client;
    this.onRender = onRender;
    this.state = {
      catalog: null,
      weights: null,
      strategy: "ivpf-choquet",
      options: {},
      graph: null,
      lastResponse: null,
      sweep: null,
      banner: null,
      analyzeRenders: 0,
    };
  }

  snapshot(): Readonly<ConsoleState> {
    return this.state;
  }

  private emit(): void {
    this.onRender(this.state);
  }

  /** Load the catalog and seed uniform weights from its criterion order. */
  async start(): Promise<void> {
    try {
      const catalog = await this.client.catalog();
      this.state.catalog = catalog;
      this.state.weights = uniformWeights(catalog.criteria.map((spec) => spec.id));
    } catch (error) {
      this.state.banner = bannerText(error);
    }
    this.emit();
  }

  /** Store an attack-graph document (opaque to the console) and rank it. */
  async loadGraph(document: unknown): Promise<void> {
    this.state.graph = document;
    this.emit();
    await this.issueAnalyze();
  }

  /** Parse pasted/uploaded JSON text; syntax errors go to the banner. */
  async loadGraphText(text: string): Promise<void> {
    let document: unknown;
    try {
      document = JSON.parse(text);
    } catch (error) {
      this.state.banner = `invalid JSON: ${error instanceof Error ? error.message : String(error)}`;
      this.emit();
      return;
    }
    await this.loadGraph(document);
  }

  /** Move one slider: renormalize immediately, then re-rank if a graph is loaded. */
  async onWeightChange(criterion: string, value: number): Promise<void> {
    if (this.state.weights === null) {
      return;
    }
    this.state.weights = setWeight(this.state.weights, criterion, value);
    this.emit();
    if (this.state.graph !== null) {
      await this.issueAnalyze();
    }
  }

  async setStrategy(strategy: Strategy): Promise<void> {
    this.state.strategy = strategy;
    this.emit();
    if (this.state.graph !== null) {
      await this.issueAnalyze();
    }
  }

  async setOptions(options: StrategyOptions): Promise<void> {
    this.state.options = options;
    this.emit();
    if (this.state.graph !== null) {
      await this.issueAnalyze();
    }
  }

  async runSweep(focus: string, runs: number, seed: number): Promise<void> {
    if (this.state.graph === null) {
      this.state.banner = "load an attack graph before running a sweep";
      this.emit();
      return;
    }
    const seq = ++this.sweepSeq;
    try {
      const sweep = await this.client.sensitivity({
        attack_graph: this.state.graph,
        focus,
        runs,
        seed,
        strategy: this.state.strategy,
        ...(this.hasOptions() ? { options: this.state.options } : {}),
      });
      if (seq !== this.sweepSeq) {
        return;
      }
      this.state.sweep = sweep;
      this.state.banner = null;
      this.emit();
    } catch (error) {
      if (seq !== this.sweepSeq) {
        return;
      }
      this.state.banner = bannerText(error);
      this.emit();
    }
  }

  dismissBanner(): void {
    this.state.banner = null;
    this.emit();
  }

  private hasOptions(): boolean {
    return this.state.options.delta !== undefined || this.state.options.kappa !== undefined;
  }

  private async issueAnalyze(): Promise<void> {
    if (this.state.graph === null || this.state.weights === null) {
      return;
    }
    const seq = ++this.analyzeSeq;
    try {
      const response = await this.client.analyze({
        attack_graph: this.state.graph,
        weights: toRequestWeights(this.state.weights),
        strategy: this.state.strategy,
        ...(this.hasOptions() ? { options: this.state.options } : {}),
      });
      if (seq !== this.analyzeSeq) {
        return; // superseded by a newer request
      }
      this.state.lastResponse = response;
      this.state.banner = null;
      this.state.analyzeRenders += 1;
      this.emit();
    } catch (error) {
      if (seq !== this.analyzeSeq) {
        return; // a newer request is in flight; its outcome wins
      }
      this.state.banner = bannerText(error);
      this.emit();
    }
  }
}
