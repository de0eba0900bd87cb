/** Typed client for the decision-support service.
 *
 * A thin wrapper over fetch: it posts JSON, decodes response bodies
 * through decode.ts, and turns the service's error envelope
 * ({error, detail, element?}) into ApiRequestError. Request supersession
 * is the app's job, not the client's.
 */

import type {
  AnalyzeRequest,
  AnalyzeResponse,
  CatalogResponse,
  SensitivityRequest,
  SweepResponse,
} from "./api.js";
import { ENDPOINTS } from "./api.js";
import {
  decodeAnalyzeResponse,
  decodeApiError,
  decodeCatalogResponse,
  decodeSweepResponse,
} from "./decode.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  readonly error: string;
  readonly detail: string;
  readonly element?: string;
  readonly status: number;

  constructor(status: number, error: string, detail: string, element?: string) {
    super(`${error}: ${detail}`);
    this.name = "ApiRequestError";
    this.status = status;
    this.error = error;
    this.detail = detail;
    if (element !== undefined) {
      this.element = element;
    }
  }
}

/** Banner text for a failed request; names the offending element when known. */
export function describeApiError(error: ApiRequestError): string {
  const where = error.element === undefined ? "" : ` (element: ${error.element})`;
  return `${error.error}: ${error.detail}${where}`;
}

async function errorFromResponse(response: Response): Promise<ApiRequestError> {
  try {
    const body = decodeApiError(await response.json());
    return new ApiRequestError(response.status, body.error, body.detail, body.element);
  } catch {
    return new ApiRequestError(
      response.status,
      "http_error",
      `request failed with status ${response.status}`,
    );
  }
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async get(path: string): Promise<unknown> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return response.json();
  }

  private async post(path: string, body: unknown): Promise<unknown> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return response.json();
  }

  async analyze(request: AnalyzeRequest): Promise<AnalyzeResponse> {
    return decodeAnalyzeResponse(await this.post(ENDPOINTS.analyze, request));
  }

  async sensitivity(request: SensitivityRequest): Promise<SweepResponse> {
    return decodeSweepResponse(await this.post(ENDPOINTS.sensitivity, request));
  }

  async catalog(): Promise<CatalogResponse> {
    return decodeCatalogResponse(await this.get(ENDPOINTS.catalog));
  }

  async health(): Promise<boolean> {
    const response = await this.fetchImpl(this.baseUrl + ENDPOINTS.health);
    return response.ok;
  }
}
