/** Shared test utilities: canned JSON responses, controllable fetch
 * mocks for supersession tests, and a tiny seeded PRNG for fuzzing.
 */

import type { FetchLike } from "../src/client.js";

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (reason?: unknown) => void;
}

export function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (reason?: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

export type RouteHandler = (
  request: RecordedRequest,
  call: number,
) => Response | Promise<Response>;

/** Fetch mock routing by URL path; records every request it serves. */
export function mockFetch(routes: Record<string, RouteHandler>): {
  fetch: FetchLike;
  requests: RecordedRequest[];
} {
  const requests: RecordedRequest[] = [];
  const calls = new Map<string, number>();
  const fetchImpl: FetchLike = (url, init) => {
    const handler = routes[url];
    if (handler === undefined) {
      throw new Error(`unrouted request: ${url}`);
    }
    const request: RecordedRequest = {
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : null,
    };
    requests.push(request);
    const call = calls.get(url) ?? 0;
    calls.set(url, call + 1);
    return Promise.resolve(handler(request, call));
  };
  return { fetch: fetchImpl, requests };
}

/** mulberry32: small deterministic PRNG for fuzz-style tests. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
