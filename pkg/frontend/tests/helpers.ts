/** Test support: fixture-backed fetch + deferred promises for race tests. */

import type { FetchLike } from "../src/api.js";

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export type RouteHandler = unknown | ((url: URL) => unknown);

/**
 * Serve frozen fixtures by pathname.  Handlers may be raw payloads,
 * functions of the parsed URL, or ready Response objects; every request
 * URL is appended to `log` when given.
 */
export function fixtureFetch(routes: Record<string, RouteHandler>, log?: string[]): FetchLike {
  return async (rawUrl: string) => {
    const url = new URL(rawUrl, "http://service.test");
    log?.push(url.pathname + url.search);
    const handler = routes[url.pathname];
    if (handler === undefined) {
      return jsonResponse({ detail: { reason: `no fixture for ${url.pathname}` } }, 404);
    }
    const value = typeof handler === "function" ? (handler as (u: URL) => unknown)(url) : handler;
    if (value instanceof Response) {
      return value;
    }
    return jsonResponse(value);
  };
}

export interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
}

export function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((res) => {
    resolve = res;
  });
  return { promise, resolve };
}

export function flushMicrotasks(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
