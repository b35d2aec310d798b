/**
 * Typed client for the read-only query service.
 *
 * The fetch implementation is injectable so tests can serve frozen fixture
 * responses; everything else, including error mapping, stays identical in
 * production and under test.
 */

import type {
  EdgeSeries,
  ExpectationParams,
  FlowSeries,
  Meta,
  PathsPage,
  Ranking,
  ThroughSeries,
} from "./types.js";

export type FetchLike = (url: string) => Promise<Response>;

/** Service-reported failure with the HTTP status and machine-readable reason. */
export class ApiError extends Error {
  readonly status: number;
  readonly reason: string;

  constructor(status: number, reason: string) {
    super(`service responded ${status}: ${reason}`);
    this.status = status;
    this.reason = reason;
  }
}

function queryString(params: Record<string, string | number | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) {
      search.set(key, String(value));
    }
  }
  const encoded = search.toString();
  return encoded ? `?${encoded}` : "";
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (url) => fetch(url)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async get<T>(path: string, params: Record<string, string | number | undefined>): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path + queryString(params));
    if (!response.ok) {
      let reason = response.statusText || `HTTP ${response.status}`;
      try {
        const body = await response.json();
        reason = body?.detail?.reason ?? reason;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, reason);
    }
    return (await response.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/meta", {});
  }

  paths(options: {
    seed: string;
    n: number;
    interval: string;
    dst?: string;
    page?: number;
    pageSize?: number;
  }): Promise<PathsPage> {
    return this.get<PathsPage>("/paths", {
      seed: options.seed,
      n: options.n,
      interval: options.interval,
      dst: options.dst,
      page: options.page,
      page_size: options.pageSize,
    });
  }

  /** Fetch every page of a path table; concatenation equals the full table. */
  async allPaths(options: {
    seed: string;
    n: number;
    interval: string;
    dst?: string;
    pageSize?: number;
  }): Promise<PathsPage> {
    const pageSize = options.pageSize ?? 500;
    const first = await this.paths({ ...options, page: 0, pageSize });
    const rows = [...first.rows];
    let page = 1;
    while (rows.length < first.total_rows) {
      const next = await this.paths({ ...options, page, pageSize });
      if (next.rows.length === 0) {
        break;
      }
      rows.push(...next.rows);
      page += 1;
    }
    return { rows, page: 0, page_size: rows.length || pageSize, total_rows: first.total_rows };
  }

  flowSeries(options: { src: string; dst: string; n: number } & ExpectationParams): Promise<FlowSeries> {
    return this.get<FlowSeries>("/flow/series", {
      src: options.src,
      dst: options.dst,
      n: options.n,
      method: options.method,
      window: options.window,
      alpha: options.alpha,
      threshold: options.threshold,
    });
  }

  intermediaries(
    options: { src: string; dst: string; n: number; cutoff: string; statistic?: "mean" | "max" } & ExpectationParams,
  ): Promise<Ranking> {
    return this.get<Ranking>("/flow/intermediaries", {
      src: options.src,
      dst: options.dst,
      n: options.n,
      cutoff: options.cutoff,
      statistic: options.statistic,
      method: options.method,
      window: options.window,
      alpha: options.alpha,
      threshold: options.threshold,
    });
  }

  through(options: { src: string; dst: string; n: number; via: string }): Promise<ThroughSeries> {
    return this.get<ThroughSeries>("/flow/through", {
      src: options.src,
      dst: options.dst,
      n: options.n,
      via: options.via,
    });
  }

  edgeSeries(options: { src: string; dst: string }): Promise<EdgeSeries> {
    return this.get<EdgeSeries>("/edge/series", { src: options.src, dst: options.dst });
  }
}
