/**
 * Wire types for the flowlens query service.
 *
 * Field names mirror the service JSON verbatim; the workbench never
 * recomputes flow weights, expectations or deviations from these values,
 * it only displays and filters them.
 */

/** Deviations come back as a number, null (undefined), or the string "inf". */
export type Deviation = number | "inf" | "-inf" | null;

export interface Meta {
  record_count: number;
  checksum: string;
  default_granularity: string;
  default_bucket: string;
  granularities: string[];
  buckets: string[];
  interval_range: { first: string; last: string; count: number };
  pseudonym_map: string | null;
}

export interface PathRow {
  interval: string;
  path_nodes: string[];
  edge_weights: number[];
  terminal: string;
  min_weight: number;
}

export interface PathsPage {
  rows: PathRow[];
  page: number;
  page_size: number;
  total_rows: number;
}

export interface SeriesPoint {
  interval: string;
  weight: number;
  expected: Deviation;
  deviation: Deviation;
}

export interface AnomalyFlag {
  interval: string;
  actual: number;
  expected: Deviation;
  deviation: Deviation;
  direction: "positive" | "negative";
}

export interface FlowSeries {
  source: string;
  sink: string;
  max_len: number;
  points: SeriesPoint[];
  flags: AnomalyFlag[];
}

export interface ThroughSeries {
  source: string;
  sink: string;
  via: string;
  max_len: number;
  points: SeriesPoint[];
}

export interface EdgeSeries {
  src: string;
  dst: string;
  points: { interval: string; weight: number }[];
}

export interface RankingRow {
  node: string;
  difference: number;
  n_intervals_post_cutoff: number;
  newly_active_flag: boolean;
}

export interface Ranking {
  rows: RankingRow[];
  newly_active: string[];
}

export interface ExpectationParams {
  method?: "wma" | "ewma";
  window?: number;
  alpha?: number;
  threshold?: number;
}
