/**
 * Investigation state: what the analyst is currently looking at.
 *
 * Every view is reconstructable from its URL (the state serializes to query
 * parameters), back-navigation restores the prior state exactly, and each
 * transition bumps a sequence number so stale responses can be discarded.
 */

export type ViewName = "paths" | "series" | "ranking" | "drill";

export interface InvestigationState {
  view: ViewName;
  seed: string;
  /** Sink filter for the path table and src/dst queries. */
  dst: string;
  maxLen: number;
  interval: string;
  cutoff: string;
  method: "wma" | "ewma";
  window: number;
  alpha: number;
  threshold: number;
  /** Intermediary currently drilled into, empty when none. */
  via: string;
  normalized: boolean;
}

export const DEFAULT_STATE: InvestigationState = {
  view: "paths",
  seed: "",
  dst: "",
  maxLen: 3,
  interval: "",
  cutoff: "",
  method: "wma",
  window: 8,
  alpha: 0.3,
  threshold: 0.5,
  via: "",
  normalized: true,
};

/** Serialize only the fields that differ from the defaults. */
export function stateToQuery(state: InvestigationState): string {
  const params = new URLSearchParams();
  for (const key of Object.keys(DEFAULT_STATE) as (keyof InvestigationState)[]) {
    if (state[key] !== DEFAULT_STATE[key]) {
      params.set(key, String(state[key]));
    }
  }
  return params.toString();
}

export function stateFromQuery(query: string): InvestigationState {
  const params = new URLSearchParams(query);
  const state: InvestigationState = { ...DEFAULT_STATE };
  const read = (key: string): string | null => params.get(key);

  const view = read("view");
  if (view === "paths" || view === "series" || view === "ranking" || view === "drill") {
    state.view = view;
  }
  for (const key of ["seed", "dst", "interval", "cutoff", "via"] as const) {
    const value = read(key);
    if (value !== null) {
      state[key] = value;
    }
  }
  const method = read("method");
  if (method === "wma" || method === "ewma") {
    state.method = method;
  }
  for (const key of ["maxLen", "window"] as const) {
    const value = read(key);
    if (value !== null && Number.isFinite(Number(value))) {
      state[key] = Number(value);
    }
  }
  for (const key of ["alpha", "threshold"] as const) {
    const value = read(key);
    if (value !== null && Number.isFinite(Number(value))) {
      state[key] = Number(value);
    }
  }
  if (read("normalized") !== null) {
    state.normalized = read("normalized") === "true";
  }
  return state;
}

/** Key identifying the service data a state needs; equal keys share queries. */
export function stateKey(state: InvestigationState): string {
  const common = `${state.seed}|${state.dst}|${state.maxLen}`;
  switch (state.view) {
    case "paths":
      return `paths|${common}|${state.interval}`;
    case "series":
      return `series|${common}|${state.method}|${state.window}|${state.alpha}|${state.threshold}`;
    case "ranking":
      return `ranking|${common}|${state.cutoff}|${state.method}|${state.window}|${state.alpha}`;
    case "drill":
      return `drill|${common}|${state.via}`;
  }
}

type Listener = (state: InvestigationState, sequence: number) => void;

export class InvestigationStore {
  private state: InvestigationState;
  private history: InvestigationState[] = [];
  private sequence = 0;
  private listeners: Listener[] = [];

  constructor(initial?: Partial<InvestigationState>) {
    this.state = { ...DEFAULT_STATE, ...initial };
  }

  get current(): InvestigationState {
    return this.state;
  }

  get seq(): number {
    return this.sequence;
  }

  /** True while `sequence` still names the latest transition. */
  isCurrent(sequence: number): boolean {
    return sequence === this.sequence;
  }

  canGoBack(): boolean {
    return this.history.length > 0;
  }

  update(patch: Partial<InvestigationState>): number {
    this.history.push(this.state);
    this.state = { ...this.state, ...patch };
    return this.bump();
  }

  /** Restore the previous state exactly; returns null at the history root. */
  back(): number | null {
    const previous = this.history.pop();
    if (previous === undefined) {
      return null;
    }
    this.state = previous;
    return this.bump();
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((entry) => entry !== listener);
    };
  }

  private bump(): number {
    this.sequence += 1;
    for (const listener of [...this.listeners]) {
      listener(this.state, this.sequence);
    }
    return this.sequence;
  }
}
