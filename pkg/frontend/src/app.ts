/**
 * Workbench shell: seed/depth/aggregation controls, the path table, the
 * flow chart with expectation overlay and anomaly markers, the intermediary
 * ranking and its drill-down.
 *
 * One view is active at a time and every state transition triggers at most
 * one data refresh for it; in-flight queries are deduplicated per state key
 * and stale responses are discarded by sequence number.  Raising the
 * threshold slider re-filters markers client-side without a refetch; only
 * lowering it below the last fetched threshold queries the service again.
 */

import { ApiClient, ApiError } from "./api.js";
import { FlowChart } from "./chart.js";
import { clear, el } from "./dom.js";
import { DrillDownView, RankingView, fetchDrillData } from "./ranking.js";
import {
  InvestigationState,
  InvestigationStore,
  stateFromQuery,
  stateKey,
  stateToQuery,
} from "./state.js";
import { PathTable } from "./table.js";
import type { FlowSeries, Meta, Ranking } from "./types.js";
import type { DrillData } from "./ranking.js";

const VIEWS = ["paths", "series", "ranking", "drill"] as const;

export class Workbench {
  readonly element: HTMLElement;
  readonly store: InvestigationStore;
  private readonly client: ApiClient;
  private readonly table: PathTable;
  private readonly chart: FlowChart;
  private readonly ranking: RankingView;
  private readonly drill: DrillDownView;
  private readonly viewHost: HTMLElement;
  private readonly inflight = new Map<string, Promise<unknown>>();
  private seriesCache: { baseKey: string; threshold: number; data: FlowSeries } | null = null;
  private meta: Meta | null = null;
  private readonly syncUrl: boolean;

  constructor(client: ApiClient, options: { initialQuery?: string; syncUrl?: boolean } = {}) {
    this.client = client;
    this.syncUrl = options.syncUrl ?? false;
    this.store = new InvestigationStore(
      options.initialQuery !== undefined ? stateFromQuery(options.initialQuery) : {},
    );
    this.table = new PathTable(client);
    this.chart = new FlowChart({ threshold: this.store.current.threshold });
    this.ranking = new RankingView((node) => this.openDrill(node));
    this.drill = new DrillDownView({
      onPromote: (node) => this.promoteSeed(node),
      onBack: () => this.goBack(),
    });
    this.viewHost = el("div", { class: "view-host" });
    this.element = el("div", { class: "workbench" });
    this.element.append(this.buildControls(), this.viewHost);
    this.store.subscribe((state, seq) => {
      if (this.syncUrl) {
        history.replaceState(null, "", `?${stateToQuery(state)}`);
      }
      void this.refresh(state, seq);
    });
  }

  /** Load /meta and render the initial state. */
  async start(): Promise<void> {
    try {
      this.meta = await this.client.meta();
    } catch {
      this.meta = null; // controls still work; views surface their own errors
    }
    await this.refresh(this.store.current, this.store.seq);
  }

  openDrill(node: string): void {
    this.store.update({ view: "drill", via: node });
  }

  promoteSeed(node: string): void {
    this.store.update({ view: "paths", seed: node, via: "" });
  }

  goBack(): void {
    this.store.back();
  }

  /** Exposed for tests: what the active view would query right now. */
  get activeKey(): string {
    return stateKey(this.store.current);
  }

  private buildControls(): HTMLElement {
    const state = this.store.current;
    const controls = el("div", { class: "controls" });

    const seed = el("input", { class: "seed", value: state.seed, placeholder: "seed entity" });
    seed.addEventListener("change", () => this.store.update({ seed: seed.value }));
    const dst = el("input", { class: "dst", value: state.dst, placeholder: "destination filter" });
    dst.addEventListener("change", () => this.store.update({ dst: dst.value }));
    const maxLen = el("input", { class: "max-len", type: "number", min: "1", value: String(state.maxLen) });
    maxLen.addEventListener("change", () => this.store.update({ maxLen: Number(maxLen.value) }));
    const interval = el("input", { class: "interval", value: state.interval, placeholder: "interval" });
    interval.addEventListener("change", () => this.store.update({ interval: interval.value }));
    const cutoff = el("input", { class: "cutoff", value: state.cutoff, placeholder: "cutoff interval" });
    cutoff.addEventListener("change", () => this.store.update({ cutoff: cutoff.value }));

    const slider = el("input", {
      class: "threshold",
      type: "range",
      min: "0.05",
      max: "5",
      step: "0.05",
      value: String(state.threshold),
    });
    slider.addEventListener("input", () => this.store.update({ threshold: Number(slider.value) }));

    const normalized = el("input", { class: "normalized", type: "checkbox" });
    (normalized as HTMLInputElement).checked = state.normalized;
    normalized.addEventListener("change", () =>
      this.store.update({ normalized: (normalized as HTMLInputElement).checked }),
    );

    const back = el("button", { class: "nav-back" }, ["back"]);
    back.addEventListener("click", () => this.goBack());

    const tabs = el("div", { class: "tabs" });
    for (const view of VIEWS) {
      const tab = el("button", { class: `tab tab-${view}`, "data-view": view }, [view]);
      tab.addEventListener("click", () => this.store.update({ view }));
      tabs.append(tab);
    }

    controls.append(seed, dst, maxLen, interval, cutoff, slider, normalized, back, tabs);
    return controls;
  }

  private show(element: HTMLElement): void {
    clear(this.viewHost);
    this.viewHost.append(element);
  }

  private async refresh(state: InvestigationState, seq: number): Promise<void> {
    switch (state.view) {
      case "paths":
        return this.refreshPaths(state);
      case "series":
        return this.refreshSeries(state, seq);
      case "ranking":
        return this.refreshRanking(state, seq);
      case "drill":
        return this.refreshDrill(state, seq);
    }
  }

  private async refreshPaths(state: InvestigationState): Promise<void> {
    this.show(this.table.element);
    if (!state.seed) {
      return;
    }
    await this.table.load({
      seed: state.seed,
      n: state.maxLen,
      interval: state.interval || this.meta?.interval_range.last || "",
      dst: state.dst || undefined,
    });
  }

  private seriesBaseKey(state: InvestigationState): string {
    return `${state.seed}|${state.dst}|${state.maxLen}|${state.method}|${state.window}|${state.alpha}`;
  }

  private async refreshSeries(state: InvestigationState, seq: number): Promise<void> {
    this.show(this.chart.element);
    if (!state.seed || !state.dst) {
      return;
    }
    const baseKey = this.seriesBaseKey(state);
    const cached = this.seriesCache;
    if (cached && cached.baseKey === baseKey && state.threshold >= cached.threshold) {
      // markers above the fetched flag set cannot exist; filter client-side
      this.chart.setThreshold(state.threshold);
      return;
    }
    try {
      const data = (await this.dedup(stateKey(state), () =>
        this.client.flowSeries({
          src: state.seed,
          dst: state.dst,
          n: state.maxLen,
          method: state.method,
          window: state.window,
          alpha: state.alpha,
          threshold: state.threshold,
        }),
      )) as FlowSeries;
      if (!this.store.isCurrent(seq)) {
        return;
      }
      this.seriesCache = { baseKey, threshold: state.threshold, data };
      this.chart.setNormalized(state.normalized);
      this.chart.setThreshold(state.threshold);
      this.chart.render({ points: data.points, flags: data.flags, cutoff: state.cutoff || undefined });
    } catch (error) {
      if (!this.store.isCurrent(seq)) {
        return;
      }
      if (error instanceof ApiError && error.status === 422) {
        const minimum = state.method === "wma" ? state.window + 1 : 2;
        this.chart.showError(`${error.reason} (needs at least ${minimum} intervals)`);
      } else {
        this.chart.showError(error instanceof Error ? error.message : String(error));
      }
    }
  }

  private async refreshRanking(state: InvestigationState, seq: number): Promise<void> {
    this.show(this.ranking.element);
    if (!state.seed || !state.dst || !state.cutoff) {
      return;
    }
    try {
      const data = (await this.dedup(stateKey(state), () =>
        this.client.intermediaries({
          src: state.seed,
          dst: state.dst,
          n: state.maxLen,
          cutoff: state.cutoff,
          method: state.method,
          window: state.window,
          alpha: state.alpha,
          threshold: state.threshold,
        }),
      )) as Ranking;
      if (!this.store.isCurrent(seq)) {
        return;
      }
      this.ranking.render(data);
    } catch (error) {
      if (!this.store.isCurrent(seq)) {
        return;
      }
      this.ranking.showError(
        error instanceof ApiError ? error.reason : error instanceof Error ? error.message : String(error),
      );
    }
  }

  private async refreshDrill(state: InvestigationState, seq: number): Promise<void> {
    this.show(this.drill.element);
    if (!state.seed || !state.dst || !state.via) {
      return;
    }
    try {
      const data = (await this.dedup(stateKey(state), () =>
        fetchDrillData(this.client, {
          src: state.seed,
          dst: state.dst,
          n: state.maxLen,
          via: state.via,
          cutoff: state.cutoff || undefined,
        }),
      )) as DrillData;
      if (!this.store.isCurrent(seq)) {
        return;
      }
      this.drill.render(data);
    } catch (error) {
      if (!this.store.isCurrent(seq)) {
        return;
      }
      this.drill.showError(error);
    }
  }

  private dedup(key: string, fetcher: () => Promise<unknown>): Promise<unknown> {
    const existing = this.inflight.get(key);
    if (existing) {
      return existing;
    }
    const promise = fetcher().finally(() => this.inflight.delete(key));
    this.inflight.set(key, promise);
    return promise;
  }
}

/** Browser entry point: mount on #app against the serving origin. */
export function mount(): void {
  const host = document.getElementById("app");
  if (!host) {
    throw new Error("missing #app element");
  }
  const base = new URLSearchParams(location.search).get("api") ?? "";
  const workbench = new Workbench(new ApiClient(base), {
    initialQuery: location.search,
    syncUrl: true,
  });
  host.append(workbench.element);
  void workbench.start();
}
