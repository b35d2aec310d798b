/**
 * Intermediary ranking and drill-down.
 *
 * The ranking lists interior nodes by post-cutoff growth over expectation;
 * clicking a row opens its through-flow series side by side with the two
 * direct edges it sits on, and the intermediary can be promoted to become
 * the next investigation seed.
 */

import { ApiClient, ApiError } from "./api.js";
import { FlowChart } from "./chart.js";
import { clear, el } from "./dom.js";
import type { EdgeSeries, Ranking, ThroughSeries } from "./types.js";

export class RankingView {
  readonly element: HTMLElement;
  private onDrill: (node: string) => void;

  constructor(onDrill: (node: string) => void) {
    this.onDrill = onDrill;
    this.element = el("div", { class: "ranking" });
  }

  render(ranking: Ranking): void {
    clear(this.element);
    if (ranking.rows.length === 0 && ranking.newly_active.length === 0) {
      this.element.append(el("p", { class: "empty" }, ["no intermediaries"]));
      return;
    }
    const table = el("table");
    table.append(
      el("thead", {}, [
        el("tr", {}, [
          el("th", {}, ["intermediary"]),
          el("th", {}, ["difference"]),
          el("th", {}, ["intervals"]),
          el("th", {}, [""]),
        ]),
      ]),
    );
    const body = el("tbody");
    for (const row of ranking.rows) {
      const tr = el("tr", { class: "ranking-row", "data-node": row.node });
      tr.append(el("td", {}, [row.node]));
      tr.append(el("td", {}, [row.difference.toFixed(3)]));
      tr.append(el("td", {}, [String(row.n_intervals_post_cutoff)]));
      tr.append(el("td", {}, row.newly_active_flag ? [el("span", { class: "badge" }, ["new"])] : []));
      tr.addEventListener("click", () => this.onDrill(row.node));
      body.append(tr);
    }
    table.append(body);
    this.element.append(table);

    if (ranking.newly_active.length > 0) {
      this.element.append(
        el("p", { class: "newly-active" }, [
          `newly active (no history to rank): ${ranking.newly_active.join(", ")}`,
        ]),
      );
    }
  }

  showError(message: string): void {
    clear(this.element);
    this.element.append(el("div", { class: "banner error", role: "alert" }, [message]));
  }
}

export interface DrillData {
  through: ThroughSeries;
  firstLeg: EdgeSeries;
  secondLeg: EdgeSeries;
  cutoff?: string;
}

/** Fetch everything the drill-down panel needs for one intermediary. */
export async function fetchDrillData(
  client: ApiClient,
  options: { src: string; dst: string; n: number; via: string; cutoff?: string },
): Promise<DrillData> {
  const [through, firstLeg, secondLeg] = await Promise.all([
    client.through({ src: options.src, dst: options.dst, n: options.n, via: options.via }),
    client.edgeSeries({ src: options.src, dst: options.via }),
    client.edgeSeries({ src: options.via, dst: options.dst }),
  ]);
  return { through, firstLeg, secondLeg, cutoff: options.cutoff };
}

export class DrillDownView {
  readonly element: HTMLElement;
  private onPromote: (node: string) => void;
  private onBack: () => void;

  constructor(callbacks: { onPromote: (node: string) => void; onBack: () => void }) {
    this.onPromote = callbacks.onPromote;
    this.onBack = callbacks.onBack;
    this.element = el("div", { class: "drill-down" });
  }

  render(data: DrillData): void {
    clear(this.element);
    const via = data.through.via;

    const back = el("button", { class: "back" }, ["back"]);
    back.addEventListener("click", () => this.onBack());
    const promote = el("button", { class: "promote" }, [`investigate from ${via}`]);
    promote.addEventListener("click", () => this.onPromote(via));
    this.element.append(el("div", { class: "drill-actions" }, [back, promote]));

    const throughPanel = el("div", { class: "panel through" }, [
      el("h3", {}, [`flow through ${via}`]),
    ]);
    const throughChart = new FlowChart({ threshold: Infinity });
    throughChart.render({ points: data.through.points, flags: [], cutoff: data.cutoff });
    throughPanel.append(throughChart.element);

    const edgesPanel = el("div", { class: "panel edges" });
    for (const [leg, title] of [
      [data.firstLeg, `${data.firstLeg.src} > ${data.firstLeg.dst}`],
      [data.secondLeg, `${data.secondLeg.src} > ${data.secondLeg.dst}`],
    ] as const) {
      const chart = new FlowChart({ threshold: Infinity });
      chart.render({
        points: leg.points.map((p) => ({ ...p, expected: null, deviation: null })),
        flags: [],
        cutoff: data.cutoff,
      });
      edgesPanel.append(el("div", { class: "edge-panel" }, [el("h3", {}, [title]), chart.element]));
    }

    if (data.through.points.every((p) => p.weight === 0)) {
      this.element.append(el("p", { class: "empty" }, [`no flow through ${via}`]));
    }
    this.element.append(el("div", { class: "drill-layout" }, [throughPanel, edgesPanel]));
  }

  showError(error: unknown): void {
    clear(this.element);
    const message =
      error instanceof ApiError ? error.reason : error instanceof Error ? error.message : String(error);
    this.element.append(el("div", { class: "banner error", role: "alert" }, [message]));
  }
}
