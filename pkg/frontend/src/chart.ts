/**
 * Time-series chart: actual flow weight, expectation overlay, anomaly
 * markers and an optional cutoff line, rendered as plain SVG.
 *
 * All numbers are service values.  The threshold slider re-filters the
 * service-provided flag set client-side, so raising it never refetches;
 * markers below the server-side flagging threshold cannot appear because
 * the service never sent them.
 */

import { clear, el, svgEl } from "./dom.js";
import type { AnomalyFlag, Deviation, SeriesPoint } from "./types.js";

const WIDTH = 640;
const HEIGHT = 240;
const PAD = 24;

function deviationMagnitude(deviation: Deviation): number {
  if (deviation === null) {
    return 0;
  }
  if (deviation === "inf" || deviation === "-inf") {
    return Infinity;
  }
  return Math.abs(deviation);
}

export interface ChartData {
  points: SeriesPoint[];
  flags: AnomalyFlag[];
  cutoff?: string;
}

export class FlowChart {
  readonly element: HTMLElement;
  private data: ChartData | null = null;
  private threshold: number;
  private normalized: boolean;

  constructor(options: { threshold?: number; normalized?: boolean } = {}) {
    this.threshold = options.threshold ?? 0.5;
    this.normalized = options.normalized ?? true;
    this.element = el("div", { class: "flow-chart" });
  }

  render(data: ChartData): void {
    this.data = data;
    this.redraw();
  }

  /** Inline failure note, e.g. a series too short for the chosen method. */
  showError(message: string): void {
    this.data = null;
    clear(this.element);
    this.element.append(el("p", { class: "chart-error" }, [message]));
  }

  /** Client-side marker re-filter; never triggers a service query. */
  setThreshold(threshold: number): void {
    this.threshold = threshold;
    this.redraw();
  }

  setNormalized(normalized: boolean): void {
    this.normalized = normalized;
    this.redraw();
  }

  get visibleFlags(): AnomalyFlag[] {
    if (!this.data) {
      return [];
    }
    return this.data.flags.filter((flag) => deviationMagnitude(flag.deviation) > this.threshold);
  }

  private redraw(): void {
    clear(this.element);
    const data = this.data;
    if (!data || data.points.length === 0) {
      this.element.append(el("p", { class: "empty" }, ["no data"]));
      return;
    }
    const points = data.points;
    const labels = points.map((p) => p.interval);
    const peak = Math.max(
      1,
      ...points.map((p) => p.weight),
      ...points.map((p) => (typeof p.expected === "number" ? p.expected : 0)),
    );
    const innerWidth = WIDTH - 2 * PAD;
    const innerHeight = HEIGHT - 2 * PAD;
    const x = (index: number): number =>
      PAD + (points.length === 1 ? innerWidth / 2 : (index / (points.length - 1)) * innerWidth);
    const y = (value: number): number => PAD + (1 - value / peak) * innerHeight;

    const svg = svgEl("svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      width: String(WIDTH),
      height: String(HEIGHT),
      role: "img",
    });

    // flag markers under the lines, one vertical line per surviving flag
    for (const flag of this.visibleFlags) {
      const index = labels.indexOf(flag.interval);
      if (index < 0) {
        continue;
      }
      svg.append(
        svgEl("line", {
          class: `flag ${flag.direction}`,
          x1: String(x(index)),
          x2: String(x(index)),
          y1: String(PAD),
          y2: String(HEIGHT - PAD),
          stroke: flag.direction === "positive" ? "#1a7f37" : "#c00000",
          "stroke-dasharray": "3 3",
        }),
      );
    }

    if (data.cutoff) {
      const index = labels.indexOf(data.cutoff);
      if (index >= 0) {
        svg.append(
          svgEl("line", {
            class: "cutoff",
            x1: String(x(index)),
            x2: String(x(index)),
            y1: String(PAD),
            y2: String(HEIGHT - PAD),
            stroke: "#888888",
            "stroke-dasharray": "6 4",
          }),
        );
      }
    }

    const actual = points.map((p, i) => `${x(i)},${y(p.weight)}`).join(" ");
    svg.append(
      svgEl("polyline", {
        class: "actual",
        points: actual,
        fill: "none",
        stroke: "#e07b00",
        "stroke-width": "2",
      }),
    );

    // expectation overlay, split into segments across undefined leading points
    let segment: string[] = [];
    const flush = () => {
      if (segment.length > 1) {
        svg.append(
          svgEl("polyline", {
            class: "expected",
            points: segment.join(" "),
            fill: "none",
            stroke: "#1f6feb",
            "stroke-dasharray": "5 3",
          }),
        );
      }
      segment = [];
    };
    points.forEach((point, index) => {
      if (typeof point.expected === "number") {
        segment.push(`${x(index)},${y(point.expected)}`);
      } else {
        flush();
      }
    });
    flush();

    this.element.append(svg);

    const scaleNote = this.normalized
      ? `amounts normalized to series maximum (${peak})`
      : `raw amounts, maximum ${peak}`;
    this.element.append(el("p", { class: "scale-note" }, [scaleNote]));

    const list = el("ul", { class: "flag-list" });
    for (const flag of this.visibleFlags) {
      const value = this.normalized ? flag.actual / peak : flag.actual;
      list.append(
        el("li", { class: `flag-item ${flag.direction}`, "data-interval": flag.interval }, [
          `${flag.interval}: ${this.normalized ? value.toFixed(3) : value} (${flag.direction})`,
        ]),
      );
    }
    this.element.append(list);
  }
}
