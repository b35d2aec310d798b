/**
 * Filterable, sortable path table.
 *
 * Rows come from the service's paginated path endpoint (all pages are
 * concatenated); sorting happens client-side on any column.  Rendering is
 * windowed: only `windowSize` rows exist in the DOM at a time, with spacer
 * rows standing in for the rest, since path counts grow sharply with depth.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import type { PathRow } from "./types.js";

export type PathColumn = "interval" | "path_nodes" | "edge_weights" | "terminal" | "min_weight";

const COLUMNS: { key: PathColumn; label: string }[] = [
  { key: "interval", label: "interval" },
  { key: "path_nodes", label: "path" },
  { key: "edge_weights", label: "edge weights" },
  { key: "terminal", label: "terminal" },
  { key: "min_weight", label: "bottleneck" },
];

function cellText(row: PathRow, column: PathColumn): string {
  switch (column) {
    case "path_nodes":
      return row.path_nodes.join(" > ");
    case "edge_weights":
      return row.edge_weights.join(", ");
    case "min_weight":
      return String(row.min_weight);
    default:
      return row[column];
  }
}

function compare(a: PathRow, b: PathRow, column: PathColumn): number {
  if (column === "min_weight") {
    return a.min_weight - b.min_weight;
  }
  const left = cellText(a, column);
  const right = cellText(b, column);
  return left < right ? -1 : left > right ? 1 : 0;
}

export interface PathQuery {
  seed: string;
  n: number;
  interval: string;
  dst?: string;
}

export class PathTable {
  readonly element: HTMLElement;
  private readonly client: ApiClient;
  private readonly windowSize: number;
  private rows: PathRow[] = [];
  private sortColumn: PathColumn | null = null;
  private sortDescending = false;
  private windowStart = 0;
  private lastQuery: PathQuery | null = null;
  private requestId = 0;

  constructor(client: ApiClient, options: { windowSize?: number } = {}) {
    this.client = client;
    this.windowSize = options.windowSize ?? 60;
    this.element = el("div", { class: "path-table" });
    this.render();
  }

  /** Currently rendered order (full row set, not just the DOM window). */
  get visibleRows(): PathRow[] {
    return [...this.rows];
  }

  async load(query: PathQuery): Promise<void> {
    this.lastQuery = query;
    const requestId = ++this.requestId;
    this.renderStatus("loading paths...");
    try {
      const page = await this.client.allPaths({
        seed: query.seed,
        n: query.n,
        interval: query.interval,
        dst: query.dst || undefined,
      });
      if (requestId !== this.requestId) {
        return; // a newer load superseded this response
      }
      this.rows = page.rows;
      this.applySort();
      this.windowStart = 0;
      this.render();
    } catch (error) {
      if (requestId !== this.requestId) {
        return;
      }
      this.renderError(error);
    }
  }

  sortBy(column: PathColumn): void {
    if (this.sortColumn === column) {
      this.sortDescending = !this.sortDescending;
    } else {
      this.sortColumn = column;
      this.sortDescending = false;
    }
    this.applySort();
    this.render();
  }

  /** Scroll the virtual window so that `start` is the first rendered row. */
  scrollToRow(start: number): void {
    this.windowStart = Math.max(0, Math.min(start, Math.max(0, this.rows.length - this.windowSize)));
    this.render();
  }

  private applySort(): void {
    const column = this.sortColumn;
    if (column === null) {
      return;
    }
    const direction = this.sortDescending ? -1 : 1;
    this.rows = [...this.rows].sort((a, b) => direction * compare(a, b, column));
  }

  private renderStatus(text: string): void {
    clear(this.element);
    this.element.append(el("p", { class: "status" }, [text]));
  }

  private renderError(error: unknown): void {
    clear(this.element);
    const message =
      error instanceof ApiError ? error.reason : error instanceof Error ? error.message : String(error);
    const retry = el("button", { class: "retry" }, ["retry"]);
    retry.addEventListener("click", () => {
      if (this.lastQuery) {
        void this.load(this.lastQuery);
      }
    });
    this.element.append(el("div", { class: "banner error", role: "alert" }, [message, retry]));
  }

  private render(): void {
    clear(this.element);
    if (this.rows.length === 0) {
      this.element.append(el("p", { class: "empty" }, ["no paths"]));
      return;
    }
    const table = el("table");
    const headRow = el("tr");
    for (const column of COLUMNS) {
      const arrow =
        this.sortColumn === column.key ? (this.sortDescending ? " ↓" : " ↑") : "";
      const header = el("th", { "data-column": column.key }, [column.label + arrow]);
      header.addEventListener("click", () => this.sortBy(column.key));
      headRow.append(header);
    }
    table.append(el("thead", {}, [headRow]));

    const body = el("tbody");
    const end = Math.min(this.rows.length, this.windowStart + this.windowSize);
    if (this.windowStart > 0) {
      body.append(
        el("tr", { class: "spacer", "data-skipped": String(this.windowStart) }, [
          el("td", { colspan: String(COLUMNS.length) }, [`... ${this.windowStart} rows above`]),
        ]),
      );
    }
    for (const row of this.rows.slice(this.windowStart, end)) {
      const tr = el("tr", { class: "path-row" });
      for (const column of COLUMNS) {
        tr.append(el("td", { "data-column": column.key }, [cellText(row, column.key)]));
      }
      body.append(tr);
    }
    if (end < this.rows.length) {
      const remaining = this.rows.length - end;
      body.append(
        el("tr", { class: "spacer", "data-skipped": String(remaining) }, [
          el("td", { colspan: String(COLUMNS.length) }, [`... ${remaining} rows below`]),
        ]),
      );
    }
    table.append(body);
    this.element.append(table);
  }
}
