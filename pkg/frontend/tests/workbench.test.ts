import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Workbench } from "../src/app.js";
import { deferred, fixtureFetch, flushMicrotasks, jsonResponse } from "./helpers.js";

import flowSeriesFixture from "./fixtures/flow_series.json";
import metaFixture from "./fixtures/meta.json";
import pathsAll from "./fixtures/paths_all.json";
import pathsDstY from "./fixtures/paths_dst_y.json";
import rankingFixture from "./fixtures/scenario_ranking.json";
import scenarioInfo from "./fixtures/scenario_info.json";
import throughFixture from "./fixtures/scenario_through_injected.json";
import firstLeg from "./fixtures/scenario_edge_first_leg.json";
import secondLeg from "./fixtures/scenario_edge_second_leg.json";

const ROUTES = {
  "/meta": metaFixture,
  "/paths": (url: URL) => (url.searchParams.get("dst") === "y" ? pathsDstY : pathsAll),
  "/flow/series": flowSeriesFixture,
  "/flow/intermediaries": rankingFixture,
  "/flow/through": throughFixture,
  "/edge/series": (url: URL) =>
    url.searchParams.get("src") === "ACC0000" ? firstLeg : secondLeg,
};

function makeWorkbench(initialQuery: string, log: string[] = []) {
  const client = new ApiClient("", fixtureFetch(ROUTES, log));
  return { workbench: new Workbench(client, { initialQuery }), log };
}

describe("Workbench", () => {
  it("raising the threshold slider re-filters markers without a refetch", async () => {
    const { workbench, log } = makeWorkbench("view=series&seed=x&dst=y");
    await workbench.start();
    const fetchesAfterStart = log.length;
    expect(log.filter((entry) => entry.startsWith("/flow/series"))).toHaveLength(1);
    expect(workbench.element.querySelectorAll("line.flag")).toHaveLength(2);

    workbench.store.update({ threshold: 2.0 });
    await flushMicrotasks();
    expect(log.length).toBe(fetchesAfterStart);
    expect(workbench.element.querySelectorAll("line.flag")).toHaveLength(0);
  });

  it("lowering the threshold below the fetched one queries the service again", async () => {
    const { workbench, log } = makeWorkbench("view=series&seed=x&dst=y");
    await workbench.start();
    workbench.store.update({ threshold: 0.2 });
    await flushMicrotasks();
    expect(log.filter((entry) => entry.startsWith("/flow/series"))).toHaveLength(2);
  });

  it("deduplicates concurrent queries that share a state key", async () => {
    const gate = deferred<Response>();
    const log: string[] = [];
    const client = new ApiClient("", async (url) => {
      const parsed = new URL(url, "http://service.test");
      log.push(parsed.pathname);
      if (parsed.pathname === "/flow/intermediaries") {
        return gate.promise;
      }
      return jsonResponse(metaFixture);
    });
    const workbench = new Workbench(client, {
      initialQuery: "view=ranking&seed=ACC0000&dst=ACC0001&cutoff=2022-W17",
    });
    const started = workbench.start();
    await flushMicrotasks(); // meta resolved, ranking query now in flight
    // normalized is not part of the ranking state key, so this transition
    // reuses the in-flight query instead of issuing a second one
    workbench.store.update({ normalized: false });
    await flushMicrotasks();
    gate.resolve(jsonResponse(rankingFixture));
    await started;
    await flushMicrotasks();
    expect(log.filter((entry) => entry === "/flow/intermediaries")).toHaveLength(1);
    expect(workbench.element.querySelectorAll("tr.ranking-row").length).toBeGreaterThan(0);
  });

  it("discards stale responses by sequence number", async () => {
    const slow = deferred<Response>();
    const log: string[] = [];
    const client = new ApiClient("", async (url) => {
      const parsed = new URL(url, "http://service.test");
      log.push(parsed.pathname + parsed.search);
      if (parsed.pathname === "/meta") {
        return jsonResponse(metaFixture);
      }
      if (parsed.searchParams.get("dst") === "stale") {
        return slow.promise;
      }
      return jsonResponse({ ...flowSeriesFixture, points: flowSeriesFixture.points, flags: [] });
    });
    const workbench = new Workbench(client, { initialQuery: "view=series&seed=x&dst=stale" });
    const started = workbench.start();
    await flushMicrotasks(); // slow series query for dst=stale now in flight
    workbench.store.update({ dst: "y" }); // newer query, resolves immediately
    await flushMicrotasks();
    const rendered = workbench.element.querySelector(".flow-chart .scale-note")?.textContent;
    expect(rendered).toBeTruthy();
    slow.resolve(
      jsonResponse({
        ...flowSeriesFixture,
        points: flowSeriesFixture.points.map((p) => ({ ...p, weight: 999_999 })),
        flags: [],
      }),
    );
    await started;
    await flushMicrotasks();
    expect(workbench.element.querySelector(".flow-chart .scale-note")?.textContent).toBe(rendered);
    expect(rendered).not.toContain("999999");
  });

  it("drills into an intermediary and promotes it to the next seed", async () => {
    const { workbench, log } = makeWorkbench(
      "view=ranking&seed=ACC0000&dst=ACC0001&cutoff=2022-W17",
    );
    await workbench.start();
    const firstRow = workbench.element.querySelector("tr.ranking-row") as HTMLElement;
    expect(firstRow.getAttribute("data-node")).toBe(scenarioInfo.injected);
    firstRow.click();
    await flushMicrotasks();
    expect(workbench.store.current.view).toBe("drill");
    expect(workbench.store.current.via).toBe(scenarioInfo.injected);
    expect(log.some((entry) => entry.startsWith("/flow/through"))).toBe(true);

    (workbench.element.querySelector("button.promote") as HTMLElement).click();
    await flushMicrotasks();
    expect(workbench.store.current.view).toBe("paths");
    expect(workbench.store.current.seed).toBe(scenarioInfo.injected);
    expect(log.some((entry) => entry.startsWith("/paths"))).toBe(true);
  });

  it("back restores the previous view state exactly", async () => {
    const { workbench } = makeWorkbench("view=ranking&seed=ACC0000&dst=ACC0001&cutoff=2022-W17");
    await workbench.start();
    const before = { ...workbench.store.current };
    workbench.openDrill(scenarioInfo.injected);
    await flushMicrotasks();
    workbench.goBack();
    await flushMicrotasks();
    expect(workbench.store.current).toEqual(before);
  });
});
