/**
 * DOM wiring for the what-if panel. Everything stateful lives here; the
 * validation, API and rendering helpers are pure and tested separately.
 *
 * Validation bounds are fetched from the service at startup so the form
 * can never disagree with server-side validation.
 */

import { RunClient, RunOutcome } from "./api";
import { exportCsv, exportJson, renderChart, renderRateTable, summaryRows } from "./render";
import type { GridAxis, PanelState, Ranges, SimulateResponse } from "./types";
import { parseGridValues, validatePanel } from "./validate";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8710";

const CONFIG_FIELDS = [
  "n_per_group", "d_manip", "d_conf", "r",
  "alpha_balance", "alpha_outcome", "n_replicates", "seed",
] as const;

interface CompletedRun {
  response: SimulateResponse;
  rawBody: string;
  axis: GridAxis | null;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function readState(): PanelState {
  const config = Object.fromEntries(
    CONFIG_FIELDS.map((name) => [name, Number(el<HTMLInputElement>(name).value)]),
  ) as unknown as PanelState["config"];
  const axis = el<HTMLSelectElement>("grid_axis").value;
  const gridAxis = (axis || null) as GridAxis | null;
  return {
    config,
    gridAxis,
    gridValues: gridAxis ? parseGridValues(el<HTMLInputElement>("grid_values").value) : [],
  };
}

async function start(): Promise<void> {
  const rangesResponse = await fetch(`${SERVICE_URL}/ranges`);
  const ranges: Ranges = await rangesResponse.json();
  const client = new RunClient(SERVICE_URL);
  const runs: CompletedRun[] = [];
  const statusNode = el<HTMLElement>("status");
  const resultsNode = el<HTMLElement>("results");
  const submitButton = el<HTMLButtonElement>("submit");
  const exportJsonButton = el<HTMLButtonElement>("export-json");
  const exportCsvButton = el<HTMLButtonElement>("export-csv");

  function revalidate(): void {
    const { errors, canSubmit } = validatePanel(readState(), ranges);
    submitButton.disabled = !canSubmit;
    for (const name of [...CONFIG_FIELDS, "grid_values"]) {
      const slot = document.getElementById(`${name}-error`);
      if (slot) slot.textContent = errors[name] ?? "";
    }
  }

  function renderRuns(): void {
    // newest first; older runs stay visible for comparison until cleared
    resultsNode.innerHTML = runs
      .map((run, i) => {
        const rows = summaryRows(run.response.result);
        return (
          `<section class="run"><h3>run ${runs.length - i}` +
          ` (${run.response.wall_time_s.toFixed(2)}s)</h3>` +
          renderRateTable(rows, run.axis) +
          renderChart(rows, run.axis) +
          "</section>"
        );
      })
      .join("");
    const enabled = runs.length > 0;
    exportJsonButton.disabled = !enabled;
    exportCsvButton.disabled = !enabled;
  }

  function download(name: string, text: string, type: string): void {
    const link = document.createElement("a");
    link.href = URL.createObjectURL(new Blob([text], { type }));
    link.download = name;
    link.click();
    URL.revokeObjectURL(link.href);
  }

  submitButton.addEventListener("click", async () => {
    const state = readState();
    statusNode.textContent = "running...";
    const outcome: RunOutcome = await client.submit(state);
    switch (outcome.kind) {
      case "ok":
        runs.unshift({ response: outcome.response, rawBody: outcome.rawBody,
                       axis: state.gridAxis });
        renderRuns();
        statusNode.textContent = "";
        break;
      case "stale":
        break; // a newer run's result is already on its way
      case "field-error":
        statusNode.textContent = `rejected: ${outcome.field ?? "request"}: ${outcome.message}`;
        break;
      case "network-error":
        statusNode.textContent = `service unreachable (${outcome.message}); retry?`;
        break;
    }
  });

  exportJsonButton.addEventListener("click", () =>
    download("run.json", exportJson(runs[0].rawBody), "application/json"));
  exportCsvButton.addEventListener("click", () =>
    download("run.csv", exportCsv(runs[0].response.result), "text/csv"));
  el<HTMLButtonElement>("clear").addEventListener("click", () => {
    runs.length = 0;
    renderRuns();
  });

  for (const name of [...CONFIG_FIELDS, "grid_axis", "grid_values"]) {
    el(name).addEventListener("input", revalidate);
  }
  revalidate();
  renderRuns();
}

start().catch((err) => {
  el<HTMLElement>("status").textContent = `failed to reach service: ${err}`;
});
