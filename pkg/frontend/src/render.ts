/**
 * Pure rendering helpers. Every displayed number is lifted verbatim from a
 * service response field; the UI computes no statistics of its own.
 */

import type { GridAxis, SimulateResponse, SummaryDict } from "./types";

export const RATE_COLUMNS: Array<{ key: keyof SummaryDict; label: string }> = [
  { key: "flag_rate", label: "balance flag rate" },
  { key: "unnecessary_flag_rate", label: "unnecessary flag rate" },
  { key: "naive_power_or_type1", label: "naive rejection rate" },
  { key: "adjusted_power_or_type1", label: "adjusted rejection rate" },
  { key: "mean_naive_estimate", label: "mean naive estimate" },
  { key: "mean_adjusted_estimate", label: "mean adjusted estimate" },
];

export function summaryRows(result: SimulateResponse["result"]): SummaryDict[] {
  return Array.isArray(result) ? result : [result];
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Result table; cell text is the exact response value (String(value)). */
export function renderRateTable(rows: SummaryDict[], axis: GridAxis | null): string {
  const head =
    `<tr><th>${axis ?? "run"}</th>` +
    RATE_COLUMNS.map((c) => `<th>${escapeHtml(c.label)}</th>`).join("") +
    "</tr>";
  const body = rows
    .map((row, i) => {
      const label = axis ? String(row.config[axis]) : `#${i + 1}`;
      const cells = RATE_COLUMNS.map(
        (c) => `<td data-field="${c.key}">${String(row[c.key])}</td>`,
      ).join("");
      return `<tr><td>${escapeHtml(label)}</td>${cells}</tr>`;
    })
    .join("");
  return `<table class="rates">${head}${body}</table>`;
}

const CHART_W = 640;
const CHART_H = 360;
const PAD = 48;

function xScale(values: number[]): (v: number) => number {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  return (v) => PAD + ((v - lo) / span) * (CHART_W - 2 * PAD);
}

function yScale(rate: number): number {
  return CHART_H - PAD - rate * (CHART_H - 2 * PAD);
}

const SERIES: Array<{ key: keyof SummaryDict; color: string }> = [
  { key: "flag_rate", color: "#1f77b4" },
  { key: "unnecessary_flag_rate", color: "#d62728" },
  { key: "naive_power_or_type1", color: "#ff7f0e" },
  { key: "adjusted_power_or_type1", color: "#2ca02c" },
];

/**
 * Line chart of rates vs the sweep axis as an SVG string, with guide lines
 * at the balance alpha and at 0.5 so the headline threshold is visible.
 */
export function renderChart(rows: SummaryDict[], axis: GridAxis | null): string {
  if (rows.length === 0) return "<svg></svg>";
  const xs = axis ? rows.map((r) => r.config[axis]) : rows.map((_, i) => i);
  const sx = xScale(xs);
  const alpha = rows[0].config.alpha_balance;
  const parts: string[] = [
    `<svg viewBox="0 0 ${CHART_W} ${CHART_H}" xmlns="http://www.w3.org/2000/svg">`,
    `<line class="guide-alpha" x1="${PAD}" x2="${CHART_W - PAD}" ` +
      `y1="${yScale(alpha)}" y2="${yScale(alpha)}" stroke="gray" stroke-dasharray="2 4"/>`,
    `<line class="guide-half" x1="${PAD}" x2="${CHART_W - PAD}" ` +
      `y1="${yScale(0.5)}" y2="${yScale(0.5)}" stroke="firebrick" stroke-dasharray="6 4"/>`,
    `<text x="${CHART_W - PAD + 4}" y="${yScale(alpha) + 4}" font-size="10">alpha</text>`,
    `<text x="${CHART_W - PAD + 4}" y="${yScale(0.5) + 4}" font-size="10">50%</text>`,
  ];
  for (const series of SERIES) {
    const points = rows
      .map((row, i) => `${sx(xs[i])},${yScale(row[series.key] as number)}`)
      .join(" ");
    parts.push(
      `<polyline class="series-${series.key}" points="${points}" ` +
        `fill="none" stroke="${series.color}" stroke-width="2"/>`,
    );
    for (let i = 0; i < rows.length; i++) {
      parts.push(
        `<circle class="pt-${series.key}" data-rate="${String(rows[i][series.key])}" ` +
          `cx="${sx(xs[i])}" cy="${yScale(rows[i][series.key] as number)}" r="3" ` +
          `fill="${series.color}"/>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** JSON export is the service response body, byte for byte. */
export function exportJson(rawBody: string): string {
  return rawBody;
}

const CSV_CONFIG_COLUMNS = [
  "n_per_group", "d_manip", "d_conf", "r",
  "alpha_balance", "alpha_outcome", "n_replicates", "seed",
] as const;

/** CSV projection of a run: one row per grid point. */
export function exportCsv(result: SimulateResponse["result"]): string {
  const rows = summaryRows(result);
  const header = [...CSV_CONFIG_COLUMNS, ...RATE_COLUMNS.map((c) => c.key)].join(",");
  const lines = rows.map((row) =>
    [
      ...CSV_CONFIG_COLUMNS.map((c) => String(row.config[c])),
      ...RATE_COLUMNS.map((c) => String(row[c.key])),
    ].join(","),
  );
  return [header, ...lines].join("\n") + "\n";
}
