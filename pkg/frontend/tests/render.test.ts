import { describe, expect, it } from "vitest";

import { exportCsv, exportJson, renderChart, renderRateTable, summaryRows } from "../src/render";
import type { SummaryDict } from "../src/types";

function mockSummary(overrides: Partial<SummaryDict> = {}): SummaryDict {
  return {
    config: {
      n_per_group: 20, d_manip: 2, d_conf: 1, r: 0.75,
      alpha_balance: 0.05, alpha_outcome: 0.05, n_replicates: 10000, seed: 0,
    },
    n_replicates: 10000,
    flag_rate: 0.8691,
    unnecessary_flag_rate: 0.8644,
    naive_power_or_type1: 1.0,
    adjusted_power_or_type1: 0.9876,
    mean_naive_estimate: 2.7512345678901234,
    mean_adjusted_estimate: 1.9987654321098765,
    ...overrides,
  };
}

describe("renderRateTable", () => {
  it("shows every rate field verbatim", () => {
    const summary = mockSummary();
    const html = renderRateTable([summary], null);
    for (const key of [
      "flag_rate", "unnecessary_flag_rate", "naive_power_or_type1",
      "adjusted_power_or_type1", "mean_naive_estimate", "mean_adjusted_estimate",
    ] as const) {
      expect(html).toContain(
        `<td data-field="${key}">${String(summary[key])}</td>`,
      );
    }
  });

  it("labels grid rows by the axis value", () => {
    const rows = [
      mockSummary({ config: { ...mockSummary().config, d_conf: 0.5 } }),
      mockSummary({ config: { ...mockSummary().config, d_conf: 2 } }),
    ];
    const html = renderRateTable(rows, "d_conf");
    expect(html).toContain("<td>0.5</td>");
    expect(html).toContain("<td>2</td>");
  });
});

describe("renderChart", () => {
  it("draws guide lines at alpha and at 50%", () => {
    const svg = renderChart([mockSummary()], null);
    expect(svg).toContain("guide-alpha");
    expect(svg).toContain("guide-half");
  });

  it("places the unnecessary-rejection point above the 50% guide line", () => {
    const svg = renderChart([mockSummary()], null);
    const half = Number(svg.match(/guide-half[^/]*y1="([\d.]+)"/)![1]);
    const point = svg.match(/pt-unnecessary_flag_rate[^/]*cy="([\d.]+)"/)!;
    // SVG y grows downward, so "above the line" means a smaller cy
    expect(Number(point[1])).toBeLessThan(half);
    expect(svg).toContain(`data-rate="${String(mockSummary().unnecessary_flag_rate)}"`);
  });

  it("stays flat-vs-rising when sweeping r with no manipulation", () => {
    const rows = [0, 0.5, 1].map((r, i) =>
      mockSummary({
        config: { ...mockSummary().config, d_manip: 0, d_conf: 2, r },
        naive_power_or_type1: 0.05 + 0.4 * i,
        adjusted_power_or_type1: 0.05,
      }),
    );
    const svg = renderChart(rows, "r");
    const naive = [...svg.matchAll(/pt-naive_power_or_type1[^/]*cy="([\d.]+)"/g)]
      .map((m) => Number(m[1]));
    expect(naive[0]).toBeGreaterThan(naive[1]);
    expect(naive[1]).toBeGreaterThan(naive[2]);
  });
});

describe("exports", () => {
  it("JSON export is the raw response body untouched", () => {
    const raw = '{"request_id":"run-1","wall_time_s":1.25,"result":{}}';
    expect(exportJson(raw)).toBe(raw);
  });

  it("CSV export has one row per grid point", () => {
    const rows = [
      mockSummary({ config: { ...mockSummary().config, d_conf: 0.5 } }),
      mockSummary({ config: { ...mockSummary().config, d_conf: 2 } }),
    ];
    const csv = exportCsv(rows);
    const lines = csv.trim().split("\n");
    expect(lines).toHaveLength(3);
    expect(lines[0].split(",")).toContain("flag_rate");
    expect(lines[1]).toContain(String(rows[0].flag_rate));
  });

  it("summaryRows normalizes scalar and array results", () => {
    const one = mockSummary();
    expect(summaryRows(one)).toEqual([one]);
    expect(summaryRows([one, one])).toHaveLength(2);
  });
});
