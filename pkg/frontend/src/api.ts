/**
 * Service client with latest-wins request handling: the UI keeps one
 * in-flight run per panel, and a re-submission marks earlier responses
 * stale so they are dropped instead of rendered out of order. The service
 * call itself is not cancelled; only the render is suppressed.
 */

import type { PanelState, SimulateResponse } from "./types";

export type RunOutcome =
  | { kind: "ok"; response: SimulateResponse; rawBody: string }
  | { kind: "stale" }
  | { kind: "field-error"; field: string | null; message: string }
  | { kind: "network-error"; message: string };

export function requestBody(state: PanelState, requestId: string): Record<string, unknown> {
  const body: Record<string, unknown> = { ...state.config, request_id: requestId };
  if (state.gridAxis) {
    body.grid_axis = state.gridAxis;
    body.grid_values = state.gridValues;
  }
  return body;
}

export class RunClient {
  private counter = 0;

  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  async submit(state: PanelState): Promise<RunOutcome> {
    this.counter += 1;
    const requestId = `run-${this.counter}`;
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/simulate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(requestBody(state, requestId)),
      });
    } catch (err) {
      return { kind: "network-error", message: String(err) };
    }
    const rawBody = await response.text();
    let payload: any;
    try {
      payload = JSON.parse(rawBody);
    } catch {
      return { kind: "network-error", message: "malformed response body" };
    }
    if (!response.ok) {
      const error = payload?.error ?? { field: null, message: `HTTP ${response.status}` };
      return { kind: "field-error", field: error.field, message: error.message };
    }
    if (payload.request_id !== requestId || this.counter !== Number(requestId.slice(4))) {
      // a newer submission superseded this one while it was in flight
      return { kind: "stale" };
    }
    return { kind: "ok", response: payload as SimulateResponse, rawBody };
  }
}
