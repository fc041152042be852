/**
 * Client-side form validation.
 *
 * The bounds are never written by hand here: they come from the service
 * (GET /ranges at startup), whose values are generated from the same
 * constants the server validates against. Submit stays disabled while any
 * field is out of range.
 */

import type { PanelState, Ranges } from "./types";

export function validateField(
  name: string,
  value: number,
  ranges: Ranges,
): string | null {
  const spec = ranges.fields[name];
  if (!spec) return `unknown field ${name}`;
  if (!Number.isFinite(value)) return "must be a number";
  if (spec.integer && !Number.isInteger(value)) return "must be an integer";
  const inRange = spec.exclusive
    ? value > spec.min && value < spec.max
    : value >= spec.min && value <= spec.max;
  if (!inRange) {
    const open = spec.exclusive ? "(" : "[";
    const close = spec.exclusive ? ")" : "]";
    return `must lie in ${open}${spec.min}, ${spec.max}${close}`;
  }
  return null;
}

export interface ValidationResult {
  errors: Record<string, string>;
  canSubmit: boolean;
}

export function validatePanel(state: PanelState, ranges: Ranges): ValidationResult {
  const errors: Record<string, string> = {};
  for (const [name, value] of Object.entries(state.config)) {
    const problem = validateField(name, value, ranges);
    if (problem) errors[name] = problem;
  }
  if (state.gridAxis) {
    if (state.gridValues.length === 0) {
      errors.grid_values = "give at least one sweep value";
    }
    for (const v of state.gridValues) {
      const problem = validateField(state.gridAxis, v, ranges);
      if (problem) {
        errors.grid_values = `sweep value ${v}: ${problem}`;
        break;
      }
    }
  }
  const points = state.gridAxis ? Math.max(state.gridValues.length, 1) : 1;
  if (state.config.n_replicates * points > ranges.replicate_cap) {
    errors.n_replicates =
      `total replicates exceed the service cap of ${ranges.replicate_cap}`;
  }
  return { errors, canSubmit: Object.keys(errors).length === 0 };
}

/** Parse a comma-separated sweep list; invalid entries become NaN so the
 * range check reports them. */
export function parseGridValues(text: string): number[] {
  const trimmed = text.trim();
  if (!trimmed) return [];
  return trimmed.split(",").map((part) => Number(part.trim()));
}
