/** Shapes of the simulation service's JSON API. */

export interface SimulationConfig {
  n_per_group: number;
  d_manip: number;
  d_conf: number;
  r: number;
  alpha_balance: number;
  alpha_outcome: number;
  n_replicates: number;
  seed: number;
}

export interface SummaryDict {
  config: SimulationConfig;
  n_replicates: number;
  flag_rate: number;
  unnecessary_flag_rate: number;
  naive_power_or_type1: number;
  adjusted_power_or_type1: number;
  mean_naive_estimate: number;
  mean_adjusted_estimate: number;
  wall_time_s?: number;
}

export interface SimulateResponse {
  request_id: string;
  wall_time_s: number;
  result: SummaryDict | SummaryDict[];
}

export interface FieldError {
  error: { field: string | null; message: string };
}

export interface FieldRange {
  min: number;
  max: number;
  integer: boolean;
  exclusive?: boolean;
}

export interface Ranges {
  fields: Record<string, FieldRange>;
  replicate_cap: number;
}

export type GridAxis = "n_per_group" | "d_manip" | "d_conf" | "r";

export interface PanelState {
  config: SimulationConfig;
  gridAxis: GridAxis | null;
  gridValues: number[];
}
