/** JSON shapes served by the bitewatch /v1 API. */

export interface CourseSummary {
  course_id: string;
  participant_id: string;
  n_samples: number;
  duration_s: number;
  raters: string[];
  menu: string[];
  open_conflicts: number;
  video_url?: string;
}

export interface SignalResponse {
  course_id: string;
  channel: string;
  smoothed: boolean;
  n_total: number;
  points: [number, number][];
}

export interface BiteLabel {
  t: number;
  food_id: string;
  hand: string;
  utensil: string;
  container: string;
  rater_id: string;
}

export interface LabelsResponse {
  course_id: string;
  rater: string;
  labels: BiteLabel[];
  open_conflicts?: number;
}

export interface DetectionsResponse {
  course_id: string;
  params: { t1: number; t2: number; t3: number; t4: number };
  detections: number[];
}

export type ConflictKind =
  | "missed_bite"
  | "time_error"
  | "identity_error"
  | "data_entry_error";

export interface Conflict {
  conflict_id: string;
  kind: ConflictKind;
  course_id: string;
  a: BiteLabel | null;
  b: BiteLabel | null;
  pair_id: string | null;
  status: "open" | "resolved";
  excerpt: { channel: string; smoothed: boolean; start: number; end: number };
}

export type Resolution = "keep_a" | "keep_b" | "custom" | "discard";

export interface DecisionBody {
  resolution: Resolution;
  judge_id: string;
  fields?: Record<string, unknown> | null;
}

export interface DecisionResult {
  conflict_id: string;
  status: string;
  merged_count: number;
}
