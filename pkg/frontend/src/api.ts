/** Typed client for the /v1 review service. All writes go through postDecision. */

import type {
  Conflict,
  CourseSummary,
  DecisionBody,
  DecisionResult,
  DetectionsResponse,
  LabelsResponse,
  SignalResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ReviewApi {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = (await res.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        /* non-JSON error body; keep statusText */
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  courses(): Promise<CourseSummary[]> {
    return this.request("/v1/courses");
  }

  signal(
    courseId: string,
    opts: { channel?: string; smoothed?: boolean; maxPoints?: number; t0?: number; t1?: number } = {},
  ): Promise<SignalResponse> {
    const q = new URLSearchParams({
      channel: opts.channel ?? "roll",
      smoothed: String(opts.smoothed ?? true),
      max_points: String(opts.maxPoints ?? 2000),
    });
    if (opts.t0 !== undefined) q.set("t0", String(opts.t0));
    if (opts.t1 !== undefined) q.set("t1", String(opts.t1));
    return this.request(`/v1/courses/${encodeURIComponent(courseId)}/signal?${q}`);
  }

  labels(courseId: string, rater: string): Promise<LabelsResponse> {
    const q = new URLSearchParams({ rater });
    return this.request(`/v1/courses/${encodeURIComponent(courseId)}/labels?${q}`);
  }

  detections(
    courseId: string,
    params: Partial<{ t1: number; t2: number; t3: number; t4: number }> = {},
  ): Promise<DetectionsResponse> {
    const q = new URLSearchParams();
    for (const [k, v] of Object.entries(params)) q.set(k, String(v));
    const suffix = q.size ? `?${q}` : "";
    return this.request(`/v1/courses/${encodeURIComponent(courseId)}/detections${suffix}`);
  }

  conflicts(status: "open" | "resolved" | "all" = "open", courseId?: string): Promise<Conflict[]> {
    const q = new URLSearchParams({ status });
    if (courseId !== undefined) q.set("course", courseId);
    return this.request<{ conflicts: Conflict[] }>(`/v1/conflicts?${q}`).then((r) => r.conflicts);
  }

  postDecision(conflictId: string, body: DecisionBody): Promise<DecisionResult> {
    return this.request(`/v1/conflicts/${encodeURIComponent(conflictId)}/decision`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
