/** Review-session state: timeline view, conflict queue, decision lifecycle.
 *
 * The session never mutates ground truth locally; the only write path is
 * ReviewApi.postDecision, and every read reflects what the service returns.
 */

import { ApiError, ReviewApi } from "./api.js";
import type {
  BiteLabel,
  Conflict,
  CourseSummary,
  Resolution,
  SignalResponse,
} from "./types.js";

export interface TimelineView {
  courseId: string;
  /** course bounds in seconds, from the served signal */
  bounds: [number, number];
  /** visible time range; always clamped inside bounds */
  visible: [number, number];
  overlays: { raterA: boolean; raterB: boolean; merged: boolean; detections: boolean };
  cursor: number | null;
}

export interface CardState {
  conflict: Conflict;
  resolution: Resolution | null;
  customTime: number | null;
  submitting: boolean;
  resolvedRemotely: boolean;
}

export interface OverlayData {
  raterA: BiteLabel[];
  raterB: BiteLabel[];
  merged: BiteLabel[];
  detections: number[];
}

const MIN_SPAN_S = 1.0;

export function clampRange(
  range: [number, number],
  bounds: [number, number],
): [number, number] {
  const span = Math.min(Math.max(range[1] - range[0], MIN_SPAN_S), bounds[1] - bounds[0]);
  let lo = Math.max(range[0], bounds[0]);
  if (lo + span > bounds[1]) lo = bounds[1] - span;
  return [lo, lo + span];
}

export class ReviewSession {
  view: TimelineView | null = null;
  signal: SignalResponse | null = null;
  overlayData: OverlayData = { raterA: [], raterB: [], merged: [], detections: [] };
  queue: CardState[] = [];
  current = 0;
  courses: CourseSummary[] = [];
  judgeId: string;
  mergedCount = 0;
  decisionsSubmitted = 0;
  banner: string | null = null;
  onChange: () => void = () => {};

  /** counts network fetches of the signal itself (overlay toggles must not add to it) */
  signalFetches = 0;

  constructor(
    private api: ReviewApi,
    judgeId = "reviewer",
  ) {
    this.judgeId = judgeId;
  }

  private emit() {
    this.onChange();
  }

  async loadCourses(): Promise<CourseSummary[]> {
    this.courses = await this.api.courses();
    this.emit();
    return this.courses;
  }

  /** Fetch the decimated smoothed roll signal plus all overlays for a course. */
  async loadCourseView(courseId: string): Promise<TimelineView> {
    const signal = await this.api.signal(courseId, { channel: "roll", smoothed: true });
    this.signalFetches += 1;
    this.signal = signal;
    const course = this.courses.find((c) => c.course_id === courseId);
    const first = signal.points[0]?.[0] ?? 0;
    const last = signal.points[signal.points.length - 1]?.[0] ?? course?.duration_s ?? 0;
    const bounds: [number, number] = [first, Math.max(last, first + MIN_SPAN_S)];
    this.view = {
      courseId,
      bounds,
      visible: [...bounds] as [number, number],
      overlays: { raterA: true, raterB: true, merged: true, detections: false },
      cursor: null,
    };

    const raters = course?.raters ?? [];
    const [a, b, merged, detections] = await Promise.all([
      raters[0] ? this.api.labels(courseId, raters[0]) : Promise.resolve(null),
      raters[1] ? this.api.labels(courseId, raters[1]) : Promise.resolve(null),
      this.api.labels(courseId, "merged"),
      this.api.detections(courseId),
    ]);
    this.overlayData = {
      raterA: a?.labels ?? [],
      raterB: b?.labels ?? [],
      merged: merged.labels,
      detections: detections.detections,
    };
    this.mergedCount = merged.labels.length;
    this.emit();
    return this.view;
  }

  /** Flip one overlay; purely local, never refetches the signal. */
  toggleOverlay(name: keyof TimelineView["overlays"]): void {
    if (!this.view) return;
    this.view.overlays[name] = !this.view.overlays[name];
    this.emit();
  }

  pan(deltaS: number): void {
    if (!this.view) return;
    const [lo, hi] = this.view.visible;
    this.view.visible = clampRange([lo + deltaS, hi + deltaS], this.view.bounds);
    this.emit();
  }

  zoom(factor: number, centerS?: number): void {
    if (!this.view) return;
    const [lo, hi] = this.view.visible;
    const c = centerS ?? (lo + hi) / 2;
    const span = (hi - lo) * factor;
    this.view.visible = clampRange([c - span / 2, c + span / 2], this.view.bounds);
    this.emit();
  }

  setCursor(t: number | null): void {
    if (!this.view) return;
    this.view.cursor = t;
    const card = this.currentCard();
    if (card && t !== null && card.resolution === "custom") {
      card.customTime = t;
    }
    this.emit();
  }

  async loadConflicts(courseId?: string): Promise<void> {
    const conflicts = await this.api.conflicts("open", courseId);
    this.queue = conflicts.map((conflict) => ({
      conflict,
      resolution: null,
      customTime: null,
      submitting: false,
      resolvedRemotely: false,
    }));
    this.current = 0;
    this.emit();
  }

  openCards(): CardState[] {
    return this.queue.filter((c) => !c.resolvedRemotely);
  }

  currentCard(): CardState | null {
    return this.queue[this.current] ?? null;
  }

  nextConflict(): CardState | null {
    for (let step = 1; step <= this.queue.length; step++) {
      const i = (this.current + step) % this.queue.length;
      const card = this.queue[i];
      if (card && !card.resolvedRemotely) {
        this.current = i;
        this.emit();
        return card;
      }
    }
    return null;
  }

  /** Jump the visible range to the current conflict's excerpt window. */
  focusCurrentExcerpt(): void {
    const card = this.currentCard();
    if (!card || !this.view) return;
    const { start, end } = card.conflict.excerpt;
    this.view.visible = clampRange([start, end], this.view.bounds);
    this.emit();
  }

  chooseResolution(resolution: Resolution): void {
    const card = this.currentCard();
    if (!card || card.resolvedRemotely) return;
    card.resolution = resolution;
    if (resolution !== "custom") card.customTime = null;
    this.emit();
  }

  /** Submit button state: a complete choice is required (custom needs a time). */
  canSubmit(card: CardState | null = this.currentCard()): boolean {
    if (!card || card.submitting || card.resolvedRemotely) return false;
    if (card.resolution === null) return false;
    if (card.resolution === "keep_a" && card.conflict.a === null) return false;
    if (card.resolution === "keep_b" && card.conflict.b === null) return false;
    if (card.resolution === "custom" && card.customTime === null) return false;
    return true;
  }

  /** POST the current card's decision; on success advance to the next open conflict. */
  async submitDecision(): Promise<boolean> {
    const card = this.currentCard();
    if (!card || !this.canSubmit(card)) return false;
    card.submitting = true;
    this.emit();
    try {
      const result = await this.api.postDecision(card.conflict.conflict_id, {
        resolution: card.resolution as Resolution,
        judge_id: this.judgeId,
        fields: card.resolution === "custom" ? { t: card.customTime } : null,
      });
      card.resolvedRemotely = true;
      this.decisionsSubmitted += 1;
      this.mergedCount = result.merged_count;
      this.banner = null;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone already decided this conflict: refresh the card as resolved
        card.resolvedRemotely = true;
        this.banner = `conflict ${card.conflict.conflict_id} was already resolved`;
      } else {
        // offline or rejected: keep all local state, surface the error
        card.submitting = false;
        this.banner = err instanceof Error ? err.message : String(err);
        this.emit();
        return false;
      }
    }
    card.submitting = false;
    await this.refreshMerged();
    this.nextConflict();
    this.emit();
    return true;
  }

  /** Re-read merged ground truth so the overlay reflects the decision log. */
  async refreshMerged(): Promise<void> {
    if (!this.view) return;
    try {
      const merged = await this.api.labels(this.view.courseId, "merged");
      this.overlayData.merged = merged.labels;
      this.mergedCount = merged.labels.length;
    } catch (err) {
      this.banner = err instanceof Error ? err.message : String(err);
    }
    this.emit();
  }
}
