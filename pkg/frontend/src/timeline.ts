/** Canvas timeline: decimated roll signal with label/detection markers.
 *
 * All geometry goes through TimeScale so marker positions and click
 * positions share one time<->pixel mapping; the mapping error is bounded
 * by one pixel's worth of seconds at the current zoom.
 */

import type { OverlayData, TimelineView } from "./state.js";
import type { SignalResponse } from "./types.js";

export class TimeScale {
  constructor(
    public t0: number,
    public t1: number,
    public widthPx: number,
  ) {}

  /** seconds covered by one pixel at this zoom */
  get quantum(): number {
    return (this.t1 - this.t0) / this.widthPx;
  }

  toX(t: number): number {
    return ((t - this.t0) / (this.t1 - this.t0)) * this.widthPx;
  }

  toT(x: number): number {
    return this.t0 + (x / this.widthPx) * (this.t1 - this.t0);
  }
}

export const MARKER_COLORS = {
  raterA: "#2b8cbe",
  raterB: "#e6842a",
  merged: "#7b3294",
  detections: "#1a9641",
  cursor: "#d7191c",
  signal: "#444444",
};

/** Subset of CanvasRenderingContext2D the renderer needs (test-stubbable). */
export interface DrawContext {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
}

export interface MarkerHit {
  kind: keyof typeof MARKER_COLORS;
  t: number;
  x: number;
}

export function valueRange(points: [number, number][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const [, v] of points) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!isFinite(lo) || lo === hi) return [lo - 1 || -1, (hi + 1) || 1];
  return [lo, hi];
}

/** Compute marker x-positions for every enabled overlay within the view. */
export function layoutMarkers(
  view: TimelineView,
  data: OverlayData,
  scale: TimeScale,
): MarkerHit[] {
  const out: MarkerHit[] = [];
  const push = (kind: MarkerHit["kind"], times: number[]) => {
    for (const t of times) {
      if (t >= view.visible[0] && t <= view.visible[1]) {
        out.push({ kind, t, x: scale.toX(t) });
      }
    }
  };
  if (view.overlays.raterA) push("raterA", data.raterA.map((l) => l.t));
  if (view.overlays.raterB) push("raterB", data.raterB.map((l) => l.t));
  if (view.overlays.merged) push("merged", data.merged.map((l) => l.t));
  if (view.overlays.detections) push("detections", data.detections);
  return out;
}

export function drawTimeline(
  ctx: DrawContext,
  widthPx: number,
  heightPx: number,
  view: TimelineView,
  signal: SignalResponse | null,
  data: OverlayData,
): TimeScale {
  const scale = new TimeScale(view.visible[0], view.visible[1], widthPx);
  ctx.clearRect(0, 0, widthPx, heightPx);

  if (signal && signal.points.length >= 2) {
    const [vlo, vhi] = valueRange(signal.points);
    const toY = (v: number) => heightPx - ((v - vlo) / (vhi - vlo)) * (heightPx - 20) - 10;
    ctx.strokeStyle = MARKER_COLORS.signal;
    ctx.lineWidth = 1;
    ctx.globalAlpha = 1;
    ctx.beginPath();
    let started = false;
    for (const [t, v] of signal.points) {
      if (t < view.visible[0] || t > view.visible[1]) continue;
      const x = scale.toX(t);
      const y = toY(v);
      if (!started) {
        ctx.moveTo(x, y);
        started = true;
      } else {
        ctx.lineTo(x, y);
      }
    }
    ctx.stroke();
  }

  for (const marker of layoutMarkers(view, data, scale)) {
    ctx.strokeStyle = MARKER_COLORS[marker.kind];
    ctx.lineWidth = marker.kind === "merged" ? 2 : 1;
    ctx.globalAlpha = 0.9;
    ctx.beginPath();
    ctx.moveTo(marker.x, 0);
    ctx.lineTo(marker.x, heightPx);
    ctx.stroke();
  }

  if (view.cursor !== null && view.cursor >= view.visible[0] && view.cursor <= view.visible[1]) {
    ctx.strokeStyle = MARKER_COLORS.cursor;
    ctx.lineWidth = 1;
    ctx.globalAlpha = 1;
    ctx.beginPath();
    ctx.moveTo(scale.toX(view.cursor), 0);
    ctx.lineTo(scale.toX(view.cursor), heightPx);
    ctx.stroke();
  }
  ctx.globalAlpha = 1;
  return scale;
}
