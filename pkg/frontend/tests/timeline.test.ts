import { describe, expect, it } from "vitest";

import type { OverlayData, TimelineView } from "../src/state.js";
import { drawTimeline, layoutMarkers, TimeScale, valueRange } from "../src/timeline.js";
import type { DrawContext } from "../src/timeline.js";
import type { SignalResponse } from "../src/types.js";

function view(overrides: Partial<TimelineView> = {}): TimelineView {
  return {
    courseId: "c1",
    bounds: [0, 120],
    visible: [0, 120],
    overlays: { raterA: true, raterB: true, merged: true, detections: false },
    cursor: null,
    ...overrides,
  };
}

function overlayData(): OverlayData {
  const label = (t: number, rater: string) => ({
    t, food_id: "f", hand: "right", utensil: "fork", container: "plate", rater_id: rater,
  });
  return {
    raterA: [label(10, "rater_a"), label(50, "rater_a")],
    raterB: [label(10.4, "rater_b")],
    merged: [label(10.2, "merged")],
    detections: [9.9, 49.8],
  };
}

class RecordingContext implements DrawContext {
  strokeStyle = "";
  lineWidth = 1;
  globalAlpha = 1;
  ops: string[] = [];
  clearRect(): void { this.ops.push("clear"); }
  beginPath(): void { this.ops.push("begin"); }
  moveTo(x: number, y: number): void { this.ops.push(`move ${x.toFixed(1)},${y.toFixed(1)}`); }
  lineTo(x: number, y: number): void { this.ops.push(`line ${x.toFixed(1)},${y.toFixed(1)}`); }
  stroke(): void { this.ops.push(`stroke ${this.strokeStyle}`); }
}

describe("TimeScale", () => {
  it("round-trips times within one pixel quantum", () => {
    const scale = new TimeScale(10, 130, 1200);
    for (const t of [10, 33.333, 77.7777, 129.999]) {
      const back = scale.toT(scale.toX(t));
      expect(Math.abs(back - t)).toBeLessThanOrEqual(scale.quantum);
    }
    expect(scale.quantum).toBeCloseTo(0.1);
  });

  it("maps range endpoints to canvas edges", () => {
    const scale = new TimeScale(0, 60, 600);
    expect(scale.toX(0)).toBe(0);
    expect(scale.toX(60)).toBe(600);
    expect(scale.toT(300)).toBeCloseTo(30);
  });
});

describe("layoutMarkers", () => {
  it("marker x positions equal served label times within a pixel quantum", () => {
    const v = view();
    const scale = new TimeScale(v.visible[0], v.visible[1], 1200);
    const markers = layoutMarkers(v, overlayData(), scale);
    for (const m of markers) {
      expect(Math.abs(scale.toT(m.x) - m.t)).toBeLessThanOrEqual(scale.quantum);
    }
  });

  it("respects overlay toggles without touching other layers", () => {
    const data = overlayData();
    const off = view({ overlays: { raterA: true, raterB: false, merged: true, detections: false } });
    const scale = new TimeScale(0, 120, 1200);
    const kinds = layoutMarkers(off, data, scale).map((m) => m.kind);
    expect(kinds).toContain("raterA");
    expect(kinds).toContain("merged");
    expect(kinds).not.toContain("raterB");
    expect(kinds).not.toContain("detections");

    const on = view({ overlays: { raterA: true, raterB: false, merged: true, detections: true } });
    expect(layoutMarkers(on, data, scale).map((m) => m.kind)).toContain("detections");
  });

  it("only markers inside the visible range are laid out", () => {
    const zoomed = view({ visible: [40, 60] });
    const scale = new TimeScale(40, 60, 1200);
    const times = layoutMarkers(zoomed, overlayData(), scale).map((m) => m.t);
    expect(times).toEqual([50]);
  });
});

describe("drawTimeline", () => {
  const signal: SignalResponse = {
    course_id: "c1",
    channel: "roll",
    smoothed: true,
    n_total: 1801,
    points: Array.from({ length: 121 }, (_, i) => [i, Math.sin(i)] as [number, number]),
  };

  it("draws the signal polyline and a stroke per marker", () => {
    const ctx = new RecordingContext();
    drawTimeline(ctx, 1200, 260, view(), signal, overlayData());
    const strokes = ctx.ops.filter((op) => op.startsWith("stroke"));
    // 1 signal + 2 raterA + 1 raterB + 1 merged (detections off)
    expect(strokes).toHaveLength(5);
    expect(ctx.ops[0]).toBe("clear");
  });

  it("draws the cursor line when set and visible", () => {
    const ctx = new RecordingContext();
    drawTimeline(ctx, 1200, 260, view({ cursor: 60 }), signal, overlayData());
    const strokes = ctx.ops.filter((op) => op.startsWith("stroke"));
    expect(strokes).toHaveLength(6);
  });

  it("handles an empty course without crashing", () => {
    const ctx = new RecordingContext();
    const empty: OverlayData = { raterA: [], raterB: [], merged: [], detections: [] };
    const scale = drawTimeline(ctx, 1200, 260, view(), null, empty);
    expect(ctx.ops[0]).toBe("clear");
    expect(scale.quantum).toBeCloseTo(0.1);
  });
});

describe("valueRange", () => {
  it("spans the data and survives degenerate input", () => {
    expect(valueRange([[0, -3], [1, 7]])).toEqual([-3, 7]);
    const [lo, hi] = valueRange([[0, 5], [1, 5]]);
    expect(lo).toBeLessThan(hi);
  });
});
