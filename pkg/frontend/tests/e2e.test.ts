/** End-to-end reviewer flow: a fixture course with five open conflicts is
 * fully resolved through the keyboard-driven loop; the decision log gains
 * five entries, the merged ground truth reaches the expected count, and a
 * regenerated report (course listing + conflict queue) reflects it all.
 */

import { describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { handleKey } from "../src/keyboard.js";
import { ReviewSession } from "../src/state.js";
import { FakeReviewServer } from "./fake_server.js";

describe("reviewer end-to-end", () => {
  it("resolves all five conflicts via the keyboard flow", async () => {
    const server = new FakeReviewServer();
    const api = new ReviewApi("", server.fetch);
    const session = new ReviewSession(api, "third-rater");

    await session.loadCourses();
    expect(session.courses[0]!.open_conflicts).toBe(5);
    await session.loadCourseView("c1");
    await session.loadConflicts("c1");
    expect(session.openCards()).toHaveLength(5);
    expect(session.mergedCount).toBe(4); // only the clean pairs so far

    // 1) missed bite only rater A saw: it was real
    expect(session.currentCard()!.conflict.kind).toBe("missed_bite");
    await handleKey(session, { key: "a" });
    await handleKey(session, { key: "Enter" });

    // 2) missed bite only rater B saw: also real
    expect(session.currentCard()!.conflict.kind).toBe("missed_bite");
    await handleKey(session, { key: "b" });
    await handleKey(session, { key: "Enter" });

    // 3) time error: judge picks a custom time by clicking the timeline
    expect(session.currentCard()!.conflict.kind).toBe("time_error");
    await handleKey(session, { key: "c" });
    session.setCursor(84.7); // canvas click -> cursor -> custom time
    expect(session.currentCard()!.customTime).toBe(84.7);
    await handleKey(session, { key: "Enter" });

    // 4+5) identity/data-entry pair: food from A, entry fields from B
    expect(session.currentCard()!.conflict.kind).toBe("identity_error");
    await handleKey(session, { key: "a" });
    await handleKey(session, { key: "Enter" });
    expect(session.currentCard()!.conflict.kind).toBe("data_entry_error");
    await handleKey(session, { key: "b" });
    await handleKey(session, { key: "Enter" });

    // queue drained
    expect(session.openCards()).toHaveLength(0);
    expect(session.decisionsSubmitted).toBe(5);

    // decision log contains exactly the five entries, in order
    expect(server.decisionLog.map((d) => d.conflict_id)).toEqual([
      "c1-c0001", "c1-c0002", "c1-c0003", "c1-c0004", "c1-c0005",
    ]);
    expect(server.decisionLog.every((d) => d.judge_id === "third-rater")).toBe(true);

    // merged ground truth: 4 clean + 2 missed + 1 custom-time + 1 pair = 8
    expect(session.mergedCount).toBe(8);
    const merged = await api.labels("c1", "merged");
    expect(merged.labels).toHaveLength(8);
    expect(merged.labels.map((l) => l.t)).toContain(84.7);
    expect(merged.open_conflicts).toBe(0);

    // regenerated report reflects the resolutions
    const courses = await api.courses();
    expect(courses[0]!.open_conflicts).toBe(0);
    expect(await api.conflicts("open")).toHaveLength(0);
    expect(await api.conflicts("resolved")).toHaveLength(5);

    // the UI wrote ground truth only through the decision endpoint
    const writes = server.requests.filter((r) => r.startsWith("POST"));
    expect(writes).toHaveLength(5);
    expect(writes.every((r) => /\/v1\/conflicts\/.+\/decision$/.test(r))).toBe(true);
  });

  it("a partially decided pair stays out of the merged truth", async () => {
    const server = new FakeReviewServer();
    const session = new ReviewSession(new ReviewApi("", server.fetch), "third-rater");
    await session.loadCourses();
    await session.loadCourseView("c1");
    await session.loadConflicts("c1");

    // jump to the identity conflict of the pair and decide only that one
    while (session.currentCard()!.conflict.kind !== "identity_error") {
      session.nextConflict();
    }
    await handleKey(session, { key: "a" });
    await handleKey(session, { key: "Enter" });
    expect(server.decisionLog).toHaveLength(1);
    expect(session.mergedCount).toBe(4); // pair not materialized yet

    expect(session.currentCard()!.conflict.kind).toBe("data_entry_error");
    await handleKey(session, { key: "b" });
    await handleKey(session, { key: "Enter" });
    expect(session.mergedCount).toBe(5);
  });
});
