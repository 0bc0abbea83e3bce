/** DOM bootstrap: wires the review session to the page.
 *
 * Expects the bitewatch service on the same origin or at ?api=<base-url>.
 */

import { ReviewApi } from "./api.js";
import { handleKey } from "./keyboard.js";
import { ReviewSession } from "./state.js";
import { drawTimeline, MARKER_COLORS, TimeScale } from "./timeline.js";
import type { CardState } from "./state.js";
import type { BiteLabel } from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new ReviewApi(params.get("api") ?? "");
const session = new ReviewSession(api, params.get("judge") ?? "reviewer");

const el = {
  courses: document.getElementById("courses") as HTMLSelectElement,
  canvas: document.getElementById("timeline") as HTMLCanvasElement,
  card: document.getElementById("card") as HTMLDivElement,
  banner: document.getElementById("banner") as HTMLDivElement,
  status: document.getElementById("status") as HTMLDivElement,
  legend: document.getElementById("legend") as HTMLDivElement,
  video: document.getElementById("video-slot") as HTMLDivElement,
};

let scale: TimeScale | null = null;

function fmt(t: number): string {
  return t.toFixed(3);
}

function labelRow(side: string, label: BiteLabel | null): string {
  if (!label) return `<tr><th>${side}</th><td colspan="5">(no label)</td></tr>`;
  return (
    `<tr><th>${side}</th><td>${fmt(label.t)}s</td><td>${label.food_id}</td>` +
    `<td>${label.hand}</td><td>${label.utensil}</td><td>${label.container}</td></tr>`
  );
}

function renderCard(card: CardState | null): void {
  if (!card) {
    el.card.innerHTML = "<p>No open conflicts. 🎉</p>";
    return;
  }
  const c = card.conflict;
  const chosen = (r: string) => (card.resolution === r ? "chosen" : "");
  const customNote =
    card.resolution === "custom"
      ? card.customTime === null
        ? " — click the timeline to set the time"
        : ` — t=${fmt(card.customTime)}s`
      : "";
  el.card.innerHTML = `
    <h3>${c.kind.replace(/_/g, " ")} <small>${c.conflict_id}</small></h3>
    <table>
      <tr><th></th><th>t</th><th>food</th><th>hand</th><th>utensil</th><th>container</th></tr>
      ${labelRow("rater A", c.a)}
      ${labelRow("rater B", c.b)}
    </table>
    <div class="choices">
      <button data-r="keep_a" class="${chosen("keep_a")}" ${c.a ? "" : "disabled"}>keep A <kbd>a</kbd></button>
      <button data-r="keep_b" class="${chosen("keep_b")}" ${c.b ? "" : "disabled"}>keep B <kbd>b</kbd></button>
      <button data-r="custom" class="${chosen("custom")}">custom time <kbd>c</kbd>${customNote}</button>
      <button data-r="discard" class="${chosen("discard")}">discard <kbd>x</kbd></button>
      <button id="submit" ${session.canSubmit() ? "" : "disabled"}>submit <kbd>Enter</kbd></button>
    </div>`;
  for (const btn of el.card.querySelectorAll<HTMLButtonElement>("button[data-r]")) {
    btn.addEventListener("click", () => {
      session.chooseResolution(btn.dataset.r as never);
    });
  }
  el.card.querySelector<HTMLButtonElement>("#submit")?.addEventListener("click", () => {
    void session.submitDecision();
  });
}

function render(): void {
  el.banner.textContent = session.banner ?? "";
  el.banner.style.display = session.banner ? "block" : "none";
  const open = session.openCards().length;
  el.status.textContent =
    `${open} open conflicts | ${session.decisionsSubmitted} decided | ` +
    `${session.mergedCount} merged bites`;
  if (session.view) {
    const ctx = el.canvas.getContext("2d");
    if (ctx) {
      scale = drawTimeline(
        ctx, el.canvas.width, el.canvas.height, session.view, session.signal, session.overlayData,
      );
    }
  }
  renderCard(session.currentCard());
}

function renderLegend(): void {
  el.legend.innerHTML = (["raterA", "raterB", "merged", "detections"] as const)
    .map(
      (k, i) =>
        `<span style="border-left: 10px solid ${MARKER_COLORS[k]}; padding-left:4px">` +
        `${k} <kbd>${i + 1}</kbd></span>`,
    )
    .join(" ");
}

async function openCourse(courseId: string): Promise<void> {
  try {
    await session.loadCourseView(courseId);
    await session.loadConflicts(courseId);
    session.focusCurrentExcerpt();
    const course = session.courses.find((c) => c.course_id === courseId);
    el.video.innerHTML = course?.video_url
      ? `<video controls src="${course.video_url}" width="480"></video>`
      : "";
  } catch (err) {
    session.banner = err instanceof Error ? err.message : String(err);
    render();
  }
}

async function boot(): Promise<void> {
  session.onChange = render;
  renderLegend();
  try {
    const courses = await session.loadCourses();
    el.courses.innerHTML = courses
      .map(
        (c) =>
          `<option value="${c.course_id}">${c.course_id} ` +
          `(${c.open_conflicts} open)</option>`,
      )
      .join("");
    el.courses.addEventListener("change", () => void openCourse(el.courses.value));
    const first = courses[0];
    if (first) await openCourse(first.course_id);
  } catch (err) {
    session.banner = err instanceof Error ? err.message : String(err);
    render();
  }
}

el.canvas.addEventListener("click", (event) => {
  if (!scale || !session.view) return;
  const rect = el.canvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * el.canvas.width;
  session.setCursor(scale.toT(x));
});

document.addEventListener("keydown", (event) => {
  const target = event.target as HTMLElement | null;
  if (target && (target.tagName === "INPUT" || target.tagName === "SELECT")) return;
  void handleKey(session, event).then((intent) => {
    if (intent) event.preventDefault();
  });
});

void boot();
