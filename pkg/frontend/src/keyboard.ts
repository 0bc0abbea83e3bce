/** Keyboard-driven review: map key events to session intents.
 *
 *   a        keep rater A's record          b    keep rater B's record
 *   x        discard (not a real bite)      c    custom (click timeline to set time)
 *   Enter    submit the chosen resolution   n/p  next / previous open conflict
 *   1..4     toggle overlays (A, B, merged, detections)
 *   arrows   pan, +/- zoom, f focus the conflict's excerpt
 */

import type { ReviewSession } from "./state.js";

export interface KeyStroke {
  key: string;
  ctrlKey?: boolean;
  metaKey?: boolean;
  altKey?: boolean;
}

export type Intent =
  | { kind: "choose"; resolution: "keep_a" | "keep_b" | "custom" | "discard" }
  | { kind: "submit" }
  | { kind: "next" }
  | { kind: "prev" }
  | { kind: "toggle"; overlay: "raterA" | "raterB" | "merged" | "detections" }
  | { kind: "pan"; fraction: number }
  | { kind: "zoom"; factor: number }
  | { kind: "focus" };

export function intentFor(stroke: KeyStroke): Intent | null {
  if (stroke.ctrlKey || stroke.metaKey || stroke.altKey) return null;
  switch (stroke.key) {
    case "a": return { kind: "choose", resolution: "keep_a" };
    case "b": return { kind: "choose", resolution: "keep_b" };
    case "x": return { kind: "choose", resolution: "discard" };
    case "c": return { kind: "choose", resolution: "custom" };
    case "Enter": return { kind: "submit" };
    case "n": return { kind: "next" };
    case "p": return { kind: "prev" };
    case "1": return { kind: "toggle", overlay: "raterA" };
    case "2": return { kind: "toggle", overlay: "raterB" };
    case "3": return { kind: "toggle", overlay: "merged" };
    case "4": return { kind: "toggle", overlay: "detections" };
    case "ArrowLeft": return { kind: "pan", fraction: -0.25 };
    case "ArrowRight": return { kind: "pan", fraction: 0.25 };
    case "+":
    case "=": return { kind: "zoom", factor: 0.5 };
    case "-": return { kind: "zoom", factor: 2.0 };
    case "f": return { kind: "focus" };
    default: return null;
  }
}

/** Apply one keystroke to the session. Returns the intent handled (or null). */
export async function handleKey(session: ReviewSession, stroke: KeyStroke): Promise<Intent | null> {
  const intent = intentFor(stroke);
  if (intent === null) return null;
  switch (intent.kind) {
    case "choose":
      session.chooseResolution(intent.resolution);
      break;
    case "submit":
      await session.submitDecision();
      break;
    case "next":
      session.nextConflict();
      session.focusCurrentExcerpt();
      break;
    case "prev": {
      // walk backwards to the previous open card
      const open = session.queue
        .map((c, i) => ({ c, i }))
        .filter(({ c }) => !c.resolvedRemotely);
      if (open.length > 0) {
        const before = open.filter(({ i }) => i < session.current);
        session.current = (before.length ? before[before.length - 1] : open[open.length - 1])!.i;
        session.focusCurrentExcerpt();
      }
      break;
    }
    case "toggle":
      session.toggleOverlay(intent.overlay);
      break;
    case "pan": {
      const view = session.view;
      if (view) session.pan((view.visible[1] - view.visible[0]) * intent.fraction);
      break;
    }
    case "zoom":
      session.zoom(intent.factor);
      break;
    case "focus":
      session.focusCurrentExcerpt();
      break;
  }
  return intent;
}
