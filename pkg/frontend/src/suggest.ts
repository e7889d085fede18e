/** Magic input box: free text in, candidate cards out. Applying a card
 * replaces the selected sentence through the server-side edit endpoint;
 * nothing persists until the author saves. */

import type { Candidate } from "./types.js";

export interface SuggestCallbacks {
  onApply(candidate: Candidate): void;
}

export function renderCandidates(
  container: HTMLElement,
  candidates: Candidate[],
  searched: boolean,
  cb: SuggestCallbacks,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  if (!candidates.length) {
    if (searched) {
      const hint = doc.createElement("p");
      hint.className = "hint";
      hint.textContent = "no match - try a simpler sentence, or edit the form directly";
      container.appendChild(hint);
    }
    return;
  }
  for (const candidate of candidates) {
    const card = doc.createElement("div");
    card.className = "card";
    const title = doc.createElement("strong");
    title.textContent = candidate.constructor_id;
    const body = doc.createElement("code");
    body.textContent = candidate.content;
    const score = doc.createElement("span");
    score.className = "score";
    score.textContent = candidate.score.toFixed(2);
    const apply = doc.createElement("button");
    apply.textContent = "apply";
    apply.addEventListener("click", () => cb.onApply(candidate));
    card.append(title, score, body, apply);
    if (candidate.diagnostics.length) {
      const note = doc.createElement("div");
      note.className = "diagnostic";
      note.textContent = candidate.diagnostics
        .map((d) => `${d.path}: ${d.code}`).join("; ");
      card.appendChild(note);
    }
    container.appendChild(card);
  }
}
