/** Live preview panes: always the server's render output, verbatim. */

import type { EditorState, PreviewPane } from "./state.js";

export function renderPreviews(container: HTMLElement, state: EditorState): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  for (const lang of state.languages) {
    const pane = state.previews[lang] ?? { status: "pending" } satisfies PreviewPane;
    const section = doc.createElement("article");
    section.className = `pane pane-${pane.status}`;
    section.dataset.lang = lang;

    const heading = doc.createElement("h3");
    heading.textContent = lang;
    section.appendChild(heading);

    if (pane.status === "error") {
      const chip = doc.createElement("span");
      chip.className = "chip error";
      chip.textContent = pane.error ?? "render failed";
      section.appendChild(chip);
    }
    if (pane.outcome) {
      const text = doc.createElement("p");
      text.className = "preview-text";
      text.textContent = pane.outcome.text;
      section.appendChild(text);
      for (const omission of pane.outcome.omissions) {
        const marker = doc.createElement("div");
        marker.className = "omission";
        marker.textContent = `omitted ${omission.path}: ${omission.reason}`;
        section.appendChild(marker);
      }
    }
    if (pane.status === "pending") {
      section.classList.add("stale");
    }
    container.appendChild(section);
  }
  if (!state.languages.length) {
    container.replaceChildren();
  }
}
