/** Editor bootstrap and wiring.
 *
 * Layout: magic input box on the left, the form for the selected
 * sentence top right, live preview panes per language bottom right.
 * The client never renders text itself; every pane shows what the
 * server returned for the current content id.
 */

import { ApiClient, ApiError } from "./api.js";
import { fieldModels, renderForm } from "./form.js";
import { renderPreviews } from "./preview.js";
import {
  EditorState, applyContent, beginRender, commitRender, initialState, redo,
  sentences, setLanguages, setSuggestions, undo,
} from "./state.js";
import { renderCandidates } from "./suggest.js";
import type { Candidate, ConstructorDoc, EditValue } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

function apiBase(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return override ?? "http://127.0.0.1:8000";
}

export class EditorApp {
  state: EditorState;
  catalog: ConstructorDoc[] = [];
  selectedSentence = 0;
  searched = false;

  constructor(private readonly api: ApiClient, contentId: string) {
    this.state = initialState(contentId, []);
  }

  async boot(): Promise<void> {
    const languages = await this.api.languages();
    this.state = setLanguages(this.state, languages);
    this.catalog = await this.api.constructors();
    const content = await this.api.getContent(this.state.contentId);
    this.state = applyContent(this.state, content, { pushUndo: false });
    this.renderAll();
    await this.refreshPreviews();
  }

  private renderAll(): void {
    this.renderSentenceTabs();
    this.renderFormRegion();
    renderPreviews(el("previews"), this.state);
    this.renderLanguageToggles();
    el<HTMLButtonElement>("undo").toggleAttribute("disabled",
      this.state.undoStack.length === 0);
    el<HTMLButtonElement>("redo").toggleAttribute("disabled",
      this.state.redoStack.length === 0);
    el("notation").textContent = this.state.text;
  }

  private renderSentenceTabs(): void {
    const tabs = el("sentences");
    tabs.replaceChildren();
    sentences(this.state.tree).forEach(({ node }, i) => {
      const tab = document.createElement("button");
      tab.textContent = `${i + 1}: ${node.constructor}`;
      tab.className = i === this.selectedSentence ? "tab active" : "tab";
      tab.addEventListener("click", () => {
        this.selectedSentence = i;
        this.renderAll();
      });
      tabs.appendChild(tab);
    });
  }

  private renderFormRegion(): void {
    const all = sentences(this.state.tree);
    const selected = all[this.selectedSentence] ?? all[0];
    const container = el("form-fields");
    if (!selected) {
      container.replaceChildren();
      return;
    }
    const fields = fieldModels(selected.node, selected.path, this.catalog,
      this.state.diagnostics);
    renderForm(container, fields, {
      onEdit: (path, value) => void this.edit(path, value),
      searchItems: (q) => this.api.searchItems(q, "en"),
    });
  }

  private renderLanguageToggles(): void {
    // checkboxes are created once per language set
    const box = el("language-toggles");
    if (box.childElementCount) return;
    for (const lang of this.state.languages) {
      const label = document.createElement("label");
      const input = document.createElement("input");
      input.type = "checkbox";
      input.checked = true;
      input.addEventListener("change", () => {
        const active = [...box.querySelectorAll("input")]
          .filter((i) => (i as HTMLInputElement).checked)
          .map((i) => (i.parentElement as HTMLElement).dataset.lang as string);
        this.state = setLanguages(this.state, active);
        renderPreviews(el("previews"), this.state);
        void this.refreshPreviews();
      });
      label.dataset.lang = lang;
      label.append(input, lang);
      box.appendChild(label);
    }
  }

  /** One confirmed edit: server-side, non-destructive, then re-preview.
   * When the edit makes the content invalid, the diagnostics land on the
   * form and the previews keep showing the last valid render. */
  async edit(path: string, value: EditValue): Promise<void> {
    try {
      const response = await this.api.editContent(this.state.contentId, path, value);
      this.state = applyContent(this.state, response, { pushUndo: true });
      this.renderAll();
      if (!response.diagnostics.length) {
        await this.refreshPreviews();
      }
    } catch (err) {
      this.showError(err);
    }
  }

  async refreshPreviews(): Promise<void> {
    const [next, token] = beginRender(this.state);
    this.state = next;
    renderPreviews(el("previews"), this.state);
    await Promise.all(this.state.languages.map(async (lang) => {
      try {
        const outcome = await this.api.render(this.state.contentId, lang);
        this.state = commitRender(this.state, token, lang, { status: "ok", outcome });
      } catch (err) {
        const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
        this.state = commitRender(this.state, token, lang,
          { status: "error", error: message });
      }
      renderPreviews(el("previews"), this.state);
    }));
  }

  async suggest(text: string): Promise<void> {
    this.searched = true;
    try {
      const candidates = await this.api.suggest(text, "en");
      this.state = setSuggestions(this.state, candidates);
    } catch (err) {
      this.showError(err);
      this.state = setSuggestions(this.state, []);
    }
    renderCandidates(el("candidates"), this.state.suggestions, this.searched, {
      onApply: (candidate) => void this.applyCandidate(candidate),
    });
  }

  /** Replace the selected sentence with a suggested skeleton. */
  async applyCandidate(candidate: Candidate): Promise<void> {
    const all = sentences(this.state.tree);
    const target = all[this.selectedSentence] ?? all[all.length - 1];
    if (!target) return;
    await this.edit(target.path, { $content: candidate.content });
  }

  async undoOnce(): Promise<void> {
    const [next, id] = undo(this.state);
    if (id === null) return;
    this.state = next;
    await this.loadById(id);
  }

  async redoOnce(): Promise<void> {
    const [next, id] = redo(this.state);
    if (id === null) return;
    this.state = next;
    await this.loadById(id);
  }

  private async loadById(id: string): Promise<void> {
    const content = await this.api.getContent(id);
    this.state = applyContent(this.state, content, { pushUndo: false });
    this.renderAll();
    await this.refreshPreviews();
  }

  async save(): Promise<void> {
    const target = window.prompt("store as content id", "Q62");
    if (!target) return;
    await this.api.postContent(this.state.text, target);
    this.showStatus(`saved as ${target}`);
  }

  private showError(err: unknown): void {
    const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    this.showStatus(message);
  }

  private showStatus(message: string): void {
    el("status").textContent = message;
    window.setTimeout(() => { el("status").textContent = ""; }, 4000);
  }
}

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const app = new EditorApp(new ApiClient(apiBase()), params.get("content") ?? "Q62");
  el<HTMLButtonElement>("suggest-go").addEventListener("click", () =>
    void app.suggest(el<HTMLInputElement>("magic").value));
  el<HTMLInputElement>("magic").addEventListener("keydown", (ev) => {
    if ((ev as KeyboardEvent).key === "Enter") {
      void app.suggest(el<HTMLInputElement>("magic").value);
    }
  });
  el<HTMLButtonElement>("undo").addEventListener("click", () => void app.undoOnce());
  el<HTMLButtonElement>("redo").addEventListener("click", () => void app.redoOnce());
  el<HTMLButtonElement>("save").addEventListener("click", () => void app.save());
  try {
    await app.boot();
  } catch (err) {
    el("status").textContent = `cannot reach the content service: ${String(err)}`;
  }
}

if (typeof document !== "undefined" && document.getElementById("previews")) {
  void start();
}
