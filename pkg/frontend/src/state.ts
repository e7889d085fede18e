/** Editor state and its pure transitions.
 *
 * The state is a client mirror of server-confirmed facts: the current
 * content (by id, with its text/tree/diagnostics as the server returned
 * them) and the last confirmed render per language. Because every edit
 * creates a new server-side content id and old ids stay readable, undo
 * and redo are just id stacks.
 */

import type { Candidate, CallTree, Diagnostic, RenderOutcome } from "./types.js";

export type PaneStatus = "pending" | "ok" | "error";

export interface PreviewPane {
  status: PaneStatus;
  outcome?: RenderOutcome;
  error?: string;
}

export interface EditorState {
  contentId: string;
  text: string;
  tree: CallTree | null;
  diagnostics: Diagnostic[];
  languages: string[];
  previews: Record<string, PreviewPane>;
  suggestions: Candidate[];
  undoStack: string[];
  redoStack: string[];
  renderToken: number;
}

export function initialState(contentId: string, languages: string[]): EditorState {
  return {
    contentId,
    text: "",
    tree: null,
    diagnostics: [],
    languages,
    previews: {},
    suggestions: [],
    undoStack: [],
    redoStack: [],
    renderToken: 0,
  };
}

export interface ContentSnapshot {
  id: string;
  text: string;
  tree: CallTree;
  diagnostics: Diagnostic[];
}

/** Adopt a server response as the current content. Edits push the prior
 * id onto the undo stack; plain loads do not. */
export function applyContent(
  state: EditorState,
  snapshot: ContentSnapshot,
  opts: { pushUndo: boolean },
): EditorState {
  const undoStack =
    opts.pushUndo && state.contentId && state.contentId !== snapshot.id
      ? [...state.undoStack, state.contentId]
      : state.undoStack;
  return {
    ...state,
    contentId: snapshot.id,
    text: snapshot.text,
    tree: snapshot.tree,
    diagnostics: snapshot.diagnostics,
    redoStack: opts.pushUndo ? [] : state.redoStack,
    undoStack,
  };
}

/** Returns the id to reload, or null when there is nothing to undo. */
export function undo(state: EditorState): [EditorState, string | null] {
  const prior = state.undoStack.at(-1);
  if (prior === undefined) return [state, null];
  return [{
    ...state,
    undoStack: state.undoStack.slice(0, -1),
    redoStack: [...state.redoStack, state.contentId],
  }, prior];
}

export function redo(state: EditorState): [EditorState, string | null] {
  const next = state.redoStack.at(-1);
  if (next === undefined) return [state, null];
  return [{
    ...state,
    redoStack: state.redoStack.slice(0, -1),
    undoStack: [...state.undoStack, state.contentId],
  }, next];
}

export function setLanguages(state: EditorState, languages: string[]): EditorState {
  const previews: Record<string, PreviewPane> = {};
  for (const lang of languages) {
    if (state.previews[lang]) previews[lang] = state.previews[lang];
  }
  return { ...state, languages, previews };
}

export function setSuggestions(state: EditorState, suggestions: Candidate[]): EditorState {
  return { ...state, suggestions };
}

/** Start a preview refresh; the returned token must accompany results.
 * A newer edit bumps the token, so stale responses are dropped
 * (latest-wins supersession of in-flight renders). */
export function beginRender(state: EditorState): [EditorState, number] {
  const token = state.renderToken + 1;
  const previews: Record<string, PreviewPane> = {};
  for (const lang of state.languages) {
    previews[lang] = { status: "pending", outcome: state.previews[lang]?.outcome };
  }
  return [{ ...state, renderToken: token, previews }, token];
}

export function commitRender(
  state: EditorState,
  token: number,
  lang: string,
  pane: PreviewPane,
): EditorState {
  if (token !== state.renderToken || !state.languages.includes(lang)) {
    return state; // superseded by a newer edit, or language deselected
  }
  return { ...state, previews: { ...state.previews, [lang]: pane } };
}

/** Diagnostics attached to one field (exact path or below it). */
export function diagnosticsAt(state: EditorState, path: string): Diagnostic[] {
  return state.diagnostics.filter(
    (d) => d.path === path || d.path.startsWith(path + ".") || d.path.startsWith(path + "["),
  );
}

/** The sentence nodes of an article-shaped tree, with their paths. */
export function sentences(tree: CallTree | null): { path: string; node: CallTree }[] {
  if (!tree) return [];
  for (const [key, value] of Object.entries(tree.arguments)) {
    if (value.kind === "list") {
      return value.items.flatMap((node, i) =>
        node.kind === "call" ? [{ path: `${key}[${i}]`, node }] : []);
    }
  }
  return [];
}
