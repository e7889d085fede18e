import assert from "node:assert/strict";
import { test } from "node:test";

import {
  applyContent, beginRender, commitRender, diagnosticsAt, initialState, redo,
  sentences, setLanguages, undo,
} from "../src/state.js";
import type { CallTree } from "../src/types.js";

const TREE: CallTree = {
  kind: "call",
  constructor: "Article",
  arguments: {
    content: {
      kind: "list",
      items: [
        { kind: "call", constructor: "Instantiation", arguments: {} },
        { kind: "call", constructor: "Ranking", arguments: {} },
      ],
    },
  },
};

function loaded() {
  const state = initialState("Q62", ["en", "de"]);
  return applyContent(state, { id: "Q62", text: "Article(...)", tree: TREE, diagnostics: [] },
    { pushUndo: false });
}

test("plain loads do not grow the undo stack", () => {
  const state = loaded();
  assert.equal(state.contentId, "Q62");
  assert.deepEqual(state.undoStack, []);
});

test("edits push the prior id and clear redo", () => {
  let state = loaded();
  state = applyContent(state, { id: "scratch-1", text: "t1", tree: TREE, diagnostics: [] },
    { pushUndo: true });
  state = applyContent(state, { id: "scratch-2", text: "t2", tree: TREE, diagnostics: [] },
    { pushUndo: true });
  assert.deepEqual(state.undoStack, ["Q62", "scratch-1"]);
  assert.deepEqual(state.redoStack, []);
});

test("undo and redo walk the id stacks", () => {
  let state = loaded();
  state = applyContent(state, { id: "scratch-1", text: "t1", tree: TREE, diagnostics: [] },
    { pushUndo: true });
  const [afterUndo, undoTarget] = undo(state);
  assert.equal(undoTarget, "Q62");
  assert.deepEqual(afterUndo.redoStack, ["scratch-1"]);
  const reloaded = applyContent(afterUndo,
    { id: "Q62", text: "t0", tree: TREE, diagnostics: [] }, { pushUndo: false });
  const [afterRedo, redoTarget] = redo(reloaded);
  assert.equal(redoTarget, "scratch-1");
  assert.deepEqual(afterRedo.undoStack, ["Q62"]);
  const [same, nothing] = undo(initialState("x", []));
  assert.equal(nothing, null);
  assert.equal(same.contentId, "x");
});

test("render commits are latest-wins", () => {
  let state = loaded();
  const [started, staleToken] = beginRender(state);
  const [restarted, freshToken] = beginRender(started);
  state = commitRender(restarted, staleToken, "en", {
    status: "ok",
    outcome: { text: "OLD", omissions: [], complete: true },
  });
  assert.equal(state.previews["en"].outcome, undefined); // stale drop
  state = commitRender(state, freshToken, "en", {
    status: "ok",
    outcome: { text: "NEW", omissions: [], complete: true },
  });
  assert.equal(state.previews["en"].outcome?.text, "NEW");
});

test("pending panes keep the previous text for a calm repaint", () => {
  let state = loaded();
  const [s1, t1] = beginRender(state);
  state = commitRender(s1, t1, "en",
    { status: "ok", outcome: { text: "first", omissions: [], complete: true } });
  const [s2] = beginRender(state);
  assert.equal(s2.previews["en"].status, "pending");
  assert.equal(s2.previews["en"].outcome?.text, "first");
});

test("deselecting a language drops its pane and future commits", () => {
  let state = loaded();
  const [started, token] = beginRender(state);
  state = setLanguages(started, ["en"]);
  state = commitRender(state, token, "de", {
    status: "ok", outcome: { text: "x", omissions: [], complete: true },
  });
  assert.deepEqual(Object.keys(state.previews), ["en"]);
  assert.deepEqual(state.languages, ["en"]);
});

test("diagnosticsAt matches a field and its children only", () => {
  let state = loaded();
  state = {
    ...state,
    diagnostics: [
      { path: "content[1].rank", code: "TYPE_MISMATCH", message: "m1" },
      { path: "content[1].after[2]", code: "TYPE_MISMATCH", message: "m2" },
      { path: "content[0].instance", code: "X", message: "m3" },
    ],
  };
  assert.equal(diagnosticsAt(state, "content[1].rank").length, 1);
  assert.equal(diagnosticsAt(state, "content[1].after").length, 1);
  assert.equal(diagnosticsAt(state, "content[1]").length, 2);
  assert.equal(diagnosticsAt(state, "content[1].ran").length, 0);
});

test("sentences lists the article's list entries with their paths", () => {
  const all = sentences(TREE);
  assert.deepEqual(all.map((s) => s.path), ["content[0]", "content[1]"]);
  assert.equal(all[1].node.constructor, "Ranking");
  assert.deepEqual(sentences(null), []);
});
