/** Schema-driven form: field models derived from constructor specs, and
 * a DOM renderer for them. The model part is pure so it can be tested
 * without a browser. */

import type {
  CallTree, ConstructorDoc, Diagnostic, EditValue, ItemHit, KeySpecDoc, ValueTree,
} from "./types.js";

export type Widget = "integer" | "text" | "item" | "enum" | "item-list" | "constructor";

export interface FieldModel {
  path: string;
  key: string;
  label: string;
  required: boolean;
  widget: Widget;
  value: ValueTree | null;
  /** enum option ids, or constructor ids for nested switches */
  options: string[];
  diagnostics: string[];
  children: FieldModel[];
}

function acceptedKinds(accepted: string[]) {
  return {
    integer: accepted.includes("integer"),
    text: accepted.includes("text"),
    item: accepted.includes("item"),
    itemList: accepted.some((a) => a.startsWith("list-of(item")),
    enumOf: accepted.filter((a) => a.startsWith("enum-of("))
      .map((a) => a.slice("enum-of(".length, -1)),
    constructorOf: accepted.filter((a) => a.startsWith("constructor("))
      .map((a) => a.slice("constructor(".length, -1)),
  };
}

function enumOptions(catalog: ConstructorDoc[], resultTypes: string[]): string[] {
  return catalog
    .filter((c) => c.keys.length === 0 && resultTypes.includes(c.result_type))
    .map((c) => c.id)
    .sort();
}

function constructorOptions(catalog: ConstructorDoc[], resultTypes: string[]): string[] {
  return catalog
    .filter((c) => resultTypes.includes(c.result_type))
    .map((c) => c.id)
    .sort();
}

function pickWidget(key: KeySpecDoc, value: ValueTree | null): Widget {
  const kinds = acceptedKinds(key.accepted);
  if (kinds.itemList) return "item-list";
  if (value && value.kind === "call" && Object.keys(value.arguments).length > 0) {
    return "constructor";
  }
  if (value && value.kind === "item" && kinds.item) return "item";
  if (value && value.kind === "call" && kinds.enumOf.length) return "enum";
  if (kinds.integer) return "integer";
  if (kinds.text) return "text";
  if (kinds.constructorOf.length && (!value || value.kind === "call")) {
    return value && Object.keys((value as CallTree).arguments).length === 0 && kinds.enumOf.length
      ? "enum" : "constructor";
  }
  if (kinds.enumOf.length) return "enum";
  return "item";
}

function label(key: KeySpecDoc, lang: string): string {
  return key.labels[lang] ?? key.labels["en"] ?? key.id;
}

/** Build the field models for one constructor instantiation. */
export function fieldModels(
  node: CallTree,
  basePath: string,
  catalog: ConstructorDoc[],
  diagnostics: Diagnostic[],
  uiLang = "en",
): FieldModel[] {
  const spec = catalog.find((c) => c.id === node.constructor);
  if (!spec) return [];
  return spec.keys.map((key) => {
    const path = basePath ? `${basePath}.${key.id}` : key.id;
    const value = node.arguments[key.id] ?? null;
    const widget = pickWidget(key, value);
    const kinds = acceptedKinds(key.accepted);
    const fieldDiagnostics = diagnostics
      .filter((d) => d.path === path || d.path.startsWith(path + ".")
        || d.path.startsWith(path + "["))
      .map((d) => `${d.code}: ${d.message}`);
    let options: string[] = [];
    if (widget === "enum") options = enumOptions(catalog, kinds.enumOf);
    if (widget === "constructor") {
      options = constructorOptions(catalog, kinds.constructorOf.concat(kinds.enumOf));
    }
    const children = widget === "constructor" && value && value.kind === "call"
      ? fieldModels(value, path, catalog, diagnostics, uiLang)
      : [];
    return {
      path, key: key.id, label: label(key, uiLang), required: key.required,
      widget, value, options, diagnostics: fieldDiagnostics, children,
    };
  });
}

/** Translate a raw input string into the edit-value JSON for a widget.
 * Returns an error string instead when the input cannot be encoded;
 * intentionally permissive for integers (bad input is sent as text so
 * the server can answer with its own TYPE_MISMATCH diagnostic). */
export function encodeInput(widget: Widget, raw: string): EditValue {
  const trimmed = raw.trim();
  switch (widget) {
    case "integer":
      return /^[0-9]+$/.test(trimmed) ? Number(trimmed) : trimmed;
    case "text":
      return raw;
    case "item":
      return { $item: trimmed };
    case "enum":
    case "constructor":
      return { $content: trimmed };
    case "item-list":
      return trimmed.length
        ? trimmed.split(/[,\s]+/).filter(Boolean).map((id) => ({ $item: id }))
        : [];
  }
}

export function itemListIds(value: ValueTree | null): string[] {
  if (!value || value.kind !== "list") return [];
  return value.items.flatMap((v) => (v.kind === "item" ? [v.id] : []));
}

// ---------------------------------------------------------------------------
// DOM rendering (no framework; the handlers call back into the app)

export interface FormCallbacks {
  onEdit(path: string, value: EditValue): void;
  searchItems(q: string): Promise<ItemHit[]>;
}

function valueText(value: ValueTree | null): string {
  if (!value) return "";
  switch (value.kind) {
    case "integer": return String(value.value);
    case "text": return value.value;
    case "item": return value.id;
    case "call": return value.constructor;
    case "list": return itemListIds(value).join(", ");
  }
}

function inputFor(field: FieldModel, cb: FormCallbacks, doc: Document): HTMLElement {
  if (field.widget === "enum" || field.widget === "constructor") {
    const select = doc.createElement("select");
    const current = valueText(field.value);
    for (const option of field.options) {
      const el = doc.createElement("option");
      el.value = option;
      el.textContent = option;
      el.selected = option === current;
      select.appendChild(el);
    }
    select.addEventListener("change", () =>
      cb.onEdit(field.path, encodeInput(field.widget, select.value)));
    return select;
  }
  const input = doc.createElement("input");
  input.type = "text";
  input.value = valueText(field.value);
  if (field.widget === "item" || field.widget === "item-list") {
    const listId = `items-${field.path.replace(/[^A-Za-z0-9]/g, "-")}`;
    const datalist = doc.createElement("datalist");
    datalist.id = listId;
    input.setAttribute("list", listId);
    input.addEventListener("input", () => {
      void cb.searchItems(input.value).then((hits) => {
        datalist.replaceChildren(...hits.map((hit) => {
          const el = doc.createElement("option");
          el.value = hit.id;
          el.label = hit.label;
          return el;
        }));
      });
    });
    input.after(datalist);
    input.addEventListener("change", () =>
      cb.onEdit(field.path, encodeInput(field.widget, input.value)));
    const wrap = doc.createElement("span");
    wrap.append(input, datalist);
    return wrap;
  }
  input.addEventListener("change", () =>
    cb.onEdit(field.path, encodeInput(field.widget, input.value)));
  return input;
}

export function renderForm(
  container: HTMLElement,
  fields: FieldModel[],
  cb: FormCallbacks,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  for (const field of fields) {
    const row = doc.createElement("div");
    row.className = "field" + (field.diagnostics.length ? " invalid" : "");
    const labelEl = doc.createElement("label");
    labelEl.textContent = field.label + (field.required ? " *" : "");
    row.appendChild(labelEl);
    row.appendChild(inputFor(field, cb, doc));
    for (const message of field.diagnostics) {
      const note = doc.createElement("div");
      note.className = "diagnostic";
      note.textContent = message;
      row.appendChild(note);
    }
    container.appendChild(row);
    if (field.children.length) {
      const nested = doc.createElement("fieldset");
      const legend = doc.createElement("legend");
      legend.textContent = valueText(field.value);
      const inner = doc.createElement("div");
      renderForm(inner, field.children, cb);
      nested.append(legend, inner);
      row.appendChild(nested);
    }
  }
}
