/** Payload shapes of the content service API. */

export interface Diagnostic {
  path: string;
  code: string;
  message: string;
}

export interface Omission {
  path: string;
  reason: string;
}

export interface RenderOutcome {
  text: string;
  omissions: Omission[];
  complete: boolean;
}

/** Structural read model of a content value (GET /content/{id} .tree). */
export type ValueTree =
  | { kind: "integer"; value: number }
  | { kind: "text"; value: string }
  | { kind: "item"; id: string }
  | { kind: "list"; items: ValueTree[] }
  | CallTree;

export interface CallTree {
  kind: "call";
  constructor: string;
  arguments: Record<string, ValueTree>;
}

export interface ContentResponse {
  id: string;
  text: string;
  tree: CallTree;
  diagnostics: Diagnostic[];
}

export interface KeySpecDoc {
  id: string;
  labels: Record<string, string>;
  required: boolean;
  accepted: string[];
}

export interface ConstructorDoc {
  id: string;
  labels: Record<string, string>;
  doc: string;
  result_type: string;
  keys: KeySpecDoc[];
}

export interface Candidate {
  content: string;
  constructor_id: string;
  score: number;
  diagnostics: Diagnostic[];
}

export interface ItemHit {
  id: string;
  label: string;
}

/** JSON encoding of edit values accepted by POST /content/{id}/edit. */
export type EditValue =
  | number
  | string
  | EditValue[]
  | { $item: string }
  | { $content: string };
