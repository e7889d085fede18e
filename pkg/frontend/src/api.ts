/** Thin typed client for the content service. All linguistic work stays
 * server-side; this module only moves JSON. */

import type {
  Candidate, ConstructorDoc, ContentResponse, EditValue, ItemHit, RenderOutcome,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
    public readonly details?: unknown,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const err = body as { code?: string; message?: string; details?: unknown };
      throw new ApiError(err.code ?? "HTTP_ERROR",
        err.message ?? `request failed with ${resp.status}`, resp.status, err.details);
    }
    return body as T;
  }

  private json(method: string, payload: unknown): RequestInit {
    return {
      method,
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    };
  }

  render(contentId: string, lang: string): Promise<RenderOutcome> {
    const q = new URLSearchParams({ content_id: contentId, lang });
    return this.request(`/render?${q}`);
  }

  languages(): Promise<string[]> {
    return this.request<{ languages: string[] }>("/languages")
      .then((r) => r.languages);
  }

  getContent(contentId: string): Promise<ContentResponse> {
    return this.request(`/content/${encodeURIComponent(contentId)}`);
  }

  postContent(text: string, contentId?: string): Promise<{ id: string }> {
    const q = contentId ? `?content_id=${encodeURIComponent(contentId)}` : "";
    return this.request(`/content${q}`, {
      method: "POST",
      headers: { "content-type": "text/plain; charset=utf-8" },
      body: text,
    });
  }

  editContent(contentId: string, path: string, value: EditValue): Promise<ContentResponse> {
    return this.request(`/content/${encodeURIComponent(contentId)}/edit`,
      this.json("POST", { path, value }));
  }

  constructors(): Promise<ConstructorDoc[]> {
    return this.request<{ constructors: ConstructorDoc[] }>("/constructors")
      .then((r) => r.constructors);
  }

  searchItems(q: string, lang: string): Promise<ItemHit[]> {
    const params = new URLSearchParams({ q, lang });
    return this.request<{ items: ItemHit[] }>(`/items?${params}`)
      .then((r) => r.items);
  }

  suggest(text: string, lang: string): Promise<Candidate[]> {
    return this.request<{ candidates: Candidate[] }>("/suggest",
      this.json("POST", { text, lang })).then((r) => r.candidates);
  }
}
