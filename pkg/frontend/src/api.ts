/** Typed client for the annotation service HTTP API. */

import type {
  AsetPayload,
  CorpusPayload,
  FramePayload,
  SentencePayload,
  ValidateResponse,
} from "./types.js";

/** Non-2xx response; status 409 signals a stale revision. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`API error ${status}`);
  }

  violations(): string[] {
    if (this.detail && typeof this.detail === "object" && "violations" in this.detail) {
      const v = (this.detail as { violations: unknown }).violations;
      if (Array.isArray(v)) {
        return v.map((x) => (typeof x === "string" ? x : JSON.stringify(x)));
      }
    }
    return [String(this.detail ?? this.status)];
  }
}

export interface PatchLabelBody {
  revision: number;
  layer: string;
  span?: [number, number];
  segref?: string;
  itype?: string;
  value: string;
  prep?: string;
  status?: string;
}

export class ApiClient {
  constructor(private base: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let parsed: unknown = text;
    const contentType = response.headers.get("content-type") ?? "";
    if (contentType.includes("application/json")) {
      parsed = text ? JSON.parse(text) : null;
    }
    if (!response.ok) {
      const detail =
        parsed && typeof parsed === "object" && "detail" in parsed
          ? (parsed as { detail: unknown }).detail
          : parsed;
      throw new ApiError(response.status, detail);
    }
    return parsed as T;
  }

  corpora(): Promise<CorpusPayload[]> {
    return this.request("GET", "/corpora");
  }

  sentence(sentenceId: string): Promise<SentencePayload> {
    return this.request("GET", `/sentences/${encodeURIComponent(sentenceId)}`);
  }

  frames(lemma: string): Promise<FramePayload[]> {
    return this.request("GET", `/frames?lemma=${encodeURIComponent(lemma)}`);
  }

  createAset(sentenceId: string, targetSpan: [number, number], frame: string): Promise<AsetPayload> {
    return this.request("POST", "/asets", {
      sentence_id: sentenceId,
      target_span: targetSpan,
      frame,
    });
  }

  aset(asetId: string): Promise<AsetPayload> {
    return this.request("GET", `/asets/${encodeURIComponent(asetId)}`);
  }

  patchLabel(asetId: string, body: PatchLabelBody): Promise<AsetPayload> {
    return this.request("PATCH", `/asets/${encodeURIComponent(asetId)}/labels`, body);
  }

  autofill(asetId: string, revision: number): Promise<AsetPayload> {
    return this.request("POST", `/asets/${encodeURIComponent(asetId)}/autofill`, { revision });
  }

  validate(asetId: string): Promise<ValidateResponse> {
    return this.request("POST", `/asets/${encodeURIComponent(asetId)}/validate`);
  }

  rules(luId: string): Promise<string> {
    return this.request("GET", `/rules/${encodeURIComponent(luId)}`);
  }
}
