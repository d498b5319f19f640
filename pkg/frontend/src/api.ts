/** Typed client for the pattern compile service. */

import type { Schema } from "./schema.js";

export interface ValidationIssue {
  code: string;
  path: string | null;
  message: string;
}

export interface ValidationReport {
  ok: boolean;
  issues: ValidationIssue[];
}

export interface ValidityFailure {
  code: string;
  detail: string;
  panel?: string;
  stitch?: [string, number][];
}

export interface PatternValidity {
  ok: boolean;
  failures: ValidityFailure[];
}

export interface PatternEdge {
  kind: "LINE" | "QBEZIER";
  start: [number, number];
  end: [number, number];
  control?: [number, number];
}

export interface PatternPanel {
  name: string;
  role: string;
  edges: PatternEdge[];
  translation: [number, number, number];
  rotation: [number, number, number];
}

export interface PatternDoc {
  version: string;
  source_hash: string;
  body: Record<string, number>;
  panels: PatternPanel[];
  stitches: { a: [string, number]; b: [string, number]; reversed: boolean }[];
  interfaces: Record<string, [string, number, number][]>;
}

export interface CompileResponse {
  pattern: PatternDoc;
  svg: string;
  validity: PatternValidity;
}

export interface CompileFailure {
  ok: false;
  report: ValidationReport | null;
  validity: PatternValidity | null;
}

export interface EditPairRecord {
  source: unknown;
  target: unknown;
  changed_parts: string[];
  prompt: string;
}

/** Non-2xx response; body is the parsed JSON error document. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
  ) {
    super(`service returned ${status}`);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request(
    path: string,
    init?: RequestInit,
  ): Promise<unknown> {
    const res = await fetch(this.baseUrl + path, init);
    const body = await res.json();
    if (!res.ok) throw new ApiError(res.status, body);
    return body;
  }

  schema(): Promise<Schema> {
    return this.request("/schema") as Promise<Schema>;
  }

  validate(config: unknown): Promise<ValidationReport> {
    return this.request("/validate", {
      method: "POST",
      body: JSON.stringify(config),
    }) as Promise<ValidationReport>;
  }

  /**
   * Compile the exact string given, so the caller can keep the request
   * body for byte-equal export. Aborting via `signal` cancels a stale
   * in-flight request.
   */
  compileRaw(body: string, signal?: AbortSignal): Promise<CompileResponse> {
    return this.request("/compile", {
      method: "POST",
      body,
      signal,
    }) as Promise<CompileResponse>;
  }

  editpair(a: unknown, b: unknown): Promise<EditPairRecord> {
    return this.request("/editpair", {
      method: "POST",
      body: JSON.stringify({ a, b }),
    }) as Promise<EditPairRecord>;
  }
}
