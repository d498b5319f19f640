import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { Schema } from "../src/schema.js";
import { buildConfig, setLeaf } from "../src/state.js";
import { startServer, type TestServer } from "./server.js";

let server: TestServer;
let api: ApiClient;
let schema: Schema;

const SKIRT_META = { upper: "None", wb: "StraightWB", bottom: "PencilSkirt" };

beforeAll(async () => {
  server = await startServer();
  api = new ApiClient(server.baseUrl);
  schema = await api.schema();
});

afterAll(async () => {
  await server.stop();
});

describe("schema endpoint", () => {
  test("reports the 76-slot registry", () => {
    expect(schema.float_slots).toBe(76);
    expect(schema.version).toBe("patternc-registry/1");
    const floats = schema.fields.filter((f) => f.kind === "NORMALIZED_FLOAT");
    expect(floats).toHaveLength(76);
    for (const f of floats) {
      expect(typeof f.lo).toBe("number");
      expect(typeof f.hi).toBe("number");
    }
  });
});

describe("validate and compile", () => {
  test("a built default config validates clean", async () => {
    const report = await api.validate(buildConfig(schema, SKIRT_META));
    expect(report).toEqual({ ok: true, issues: [] });
  });

  test("compile returns pattern, svg, and validity", async () => {
    const body = JSON.stringify(buildConfig(schema, SKIRT_META));
    const res = await api.compileRaw(body);
    expect(res.pattern.panels.map((p) => p.name).sort()).toEqual([
      "skirt_back",
      "skirt_front",
      "wb_back",
      "wb_front",
    ]);
    expect(res.svg.startsWith("<svg")).toBe(true);
    expect(res.validity.ok).toBe(true);
  });

  test("equal requests give byte-identical responses", async () => {
    const body = JSON.stringify(buildConfig(schema, SKIRT_META));
    const first = await fetch(`${server.baseUrl}/compile`, {
      method: "POST",
      body,
    });
    const second = await fetch(`${server.baseUrl}/compile`, {
      method: "POST",
      body,
    });
    expect(await first.text()).toBe(await second.text());
  });

  test("an out-of-range config is a 422 with the report", async () => {
    const config = buildConfig(schema, SKIRT_META);
    setLeaf(config, "pencil_skirt.length", 1.5);
    const err = await api
      .compileRaw(JSON.stringify(config))
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(422);
    const body = apiErr.body as {
      ok: boolean;
      report: { issues: { code: string }[] };
    };
    expect(body.ok).toBe(false);
    expect(body.report.issues.map((i) => i.code)).toContain("OUT_OF_RANGE");
  });
});

describe("edit pairs", () => {
  test("a changed skirt names the skirt part and fills the prompt", async () => {
    const a = buildConfig(schema, SKIRT_META);
    const b = buildConfig(schema, SKIRT_META);
    setLeaf(b, "pencil_skirt.length", 0.72);
    const record = await api.editpair(a, b);
    expect(record.changed_parts).toEqual(["pencil_skirt"]);
    expect(record.prompt).toContain("pencil skirt");
    expect(record.prompt.endsWith("while keeping other parts unchanged.")).toBe(
      true,
    );
  });

  test("identical configs are NO_DIFFERENCE", async () => {
    const a = buildConfig(schema, SKIRT_META);
    const err = await api
      .editpair(a, a)
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(((err as ApiError).body as { code: string }).code).toBe(
      "NO_DIFFERENCE",
    );
  });
});
