/** Editor state and pure config-tree helpers. */

import type { CompileResponse } from "./api.js";
import {
  applicableFields,
  isApplicable,
  type Field,
  type Meta,
  type Schema,
} from "./schema.js";

export type ConfigTree = { [key: string]: ConfigValue };
export type ConfigValue = string | number | boolean | ConfigTree;

export interface EditorState {
  config: ConfigTree;
  lastResponse: CompileResponse | null;
  /** Exact body of the last successful /compile request, for export. */
  lastCompiledBody: string | null;
  dirty: boolean;
  /** Second config slot for the edit-diff view. */
  diffOther: ConfigTree | null;
}

export function getLeaf(tree: ConfigTree, path: string): ConfigValue | undefined {
  let node: ConfigValue | undefined = tree;
  for (const part of path.split(".")) {
    if (node === undefined || typeof node !== "object") return undefined;
    node = (node as ConfigTree)[part];
  }
  return node;
}

export function setLeaf(tree: ConfigTree, path: string, value: ConfigValue): void {
  const parts = path.split(".");
  let node = tree;
  for (const part of parts.slice(0, -1)) {
    if (typeof node[part] !== "object") node[part] = {};
    node = node[part] as ConfigTree;
  }
  node[parts[parts.length - 1]] = value;
}

export function metaOf(config: ConfigTree): Meta {
  return { ...(config["meta"] as Meta) };
}

/** Default config for a meta choice: every applicable field at its default. */
export function buildConfig(schema: Schema, meta: Meta): ConfigTree {
  const config: ConfigTree = {};
  for (const f of applicableFields(schema, meta)) {
    const value = f.path.startsWith("meta.")
      ? meta[f.path.split(".")[1]]
      : f.default;
    setLeaf(config, f.path, value);
  }
  return config;
}

export interface ClientIssue {
  code: string;
  path: string;
  message: string;
}

/**
 * Range/type check against the schema before anything goes on the wire.
 * Normalized floats must sit in [0, 1]; enums in their value set.
 */
export function validateClientSide(
  schema: Schema,
  config: ConfigTree,
): ClientIssue[] {
  const issues: ClientIssue[] = [];
  const meta = metaOf(config);
  for (const f of schema.fields) {
    const value = getLeaf(config, f.path);
    if (value === undefined) continue;
    if (!isApplicable(f.applicable, meta)) continue;
    issues.push(...checkValue(f, value));
  }
  return issues;
}

function checkValue(f: Field, value: ConfigValue): ClientIssue[] {
  const bad = (code: string, message: string) => [
    { code, path: f.path, message },
  ];
  switch (f.kind) {
    case "NORMALIZED_FLOAT":
      if (typeof value !== "number")
        return bad("BAD_TYPE", `${f.path} must be a number`);
      if (value < 0 || value > 1)
        return bad("OUT_OF_RANGE", `${f.path} = ${value} is outside [0, 1]`);
      return [];
    case "ENUM":
      if (typeof value !== "string" || !(f.enum_values ?? []).includes(value))
        return bad(
          "BAD_ENUM",
          `${f.path} must be one of ${(f.enum_values ?? []).join(", ")}`,
        );
      return [];
    case "FLAG":
      if (typeof value !== "boolean")
        return bad("BAD_TYPE", `${f.path} must be true or false`);
      return [];
    case "RAW_INT":
      if (typeof value !== "number" || !Number.isInteger(value))
        return bad("BAD_TYPE", `${f.path} must be an integer`);
      return [];
  }
}
