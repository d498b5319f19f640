/** Registry schema model: field kinds, applicability, display units. */

export type Predicate =
  | { always: boolean }
  | { eq: [string, string] }
  | { ne: [string, string] }
  | { and: Predicate[] };

export type FieldKind = "ENUM" | "FLAG" | "RAW_INT" | "NORMALIZED_FLOAT";

export interface Anchor {
  kind: "body" | "cm" | "deg";
  ref: string | null;
}

export interface Field {
  path: string;
  kind: FieldKind;
  default: string | number | boolean;
  applicable: Predicate;
  doc: string;
  enum_values?: string[];
  lo?: number;
  hi?: number;
  anchor?: Anchor;
}

export interface Schema {
  version: string;
  float_slots: number;
  fields: Field[];
}

export type Meta = Record<string, string>;

/** Evaluate an applicability predicate against the meta block. */
export function isApplicable(pred: Predicate, meta: Meta): boolean {
  if ("always" in pred) return pred.always;
  if ("eq" in pred) return meta[pred.eq[0]] === pred.eq[1];
  if ("ne" in pred) return meta[pred.ne[0]] !== pred.ne[1];
  return pred.and.every((p) => isApplicable(p, meta));
}

/** Fields a config with this meta may carry; mirrors server-side pruning. */
export function applicableFields(schema: Schema, meta: Meta): Field[] {
  return schema.fields.filter((f) => isApplicable(f.applicable, meta));
}

export function metaFields(schema: Schema): Field[] {
  return schema.fields.filter((f) => f.path.startsWith("meta."));
}

/** Section root of a path: "sleeve.cuff.height" -> "sleeve". */
export function sectionOf(path: string): string {
  return path.split(".")[0];
}

/**
 * Human-readable value of a normalized float: the raw number in the
 * field's anchor units. Body-anchored fields display the multiple (the
 * measurement itself lives server-side).
 */
export function denormalizedLabel(field: Field, value: number): string {
  const lo = field.lo ?? 0;
  const hi = field.hi ?? 1;
  const raw = lo + value * (hi - lo);
  const anchor = field.anchor ?? { kind: "cm", ref: null };
  if (anchor.kind === "body") return `${raw.toFixed(2)} × ${anchor.ref}`;
  if (anchor.kind === "deg") return `${raw.toFixed(1)}°`;
  return `${raw.toFixed(1)} cm`;
}
