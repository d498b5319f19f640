/** Schema-driven parameter form: one control per applicable field. */

import {
  applicableFields,
  denormalizedLabel,
  sectionOf,
  type Field,
  type Meta,
  type Schema,
} from "./schema.js";
import { getLeaf, type ConfigTree, type ConfigValue } from "./state.js";

export type LeafCallback = (path: string, value: ConfigValue) => void;
export type MetaCallback = (key: string, value: string) => void;

/**
 * Rebuild the form for the config's meta. Controls carry
 * data-path attributes; sliders are the normalized [0, 1] value with a
 * live label in anchor units.
 */
export function renderForm(
  root: HTMLElement,
  schema: Schema,
  config: ConfigTree,
  onLeaf: LeafCallback,
  onMeta: MetaCallback,
): void {
  root.textContent = "";
  const meta = { ...(config["meta"] as Meta) };
  const sections = new Map<string, HTMLFieldSetElement>();

  for (const field of applicableFields(schema, meta)) {
    const section = sectionOf(field.path);
    let fieldset = sections.get(section);
    if (!fieldset) {
      fieldset = document.createElement("fieldset");
      fieldset.dataset.section = section;
      const legend = document.createElement("legend");
      legend.textContent = section.replace(/_/g, " ");
      fieldset.append(legend);
      sections.set(section, fieldset);
      root.append(fieldset);
    }
    fieldset.append(
      buildControl(field, getLeaf(config, field.path), onLeaf, onMeta),
    );
  }
}

function buildControl(
  field: Field,
  value: ConfigValue | undefined,
  onLeaf: LeafCallback,
  onMeta: MetaCallback,
): HTMLElement {
  const row = document.createElement("label");
  row.className = "field";
  const name = document.createElement("span");
  name.className = "field-name";
  name.textContent = field.path.split(".").slice(1).join(".") || field.path;
  name.title = field.doc;
  row.append(name);

  switch (field.kind) {
    case "ENUM": {
      const select = document.createElement("select");
      select.dataset.path = field.path;
      for (const option of field.enum_values ?? []) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option;
        select.append(el);
      }
      select.value = String(value ?? field.default);
      select.addEventListener("change", () => {
        if (field.path.startsWith("meta.")) {
          onMeta(field.path.split(".")[1], select.value);
        } else {
          onLeaf(field.path, select.value);
        }
      });
      row.append(select);
      break;
    }
    case "FLAG": {
      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.path = field.path;
      box.checked = Boolean(value ?? field.default);
      box.addEventListener("change", () => onLeaf(field.path, box.checked));
      row.append(box);
      break;
    }
    case "RAW_INT": {
      const num = document.createElement("input");
      num.type = "number";
      num.step = "1";
      num.dataset.path = field.path;
      num.value = String(value ?? field.default);
      num.addEventListener("input", () =>
        onLeaf(field.path, Math.round(Number(num.value))),
      );
      row.append(num);
      break;
    }
    case "NORMALIZED_FLOAT": {
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = "1";
      slider.step = "0.001";
      slider.dataset.path = field.path;
      const current = typeof value === "number" ? value : Number(field.default);
      slider.value = String(current);
      const label = document.createElement("output");
      label.className = "field-value";
      label.textContent = denormalizedLabel(field, current);
      slider.addEventListener("input", () => {
        const v = Number(slider.value);
        label.textContent = denormalizedLabel(field, v);
        onLeaf(field.path, v);
      });
      row.append(slider, label);
      break;
    }
  }
  return row;
}
