/** Edit-diff view: changed parts and the generated edit prompt. */

import type { EditPairRecord } from "./api.js";

export function renderDiff(host: HTMLElement, record: EditPairRecord): void {
  host.textContent = "";
  host.dataset.state = "diff";
  const parts = document.createElement("p");
  parts.className = "diff-parts";
  parts.textContent = `Changed parts: ${record.changed_parts.join(", ")}`;
  const prompt = document.createElement("blockquote");
  prompt.className = "diff-prompt";
  prompt.textContent = record.prompt;
  host.append(parts, prompt);
}

/** NO_DIFFERENCE is informational, not an error. */
export function renderNoDifference(host: HTMLElement): void {
  host.textContent = "The two configs describe the same garment.";
  host.dataset.state = "no-difference";
}
