/** SVG preview and validity display. */

import type { PatternValidity, ValidityFailure } from "./api.js";

/** Insert the server's SVG export verbatim; no client-side re-layout. */
export function renderPreview(host: HTMLElement, svg: string): void {
  host.innerHTML = svg;
}

export function panelGroupCount(host: HTMLElement): number {
  return host.querySelectorAll('g[id^="panel-"]').length;
}

function offendingPanels(failure: ValidityFailure): string[] {
  if (failure.panel) return [failure.panel];
  if (failure.stitch) return failure.stitch.map(([name]) => name);
  return [];
}

/**
 * List geometric failures and mark the panels they implicate in the
 * preview (class "invalid-panel" on the panel group).
 */
export function renderValidity(
  list: HTMLElement,
  svgHost: HTMLElement,
  validity: PatternValidity,
): void {
  list.textContent = "";
  for (const group of svgHost.querySelectorAll("g.invalid-panel")) {
    group.classList.remove("invalid-panel");
  }
  if (validity.ok) {
    list.dataset.state = "ok";
    return;
  }
  list.dataset.state = "failed";
  for (const failure of validity.failures) {
    const item = document.createElement("li");
    item.textContent = `${failure.code}: ${failure.detail}`;
    list.append(item);
    for (const name of offendingPanels(failure)) {
      svgHost.querySelector(`g[id="panel-${name}"]`)?.classList.add("invalid-panel");
    }
  }
}
