/** Editor wiring: form, debounced live compile, import/export, diff. */

import { ApiClient, ApiError, type CompileFailure } from "./api.js";
import { renderDiff, renderNoDifference } from "./diff.js";
import { renderForm } from "./form.js";
import { panelGroupCount, renderPreview, renderValidity } from "./preview.js";
import { isApplicable, type Meta, type Schema } from "./schema.js";
import {
  buildConfig,
  getLeaf,
  metaOf,
  setLeaf,
  validateClientSide,
  type ConfigTree,
  type ConfigValue,
  type EditorState,
} from "./state.js";

/** Slider responsiveness vs compile traffic; one compile per pause. */
export const COMPILE_DEBOUNCE_MS = 250;

const DEFAULT_META: Meta = { upper: "Shirt", wb: "None", bottom: "None" };

export interface AppOptions {
  baseUrl?: string;
  debounceMs?: number;
  meta?: Meta;
}

export class EditorApp {
  readonly api: ApiClient;
  readonly state: EditorState;
  schema!: Schema;

  private readonly debounceMs: number;
  private readonly el: Record<string, HTMLElement>;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private waiters: (() => void)[] = [];
  private inflight: AbortController | null = null;
  private generation = 0;

  constructor(
    readonly root: HTMLElement,
    options: AppOptions = {},
  ) {
    this.api = new ApiClient(options.baseUrl ?? "");
    this.debounceMs = options.debounceMs ?? COMPILE_DEBOUNCE_MS;
    this.state = {
      config: { meta: { ...(options.meta ?? DEFAULT_META) } },
      lastResponse: null,
      lastCompiledBody: null,
      dirty: true,
      diffOther: null,
    };
    this.el = buildLayout(root);
    this.el["retry"].addEventListener("click", () => void this.compileNow());
    this.el["import"].addEventListener("click", () =>
      this.importConfig(textareaValue(this.el["config-io"])),
    );
    this.el["export"].addEventListener("click", () => this.exportToTextarea());
    this.el["diff-run"].addEventListener("click", () =>
      void this.runDiff(textareaValue(this.el["diff-config"])),
    );
  }

  /** Fetch the schema and draw the initial form; failures block the UI. */
  async init(): Promise<void> {
    try {
      this.schema = await this.api.schema();
    } catch {
      this.el["banner"].hidden = false;
      this.el["banner"].textContent =
        "Could not load the parameter schema from the service.";
      return;
    }
    this.state.config = buildConfig(this.schema, metaOf(this.state.config));
    this.redrawForm();
    await this.scheduleCompile();
  }

  setMeta(key: string, value: string): void {
    const meta = { ...metaOf(this.state.config), [key]: value };
    const previous = this.state.config;
    this.state.config = buildConfig(this.schema, meta);
    // keep values for fields that survive the meta change
    for (const f of this.schema.fields) {
      if (f.path.startsWith("meta.")) continue;
      if (!isApplicable(f.applicable, meta)) continue;
      const old = getLeaf(previous, f.path);
      if (old !== undefined) setLeaf(this.state.config, f.path, old);
    }
    this.state.dirty = true;
    this.redrawForm();
    void this.scheduleCompile();
  }

  setLeaf(path: string, value: ConfigValue): void {
    setLeaf(this.state.config, path, value);
    this.state.dirty = true;
    void this.scheduleCompile();
  }

  /**
   * Adopt a pasted config if it passes client-side range checks;
   * otherwise show the issues and leave config and preview untouched.
   */
  importConfig(text: string): boolean {
    let parsed: unknown;
    try {
      parsed = JSON.parse(text);
    } catch (err) {
      this.setIoMessage(`Not valid JSON: ${(err as Error).message}`);
      return false;
    }
    if (typeof parsed !== "object" || parsed === null || !("meta" in parsed)) {
      this.setIoMessage("A config must be an object with a meta block.");
      return false;
    }
    const issues = validateClientSide(this.schema, parsed as ConfigTree);
    if (issues.length > 0) {
      this.setIoMessage(
        issues.map((i) => `${i.code}: ${i.message}`).join("\n"),
      );
      return false;
    }
    this.state.config = parsed as ConfigTree;
    this.state.dirty = true;
    this.setIoMessage("");
    this.redrawForm();
    void this.scheduleCompile();
    return true;
  }

  /** The exact body of the last successful compile request. */
  exportConfig(): string | null {
    return this.state.lastCompiledBody;
  }

  exportToTextarea(): void {
    const body = this.exportConfig();
    if (body === null) {
      this.setIoMessage("Nothing compiled yet.");
      return;
    }
    (this.el["config-io"] as HTMLTextAreaElement).value = body;
    this.setIoMessage("Exported the last compiled config.");
  }

  /** Debounced compile; concurrent calls coalesce into one request. */
  scheduleCompile(): Promise<void> {
    if (this.timer !== null) clearTimeout(this.timer);
    return new Promise((resolve) => {
      this.waiters.push(resolve);
      this.timer = setTimeout(() => {
        this.timer = null;
        const waiters = this.waiters.splice(0);
        void this.compileNow().finally(() => {
          for (const w of waiters) w();
        });
      }, this.debounceMs);
    });
  }

  async compileNow(): Promise<void> {
    // an immediate compile absorbs any pending debounced one — it would
    // only re-send the same current config
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const waiters = this.waiters.splice(0);
    try {
      await this.compileCurrent();
    } finally {
      for (const w of waiters) w();
    }
  }

  private async compileCurrent(): Promise<void> {
    const issues = validateClientSide(this.schema, this.state.config);
    if (issues.length > 0) {
      this.setStatus(
        issues.map((i) => `${i.code}: ${i.message}`).join("\n"),
        "invalid",
      );
      return;
    }
    const body = JSON.stringify(this.state.config, null, 2);
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const generation = ++this.generation;
    this.setStatus("compiling…", "busy");
    try {
      const response = await this.api.compileRaw(body, controller.signal);
      if (generation !== this.generation) return;
      this.state.lastResponse = response;
      this.state.lastCompiledBody = body;
      this.state.dirty = false;
      renderPreview(this.el["preview"], response.svg);
      renderValidity(this.el["validity"], this.el["preview"], response.validity);
      const n = panelGroupCount(this.el["preview"]);
      this.setStatus(
        response.validity.ok
          ? `${n} panels`
          : `${n} panels, ${response.validity.failures.length} geometry failures`,
        response.validity.ok ? "ok" : "invalid",
      );
    } catch (err) {
      if (generation !== this.generation || controller.signal.aborted) return;
      if (err instanceof ApiError && err.status === 422) {
        const failure = err.body as CompileFailure;
        const issues = failure.report?.issues ?? [];
        this.setStatus(
          issues.map((i) => `${i.code}: ${i.message}`).join("\n") ||
            "config rejected",
          "invalid",
        );
        return;
      }
      this.setStatus("Service unreachable.", "error");
      this.el["retry"].hidden = false;
    }
  }

  async runDiff(otherText: string): Promise<void> {
    let other: unknown;
    try {
      other = JSON.parse(otherText);
    } catch (err) {
      this.el["diff-view"].textContent =
        `Not valid JSON: ${(err as Error).message}`;
      return;
    }
    this.state.diffOther = other as ConfigTree;
    try {
      const record = await this.api.editpair(this.state.config, other);
      renderDiff(this.el["diff-view"], record);
    } catch (err) {
      if (
        err instanceof ApiError &&
        (err.body as { code?: string })?.code === "NO_DIFFERENCE"
      ) {
        renderNoDifference(this.el["diff-view"]);
        return;
      }
      this.el["diff-view"].textContent = "Comparison failed.";
    }
  }

  private redrawForm(): void {
    renderForm(
      this.el["form"],
      this.schema,
      this.state.config,
      (path, value) => this.setLeaf(path, value),
      (key, value) => this.setMeta(key, value),
    );
  }

  private setStatus(text: string, kind: string): void {
    this.el["status"].textContent = text;
    this.el["status"].dataset.kind = kind;
    if (kind !== "error") this.el["retry"].hidden = true;
  }

  private setIoMessage(text: string): void {
    this.el["io-message"].textContent = text;
  }
}

function textareaValue(el: HTMLElement): string {
  return (el as HTMLTextAreaElement).value;
}

function buildLayout(root: HTMLElement): Record<string, HTMLElement> {
  root.innerHTML = `
    <div class="banner" data-role="banner" hidden></div>
    <div class="columns">
      <form class="panel-form" data-role="form"></form>
      <section class="preview-pane">
        <div class="status" data-role="status"></div>
        <button type="button" data-role="retry" hidden>Retry</button>
        <div class="preview" data-role="preview"></div>
        <ul class="validity" data-role="validity"></ul>
      </section>
    </div>
    <section class="io">
      <textarea data-role="config-io" rows="8" spellcheck="false"></textarea>
      <button type="button" data-role="import">Import</button>
      <button type="button" data-role="export">Export</button>
      <pre class="io-message" data-role="io-message"></pre>
    </section>
    <section class="diff">
      <textarea data-role="diff-config" rows="8" spellcheck="false"></textarea>
      <button type="button" data-role="diff-run">Compare</button>
      <div class="diff-view" data-role="diff-view"></div>
    </section>`;
  const out: Record<string, HTMLElement> = {};
  for (const el of root.querySelectorAll<HTMLElement>("[data-role]")) {
    out[el.dataset.role as string] = el;
  }
  return out;
}
