/** Session screen wiring: one App per page.
 *
 * The client is stateless by design — the URL hash carries the API base and
 * session id, everything else lives on the server. Every action round-trips:
 * mutate, then re-fetch GET /sessions/{id} and re-render from that record
 * alone. A slow poll keeps long-idle tabs in sync the same way.
 */

import { Api, ApiError, type Answer, type SessionRecord } from "./api.js";
import { exportProposalJson, projectRecord, renderSession } from "./view.js";

export const DEFAULT_API_BASE = "http://127.0.0.1:8000";
const POLL_MS = 4000;

export interface HashState {
  api: string;
  session: string | null;
}

export function parseHash(hash: string): HashState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  return {
    api: params.get("api") ?? DEFAULT_API_BASE,
    session: params.get("s"),
  };
}

export function buildHash(state: HashState): string {
  const params = new URLSearchParams();
  if (state.api !== DEFAULT_API_BASE) params.set("api", state.api);
  if (state.session) params.set("s", state.session);
  const text = params.toString();
  return text ? `#${text}` : "";
}

export interface AppElements {
  session: HTMLElement;
  error: HTMLElement;
  dpiText: HTMLTextAreaElement;
  dpiFile: HTMLInputElement | null;
  strategy: HTMLSelectElement | null;
  mode: HTMLSelectElement | null;
  engine: HTMLSelectElement | null;
  sigma: HTMLInputElement | null;
}

export class App {
  api: Api;
  sessionId: string | null = null;
  record: SessionRecord | null = null;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private elements: AppElements,
    apiBase: string = DEFAULT_API_BASE,
    private pollMs: number = 0,
  ) {
    this.api = new Api(apiBase);
    this.wire();
  }

  private wire(): void {
    this.elements.session.addEventListener("click", (event) => {
      const target = (event.target as HTMLElement).closest("[data-action]");
      if (!target || target.hasAttribute("disabled")) return;
      const action = target.getAttribute("data-action");
      if (action === "yes" || action === "no" || action === "skip") {
        void this.answer(action);
      } else if (action === "export") {
        this.exportProposal();
      }
    });
    this.elements.dpiFile?.addEventListener("change", () => {
      const file = this.elements.dpiFile?.files?.[0];
      if (!file) return;
      void file.text().then((text) => {
        this.elements.dpiText.value = text;
      });
    });
  }

  sessionConfig(): Record<string, unknown> {
    const config: Record<string, unknown> = {};
    const strategy = this.elements.strategy?.value;
    if (strategy) config.strategy = { kind: strategy };
    const mode = this.elements.mode?.value;
    if (mode) config.mode = mode;
    const engine = this.elements.engine?.value;
    if (engine) config.engine = engine;
    const sigma = this.elements.sigma?.value;
    if (sigma !== undefined && sigma !== "") config.sigma = Number(sigma);
    return config;
  }

  /** ui_load_dpi: parse the pasted/selected JSON, create the session, show
   * the first query. Server rejections (400) surface inline. */
  async start(): Promise<void> {
    this.showError(null);
    let dpi: unknown;
    try {
      dpi = JSON.parse(this.elements.dpiText.value);
    } catch (err) {
      this.showError(`not valid JSON: ${err}`);
      return;
    }
    try {
      const created = await this.api.createSession(dpi, this.sessionConfig());
      this.sessionId = created.session_id;
      this.syncHash();
      await this.refresh();
      this.schedulePoll();
    } catch (err) {
      this.showError(err instanceof ApiError ? err.message : String(err));
    }
  }

  /** Load an existing session (page reload path). */
  async resume(sessionId: string): Promise<void> {
    this.sessionId = sessionId;
    await this.refresh();
    this.schedulePoll();
  }

  /** ui_answer: POST, then re-fetch and re-render. A 409 means the session
   * concluded under us — the re-fetch shows the final state. */
  async answer(value: Answer): Promise<void> {
    if (!this.sessionId) return;
    this.showError(null);
    try {
      await this.api.answer(this.sessionId, value);
    } catch (err) {
      if (!(err instanceof ApiError && err.status === 409)) {
        this.showError(err instanceof ApiError ? err.message : String(err));
      }
    }
    await this.refresh();
  }

  /** Re-fetch the record and rebuild the screen from it alone. */
  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.record = await this.api.getSession(this.sessionId);
    } catch (err) {
      this.showError(err instanceof ApiError ? err.message : String(err));
      return;
    }
    renderSession(projectRecord(this.record), this.elements.session);
  }

  /** ui_export_repair: download the proposal exactly as the server stores
   * it. Returns the bytes for tests; the browser path wraps them in a file. */
  exportProposal(): string | null {
    if (!this.record) return null;
    const json = exportProposalJson(this.record);
    if (json === null) return null;
    this.download(json, `repair-${this.record.session_id}.json`);
    return json;
  }

  private download(text: string, filename: string): void {
    if (typeof URL.createObjectURL !== "function") return; // test harness
    const blob = new Blob([text], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const link = document.createElement("a");
    link.href = url;
    link.download = filename;
    link.click();
    URL.revokeObjectURL(url);
  }

  private schedulePoll(): void {
    if (this.pollMs <= 0) return;
    this.stopPolling();
    this.pollTimer = setTimeout(() => {
      void this.refresh().finally(() => this.schedulePoll());
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
  }

  private syncHash(): void {
    window.location.hash = buildHash({
      api: this.api.baseUrl,
      session: this.sessionId,
    });
  }

  private showError(message: string | null): void {
    this.elements.error.textContent = message ?? "";
    this.elements.error.classList.toggle("visible", message !== null);
  }
}

/** Page entry point: wire the static DOM, resume from the hash if it names
 * a session. */
export function boot(doc: Document = document): App {
  const hash = parseHash(window.location.hash);
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el as T;
  };
  const app = new App(
    {
      session: byId("session"),
      error: byId("error"),
      dpiText: byId<HTMLTextAreaElement>("dpi-text"),
      dpiFile: doc.getElementById("dpi-file") as HTMLInputElement | null,
      strategy: doc.getElementById("opt-strategy") as HTMLSelectElement | null,
      mode: doc.getElementById("opt-mode") as HTMLSelectElement | null,
      engine: doc.getElementById("opt-engine") as HTMLSelectElement | null,
      sigma: doc.getElementById("opt-sigma") as HTMLInputElement | null,
    },
    hash.api,
    POLL_MS,
  );
  byId<HTMLButtonElement>("start").addEventListener("click", () => {
    void app.start();
  });
  if (hash.session) void app.resume(hash.session);
  return app;
}
