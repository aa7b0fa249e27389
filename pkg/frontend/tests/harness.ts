/** Test harness: a real kbdebug API server as a child process, and the
 * actual page markup loaded into jsdom so tests click what users click. */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));
export const REPO_ROOT = join(here, "..", "..");

export function fixtureJson(name: string): string {
  return readFileSync(
    join(REPO_ROOT, "tests", "fixtures", `${name}.json`),
    "utf-8",
  );
}

export interface TestServer {
  baseUrl: string;
  stop(): void;
}

/** Start `debug serve` on a free-ish port with throwaway storage and wait
 * until it answers. */
export async function startServer(): Promise<TestServer> {
  const port = 18000 + Math.floor(Math.random() * 10000);
  const baseUrl = `http://127.0.0.1:${port}`;
  const dataDir = mkdtempSync(join(tmpdir(), "kbdebug-ui-"));
  const proc: ChildProcess = spawn(
    "python3",
    ["-m", "kbdebug.cli", "serve", "--port", String(port),
     "--data-dir", dataDir],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  const deadline = Date.now() + 20000;
  for (;;) {
    try {
      const res = await fetch(`${baseUrl}/sessions/probe`);
      if (res.status === 404) break; // up: unknown session is a clean 404
    } catch {
      /* not listening yet */
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error("API server did not come up");
    }
    await sleep(100);
  }
  return {
    baseUrl,
    stop() {
      proc.kill();
      rmSync(dataDir, { recursive: true, force: true });
    },
  };
}

/** Put the real index.html body into jsdom (module scripts do not run from
 * innerHTML, so booting stays explicit). */
export function loadPage(): void {
  const html = readFileSync(join(here, "..", "index.html"), "utf-8");
  const body = /<body>([\s\S]*)<\/body>/.exec(html);
  if (!body) throw new Error("index.html has no body");
  document.body.innerHTML = body[1];
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Poll until `check` stops throwing/returning false. */
export async function waitFor(
  check: () => boolean,
  timeoutMs = 10000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      if (check()) return;
    } catch {
      /* keep waiting */
    }
    if (Date.now() > deadline) throw new Error("condition never became true");
    await sleep(25);
  }
}

export function click(selector: string): void {
  const el = document.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`nothing matches ${selector}`);
  el.click();
}

export function textOf(selector: string): string {
  const el = document.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`nothing matches ${selector}`);
  return el.textContent ?? "";
}
