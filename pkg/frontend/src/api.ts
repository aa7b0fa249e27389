/** Typed client for the kbdebug session API.
 *
 * The server owns every piece of session state; this client only moves JSON.
 * All reads that feed the screen go through `getSession`, so the rendered
 * view is always a pure projection of one GET response.
 */

export type Answer = "yes" | "no" | "skip";

export type SessionStatus =
  | "awaiting-answer"
  | "converged"
  | "exhausted"
  | "aborted";

export interface QuerySnapshot {
  formulas: string[];
  partition: unknown;
}

export interface HistoryEntry {
  query: string[];
  partition: unknown;
  answer: "yes" | "no";
}

export interface RepairProposal {
  diagnosis: number[];
  solution_kb: string[];
}

export interface DpiSnapshot {
  kb: string[];
  background: string[];
  positive_tests: string[][];
  negative_tests: string[][];
  requirements: string[];
  witness_budget: number;
  entailment_kinds: string[];
  fault_model?: unknown;
}

/** The server's full session serialization (`snapshot` of the record). */
export interface SessionSnapshot {
  dpi: DpiSnapshot;
  config: unknown;
  leading: number[][];
  belief: [number[], number][];
  history: HistoryEntry[];
  status: SessionStatus;
  pending: QuerySnapshot | null;
  proposal: RepairProposal | null;
  contradiction: boolean;
}

export interface SessionRecord {
  session_id: string;
  snapshot: SessionSnapshot;
  created: number;
  updated: number;
}

/** Shape of POST /sessions and POST .../answer responses (not rendered;
 * the screen re-fetches the record instead). */
export interface MutationView {
  session_id: string;
  status: SessionStatus;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `cannot reach the server at ${url}: ${err}`);
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof (body as { detail?: unknown }).detail === "string"
        ? (body as { detail: string }).detail
        : `${response.status} ${response.statusText}`;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class Api {
  constructor(public baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  createSession(dpi: unknown, config: unknown): Promise<MutationView> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ dpi, config }),
    });
  }

  getSession(sessionId: string): Promise<SessionRecord> {
    return request(`${this.baseUrl}/sessions/${sessionId}`);
  }

  answer(sessionId: string, answer: Answer): Promise<MutationView> {
    return request(`${this.baseUrl}/sessions/${sessionId}/answer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ answer }),
    });
  }
}
