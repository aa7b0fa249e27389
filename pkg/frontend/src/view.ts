/** Projection and rendering of a session.
 *
 * `projectRecord` reduces the server record (GET /sessions/{id}) to exactly
 * what the screen shows; `renderSession` turns that into markup. Both are
 * pure: same record in, same bytes out — which is what makes a mid-session
 * page reload invisible. No diagnosis logic lives here; eliminations,
 * probabilities, and proposals all arrive precomputed from the server.
 */

import type { RepairProposal, SessionRecord, SessionStatus } from "./api.js";
import { renderStatement } from "./formulas.js";

export interface BeliefBar {
  ids: number[];
  p: number;
}

export interface SessionView {
  sessionId: string;
  status: SessionStatus;
  contradiction: boolean;
  /** Pending query statements, raw server syntax. */
  query: string[] | null;
  leading: number[][];
  /** One bar per leading diagnosis, in server order. */
  belief: BeliefBar[];
  history: { query: string[]; answer: "yes" | "no" }[];
  proposal: RepairProposal | null;
  /** KB axiom texts, 1-based ids. */
  axioms: string[];
  /** Converged at creation with nothing to retract. */
  alreadyValid: boolean;
}

export function projectRecord(record: SessionRecord): SessionView {
  const snap = record.snapshot;
  const beliefByKey = new Map<string, number>();
  for (const [ids, p] of snap.belief) {
    beliefByKey.set(JSON.stringify(ids), p);
  }
  const concluded = snap.status === "converged" || snap.status === "exhausted";
  return {
    sessionId: record.session_id,
    status: snap.status,
    contradiction: snap.contradiction,
    query: snap.pending ? [...snap.pending.formulas] : null,
    leading: snap.leading.map((ids) => [...ids]),
    belief: snap.leading.map((ids) => ({
      ids: [...ids],
      p: beliefByKey.get(JSON.stringify(ids)) ?? 0,
    })),
    history: snap.history.map((h) => ({
      query: [...h.query],
      answer: h.answer,
    })),
    proposal: concluded ? snap.proposal : null,
    axioms: [...snap.dpi.kb],
    alreadyValid:
      snap.status === "converged" &&
      snap.history.length === 0 &&
      snap.proposal !== null &&
      snap.proposal.diagnosis.length === 0,
  };
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatPercent(p: number): string {
  return `${(p * 100).toFixed(1)}%`;
}

export function axiomLabel(ids: number[]): string {
  return ids.map((i) => `ax${i}`).join(", ");
}

function axiomTitle(ids: number[], axioms: string[]): string {
  return ids
    .map((i) => `ax${i}: ${renderStatement(axioms[i - 1] ?? "?")}`)
    .join("\n");
}

const STATUS_TEXT: Record<SessionStatus, string> = {
  "awaiting-answer": "Awaiting your answer",
  converged: "Converged — diagnosis accepted",
  exhausted: "No further discriminating query — best candidate proposed",
  aborted: "Aborted — the answers contradict every candidate",
};

function bannerHtml(view: SessionView): string {
  if (view.alreadyValid) {
    return `<div class="banner ok" data-status="${view.status}">` +
      `Knowledge base already valid — nothing to repair</div>`;
  }
  const note = view.contradiction
    ? `<span class="note">every candidate was ruled out</span>`
    : "";
  return `<div class="banner ${view.status}" data-status="${view.status}">` +
    `${STATUS_TEXT[view.status]}${note}</div>`;
}

function queryHtml(view: SessionView): string {
  if (!view.query) {
    return `<section class="panel" id="query-panel"><h2>Query</h2>` +
      `<p class="muted">No pending query.</p></section>`;
  }
  const items = view.query
    .map((t) => `<li class="formula">${escapeHtml(renderStatement(t))}</li>`)
    .join("");
  return `<section class="panel" id="query-panel"><h2>Query</h2>` +
    `<p>Should the intended knowledge base entail:</p>` +
    `<ul class="formulas">${items}</ul>` +
    `<div class="answers">` +
    `<button data-action="yes">Yes</button>` +
    `<button data-action="no">No</button>` +
    `<button data-action="skip">Skip</button>` +
    `</div></section>`;
}

function candidatesHtml(view: SessionView): string {
  const rows = view.belief
    .map(({ ids, p }) => {
      const label = escapeHtml(axiomLabel(ids));
      const title = escapeHtml(axiomTitle(ids, view.axioms));
      const pct = formatPercent(p);
      return `<div class="bar-row" title="${title}">` +
        `<span class="bar-label">[${label}]</span>` +
        `<span class="bar-track">` +
        `<span class="bar-fill" style="width: ${pct}"></span></span>` +
        `<span class="bar-value">${pct}</span></div>`;
    })
    .join("");
  return `<section class="panel" id="candidates-panel">` +
    `<h2>Leading diagnoses</h2>` +
    (rows || `<p class="muted">None.</p>`) + `</section>`;
}

function historyHtml(view: SessionView): string {
  const items = view.history
    .map((h) => {
      const q = h.query.map((t) => escapeHtml(renderStatement(t))).join(", ");
      return `<li><span class="q">${q}</span>` +
        `<span class="answer ${h.answer}">${h.answer}</span></li>`;
    })
    .join("");
  return `<section class="panel" id="history-panel"><h2>History</h2>` +
    (items ? `<ol class="history">${items}</ol>`
           : `<p class="muted">No answers yet.</p>`) + `</section>`;
}

function proposalHtml(view: SessionView): string {
  if (!view.proposal) {
    return `<section class="panel" id="proposal-panel"><h2>Repair proposal</h2>` +
      `<p class="muted">Appears once the session concludes.</p>` +
      `<button data-action="export" disabled>Export JSON</button></section>`;
  }
  const { diagnosis, solution_kb } = view.proposal;
  const retract = diagnosis.length
    ? diagnosis
        .map((i) =>
          `<li><code>ax${i}</code> ` +
          `${escapeHtml(renderStatement(view.axioms[i - 1] ?? "?"))}</li>`)
        .join("")
    : `<li class="muted">nothing</li>`;
  const kept = solution_kb
    .map((t) => `<li class="formula">${escapeHtml(renderStatement(t))}</li>`)
    .join("");
  return `<section class="panel" id="proposal-panel"><h2>Repair proposal</h2>` +
    `<p>Retract <span id="proposal-diagnosis">[${escapeHtml(
      axiomLabel(diagnosis))}]</span>:</p>` +
    `<ul class="retract">${retract}</ul>` +
    `<p>Repaired knowledge base:</p>` +
    `<ul class="formulas">${kept}</ul>` +
    `<button data-action="export">Export JSON</button></section>`;
}

/** The whole session region. Pure function of the view. */
export function sessionHtml(view: SessionView): string {
  return bannerHtml(view) + queryHtml(view) + candidatesHtml(view) +
    historyHtml(view) + proposalHtml(view);
}

export function renderSession(view: SessionView, root: HTMLElement): void {
  root.innerHTML = sessionHtml(view);
}

/** Exact bytes for the repair download: the server's proposal, re-serialized
 * without reshaping so the file matches the snapshot field for field. */
export function exportProposalJson(record: SessionRecord): string | null {
  const proposal = record.snapshot.proposal;
  if (proposal === null) return null;
  return JSON.stringify(proposal, null, 2);
}
