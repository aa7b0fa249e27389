import { describe, expect, it } from "vitest";

import type { SessionRecord } from "../src/api.js";
import {
  exportProposalJson,
  formatPercent,
  projectRecord,
  renderSession,
  sessionHtml,
} from "../src/view.js";

function chainRecord(overrides: Partial<SessionRecord["snapshot"]> = {}): SessionRecord {
  return {
    session_id: "abc123",
    created: 1000.0,
    updated: 1001.0,
    snapshot: {
      dpi: {
        kb: ["A sub B", "B sub C", "C sub D", "D sub R"],
        background: ["A(w)", "clause !R(w)"],
        positive_tests: [],
        negative_tests: [],
        requirements: ["consistency"],
        witness_budget: 1,
        entailment_kinds: ["assertions"],
      },
      config: {},
      leading: [[1], [2], [3], [4]],
      belief: [[[1], 0.25], [[2], 0.25], [[3], 0.25], [[4], 0.25]],
      history: [],
      status: "awaiting-answer",
      pending: { formulas: ["C(w)"], partition: {} },
      proposal: null,
      contradiction: false,
      ...overrides,
    },
  };
}

describe("record projection", () => {
  it("lines belief bars up with the leading diagnoses", () => {
    const view = projectRecord(
      chainRecord({
        leading: [[2], [1]],
        belief: [[[1], 0.75], [[2], 0.25]],
      }),
    );
    expect(view.belief).toEqual([
      { ids: [2], p: 0.25 },
      { ids: [1], p: 0.75 },
    ]);
  });

  it("treats a diagnosis missing from the belief as zero mass", () => {
    const view = projectRecord(chainRecord({ belief: [[[1], 1.0]] }));
    expect(view.belief.map((b) => b.p)).toEqual([1.0, 0, 0, 0]);
  });

  it("only exposes the proposal once the session concluded", () => {
    const pending = projectRecord(
      chainRecord({
        proposal: { diagnosis: [1], solution_kb: [] },
      }),
    );
    expect(pending.proposal).toBeNull();
    const done = projectRecord(
      chainRecord({
        status: "converged",
        pending: null,
        proposal: { diagnosis: [1], solution_kb: ["B sub C"] },
      }),
    );
    expect(done.proposal).toEqual({ diagnosis: [1], solution_kb: ["B sub C"] });
  });

  it("recognizes a knowledge base that was already valid", () => {
    const view = projectRecord(
      chainRecord({
        status: "converged",
        pending: null,
        leading: [[]],
        belief: [[[], 1.0]],
        proposal: { diagnosis: [], solution_kb: ["A sub B"] },
      }),
    );
    expect(view.alreadyValid).toBe(true);
    expect(sessionHtml(view)).toContain("already valid");
  });
});

describe("session markup", () => {
  it("is a deterministic function of the record", () => {
    const a = sessionHtml(projectRecord(chainRecord()));
    const b = sessionHtml(projectRecord(chainRecord()));
    expect(a).toBe(b);
  });

  it("shows each displayed probability within rounding of the server value", () => {
    const record = chainRecord({
      belief: [[[1], 0.236], [[2], 0.0007], [[3], 0.49], [[4], 0.2733]],
    });
    const root = document.createElement("div");
    renderSession(projectRecord(record), root);
    const shown = [...root.querySelectorAll(".bar-value")].map(
      (el) => el.textContent ?? "",
    );
    const server = record.snapshot.belief.map(([, p]) => p);
    expect(shown).toHaveLength(server.length);
    shown.forEach((text, i) => {
      const parsed = Number(text.replace("%", "")) / 100;
      expect(Math.abs(parsed - server[i])).toBeLessThanOrEqual(0.0005);
    });
  });

  it("renders the pending query with logic glyphs and answer buttons", () => {
    const root = document.createElement("div");
    renderSession(
      projectRecord(chainRecord({
        pending: { formulas: ["B sub C", "C(w)"], partition: {} },
      })),
      root,
    );
    const formulas = [...root.querySelectorAll("#query-panel .formula")].map(
      (el) => el.textContent,
    );
    expect(formulas).toEqual(["B ⊑ C", "C(w)"]);
    for (const action of ["yes", "no", "skip"]) {
      expect(root.querySelector(`[data-action="${action}"]`)).not.toBeNull();
    }
  });

  it("escapes hostile statement text", () => {
    const root = document.createElement("div");
    renderSession(
      projectRecord(chainRecord({
        pending: { formulas: ["<img src=x onerror=alert(1)>"], partition: {} },
      })),
      root,
    );
    expect(root.querySelector("img")).toBeNull();
    expect(root.querySelector("#query-panel")?.textContent).toContain(
      "<img src=x onerror=alert(1)>",
    );
  });

  it("disables export until a proposal exists", () => {
    const root = document.createElement("div");
    renderSession(projectRecord(chainRecord()), root);
    const button = root.querySelector<HTMLButtonElement>(
      '#proposal-panel [data-action="export"]',
    );
    expect(button?.disabled).toBe(true);
  });

  it("shows the accepted diagnosis as axiom ids with their statements", () => {
    const root = document.createElement("div");
    renderSession(
      projectRecord(chainRecord({
        status: "converged",
        pending: null,
        leading: [[1]],
        belief: [[[1], 1.0]],
        history: [
          { query: ["C(w)"], partition: {}, answer: "no" },
          { query: ["B(w)"], partition: {}, answer: "no" },
        ],
        proposal: {
          diagnosis: [1],
          solution_kb: ["B sub C", "C sub D", "D sub R"],
        },
      })),
      root,
    );
    expect(root.querySelector("#proposal-diagnosis")?.textContent).toBe(
      "[ax1]",
    );
    expect(root.querySelector("#proposal-panel")?.textContent).toContain(
      "A ⊑ B",
    );
    const history = [...root.querySelectorAll("#history-panel li")].map(
      (el) => el.textContent,
    );
    expect(history).toEqual(["C(w)no", "B(w)no"]);
  });
});

describe("repair export", () => {
  it("re-serializes the server proposal without reshaping", () => {
    const record = chainRecord({
      status: "converged",
      pending: null,
      proposal: { diagnosis: [1], solution_kb: ["B sub C"] },
    });
    expect(exportProposalJson(record)).toBe(
      JSON.stringify(record.snapshot.proposal, null, 2),
    );
  });

  it("yields nothing before convergence", () => {
    expect(exportProposalJson(chainRecord())).toBeNull();
  });
});
