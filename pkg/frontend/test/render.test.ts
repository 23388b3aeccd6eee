import { describe, expect, it } from "vitest";

import {
  formChoices,
  renderActionForm,
  renderChecklist,
  renderDebrief,
  renderEvidencePanel,
  renderFeedbackEntry,
  renderNodeBoard,
  renderRestorePoints,
  restorePointsFor,
} from "../src/render.js";
import { ACTION_KINDS, EVIDENCE_KINDS } from "../src/types.js";
import { fixtures } from "./helpers.js";

const flagship = fixtures.fresh_session;
const micro = fixtures.micro_session;

describe("node board", () => {
  it("shows one card per node with all four badges", () => {
    const board = renderNodeBoard(flagship.view, flagship.state);
    const cards = board.querySelectorAll(".node-card");
    expect(cards.length).toBe(flagship.view.graph.nodes.length);
    for (const card of cards) {
      const letters = [...card.querySelectorAll(".badge")].map((b) =>
        b.getAttribute("data-metric"),
      );
      expect(letters).toEqual(["A", "T", "E", "S"]);
    }
  });

  it("raises the trust badge after a restore from a verified point", () => {
    const before = renderNodeBoard(micro.view, micro.state);
    const restored = fixtures.micro_steps[3]!;
    const after = renderNodeBoard(micro.view, restored.state);
    const trustOf = (board: HTMLElement) =>
      board
        .querySelector('[data-node="app"] [data-metric="T"]')
        ?.getAttribute("data-level");
    expect(trustOf(before)).toBe("0");
    expect(trustOf(after)).toBe("2");
  });

  it("tracks the reintegration gate stage on OT cards", () => {
    const before = renderNodeBoard(micro.view, micro.state);
    expect(before.querySelector('[data-gate="line"]')?.textContent).toContain("closed");
    const opened = fixtures.micro_steps[6]!;
    const after = renderNodeBoard(micro.view, opened.state);
    expect(after.querySelector('[data-gate="line"]')?.textContent).toContain("open");
  });
});

describe("evidence panel", () => {
  it("always groups by the nine evidence kinds, in order", () => {
    const panel = renderEvidencePanel(flagship.state.evidence);
    const kinds = [...panel.querySelectorAll("[data-evidence-kind]")].map((g) =>
      g.getAttribute("data-evidence-kind"),
    );
    expect(kinds).toEqual([...EVIDENCE_KINDS]);
  });

  it("files each item under its kind and marks empty groups", () => {
    const last = fixtures.micro_steps.at(-1);
    expect(last).toBeDefined();
    const items = last!.state.evidence;
    const panel = renderEvidencePanel(items);
    for (const kind of EVIDENCE_KINDS) {
      const group = panel.querySelector(`[data-evidence-kind="${kind}"]`);
      const expected = items.filter((i) => i.kind === kind).length;
      expect(group?.querySelectorAll(".evidence-item").length).toBe(expected);
      if (expected === 0) {
        expect(group?.textContent).toContain("none yet");
      }
    }
    expect(items.length).toBeGreaterThan(5);
  });
});

describe("restore point catalog", () => {
  it("lists both MES points with their ages", () => {
    const panel = renderRestorePoints(flagship.view);
    const mesRows = [...panel.querySelectorAll("tr[data-restore-point]")].filter(
      (row) => row.textContent?.includes("mes"),
    );
    expect(mesRows.length).toBeGreaterThanOrEqual(2);
    for (const row of mesRows) {
      expect(row.querySelector(".age")?.textContent).toMatch(/^\d+ ticks old$/);
    }
  });
});

describe("action form", () => {
  it("offers exactly the engine action kinds, nothing else", () => {
    const form = renderActionForm(flagship.view, flagship.mission);
    const kinds = [...form.kindSelect.options].map((o) => o.value);
    expect(kinds).toEqual([...ACTION_KINDS]);
  });

  it("scopes subjects to what each kind can act on", () => {
    const view = flagship.view;
    const ot = view.graph.nodes.filter((n) => n.kind === "ot_component").map((n) => n.id);
    expect(formChoices("open_gate", view, flagship.mission).subjects).toEqual(ot);
    expect(formChoices("reconnect", view, flagship.mission).subjects).toEqual(ot);
    expect(formChoices("declare_mvf", view, flagship.mission).subjects).toEqual([
      flagship.mission,
    ]);
    const identities = view.graph.nodes.filter((n) => n.kind === "identity").map((n) => n.id);
    expect(formChoices("reset_credentials", view, flagship.mission).subjects).toEqual(
      identities,
    );
    expect(formChoices("enter_degraded_mode", view, flagship.mission).subjects).toEqual(
      view.degraded_procedures.map((p) => p.id),
    );
  });

  it("enables the restore point dropdown only for restore", () => {
    const form = renderActionForm(flagship.view, flagship.mission);
    expect(form.restorePointSelect.disabled).toBe(true);
    form.kindSelect.value = "restore";
    form.kindSelect.dispatchEvent(new Event("change"));
    expect(form.restorePointSelect.disabled).toBe(false);
    const subject = form.subjectSelect.value;
    const offered = [...form.restorePointSelect.options].map((o) => o.value);
    expect(offered).toEqual(restorePointsFor(flagship.view, subject));
    expect(offered.length).toBeGreaterThan(0);
  });
});

describe("declaration checklist", () => {
  it("starts with five red markers", () => {
    const panel = renderChecklist(null);
    const conditions = panel.querySelectorAll(".cond");
    expect(conditions.length).toBe(5);
    for (const row of conditions) {
      expect(row.className).toContain("cond-unestablished");
      expect(row.querySelector(".marker")?.textContent).toBe("x");
    }
  });

  it("colors conditions from the engine's declaration feedback", () => {
    const declared = fixtures.declare_fresh.state.declared;
    expect(declared).not.toBeNull();
    const panel = renderChecklist(declared);
    const failed = declared!.failed_conditions;
    for (const row of panel.querySelectorAll(".cond")) {
      const name = row.getAttribute("data-condition");
      if (name !== null && failed.includes(name)) {
        expect(row.className).toContain("cond-failed");
      } else {
        expect(row.className).toContain("cond-ok");
      }
    }
    expect(panel.querySelector(".verdict")?.textContent).toContain("rejected");
  });

  it("goes fully green on an approved declaration", () => {
    const last = fixtures.micro_steps.at(-1);
    const panel = renderChecklist(last!.state.declared);
    expect(panel.querySelectorAll(".cond-ok").length).toBe(5);
    expect(panel.querySelector(".verdict")?.textContent).toContain("approved");
  });
});

describe("feedback entries", () => {
  it("renders blocked outcomes as a neutral chip with the engine reason", () => {
    const entry = renderFeedbackEntry(fixtures.blocked_gate.event);
    const chip = entry.querySelector(".chip");
    expect(chip?.className).toContain("chip-blocked");
    expect(chip?.className).not.toContain("violation");
    expect(entry.querySelector(".reason")?.textContent).toContain("validated offline");
    expect(entry.querySelectorAll(".tag").length).toBe(0);
  });

  it("names the restore point in restore entries and lists new evidence", () => {
    const restore = fixtures.micro_steps[3];
    const entry = renderFeedbackEntry(restore!.event);
    expect(entry.textContent).toContain("rp-app-05");
    expect(entry.querySelectorAll(".evidence-note").length).toBe(
      restore!.event.evidence_added.length,
    );
  });
});

describe("debrief screen", () => {
  it("shows FM02/FM03/FM05 cards for the careless flagship run", () => {
    const screen = renderDebrief(fixtures.reckless_debrief);
    for (const code of ["FM02", "FM03", "FM05"]) {
      const card = screen.querySelector(`[data-fm="${code}"]`);
      expect(card, `missing card ${code}`).not.toBeNull();
      expect(card?.querySelector("p")?.textContent?.length).toBeGreaterThan(10);
    }
  });

  it("reveals the planted truth after the session", () => {
    const screen = renderDebrief(fixtures.reckless_debrief);
    const truth = screen.querySelector('[data-panel="truth"]');
    for (const backup of fixtures.reckless_debrief.truth.contaminated_backups) {
      expect(truth?.textContent).toContain(backup);
    }
    expect(truth?.textContent).toContain("->");
  });

  it("renders one metrics row per machine-report key", () => {
    const screen = renderDebrief(fixtures.approved_debrief);
    const keys = [...screen.querySelectorAll("[data-metric-key]")].map((r) =>
      r.getAttribute("data-metric-key"),
    );
    expect(keys).toEqual(Object.keys(fixtures.approved_debrief.metrics));
  });

  it("shows an empty finding list for a zero-action session", () => {
    const screen = renderDebrief(fixtures.empty_debrief);
    expect(screen.querySelectorAll(".fm-card").length).toBe(0);
    expect(screen.querySelector(".findings")?.textContent).toContain("none observed");
    expect(fixtures.empty_debrief.verdict).toBe("undeclared");
  });

  it("is identical when rendered twice", () => {
    const first = renderDebrief(fixtures.approved_debrief);
    const second = renderDebrief(fixtures.approved_debrief);
    expect(second.outerHTML).toBe(first.outerHTML);
  });

  it("walks the timeline in submitted order", () => {
    const screen = renderDebrief(fixtures.approved_debrief);
    const rows = [...screen.querySelectorAll(".timeline li")];
    expect(rows.length).toBe(fixtures.approved_debrief.timeline.length);
    expect(rows[0]?.textContent).toContain("assess_mission_impact");
  });
});
