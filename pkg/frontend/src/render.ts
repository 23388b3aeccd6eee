/**
 * DOM builders for the console. Every function is pure: state in, detached
 * element out. The app swaps panels wholesale after each confirmed server
 * response; nothing here speculates about what an action will do.
 */

import type {
  ActionKind,
  Debrief,
  DeclaredDecision,
  EvidenceItem,
  GateStage,
  MissionInfo,
  NodeInfo,
  NodeState,
  PublicState,
  ScenarioView,
  WireEvent,
} from "./types.js";
import { ACTION_KINDS, CONDITION_NAMES, EVIDENCE_KINDS } from "./types.js";

type Attrs = Record<string, string>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

const LEVEL_WORDS = ["unknown", "claimed", "validated", "verified"] as const;

export function levelWord(level: number): string {
  return LEVEL_WORDS[level] ?? `level ${level}`;
}

function words(identifier: string): string {
  return identifier.replace(/_/g, " ");
}

function badge(letter: string, level: number): HTMLElement {
  return el(
    "span",
    {
      class: `badge lvl-${level}`,
      title: `${letter}: ${levelWord(level)}`,
      "data-metric": letter,
      "data-level": String(level),
    },
    `${letter}${level}`,
  );
}

// --- node board ---

const KIND_ORDER = [
  "ot_component",
  "it_system",
  "data_store",
  "network_path",
  "identity",
  "external_partner",
  "procedure",
  "person",
];

export function renderNodeBoard(view: ScenarioView, state: PublicState): HTMLElement {
  const board = el("section", { class: "panel node-board", "data-panel": "nodes" });
  board.append(el("h2", {}, "dependencies"));
  const ordered = [...view.graph.nodes].sort(
    (a, b) =>
      KIND_ORDER.indexOf(a.kind) - KIND_ORDER.indexOf(b.kind) ||
      a.id.localeCompare(b.id),
  );
  for (const node of ordered) {
    board.append(renderNodeCard(node, state));
  }
  return board;
}

function renderNodeCard(node: NodeInfo, state: PublicState): HTMLElement {
  const current: NodeState = state.nodes[node.id] ?? {
    availability: 0,
    trust: 0,
    evidence: 0,
    safety: "unknown",
  };
  const card = el("article", {
    class: `node-card kind-${node.kind}`,
    "data-node": node.id,
  });
  card.append(
    el("header", {}, el("strong", {}, node.name), el("small", {}, ` ${words(node.kind)}`)),
  );
  const row = el("div", { class: "badges" });
  row.append(badge("A", current.availability));
  row.append(badge("T", current.trust));
  row.append(badge("E", current.evidence));
  row.append(
    el(
      "span",
      {
        class: `badge safety-${current.safety}`,
        "data-metric": "S",
        title: `safety: ${current.safety}`,
      },
      `S ${current.safety}`,
    ),
  );
  const gate: GateStage | undefined = state.gates[node.id];
  if (gate !== undefined) {
    row.append(
      el("span", { class: `gate gate-${gate}`, "data-gate": node.id }, `gate ${gate}`),
    );
  }
  card.append(row);
  return card;
}

// --- evidence bundle ---

export function renderEvidencePanel(items: EvidenceItem[]): HTMLElement {
  const panel = el("section", { class: "panel evidence", "data-panel": "evidence" });
  panel.append(el("h2", {}, `evidence bundle (${items.length})`));
  for (const kind of EVIDENCE_KINDS) {
    const matching = items.filter((item) => item.kind === kind);
    const group = el("div", { class: "evidence-group", "data-evidence-kind": kind });
    group.append(
      el("h3", {}, `${words(kind)} `, el("span", { class: "count" }, String(matching.length))),
    );
    if (matching.length === 0) {
      group.append(el("p", { class: "empty" }, "none yet"));
    }
    for (const item of matching) {
      group.append(
        el(
          "p",
          { class: "evidence-item", "data-evidence-id": item.id },
          el("span", { class: "tick" }, `t${item.tick} `),
          el("strong", {}, item.subject),
          `: ${item.detail}`,
        ),
      );
    }
    panel.append(group);
  }
  return panel;
}

// --- restore points ---

export function renderRestorePoints(view: ScenarioView): HTMLElement {
  const panel = el("section", { class: "panel restore-points", "data-panel": "restore-points" });
  panel.append(el("h2", {}, "restore points"));
  const table = el("table");
  table.append(
    el(
      "tr",
      {},
      el("th", {}, "id"),
      el("th", {}, "target"),
      el("th", {}, "age"),
      el("th", {}, "verified"),
      el("th", {}, "completeness"),
    ),
  );
  for (const point of view.restore_points) {
    table.append(
      el(
        "tr",
        { "data-restore-point": point.id },
        el("td", {}, point.id),
        el("td", {}, point.target_node),
        el("td", { class: "age" }, `${point.age_ticks} ticks old`),
        el("td", {}, point.verified ? `yes (${point.verification_tag ?? "tagged"})` : "no"),
        el("td", {}, point.completeness),
      ),
    );
  }
  panel.append(table);
  return panel;
}

// --- action form ---

export interface FormChoices {
  kind: ActionKind;
  subjects: string[];
  auth: string[];
  restorePoints: string[];
}

/** Legal dropdown contents per action kind. Pure so tests can table it. */
export function formChoices(
  kind: ActionKind,
  view: ScenarioView,
  missionId: string,
): FormChoices {
  const nodes = view.graph.nodes;
  const byKind = (k: string) => nodes.filter((n) => n.kind === k).map((n) => n.id);
  const identities = byKind("identity");
  const missionIds = view.missions.map((m: MissionInfo) => m.id).filter((m) => m === missionId);
  let subjects: string[];
  switch (kind) {
    case "assess_mission_impact":
    case "declare_mvf":
    case "rollback":
      subjects = missionIds;
      break;
    case "forensic_scan":
      subjects = [...view.restore_points.map((p) => p.id), ...nodes.map((n) => n.id)];
      break;
    case "restore":
      subjects = [...new Set(view.restore_points.map((p) => p.target_node))];
      break;
    case "rebuild_identity":
    case "reset_credentials":
      subjects = identities;
      break;
    case "open_gate":
    case "reconnect":
      subjects = byKind("ot_component");
      break;
    case "enter_degraded_mode":
    case "exit_degraded_mode":
      subjects = view.degraded_procedures.map((p) => p.id);
      break;
    case "confirm_supplier":
      subjects = byKind("external_partner");
      break;
    case "validate_offline":
      subjects = nodes.map((n) => n.id);
      break;
  }
  return { kind, subjects, auth: identities, restorePoints: [] };
}

export function restorePointsFor(view: ScenarioView, subject: string): string[] {
  return view.restore_points.filter((p) => p.target_node === subject).map((p) => p.id);
}

export interface ActionFormHandles {
  root: HTMLFormElement;
  kindSelect: HTMLSelectElement;
  subjectSelect: HTMLSelectElement;
  authSelect: HTMLSelectElement;
  restorePointSelect: HTMLSelectElement;
  refresh(): void;
}

function fillOptions(select: HTMLSelectElement, values: string[], emptyLabel?: string) {
  select.textContent = "";
  if (emptyLabel !== undefined) {
    select.append(el("option", { value: "" }, emptyLabel));
  }
  for (const value of values) {
    select.append(el("option", { value }, value));
  }
}

/**
 * The submit form. One option per engine action kind, nothing else; the
 * subject/auth/restore-point dropdowns reshape when the kind changes.
 */
export function renderActionForm(view: ScenarioView, missionId: string): ActionFormHandles {
  const root = el("form", { class: "panel action-form", "data-panel": "action-form" });
  root.append(el("h2", {}, "next action"));

  const kindSelect = el("select", { name: "kind" });
  for (const kind of ACTION_KINDS) {
    kindSelect.append(el("option", { value: kind }, words(kind)));
  }
  const subjectSelect = el("select", { name: "subject" });
  const authSelect = el("select", { name: "auth_via" });
  const restorePointSelect = el("select", { name: "restore_point" });

  const refresh = () => {
    const choices = formChoices(kindSelect.value as ActionKind, view, missionId);
    fillOptions(subjectSelect, choices.subjects);
    fillOptions(authSelect, choices.auth, "(no identity)");
    const needsPoint = kindSelect.value === "restore";
    restorePointSelect.disabled = !needsPoint;
    fillOptions(
      restorePointSelect,
      needsPoint ? restorePointsFor(view, subjectSelect.value) : [],
    );
  };
  kindSelect.addEventListener("change", refresh);
  subjectSelect.addEventListener("change", refresh);

  root.append(
    el("label", {}, "action ", kindSelect),
    el("label", {}, "subject ", subjectSelect),
    el("label", {}, "authenticate via ", authSelect),
    el("label", {}, "restore point ", restorePointSelect),
    el("button", { type: "submit" }, "submit action"),
  );
  refresh();
  return { root, kindSelect, subjectSelect, authSelect, restorePointSelect, refresh };
}

// --- declaration checklist ---

/**
 * Five condition markers. A session starts with all five red: nothing is
 * established until the responder demonstrates it, and the only proof is
 * an actual declaration verdict. After declare_mvf the markers follow the
 * engine's failed_conditions exactly.
 */
export function renderChecklist(declared: DeclaredDecision | null): HTMLElement {
  const panel = el("section", { class: "panel checklist", "data-panel": "checklist" });
  panel.append(el("h2", {}, "declaration conditions"));
  if (declared === null) {
    panel.append(el("p", { class: "empty" }, "nothing established yet; declaring now would test all five"));
  } else {
    panel.append(
      el("p", { class: `verdict verdict-${declared.verdict}` }, `verdict: ${declared.verdict}`),
    );
  }
  for (const condition of CONDITION_NAMES) {
    const status =
      declared === null
        ? "unestablished"
        : declared.failed_conditions.includes(condition)
          ? "failed"
          : "ok";
    const marker = status === "ok" ? "ok" : "x";
    panel.append(
      el(
        "p",
        { class: `cond cond-${status}`, "data-condition": condition },
        el("span", { class: "marker" }, marker),
        ` ${condition}`,
      ),
    );
  }
  return panel;
}

// --- feedback log ---

export function renderFeedbackLog(events: WireEvent[]): HTMLElement {
  const panel = el("section", { class: "panel feedback", "data-panel": "feedback" });
  panel.append(el("h2", {}, "engine feedback"));
  if (events.length === 0) {
    panel.append(el("p", { class: "empty" }, "no actions submitted yet"));
  }
  for (const event of events) {
    panel.append(renderFeedbackEntry(event));
  }
  return panel;
}

function actionLabel(event: WireEvent): string {
  const a = event.action;
  if (a.restore_point !== undefined && a.restore_point !== null) {
    return `${words(a.kind)} ${a.subject} from ${a.restore_point}`;
  }
  return `${words(a.kind)} ${a.subject}`;
}

export function renderFeedbackEntry(event: WireEvent): HTMLElement {
  const entry = el("div", { class: `feedback-entry outcome-${event.outcome}` });
  entry.append(
    el("span", { class: "tick" }, `t${event.tick} `),
    el("strong", {}, actionLabel(event)),
    el("span", { class: `chip chip-${event.outcome}` }, ` ${event.outcome}`),
  );
  if (event.reason) {
    entry.append(el("p", { class: "reason" }, event.reason));
  }
  for (const tag of event.violation_tags) {
    entry.append(el("span", { class: "tag" }, tag));
  }
  for (const warning of event.warnings) {
    entry.append(el("p", { class: "warning" }, warning));
  }
  for (const item of event.evidence_added) {
    entry.append(
      el("p", { class: "evidence-note" }, `evidence: ${words(item.kind)} for ${item.subject}`),
    );
  }
  return entry;
}

// --- status strip and banners ---

export function renderStatusStrip(
  scenario: string,
  mission: string,
  state: PublicState,
): HTMLElement {
  const strip = el("header", { class: "status-strip", "data-panel": "status" });
  strip.append(
    el("span", { class: "scenario" }, scenario),
    el("span", { class: "mission" }, ` mission ${mission} `),
    el("span", { class: "tick" }, `tick ${state.tick} / ${state.horizon_ticks}`),
  );
  if (state.active_procedures.length > 0) {
    strip.append(
      el(
        "span",
        { class: "degraded" },
        ` degraded: ${state.active_procedures.join(", ")}`,
      ),
    );
  }
  return strip;
}

export function renderOfflineBanner(onRetry: () => void): HTMLElement {
  const banner = el("div", { class: "banner offline", "data-panel": "offline" });
  banner.append(el("span", {}, "service unreachable; your session is safe on the server"));
  const button = el("button", { type: "button" }, "retry");
  button.addEventListener("click", onRetry);
  banner.append(button);
  return banner;
}

export function renderProblemBanner(title: string, detail: string): HTMLElement {
  return el(
    "div",
    { class: "banner problem", "data-panel": "problem" },
    el("strong", {}, title),
    `: ${detail}`,
  );
}

// --- debrief ---

export function renderDebrief(debrief: Debrief): HTMLElement {
  const screen = el("section", { class: "debrief", "data-panel": "debrief" });
  screen.append(el("h2", {}, "debrief"));
  screen.append(
    el(
      "p",
      { class: `verdict verdict-${debrief.verdict}` },
      `${debrief.scenario} / ${debrief.mission}: ${debrief.verdict}`,
    ),
  );

  const metrics = el("table", { class: "metrics" });
  for (const [key, value] of Object.entries(debrief.metrics)) {
    metrics.append(
      el(
        "tr",
        { "data-metric-key": key },
        el("td", {}, words(key)),
        el("td", { class: "value" }, value === null ? "-" : String(value)),
      ),
    );
  }
  screen.append(metrics);

  const findings = el("div", { class: "findings" });
  findings.append(el("h3", {}, `failure modes (${debrief.failure_modes.length})`));
  if (debrief.failure_modes.length === 0) {
    findings.append(el("p", { class: "empty" }, "none observed"));
  }
  for (const finding of debrief.failure_modes) {
    findings.append(
      el(
        "article",
        { class: "fm-card", "data-fm": finding.code },
        el("h4", {}, `${finding.code} (${finding.occurrences})`),
        el("p", {}, finding.description),
        el("p", { class: "subjects" }, finding.subjects.join(", ")),
      ),
    );
  }
  screen.append(findings);

  const truth = el("div", { class: "truth-reveal", "data-panel": "truth" });
  truth.append(el("h3", {}, "what was actually true"));
  const truthRows: [string, string][] = [
    ["encrypted by the attacker", debrief.truth.encrypted_nodes.join(", ")],
    ["credentials exposed", debrief.truth.exposed_credentials.join(", ")],
    ["contaminated backups", debrief.truth.contaminated_backups.join(", ")],
    [
      "lateral movement",
      debrief.truth.lateral_movement_paths.map((p) => p.join(" -> ")).join("; "),
    ],
    ["OT visibility uncertain", debrief.truth.ot_visibility_uncertain.join(", ")],
  ];
  for (const [label, value] of truthRows) {
    truth.append(el("p", {}, el("strong", {}, `${label}: `), value || "none"));
  }
  screen.append(truth);

  const timeline = el("ol", { class: "timeline" });
  for (const step of debrief.timeline) {
    timeline.append(
      el(
        "li",
        { class: `outcome-${step.outcome}` },
        `t${step.tick} ${step.action} [${step.outcome}]` +
          (step.tags.length > 0 ? ` ${step.tags.join(" ")}` : ""),
      ),
    );
  }
  screen.append(timeline);
  return screen;
}
