/**
 * Wire types for the exercise service HTTP API.
 *
 * Hand-mirrored from the service's JSON responses. Deliberately narrow:
 * only fields the responder is allowed to see exist here, so a component
 * cannot render ground truth before the debrief even by accident. The
 * debrief types are the single exception and say so.
 */

export type NodeKind =
  | "it_system"
  | "ot_component"
  | "identity"
  | "data_store"
  | "person"
  | "external_partner"
  | "network_path"
  | "procedure";

export type EdgeRelation =
  | "requires"
  | "authenticates_via"
  | "reads_data_from"
  | "controlled_by"
  | "supplied_by"
  | "connects_via";

export type SafetyStatus = "unknown" | "blocked" | "approved";
export type GateStage = "closed" | "validated" | "open";
export type Outcome = "applied" | "blocked" | "violation";
export type Verdict = "approved" | "conditional" | "rejected" | "undeclared";

export const ACTION_KINDS = [
  "assess_mission_impact",
  "forensic_scan",
  "restore",
  "rebuild_identity",
  "reset_credentials",
  "validate_offline",
  "open_gate",
  "reconnect",
  "enter_degraded_mode",
  "exit_degraded_mode",
  "confirm_supplier",
  "declare_mvf",
  "rollback",
] as const;
export type ActionKind = (typeof ACTION_KINDS)[number];

export const EVIDENCE_KINDS = [
  "restore_source",
  "compromise_assessment",
  "identity_state",
  "configuration_validation",
  "dependency_consistency",
  "ot_reintegration_check",
  "degraded_mode_limits",
  "monitoring_plan",
  "residual_risk",
] as const;
export type EvidenceKind = (typeof EVIDENCE_KINDS)[number];

export const CONDITION_NAMES = [
  "capability",
  "dependency",
  "trust",
  "evidence",
  "reintegration",
] as const;
export type ConditionName = (typeof CONDITION_NAMES)[number];

export interface NodeInfo {
  id: string;
  kind: NodeKind;
  name: string;
  criticality: number;
}

export interface EdgeInfo {
  source: string;
  target: string;
  relation: EdgeRelation;
}

export interface NodeState {
  availability: number;
  trust: number;
  evidence: number;
  safety: SafetyStatus;
}

export interface RestorePointInfo {
  id: string;
  target_node: string;
  age_ticks: number;
  verified: boolean;
  completeness: "complete" | "partial";
  verification_tag?: string;
}

export interface DegradedProcedureInfo {
  id: string;
  substitutes_for: string;
  max_duration_ticks: number;
  requires_approval_by: string;
  expiry_action: "rollback" | "escalate";
}

export interface ExternalConstraintInfo {
  id: string;
  kind:
    | "supplier_outage"
    | "customer_deadline"
    | "regulatory_requirement"
    | "vendor_access";
  subject: string;
  window: [number, number];
}

export interface MissionInfo {
  id: string;
  production_scope: { roots: string[]; product_family: string };
  throughput: number;
  duration_ticks: number;
  thresholds: { a_min: number; t_min: number; e_min: number };
  safety_envelope: string[];
  quality_requirements: string[];
  degraded_limits: string[];
  monitoring_rollback: string[];
  min_evidence_completeness: number;
}

/** Redacted scenario document: structure, not attacker ground truth. */
export interface ScenarioView {
  scenario_id: string;
  graph: {
    nodes: NodeInfo[];
    edges: EdgeInfo[];
    states: Record<string, NodeState>;
  };
  compromise: {
    encrypted_nodes: string[];
    exposed_credentials: string[];
    ot_visibility_uncertain: string[];
  };
  restore_points: RestorePointInfo[];
  degraded_procedures: DegradedProcedureInfo[];
  external_constraints: ExternalConstraintInfo[];
  missions: MissionInfo[];
  action_durations: Record<string, number>;
  horizon_ticks: number;
}

export interface EvidenceItem {
  id: string;
  kind: EvidenceKind;
  subject: string;
  detail: string;
  tick: number;
}

export interface DeclaredDecision {
  verdict: Verdict;
  failed_conditions: string[];
}

/** Live session state as the service reports it between actions. */
export interface PublicState {
  tick: number;
  nodes: Record<string, NodeState>;
  gates: Record<string, GateStage>;
  active_procedures: string[];
  evidence: EvidenceItem[];
  declared: DeclaredDecision | null;
  events_recorded: number;
  horizon_ticks: number;
}

export interface ActionRequest {
  kind: ActionKind;
  subject: string;
  auth_via?: string;
  restore_point?: string;
}

export interface WireEvent {
  tick: number;
  action: {
    kind: ActionKind;
    subject: string;
    auth_via?: string;
    restore_point?: string;
  };
  outcome: Outcome;
  duration: number;
  reason: string;
  violation_tags: string[];
  state_deltas: unknown[][];
  evidence_added: EvidenceItem[];
  warnings: string[];
}

export interface SessionSnapshot {
  session: string;
  scenario: string;
  mission: string;
  view: ScenarioView;
  state: PublicState;
}

export interface SessionDetail {
  session: string;
  scenario: string;
  mission: string;
  ended: boolean;
  view: ScenarioView;
  state: PublicState;
  events: WireEvent[];
}

export interface ActionFeedback {
  event: WireEvent;
  state: PublicState;
}

export interface FmFindingCard {
  code: string;
  description: string;
  occurrences: number;
  subjects: string[];
}

/** Post-session only. The one place ground truth is supposed to appear. */
export interface TruthReveal {
  encrypted_nodes: string[];
  exposed_credentials: string[];
  contaminated_backups: string[];
  lateral_movement_paths: string[][];
  ot_visibility_uncertain: string[];
}

export interface Debrief {
  scenario: string;
  mission: string;
  verdict: Verdict;
  metrics: Record<string, number | string | boolean | null>;
  failure_modes: FmFindingCard[];
  truth: TruthReveal;
  timeline: { tick: number; action: string; outcome: Outcome; tags: string[] }[];
}

export interface EndResponse {
  session: string;
  debrief: Debrief;
}

export interface ProblemDetail {
  status: number;
  title: string;
  detail: string;
  [extra: string]: unknown;
}
