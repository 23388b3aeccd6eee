/**
 * Session controller. Owns the only mutable client state (current session
 * snapshot + confirmed events) and re-renders panels from it after each
 * server response. The server stays authoritative throughout: a network
 * failure never guesses whether an action landed, it re-reads the session.
 */

import { ApiError, ExerciseClient, ServiceUnreachable } from "./api.js";
import {
  el,
  renderActionForm,
  renderChecklist,
  renderDebrief,
  renderEvidencePanel,
  renderFeedbackLog,
  renderNodeBoard,
  renderOfflineBanner,
  renderProblemBanner,
  renderRestorePoints,
  renderStatusStrip,
} from "./render.js";
import type {
  ActionKind,
  ActionRequest,
  Debrief,
  PublicState,
  ScenarioView,
  WireEvent,
} from "./types.js";

export interface ConnectOptions {
  scenario?: string;
  mission?: string;
  /** rejoin an existing session instead of creating one */
  session?: string;
}

export class ExerciseApp {
  readonly root: HTMLElement;
  readonly client: ExerciseClient;

  sessionId: string | null = null;
  scenario = "";
  mission = "";
  view: ScenarioView | null = null;
  state: PublicState | null = null;
  events: WireEvent[] = [];
  debrief: Debrief | null = null;

  constructor(root: HTMLElement, client: ExerciseClient) {
    this.root = root;
    this.client = client;
  }

  async connect(options: ConnectOptions = {}): Promise<void> {
    try {
      if (options.session !== undefined) {
        const detail = await this.client.getSession(options.session);
        this.sessionId = detail.session;
        this.scenario = detail.scenario;
        this.mission = detail.mission;
        this.view = detail.view;
        this.state = detail.state;
        this.events = detail.events;
      } else {
        const body: { scenario?: string; mission?: string } = {};
        if (options.scenario !== undefined) body.scenario = options.scenario;
        if (options.mission !== undefined) body.mission = options.mission;
        const snapshot = await this.client.createSession(body);
        this.sessionId = snapshot.session;
        this.scenario = snapshot.scenario;
        this.mission = snapshot.mission;
        this.view = snapshot.view;
        this.state = snapshot.state;
        this.events = [];
      }
    } catch (error) {
      if (error instanceof ServiceUnreachable) {
        this.showOffline(() => void this.connect(options));
        return;
      }
      if (error instanceof ApiError) {
        this.root.textContent = "";
        this.root.append(renderProblemBanner(error.problem.title, error.problem.detail));
        return;
      }
      throw error;
    }
    this.renderLive();
  }

  /** Pull the authoritative session record; used after connection hiccups. */
  async refresh(): Promise<void> {
    if (this.sessionId === null) return;
    await this.connect({ session: this.sessionId });
  }

  async submit(action: ActionRequest): Promise<void> {
    if (this.sessionId === null) return;
    try {
      const feedback = await this.client.act(this.sessionId, action);
      this.events = [...this.events, feedback.event];
      this.state = feedback.state;
    } catch (error) {
      if (error instanceof ServiceUnreachable) {
        // the POST may or may not have landed; only the server knows
        this.showOffline(() => void this.refresh());
        return;
      }
      if (error instanceof ApiError) {
        this.renderLive(error.problem.title, error.problem.detail);
        return;
      }
      throw error;
    }
    this.renderLive();
  }

  async end(): Promise<void> {
    if (this.sessionId === null) return;
    try {
      const response = await this.client.endSession(this.sessionId);
      this.debrief = response.debrief;
    } catch (error) {
      if (error instanceof ServiceUnreachable) {
        this.showOffline(() => void this.end());
        return;
      }
      if (error instanceof ApiError && error.problem["debrief"] !== undefined) {
        // ended twice: the service repeats the original debrief
        this.debrief = error.problem["debrief"] as Debrief;
      } else if (error instanceof ApiError) {
        this.renderLive(error.problem.title, error.problem.detail);
        return;
      } else {
        throw error;
      }
    }
    this.renderDebriefScreen();
  }

  private showOffline(retry: () => void): void {
    this.root.textContent = "";
    this.root.append(renderOfflineBanner(retry));
  }

  renderLive(problemTitle?: string, problemDetail?: string): void {
    if (this.view === null || this.state === null) return;
    this.root.textContent = "";
    this.root.append(renderStatusStrip(this.scenario, this.mission, this.state));
    if (problemTitle !== undefined) {
      this.root.append(renderProblemBanner(problemTitle, problemDetail ?? ""));
    }

    const form = renderActionForm(this.view, this.mission);
    form.root.addEventListener("submit", (submitEvent) => {
      submitEvent.preventDefault();
      const action: ActionRequest = {
        kind: form.kindSelect.value as ActionKind,
        subject: form.subjectSelect.value,
      };
      if (form.authSelect.value !== "") action.auth_via = form.authSelect.value;
      if (form.kindSelect.value === "restore" && form.restorePointSelect.value !== "") {
        action.restore_point = form.restorePointSelect.value;
      }
      void this.submit(action);
    });

    const endButton = el("button", { type: "button", class: "end-session" }, "end session for debrief");
    endButton.addEventListener("click", () => void this.end());

    this.root.append(
      renderChecklist(this.state.declared),
      renderNodeBoard(this.view, this.state),
      form.root,
      renderRestorePoints(this.view),
      renderEvidencePanel(this.state.evidence),
      renderFeedbackLog(this.events),
      endButton,
    );
  }

  renderDebriefScreen(): void {
    if (this.debrief === null) return;
    this.root.textContent = "";
    this.root.append(renderDebrief(this.debrief));
  }
}
