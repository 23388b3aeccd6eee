// Thin typed client over fetch. Two failure shapes and nothing else:
// ApiError carries the service's problem detail, ServiceUnreachable means
// the request never got an HTTP answer (offline, wrong URL, server down).

import type {
  ActionFeedback,
  ActionRequest,
  EndResponse,
  ProblemDetail,
  SessionDetail,
  SessionSnapshot,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly problem: ProblemDetail;

  constructor(problem: ProblemDetail) {
    super(`${problem.title}: ${problem.detail}`);
    this.name = "ApiError";
    this.problem = problem;
  }
}

export class ServiceUnreachable extends Error {
  constructor(baseUrl: string, cause: unknown) {
    super(`no response from ${baseUrl}`);
    this.name = "ServiceUnreachable";
    this.cause = cause;
  }
}

export interface CreateSessionRequest {
  scenario?: string;
  scenario_doc?: unknown;
  mission?: string;
}

export class ExerciseClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // bind: a bare window.fetch loses its receiver when called as a value
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async health(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  async createSession(body: CreateSessionRequest): Promise<SessionSnapshot> {
    return this.request("POST", "/sessions", body);
  }

  async getSession(sessionId: string): Promise<SessionDetail> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  async act(sessionId: string, action: ActionRequest): Promise<ActionFeedback> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/actions`,
      action,
    );
  }

  async endSession(sessionId: string): Promise<EndResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/end`);
  }

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (cause) {
      throw new ServiceUnreachable(this.baseUrl, cause);
    }
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const problem: ProblemDetail =
        payload && typeof payload === "object" && "status" in payload
          ? (payload as ProblemDetail)
          : {
              status: response.status,
              title: `http ${response.status}`,
              detail: "service returned a non-JSON error body",
            };
      throw new ApiError(problem);
    }
    return payload as T;
  }
}
