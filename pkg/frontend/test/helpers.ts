// Shared test plumbing: recorded wire payloads plus a scriptable fetch.
// payloads.json is produced by record_fixtures.py against the real service;
// nothing in here invents wire shapes.

import payloadsJson from "./fixtures/payloads.json";
import type {
  ActionFeedback,
  Debrief,
  ProblemDetail,
  SessionDetail,
  SessionSnapshot,
} from "../src/types.js";
import type { FetchLike } from "../src/api.js";

export interface Fixtures {
  fresh_session: SessionSnapshot;
  declare_fresh: ActionFeedback;
  blocked_gate: ActionFeedback;
  reckless_debrief: Debrief;
  micro_session: SessionSnapshot;
  micro_steps: ActionFeedback[];
  rejoin: SessionDetail;
  approved_debrief: Debrief;
  end_again_problem: ProblemDetail & { debrief: Debrief };
  act_after_end_problem: ProblemDetail;
  empty_debrief: Debrief;
}

export const fixtures = payloadsJson as unknown as Fixtures;

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface Route {
  method: string;
  path: string;
  response: () => Response | Promise<Response>;
}

/** Fetch double that answers from a route table and records every call. */
export function scriptedFetch(routes: Route[]) {
  const calls: { method: string; url: string; body: unknown }[] = [];
  const impl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body !== undefined ? JSON.parse(String(init.body)) : undefined;
    calls.push({ method, url, body });
    const match = routes.find((r) => r.method === method && url.endsWith(r.path));
    if (match === undefined) {
      throw new Error(`unscripted ${method} ${url}`);
    }
    return match.response();
  };
  return { impl, calls };
}

export const failingFetch: FetchLike = async () => {
  throw new TypeError("fetch failed");
};

export function mount(): HTMLElement {
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}
