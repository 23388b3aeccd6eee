// Browser bootstrap. Query parameters pick the service and scenario:
//   ?base=http://localhost:8570&scenario=table9-line-a
//   ?base=...&session=s-abc123        (rejoin)
// The session id is written back into the URL so a reload rejoins.

import { ExerciseApp } from "./app.js";
import { ExerciseClient } from "./api.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("base") ?? "http://localhost:8570";

const root = document.getElementById("console-root");
if (root === null) {
  throw new Error("missing #console-root element");
}

const app = new ExerciseApp(root, new ExerciseClient(base));

const options: { scenario?: string; mission?: string; session?: string } = {};
const session = params.get("session");
const scenario = params.get("scenario");
const mission = params.get("mission");
if (session !== null) options.session = session;
if (scenario !== null) options.scenario = scenario;
if (mission !== null) options.mission = mission;

void app.connect(options).then(() => {
  if (app.sessionId !== null && params.get("session") !== app.sessionId) {
    params.set("session", app.sessionId);
    window.history.replaceState(null, "", `?${params.toString()}`);
  }
});
