import { ApiClient } from "./api.js";
import { ChatPanel } from "./chat.js";
import { JobsPanel } from "./jobs.js";
import { StructureViewer } from "./viewer.js";

const client = new ApiClient("");
const sessionId = `web-${Math.random().toString(36).slice(2, 10)}`;

window.addEventListener("DOMContentLoaded", () => {
  new ChatPanel(client, sessionId, document.getElementById("chat")!);
  new JobsPanel(client, document.getElementById("jobs")!);
  new StructureViewer(client, document.getElementById("viewer")!);
});
