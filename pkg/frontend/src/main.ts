// Bootstrap: read program/goal from the query string (defaults drive the
// bundled rock-paper-scissors program) and mount the interview app.

import { InterviewApp } from "./app.js";

function param(name: string, fallback: string): string {
  const url = new URL(window.location.href);
  return url.searchParams.get(name) ?? fallback;
}

const root = document.getElementById("root");
if (root) {
  const app = new InterviewApp(root, {
    baseUrl: param("service", window.location.origin),
    program: param("program", "rps"),
    goal: param("goal", "win"),
  });
  void app.start();
}
