// Single-page interview flow: one question on screen at a time, transcript
// above for context, terminal conclusion panel with a collapsible artifacts
// view (LEXSIS and clause export fetched from the service).

import { Client } from "./api.js";
import { InterviewSession, UiSessionState } from "./state.js";
import { renderQuestion } from "./widgets.js";

export interface AppOptions {
  baseUrl: string;
  program?: string;
  source?: string;
  goal: string;
  config?: unknown;
}

export class InterviewApp {
  readonly session: InterviewSession;
  private client: Client;

  constructor(private root: HTMLElement, private options: AppOptions) {
    this.client = new Client(options.baseUrl);
    this.session = new InterviewSession(this.client);
    this.session.subscribe((state) => this.render(state));
  }

  start(): Promise<void> {
    return this.session.start({
      program: this.options.program,
      source: this.options.source,
      goal: this.options.goal,
      config: this.options.config,
    });
  }

  private render(state: UiSessionState): void {
    this.root.innerHTML = "";
    this.root.appendChild(this.transcriptList(state));

    if (state.error) {
      const banner = document.createElement("div");
      banner.className = state.error.retryable ? "banner retryable" : "banner";
      banner.textContent = state.error.retryable
        ? `${state.error.message} — retry when the service is reachable`
        : state.error.message;
      for (const diagnostic of state.error.diagnostics) {
        const line = document.createElement("div");
        line.className = "diagnostic";
        line.textContent = diagnostic;
        banner.appendChild(line);
      }
      this.root.appendChild(banner);
    }

    if (state.question) {
      const panel = renderQuestion(state.question, (value) => void this.session.answer(value));
      if (state.busy) {
        panel.querySelectorAll("button, input").forEach((node) => {
          (node as HTMLButtonElement).disabled = true;
        });
      }
      this.root.appendChild(panel);
      this.root.appendChild(this.progress(state));
    } else if (state.conclusion) {
      this.root.appendChild(this.conclusionPanel(state));
    }
  }

  private transcriptList(state: UiSessionState): HTMLElement {
    const list = document.createElement("ol");
    list.className = "transcript";
    for (const item of state.transcript) {
      const entry = document.createElement("li");
      const q = document.createElement("span");
      q.className = "asked";
      q.textContent = item.prompt;
      const a = document.createElement("span");
      a.className = "answered";
      a.textContent = formatValue(item.value);
      entry.appendChild(q);
      entry.appendChild(a);
      list.appendChild(entry);
    }
    return list;
  }

  private progress(state: UiSessionState): HTMLElement {
    const div = document.createElement("div");
    div.className = "progress";
    div.textContent = `${state.transcript.length} answered`;
    return div;
  }

  private conclusionPanel(state: UiSessionState): HTMLElement {
    const panel = document.createElement("section");
    panel.className = "conclusion";
    const body = document.createElement("div");
    body.className = "conclusion-body";
    body.innerHTML = state.conclusion!.html;
    body.dataset.text = state.conclusion!.text;
    panel.appendChild(body);

    const details = document.createElement("details");
    details.className = "artifacts";
    const summary = document.createElement("summary");
    summary.textContent = "show reasoning artifacts";
    details.appendChild(summary);
    details.addEventListener("toggle", () => {
      if (details.open && !details.dataset.loaded && state.sessionId) {
        details.dataset.loaded = "1";
        void this.client.getArtifacts(state.sessionId).then((artifacts) => {
          for (const [label, text] of [
            ["LEXSIS", artifacts.lexsis_yaml],
            ["clauses", artifacts.scasp_text],
          ] as const) {
            const heading = document.createElement("h3");
            heading.textContent = label;
            const pre = document.createElement("pre");
            pre.textContent = text;
            details.appendChild(heading);
            details.appendChild(pre);
          }
        });
      }
    });
    panel.appendChild(details);
    return panel;
  }
}

function formatValue(value: unknown): string {
  if (typeof value === "string") {
    return value;
  }
  if (value && typeof value === "object" && "text" in value) {
    const v = value as { text: string; more?: boolean };
    return v.more ? `${v.text} (more)` : v.text;
  }
  return JSON.stringify(value);
}
