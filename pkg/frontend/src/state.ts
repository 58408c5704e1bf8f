// Interview session state: an append-only transcript plus the current
// question or terminal conclusion. At most one answer request is in flight;
// controls stay disabled while awaiting the response.

import {
  AnswerValue,
  ApiError,
  Client,
  Conclusion,
  QuestionView,
} from "./api.js";

export interface TranscriptItem {
  questionId: string;
  prompt: string;
  value: AnswerValue;
}

export interface UiSessionState {
  sessionId: string | null;
  question: QuestionView | null;
  conclusion: Conclusion | null;
  transcript: readonly TranscriptItem[];
  busy: boolean;
  error: { message: string; retryable: boolean; diagnostics: string[] } | null;
}

type Listener = (state: UiSessionState) => void;

export class InterviewSession {
  private state: UiSessionState = {
    sessionId: null,
    question: null,
    conclusion: null,
    transcript: [],
    busy: false,
    error: null,
  };
  private listeners: Listener[] = [];

  constructor(private client: Client) {}

  get current(): UiSessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  async start(init: { program?: string; source?: string; goal: string; config?: unknown }): Promise<void> {
    this.update({ busy: true, error: null });
    try {
      const created = await this.client.createSession(init);
      this.update({
        sessionId: created.session_id,
        question: created.question ?? null,
        conclusion: created.conclusion ?? null,
        transcript: [],
        busy: false,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  async answer(value: AnswerValue): Promise<void> {
    const { sessionId, question, busy } = this.state;
    if (!sessionId || !question || busy) {
      return;
    }
    this.update({ busy: true, error: null });
    try {
      const step = await this.client.postAnswer(sessionId, question.id, value);
      this.update({
        transcript: [
          ...this.state.transcript,
          { questionId: question.id, prompt: question.prompt, value },
        ],
        question: step.question ?? null,
        conclusion: step.conclusion ?? null,
        busy: false,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  /** Refresh restores the full state from GET /v1/sessions/{id}. */
  async restore(sessionId: string): Promise<void> {
    this.update({ busy: true, error: null });
    try {
      const snapshot = await this.client.getSession(sessionId);
      this.update({
        sessionId: snapshot.session_id,
        question: snapshot.question ?? null,
        conclusion: snapshot.conclusion ?? null,
        transcript: snapshot.transcript.map((t) => ({
          questionId: t.question_id,
          prompt: t.prompt,
          value: t.value as AnswerValue,
        })),
        busy: false,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  private fail(err: unknown): void {
    if (err instanceof ApiError) {
      this.update({
        busy: false,
        error: { message: err.message, retryable: err.retryable, diagnostics: err.diagnostics },
      });
      return;
    }
    this.update({ busy: false, error: { message: String(err), retryable: false, diagnostics: [] } });
  }
}
