// Typed client for the /v1 interview API. The UI is a thin state machine over
// these calls and never does any reasoning of its own.

export type InputSchema =
  | { type: "yesno" }
  | { type: "text"; loop_prompt: string | null }
  | { type: "enum"; options: string[] };

export interface QuestionView {
  id: string;
  kind: string;
  prompt: string;
  input: InputSchema;
}

export interface Conclusion {
  text: string;
  html: string;
  answer_sets: unknown[];
  scasp: string;
}

export interface CreateResponse {
  session_id: string;
  question?: QuestionView;
  conclusion?: Conclusion;
}

export interface StepResponse {
  question?: QuestionView;
  conclusion?: Conclusion;
}

export interface TranscriptEntry {
  question_id: string;
  prompt: string;
  value: unknown;
}

export interface SessionSnapshot {
  session_id: string;
  state: "awaiting" | "concluded";
  goal: string;
  transcript: TranscriptEntry[];
  question?: QuestionView;
  conclusion?: Conclusion;
}

export interface Artifacts {
  lexsis_yaml: string;
  scasp_text: string;
  interview_json: unknown;
}

export type AnswerValue = string | { text: string; more: boolean };

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public diagnostics: string[] = [],
    public retryable = false,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, "network", `network failure: ${String(err)}`, [], true);
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const code = typeof body.code === "string" ? body.code : "error";
    const message = typeof body.message === "string" ? body.message : response.statusText;
    throw new ApiError(response.status, code, message, body.diagnostics ?? []);
  }
  return body as T;
}

export class Client {
  constructor(private base: string) {}

  createSession(init: {
    program?: string;
    source?: string;
    goal: string;
    config?: unknown;
  }): Promise<CreateResponse> {
    return request(`${this.base}/v1/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(init),
    });
  }

  postAnswer(sessionId: string, questionId: string, value: AnswerValue): Promise<StepResponse> {
    return request(`${this.base}/v1/sessions/${sessionId}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question_id: questionId, value }),
    });
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return request(`${this.base}/v1/sessions/${sessionId}`);
  }

  getArtifacts(sessionId: string): Promise<Artifacts> {
    return request(`${this.base}/v1/sessions/${sessionId}/artifacts`);
  }
}
