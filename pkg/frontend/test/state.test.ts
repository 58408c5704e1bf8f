import { describe, expect, it } from "vitest";

import { ApiError, Client, Conclusion, QuestionView } from "../src/api.js";
import { InterviewSession } from "../src/state.js";

const q1: QuestionView = {
  id: "q1.1",
  kind: "existence",
  prompt: "Is there a game?",
  input: { type: "yesno" },
};
const q2: QuestionView = {
  id: "q2.1",
  kind: "whopen",
  prompt: "Who participates in the game?",
  input: { type: "text", loop_prompt: "Are there more players?" },
};
const done: Conclusion = { text: "Nobody wins.", html: "<p>Nobody wins.</p>", answer_sets: [], scasp: "" };

function fakeClient(): Client {
  const client = Object.create(Client.prototype) as Client;
  Object.assign(client, {
    createSession: async () => ({ session_id: "abc", question: q1 }),
    postAnswer: async (_sid: string, qid: string, value: unknown) => {
      if (qid === "q1.1" && value === "yes") {
        return { question: q2 };
      }
      if (qid === "q1.1") {
        return { conclusion: done };
      }
      throw new ApiError(409, "wrong-question", "out of order");
    },
    getSession: async () => ({
      session_id: "abc",
      state: "awaiting" as const,
      goal: "win",
      transcript: [{ question_id: "q1.1", prompt: q1.prompt, value: "yes" }],
      question: q2,
    }),
  });
  return client;
}

describe("InterviewSession", () => {
  it("starts and tracks the first question", async () => {
    const session = new InterviewSession(fakeClient());
    await session.start({ program: "rps", goal: "win" });
    expect(session.current.sessionId).toBe("abc");
    expect(session.current.question).toEqual(q1);
    expect(session.current.transcript).toEqual([]);
  });

  it("appends to the transcript and never rewrites it", async () => {
    const session = new InterviewSession(fakeClient());
    await session.start({ program: "rps", goal: "win" });
    const before = session.current.transcript;
    await session.answer("yes");
    expect(before).toEqual([]);
    expect(session.current.transcript).toEqual([
      { questionId: "q1.1", prompt: q1.prompt, value: "yes" },
    ]);
    expect(session.current.question).toEqual(q2);
  });

  it("reaches a terminal conclusion", async () => {
    const session = new InterviewSession(fakeClient());
    await session.start({ program: "rps", goal: "win" });
    await session.answer("no");
    expect(session.current.conclusion).toEqual(done);
    expect(session.current.question).toBeNull();
  });

  it("surfaces server errors without losing state", async () => {
    const client = fakeClient();
    const session = new InterviewSession(client);
    await session.start({ program: "rps", goal: "win" });
    await session.answer("yes");
    (client.postAnswer as unknown) = async () => {
      throw new ApiError(400, "invalid-answer", "free-text answer must be non-empty");
    };
    await session.answer({ text: "", more: false });
    expect(session.current.error?.message).toContain("non-empty");
    expect(session.current.question).toEqual(q2);
    expect(session.current.transcript.length).toBe(1);
  });

  it("restores from a snapshot on refresh", async () => {
    const session = new InterviewSession(fakeClient());
    await session.restore("abc");
    expect(session.current.question).toEqual(q2);
    expect(session.current.transcript).toEqual([
      { questionId: "q1.1", prompt: q1.prompt, value: "yes" },
    ]);
  });
});
