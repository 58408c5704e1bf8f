import { describe, expect, it } from "vitest";

import { AnswerValue, QuestionView } from "../src/api.js";
import { renderQuestion, widgetKind } from "../src/widgets.js";

function question(input: QuestionView["input"], prompt = "Some prompt?"): QuestionView {
  return { id: "q1.1", kind: "any", prompt, input };
}

describe("widgetKind", () => {
  it("derives the widget solely from the input schema", () => {
    expect(widgetKind({ type: "yesno" })).toBe("yesno");
    expect(widgetKind({ type: "text", loop_prompt: "More?" })).toBe("text-loop");
    expect(widgetKind({ type: "enum", options: ["a"] })).toBe("enum");
  });
});

describe("renderQuestion", () => {
  it("renders the server prompt byte-for-byte", () => {
    const prompt = "Is there a game?";
    const panel = renderQuestion(question({ type: "yesno" }, prompt), () => {});
    expect(panel.querySelector(".prompt")?.textContent).toBe(prompt);
  });

  it("yes/no buttons submit yes and no", () => {
    const got: AnswerValue[] = [];
    const panel = renderQuestion(question({ type: "yesno" }), (v) => got.push(v));
    (panel.querySelector("button.yes") as HTMLButtonElement).click();
    (panel.querySelector("button.no") as HTMLButtonElement).click();
    expect(got).toEqual(["yes", "no"]);
  });

  it("text widget blocks empty input client-side", () => {
    const got: AnswerValue[] = [];
    const panel = renderQuestion(
      question({ type: "text", loop_prompt: "Are there more players?" }),
      (v) => got.push(v),
    );
    const submit = panel.querySelector("button.submit") as HTMLButtonElement;
    expect(submit.disabled).toBe(true);
    submit.click();
    expect(got).toEqual([]);

    const input = panel.querySelector("input.free-text") as HTMLInputElement;
    input.value = "Alice";
    input.dispatchEvent(new Event("input"));
    expect(submit.disabled).toBe(false);
    submit.click();
    expect(got).toEqual([{ text: "Alice", more: false }]);
  });

  it("text widget carries the loop flag", () => {
    const got: AnswerValue[] = [];
    const panel = renderQuestion(
      question({ type: "text", loop_prompt: "Are there more players?" }),
      (v) => got.push(v),
    );
    expect(panel.querySelector(".loop-prompt")?.textContent).toBe("Are there more players?");
    const input = panel.querySelector("input.free-text") as HTMLInputElement;
    input.value = "Bob";
    input.dispatchEvent(new Event("input"));
    (panel.querySelector("label.loop input") as HTMLInputElement).click();
    (panel.querySelector("button.submit") as HTMLButtonElement).click();
    expect(got).toEqual([{ text: "Bob", more: true }]);
  });

  it("enum widget requires a selection from the offered options", () => {
    const got: AnswerValue[] = [];
    const panel = renderQuestion(
      question({ type: "enum", options: ["rock", "paper", "scissors"] }),
      (v) => got.push(v),
    );
    const submit = panel.querySelector("button.submit") as HTMLButtonElement;
    expect(submit.disabled).toBe(true);
    submit.click();
    expect(got).toEqual([]);

    const radios = panel.querySelectorAll("input[type=radio]");
    expect(radios.length).toBe(3);
    (radios[1] as HTMLInputElement).click();
    expect(submit.disabled).toBe(false);
    submit.click();
    expect(got).toEqual(["paper"]);
  });

  it("has no domain knowledge: options come only from the schema", () => {
    const panel = renderQuestion(
      question({ type: "enum", options: ["guilty", "not guilty"] }),
      () => {},
    );
    const labels = Array.from(panel.querySelectorAll("label.option span")).map(
      (n) => n.textContent,
    );
    expect(labels).toEqual(["guilty", "not guilty"]);
  });
});
