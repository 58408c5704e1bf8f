// Question widgets. The widget kind derives solely from the question's input
// schema; prompt strings are rendered byte-for-byte as the server sent them.

import { AnswerValue, InputSchema, QuestionView } from "./api.js";

export type WidgetKind = "yesno" | "text-loop" | "enum";

export function widgetKind(input: InputSchema): WidgetKind {
  switch (input.type) {
    case "yesno":
      return "yesno";
    case "text":
      return "text-loop";
    case "enum":
      return "enum";
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderQuestion(
  question: QuestionView,
  onSubmit: (value: AnswerValue) => void,
): HTMLElement {
  const panel = el("section", "question");
  panel.dataset.questionId = question.id;
  const prompt = el("p", "prompt", question.prompt);
  panel.appendChild(prompt);

  switch (widgetKind(question.input)) {
    case "yesno":
      panel.appendChild(yesNoWidget(onSubmit));
      break;
    case "text-loop":
      panel.appendChild(
        textLoopWidget(
          question.input.type === "text" ? question.input.loop_prompt : null,
          onSubmit,
        ),
      );
      break;
    case "enum":
      panel.appendChild(
        enumWidget(question.input.type === "enum" ? question.input.options : [], onSubmit),
      );
      break;
  }
  return panel;
}

function yesNoWidget(onSubmit: (value: AnswerValue) => void): HTMLElement {
  const row = el("div", "widget yesno");
  for (const option of ["yes", "no"] as const) {
    const button = el("button", `choice ${option}`, option === "yes" ? "Yes" : "No");
    button.addEventListener("click", () => onSubmit(option));
    row.appendChild(button);
  }
  return row;
}

function textLoopWidget(
  loopPrompt: string | null,
  onSubmit: (value: AnswerValue) => void,
): HTMLElement {
  const box = el("div", "widget text-loop");
  const input = el("input", "free-text");
  input.type = "text";
  box.appendChild(input);

  let moreBox: HTMLInputElement | null = null;
  if (loopPrompt) {
    const label = el("label", "loop");
    moreBox = el("input");
    moreBox.type = "checkbox";
    label.appendChild(moreBox);
    label.appendChild(el("span", "loop-prompt", loopPrompt));
    box.appendChild(label);
  }

  const submit = el("button", "submit", "Answer");
  submit.disabled = true;
  // non-empty free text is validated client-side before any POST
  input.addEventListener("input", () => {
    submit.disabled = input.value.trim().length === 0;
  });
  submit.addEventListener("click", () => {
    const text = input.value.trim();
    if (!text) {
      return;
    }
    onSubmit({ text, more: moreBox ? moreBox.checked : false });
  });
  box.appendChild(submit);
  return box;
}

function enumWidget(options: string[], onSubmit: (value: AnswerValue) => void): HTMLElement {
  const box = el("div", "widget enum");
  let selected: string | null = null;
  const submit = el("button", "submit", "Answer");
  submit.disabled = true;
  for (const option of options) {
    const label = el("label", "option");
    const radio = el("input");
    radio.type = "radio";
    radio.name = "enum-option";
    radio.setAttribute("value", option);
    const choose = () => {
      selected = option;
      submit.disabled = false;
    };
    radio.addEventListener("change", choose);
    radio.addEventListener("click", choose);
    label.appendChild(radio);
    label.appendChild(el("span", undefined, option));
    box.appendChild(label);
  }
  submit.addEventListener("click", () => {
    // enum answers must be one of the offered options
    if (selected && options.includes(selected)) {
      onSubmit(selected);
    }
  });
  box.appendChild(submit);
  return box;
}
