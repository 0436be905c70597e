// Chat panel: question input, turn log, result tables, and the
// show-more control for paged results. All displayed values come
// verbatim from the service response; the client never computes or
// rounds anything.

import { ApiClient, AskResponse, StructuredResult } from "./api.js";

export interface ChatTurn {
  question: string;
  answer_text: string;
  structured_result: StructuredResult | null;
  parsed_query: Record<string, unknown> | null;
  timestamp: string;
}

export interface TemplateChip {
  label: string;
  question: string;
}

// Guided templates for the three task families.
export const GUIDED_TEMPLATES: TemplateChip[] = [
  { label: "Synthesis condition analysis", question: "Run the pipeline for CCDC ABAYUY" },
  { label: "Structure property query", question: "What is the PLD of MOF-5?" },
  { label: "CIF visualization", question: "Show the structure of ABAYUY" },
];

export class ChatPanel {
  readonly turns: ChatTurn[] = [];
  private log: HTMLElement;
  private input: HTMLInputElement;
  private sendButton: HTMLButtonElement;
  private moreButton: HTMLButtonElement;
  private errorBox: HTMLElement;
  private pending = false;

  constructor(
    private client: ApiClient,
    private sessionId: string,
    private root: HTMLElement,
    chips: TemplateChip[] = GUIDED_TEMPLATES,
  ) {
    this.root.innerHTML = "";
    const chipRow = document.createElement("div");
    chipRow.className = "chips";
    for (const chip of chips) {
      const button = document.createElement("button");
      button.className = "chip";
      button.textContent = chip.label;
      button.addEventListener("click", () => {
        this.input.value = chip.question;
      });
      chipRow.appendChild(button);
    }
    this.log = document.createElement("div");
    this.log.className = "chat-log";
    this.errorBox = document.createElement("div");
    this.errorBox.className = "chat-error";
    this.input = document.createElement("input");
    this.input.className = "chat-input";
    this.input.placeholder = "Ask about MOF structures…";
    this.sendButton = document.createElement("button");
    this.sendButton.className = "chat-send";
    this.sendButton.textContent = "Send";
    this.sendButton.addEventListener("click", () => void this.submit());
    this.input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void this.submit();
    });
    this.moreButton = document.createElement("button");
    this.moreButton.className = "chat-more";
    this.moreButton.textContent = "Show more";
    this.moreButton.hidden = true;
    this.moreButton.addEventListener("click", () => void this.showMore());

    const inputRow = document.createElement("div");
    inputRow.className = "chat-input-row";
    inputRow.append(this.input, this.sendButton);
    this.root.append(chipRow, this.log, this.moreButton, this.errorBox, inputRow);
  }

  private async submit(): Promise<void> {
    const question = this.input.value.trim();
    if (!question) return;
    this.input.value = "";
    await this.ask(question);
  }

  async ask(question: string): Promise<ChatTurn | null> {
    if (this.pending) return null;
    this.pending = true;
    this.input.disabled = true;
    this.sendButton.disabled = true;
    this.errorBox.textContent = "";
    try {
      const response: AskResponse = await this.client.ask(this.sessionId, question);
      const turn: ChatTurn = {
        question,
        answer_text: response.answer_text,
        structured_result: response.structured_result,
        parsed_query: response.parsed_query,
        timestamp: new Date().toISOString(),
      };
      this.turns.push(turn);
      this.render();
      return turn;
    } catch (error) {
      // Failed turns are not appended; the error shows inline with retry.
      this.errorBox.textContent = `Request failed: ${String(error)} — press Send to retry.`;
      this.input.value = question;
      return null;
    } finally {
      this.pending = false;
      this.input.disabled = false;
      this.sendButton.disabled = false;
    }
  }

  hasMoreResults(): boolean {
    const result = this.turns.at(-1)?.structured_result;
    if (!result || result.total == null || result.offset == null) return false;
    return result.offset + result.count < result.total;
  }

  async showMore(): Promise<ChatTurn | null> {
    return this.ask("show 5 more");
  }

  render(): void {
    this.log.innerHTML = "";
    for (const turn of this.turns) {
      const block = document.createElement("div");
      block.className = "turn";
      const question = document.createElement("div");
      question.className = "question";
      question.textContent = turn.question;
      const answer = document.createElement("div");
      answer.className = "answer";
      answer.textContent = turn.answer_text;
      block.append(question, answer);
      if (turn.structured_result && turn.structured_result.rows.length > 0) {
        block.appendChild(renderResultTable(turn.structured_result));
      }
      this.log.appendChild(block);
    }
    this.moreButton.hidden = !this.hasMoreResults();
  }
}

export function renderResultTable(result: StructuredResult): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "result-table";
  const columns: string[] = [];
  for (const row of result.rows) {
    for (const key of Object.keys(row)) {
      if (!columns.includes(key)) columns.push(key);
    }
  }
  const head = table.createTHead().insertRow();
  for (const column of columns) {
    const cell = document.createElement("th");
    cell.textContent = column;
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const row of result.rows) {
    const tr = body.insertRow();
    for (const column of columns) {
      const value = row[column];
      // Verbatim: numbers stringify without any client-side rounding.
      tr.insertCell().textContent = value === undefined ? "" : String(value);
    }
  }
  return table;
}
