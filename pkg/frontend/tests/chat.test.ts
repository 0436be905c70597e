// @vitest-environment jsdom
import { beforeEach, describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api";
import { ChatPanel, GUIDED_TEMPLATES } from "../src/chat";

const RANGE_QUESTION = "Find MOFs with PLD between 7.5 and 10 Å and LCD between 10 and 16 Å";

let counter = 0;
function freshSession(prefix: string): string {
  counter += 1;
  return `${prefix}-${Date.now()}-${counter}`;
}

function panel(session: string): ChatPanel {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return new ChatPanel(new ApiClient(inject("baseUrl")), session, root);
}

function renderedCellTexts(root: Document): string[] {
  return Array.from(root.querySelectorAll(".result-table td")).map(
    (cell) => cell.textContent ?? "",
  );
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("chat round trip", () => {
  it("renders the property value exactly as the API returned it", async () => {
    const chat = panel(freshSession("chat-prop"));
    const turn = await chat.ask("What is the PLD of MOF-5?");
    expect(turn).not.toBeNull();

    // Independent call on a fresh session gives the reference response.
    const reference = await new ApiClient(inject("baseUrl")).ask(
      freshSession("chat-prop-ref"),
      "What is the PLD of MOF-5?",
    );
    const expected = String(reference.structured_result!.rows[0]["PLD (Å)"]);
    const cells = renderedCellTexts(document);
    expect(cells).toContain(expected);
    expect(document.body.textContent).toContain(reference.answer_text);
  });

  it("appends turns in submission order", async () => {
    const chat = panel(freshSession("chat-order"));
    await chat.ask("What is the PLD of VUJBEI?");
    await chat.ask("What about its density?");
    const questions = Array.from(document.querySelectorAll(".question")).map(
      (el) => el.textContent,
    );
    expect(questions).toEqual(["What is the PLD of VUJBEI?", "What about its density?"]);
    expect(chat.turns).toHaveLength(2);
  });

  it("offers guided template chips that prefill the input", () => {
    panel(freshSession("chat-chips"));
    const chips = Array.from(document.querySelectorAll(".chip"));
    expect(chips.map((c) => c.textContent)).toEqual(GUIDED_TEMPLATES.map((t) => t.label));
    (chips[1] as HTMLButtonElement).click();
    const input = document.querySelector(".chat-input") as HTMLInputElement;
    expect(input.value).toBe(GUIDED_TEMPLATES[1].question);
  });
});

describe("paging through the UI", () => {
  it("show-more appends exactly the next API page", async () => {
    // Reference sequence by direct API paging on its own session.
    const reference = new ApiClient(inject("baseUrl"));
    const referenceSession = freshSession("page-ref");
    await reference.ask(referenceSession, RANGE_QUESTION);
    const next = await reference.ask(referenceSession, "show 5 more");
    const expectedCodes = next.structured_result!.rows.map((row) => String(row["ccdc_code"]));

    const chat = panel(freshSession("page-ui"));
    const first = await chat.ask(RANGE_QUESTION);
    expect(first!.structured_result!.total).toBeGreaterThan(10);
    expect(chat.hasMoreResults()).toBe(true);

    const moreButton = document.querySelector(".chat-more") as HTMLButtonElement;
    expect(moreButton.hidden).toBe(false);

    const more = await chat.showMore();
    const uiCodes = more!.structured_result!.rows.map((row) => String(row["ccdc_code"]));
    expect(uiCodes).toEqual(expectedCodes);
    expect(uiCodes).toHaveLength(5);

    // The appended turn is rendered.
    const tables = document.querySelectorAll(".result-table");
    expect(tables.length).toBe(2);
  });

  it("UI paging to exhaustion matches direct API paging", async () => {
    const reference = new ApiClient(inject("baseUrl"));
    const referenceSession = freshSession("page-full-ref");
    const collect = async (response: Awaited<ReturnType<ApiClient["ask"]>>) =>
      response.structured_result!.rows.map((row) => String(row["ccdc_code"]));

    const apiCodes: string[] = await collect(await reference.ask(referenceSession, RANGE_QUESTION));
    for (;;) {
      const page = await reference.ask(referenceSession, "show 5 more");
      const codes = await collect(page);
      if (codes.length === 0) break;
      apiCodes.push(...codes);
    }

    const chat = panel(freshSession("page-full-ui"));
    const uiCodes: string[] = await collect((await chat.ask(RANGE_QUESTION))!);
    while (chat.hasMoreResults()) {
      const turn = await chat.showMore();
      uiCodes.push(...(await collect(turn!)));
    }
    expect(uiCodes).toEqual(apiCodes);
  });
});

describe("zero client-side business logic", () => {
  it("every rendered number originates from a service response", async () => {
    const recorded: string[] = [];
    const realFetch = globalThis.fetch;
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const response = await realFetch(input, init);
      recorded.push(await response.clone().text());
      return response;
    }) as typeof fetch;

    try {
      const chat = panel(freshSession("audit"));
      await chat.ask("What is the PLD of MOF-5?");
      await chat.ask(RANGE_QUESTION);
      await chat.showMore();
    } finally {
      globalThis.fetch = realFetch;
    }

    const served = new Set(
      recorded.flatMap((text) => Array.from(text.matchAll(/\d+(?:\.\d+)?/g), (m) => m[0])),
    );
    // Scan text nodes one by one: concatenating adjacent cells would
    // fabricate digit runs that exist nowhere in the UI.
    const walker = document.createTreeWalker(document.body, NodeFilter.SHOW_TEXT);
    const displayed: string[] = [];
    for (let node = walker.nextNode(); node; node = walker.nextNode()) {
      displayed.push(
        ...Array.from(node.textContent!.matchAll(/\d+(?:\.\d+)?/g), (m) => m[0]),
      );
    }
    expect(displayed.length).toBeGreaterThan(0);
    for (const token of displayed) {
      expect(served, `displayed number ${token} not in any response`).toContain(token);
    }
  });
});

describe("failure handling", () => {
  it("shows an inline error and keeps the turn log unchanged", async () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    const broken = new ApiClient("http://127.0.0.1:1");
    const chat = new ChatPanel(broken, "broken", root);
    const turn = await chat.ask("What is the PLD of MOF-5?");
    expect(turn).toBeNull();
    expect(chat.turns).toHaveLength(0);
    expect(root.querySelector(".chat-error")!.textContent).toContain("retry");
  });
});
