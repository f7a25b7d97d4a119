import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  createApp,
  createRequestGate,
  debounce,
  formatWeight,
  rowsFromPage,
  type AppView,
  type ResultPage,
  type ResultRow,
} from "../src/app";

const FIG1_PAGE: ResultPage = {
  query: "Sea",
  results: [
    { weight: 608660, label: "Seattle, Washington, United States", link: "https://maps.example/Seattle" },
    { weight: 33025, label: "Seaside, California, United States" },
    { weight: 26909, label: "SeaTac, Washington, United States" },
    { weight: 24168, label: "Seal Beach, California, United States" },
    { weight: 22858, label: "Searcy, Arkansas, United States" },
  ],
};

function recordingView() {
  const rendered: ResultRow[][] = [];
  const errors: string[] = [];
  const view: AppView = {
    showRows: (rows) => rendered.push(rows),
    showError: (message) => errors.push(message),
  };
  return { view, rendered, errors };
}

describe("formatWeight", () => {
  it("adds thousands separators", () => {
    expect(formatWeight(608660)).toBe("608,660");
    expect(formatWeight(1234567)).toBe("1,234,567");
    expect(formatWeight(999)).toBe("999");
  });

  it("hides zero", () => {
    expect(formatWeight(0)).toBe("");
  });
});

describe("rowsFromPage", () => {
  it("renders the teaser fixture as five rows, biggest first", () => {
    const rows = rowsFromPage(FIG1_PAGE);
    expect(rows).toHaveLength(5);
    expect(rows[0].weightText).toBe("608,660");
    expect(rows[0].label).toMatch(/^Seattle/);
  });

  it("passes links through verbatim and null when absent", () => {
    const rows = rowsFromPage(FIG1_PAGE);
    expect(rows[0].href).toBe("https://maps.example/Seattle");
    expect(rows[1].href).toBeNull();
  });
});

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst into one trailing call", () => {
    const fn = vi.fn();
    const d = debounce(fn, 150);
    d("S");
    vi.advanceTimersByTime(50);
    d("Se");
    vi.advanceTimersByTime(50);
    d("Sea");
    vi.advanceTimersByTime(149);
    expect(fn).not.toHaveBeenCalled();
    vi.advanceTimersByTime(1);
    expect(fn).toHaveBeenCalledExactlyOnceWith("Sea");
  });

  it("cancel drops the pending call", () => {
    const fn = vi.fn();
    const d = debounce(fn, 150);
    d("x");
    d.cancel();
    vi.advanceTimersByTime(1000);
    expect(fn).not.toHaveBeenCalled();
  });
});

describe("request gate", () => {
  it("renders in-order responses and drops out-of-order ones", () => {
    const gate = createRequestGate();
    const a = gate.issue();
    expect(gate.mayRender(a)).toBe(true);
    const b = gate.issue();
    expect(gate.mayRender(b)).toBe(true);
    expect(gate.mayRender(a)).toBe(false);
    expect(gate.mayRender(b)).toBe(true); // equal tag (retry) still renders
  });
});

describe("createApp", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("issues exactly one request for a keystroke burst", async () => {
    const transport = vi.fn(async () => FIG1_PAGE);
    const { view, rendered } = recordingView();
    const app = createApp(transport, view);
    app.onInput("S");
    app.onInput("Se");
    app.onInput("Sea");
    await vi.advanceTimersByTimeAsync(150);
    expect(transport).toHaveBeenCalledExactlyOnceWith("Sea", 5);
    expect(rendered).toHaveLength(1);
    expect(rendered[0][0].weightText).toBe("608,660");
  });

  it("clears the list without any request when the box empties", async () => {
    const transport = vi.fn(async () => FIG1_PAGE);
    const { view, rendered } = recordingView();
    const app = createApp(transport, view);
    app.onInput("Sea");
    app.onInput("");
    await vi.advanceTimersByTimeAsync(1000);
    expect(transport).not.toHaveBeenCalled();
    expect(rendered).toEqual([[]]);
  });

  it("never lets a stale response overwrite a newer one", async () => {
    const resolvers: Array<(page: ResultPage) => void> = [];
    const transport = vi.fn(
      (query: string) =>
        new Promise<ResultPage>((resolve) => {
          resolvers.push((page) => resolve({ ...page, query }));
        }),
    );
    const { view, rendered } = recordingView();
    const app = createApp(transport, view, 0);

    app.onInput("Se");
    await vi.advanceTimersByTimeAsync(0);
    app.onInput("Sea");
    await vi.advanceTimersByTimeAsync(0);
    expect(transport).toHaveBeenCalledTimes(2);

    // deliver newest first, then the stale one
    resolvers[1]({ query: "", results: [{ weight: 2, label: "new" }] });
    await vi.advanceTimersByTimeAsync(0);
    resolvers[0]({ query: "", results: [{ weight: 1, label: "old" }] });
    await vi.advanceTimersByTimeAsync(0);

    expect(rendered).toHaveLength(1);
    expect(rendered[0][0].label).toBe("new");
  });

  it("shows an error banner on transport failure, keeping prior rows", async () => {
    let fail = false;
    const transport = vi.fn(async () => {
      if (fail) throw new Error("HTTP 502");
      return FIG1_PAGE;
    });
    const { view, rendered, errors } = recordingView();
    const app = createApp(transport, view, 0);

    app.onInput("Sea");
    await vi.advanceTimersByTimeAsync(0);
    fail = true;
    app.onInput("Seat");
    await vi.advanceTimersByTimeAsync(0);

    expect(rendered).toHaveLength(1); // the successful render only
    expect(errors).toHaveLength(1);
    expect(errors[0]).toContain("502");
  });
});
