// DOM rendering. The renderer is a pure function of the GameView plus a
// little bit of preset state; every user action funnels into the callbacks.

import { Preset } from "./api.js";
import {
  GameView,
  lastWindowFrequencies,
  visitFrequencies,
} from "./state.js";
import {
  FINISHED_TEXT,
  INTRO_TEXT,
  INTRO_TITLE,
  SCORING_REMINDER,
  START_HINT,
} from "./rules.js";

export interface UiCallbacks {
  onStart(req: { preset?: string; distribution?: number[] }): void;
  onPick(site: number): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function parseCustomDistribution(text: string): number[] {
  const parts = text.split(",").map((p) => p.trim()).filter((p) => p.length);
  if (parts.length < 2) throw new Error("need at least two sites");
  const probs = parts.map((p) => {
    const x = Number(p);
    if (!Number.isFinite(x) || x < 0 || x > 1) {
      throw new Error(`"${p}" is not a probability in [0, 1]`);
    }
    return x;
  });
  return probs;
}

export class UiRenderer {
  private presets: Preset[] = [];
  private customError = "";

  constructor(
    private root: HTMLElement,
    private callbacks: UiCallbacks,
    private logUrl: () => string | null,
  ) {}

  setPresets(presets: Preset[]): void {
    this.presets = presets;
  }

  render(view: GameView): void {
    this.root.replaceChildren();
    if (view.phase === "configuring" || view.phase === "creating") {
      this.root.appendChild(this.configScreen(view));
    } else {
      this.root.appendChild(this.gameScreen(view));
    }
  }

  private configScreen(view: GameView): HTMLElement {
    const panel = el("div", "panel");
    panel.appendChild(el("h1", undefined, INTRO_TITLE));
    panel.appendChild(el("p", "intro", INTRO_TEXT));
    panel.appendChild(el("p", "scoring", SCORING_REMINDER));
    panel.appendChild(el("p", "hint", START_HINT));

    const presetRow = el("div", "preset-row");
    for (const preset of this.presets) {
      const button = el(
        "button",
        "preset",
        `${preset.id.toUpperCase()}  (${preset.distribution.join(", ")})`,
      );
      button.disabled = view.phase === "creating";
      button.addEventListener("click", () =>
        this.callbacks.onStart({ preset: preset.id }),
      );
      presetRow.appendChild(button);
    }
    panel.appendChild(presetRow);

    const customRow = el("div", "custom-row");
    const input = el("input");
    input.placeholder = "e.g. 0.8, 0.3, 0.8, 0.3";
    const go = el("button", "primary", "Play custom map");
    go.disabled = view.phase === "creating";
    go.addEventListener("click", () => {
      try {
        const probs = parseCustomDistribution(input.value);
        this.customError = "";
        this.callbacks.onStart({ distribution: probs });
      } catch (err) {
        this.customError = err instanceof Error ? err.message : String(err);
        this.render(view);
      }
    });
    customRow.append(input, go);
    panel.appendChild(customRow);
    if (this.customError) {
      panel.appendChild(el("p", "error", this.customError));
    }
    if (view.error) {
      panel.appendChild(el("p", "error", `${view.error} — try again.`));
    }
    if (view.phase === "creating") {
      panel.appendChild(el("p", "hint", "Setting up the game..."));
    }
    return panel;
  }

  private gameScreen(view: GameView): HTMLElement {
    const panel = el("div", "panel");
    panel.appendChild(this.header(view));
    if (view.rules) panel.appendChild(el("p", "rules", view.rules));
    panel.appendChild(this.board(view));
    if (view.lastReveal) panel.appendChild(this.reveal(view));
    if (view.phase === "finished") panel.appendChild(this.finished(view));
    if (view.phase === "error") {
      const error = el("p", "error", view.error ?? "something went wrong");
      panel.appendChild(error);
    }
    panel.appendChild(this.historyPanel(view));
    return panel;
  }

  private header(view: GameView): HTMLElement {
    const header = el("div", "header");
    header.appendChild(
      el("span", "round", `Round ${Math.min(view.round + 1, view.horizon)} / ${view.horizon}`),
    );
    const score = el("span", "score", `Score ${view.score >= 0 ? "+" : ""}${view.score}`);
    header.appendChild(score);
    return header;
  }

  private board(view: GameView): HTMLElement {
    const board = el("div", "board");
    const pickable = view.phase === "choosing";
    view.distribution.forEach((p, i) => {
      const tile = el("button", "tile");
      tile.appendChild(el("div", "site-name", `Site ${i + 1}`));
      tile.appendChild(el("div", "site-prob", `rhino ${Math.round(p * 100)}%`));
      tile.disabled = !pickable;
      tile.addEventListener("click", () => this.callbacks.onPick(i));
      board.appendChild(tile);
    });
    return board;
  }

  private reveal(view: GameView): HTMLElement {
    const rec = view.lastReveal!;
    const strip = el("div", "reveal");
    const outcome =
      rec.points > 0 ? "+1 rhino bagged" : rec.points < 0 ? "−1 caught!" : "0 nothing there";
    strip.appendChild(el("span", `points p${rec.points}`, outcome));
    strip.appendChild(
      el(
        "span",
        "detail",
        `you: site ${rec.poacherSite + 1} · ranger: site ${rec.rangerSite + 1} · rhinos at ` +
          (rec.rhinoPresent.some(Boolean)
            ? rec.rhinoPresent.flatMap((b, i) => (b ? [i + 1] : [])).join(", ")
            : "no site"),
      ),
    );
    return strip;
  }

  private finished(view: GameView): HTMLElement {
    const box = el("div", "finished");
    box.appendChild(el("h2", undefined, `Final score: ${view.score}`));
    box.appendChild(el("p", undefined, FINISHED_TEXT));
    const url = this.logUrl();
    if (url) {
      const a = el("a", "download", "Download play log (JSONL)");
      a.href = url;
      box.appendChild(a);
    }
    const again = el("button", "primary", "Play again");
    again.addEventListener("click", () => window.location.reload());
    box.appendChild(again);
    return box;
  }

  private historyPanel(view: GameView): HTMLElement {
    const n = view.distribution.length;
    const panel = el("div", "history");
    panel.appendChild(el("h2", undefined, "Your play"));

    const freqs = visitFrequencies(view.history, n);
    const freqRow = el("div", "freqs");
    freqs.forEach((f, i) => {
      const cell = el("div", "freq-cell");
      cell.appendChild(el("div", "freq-label", `site ${i + 1}`));
      const bar = el("div", "freq-bar");
      const fill = el("div", "freq-fill");
      fill.style.width = `${Math.round(f * 100)}%`;
      bar.appendChild(fill);
      cell.appendChild(bar);
      cell.appendChild(el("div", "freq-value", `${(f * 100).toFixed(0)}%`));
      freqRow.appendChild(cell);
    });
    panel.appendChild(freqRow);

    if (view.phase === "finished") {
      const last = lastWindowFrequencies(view.history, n);
      if (last) {
        panel.appendChild(
          el(
            "p",
            "last25",
            "Last 25 rounds: " +
              last.map((f, i) => `site ${i + 1} ${(f * 100).toFixed(0)}%`).join(" · "),
          ),
        );
      }
    }

    const list = el("div", "rounds");
    for (const rec of [...view.history].reverse()) {
      const row = el("div", "round-row");
      row.appendChild(el("span", "r", `#${rec.round + 1}`));
      row.appendChild(el("span", undefined, `you ${rec.poacherSite + 1}`));
      row.appendChild(el("span", undefined, `ranger ${rec.rangerSite + 1}`));
      row.appendChild(
        el("span", `pts p${rec.points}`, rec.points > 0 ? "+1" : rec.points < 0 ? "−1" : "0"),
      );
      list.appendChild(row);
    }
    panel.appendChild(list);
    return panel;
  }
}
