// Client-side game state: a small state machine that owns the session
// lifecycle and enforces one in-flight move at a time. All game outcomes
// come from the server; nothing here computes rhinos or ranger moves.

import {
  ApiError,
  GameApi,
  RoundReveal,
  ServerSessionState,
  SessionDescriptor,
} from "./api.js";

export type Phase =
  | "configuring"
  | "creating"
  | "choosing"
  | "submitting"
  | "revealing"
  | "finished"
  | "error";

export interface RoundRecord {
  round: number;
  poacherSite: number;
  rangerSite: number;
  rhinoPresent: boolean[];
  points: number;
}

export interface GameView {
  phase: Phase;
  sessionId: string | null;
  distribution: number[];
  horizon: number;
  round: number;
  score: number;
  history: RoundRecord[];
  rules: string;
  lastReveal: RoundRecord | null;
  error: string | null;
}

// The only reveal fields the client will ever read. Anything else a server
// response carries (by bug or by tampering) is dropped on the floor here,
// so unresolved-round information cannot reach the render path.
export function toRecord(raw: RoundReveal): RoundRecord {
  return {
    round: raw.round,
    poacherSite: raw.poacher_site,
    rangerSite: raw.ranger_site,
    rhinoPresent: [...raw.rhino_present],
    points: raw.u_p,
  };
}

export function scoreOf(history: RoundRecord[]): number {
  return history.reduce((acc, r) => acc + r.points, 0);
}

export function visitFrequencies(history: RoundRecord[], n: number): number[] {
  const counts = new Array(n).fill(0);
  for (const rec of history) counts[rec.poacherSite] += 1;
  const total = history.length;
  return counts.map((c) => (total === 0 ? 0 : c / total));
}

export function lastWindowFrequencies(
  history: RoundRecord[],
  n: number,
  window = 25,
): number[] | null {
  if (history.length < window) return null;
  return visitFrequencies(history.slice(history.length - window), n);
}

export class GameSession {
  phase: Phase = "configuring";
  descriptor: SessionDescriptor | null = null;
  history: RoundRecord[] = [];
  lastReveal: RoundRecord | null = null;
  error: string | null = null;
  private listeners: Array<(view: GameView) => void> = [];

  // input stays locked for this long after each reveal; 0 = unlock instantly
  constructor(private api: GameApi, private revealHoldMs = 0) {}

  onChange(listener: (view: GameView) => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    const view = this.view();
    for (const listener of this.listeners) listener(view);
  }

  view(): GameView {
    return {
      phase: this.phase,
      sessionId: this.descriptor?.session_id ?? null,
      distribution: this.descriptor ? [...this.descriptor.distribution] : [],
      horizon: this.descriptor?.horizon ?? 0,
      round: this.history.length,
      score: scoreOf(this.history),
      history: [...this.history],
      rules: this.descriptor?.rules ?? "",
      lastReveal: this.lastReveal,
      error: this.error,
    };
  }

  logUrl(): string | null {
    return this.descriptor ? this.api.logUrl(this.descriptor.session_id) : null;
  }

  async start(req: {
    preset?: string;
    distribution?: number[];
    seed?: number;
    horizon?: number;
  }): Promise<void> {
    if (this.phase !== "configuring" && this.phase !== "error") {
      throw new Error(`cannot start a game from phase ${this.phase}`);
    }
    this.phase = "creating";
    this.error = null;
    this.emit();
    try {
      this.descriptor = await this.api.createSession(req);
      this.history = [];
      this.lastReveal = null;
      this.phase = "choosing";
    } catch (err) {
      this.phase = "configuring";
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.emit();
  }

  get canSubmit(): boolean {
    return this.phase === "choosing";
  }

  async submit(site: number): Promise<void> {
    if (!this.canSubmit || !this.descriptor) {
      return; // a move is already in flight or the game is over
    }
    this.phase = "submitting";
    this.emit();
    try {
      const result = await this.api.submitMove(
        this.descriptor.session_id,
        this.history.length,
        site,
      );
      const record = toRecord(result.outcome);
      this.history.push(record);
      this.lastReveal = record;
      this.phase = result.completed ? "finished" : "revealing";
      this.emit();
      if (!result.completed) {
        if (this.revealHoldMs > 0) {
          setTimeout(() => {
            if (this.phase === "revealing") {
              this.phase = "choosing";
              this.emit();
            }
          }, this.revealHoldMs);
        } else {
          this.phase = "choosing";
          this.emit();
        }
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.resync();
        return;
      }
      this.phase = "error";
      this.error = err instanceof Error ? err.message : String(err);
      this.emit();
    }
  }

  // After a conflict (double-click, network retry, stale tab) the server's
  // resolved history is the truth; rebuild local state from it.
  async resync(): Promise<void> {
    if (!this.descriptor) return;
    try {
      const state: ServerSessionState = await this.api.getSession(
        this.descriptor.session_id,
      );
      this.history = state.history.map(toRecord);
      this.lastReveal = this.history[this.history.length - 1] ?? null;
      this.phase = state.completed ? "finished" : "choosing";
      this.error = null;
    } catch (err) {
      this.phase = "error";
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.emit();
  }
}
