// Typed client for the session service. All knowledge of the wire format
// lives here; the rest of the app consumes the parsed shapes.

export interface Preset {
  id: string;
  distribution: number[];
}

export interface SessionDescriptor {
  session_id: string;
  distribution: number[];
  n: number;
  horizon: number;
  seed: number;
  rules: string;
}

export interface RoundReveal {
  round: number;
  poacher_site: number;
  ranger_site: number;
  rhino_present: boolean[];
  u_p: number;
  u_r: number;
}

export interface MoveResult {
  round: number;
  outcome: RoundReveal;
  score: number;
  rounds_played: number;
  completed: boolean;
}

export interface ServerSessionState {
  session_id: string;
  distribution: number[];
  n: number;
  horizon: number;
  round: number;
  score: number;
  completed: boolean;
  history: RoundReveal[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, "unreachable", `service unreachable: ${err}`);
  }
  if (!resp.ok) {
    let code = "http_error";
    let message = `${resp.status}`;
    try {
      const body = await resp.json();
      const detail = body?.detail;
      if (detail && typeof detail === "object") {
        code = detail.error ?? code;
        message = detail.message ?? message;
      } else if (typeof detail === "string") {
        message = detail;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, code, message);
  }
  return (await resp.json()) as T;
}

export class GameApi {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async presets(): Promise<Preset[]> {
    const body = await request<{ presets: Preset[] }>(this.url("/presets"));
    return body.presets;
  }

  createSession(req: {
    preset?: string;
    distribution?: number[];
    seed?: number;
    horizon?: number;
  }): Promise<SessionDescriptor> {
    return request<SessionDescriptor>(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  getSession(sessionId: string): Promise<ServerSessionState> {
    return request<ServerSessionState>(this.url(`/sessions/${sessionId}`));
  }

  submitMove(sessionId: string, round: number, site: number): Promise<MoveResult> {
    return request<MoveResult>(this.url(`/sessions/${sessionId}/moves`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ round, site }),
    });
  }

  logUrl(sessionId: string): string {
    return this.url(`/sessions/${sessionId}/log`);
  }
}
