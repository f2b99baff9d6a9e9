// A scripted in-memory stand-in for the session service, driven through the
// same fetch surface the real client uses.

import { RoundReveal } from "../src/api.js";

export interface FakeServer {
  fetch: typeof fetch;
  state: {
    horizon: number;
    distribution: number[];
    history: RoundReveal[];
    score: number;
    rangerSites: number[];
    rhinos: boolean[][];
    extraSessionFields: Record<string, unknown>;
    failNextWith?: { status: number; code: string };
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function makeFakeServer(opts: {
  distribution: number[];
  horizon: number;
  rangerSites: number[];
  rhinos: boolean[][];
}): FakeServer {
  const state: FakeServer["state"] = {
    horizon: opts.horizon,
    distribution: opts.distribution,
    history: [],
    score: 0,
    rangerSites: opts.rangerSites,
    rhinos: opts.rhinos,
    extraSessionFields: {},
  };

  const fakeFetch: typeof fetch = async (input, init) => {
    const url = String(input);
    if (state.failNextWith) {
      const { status, code } = state.failNextWith;
      state.failNextWith = undefined;
      return json({ detail: { error: code, message: code } }, status);
    }
    if (url.endsWith("/presets")) {
      return json({ presets: [{ id: "c", distribution: [0.8, 0.3, 0.8, 0.3] }] });
    }
    if (url.endsWith("/sessions") && init?.method === "POST") {
      return json(
        {
          session_id: "s1",
          distribution: state.distribution,
          n: state.distribution.length,
          horizon: state.horizon,
          seed: 1,
          rules: "scoring: +1 / -1 / 0",
        },
        201,
      );
    }
    if (url.endsWith("/moves") && init?.method === "POST") {
      const { round, site } = JSON.parse(String(init.body));
      if (round !== state.history.length) {
        return json({ detail: { error: "round_conflict", message: "stale" } }, 409);
      }
      const t = state.history.length;
      const ranger = state.rangerSites[t % state.rangerSites.length];
      const rhinos = state.rhinos[t % state.rhinos.length];
      const u = site === ranger ? -1 : rhinos[site] ? 1 : 0;
      const reveal: RoundReveal = {
        round: t,
        poacher_site: site,
        ranger_site: ranger,
        rhino_present: rhinos,
        u_p: u,
        u_r: -u,
      };
      state.history.push(reveal);
      state.score += u;
      return json({
        round: t,
        outcome: reveal,
        score: state.score,
        rounds_played: state.history.length,
        completed: state.history.length >= state.horizon,
      });
    }
    if (/\/sessions\/[^/]+$/.test(url)) {
      return json({
        session_id: "s1",
        distribution: state.distribution,
        n: state.distribution.length,
        horizon: state.horizon,
        round: state.history.length,
        score: state.score,
        completed: state.history.length >= state.horizon,
        history: state.history,
        ...state.extraSessionFields,
      });
    }
    return json({ detail: { error: "not_found", message: url } }, 404);
  };

  return { fetch: fakeFetch, state };
}
