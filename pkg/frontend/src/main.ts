import { GameApi } from "./api.js";
import { GameSession } from "./state.js";
import { UiRenderer } from "./ui.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  // served by the session service itself: same origin
  return window.location.origin;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const api = new GameApi(apiBase());
  const session = new GameSession(api, 650); // keep tiles locked through the reveal
  const ui = new UiRenderer(
    root,
    {
      onStart: (req) => void session.start(req),
      onPick: (site) => void session.submit(site),
    },
    () => session.logUrl(),
  );
  session.onChange((view) => ui.render(view));
  try {
    ui.setPresets(await api.presets());
  } catch {
    // service down: the config screen still renders with custom input only
  }
  ui.render(session.view());
}

void boot();
