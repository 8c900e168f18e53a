// Entry point: route /board/{id} (append ?baseline=1 for the stripped-down
// comparison view), wire the client to the live service, mount the page.

import { ApiClient, SseEvents } from "./api.js";
import { BoardClient } from "./client.js";
import { BoardPage } from "./ui.js";

export function parseRoute(pathname: string, search: string): {
  boardId: string | null;
  baseline: boolean;
} {
  const match = /^\/board\/([^/]+)\/?$/.exec(pathname);
  const params = new URLSearchParams(search);
  return {
    boardId: match ? decodeURIComponent(match[1]!) : null,
    baseline: params.get("baseline") === "1",
  };
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const route = parseRoute(window.location.pathname, window.location.search);
  if (!route.boardId) {
    root.textContent = "No board selected. Open /board/{id}.";
    return;
  }
  const api = new ApiClient();
  const client = new BoardClient(api, new SseEvents(), route.boardId, route.baseline);
  new BoardPage(client, api.imageUrl(route.boardId), root);
  try {
    await client.open();
  } catch (error) {
    root.textContent = `Failed to load board: ${String(error)}`;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined" && document.getElementById("app")) {
  void boot();
}
