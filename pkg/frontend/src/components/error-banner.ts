/** Inline error banner; selections stay untouched while it is visible. */
import { el } from "../format.js";
import type { SessionStore } from "../state.js";

export function mountErrorBanner(
  container: HTMLElement,
  store: SessionStore,
): void {
  const banner = el("div", { class: "error-banner", "data-field": "error" });
  banner.style.display = "none";
  container.append(banner);
  store.subscribe((session) => {
    if (session.error === null) {
      banner.style.display = "none";
      banner.textContent = "";
    } else {
      banner.style.display = "";
      banner.textContent = session.error;
    }
  });
}
