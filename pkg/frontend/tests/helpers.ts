/** Shared test plumbing: fixture loading and a fetch mock that replays
 * recorded API responses for exactly-matching requests. */
import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface Fixture {
  name: string;
  request: { method: string; path: string; body: unknown };
  response: unknown;
}

const FIXTURE_DIR = join(
  dirname(fileURLToPath(import.meta.url)),
  "..",
  "fixtures",
);

export function loadFixtures(): Fixture[] {
  return readdirSync(FIXTURE_DIR)
    .filter((name) => name.endsWith(".json"))
    .map(
      (name) =>
        JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf8")) as Fixture,
    );
}

export function fixture<T>(name: string): { request: Fixture["request"]; response: T } {
  const found = loadFixtures().find((f) => f.name === name);
  if (!found) throw new Error(`fixture ${name} not recorded`);
  return { request: found.request, response: found.response as T };
}

function deepEqual(a: unknown, b: unknown): boolean {
  return JSON.stringify(normalize(a)) === JSON.stringify(normalize(b));
}

function normalize(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(normalize);
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([x], [y]) => (x < y ? -1 : 1))
      .map(([k, v]) => [k, normalize(v)]);
    return Object.fromEntries(entries);
  }
  return value;
}

const jsonResponse = (payload: unknown, status = 200): Response =>
  new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });

/** Replace global fetch with a replayer over the recorded fixtures. */
export function installFixtureFetch(fixtures: Fixture[] = loadFixtures()): void {
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    for (const f of fixtures) {
      if (f.request.method !== method) continue;
      if (!url.endsWith(`/api/v1${f.request.path}`)) continue;
      if (method !== "GET" && !deepEqual(body, f.request.body)) continue;
      return jsonResponse(f.response);
    }
    return jsonResponse(
      {
        code: "no_fixture",
        message: `no recorded fixture for ${method} ${url}`,
        detail: body,
      },
      404,
    );
  }) as typeof fetch;
}

/** Let queued fetch promises and store updates settle. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 5; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

/** Hexes in document order for every fill="..." in an SVG string. */
export function svgFills(svg: string): string[] {
  return [...svg.matchAll(/fill="([^"]+)"/g)].map((m) => m[1]!);
}
