// @vitest-environment happy-dom
/** End-to-end playground loop against a locally running service.
 *
 * A desk-scale checkpoint is generated once (cached under .cache/) and the
 * service is spawned for the duration of this file. The test drives the
 * same edit/debounce/predict/gauge path the browser UI uses.
 */
import { spawn, spawnSync } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { existsSync, mkdirSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { createPlayground } from "../src/app.js";
import type { LiveUpdate } from "../src/live.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FRONTEND = join(HERE, "..");
const CKPT = join(FRONTEND, ".cache", "desk.ckpt");
const PORT = 8790 + (process.pid % 100);
const ENDPOINT = `http://127.0.0.1:${PORT}`;
const DEBOUNCE_MS = 250;

let server: ChildProcess | null = null;

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${ENDPOINT}/health`);
      if (res.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`service did not come up on ${ENDPOINT} within ${timeoutMs} ms`);
}

beforeAll(async () => {
  if (!existsSync(CKPT)) {
    mkdirSync(dirname(CKPT), { recursive: true });
    const made = spawnSync("python3", [join(HERE, "helpers", "make_checkpoint.py"), CKPT], {
      encoding: "utf-8",
    });
    if (made.status !== 0) {
      throw new Error(`checkpoint creation failed: ${made.stderr}`);
    }
  }
  server = spawn(
    "python3",
    ["-m", "vibtact.cli", "serve", "--model", CKPT, "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForHealth(60_000);
}, 120_000);

afterAll(() => {
  server?.kill();
});

function playgroundWithQueue() {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const updates: LiveUpdate[] = [];
  const waiters: Array<(u: LiveUpdate) => void> = [];
  const pg = createPlayground(root, {
    endpoint: ENDPOINT,
    onApplied: (u) => {
      updates.push(u);
      const w = waiters.shift();
      w?.(u);
    },
  });
  const nextUpdate = (timeoutMs: number): Promise<LiveUpdate> =>
    new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error(`no gauge update within ${timeoutMs} ms`)),
        timeoutMs,
      );
      waiters.push((u) => {
        clearTimeout(timer);
        resolve(u);
      });
    });
  return { pg, updates, nextUpdate };
}

function gaugeText(pg: ReturnType<typeof createPlayground>): string[] {
  return [
    pg.gauges.roughness.textContent ?? "",
    pg.gauges.valence.textContent ?? "",
    pg.gauges.arousal.textContent ?? "",
  ];
}

describe("playground loop", () => {
  it("updates gauges within 500 ms of debounce expiry and grows history", async () => {
    const { pg, nextUpdate } = playgroundWithQueue();

    // settle an initial design at amplitude 0
    pg.editAmplitude(0);
    await nextUpdate(10_000);
    expect(pg.session.history.length).toBe(1);
    const historyBefore = pg.session.history.length;

    // the edit under test: amplitude 0 -> 1
    const editedAt = Date.now();
    const waiting = nextUpdate(DEBOUNCE_MS + 500);
    pg.editAmplitude(1);
    const applied = await waiting;
    const appliedAt = Date.now();

    const debounceExpiry = editedAt + DEBOUNCE_MS;
    expect(appliedAt - debounceExpiry).toBeLessThanOrEqual(500);
    expect(pg.session.history.length).toBe(historyBefore + 1);
    expect((applied.spec as { amplitude: number }).amplitude).toBe(1);
    expect(gaugeText(pg)).toEqual([
      applied.ratings.roughness.toFixed(1),
      applied.ratings.valence.toFixed(1),
      applied.ratings.arousal.toFixed(1),
    ]);
    expect(pg.historyCountEl.textContent).toBe(String(pg.session.history.length));
    console.log(
      `[PASS] playground loop (gauge update ${appliedAt - debounceExpiry} ms after debounce expiry)`,
    );
  }, 30_000);

  it("yields identical gauges when the identical spec is re-submitted", async () => {
    const { pg, nextUpdate } = playgroundWithQueue();

    pg.editAmplitude(1);
    await nextUpdate(10_000);
    const first = gaugeText(pg);

    pg.editAmplitude(1);
    await nextUpdate(10_000);
    expect(gaugeText(pg)).toEqual(first);
    console.log("[PASS] playground determinism (identical spec, identical gauges)");
  }, 30_000);

  it("displays only the latest of two rapid edits", async () => {
    const { pg, updates, nextUpdate } = playgroundWithQueue();

    pg.editAmplitude(0.2);
    pg.editAmplitude(0.8); // within the debounce window, supersedes 0.2
    await nextUpdate(10_000);

    expect(updates.length).toBe(1);
    expect((updates[0].spec as { amplitude: number }).amplitude).toBe(0.8);
  }, 30_000);

  it("ghosts the previous prediction for comparison", async () => {
    const { pg, nextUpdate } = playgroundWithQueue();

    pg.editAmplitude(0);
    await nextUpdate(10_000);
    expect(pg.ghost.textContent).toBe("");
    const first = gaugeText(pg);

    pg.editAmplitude(1);
    await nextUpdate(10_000);
    expect(pg.ghost.textContent).toBe(first.join(" / "));
  }, 30_000);

  it("surfaces out-of-band warnings from the service", async () => {
    const { pg, nextUpdate } = playgroundWithQueue();

    pg.edit({ type: "sinusoidal", amplitude: 0.5, carrier_freq: 300, envelope_freq: 0, duration: 1 });
    await nextUpdate(10_000);
    expect(pg.warningsEl.textContent).toMatch(/80.*230/);
  }, 30_000);

  it("renders the synthesized waveform via /synthesize", async () => {
    const { pg } = playgroundWithQueue();
    await pg.refreshVisuals({
      type: "sinusoidal",
      amplitude: 1,
      carrier_freq: 155,
      envelope_freq: 4,
      duration: 1,
    });
    expect(pg.errorEl.textContent).toBe("");
  }, 30_000);
});
