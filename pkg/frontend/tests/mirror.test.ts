// End-to-end against the real server: a scripted 500-tick session with five
// interventions sent through the UI message builders. The mirror built from
// deltas must equal a fresh server snapshot exactly, the intervention bytes
// must match their scripted equivalents, and the exported log must replay
// byte-exactly offline.

import { spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Mirror } from "../src/mirror.js";
import { Delta, Intervention, Snapshot, messages } from "../src/protocol.js";
import { RunningServer, startServer } from "./pyserver.js";
import { WsClient } from "./wsclient.js";

let server: RunningServer;

beforeAll(async () => {
  server = await startServer();
}, 40000);

afterAll(() => {
  server?.stop();
});

const SCENARIO = {
  arena: { width: 24, height: 24 },
  seed: 5,
  start: { x: 12, y: 12 },
  params: { noise_weight: 0.0, spawn_burst: 1, decay: 2e-4 },
  flakes: [
    { x: 4, y: 4, color: "Uncolored", mass: 60.0 },
    { x: 20, y: 18, color: "Green", mass: 60.0 },
  ],
};

const INTERVENTIONS: [number, Intervention][] = [
  [50, { kind: "PlaceFlake", x: 18, y: 6, color: "Yellow", mass: 50.0 }],
  [150, { kind: "PlaceFlake", x: 6, y: 18, color: "Blue", mass: 50.0 }],
  [250, { kind: "PlaceLight", x0: 0, y0: 0, x1: 11, y1: 11, intensity: 0.8 }],
  [350, { kind: "RemoveLight" }],
  [450, { kind: "PlaceFlake", x: 12, y: 3, color: "Red", mass: 50.0 }],
];

async function request(ws: WsClient, payload: string): Promise<Record<string, unknown>> {
  ws.send(payload);
  for (;;) {
    const reply = JSON.parse(await ws.receive()) as Record<string, unknown>;
    if (reply.type !== "delta") return reply;
  }
}

describe("mirror consistency over a scripted 500-tick session", () => {
  it("applies every delta and matches the server snapshot exactly", async () => {
    const ws = await WsClient.connect("127.0.0.1", server.port, "/session");
    try {
      const created = await request(ws, messages.create(SCENARIO));
      expect(created.type).toBe("created");
      const sid = created.session as string;

      const snapReply = await request(ws, messages.snapshot(sid));
      const mirror = new Mirror(snapReply.snapshot as Snapshot);
      expect((await request(ws, messages.subscribe(sid))).type).toBe("subscribed");

      let tick = 0;
      for (const [when, intervention] of INTERVENTIONS) {
        // advance to the intervention point, mirroring every delta
        const batch = when - tick;
        ws.send(messages.step(sid, batch));
        for (;;) {
          const msg = JSON.parse(await ws.receive()) as Record<string, unknown>;
          if (msg.type === "delta") mirror.apply(msg as unknown as Delta);
          else {
            expect(msg.type).toBe("stepped");
            break;
          }
        }
        tick = when;
        const wire = messages.intervene(sid, intervention);
        // the UI sends exactly the bytes a script would
        expect(wire).toBe(JSON.stringify({ type: "intervene", session: sid, intervention }));
        const ok = await request(ws, wire);
        expect(ok.type).toBe("ok");
      }
      ws.send(messages.step(sid, 500 - tick));
      for (;;) {
        const msg = JSON.parse(await ws.receive()) as Record<string, unknown>;
        if (msg.type === "delta") mirror.apply(msg as unknown as Delta);
        else break;
      }

      expect(mirror.tick).toBe(500);
      const finalReply = await request(ws, messages.snapshot(sid));
      const diff = mirror.diff(finalReply.snapshot as Snapshot);
      expect(diff).toEqual([]);

      // exported log replays byte-exactly through the package CLI
      const logReply = await request(ws, messages.exportLog(sid));
      const dir = mkdtempSync(join(tmpdir(), "steer-"));
      const logPath = join(dir, "session.log");
      writeFileSync(logPath, logReply.log as string);
      const replay = spawnSync("python3", ["-m", "physarum_machine.cli", "replay", logPath],
                               { encoding: "utf-8", timeout: 120000 });
      expect(replay.stderr).toContain("byte-exactly");
      expect(replay.status).toBe(0);
    } finally {
      ws.close();
    }
  }, 180000);

  it("surfaces HaltedError when intervening after the machine halted", async () => {
    const ws = await WsClient.connect("127.0.0.1", server.port, "/session");
    try {
      const created = await request(ws, messages.create({
        arena: { width: 10, height: 10 }, seed: 1, start: { x: 5, y: 5 },
      }));
      const sid = created.session as string;
      const stepped = await request(ws, messages.step(sid, 1));
      expect(stepped.status).toBe("Sclerotium");
      const err = await request(ws, messages.intervene(sid,
        { kind: "PlaceFlake", x: 1, y: 1, color: "Uncolored", mass: 5.0 }));
      expect(err.type).toBe("error");
      expect(err.code).toBe("HaltedError");
    } finally {
      ws.close();
    }
  }, 60000);
});
