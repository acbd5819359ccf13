// Headless rendering checks with a recording stub surface.

import { describe, expect, it } from "vitest";

import { flowSign } from "../src/flow.js";
import { Mirror } from "../src/mirror.js";
import { Snapshot } from "../src/protocol.js";
import { DrawSurface, ViewState, eventPanelRows, renderFrame } from "../src/render.js";

class StubSurface implements DrawSurface {
  fillStyle = "";
  strokeStyle = "";
  lineWidth = 1;
  font = "";
  globalAlpha = 1;
  calls: string[] = [];
  texts: string[] = [];
  fillRect() { this.calls.push("fillRect"); }
  beginPath() { this.calls.push("beginPath"); }
  moveTo() { this.calls.push("moveTo"); }
  lineTo() { this.calls.push("lineTo"); }
  stroke() { this.calls.push("stroke"); }
  arc() { this.calls.push("arc"); }
  fill() { this.calls.push("fill"); }
  fillText(text: string) { this.texts.push(text); }
}

function snapshot(partial: Partial<Snapshot> = {}): Snapshot {
  const zeros = (w: number, h: number) =>
    Array.from({ length: h }, () => Array.from({ length: w }, () => 0));
  return {
    tick: 0, status: "Running", high_command: "SearchForNutrients",
    active_node: 1, seed: 1,
    arena: { width: 12, height: 10, cell_size: 0.5, dt: 1.0,
             chemo: zeros(12, 10), light: zeros(12, 10) },
    flakes: [], nodes: [], veins: [], tips: [], events: 0,
    counters: { node: 2, vein: 1, tip: 1, spawn_cooldown: 0, spawn_budget: 0 },
    ...partial,
  };
}

function view(m: Mirror): ViewState {
  return { camera: { x: 0, y: 0, zoom: 8 }, tool: { kind: "inspect" }, session: "s1", mirror: m };
}

describe("renderFrame", () => {
  it("draws only the backdrop for an empty scenario", () => {
    const ctx = new StubSurface();
    const stats = renderFrame(ctx, view(new Mirror(snapshot())), 96, 80);
    expect(stats.flakes).toBe(0);
    expect(stats.veins).toBe(0);
    expect(ctx.calls[0]).toBe("fillRect");
  });

  it("draws a glyph per flake and a polyline per vein", () => {
    const m = new Mirror(snapshot({
      flakes: [
        { id: 0, x: 2, y: 2, color: "Red", mass: 10, occupied: false, node: null },
        { id: 1, x: 5, y: 5, color: "Green", mass: 10, occupied: true, node: 2 },
        { id: 2, x: 8, y: 3, color: "Blue", mass: 0, occupied: false, node: null },
      ],
      nodes: [
        { id: 1, kind: "dynamic", x: 4, y: 4, flake: null },
        { id: 2, kind: "stationary", x: 5, y: 5, flake: 1 },
      ],
      veins: [
        { id: 1, a: 1, b: 2, polyline: [[4, 4], [5, 4], [5, 5]],
          flow_speed: 2.0, reversal_period: 120.0, phase: 0.0 },
        { id: 2, a: 2, b: 1, polyline: [[5, 5], [4, 5], [4, 4]],
          flow_speed: 1.5, reversal_period: 90.0, phase: 10.0 },
      ],
      tips: [{ id: 3, x: 6.5, y: 2.5, heading: [1, 0], origin: 2, starve: 0, path: [[6, 2]] }],
    }));
    const stats = renderFrame(new StubSurface(), view(m), 96, 80);
    expect(stats.flakes).toBe(3);
    expect(stats.veins).toBe(2);
    expect(stats.tips).toBe(1);
    expect(stats.activeDrawn).toBe(true);
  });

  it("pulse direction follows the shuttle flow reversal", () => {
    const vein = { id: 1, a: 1, b: 2,
                   polyline: [[0, 0], [1, 0], [2, 0], [3, 0], [4, 0]] as [number, number][],
                   flow_speed: 1.0, reversal_period: 120.0, phase: 0.0 };
    const nodes = [{ id: 1, kind: "dynamic" as const, x: 0, y: 0, flake: null },
                   { id: 2, kind: "dynamic" as const, x: 4, y: 0, flake: null }];
    const offsets: number[] = [];
    for (const tick of [1, 121]) {  // one tick into each half-period
      const m = new Mirror(snapshot({ veins: [vein], nodes, tick }));
      const stats = renderFrame(new StubSurface(), view(m), 96, 80);
      offsets.push(stats.pulseOffsets.get(1)!);
    }
    expect(flowSign(vein, 1)).toBe(1);
    expect(flowSign(vein, 121)).toBe(-1);
    expect(offsets[0]).toBe(1);              // riding forward from end a
    expect(offsets[1]).toBe(vein.polyline.length - 2);  // reversed, from end b
  });

  it("shows the current high-level command", () => {
    const ctx = new StubSurface();
    const m = new Mirror(snapshot({ high_command: "EscapeLight", tick: 7 }));
    const stats = renderFrame(ctx, view(m), 96, 80);
    expect(stats.command).toContain("EscapeLight");
    expect(ctx.texts.some((t) => t.includes("EscapeLight"))).toBe(true);
  });
});

describe("event panel", () => {
  it("translates event lines into op rows", () => {
    const m = new Mirror(snapshot());
    m.eventLines.push(
      "tick=21 src=OCCUPY color=Uncolored flake=1 node=2 origin=1 op=ADD_NODE[2:Uncolored] op=ADD_EDGE[1,2]",
      "tick=21 src=ACTIVE_MOVED node=2 op=MOVE_ACTIVE[2]",
    );
    const rows = eventPanelRows(m);
    expect(rows[0]).toBe("t21 OCCUPY: ADD_NODE[2:Uncolored] ADD_EDGE[1,2]");
    expect(rows[1]).toBe("t21 ACTIVE_MOVED: MOVE_ACTIVE[2]");
  });
});
