// Local mirror of a server session: seeded from one snapshot, then kept in
// sync by applying every delta in order. The invariant the tests enforce:
// after any number of deltas the mirror equals a fresh server snapshot.

import { Counters, Delta, FlakeView, NodeView, Snapshot, TipView, VeinView } from "./protocol.js";

export class Mirror {
  tick: number;
  status: string;
  highCommand: string;
  activeNode: number;
  width: number;
  height: number;
  cellSize: number;
  dt: number;
  chemo: number[][];
  light: number[][];
  flakes: FlakeView[];
  nodes: NodeView[];
  veins: VeinView[];
  tips: TipView[];
  eventCount: number;
  counters: Counters;
  eventLines: string[] = [];

  constructor(snapshot: Snapshot) {
    this.tick = snapshot.tick;
    this.status = snapshot.status;
    this.highCommand = snapshot.high_command;
    this.activeNode = snapshot.active_node;
    this.width = snapshot.arena.width;
    this.height = snapshot.arena.height;
    this.cellSize = snapshot.arena.cell_size;
    this.dt = snapshot.arena.dt;
    this.chemo = snapshot.arena.chemo.map((row) => row.slice());
    this.light = snapshot.arena.light.map((row) => row.slice());
    this.flakes = snapshot.flakes;
    this.nodes = snapshot.nodes;
    this.veins = snapshot.veins;
    this.tips = snapshot.tips;
    this.eventCount = snapshot.events;
    this.counters = snapshot.counters;
  }

  apply(delta: Delta): void {
    for (const [x, y, v] of delta.chemo) this.chemo[y][x] = v;
    for (const [x, y, v] of delta.light) this.light[y][x] = v;
    this.tick = delta.tick;
    this.status = delta.status;
    this.highCommand = delta.high_command;
    this.activeNode = delta.active_node;
    this.flakes = delta.flakes;
    this.nodes = delta.nodes;
    this.veins = delta.veins;
    this.tips = delta.tips;
    this.eventCount += delta.events.length;
    this.counters = delta.counters;
    this.eventLines.push(...delta.events);
  }

  /** Field names that differ from the given snapshot; empty means exact. */
  diff(snapshot: Snapshot): string[] {
    const out: string[] = [];
    const eq = (a: unknown, b: unknown) => JSON.stringify(a) === JSON.stringify(b);
    if (this.tick !== snapshot.tick) out.push("tick");
    if (this.status !== snapshot.status) out.push("status");
    if (this.highCommand !== snapshot.high_command) out.push("high_command");
    if (this.activeNode !== snapshot.active_node) out.push("active_node");
    if (!eq(this.flakes, snapshot.flakes)) out.push("flakes");
    if (!eq(this.nodes, snapshot.nodes)) out.push("nodes");
    if (!eq(this.veins, snapshot.veins)) out.push("veins");
    if (!eq(this.tips, snapshot.tips)) out.push("tips");
    if (!eq(this.counters, snapshot.counters)) out.push("counters");
    if (this.eventCount !== snapshot.events) out.push("events");
    if (!eq(this.chemo, snapshot.arena.chemo)) out.push("chemo");
    if (!eq(this.light, snapshot.arena.light)) out.push("light");
    return out;
  }
}
