// Wire schema of the steering server. Message builders serialize with plain
// JSON.stringify so a UI-originated message is byte-identical to a scripted
// one built from the same fields.

export type Color = "Uncolored" | "Green" | "Yellow" | "Blue" | "Red";

export interface FlakeView {
  id: number;
  x: number;
  y: number;
  color: Color;
  mass: number;
  occupied: boolean;
  node: number | null;
}

export interface NodeView {
  id: number;
  kind: "stationary" | "dynamic";
  x: number;
  y: number;
  flake: number | null;
}

export interface VeinView {
  id: number;
  a: number;
  b: number;
  polyline: [number, number][];
  flow_speed: number;
  reversal_period: number;
  phase: number;
}

export interface TipView {
  id: number;
  x: number;
  y: number;
  heading: [number, number];
  origin: number;
  starve: number;
  path: [number, number][];
}

export interface Counters {
  node: number;
  vein: number;
  tip: number;
  spawn_cooldown: number;
  spawn_budget: number;
}

export interface Snapshot {
  tick: number;
  status: string;
  high_command: string;
  active_node: number;
  seed: number;
  arena: {
    width: number;
    height: number;
    cell_size: number;
    dt: number;
    chemo: number[][];
    light: number[][];
  };
  flakes: FlakeView[];
  nodes: NodeView[];
  veins: VeinView[];
  tips: TipView[];
  events: number;
  counters: Counters;
}

export interface Delta {
  type: "delta";
  session: string;
  tick: number;
  status: string;
  high_command: string;
  active_node: number;
  events: string[];
  chemo: [number, number, number][];
  light: [number, number, number][];
  flakes: FlakeView[];
  nodes: NodeView[];
  veins: VeinView[];
  tips: TipView[];
  event_count: number;
  counters: Counters;
}

export type Intervention =
  | { kind: "PlaceFlake"; x: number; y: number; color: Color; mass: number }
  | { kind: "PlaceLight"; x0: number; y0: number; x1: number; y1: number; intensity: number }
  | { kind: "RemoveLight" };

export interface ServerError {
  type: "error";
  code: "UnknownSession" | "BadMessage" | "HaltedError" | "ConfigError";
  message: string;
}

export const messages = {
  create: (scenario: unknown) => JSON.stringify({ type: "create", scenario }),
  subscribe: (session: string) => JSON.stringify({ type: "subscribe", session }),
  step: (session: string, n: number) => JSON.stringify({ type: "step", session, n }),
  start: (session: string, pace: number) => JSON.stringify({ type: "start", session, pace }),
  pause: (session: string) => JSON.stringify({ type: "pause", session }),
  snapshot: (session: string) => JSON.stringify({ type: "snapshot", session }),
  exportLog: (session: string) => JSON.stringify({ type: "export_log", session }),
  intervene: (session: string, intervention: Intervention) =>
    JSON.stringify({ type: "intervene", session, intervention }),
};

// One emergent event line, split into its source description and the
// machine operations it realizes (op=KIND[args] fragments).
export interface ParsedEvent {
  tick: number;
  source: string;
  ops: string[];
}

export function parseEventLine(line: string): ParsedEvent {
  const parts = line.trim().split(" ");
  let tick = 0;
  let source = "";
  const ops: string[] = [];
  for (const part of parts) {
    if (part.startsWith("tick=")) tick = Number(part.slice(5));
    else if (part.startsWith("src=")) source = part.slice(4);
    else if (part.startsWith("op=")) ops.push(part.slice(3));
  }
  return { tick, source, ops };
}
