// Canvas rendering of the arena. The drawing surface is a structural subset
// of CanvasRenderingContext2D so tests can count draw calls headlessly.

import { flowSign } from "./flow.js";
import { Mirror } from "./mirror.js";
import { parseEventLine } from "./protocol.js";

export interface DrawSurface {
  // property types match CanvasRenderingContext2D so a real 2d context
  // satisfies this structurally; only string styles are ever assigned
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  globalAlpha: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Camera {
  x: number; // arena cell at the canvas origin
  y: number;
  zoom: number; // pixels per cell
}

export type Tool =
  | { kind: "flake"; color: "Uncolored" | "Green" | "Yellow" | "Blue" | "Red" }
  | { kind: "light"; intensity: number }
  | { kind: "inspect" };

export interface ViewState {
  camera: Camera;
  tool: Tool;
  session: string | null;
  mirror: Mirror | null;
}

export const FLAKE_COLORS: Record<string, string> = {
  Uncolored: "#ebe6d7",
  Green: "#3caa3c",
  Yellow: "#e6c828",
  Blue: "#3c5adc",
  Red: "#d23232",
};

export interface RenderStats {
  flakes: number;
  veins: number;
  tips: number;
  pulseOffsets: Map<number, number>; // vein id -> pulse index along polyline
  activeDrawn: boolean;
  command: string;
}

const px = (cam: Camera, cx: number, cy: number): [number, number] => [
  (cx - cam.x + 0.5) * cam.zoom,
  (cy - cam.y + 0.5) * cam.zoom,
];

export function renderFrame(ctx: DrawSurface, view: ViewState,
                            width: number, height: number): RenderStats {
  const stats: RenderStats = {
    flakes: 0, veins: 0, tips: 0,
    pulseOffsets: new Map(), activeDrawn: false, command: "",
  };
  ctx.fillStyle = "#101018";
  ctx.fillRect(0, 0, width, height);
  const m = view.mirror;
  if (!m) return stats;
  const cam = view.camera;
  const simTime = m.tick * m.dt;

  // chemo heat and light wash, cell by cell over the visible window
  const x0 = Math.max(0, Math.floor(cam.x));
  const y0 = Math.max(0, Math.floor(cam.y));
  const x1 = Math.min(m.width, Math.ceil(cam.x + width / cam.zoom));
  const y1 = Math.min(m.height, Math.ceil(cam.y + height / cam.zoom));
  let peak = 0;
  for (let y = y0; y < y1; y++)
    for (let x = x0; x < x1; x++)
      if (m.chemo[y][x] > peak) peak = m.chemo[y][x];
  for (let y = y0; y < y1; y++) {
    for (let x = x0; x < x1; x++) {
      const c = peak > 0 ? m.chemo[y][x] / peak : 0;
      const li = m.light[y][x];
      if (c <= 0 && li <= 0) continue;
      const r = Math.min(255, Math.round(90 * c + 40 * li));
      const g = Math.min(255, Math.round(50 * c + 40 * li));
      const b = Math.min(255, Math.round(140 * c + 60 * li));
      ctx.fillStyle = `rgb(${r},${g},${b})`;
      ctx.fillRect((x - cam.x) * cam.zoom, (y - cam.y) * cam.zoom, cam.zoom, cam.zoom);
    }
  }

  // veins with a flow pulse riding in the direction of the current stream
  for (const vein of m.veins) {
    ctx.strokeStyle = "#f0e89a";
    ctx.lineWidth = Math.max(1, cam.zoom / 3);
    ctx.beginPath();
    vein.polyline.forEach(([cx, cy], i) => {
      const [X, Y] = px(cam, cx, cy);
      if (i === 0) ctx.moveTo(X, Y);
      else ctx.lineTo(X, Y);
    });
    ctx.stroke();
    stats.veins += 1;
    const n = vein.polyline.length;
    if (n > 0) {
      const travel = Math.floor(simTime * vein.flow_speed) % n;
      const idx = flowSign(vein, simTime) > 0 ? travel : n - 1 - travel;
      stats.pulseOffsets.set(vein.id, idx);
      const [cx, cy] = vein.polyline[idx];
      const [X, Y] = px(cam, cx, cy);
      ctx.fillStyle = "#ffffff";
      ctx.beginPath();
      ctx.arc(X, Y, Math.max(1.5, cam.zoom / 4), 0, Math.PI * 2);
      ctx.fill();
    }
  }

  // flakes in their color class, dimmed when spent
  for (const flake of m.flakes) {
    const base = FLAKE_COLORS[flake.color] ?? FLAKE_COLORS.Uncolored;
    ctx.globalAlpha = flake.mass > 0 ? 1.0 : 0.35;
    ctx.fillStyle = base;
    const [X, Y] = px(cam, flake.x, flake.y);
    ctx.beginPath();
    ctx.arc(X, Y, Math.max(2, cam.zoom * 0.8), 0, Math.PI * 2);
    ctx.fill();
    ctx.globalAlpha = 1.0;
    stats.flakes += 1;
  }

  // nodes; the active one gets a halo
  for (const node of m.nodes) {
    const [X, Y] = px(cam, node.x, node.y);
    ctx.fillStyle = node.kind === "dynamic" ? "#c8c8c8" : "#ffffff";
    ctx.beginPath();
    ctx.arc(X, Y, Math.max(1.5, cam.zoom / 3), 0, Math.PI * 2);
    ctx.fill();
    if (node.id === m.activeNode) {
      ctx.strokeStyle = "#ff78c8";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(X, Y, Math.max(4, cam.zoom), 0, Math.PI * 2);
      ctx.stroke();
      stats.activeDrawn = true;
    }
  }

  for (const tip of m.tips) {
    const [X, Y] = [(tip.x - cam.x) * cam.zoom, (tip.y - cam.y) * cam.zoom];
    ctx.fillStyle = "#ffffff";
    ctx.beginPath();
    ctx.arc(X, Y, Math.max(1, cam.zoom / 5), 0, Math.PI * 2);
    ctx.fill();
    stats.tips += 1;
  }

  stats.command = `${m.highCommand} | tick ${m.tick} | ${m.status}`;
  ctx.fillStyle = "#e8e8f0";
  ctx.font = "13px monospace";
  ctx.fillText(stats.command, 8, 16);
  return stats;
}

/** Last few emergent events as display rows: source plus machine ops. */
export function eventPanelRows(m: Mirror, limit = 12): string[] {
  return m.eventLines.slice(-limit).map((line) => {
    const ev = parseEventLine(line);
    const ops = ev.ops.length ? ev.ops.join(" ") : "-";
    return `t${ev.tick} ${ev.source}: ${ops}`;
  });
}
