// Tool handling: canvas coordinates become cell coordinates, and tool
// gestures become intervention messages with the exact server schema.

import { Intervention } from "./protocol.js";
import { Camera, Tool } from "./render.js";

export function canvasToCell(cam: Camera, pxX: number, pxY: number): [number, number] {
  return [Math.floor(cam.x + pxX / cam.zoom), Math.floor(cam.y + pxY / cam.zoom)];
}

export const DEFAULT_FLAKE_MASS = 100.0;

/** Click (or drag for light regions) to intervention; null for inspect. */
export function gestureToIntervention(
  tool: Tool,
  cam: Camera,
  press: [number, number],
  release: [number, number],
): Intervention | null {
  if (tool.kind === "inspect") return null;
  const [ax, ay] = canvasToCell(cam, press[0], press[1]);
  const [bx, by] = canvasToCell(cam, release[0], release[1]);
  if (tool.kind === "flake") {
    return { kind: "PlaceFlake", x: bx, y: by, color: tool.color, mass: DEFAULT_FLAKE_MASS };
  }
  return {
    kind: "PlaceLight",
    x0: Math.min(ax, bx),
    y0: Math.min(ay, by),
    x1: Math.max(ax, bx),
    y1: Math.max(ay, by),
    intensity: tool.intensity,
  };
}
