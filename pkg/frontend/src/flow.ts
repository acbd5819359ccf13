// Shuttle-flow direction of a vein at simulation time t (seconds): a square
// wave flipping every reversal_period, offset by the vein's phase. Mirrors
// the simulator's definition so the pulse animation agrees with the engine.

import { VeinView } from "./protocol.js";

export function flowSign(vein: Pick<VeinView, "reversal_period" | "phase">, t: number): 1 | -1 {
  if (t < 0) throw new Error("time must be >= 0");
  return Math.floor((t + vein.phase) / vein.reversal_period) % 2 === 0 ? 1 : -1;
}
