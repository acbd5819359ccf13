// Browser wiring: canvas, toolbar, status line, event panel, and a live
// WebSocket to the steering server.

import { SteeringClient } from "./client.js";
import { Mirror } from "./mirror.js";
import { Snapshot } from "./protocol.js";
import { Tool, ViewState, eventPanelRows, renderFrame } from "./render.js";
import { gestureToIntervention } from "./tools.js";

const DEFAULT_SCENARIO = {
  arena: { width: 72, height: 72 },
  seed: 42,
  start: { x: 36, y: 36 },
  params: { decay: 2e-4 },
  flakes: [
    { x: 12, y: 12, color: "Uncolored", mass: 800.0 },
    { x: 60, y: 14, color: "Green", mass: 800.0 },
    { x: 14, y: 58, color: "Blue", mass: 800.0 },
    { x: 58, y: 60, color: "Red", mass: 800.0 },
  ],
};

function toast(text: string): void {
  const el = document.getElementById("toast");
  if (!el) return;
  el.textContent = text;
  el.classList.add("visible");
  window.setTimeout(() => el.classList.remove("visible"), 2500);
}

async function boot(): Promise<void> {
  const canvas = document.getElementById("arena") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("no 2d context");

  const view: ViewState = {
    camera: { x: 0, y: 0, zoom: 8 },
    tool: { kind: "inspect" },
    session: null,
    mirror: null,
  };

  const ws = new WebSocket(`ws://${location.host}/session`);
  await new Promise((resolve, reject) => {
    ws.onopen = resolve;
    ws.onerror = reject;
  });
  const client = new SteeringClient({
    send: (d) => ws.send(d),
    set onmessage(fn: (data: string) => void) {
      ws.onmessage = (ev) => fn(String(ev.data));
    },
  });
  client.onError = (err) => toast(`${err.code}: ${err.message}`);
  client.onDelta = (delta) => {
    view.mirror?.apply(delta);
  };

  view.session = await client.create(DEFAULT_SCENARIO);
  view.mirror = new Mirror((await client.snapshot()) as Snapshot);
  await client.subscribe();
  await client.start(20);

  // toolbar
  const tools: [string, Tool][] = [
    ["inspect", { kind: "inspect" }],
    ["uncolored", { kind: "flake", color: "Uncolored" }],
    ["green", { kind: "flake", color: "Green" }],
    ["yellow", { kind: "flake", color: "Yellow" }],
    ["blue", { kind: "flake", color: "Blue" }],
    ["red", { kind: "flake", color: "Red" }],
    ["light", { kind: "light", intensity: 0.9 }],
  ];
  const bar = document.getElementById("toolbar");
  for (const [name, tool] of tools) {
    const btn = document.createElement("button");
    btn.textContent = name;
    btn.onclick = () => {
      view.tool = tool;
      document.querySelectorAll("#toolbar button").forEach((b) =>
        b.classList.toggle("active", b === btn));
    };
    bar?.appendChild(btn);
  }

  // pointer: click places a flake, drag places light, wheel zooms
  let press: [number, number] | null = null;
  canvas.onmousedown = (ev) => {
    press = [ev.offsetX, ev.offsetY];
  };
  canvas.onmouseup = async (ev) => {
    if (!press) return;
    const iv = gestureToIntervention(view.tool, view.camera, press, [ev.offsetX, ev.offsetY]);
    press = null;
    if (iv) await client.intervene(iv);
  };
  canvas.onwheel = (ev) => {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.25 : 0.8;
    view.camera.zoom = Math.min(40, Math.max(2, view.camera.zoom * factor));
  };
  window.onkeydown = (ev) => {
    const pan = 6 / view.camera.zoom * 8;
    if (ev.key === "ArrowLeft") view.camera.x -= pan;
    if (ev.key === "ArrowRight") view.camera.x += pan;
    if (ev.key === "ArrowUp") view.camera.y -= pan;
    if (ev.key === "ArrowDown") view.camera.y += pan;
  };

  const panel = document.getElementById("events");
  const frame = () => {
    renderFrame(ctx, view, canvas.width, canvas.height);
    if (panel && view.mirror) {
      panel.textContent = eventPanelRows(view.mirror).join("\n");
    }
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

boot().catch((err) => toast(String(err)));
