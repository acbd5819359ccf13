"""Interactive steering service.

One WebSocket endpoint exposes live sessions: create a scenario, advance it
(stepwise or paced), drop flakes and light in as it runs, and export a log
that replays bit-exactly offline.  Within a session all mutation happens
under one lock, so concurrent client messages serialize in arrival order;
subscribers get one delta per tick that reconstructs the state exactly.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .sim.engine import HaltedError, SimState, apply_intervention, init_scenario, sim_step
from .sim.eventlog import write_event_log
from .sim.model import format_event
from .sim.params import ConfigError
from .sim.scenario import SimConfig, state_snapshot


@dataclass
class Session:
    id: str
    config: SimConfig
    state: SimState
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    subscribers: list[WebSocket] = field(default_factory=list)
    pace_task: Optional[asyncio.Task] = None
    pace: float = 0.0  # ticks per second; 0 = paused
    last_chemo: np.ndarray = None  # type: ignore[assignment]
    last_light: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        self.last_chemo = self.state.arena.chemo.copy()
        self.last_light = self.state.arena.light.copy()


def _field_changes(prev: np.ndarray, cur: np.ndarray) -> list[list[float]]:
    ys, xs = np.nonzero(prev != cur)
    return [[int(x), int(y), float(cur[y, x])] for y, x in zip(ys.tolist(), xs.tolist())]


def _delta(session: Session, events) -> dict:
    state = session.state
    out = {
        "type": "delta",
        "session": session.id,
        "tick": state.tick,
        "status": state.status,
        "high_command": state.high_command,
        "active_node": state.active_node,
        "events": [format_event(e) for e in events],
        "chemo": _field_changes(session.last_chemo, state.arena.chemo),
        "light": _field_changes(session.last_light, state.arena.light),
        "flakes": [{"id": f.id, "x": f.x, "y": f.y, "color": f.color,
                    "mass": f.mass, "occupied": f.occupied, "node": f.node}
                   for f in state.flakes],
        "nodes": [{"id": n.id, "kind": n.kind, "x": n.x, "y": n.y, "flake": n.flake}
                  for _, n in sorted(state.nodes.items())],
        "veins": [{"id": v.id, "a": v.a, "b": v.b,
                   "polyline": [list(c) for c in v.polyline],
                   "flow_speed": v.flow_speed, "reversal_period": v.reversal_period,
                   "phase": v.phase}
                  for _, v in sorted(state.veins.items())],
        "tips": [{"id": t.id, "x": t.x, "y": t.y,
                  "heading": [t.heading[0], t.heading[1]],
                  "origin": t.origin_node, "starve": t.starve,
                  "path": [list(c) for c in t.path]}
                 for t in state.tips if t.alive],
        "event_count": len(state.events),
        "counters": {"node": state.next_node, "vein": state.next_vein,
                     "tip": state.next_tip,
                     "spawn_cooldown": state.spawn_cooldown,
                     "spawn_budget": state.spawn_budget},
    }
    session.last_chemo = state.arena.chemo.copy()
    session.last_light = state.arena.light.copy()
    return out


async def _broadcast(session: Session, message: dict) -> None:
    text = json.dumps(message, sort_keys=True)
    dead = []
    for ws in session.subscribers:
        try:
            await ws.send_text(text)
        except Exception:
            dead.append(ws)
    for ws in dead:
        session.subscribers.remove(ws)


async def _advance(session: Session, ticks: int) -> None:
    """Advance under the session lock, emitting one delta per tick."""
    async with session.lock:
        for _ in range(ticks):
            if not session.state.running:
                break
            events = sim_step(session.state)
            await _broadcast(session, _delta(session, events))


async def _pace_loop(session: Session) -> None:
    try:
        while session.pace > 0 and session.state.running:
            await _advance(session, 1)
            await asyncio.sleep(1.0 / session.pace)
    except asyncio.CancelledError:
        pass


def create_app() -> FastAPI:
    app = FastAPI(title="physarum steering server")
    sessions: dict[str, Session] = {}
    counter = {"n": 0}

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "sessions": len(sessions)}

    def err(code: str, message: str) -> dict:
        return {"type": "error", "code": code, "message": message}

    def get_session(msg: dict) -> Session:
        sid = msg.get("session")
        if not isinstance(sid, str) or sid not in sessions:
            raise KeyError(sid)
        return sessions[sid]

    async def handle(ws: WebSocket, msg: dict) -> Optional[dict]:
        mtype = msg.get("type")
        if mtype == "create":
            try:
                config = SimConfig.from_dict(msg.get("scenario") or {})
                state = init_scenario(config)
            except (ConfigError, TypeError, ValueError) as exc:
                return err("ConfigError", str(exc))
            counter["n"] += 1
            sid = f"s{counter['n']}"
            sessions[sid] = Session(sid, config, state)
            return {"type": "created", "session": sid, "tick": state.tick,
                    "status": state.status}
        try:
            session = get_session(msg)
        except KeyError:
            return err("UnknownSession", f"unknown session {msg.get('session')!r}")
        if mtype == "subscribe":
            if ws not in session.subscribers:
                session.subscribers.append(ws)
            return {"type": "subscribed", "session": session.id, "tick": session.state.tick}
        if mtype == "step":
            n = msg.get("n", 1)
            if not isinstance(n, int) or n < 1:
                return err("BadMessage", "step needs a positive integer n")
            await _advance(session, n)
            return {"type": "stepped", "session": session.id,
                    "tick": session.state.tick, "status": session.state.status}
        if mtype == "start":
            pace = msg.get("pace", 10.0)
            if not isinstance(pace, (int, float)) or pace <= 0:
                return err("BadMessage", "start needs pace > 0")
            session.pace = float(pace)
            if session.pace_task is None or session.pace_task.done():
                session.pace_task = asyncio.create_task(_pace_loop(session))
            return {"type": "started", "session": session.id, "pace": session.pace}
        if mtype == "pause":
            session.pace = 0.0
            if session.pace_task is not None:
                session.pace_task.cancel()
                session.pace_task = None
            return {"type": "paused", "session": session.id, "tick": session.state.tick}
        if mtype == "intervene":
            iv = msg.get("intervention")
            if not isinstance(iv, dict):
                return err("BadMessage", "intervene needs an intervention object")
            async with session.lock:
                try:
                    apply_intervention(session.state, iv)
                except HaltedError as exc:
                    return err("HaltedError", str(exc))
                except ConfigError as exc:
                    return err("ConfigError", str(exc))
            return {"type": "ok", "session": session.id, "tick": session.state.tick}
        if mtype == "snapshot":
            async with session.lock:
                snap = state_snapshot(session.state)
            return {"type": "snapshot", "session": session.id, "snapshot": snap}
        if mtype == "export_log":
            async with session.lock:
                log = write_event_log(session.state, session.config)
            return {"type": "log", "session": session.id, "log": log}
        return err("BadMessage", f"unknown message type {mtype!r}")

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("message must be a JSON object")
                except ValueError as exc:
                    await ws.send_text(json.dumps(err("BadMessage", str(exc)), sort_keys=True))
                    continue
                reply = await handle(ws, msg)
                if reply is not None:
                    await ws.send_text(json.dumps(reply, sort_keys=True))
        except WebSocketDisconnect:
            for session in sessions.values():
                if ws in session.subscribers:
                    session.subscribers.remove(ws)

    return app


app = create_app()
