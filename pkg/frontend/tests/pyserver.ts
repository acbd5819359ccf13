// Spawns the real steering server for end-to-end tests.

import { ChildProcess, spawn } from "node:child_process";
import http from "node:http";

export interface RunningServer {
  port: number;
  proc: ChildProcess;
  stop(): void;
}

function healthcheck(port: number): Promise<boolean> {
  return new Promise((resolve) => {
    const req = http.get({ host: "127.0.0.1", port, path: "/healthz", timeout: 1000 },
      (res) => {
        res.resume();
        resolve(res.statusCode === 200);
      });
    req.on("error", () => resolve(false));
    req.on("timeout", () => {
      req.destroy();
      resolve(false);
    });
  });
}

export async function startServer(): Promise<RunningServer> {
  const port = 8600 + Math.floor(Math.random() * 400);
  const proc = spawn("python3", [
    "-m", "uvicorn", "physarum_machine.server:app",
    "--host", "127.0.0.1", "--port", String(port), "--log-level", "warning",
  ], { stdio: ["ignore", "pipe", "pipe"] });
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    if (await healthcheck(port)) {
      return { port, proc, stop: () => proc.kill("SIGTERM") };
    }
    if (proc.exitCode !== null) break;
    await new Promise((r) => setTimeout(r, 300));
  }
  proc.kill("SIGTERM");
  throw new Error("steering server did not come up");
}
