// Session client over any WebSocket-shaped transport. Replies resolve in
// order (the server answers each request exactly once); deltas and errors
// fan out to callbacks. Interventions keep an optimistic marker until the
// server confirms.

import { Delta, Intervention, ServerError, Snapshot, messages } from "./protocol.js";

export interface Transport {
  send(data: string): void;
  set onmessage(fn: (data: string) => void);
}

type Reply = Record<string, unknown>;

export class SteeringClient {
  session: string | null = null;
  pendingInterventions: Intervention[] = [];
  onDelta: (d: Delta) => void = () => undefined;
  onError: (e: ServerError) => void = () => undefined;
  private waiters: ((r: Reply) => void)[] = [];

  constructor(private transport: Transport) {
    transport.onmessage = (data) => this.dispatch(JSON.parse(data) as Reply);
  }

  private dispatch(msg: Reply): void {
    if (msg.type === "delta") {
      this.onDelta(msg as unknown as Delta);
      return;
    }
    const waiter = this.waiters.shift();
    if (msg.type === "error") {
      this.onError(msg as unknown as ServerError);
    }
    if (waiter) waiter(msg);
  }

  private request(payload: string): Promise<Reply> {
    return new Promise((resolve) => {
      this.waiters.push(resolve);
      this.transport.send(payload);
    });
  }

  async create(scenario: unknown): Promise<string> {
    const reply = await this.request(messages.create(scenario));
    if (reply.type !== "created") throw new Error(String(reply.message ?? reply.type));
    this.session = reply.session as string;
    return this.session;
  }

  private needSession(): string {
    if (!this.session) throw new Error("no session");
    return this.session;
  }

  subscribe(): Promise<Reply> {
    return this.request(messages.subscribe(this.needSession()));
  }

  step(n: number): Promise<Reply> {
    return this.request(messages.step(this.needSession(), n));
  }

  start(pace: number): Promise<Reply> {
    return this.request(messages.start(this.needSession(), pace));
  }

  pause(): Promise<Reply> {
    return this.request(messages.pause(this.needSession()));
  }

  async snapshot(): Promise<Snapshot> {
    const reply = await this.request(messages.snapshot(this.needSession()));
    return reply.snapshot as Snapshot;
  }

  async exportLog(): Promise<string> {
    const reply = await this.request(messages.exportLog(this.needSession()));
    return reply.log as string;
  }

  async intervene(intervention: Intervention): Promise<Reply> {
    this.pendingInterventions.push(intervention);
    const reply = await this.request(messages.intervene(this.needSession(), intervention));
    this.pendingInterventions = this.pendingInterventions.filter((iv) => iv !== intervention);
    return reply;
  }
}
