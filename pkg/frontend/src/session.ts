import { ApiClient, SequenceGate } from "./api.js";
import type { ScenarioJson, SessionStateJson } from "./types.js";

export interface SessionConsoleOptions {
  pollMs?: number;
  setIntervalImpl?: typeof setInterval;
  clearIntervalImpl?: typeof clearInterval;
}

/** Descent-session console: owns one server-side replan session, polls its
 * state at 1 Hz and forwards wind injections. The altitude-vs-distance chart
 * data is the plan profile returned by the server, untouched. */
export class SessionConsole {
  sessionId: string | null = null;
  state: SessionStateJson | null = null;

  private readonly gate = new SequenceGate();
  private readonly listeners: Array<() => void> = [];
  private readonly pollMs: number;
  private readonly setIntervalImpl: typeof setInterval;
  private readonly clearIntervalImpl: typeof clearInterval;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly api: ApiClient,
    opts: SessionConsoleOptions = {},
  ) {
    this.pollMs = opts.pollMs ?? 1000;
    this.setIntervalImpl = opts.setIntervalImpl ?? setInterval;
    this.clearIntervalImpl = opts.clearIntervalImpl ?? clearInterval;
  }

  subscribe(fn: () => void): () => void {
    this.listeners.push(fn);
    return () => {
      const i = this.listeners.indexOf(fn);
      if (i >= 0) this.listeners.splice(i, 1);
    };
  }

  private apply(seq: number, state: SessionStateJson): void {
    if (!this.gate.accept(seq)) return;
    this.state = state;
    for (const fn of this.listeners) fn();
  }

  async start(scenario: ScenarioJson): Promise<void> {
    const seq = this.gate.next();
    const created = await this.api.createSession(scenario);
    this.sessionId = created.session_id;
    this.apply(seq, created.state);
  }

  async injectWind(wNorth: number, wEast: number): Promise<void> {
    if (!this.sessionId) return;
    const seq = this.gate.next();
    this.apply(seq, await this.api.sessionWind(this.sessionId, wNorth, wEast));
  }

  async advance(dropM?: number): Promise<void> {
    if (!this.sessionId) return;
    const seq = this.gate.next();
    this.apply(seq, await this.api.sessionAdvance(this.sessionId, dropM));
  }

  async poll(): Promise<void> {
    if (!this.sessionId) return;
    const seq = this.gate.next();
    this.apply(seq, await this.api.sessionState(this.sessionId));
  }

  startPolling(): void {
    if (this.timer !== null) return;
    this.timer = this.setIntervalImpl(() => {
      void this.poll().catch(() => undefined);
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      this.clearIntervalImpl(this.timer);
      this.timer = null;
    }
  }

  /** Chart series for the current plan, verbatim from the service. */
  profileSeries(): Array<{ sM: number; altitudeM: number }> {
    if (!this.state || !this.state.plan) return [];
    return this.state.plan.profile.map((p) => ({
      sM: p.s_m,
      altitudeM: p.altitude_m,
    }));
  }
}
