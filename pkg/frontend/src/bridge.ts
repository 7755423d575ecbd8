import { ChildProcessWithoutNullStreams, spawn } from "child_process";
import * as readline from "readline";

import { parseWireLine, stringifyWireLine } from "./wire";

/** A failure reply from the server, carrying its error class name. */
export class ServeError extends Error {
  constructor(
    /** Server-side error class, e.g. "ValidationError" or "ResetNeeded". */
    readonly errorName: string,
    message: string,
  ) {
    super(`${errorName}: ${message}`);
    this.name = "ServeError";
  }
}

/** Transport-level failure: the server process died or the pipe closed. */
export class BridgeError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BridgeError";
  }
}

export interface BridgeOptions {
  /** Interpreter for the server (default: $ENVWRAPS_PYTHON, else "python3"). */
  python?: string;
  /** Extra interpreter arguments inserted before `-m`. */
  pythonArgs?: string[];
  cwd?: string;
}

export type CallbackHandler = (
  request: Record<string, unknown>,
) => Promise<Record<string, unknown>>;

/**
 * One server process, driven in lockstep: write a request line, read reply
 * lines.  Callback lines (`{"cb": ...}`) arriving before the reply are routed
 * to the registered host handler and answered in place, which is how a
 * host-side env gets stepped while the chain lives in the server.
 */
export class ServeBridge {
  private readonly child: ChildProcessWithoutNullStreams;
  private readonly buffered: string[] = [];
  private readonly waiters: Array<(line: string | null) => void> = [];
  private stderrText = "";
  private spawnError: Error | null = null;
  private eof = false;
  private busy = false;
  private closing = false;
  private onCallback: CallbackHandler | null = null;

  constructor(options: BridgeOptions = {}) {
    const python = options.python ?? process.env.ENVWRAPS_PYTHON ?? "python3";
    const args = [...(options.pythonArgs ?? []), "-m", "envwraps.cli", "serve"];
    this.child = spawn(python, args, {
      cwd: options.cwd,
      stdio: ["pipe", "pipe", "pipe"],
    });
    const rl = readline.createInterface({ input: this.child.stdout });
    rl.on("line", (line) => {
      const waiter = this.waiters.shift();
      if (waiter) waiter(line);
      else this.buffered.push(line);
    });
    rl.on("close", () => {
      this.eof = true;
      for (const waiter of this.waiters.splice(0)) waiter(null);
    });
    this.child.stderr.setEncoding("utf8");
    this.child.stderr.on("data", (chunk: string) => {
      this.stderrText += chunk;
    });
    this.child.on("error", (err) => {
      this.spawnError = err;
      this.eof = true;
      for (const waiter of this.waiters.splice(0)) waiter(null);
    });
  }

  /** Route `{"cb": ...}` requests to `handler`; required for host envs. */
  setCallbackHandler(handler: CallbackHandler): void {
    this.onCallback = handler;
  }

  get stderr(): string {
    return this.stderrText;
  }

  private nextLine(): Promise<string | null> {
    const line = this.buffered.shift();
    if (line !== undefined) return Promise.resolve(line);
    if (this.eof) return Promise.resolve(null);
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  private write(doc: unknown): void {
    if (!this.child.stdin.writable) {
      throw new BridgeError(this.deadReason());
    }
    this.child.stdin.write(stringifyWireLine(doc) + "\n");
  }

  private deadReason(): string {
    if (this.spawnError) return `failed to start server: ${this.spawnError.message}`;
    const err = this.stderrText.trim();
    return err ? `server closed the pipe; stderr: ${err}` : "server closed the pipe";
  }

  /**
   * Send one request and return its `{"ok": true}` reply.  A `{"ok": false}`
   * reply raises ServeError; host callbacks encountered along the way are
   * dispatched before the reply is returned.
   */
  async request(doc: Record<string, unknown>): Promise<Record<string, unknown>> {
    if (this.busy) {
      throw new BridgeError("bridge is mid-request; the protocol is strictly lockstep");
    }
    this.busy = true;
    try {
      this.write(doc);
      let hostError: unknown = null;
      for (;;) {
        const line = await this.nextLine();
        if (line === null) throw new BridgeError(this.deadReason());
        const reply = parseWireLine(line) as Record<string, unknown>;
        if (reply !== null && typeof reply === "object" && "cb" in reply) {
          if (!this.onCallback) {
            throw new BridgeError(`no handler for callback ${JSON.stringify(reply.cb)}`);
          }
          let answer: Record<string, unknown>;
          try {
            answer = await this.onCallback(reply);
          } catch (err) {
            // Keep the lockstep alive with an empty doc the server will
            // reject, then surface the host's own error over its reply.
            hostError = err;
            answer = {};
          }
          this.write(answer);
          continue;
        }
        if (hostError !== null) throw hostError;
        if ((reply as { ok?: unknown }).ok === false) {
          throw new ServeError(String(reply.error), String(reply.message));
        }
        return reply;
      }
    } finally {
      this.busy = false;
    }
  }

  /** Ask the server to exit and wait for the process to go away. */
  async close(): Promise<void> {
    if (this.closing) return;
    this.closing = true;
    try {
      await this.request({ op: "close" });
    } catch {
      this.child.kill();
    }
    if (this.child.stdin.writable) this.child.stdin.end();
    await this.waitExit();
  }

  private waitExit(): Promise<void> {
    if (this.child.exitCode !== null || this.child.signalCode !== null) {
      return Promise.resolve();
    }
    return new Promise((resolve) => this.child.once("close", () => resolve()));
  }
}
