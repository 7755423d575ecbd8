import { BridgeError, BridgeOptions, ServeBridge } from "./bridge";
import { Action, Space } from "./spaces";
import { Tensor } from "./tensor";

export interface StepOutcome {
  observation: Tensor;
  reward: number;
  done: boolean;
  info: Record<string, string>;
}

/** One wrapper in a chain: its registry name plus its parameters, inline. */
export type WrapperSpec = { name: string } & Record<string, unknown>;

/**
 * An env living in this process, to be wrapped by a server-side chain.  The
 * server calls back into `reset`/`step` whenever the chain needs the base
 * env; every value is copied and validated on the server side, so nothing
 * handed over here is ever mutated in place.
 */
export interface HostEnv {
  observationSpace: Space;
  actionSpace: Space;
  reset(seed: number | null): Tensor | Promise<Tensor>;
  step(action: Action): HostStepOutcome | Promise<HostStepOutcome>;
}

export interface HostStepOutcome {
  observation: Tensor;
  reward: number;
  done: boolean;
  /** String-to-string only; omitted means empty. */
  info?: Record<string, string>;
}

/** Single-agent env client: reset/step/close over one server process. */
export class EnvClient {
  constructor(
    private readonly bridge: ServeBridge,
    readonly observationSpace: Space,
    readonly actionSpace: Space,
  ) {}

  async reset(seed: number | null = null): Promise<Tensor> {
    const reply = await this.bridge.request({ op: "reset", seed });
    return reply.observation as Tensor;
  }

  async step(action: Action): Promise<StepOutcome> {
    const reply = await this.bridge.request({ op: "step", action });
    return {
      observation: reply.observation as Tensor,
      reward: reply.reward as number,
      done: reply.done as boolean,
      info: reply.info as Record<string, string>,
    };
  }

  async close(): Promise<void> {
    await this.bridge.close();
  }
}

/**
 * Parallel multi-agent env client.  `agents` is the live roster and shrinks
 * as agents finish; reset restores it.  Step takes exactly one action per
 * live agent and returns per-agent outcomes in roster order.
 */
export class ParallelEnvClient {
  agents: string[];

  constructor(
    private readonly bridge: ServeBridge,
    agents: string[],
    private readonly obsSpaces: Record<string, Space>,
    private readonly actSpaces: Record<string, Space>,
  ) {
    this.agents = agents;
  }

  observationSpace(agent: string): Space {
    return this.spaceOf(this.obsSpaces, agent);
  }

  actionSpace(agent: string): Space {
    return this.spaceOf(this.actSpaces, agent);
  }

  private spaceOf(table: Record<string, Space>, agent: string): Space {
    const space = table[agent];
    if (space === undefined) throw new RangeError(`unknown agent '${agent}'`);
    return space;
  }

  async reset(seed: number | null = null): Promise<Record<string, Tensor>> {
    const reply = await this.bridge.request({ op: "reset", seed });
    this.agents = reply.agents as string[];
    return reply.observations as Record<string, Tensor>;
  }

  async step(actions: Record<string, Action>): Promise<Record<string, StepOutcome>> {
    const reply = await this.bridge.request({ op: "step", actions });
    this.agents = reply.agents as string[];
    return reply.results as Record<string, StepOutcome>;
  }

  async close(): Promise<void> {
    await this.bridge.close();
  }
}

interface SingleInitReply {
  observation_space: Space;
  action_space: Space;
}

interface ParallelInitReply {
  agents: string[];
  observation_spaces: Record<string, Space>;
  action_spaces: Record<string, Space>;
}

/**
 * Start a server, build `wrappers` over the named reference env, and hand
 * back a client for it — parallel envs yield a ParallelEnvClient, everything
 * else an EnvClient (narrow with `instanceof`).  Unknown names and bad
 * wrapper parameters fail here with the server's own validation message.
 */
export async function wrapReferenceEnv(
  name: string,
  params: Record<string, unknown> = {},
  wrappers: WrapperSpec[] = [],
  options: BridgeOptions = {},
): Promise<EnvClient | ParallelEnvClient> {
  const bridge = new ServeBridge(options);
  let reply: Record<string, unknown>;
  try {
    reply = await bridge.request({
      op: "init",
      env: { name, ...params },
      wrappers,
    });
  } catch (err) {
    await bridge.close();
    throw err;
  }
  if (reply.parallel) {
    const init = reply as unknown as ParallelInitReply;
    return new ParallelEnvClient(
      bridge,
      init.agents,
      init.observation_spaces,
      init.action_spaces,
    );
  }
  const init = reply as unknown as SingleInitReply;
  return new EnvClient(bridge, init.observation_space, init.action_space);
}

/**
 * Wrap an env living in this process: the chain runs server-side but every
 * reset/step bottoms out in `host`'s own methods.  Malformed host values are
 * rejected at the boundary with an error naming the offending field.
 */
export async function wrapHostEnv(
  host: HostEnv,
  wrappers: WrapperSpec[] = [],
  options: BridgeOptions = {},
): Promise<EnvClient> {
  const bridge = new ServeBridge(options);
  bridge.setCallbackHandler(async (request) => {
    if (request.cb === "reset") {
      const seed = (request.seed ?? null) as number | null;
      return { observation: await host.reset(seed) };
    }
    if (request.cb === "step") {
      const outcome = await host.step(request.action as Action);
      return {
        observation: outcome.observation,
        reward: outcome.reward,
        done: outcome.done,
        info: outcome.info ?? {},
      };
    }
    throw new BridgeError(`unknown callback ${JSON.stringify(request.cb)}`);
  });
  let reply: Record<string, unknown>;
  try {
    reply = await bridge.request({
      op: "init",
      host: {
        observation_space: host.observationSpace,
        action_space: host.actionSpace,
      },
      wrappers,
    });
  } catch (err) {
    await bridge.close();
    throw err;
  }
  const init = reply as unknown as SingleInitReply;
  return new EnvClient(bridge, init.observation_space, init.action_space);
}
