import { readFileSync } from "fs";

import { BridgeOptions, ServeBridge } from "./bridge";
import { fnv1a64, FNV_OFFSET, formatChecksum } from "./checksum";
import { WrapperSpec } from "./env";
import { Pcg32 } from "./rng";
import { Action, sampleSpace, Space, zeroAction } from "./spaces";
import { Tensor, tensorBytes } from "./tensor";

/** Same JSON document the native CLI's --config accepts. */
export interface ChainRunConfig {
  env: { name: string } & Record<string, unknown>;
  wrappers?: WrapperSpec[];
  steps: number;
  seed?: number;
  policy?: "zeros" | "random";
}

export interface ChainRunReport {
  totalSteps: number;
  obsChecksum: string;
  rewardSum: number;
}

export function loadChainConfig(path: string): ChainRunConfig {
  return JSON.parse(readFileSync(path, "utf8")) as ChainRunConfig;
}

/**
 * Replay a benchmark config through the server and fold the trajectory
 * checksum on this side of the pipe.
 *
 * The loop mirrors the native runner exactly: the first reset is seeded,
 * later resets (after an episode ends) are not, actions come from the zeros
 * policy or this package's own PCG32 stream, and the checksum folds the
 * bytes of every emitted observation in emission order — per-agent in roster
 * order for parallel envs.  A matching obs_checksum therefore proves seed,
 * policy arithmetic, wrapper semantics, and transport all agree with the
 * native side, byte for byte.
 */
export async function runChainConfig(
  config: ChainRunConfig,
  options: BridgeOptions = {},
): Promise<ChainRunReport> {
  const steps = config.steps;
  if (!Number.isInteger(steps) || steps < 1) {
    throw new RangeError(`steps must be an integer >= 1, got ${steps}`);
  }
  const policy = config.policy ?? "zeros";
  if (policy !== "zeros" && policy !== "random") {
    throw new RangeError(`policy must be "zeros" or "random", got ${JSON.stringify(policy)}`);
  }
  const seed = config.seed ?? 0;

  const bridge = new ServeBridge(options);
  try {
    const init = await bridge.request({
      op: "init",
      env: config.env,
      wrappers: config.wrappers ?? [],
    });
    const run = init.parallel
      ? await runParallel(bridge, init, config, seed, policy)
      : await runSingle(bridge, init, config, seed, policy);
    return { totalSteps: steps, obsChecksum: formatChecksum(run.h), rewardSum: run.rewardSum };
  } finally {
    await bridge.close();
  }
}

interface LoopState {
  h: bigint;
  rewardSum: number;
}

async function runSingle(
  bridge: ServeBridge,
  init: Record<string, unknown>,
  config: ChainRunConfig,
  seed: number,
  policy: "zeros" | "random",
): Promise<LoopState> {
  const actionSpace = init.action_space as Space;
  const rng = new Pcg32(seed);
  let h = FNV_OFFSET;
  let rewardSum = 0;

  let reply = await bridge.request({ op: "reset", seed });
  h = fnv1a64(tensorBytes(reply.observation as Tensor), h);
  let done = false;
  for (let i = 0; i < config.steps; i++) {
    if (done) {
      reply = await bridge.request({ op: "reset", seed: null });
      h = fnv1a64(tensorBytes(reply.observation as Tensor), h);
    }
    const action: Action =
      policy === "zeros" ? zeroAction(actionSpace) : sampleSpace(actionSpace, rng);
    const res = await bridge.request({ op: "step", action });
    done = res.done as boolean;
    rewardSum += res.reward as number;
    h = fnv1a64(tensorBytes(res.observation as Tensor), h);
  }
  return { h, rewardSum };
}

async function runParallel(
  bridge: ServeBridge,
  init: Record<string, unknown>,
  config: ChainRunConfig,
  seed: number,
  policy: "zeros" | "random",
): Promise<LoopState> {
  const actSpaces = init.action_spaces as Record<string, Space>;
  const rng = new Pcg32(seed);
  let h = FNV_OFFSET;
  let rewardSum = 0;

  const foldAll = (observations: Record<string, Tensor>) => {
    for (const agent of Object.keys(observations)) {
      h = fnv1a64(tensorBytes(observations[agent]), h);
    }
  };

  let reply = await bridge.request({ op: "reset", seed });
  let agents = reply.agents as string[];
  foldAll(reply.observations as Record<string, Tensor>);
  for (let i = 0; i < config.steps; i++) {
    if (agents.length === 0) {
      reply = await bridge.request({ op: "reset", seed: null });
      agents = reply.agents as string[];
      foldAll(reply.observations as Record<string, Tensor>);
    }
    const actions: Record<string, Action> = {};
    for (const agent of agents) {
      actions[agent] =
        policy === "zeros" ? zeroAction(actSpaces[agent]) : sampleSpace(actSpaces[agent], rng);
    }
    const res = await bridge.request({ op: "step", actions });
    agents = res.agents as string[];
    const results = res.results as Record<string, { observation: Tensor; reward: number }>;
    for (const agent of Object.keys(results)) {
      rewardSum += results[agent].reward;
      h = fnv1a64(tensorBytes(results[agent].observation), h);
    }
  }
  return { h, rewardSum };
}
