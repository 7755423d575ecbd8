export { BYTE_WIDTH, castValue, DType, DTYPES, isDType, isFloatDType } from "./dtypes";
export { isTensor, numel, Tensor, tensor, tensorBytes, zeros } from "./tensor";
export { fnv1a64, FNV_OFFSET, FNV_PRIME, formatChecksum } from "./checksum";
export { Pcg32 } from "./rng";
export { Action, BoxSpace, DiscreteSpace, sampleSpace, Space, zeroAction } from "./spaces";
export { parseWireLine, stringifyWireLine } from "./wire";
export {
  BridgeError,
  BridgeOptions,
  CallbackHandler,
  ServeBridge,
  ServeError,
} from "./bridge";
export {
  EnvClient,
  HostEnv,
  HostStepOutcome,
  ParallelEnvClient,
  StepOutcome,
  WrapperSpec,
  wrapHostEnv,
  wrapReferenceEnv,
} from "./env";
export { ChainRunConfig, ChainRunReport, loadChainConfig, runChainConfig } from "./runner";
