/* tslint:disable */
/* eslint-disable */

/**
 * Truncated union bound of the product of two catalog codes over an Eb/N0 range.
 */
export function tub_curve(code1: string, code2: string, start: number, stop: number, step: number): string;

/**
 * One (256,49) codeword sent over AWGN and decoded, with the per-half-iteration error pattern.
 */
export function turbo_trace(ebn0_db: number, seed: number, list_size: number, max_iters: number): string;

/**
 * Weight enumerator of a catalog code.
 */
export function weight_enumerator(name: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly tub_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly turbo_trace: (a: number, b: number, c: number, d: number) => [number, number];
    readonly weight_enumerator: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
