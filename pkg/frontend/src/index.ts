/** Bindings over the biocorpus CLI.
 *
 * Zero business logic lives here: every call shells out to the toolkit and
 * marshals JSONL, so bound results are byte-identical to what the native
 * command line produces for the same inputs and seeds.
 */

import { BiocorpusError } from "./errors.js";
import { runCli, runCliJsonl, streamCliLines } from "./runner.js";

export { BiocorpusError } from "./errors.js";
export { cliCommand, runCli } from "./runner.js";
export { decodeSelfiesMany, tokenizeFastas, tokenizeSelfiesStrings } from "./batch.js";

/** Split concatenated bracket tokens, e.g. "[C][=C][Br]" -> 3 tokens. */
export function tokenizeSelfiesString(text: string): string[] {
  const rows = runCliJsonl<{ tokens: string[] }>(
    ["tokenize", "--modality", "selfies", "--emit", "tokens", "--strict"],
    text + "\n",
  );
  return rows[0]?.tokens ?? [];
}

/** One "<p>"-prefixed token per residue letter, e.g. "MKR" -> ["<p>M", ...]. */
export function tokenizeFasta(text: string): string[] {
  const rows = runCliJsonl<{ tokens: string[] }>(
    ["tokenize", "--modality", "fasta", "--emit", "tokens", "--strict"],
    text + "\n",
  );
  return rows[0]?.tokens ?? [];
}

/** Decode a token string to (canonical, by default) SMILES text. */
export function decodeSelfies(text: string, canonical = true): string {
  const args = ["selfies", "decode", "--strict"];
  if (!canonical) {
    args.push("--no-canonical");
  }
  const { stdout } = runCli(args, text + "\n");
  return stdout.replace(/\n$/, "");
}

/** Immutable view over a vocabulary file produced by `build-vocab`. */
export class BoundVocabulary {
  constructor(readonly path: string) {}

  /** Map token texts to IDs (unknown text -> <unk>; unknown molecular or
   * residue tokens raise with the native error name). */
  encodeIds(tokens: string[]): Int32Array {
    const rows = runCliJsonl<{ ids: number[] }>(
      ["encode-ids", "--vocab", this.path],
      JSON.stringify({ tokens }) + "\n",
    );
    return Int32Array.from(rows[0]?.ids ?? []);
  }

  /** Map IDs back to token texts; out-of-range IDs raise UnknownId. */
  decodeIds(ids: ArrayLike<number>): string[] {
    const rows = runCliJsonl<{ tokens: string[] }>(
      ["decode-ids", "--vocab", this.path],
      JSON.stringify({ ids: Array.from(ids) }) + "\n",
    );
    return rows[0]?.tokens ?? [];
  }
}

export interface BoundExample {
  inputIds: Int32Array;
  targetIds: Int32Array;
  task: string;
}

interface ExampleRow {
  input_ids: number[];
  target_ids: number[];
  task: string;
}

function toExample(row: ExampleRow): BoundExample {
  return {
    inputIds: Int32Array.from(row.input_ids),
    targetIds: Int32Array.from(row.target_ids),
    task: row.task,
  };
}

export interface CorruptionOptions {
  vocab: BoundVocabulary;
  seed: number;
  task?: string;
  recordId?: string;
  noiseDensity?: number;
  meanSpanLength?: number;
  maxInputLength?: number;
  protectDelimiters?: boolean;
}

/** Build one masked training example from a token-ID sequence.
 *
 * Matches the `corrupt` command exactly: the per-record seed derives from
 * (seed, task, recordId), recordId defaulting to the input line number 0.
 */
export function spanCorrupt(
  ids: ArrayLike<number>,
  options: CorruptionOptions,
): BoundExample {
  const args = [
    "corrupt",
    "--vocab", options.vocab.path,
    "--task", options.task ?? "text_t5",
    "--seed", String(options.seed),
    "--noise-density", String(options.noiseDensity ?? 0.15),
    "--mean-span", String(options.meanSpanLength ?? 3.0),
    "--max-len", String(options.maxInputLength ?? 512),
    "--strict",
  ];
  if (options.protectDelimiters) {
    args.push("--protect-delimiters");
  }
  const row: Record<string, unknown> = { ids: Array.from(ids) };
  if (options.recordId !== undefined) {
    row.id = options.recordId;
  }
  const rows = runCliJsonl<ExampleRow>(args, JSON.stringify(row) + "\n");
  if (rows.length !== 1) {
    throw new BiocorpusError("CliFailure", "corrupt returned no example");
  }
  return toExample(rows[0]);
}

export interface MixOptions {
  /** Task name -> path of a TrainingExample JSONL file. */
  streams: Record<string, string>;
  batchSize: number;
  seed: number;
  numBatches: number;
  weights?: Record<string, number>;
}

interface BatchRow {
  batch: number;
  examples: ExampleRow[];
}

/** Stream deterministic task-mixed batches. */
export async function* mixBatches(
  options: MixOptions,
): AsyncGenerator<BoundExample[], void, void> {
  const args = ["mix", "--batch-size", String(options.batchSize),
                "--seed", String(options.seed),
                "--batches", String(options.numBatches)];
  for (const [task, path] of Object.entries(options.streams)) {
    args.push("--stream", `${task}=${path}`);
  }
  if (options.weights) {
    const spec = Object.entries(options.weights)
      .map(([task, w]) => `${task}=${w}`)
      .join(",");
    args.push("--weights", spec);
  }
  for await (const line of streamCliLines(args)) {
    const row = JSON.parse(line) as BatchRow;
    yield row.examples.map(toExample);
  }
}

/** Flattened view of mixBatches: single-consumer iterator of
 * (inputIds, targetIds, task) triples in batch order. */
export async function* mixTasks(
  options: MixOptions,
): AsyncGenerator<BoundExample, void, void> {
  for await (const batch of mixBatches(options)) {
    yield* batch;
  }
}
