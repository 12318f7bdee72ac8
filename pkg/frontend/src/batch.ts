/** Batched variants of the per-value calls: one process per call is fine
 * interactively, but corpus-sized work should ship all lines through a
 * single CLI invocation exactly like the native batch commands do.
 */

import { runCli, runCliJsonl } from "./runner.js";

export function tokenizeSelfiesStrings(texts: string[]): string[][] {
  if (texts.length === 0) {
    return [];
  }
  const rows = runCliJsonl<{ tokens: string[] }>(
    ["tokenize", "--modality", "selfies", "--emit", "tokens", "--strict"],
    texts.join("\n") + "\n",
  );
  return rows.map((row) => row.tokens);
}

export function tokenizeFastas(texts: string[]): string[][] {
  if (texts.length === 0) {
    return [];
  }
  const rows = runCliJsonl<{ tokens: string[] }>(
    ["tokenize", "--modality", "fasta", "--emit", "tokens", "--strict"],
    texts.join("\n") + "\n",
  );
  return rows.map((row) => row.tokens);
}

export function decodeSelfiesMany(texts: string[], canonical = true): string[] {
  if (texts.length === 0) {
    return [];
  }
  const args = ["selfies", "decode", "--strict"];
  if (!canonical) {
    args.push("--no-canonical");
  }
  const { stdout } = runCli(args, texts.join("\n") + "\n");
  const out = stdout.split("\n");
  if (out.length > 0 && out[out.length - 1] === "") {
    out.pop();
  }
  return out;
}
