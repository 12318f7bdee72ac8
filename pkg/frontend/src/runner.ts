import { spawn, spawnSync } from "node:child_process";
import { createInterface } from "node:readline";

import { BiocorpusError, errorFromStderr } from "./errors.js";

/** How to start the CLI. Override via BIOCORPUS_CLI, e.g.
 *  BIOCORPUS_CLI="python3 -m biocorpus" or a path to the installed script.
 */
export function cliCommand(): string[] {
  const env = process.env.BIOCORPUS_CLI;
  if (env && env.trim().length > 0) {
    return env.trim().split(/\s+/);
  }
  return ["python3", "-m", "biocorpus"];
}

export interface RunResult {
  stdout: string;
  stderr: string;
}

/** Run one CLI invocation to completion, feeding stdin and raising the
 * CLI's own error taxonomy on failure. */
export function runCli(args: string[], stdin = ""): RunResult {
  const [cmd, ...base] = cliCommand();
  const proc = spawnSync(cmd, [...base, ...args], {
    input: stdin,
    encoding: "utf-8",
    maxBuffer: 512 * 1024 * 1024,
  });
  if (proc.error) {
    throw new BiocorpusError("SpawnFailure", String(proc.error));
  }
  if (proc.status !== 0) {
    throw errorFromStderr(proc.stderr ?? "", `exit code ${proc.status}`);
  }
  return { stdout: proc.stdout ?? "", stderr: proc.stderr ?? "" };
}

/** Run a CLI invocation and yield stdout lines as they arrive; used for
 * streaming surfaces like the batch mixer. */
export async function* streamCliLines(
  args: string[],
): AsyncGenerator<string, void, void> {
  const [cmd, ...base] = cliCommand();
  const proc = spawn(cmd, [...base, ...args], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  let stderr = "";
  proc.stderr.setEncoding("utf-8");
  proc.stderr.on("data", (chunk: string) => {
    stderr += chunk;
  });
  const lines = createInterface({ input: proc.stdout, crlfDelay: Infinity });
  try {
    for await (const line of lines) {
      if (line.length > 0) {
        yield line;
      }
    }
  } finally {
    lines.close();
  }
  const status: number | null = await new Promise((resolve) => {
    proc.on("close", resolve);
  });
  if (status !== 0) {
    throw errorFromStderr(stderr, `exit code ${status}`);
  }
}

/** One JSON object per non-empty stdout line. */
export function runCliJsonl<T>(args: string[], stdin = ""): T[] {
  const { stdout } = runCli(args, stdin);
  return stdout
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as T);
}
