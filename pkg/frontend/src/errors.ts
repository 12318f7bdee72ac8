/** Error raised when the underlying CLI reports a data failure.
 *
 * `code` carries the toolkit's error name verbatim (e.g. "UnknownToken",
 * "UnknownNonTextToken", "IoFailure"), so callers can branch on the same
 * taxonomy the native side uses.
 */
export class BiocorpusError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.name = "BiocorpusError";
    this.code = code;
  }
}

const ERROR_LINE = /^error: ([A-Za-z]+): (.*)$/m;

/** Parse the single-line machine-readable error the CLI prints on exit 1. */
export function errorFromStderr(stderr: string, fallback: string): BiocorpusError {
  const match = ERROR_LINE.exec(stderr);
  if (match) {
    return new BiocorpusError(match[1], match[2]);
  }
  return new BiocorpusError("CliFailure", fallback || stderr.trim());
}
