"""Exception types shared across the toolkit.

Every data-level failure raises a subclass of :class:`BiocorpusError` so the
CLI can map them onto exit code 1 with a single machine-parseable line.
"""


class BiocorpusError(Exception):
    """Base class for all toolkit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- molecular graph / SMILES ---

class SmilesParseError(BiocorpusError):
    """SMILES text could not be parsed."""


class EmptyInput(BiocorpusError):
    """An operation received empty input where content is required."""


class UnbalancedDelimiter(SmilesParseError):
    """Unclosed branch, bracket, or ring-closure index."""


class UnknownElement(SmilesParseError):
    """Atom symbol is not a recognized element."""


class SmilesSyntaxError(SmilesParseError):
    """Malformed SMILES outside the more specific categories."""


class KekulizationError(SmilesParseError):
    """Aromatic ring could not be assigned alternating bond orders."""


class InvalidGraph(BiocorpusError):
    """Graph fails valence checking or is otherwise unusable."""


# --- molecular string codec ---

class UnknownToken(BiocorpusError):
    """Token text is not part of the codec alphabet."""


class UnsupportedFeature(BiocorpusError):
    """Input uses a feature outside the supported subset."""


# --- tokenization / vocabulary ---

class UnbalancedBracket(BiocorpusError):
    """Bracket token stream has a dangling '[' or ']'."""


class StrayCharacter(BiocorpusError):
    """Content found outside bracket tokens."""


class InvalidResidue(BiocorpusError):
    """Letter outside the accepted amino-acid residue set."""


class MissingTextVocab(BiocorpusError):
    """Vocabulary has no usable text modality."""


class MalformedVocabFile(BiocorpusError):
    """Vocabulary file could not be read."""


class DuplicateToken(BiocorpusError):
    """The same token text appears twice across vocabulary blocks."""


class UnknownNonTextToken(BiocorpusError):
    """A SELFIES or amino-acid token is missing from the vocabulary."""


class UnknownId(BiocorpusError):
    """Token ID outside the vocabulary range."""


# --- corpus pipeline ---

class TooManySpans(BiocorpusError):
    """Corruption would need more sentinels than the vocabulary holds."""


class InvalidSpan(BiocorpusError):
    """Entity annotation span is inconsistent with its document."""


class EmptyRecord(BiocorpusError):
    """Pair record has no sequence or no text field."""


class EmptyStream(BiocorpusError):
    """A task stream yielded no examples."""


class BatchTooSmall(BiocorpusError):
    """Batch size below the number of mixed tasks."""


class SchemaViolation(BiocorpusError):
    """Record does not match the expected schema (strict mode)."""


class IoFailure(BiocorpusError):
    """Underlying file operation failed."""


# --- prompting ---

class UnknownTask(BiocorpusError):
    """Task id is not one of the bundled downstream tasks."""


class MissingFiller(BiocorpusError):
    """A template placeholder has no filler."""


class DegenerateZero(BiocorpusError):
    """Both label probabilities are zero."""


# --- metrics ---

class LengthMismatch(BiocorpusError):
    """Prediction and reference lists differ in length."""


class EmptyCorpus(BiocorpusError):
    """Metric computed over an empty list."""


class WidthMismatch(BiocorpusError):
    """Fingerprints with different width or radius compared."""
