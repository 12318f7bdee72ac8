"""Downstream-task prompt rendering and label-probability normalization.

Template text lives in one JSON data file per task so the exact strings can
be audited by diff rather than read out of code.  Rendering concatenates the
task definition and instruction (single space by default) and substitutes
placeholders; sequence inputs are already wrapped in <bom>/<eom> by the
instruction text itself.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional, Sequence, Union

from .errors import DegenerateZero, MissingFiller, UnknownTask

OUTPUT_KINDS = ("yes_no", "text", "selfies")

# Names that may appear as <...> slots in template text; anything else in
# angle brackets (e.g. <bom>) is literal.
_PLACEHOLDER_NAMES = (
    "SELFIES", "FASTA", "Text Description", "target", "Subtask",
    "side effect", "Dataset", "label",
)
_SLOT_RE = re.compile("<(" + "|".join(re.escape(n) for n in _PLACEHOLDER_NAMES) + ")>")

FillerValue = Union[str, Sequence[str]]


@dataclass(frozen=True)
class PromptTemplate:
    task_id: str
    definition: str
    instruction: str
    output_kind: str
    output_template: str = ""
    placeholders: tuple[str, ...] = ()
    defaults: Mapping[str, str] = field(default_factory=dict)


def _data_text(name: str) -> str:
    return resources.files("biocorpus.data").joinpath(name).read_text("utf-8")


@lru_cache(maxsize=1)
def load_templates() -> dict[str, PromptTemplate]:
    templates = {}
    root = resources.files("biocorpus.data").joinpath("prompts")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".json"):
            continue
        obj = json.loads(entry.read_text("utf-8"))
        t = PromptTemplate(
            task_id=obj["task_id"],
            definition=obj["definition"],
            instruction=obj["instruction"],
            output_kind=obj["output_kind"],
            output_template=obj.get("output_template", ""),
            placeholders=tuple(obj.get("placeholders", ())),
            defaults=dict(obj.get("defaults", {})),
        )
        templates[t.task_id] = t
    return templates


def list_tasks() -> list[str]:
    return sorted(load_templates())


def get_template(task_id: str) -> PromptTemplate:
    try:
        return load_templates()[task_id]
    except KeyError:
        raise UnknownTask(f"no template for task {task_id!r}") from None


@lru_cache(maxsize=1)
def load_subtasks() -> dict[str, list[str]]:
    """Sub-task names (Tox21 targets, SIDER side effects, ClinTox subtasks)."""
    return json.loads(_data_text("subtasks.json"))


def _normalize_label(value: object) -> str:
    if isinstance(value, str):
        if value in ("Yes", "No"):
            return value
        raise MissingFiller(f"label must be 'Yes' or 'No', got {value!r}")
    return "Yes" if value else "No"


def _fill(text: str, fillers: dict[str, object], *, required: bool,
          task_id: str) -> Optional[str]:
    """Substitute slots; list values are consumed left to right."""
    cursors: dict[str, int] = {}
    missing: list[str] = []

    def repl(match: re.Match) -> str:
        name = match.group(1)
        if name not in fillers:
            missing.append(name)
            return ""
        value = fillers[name]
        if name == "label":
            return _normalize_label(value)
        if isinstance(value, (list, tuple)):
            k = cursors.get(name, 0)
            if k >= len(value):
                missing.append(name)
                return ""
            cursors[name] = k + 1
            return str(value[k])
        return str(value)

    out = _SLOT_RE.sub(repl, text)
    if missing:
        if required:
            raise MissingFiller(f"task {task_id!r} missing fillers: {sorted(set(missing))}")
        return None
    return out


def render_prompt(
    task_id: str,
    fillers: Optional[Mapping[str, FillerValue]] = None,
    joiner: str = " ",
) -> tuple[str, Optional[str]]:
    """Render (input text, expected output text or None) for a task.

    All definition/instruction placeholders must be covered by the fillers
    (template defaults apply first).  The expected output is produced when
    its fillers are present: the "label" filler for Yes/No tasks, otherwise
    the output template's own placeholders.
    """
    template = get_template(task_id)
    merged: dict[str, object] = dict(template.defaults)
    if fillers:
        merged.update(fillers)
    body = template.definition + joiner + template.instruction
    rendered = _fill(body, merged, required=True, task_id=task_id)
    expected = None
    if template.output_template:
        expected = _fill(template.output_template, merged, required=False,
                         task_id=task_id)
    return rendered, expected


@dataclass(frozen=True)
class LabelScores:
    p_pos: float
    p_neg: float

    @property
    def normalized(self) -> tuple[float, float]:
        total = self.p_pos + self.p_neg
        return (self.p_pos / total, self.p_neg / total)


def normalize_label_probabilities(p_pos: float, p_neg: float) -> LabelScores:
    """Renormalize the two label probabilities to sum to one.

    Order-preserving: the argmax of the pair never changes.
    """
    if p_pos < 0 or p_neg < 0:
        raise ValueError("probabilities must be non-negative")
    if p_pos + p_neg <= 0:
        raise DegenerateZero("both label probabilities are zero")
    return LabelScores(p_pos, p_neg)
