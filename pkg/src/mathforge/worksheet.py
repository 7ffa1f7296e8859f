"""Multi-variant worksheet assembly and HTML/LaTeX rendering.

A template names an ordered list of task kinds; building draws every variant
from its own deterministic stream (``seed + variant_index``), so any single
variant can be regenerated in isolation.  The answer key is a flat list with
a fixed stride: entry ``v·stride + i`` is answer ``i`` of variant ``v``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from . import latexgen
from .taskgen import (
    ANSWER_COUNTS,
    TASK_KINDS,
    Answer,
    GeneratorParams,
    Matrix,
    Message,
    NonGenerable,
    Rng,
    Scalar,
    TaskInstance,
    Vector,
    generate_task,
)

MAX_VARIANTS = 500

_MASK64 = (1 << 64) - 1

CHROME = {
    "uk": {
        "variant": "Варіант",
        "answers_header": "ВІДПОВІДІ",
    },
}

# per-kind labels prefixed to each answer in the key ("" = bare)
ANSWER_LABELS = {
    "product": ("<b>AB</b>=", "<b>BA</b>="),
}


class TemplateError(Exception):
    pass


class ParseError(TemplateError):
    pass


class UnknownTaskKind(TemplateError):
    pass


class BadParams(TemplateError):
    pass


class UnknownTemplate(TemplateError):
    pass


@dataclass(frozen=True)
class WorksheetTemplate:
    id: str
    title: str
    task_kinds: tuple[str, ...]
    params: GeneratorParams = GeneratorParams()
    lang: str = "uk"

    def __post_init__(self):
        if not self.task_kinds:
            raise BadParams("template needs at least one task kind")

    @property
    def answer_stride(self) -> int:
        return sum(ANSWER_COUNTS[k] for k in self.task_kinds)


@dataclass(frozen=True)
class WorksheetRequest:
    template_id: str
    num_variants: int
    seed: int = 0
    show_answers: bool = False

    def __post_init__(self):
        if not (1 <= self.num_variants <= MAX_VARIANTS):
            raise BadParams(f"num_variants must be in [1, {MAX_VARIANTS}]")


@dataclass(frozen=True)
class WorksheetDoc:
    title: str
    variants: tuple[tuple[int, tuple[TaskInstance, ...]], ...]
    answer_key: tuple[Answer, ...]
    stride: int
    lang: str = "uk"


def load_template(text) -> WorksheetTemplate:
    """Parse and validate a JSON template document."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"template is not valid JSON: {err}") from err
    if not isinstance(obj, dict):
        raise ParseError("template must be a JSON object")
    try:
        template_id = obj["id"]
        title = obj["title"]
        tasks = obj["tasks"]
    except KeyError as err:
        raise ParseError(f"template misses required field {err}") from err
    if not isinstance(tasks, list) or not tasks:
        raise ParseError("tasks must be a non-empty list")
    for kind in tasks:
        if kind not in TASK_KINDS:
            raise UnknownTaskKind(f"unknown task kind {kind!r}")
    params_obj = obj.get("params", {})
    if not isinstance(params_obj, dict):
        raise BadParams("params must be an object")
    try:
        params = GeneratorParams(**params_obj)
    except (TypeError, ValueError) as err:
        raise BadParams(f"bad generator params: {err}") from err
    return WorksheetTemplate(
        id=str(template_id),
        title=str(title),
        task_kinds=tuple(tasks),
        params=params,
        lang=str(obj.get("lang", "uk")),
    )


def builtin_templates() -> dict[str, WorksheetTemplate]:
    """Templates bundled as package data, keyed by id."""
    templates = {}
    root = resources.files("mathforge").joinpath("data/templates")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            template = load_template(entry.read_text(encoding="utf-8"))
            templates[template.id] = template
    return templates


def get_template(template_id: str) -> WorksheetTemplate:
    try:
        return builtin_templates()[template_id]
    except KeyError:
        raise UnknownTemplate(f"no template named {template_id!r}")


def build_worksheet(t: WorksheetTemplate, r: WorksheetRequest) -> WorksheetDoc:
    variants = []
    answer_key: list[Answer] = []
    for index in range(r.num_variants):
        rng = Rng((r.seed + index) & _MASK64)
        tasks = []
        for kind in t.task_kinds:
            try:
                task = generate_task(kind, rng, t.params, t.lang)
            except NonGenerable as err:
                raise NonGenerable(str(err), variant=index + 1, task=kind) from err
            tasks.append(task)
            answer_key.extend(task.answers)
        variants.append((index + 1, tuple(tasks)))
    return WorksheetDoc(
        title=t.title,
        variants=tuple(variants),
        answer_key=tuple(answer_key),
        stride=t.answer_stride,
        lang=t.lang,
    )


def _answer_fragments(task: TaskInstance) -> str:
    labels = ANSWER_LABELS.get(task.kind, ("",) * len(task.answers))
    parts = []
    for label, answer in zip(labels, task.answers):
        parts.append(label + latexgen.render_answer(answer).wrapped())
    return ", ".join(parts)


def _variant_answers_line(number: int, tasks: tuple[TaskInstance, ...], lang: str) -> str:
    chrome = CHROME[lang]
    body = "; ".join(
        f"{position}. {_answer_fragments(task)}"
        for position, task in enumerate(tasks, start=1)
    )
    return f"<p><b>{chrome['variant']} {number}</b>: {body}</p>"


def render_html(doc: WorksheetDoc, show_answers: bool, full_page: bool = False) -> str:
    """Body fragment (or a full page) with tasks first, then the gated key."""
    chrome = CHROME[doc.lang]
    lines = []
    for number, tasks in doc.variants:
        lines.append(
            f'<center><font size="+2">{chrome["variant"]} {number}</font></center>'
        )
        for position, task in enumerate(tasks, start=1):
            lines.append(f"<p>{position}. {task.statement}</p>")
    if show_answers:
        lines.append("<hr>")
        lines.append(f"<p><b>{chrome['answers_header']}</b></p>")
        for number, tasks in doc.variants:
            lines.append(_variant_answers_line(number, tasks, doc.lang))
    body = "\n".join(lines)
    if not full_page:
        return body
    return (
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        f"<title>{doc.title}</title>\n"
        "<!-- math-renderer-hook -->\n"
        "</head>\n<body>\n" + body + "\n</body>\n</html>\n"
    )


_BOLD_OPEN = re.compile(r"<b>")
_BOLD_CLOSE = re.compile(r"</b>")
_TAG = re.compile(r"</?[a-zA-Z][^>]*>")


def _rich_text_to_latex(text: str) -> str:
    text = _BOLD_OPEN.sub(r"\\textbf{", text)
    text = _BOLD_CLOSE.sub("}", text)
    return _TAG.sub("", text)


LATEX_PREAMBLE = """\\documentclass[12pt]{article}
\\usepackage[utf8]{inputenc}
\\usepackage[T2A]{fontenc}
\\usepackage[ukrainian]{babel}
\\usepackage{amsmath}
\\begin{document}
"""


def render_latex(doc: WorksheetDoc, show_answers: bool) -> str:
    """Standalone article document with the same content order as the HTML."""
    chrome = CHROME[doc.lang]
    lines = [LATEX_PREAMBLE]
    for number, tasks in doc.variants:
        lines.append(
            "\\begin{center}{\\Large " + f"{chrome['variant']} {number}" + "}\\end{center}"
        )
        lines.append("\\begin{enumerate}")
        for task in tasks:
            lines.append("\\item " + _rich_text_to_latex(task.statement))
        lines.append("\\end{enumerate}")
    if show_answers:
        lines.append("\\par\\noindent\\hrulefill\\par")
        lines.append("\\textbf{" + chrome["answers_header"] + "}\\par")
        for number, tasks in doc.variants:
            lines.append(
                _rich_text_to_latex(_variant_answers_line(number, tasks, doc.lang))
                + "\\par"
            )
    lines.append("\\end{document}")
    return "\n".join(lines) + "\n"


def answer_to_obj(answer: Answer) -> dict:
    """JSON-ready shape for one exact answer (auto-grading provenance)."""
    if isinstance(answer, Scalar):
        return {"type": "scalar", "value": str(answer.value)}
    if isinstance(answer, Matrix):
        m = answer.value
        return {
            "type": "matrix",
            "rows": m.rows,
            "cols": m.cols,
            "entries": [str(e) for e in m.entries],
        }
    if isinstance(answer, Vector):
        return {"type": "vector", "values": [str(v) for v in answer.values]}
    if isinstance(answer, Message):
        return {"type": "message", "text": answer.text}
    raise TypeError(f"not an Answer: {answer!r}")


def answer_key_obj(doc: WorksheetDoc) -> list[dict]:
    """Flat structured key; preserves the v·stride + i layout."""
    key = []
    position = 0
    for number, tasks in doc.variants:
        for task_index, task in enumerate(tasks, start=1):
            for answer in task.answers:
                key.append(
                    {
                        "variant": number,
                        "index": position,
                        "task": task_index,
                        "kind": task.kind,
                        "answer": answer_to_obj(answer),
                    }
                )
                position += 1
    return key
