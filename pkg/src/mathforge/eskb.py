"""Knowledge-base model, text format, validation and table compilation.

The interchange format is line-oriented UTF-8 text (UTF-16 with BOM is also
accepted on input):

    REM <free comment text>
    TITLE "<display title>"
    MINCF <integer 1..100>
    TRANSLATE <KEY> = "<text>"
    ATTRIBUTE <name> TYPE <prompt type> PROMPT "<question>"
        [CHOICES "<v1>" "<v2>" ...] [DEFAULT "<value>"]
    GOAL <name>
    RULE "<name>" IF <premise> {AND <premise>}
        THEN <attr> = "<value>" CF <n> {AND <attr> = "<value>" CF <n>}

A premise is ``<attr> <op> <value>`` with op one of ``=  !=  <  >`` (``≠`` is
accepted as an alias of ``!=``).  Values are quoted strings for choice-like
attributes and bare numbers (integer or ``p/q``) for numeric ones.  Quoted
strings escape ``"`` and ``\\`` with a backslash.  ``YesNo`` attributes have
the implicit choices ``yes``/``no``; display labels come from the TRANSLATE
table.  See docs/kb-format.md for the full grammar.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union


class KbError(Exception):
    pass


class EncodingError(KbError):
    pass


class KbSyntaxError(KbError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class UndeclaredAttribute(KbError):
    pass


class BadCF(KbError):
    pass


class EmptyColumn(KbError):
    pass


class NoGoalAction(KbError):
    pass


class PromptType(Enum):
    YESNO = "YesNo"
    MULTCHOICE = "MultChoice"
    FORCEDCHOICE = "ForcedChoice"
    CHOICE = "Choice"
    ALLCHOICE = "AllChoice"
    NUMERIC = "Numeric"


CHOICE_LIKE = {
    PromptType.MULTCHOICE,
    PromptType.FORCEDCHOICE,
    PromptType.CHOICE,
    PromptType.ALLCHOICE,
}

YESNO_CHOICES = ("yes", "no")

PremiseValue = Union[str, Fraction]


@dataclass(frozen=True)
class AttributeDef:
    name: str
    prompt_text: str
    prompt_type: PromptType
    choices: tuple[str, ...] = ()
    default: Optional[str] = None

    def __post_init__(self):
        if self.prompt_type in CHOICE_LIKE and len(self.choices) < 2:
            raise ValueError(f"attribute {self.name!r} needs at least 2 choices")
        if self.prompt_type not in CHOICE_LIKE and self.choices:
            raise ValueError(f"attribute {self.name!r} cannot declare choices")

    def effective_choices(self) -> tuple[str, ...]:
        if self.prompt_type is PromptType.YESNO:
            return YESNO_CHOICES
        return self.choices


@dataclass(frozen=True)
class Premise:
    attr: str
    op: str  # = | != | < | >
    value: PremiseValue

    def __post_init__(self):
        if self.op not in ("=", "!=", "<", ">"):
            raise ValueError(f"bad operator {self.op!r}")


@dataclass(frozen=True)
class Conclusion:
    attr: str
    value: str
    cf: int

    def __post_init__(self):
        if not (0 <= self.cf <= 100):
            raise BadCF(f"conclusion CF {self.cf} outside [0, 100]")


@dataclass(frozen=True)
class RuleDef:
    name: str
    premises: tuple[Premise, ...]
    conclusions: tuple[Conclusion, ...]

    def __post_init__(self):
        if not self.premises or not self.conclusions:
            raise ValueError(f"rule {self.name!r} needs premises and conclusions")
        premised = {p.attr for p in self.premises}
        for c in self.conclusions:
            if c.attr in premised:
                raise ValueError(
                    f"rule {self.name!r} concludes premised attribute {c.attr!r}"
                )


@dataclass(frozen=True)
class KnowledgeBase:
    title: str
    attributes: dict[str, AttributeDef]
    rules: tuple[RuleDef, ...]
    goals: tuple[str, ...]
    min_cf: int = 80
    translations: dict[str, str] = field(default_factory=dict)
    comments: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.goals:
            raise ValueError("knowledge base declares no goals")
        if not (1 <= self.min_cf <= 100):
            raise BadCF(f"MINCF {self.min_cf} outside [1, 100]")
        for goal in self.goals:
            if goal not in self.attributes:
                raise UndeclaredAttribute(f"goal {goal!r} is not a declared attribute")
        for rule in self.rules:
            for premise in rule.premises:
                if premise.attr not in self.attributes:
                    raise UndeclaredAttribute(
                        f"rule {rule.name!r} premises undeclared attribute {premise.attr!r}"
                    )
            for conclusion in rule.conclusions:
                if conclusion.attr not in self.attributes:
                    raise UndeclaredAttribute(
                        f"rule {rule.name!r} concludes undeclared attribute {conclusion.attr!r}"
                    )


# ---------------------------------------------------------------------------
# tokenizer


_TOKEN_RE = re.compile(
    r'''\s*(?:
        "(?P<string>(?:[^"\\]|\\.)*)"   |
        (?P<word>[^\s"]+)
    )''',
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    text: str
    quoted: bool


def _unescape(raw: str) -> str:
    return raw.replace('\\"', '"').replace("\\\\", "\\")


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(line, pos)
        if not m or m.end() == pos:
            raise KbSyntaxError(lineno, f"cannot tokenize near {line[pos:pos + 20]!r}")
        if m.group("string") is not None:
            tokens.append(_Tok(_unescape(m.group("string")), True))
        else:
            tokens.append(_Tok(m.group("word"), False))
        pos = m.end()
    return tokens


class _LineParser:
    """Cursor over one line's tokens with error reporting."""

    def __init__(self, tokens: list[_Tok], lineno: int):
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str):
        raise KbSyntaxError(self.lineno, message)

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> Optional[_Tok]:
        return self.tokens[self.pos] if not self.done() else None

    def take(self, expect: str = "token") -> _Tok:
        if self.done():
            self.error(f"expected {expect}, line ended early")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def keyword(self, name: str):
        tok = self.take(name)
        if tok.quoted or tok.text != name:
            self.error(f"expected {name}, got {tok.text!r}")

    def word(self, expect: str) -> str:
        tok = self.take(expect)
        if tok.quoted:
            self.error(f"expected {expect}, got a quoted string")
        return tok.text

    def quoted(self, expect: str) -> str:
        tok = self.take(expect)
        if not tok.quoted:
            self.error(f"expected quoted {expect}, got {tok.text!r}")
        return tok.text

    def integer(self, expect: str) -> int:
        text = self.word(expect)
        try:
            return int(text)
        except ValueError:
            self.error(f"expected integer {expect}, got {text!r}")

    def end(self):
        if not self.done():
            self.error(f"unexpected trailing {self.tokens[self.pos].text!r}")


def _decode(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        return data
    try:
        if data.startswith(b"\xff\xfe"):
            return data.decode("utf-16-le")[1:]  # strip decoded BOM
        if data.startswith(b"\xfe\xff"):
            return data.decode("utf-16-be")[1:]
        if data.startswith(b"\xef\xbb\xbf"):
            return data[3:].decode("utf-8")
        return data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise EncodingError(f"cannot decode knowledge base text: {err}") from err


_OP_ALIASES = {"=": "=", "!=": "!=", "≠": "!=", "<": "<", ">": ">"}


def parse_kb(data: Union[bytes, str]) -> KnowledgeBase:
    """Parse the text format; accepts UTF-8 or BOM-marked UTF-16 bytes."""
    text = _decode(data)
    title = ""
    min_cf: Optional[int] = None
    translations: dict[str, str] = {}
    attributes: dict[str, AttributeDef] = {}
    goals: list[str] = []
    rules: list[RuleDef] = []
    comments: list[str] = []

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        if line == "REM" or line.startswith("REM "):
            comments.append(line[3:].strip())
            continue
        parser = _LineParser(_tokenize(line, lineno), lineno)
        head = parser.word("keyword")
        if head == "TITLE":
            title = parser.quoted("title")
            parser.end()
        elif head == "MINCF":
            value = parser.integer("MINCF value")
            if not (1 <= value <= 100):
                raise BadCF(f"line {lineno}: MINCF {value} outside [1, 100]")
            min_cf = value
            parser.end()
        elif head == "TRANSLATE":
            key = parser.word("translation key")
            parser.keyword("=")
            translations[key] = parser.quoted("translation text")
            parser.end()
        elif head == "ATTRIBUTE":
            attr = _parse_attribute(parser)
            if attr.name in attributes:
                parser.error(f"attribute {attr.name!r} declared twice")
            attributes[attr.name] = attr
        elif head == "GOAL":
            goals.append(parser.word("goal attribute name"))
            parser.end()
        elif head == "RULE":
            rules.append(_parse_rule(parser, attributes))
        else:
            parser.error(f"unknown keyword {head!r}")

    if not goals:
        raise KbSyntaxError(0, "knowledge base declares no goals")
    for goal in goals:
        if goal not in attributes:
            raise UndeclaredAttribute(f"goal {goal!r} is not a declared attribute")
    return KnowledgeBase(
        title=title,
        attributes=attributes,
        rules=tuple(rules),
        goals=tuple(goals),
        min_cf=min_cf if min_cf is not None else 80,
        translations=translations,
        comments=tuple(comments),
    )


def _parse_attribute(parser: _LineParser) -> AttributeDef:
    name = parser.word("attribute name")
    parser.keyword("TYPE")
    type_text = parser.word("prompt type")
    try:
        prompt_type = PromptType(type_text)
    except ValueError:
        parser.error(f"unknown prompt type {type_text!r}")
    parser.keyword("PROMPT")
    prompt_text = parser.quoted("prompt text")
    choices: list[str] = []
    default = None
    while not parser.done():
        clause = parser.word("CHOICES or DEFAULT")
        if clause == "CHOICES":
            while parser.peek() is not None and parser.peek().quoted:
                choices.append(parser.take().text)
            if not choices:
                parser.error("CHOICES clause lists no values")
        elif clause == "DEFAULT":
            default = parser.quoted("default value")
        else:
            parser.error(f"unexpected clause {clause!r}")
    try:
        return AttributeDef(name, prompt_text, prompt_type, tuple(choices), default)
    except ValueError as err:
        parser.error(str(err))


def _parse_premise_value(parser: _LineParser, attr: AttributeDef) -> PremiseValue:
    tok = parser.take("premise value")
    if attr.prompt_type is PromptType.NUMERIC:
        if tok.quoted:
            parser.error(f"numeric attribute {attr.name!r} compared to a string")
        try:
            return Fraction(tok.text)
        except (ValueError, ZeroDivisionError):
            parser.error(f"bad number {tok.text!r}")
    if not tok.quoted:
        parser.error(f"value for attribute {attr.name!r} must be a quoted string")
    return tok.text


def _parse_rule(parser: _LineParser, attributes: dict[str, AttributeDef]) -> RuleDef:
    name = parser.quoted("rule name")
    parser.keyword("IF")
    premises = []
    while True:
        attr_name = parser.word("premise attribute")
        if attr_name not in attributes:
            raise UndeclaredAttribute(
                f"line {parser.lineno}: rule {name!r} premises undeclared attribute {attr_name!r}"
            )
        attr = attributes[attr_name]
        op_text = parser.word("operator")
        op = _OP_ALIASES.get(op_text)
        if op is None:
            parser.error(f"unknown operator {op_text!r}")
        if op in ("<", ">") and attr.prompt_type is not PromptType.NUMERIC:
            parser.error(f"operator {op} needs a numeric attribute, {attr_name!r} is not")
        value = _parse_premise_value(parser, attr)
        premises.append(Premise(attr_name, op, value))
        link = parser.word("AND or THEN")
        if link == "THEN":
            break
        if link != "AND":
            parser.error(f"expected AND or THEN, got {link!r}")
    conclusions = []
    while True:
        attr_name = parser.word("conclusion attribute")
        if attr_name not in attributes:
            raise UndeclaredAttribute(
                f"line {parser.lineno}: rule {name!r} concludes undeclared attribute {attr_name!r}"
            )
        parser.keyword("=")
        tok = parser.take("conclusion value")
        if not tok.quoted and attributes[attr_name].prompt_type is not PromptType.NUMERIC:
            parser.error("conclusion value must be a quoted string")
        parser.keyword("CF")
        cf = parser.integer("CF value")
        if not (0 <= cf <= 100):
            raise BadCF(f"line {parser.lineno}: CF {cf} outside [0, 100]")
        conclusions.append(Conclusion(attr_name, tok.text, cf))
        if parser.done():
            break
        parser.keyword("AND")
    try:
        return RuleDef(name, tuple(premises), tuple(conclusions))
    except ValueError as err:
        parser.error(str(err))


# ---------------------------------------------------------------------------
# serialization


def _premise_text(p: Premise) -> str:
    value = str(p.value) if isinstance(p.value, Fraction) else f'"{_escape(p.value)}"'
    return f"{p.attr} {p.op} {value}"


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical UTF-8 text; ``parse_kb(serialize_kb(kb))`` equals ``kb``."""
    lines = []
    for comment in kb.comments:
        lines.append(f"REM {comment}".rstrip())
    if kb.title:
        lines.append(f'TITLE "{_escape(kb.title)}"')
    lines.append(f"MINCF {kb.min_cf}")
    for key, text in kb.translations.items():
        lines.append(f'TRANSLATE {key} = "{_escape(text)}"')
    for attr in kb.attributes.values():
        parts = [
            f"ATTRIBUTE {attr.name} TYPE {attr.prompt_type.value}",
            f'PROMPT "{_escape(attr.prompt_text)}"',
        ]
        if attr.choices:
            parts.append("CHOICES " + " ".join(f'"{_escape(c)}"' for c in attr.choices))
        if attr.default is not None:
            parts.append(f'DEFAULT "{_escape(attr.default)}"')
        lines.append(" ".join(parts))
    for goal in kb.goals:
        lines.append(f"GOAL {goal}")
    for rule in kb.rules:
        premises = " AND ".join(_premise_text(p) for p in rule.premises)
        conclusions = " AND ".join(
            f'{c.attr} = "{_escape(c.value)}" CF {c.cf}' for c in rule.conclusions
        )
        lines.append(f'RULE "{_escape(rule.name)}" IF {premises} THEN {conclusions}')
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class KbDiagnostic:
    code: str
    message: str
    subject: str = ""


def _value_matches_choices(attr: AttributeDef, value: PremiseValue) -> bool:
    if attr.prompt_type is PromptType.NUMERIC:
        if isinstance(value, Fraction):
            return True
        try:
            Fraction(value)
            return True
        except (ValueError, ZeroDivisionError):
            return False
    return str(value) in attr.effective_choices()


def validate_kb(kb: KnowledgeBase) -> list[KbDiagnostic]:
    """Lint: empty result iff clean.  Parse-level errors are not re-checked."""
    diagnostics: list[KbDiagnostic] = []

    concluded = {c.attr for rule in kb.rules for c in rule.conclusions}
    for goal in kb.goals:
        if goal not in concluded:
            diagnostics.append(
                KbDiagnostic("UnreachableGoal", f"no rule concludes goal {goal!r}", goal)
            )

    seen_names = set()
    for rule in kb.rules:
        if rule.name in seen_names:
            diagnostics.append(
                KbDiagnostic("DuplicateRuleName", f"rule name {rule.name!r} reused", rule.name)
            )
        seen_names.add(rule.name)
        for premise in kb_dead_premises(kb, rule):
            diagnostics.append(
                KbDiagnostic(
                    "DeadRule",
                    f"rule {rule.name!r} tests {premise.attr!r} against "
                    f"{premise.value!r}, which no declared choice can match",
                    rule.name,
                )
            )

    # derivation graph: concluded attribute depends on each premised attribute
    depends: dict[str, set[str]] = {}
    for rule in kb.rules:
        for c in rule.conclusions:
            depends.setdefault(c.attr, set()).update(p.attr for p in rule.premises)
    state: dict[str, int] = {}

    def visit(node: str, stack: list[str]) -> Optional[list[str]]:
        state[node] = 1
        stack.append(node)
        for dep in sorted(depends.get(node, ())):
            if state.get(dep) == 1:
                return stack[stack.index(dep):] + [dep]
            if state.get(dep, 0) == 0:
                cycle = visit(dep, stack)
                if cycle:
                    return cycle
        stack.pop()
        state[node] = 2
        return None

    for node in depends:
        if state.get(node, 0) == 0:
            cycle = visit(node, [])
            if cycle:
                diagnostics.append(
                    KbDiagnostic(
                        "CycleWarning",
                        "attribute derivation cycle: " + " -> ".join(cycle),
                        cycle[0],
                    )
                )
                break
    return diagnostics


def kb_dead_premises(kb: KnowledgeBase, rule: RuleDef) -> list[Premise]:
    return [
        p
        for p in rule.premises
        if p.op in ("=", "!=") and not _value_matches_choices(kb.attributes[p.attr], p.value)
    ]


# ---------------------------------------------------------------------------
# decision tables


@dataclass(frozen=True)
class TableColumn:
    name: str
    condition_cells: tuple[Optional[str], ...]
    action_cells: tuple[Optional[str], ...]
    cf: int = 100


@dataclass(frozen=True)
class DecisionTable:
    title: str
    conditions: tuple[AttributeDef, ...]
    actions: tuple[tuple[AttributeDef, bool], ...]
    columns: tuple[TableColumn, ...]
    min_cf: int = 80


def _attr_from_obj(obj: dict) -> AttributeDef:
    return AttributeDef(
        name=obj["name"],
        prompt_text=obj.get("prompt", obj["name"]),
        prompt_type=PromptType(obj.get("type", "YesNo")),
        choices=tuple(obj.get("choices", ())),
        default=obj.get("default"),
    )


def load_decision_table(text: Union[bytes, str]) -> DecisionTable:
    """Load the .dt JSON shape (conditions / actions / rule columns)."""
    if isinstance(text, bytes):
        text = _decode(text)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise KbSyntaxError(getattr(err, "lineno", 0), f"not valid JSON: {err}") from err
    conditions = tuple(_attr_from_obj(c) for c in obj.get("conditions", ()))
    actions = tuple(
        (_attr_from_obj(a), bool(a.get("goal", False))) for a in obj.get("actions", ())
    )
    columns = []
    for col in obj.get("columns", ()):
        cells_c = tuple(col.get("conditions", ()))
        cells_a = tuple(col.get("actions", ()))
        if len(cells_c) != len(conditions) or len(cells_a) != len(actions):
            raise KbSyntaxError(
                0, f"column {col.get('name')!r} does not cover every row"
            )
        columns.append(
            TableColumn(
                name=str(col["name"]),
                condition_cells=cells_c,
                action_cells=cells_a,
                cf=int(col.get("cf", 100)),
            )
        )
    return DecisionTable(
        title=obj.get("title", ""),
        conditions=conditions,
        actions=actions,
        columns=tuple(columns),
        min_cf=int(obj.get("mincf", 80)),
    )


_CELL_OP_RE = re.compile(r"^(=|!=|<|>|≠)\s*(.+)$")


def _premise_from_cell(attr: AttributeDef, cell: str) -> Premise:
    op = "="
    value_text = cell
    m = _CELL_OP_RE.match(cell.strip())
    if m and attr.prompt_type is PromptType.NUMERIC:
        op = _OP_ALIASES[m.group(1)]
        value_text = m.group(2).strip()
    if attr.prompt_type is PromptType.NUMERIC:
        return Premise(attr.name, op, Fraction(value_text))
    return Premise(attr.name, op, value_text)


def table_to_rules(dt: DecisionTable) -> KnowledgeBase:
    """Compile one rule per column; goal-flagged action attributes become goals."""
    if not any(goal for _, goal in dt.actions):
        raise NoGoalAction("no action is marked as a goal")
    attributes: dict[str, AttributeDef] = {}
    for attr in dt.conditions:
        attributes[attr.name] = attr
    for attr, _ in dt.actions:
        attributes[attr.name] = attr
    rules = []
    for column in dt.columns:
        premises = [
            _premise_from_cell(attr, cell)
            for attr, cell in zip(dt.conditions, column.condition_cells)
            if cell is not None
        ]
        conclusions = [
            Conclusion(attr.name, cell, column.cf)
            for (attr, _), cell in zip(dt.actions, column.action_cells)
            if cell is not None
        ]
        if not premises or not conclusions:
            raise EmptyColumn(f"column {column.name!r} selects no premise or no action")
        rules.append(RuleDef(column.name, tuple(premises), tuple(conclusions)))
    goals = tuple(attr.name for attr, goal in dt.actions if goal)
    return KnowledgeBase(
        title=dt.title,
        attributes=attributes,
        rules=tuple(rules),
        goals=goals,
        min_cf=dt.min_cf,
    )


def parse_translations(data: Union[bytes, str]) -> dict[str, str]:
    """Read just TRANSLATE/REM lines (the standalone localization file shape)."""
    text = _decode(data)
    translations: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("REM"):
            continue
        parser = _LineParser(_tokenize(line, lineno), lineno)
        parser.keyword("TRANSLATE")
        key = parser.word("translation key")
        parser.keyword("=")
        translations[key] = parser.quoted("translation text")
        parser.end()
    return translations
