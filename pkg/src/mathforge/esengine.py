"""Goal-driven inference with certainty factors over a knowledge base.

Chaining contract
-----------------
Goals are sought in declaration order.  For an unknown attribute every rule
concluding it is tried in declaration order; the user is asked only when no
rule concludes the attribute or all such rules failed.  Goal attributes are
never asked.  A premise takes the certainty of the matching remembered value;
a firing rule contributes ``min(premise cfs) · rule_cf / 100`` and multiple
contributions to one (attribute, value) combine as ``a + b·(100−a)/100``.
All certainty arithmetic is exact (rationals); values round half-up to whole
percent only at the API surface.

A session replays its recorded answers through the deterministic chainer on
every step, which keeps the trace append-only and sessions trivially
restartable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence, Union

from .eskb import (
    AttributeDef,
    KnowledgeBase,
    Premise,
    PromptType,
    RuleDef,
    parse_translations,
)


class EngineError(Exception):
    pass


class InvalidKB(EngineError):
    pass


class NotPending(EngineError):
    pass


class WrongAttribute(EngineError):
    pass


class BadValue(EngineError):
    pass


class BadCF(EngineError):
    pass


class NotFinished(EngineError):
    pass


class Status(Enum):
    IN_PROGRESS = "in_progress"
    CONCLUDED = "concluded"
    UNDETERMINABLE = "undeterminable"


@dataclass(frozen=True)
class CFValue:
    value: Union[str, Fraction]
    cf: int

    def __post_init__(self):
        if not (0 <= self.cf <= 100):
            raise BadCF(f"certainty {self.cf} outside [0, 100]")


class _NoResponse:
    def __repr__(self):
        return "NO_RESPONSE"


NO_RESPONSE = _NoResponse()


@dataclass(frozen=True)
class Question:
    attr: str
    prompt: str
    prompt_type: PromptType
    choices: tuple[str, ...]
    allow_no_response: bool = True
    cf_options: tuple[int, ...] = (50, 100)


@dataclass(frozen=True)
class ConclusionResult:
    goal: str
    value: str
    cf: int
    accepted: bool


# trace events


@dataclass(frozen=True)
class RuleTried:
    rule: str


@dataclass(frozen=True)
class RuleFired:
    rule: str
    attr: str
    value: str
    cf: int


@dataclass(frozen=True)
class Asked:
    attr: str


@dataclass(frozen=True)
class Answered:
    attr: str
    value: Optional[str]
    cf: int


@dataclass(frozen=True)
class Defaulted:
    attr: str
    value: str


@dataclass(frozen=True)
class GoalConcluded:
    goal: str
    value: str
    cf: int
    accepted: bool


TraceEvent = Union[RuleTried, RuleFired, Asked, Answered, Defaulted, GoalConcluded]


def _round_half_up(value: Fraction) -> int:
    return int(value + Fraction(1, 2)) if value >= 0 else -int(-value + Fraction(1, 2))


def combine_exact(a: Fraction, b: Fraction) -> Fraction:
    return a + b * (100 - a) / 100


def combine_cf(a: int, b: int) -> int:
    """Two-source combination a + b·(100−a)/100, rounded half-up."""
    for value in (a, b):
        if not (0 <= value <= 100):
            raise BadCF(f"certainty {value} outside [0, 100]")
    return _round_half_up(combine_exact(Fraction(a), Fraction(b)))


_DEFAULT_TRANSLATIONS: Optional[dict[str, str]] = None


def default_translations() -> dict[str, str]:
    global _DEFAULT_TRANSLATIONS
    if _DEFAULT_TRANSLATIONS is None:
        data = resources.files("mathforge").joinpath("data/translations/uk.txt").read_bytes()
        _DEFAULT_TRANSLATIONS = parse_translations(data)
    return dict(_DEFAULT_TRANSLATIONS)


def _canonical_value(attr: AttributeDef, raw: Union[str, Fraction, int]) -> str:
    """Validate one answered value against the prompt type; return memory key."""
    if attr.prompt_type is PromptType.NUMERIC:
        try:
            return str(Fraction(raw))
        except (ValueError, ZeroDivisionError, TypeError) as err:
            raise BadValue(f"{attr.name!r} expects a number, got {raw!r}") from err
    value = str(raw)
    if value not in attr.effective_choices():
        raise BadValue(f"{value!r} is not a choice of {attr.name!r}")
    return value


class _NeedInput(Exception):
    def __init__(self, attr: str, rule: Optional[RuleDef]):
        self.attr = attr
        self.rule = rule


class _Chainer:
    """One deterministic run of backward chaining over a recorded script."""

    def __init__(self, kb: KnowledgeBase, script: dict[str, object]):
        self.kb = kb
        self.script = script
        self.memory: dict[str, dict[str, Fraction]] = {}
        self.source: dict[str, str] = {}  # user | derived | default | noresponse
        self.trace: list[TraceEvent] = []
        self._resolved: set[str] = set()
        self._rule_done: set[int] = set()
        self._rule_stack: list[RuleDef] = []
        self._goals = set(kb.goals)

    def run(self):
        for goal in self.kb.goals:
            self._resolve(goal)

    def _resolve(self, attr: str):
        if attr in self._resolved:
            return
        self._resolved.add(attr)  # guards against derivation cycles
        for index, rule in enumerate(self.kb.rules):
            if any(c.attr == attr for c in rule.conclusions):
                self._try_rule(index)
        if attr in self.memory or attr in self._goals:
            return
        self._ask(attr)

    def _try_rule(self, index: int):
        if index in self._rule_done:
            return
        self._rule_done.add(index)
        rule = self.kb.rules[index]
        self.trace.append(RuleTried(rule.name))
        self._rule_stack.append(rule)
        try:
            min_cf = Fraction(100)
            for premise in rule.premises:
                self._resolve(premise.attr)
                holds, cf = self._eval_premise(premise)
                if not holds:
                    return
                min_cf = min(min_cf, cf)
        finally:
            self._rule_stack.pop()
        for conclusion in rule.conclusions:
            fired = min_cf * conclusion.cf / 100
            slot = self.memory.setdefault(conclusion.attr, {})
            slot[conclusion.value] = combine_exact(slot.get(conclusion.value, Fraction(0)), fired)
            self.source.setdefault(conclusion.attr, "derived")
            self.trace.append(
                RuleFired(rule.name, conclusion.attr, conclusion.value, _round_half_up(fired))
            )

    def _eval_premise(self, premise: Premise) -> tuple[bool, Fraction]:
        values = self.memory.get(premise.attr)
        if not values:
            return False, Fraction(0)
        attr = self.kb.attributes[premise.attr]
        numeric = attr.prompt_type is PromptType.NUMERIC

        def value_equals(stored: str) -> bool:
            if numeric:
                try:
                    return Fraction(stored) == Fraction(premise.value)
                except (ValueError, ZeroDivisionError):
                    return False
            return stored == str(premise.value)

        if premise.op == "=":
            matching = [cf for stored, cf in values.items() if value_equals(stored)]
            return (True, max(matching)) if matching else (False, Fraction(0))
        if premise.op == "!=":
            if any(value_equals(stored) for stored in values):
                return False, Fraction(0)
            return True, max(values.values())
        # strict numeric comparison
        target = Fraction(premise.value)
        matching = []
        for stored, cf in values.items():
            try:
                number = Fraction(stored)
            except (ValueError, ZeroDivisionError):
                continue
            if (premise.op == "<" and number < target) or (
                premise.op == ">" and number > target
            ):
                matching.append(cf)
        return (True, max(matching)) if matching else (False, Fraction(0))

    def _ask(self, attr: str):
        self.trace.append(Asked(attr))
        if attr not in self.script:
            raise _NeedInput(attr, self._rule_stack[-1] if self._rule_stack else None)
        response = self.script[attr]
        attr_def = self.kb.attributes[attr]
        if isinstance(response, _NoResponse):
            self.trace.append(Answered(attr, None, 0))
            if attr_def.default is not None:
                # declared default applies at full certainty when unanswered
                self.memory[attr] = {attr_def.default: Fraction(100)}
                self.source[attr] = "default"
                self.trace.append(Defaulted(attr, attr_def.default))
            else:
                self.source[attr] = "noresponse"
            return
        slot: dict[str, Fraction] = {}
        for cf_value in response:
            key = _canonical_value(attr_def, cf_value.value)
            slot[key] = Fraction(cf_value.cf)
            self.trace.append(Answered(attr, key, cf_value.cf))
        self.memory[attr] = slot
        self.source[attr] = "user"


class Session:
    """Single-owner consultation state; re-derived from the answer script."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self.status = Status.IN_PROGRESS
        self.pending: Optional[Question] = None
        self.memory: dict[str, dict[str, Fraction]] = {}
        self.trace: tuple[TraceEvent, ...] = ()
        self.conclusions: tuple[ConclusionResult, ...] = ()
        self._script: list[tuple[str, object]] = []
        self._pending_rule: Optional[RuleDef] = None
        self._sources: dict[str, str] = {}

    def tr(self, key: str) -> str:
        table = default_translations()
        table.update(self.kb.translations)
        return table.get(key, key)

    def _question_for(self, attr: str) -> Question:
        attr_def = self.kb.attributes[attr]
        return Question(
            attr=attr,
            prompt=attr_def.prompt_text,
            prompt_type=attr_def.prompt_type,
            choices=attr_def.effective_choices(),
        )

    def _rerun(self):
        chainer = _Chainer(self.kb, dict(self._script))
        try:
            chainer.run()
        except _NeedInput as need:
            self.pending = self._question_for(need.attr)
            self._pending_rule = need.rule
            self.status = Status.IN_PROGRESS
            self.memory = chainer.memory
            self._sources = chainer.source
            self.trace = tuple(chainer.trace)
            return
        self.pending = None
        self._pending_rule = None
        self.memory = chainer.memory
        self._sources = chainer.source
        results = []
        accepted_any = False
        trace = list(chainer.trace)
        for goal in self.kb.goals:
            values = self.memory.get(goal, {})
            ordered = sorted(values.items(), key=lambda kv: -kv[1])
            for value, exact_cf in ordered:
                cf = _round_half_up(exact_cf)
                accepted = cf >= self.kb.min_cf
                accepted_any = accepted_any or accepted
                results.append(ConclusionResult(goal, value, cf, accepted))
                trace.append(GoalConcluded(goal, value, cf, accepted))
        self.conclusions = tuple(results)
        self.trace = tuple(trace)
        self.status = Status.CONCLUDED if accepted_any else Status.UNDETERMINABLE


def start(kb: KnowledgeBase) -> Session:
    """Begin a consultation; chaining advances to the first question or end."""
    _check_structure(kb)
    session = Session(kb)
    session._rerun()
    return session


def _check_structure(kb: KnowledgeBase):
    try:
        # the KnowledgeBase constructor re-checks every structural invariant
        replace(kb)
    except Exception as err:
        raise InvalidKB(str(err)) from err


def answer(
    session: Session,
    attr: str,
    values: Union[Sequence[CFValue], CFValue, _NoResponse],
) -> Session:
    """Record the answer for the pending question and resume chaining."""
    if session.status is not Status.IN_PROGRESS or session.pending is None:
        raise NotPending("no question is pending")
    if attr != session.pending.attr:
        raise WrongAttribute(f"pending question is about {session.pending.attr!r}, not {attr!r}")
    if isinstance(values, CFValue):
        values = [values]
    if not isinstance(values, _NoResponse):
        values = list(values)
        if not values:
            raise BadValue("no values supplied")
        attr_def = session.kb.attributes[attr]
        if attr_def.prompt_type is not PromptType.ALLCHOICE and len(values) > 1:
            raise BadValue(f"{attr_def.prompt_type.value} takes a single value")
        seen = set()
        for cf_value in values:
            key = _canonical_value(attr_def, cf_value.value)
            if key in seen:
                raise BadValue(f"value {key!r} supplied twice")
            seen.add(key)
    session._script.append((attr, values))
    session._rerun()
    return session


def restart(session: Session) -> Session:
    """Fresh session over the same knowledge base."""
    return start(session.kb)


def _display_value(session: Session, attr: AttributeDef, value: Union[str, Fraction]) -> str:
    text = str(value)
    if attr.prompt_type is PromptType.YESNO:
        return session.tr("TR_YES") if text == "yes" else session.tr("TR_NO")
    return text


def _premise_line(session: Session, premise: Premise) -> str:
    attr = session.kb.attributes[premise.attr]
    op_key = {"=": "TR_EQUAL", "!=": "TR_NOTEQUAL", "<": "TR_LESSTHAN", ">": "TR_GREATER"}
    return f"{attr.prompt_text} {session.tr(op_key[premise.op])} {_display_value(session, attr, premise.value)}"


def _rule_text(session: Session, rule: RuleDef) -> str:
    lines = [f"{session.tr('TR_RULE')} {rule.name}"]
    for index, premise in enumerate(rule.premises):
        lead = session.tr("TR_IF") if index == 0 else session.tr("TR_AND")
        lines.append(f"{lead} {_premise_line(session, premise)}")
    for index, conclusion in enumerate(rule.conclusions):
        attr = session.kb.attributes[conclusion.attr]
        lead = session.tr("TR_THEN") if index == 0 else session.tr("TR_AND")
        lines.append(
            f"{lead} {attr.prompt_text} {session.tr('TR_IS')} "
            f"{_display_value(session, attr, conclusion.value)} (CF {conclusion.cf})"
        )
    return "\n".join(lines)


def why_ask(session: Session) -> str:
    """Explain the pending question by showing the rule under trial."""
    if session.status is not Status.IN_PROGRESS or session.pending is None:
        raise NotPending("no question is pending")
    rule = session._pending_rule
    if rule is None:
        return session.tr("TR_TOFIND")
    sought = session.kb.attributes[rule.conclusions[0].attr]
    header = (
        f"{session.tr('TR_TOFIND')} {session.tr('TR_AVALUE')} "
        f"{sought.prompt_text} {session.tr('TR_ISNEEDED')}"
    )
    return header + "\n" + _rule_text(session, rule)


def explain(session: Session) -> str:
    """Account for the outcome: verdicts, fired rules, value provenance."""
    if session.status is Status.IN_PROGRESS:
        raise NotFinished("consultation is still in progress")
    lines = [session.tr("TR_RESULTS")]
    for goal in session.kb.goals:
        goal_def = session.kb.attributes[goal]
        matching = [c for c in session.conclusions if c.goal == goal and c.accepted]
        if matching:
            for result in matching:
                lines.append(
                    f"{goal_def.prompt_text} {session.tr('TR_ISRESULT')} {result.value} "
                    f"{session.tr('TR_WITH')} {result.cf}{session.tr('TR_CONF')}"
                )
        else:
            lines.append(
                f"{session.tr('TR_VALUEFOR')} {goal_def.prompt_text} {session.tr('TR_NOTDETERMINED')}"
            )
    fired = [event for event in session.trace if isinstance(event, RuleFired)]
    rules_by_name = {rule.name: rule for rule in session.kb.rules}
    for event in fired:
        lines.append("")
        lines.append(f"{_rule_text(session, rules_by_name[event.rule])}")
        # TR_THISRULE already ends with "… коефіцієнтом довіри "
        lines.append(f"{session.tr('TR_THISRULE')}{event.cf}")
    lines.append("")
    for attr_name, source in session._sources.items():
        attr = session.kb.attributes[attr_name]
        values = session.memory.get(attr_name, {})
        if source == "user":
            for value, exact_cf in values.items():
                lines.append(
                    f"{session.tr('TR_VALUEFOR')} {attr.prompt_text} {session.tr('TR_IS')} "
                    f"{_display_value(session, attr, value)} "
                    f"{session.tr('TR_WASINPUT')}{_round_half_up(exact_cf)}{session.tr('TR_CONF')}"
                )
        elif source == "derived":
            for value, exact_cf in values.items():
                lines.append(
                    f"{session.tr('TR_VALUEFOR')} {attr.prompt_text} {session.tr('TR_IS')} "
                    f"{_display_value(session, attr, value)} {session.tr('TR_DETERMINED')} "
                    f"({_round_half_up(exact_cf)}{session.tr('TR_CONF')})"
                )
        elif source == "default":
            for value in values:
                lines.append(
                    f"{session.tr('TR_VALUEFOR')} {attr.prompt_text} "
                    f"{session.tr('TR_DEFAULTED')} {_display_value(session, attr, value)}"
                )
        else:  # noresponse
            lines.append(
                f"{session.tr('TR_VALUEFOR')} {attr.prompt_text} {session.tr('TR_NOTFOUND')}"
            )
    return "\n".join(lines)
