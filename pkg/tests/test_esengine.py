import random
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathforge.esengine import (
    NO_RESPONSE,
    Asked,
    BadCF,
    BadValue,
    CFValue,
    NotFinished,
    NotPending,
    Status,
    WrongAttribute,
    answer,
    combine_cf,
    combine_exact,
    explain,
    restart,
    start,
    why_ask,
)
from mathforge.eskb import parse_kb

from .test_eskb import knowledge_bases

ONE_RULE = """
TITLE "One rule"
MINCF 80
ATTRIBUTE q TYPE YesNo PROMPT "Is it so?"
ATTRIBUTE g TYPE Choice PROMPT "the verdict" CHOICES "win" "lose"
GOAL g
RULE "only" IF q = "yes" THEN g = "win" CF 100
"""

CHAINED = """
MINCF 80
ATTRIBUTE a TYPE YesNo PROMPT "Base fact?"
ATTRIBUTE p TYPE YesNo PROMPT "Derived fact?"
ATTRIBUTE q TYPE Choice PROMPT "verdict" CHOICES "x" "y"
GOAL q
RULE "A" IF a = "yes" THEN p = "yes" CF 90
RULE "B" IF p = "yes" THEN q = "x" CF 100
"""

TWO_SOURCES = """
MINCF 80
ATTRIBUTE a TYPE YesNo PROMPT "First sign?"
ATTRIBUTE b TYPE YesNo PROMPT "Second sign?"
ATTRIBUTE g TYPE Choice PROMPT "verdict" CHOICES "x" "y"
GOAL g
RULE "1" IF a = "yes" THEN g = "x" CF 60
RULE "2" IF b = "yes" THEN g = "x" CF 60
"""


def demo_kb():
    return parse_kb(resources.files("mathforge").joinpath("data/kb/diffeq.kb").read_bytes())


def yes(cf=100):
    return [CFValue("yes", cf)]


def no(cf=100):
    return [CFValue("no", cf)]


class TestCombine:
    def test_zero_is_identity(self):
        for x in range(0, 101, 7):
            assert combine_cf(0, x) == x
            assert combine_cf(x, 0) == x

    def test_hundred_absorbs(self):
        for x in range(0, 101, 7):
            assert combine_cf(100, x) == 100

    def test_sixty_sixty(self):
        assert combine_cf(60, 60) == 84

    def test_range_check(self):
        with pytest.raises(BadCF):
            combine_cf(-1, 50)
        with pytest.raises(BadCF):
            combine_cf(50, 101)

    def test_order_independent_1000_pairs(self):
        rng = random.Random(2024)
        for _ in range(1000):
            a, b = rng.randint(0, 100), rng.randint(0, 100)
            assert combine_cf(a, b) == combine_cf(b, a)

    @given(st.integers(0, 100), st.integers(0, 100), st.integers(0, 100))
    def test_exactly_associative_in_rationals(self, a, b, c):
        left = combine_exact(combine_exact(Fraction(a), Fraction(b)), Fraction(c))
        right = combine_exact(Fraction(a), combine_exact(Fraction(b), Fraction(c)))
        assert left == right


class TestOneRule:
    def test_start_asks_q(self):
        session = start(parse_kb(ONE_RULE))
        assert session.status is Status.IN_PROGRESS
        assert session.pending.attr == "q"
        assert session.pending.choices == ("yes", "no")

    def test_full_confidence_accepted(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", yes(100))
        assert session.status is Status.CONCLUDED
        (result,) = session.conclusions
        assert (result.goal, result.value, result.cf, result.accepted) == ("g", "win", 100, True)

    def test_below_threshold_rejected(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", yes(50))
        assert session.status is Status.UNDETERMINABLE
        (result,) = session.conclusions
        assert result.cf == 50 and not result.accepted

    def test_mincf_boundary(self):
        at = answer(start(parse_kb(ONE_RULE)), "q", yes(80))
        assert at.status is Status.CONCLUDED and at.conclusions[0].accepted
        below = answer(start(parse_kb(ONE_RULE)), "q", yes(79))
        assert below.status is Status.UNDETERMINABLE
        assert not below.conclusions[0].accepted

    def test_no_response_undeterminable(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", NO_RESPONSE)
        assert session.status is Status.UNDETERMINABLE
        assert session.conclusions == ()

    def test_goal_without_rules_is_undeterminable_immediately(self):
        kb = parse_kb(
            'ATTRIBUTE q TYPE YesNo PROMPT "?"\n'
            'ATTRIBUTE g TYPE Choice PROMPT "g" CHOICES "a" "b"\n'
            "GOAL g\n"
            'RULE "r" IF q = "yes" THEN g = "a" CF 100\n'.replace('GOAL g', 'GOAL g')
        )
        # drop the only rule to leave the goal unreachable
        from dataclasses import replace

        bare = replace(kb, rules=())
        session = start(bare)
        assert session.status is Status.UNDETERMINABLE
        assert session.pending is None

    def test_answer_validation(self):
        session = start(parse_kb(ONE_RULE))
        with pytest.raises(WrongAttribute):
            answer(session, "g", yes())
        with pytest.raises(BadValue):
            answer(session, "q", [CFValue("maybe", 100)])
        with pytest.raises(BadCF):
            answer(session, "q", [CFValue("yes", 150)])
        with pytest.raises(BadValue):
            answer(session, "q", [CFValue("yes", 100), CFValue("no", 100)])
        done = answer(session, "q", yes())
        with pytest.raises(NotPending):
            answer(done, "q", yes())


class TestPropagation:
    def test_rule_cf_scales_premise_cf(self):
        # fired = min(premises) · rule_cf / 100 = 100 · 90/100 → then B: 90 · 100/100
        session = answer(start(parse_kb(CHAINED)), "a", yes(100))
        assert session.status is Status.CONCLUDED
        assert session.conclusions[0].cf == 90

    def test_min_over_premises(self):
        kb = parse_kb(
            "MINCF 50\n"
            'ATTRIBUTE a TYPE YesNo PROMPT "?"\n'
            'ATTRIBUTE b TYPE YesNo PROMPT "?"\n'
            'ATTRIBUTE g TYPE Choice PROMPT "g" CHOICES "x" "y"\n'
            "GOAL g\n"
            'RULE "1" IF a = "yes" AND b = "yes" THEN g = "x" CF 100'
        )
        session = start(kb)
        session = answer(session, "a", yes(70))
        session = answer(session, "b", yes(90))
        assert session.conclusions[0].cf == 70

    def test_two_sources_combine(self):
        session = start(parse_kb(TWO_SOURCES))
        session = answer(session, "a", yes(100))
        session = answer(session, "b", yes(100))
        assert session.status is Status.CONCLUDED
        assert session.conclusions[0].cf == 84  # combine(60, 60)

    def test_numeric_comparisons(self):
        kb = parse_kb(
            "MINCF 50\n"
            'ATTRIBUTE n TYPE Numeric PROMPT "How many?"\n'
            'ATTRIBUTE g TYPE Choice PROMPT "g" CHOICES "few" "many"\n'
            "GOAL g\n"
            'RULE "1" IF n < 3 THEN g = "few" CF 100\n'
            'RULE "2" IF n > 2 THEN g = "many" CF 100'
        )
        session = answer(start(kb), "n", [CFValue("3/2", 100)])
        assert session.conclusions == (
            type(session.conclusions[0])("g", "few", 100, True),
        )

    def test_numeric_equality_is_exact(self):
        kb = parse_kb(
            "MINCF 50\n"
            'ATTRIBUTE n TYPE Numeric PROMPT "?"\n'
            'ATTRIBUTE g TYPE Choice PROMPT "g" CHOICES "hit" "miss"\n'
            "GOAL g\n"
            'RULE "1" IF n = 1/3 THEN g = "hit" CF 100'
        )
        session = answer(start(kb), "n", [CFValue(Fraction(1, 3), 100)])
        assert session.status is Status.CONCLUDED

    def test_allchoice_membership(self):
        kb = parse_kb(
            "MINCF 50\n"
            'ATTRIBUTE signs TYPE AllChoice PROMPT "Which signs?" CHOICES "s1" "s2" "s3"\n'
            'ATTRIBUTE g TYPE Choice PROMPT "g" CHOICES "x" "y"\n'
            "GOAL g\n"
            'RULE "1" IF signs = "s2" THEN g = "x" CF 100'
        )
        session = answer(
            start(kb), "signs", [CFValue("s1", 100), CFValue("s2", 70)]
        )
        assert session.status is Status.CONCLUDED
        assert session.conclusions[0].cf == 70  # the matching value's cf rides along

    def test_not_equal_premise(self):
        kb = parse_kb(
            "MINCF 50\n"
            'ATTRIBUTE c TYPE Choice PROMPT "?" CHOICES "red" "green"\n'
            'ATTRIBUTE g TYPE Choice PROMPT "g" CHOICES "x" "y"\n'
            "GOAL g\n"
            'RULE "1" IF c != "red" THEN g = "x" CF 100'
        )
        assert answer(start(kb), "c", [CFValue("green", 90)]).status is Status.CONCLUDED
        assert answer(start(kb), "c", [CFValue("red", 90)]).status is Status.UNDETERMINABLE

    def test_default_applies_on_no_response(self):
        kb = parse_kb(
            resources.files("mathforge").joinpath("data/kb/animals.kb").read_bytes()
        )
        session = start(kb)
        assert session.pending.attr == "milk"
        session = answer(session, "milk", no())
        session = answer(session, "covering", [CFValue("scales", 100)])
        assert session.pending.attr == "flies"
        session = answer(session, "flies", NO_RESPONSE)  # DEFAULT "no" kicks in
        assert session.status is Status.CONCLUDED
        assert session.conclusions[0].value == "reptile"


class TestQuestionFlow:
    def test_chained_question_order(self):
        session = start(parse_kb(CHAINED))
        assert session.pending.attr == "a"

    def test_demo_kb_first_question(self):
        session = start(demo_kb())
        assert session.pending.attr == "poriadok"
        assert session.pending.prompt_type.value == "Numeric"

    def test_demo_kb_transcript(self):
        session = start(demo_kb())
        session = answer(session, "poriadok", [CFValue(1, 100)])
        assert session.pending.attr == "vidokremleni"
        session = answer(session, "vidokremleni", no())
        assert session.pending.attr == "odnoridna"
        session = answer(session, "odnoridna", yes())
        assert session.pending.attr == "liniine"
        session = answer(session, "liniine", no())
        assert session.status is Status.CONCLUDED
        (result,) = [c for c in session.conclusions if c.accepted]
        assert result.value == "однорідне"
        assert result.cf == 90

    def test_trace_is_append_only(self):
        session = start(demo_kb())
        previous = session.trace
        for attr, value in (
            ("poriadok", [CFValue(1, 100)]),
            ("vidokremleni", no()),
            ("odnoridna", yes()),
            ("liniine", no()),
        ):
            session = answer(session, attr, value)
            assert session.trace[: len(previous)] == previous
            assert len(session.trace) > len(previous)
            previous = session.trace

    def test_no_reask_after_noresponse(self):
        session = start(parse_kb(TWO_SOURCES))
        session = answer(session, "a", NO_RESPONSE)
        assert session.pending.attr == "b"
        session = answer(session, "b", yes(100))
        asked = [e.attr for e in session.trace if isinstance(e, Asked)]
        assert asked.count("a") == 1


class TestWhyAndExplain:
    def test_why_shows_rule_under_trial(self):
        session = start(parse_kb(ONE_RULE))
        text = why_ask(session)
        assert "only" in text
        assert "Якщо" in text and "То" in text
        assert "Для знаходження" in text

    def test_why_in_chained_kb_shows_inner_rule(self):
        session = start(parse_kb(CHAINED))
        text = why_ask(session)
        assert "ПРАВИЛО: A" in text
        assert "ПРАВИЛО: B" not in text

    def test_why_requires_pending(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", yes())
        with pytest.raises(NotPending):
            why_ask(session)

    def test_localized_override(self):
        kb = parse_kb(ONE_RULE + '\nTRANSLATE TR_IF = "IF-OVERRIDE"')
        text = why_ask(start(kb))
        assert "IF-OVERRIDE" in text

    def test_explain_single_rule(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", yes(100))
        text = explain(session)
        assert "ВИСНОВОК:" in text
        assert "only" in text
        assert "було уведено з 100% довіри" in text

    def test_explain_two_rules_final_84(self):
        session = start(parse_kb(TWO_SOURCES))
        session = answer(session, "a", yes(100))
        session = answer(session, "b", yes(100))
        text = explain(session)
        assert "ПРАВИЛО: 1" in text and "ПРАВИЛО: 2" in text
        assert "84% довіри" in text

    def test_explain_noresponse_phrasing(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", NO_RESPONSE)
        text = explain(session)
        assert "не було визначено" in text
        assert "неможливо визначити" in text

    def test_explain_requires_finished(self):
        with pytest.raises(NotFinished):
            explain(start(parse_kb(ONE_RULE)))


class TestRestart:
    def test_restart_matches_fresh_start(self):
        session = answer(start(parse_kb(ONE_RULE)), "q", yes())
        fresh = restart(session)
        assert fresh.status is Status.IN_PROGRESS
        assert fresh.pending == start(parse_kb(ONE_RULE)).pending

    def test_restart_idempotent(self):
        session = start(parse_kb(ONE_RULE))
        assert restart(restart(session)).pending == restart(session).pending

    def test_replay_reaches_same_conclusions(self):
        def run():
            session = start(demo_kb())
            session = answer(session, "poriadok", [CFValue(1, 100)])
            session = answer(session, "vidokremleni", yes())
            return session

        first, second = run(), run()
        assert first.conclusions == second.conclusions
        assert first.trace == second.trace
        assert first.status is Status.CONCLUDED


def premise_closure(kb):
    reachable = set(kb.goals)
    changed = True
    while changed:
        changed = False
        for rule in kb.rules:
            if any(c.attr in reachable for c in rule.conclusions):
                for p in rule.premises:
                    if p.attr not in reachable:
                        reachable.add(p.attr)
                        changed = True
    return reachable


@settings(max_examples=50, deadline=None)
@given(knowledge_bases(), st.randoms(use_true_random=False))
def test_relevance_no_gratuitous_questions(kb, rnd):
    """Every asked attribute sits in the premise closure of some goal."""
    closure = premise_closure(kb)
    session = start(kb)
    hops = 0
    while session.status is Status.IN_PROGRESS and hops < 50:
        q = session.pending
        assert q.attr in closure
        assert q.attr not in kb.goals
        if q.prompt_type.value == "Numeric":
            values = [CFValue(rnd.randint(-5, 5), 100)]
        else:
            values = [CFValue(rnd.choice(list(q.choices)), rnd.choice([50, 100]))]
        session = answer(session, q.attr, values)
        hops += 1
    assert session.status is not Status.IN_PROGRESS
