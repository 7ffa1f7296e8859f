#!/usr/bin/env python3
"""Replay every answer combination of the demo KB and tabulate the verdicts."""

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mathforge import esengine, eskb
from mathforge.esengine import NO_RESPONSE, CFValue, Status

KB_PATH = Path(__file__).resolve().parent.parent / "src/mathforge/data/kb/diffeq.kb"


def drive(session, answers):
    """Feed scripted answers until the session finishes or the script runs out."""
    script = dict(answers)
    while session.status is Status.IN_PROGRESS:
        attr = session.pending.attr
        if attr not in script:
            return session
        value = script[attr]
        response = NO_RESPONSE if value is None else [CFValue(value, 100)]
        session = esengine.answer(session, attr, response)
    return session


def main():
    kb = eskb.parse_kb(KB_PATH.read_bytes())
    yn = ["yes", "no", None]
    rows = []
    for order in (1, 2):
        for v, o, l in itertools.product(yn, yn, yn):
            answers = {
                "poriadok": order,
                "vidokremleni": v,
                "odnoridna": o,
                "liniine": l,
            }
            session = drive(esengine.start(kb), answers)
            accepted = [c for c in session.conclusions if c.accepted]
            verdict = ", ".join(f"{c.value} ({c.cf}%)" for c in accepted) or "—"
            rows.append((order, v, o, l, session.status.value, verdict))
    seen = set()
    for row in rows:
        if row not in seen:
            seen.add(row)
            order, v, o, l, status, verdict = row
            print(f"poriadok={order} vidokr={v or '-':3} odnor={o or '-':3} "
                  f"lin={l or '-':3} -> {status:15} {verdict}")


if __name__ == "__main__":
    main()
