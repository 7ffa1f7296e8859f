"""Command-line front end: worksheet generation, KB tools, consultations.

Exit codes: 0 success, 1 runtime error (message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .. import esengine, eskb, worksheet
from ..esengine import NO_RESPONSE, CFValue, Session, Status
from ..eskb import PromptType


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mathforge",
        description="Worksheet generator and rule-based consultation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a worksheet from a template")
    gen.add_argument("template", help="template id, e.g. linear-algebra")
    gen.add_argument("-n", "--variants", type=int, default=1, dest="num_variants")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--answers", action="store_true", help="append the answer key")
    gen.add_argument("--format", choices=["html", "latex"], default="html")
    gen.add_argument("--full-page", action="store_true", help="wrap HTML in a full page")
    gen.add_argument("-o", "--output", help="write to file instead of stdout")

    kb = sub.add_parser("kb", help="knowledge-base tools")
    kb_sub = kb.add_subparsers(dest="kb_command", required=True)
    kb_validate = kb_sub.add_parser("validate", help="check a .kb file")
    kb_validate.add_argument("file")
    kb_compile = kb_sub.add_parser("compile", help="compile a decision table to rules")
    kb_compile.add_argument("table", help="decision table (.dt JSON)")
    kb_compile.add_argument("-o", "--output", required=True, help="output .kb path")

    consult = sub.add_parser("consult", help="interactive terminal consultation")
    consult.add_argument("file", help=".kb file to consult")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--kb-dir", help="directory of extra .kb files")
    serve.add_argument("--static-dir", help="directory with the web UI bundle")

    return parser


def cmd_gen(args) -> int:
    template = worksheet.get_template(args.template)
    request = worksheet.WorksheetRequest(
        template_id=args.template,
        num_variants=args.num_variants,
        seed=args.seed,
        show_answers=args.answers,
    )
    doc = worksheet.build_worksheet(template, request)
    if args.format == "latex":
        text = worksheet.render_latex(doc, args.answers)
    else:
        text = worksheet.render_html(doc, args.answers, full_page=args.full_page)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    return 0


def cmd_kb_validate(args) -> int:
    kb = eskb.parse_kb(Path(args.file).read_bytes())
    diagnostics = eskb.validate_kb(kb)
    if not diagnostics:
        print(f"OK: {args.file}")
        return 0
    for diag in diagnostics:
        print(f"{diag.code}: {diag.message}", file=sys.stderr)
    return 1


def cmd_kb_compile(args) -> int:
    table = eskb.load_decision_table(Path(args.table).read_bytes())
    kb = eskb.table_to_rules(table)
    Path(args.output).write_text(eskb.serialize_kb(kb), encoding="utf-8")
    print(f"compiled {len(kb.rules)} rules -> {args.output}")
    return 0


def _read_choice(session: Session, prompt: str, limit: int) -> object:
    """One line of input: 1..limit, 0/empty for no answer, w for why."""
    while True:
        line = input(prompt).strip()
        if line in ("", "0"):
            return NO_RESPONSE
        if line.lower() in ("w", "?"):
            print(esengine.why_ask(session))
            continue
        if line.isdigit() and 1 <= int(line) <= limit:
            return int(line)
        print(f"1-{limit}, 0 — {session.tr('TR_NORESP')}, w — {session.tr('B_WHYASK')}")


def _read_confidence(session: Session) -> int:
    print(session.tr("TR_HOWCONF"))
    print(f"  1) {session.tr('TR_LOWCONF')}")
    print(f"  2) {session.tr('TR_HICONF')}")
    while True:
        line = input("> ").strip()
        if line in ("", "2"):
            return 100
        if line == "1":
            return 50
        if line.isdigit() and 0 <= int(line) <= 100:
            return int(line)
        print("1 / 2 / 0-100")


def _ask_terminal(session: Session) -> object:
    question = session.pending
    print()
    print(question.prompt)
    if question.prompt_type is PromptType.NUMERIC:
        from fractions import Fraction

        while True:
            line = input("> ").strip()
            if line == "":  # "0" is a legitimate number here
                return NO_RESPONSE
            if line.lower() in ("w", "?"):
                print(esengine.why_ask(session))
                continue
            try:
                Fraction(line)
            except (ValueError, ZeroDivisionError):
                print("число, напр. 2 або 5/2")
                continue
            return [CFValue(line, _read_confidence(session))]
    labels = question.choices
    if question.prompt_type is PromptType.YESNO:
        labels = (session.tr("TR_YES"), session.tr("TR_NO"))
    for index, label in enumerate(labels, start=1):
        print(f"  {index}) {label}")
    print(f"  0) {session.tr('TR_NORESP')}")
    if question.prompt_type is PromptType.ALLCHOICE:
        while True:
            line = input("> ").strip()
            if line in ("", "0"):
                return NO_RESPONSE
            if line.lower() in ("w", "?"):
                print(esengine.why_ask(session))
                continue
            parts = [p.strip() for p in line.split(",") if p.strip()]
            if parts and all(p.isdigit() and 1 <= int(p) <= len(labels) for p in parts):
                cf = _read_confidence(session)
                return [CFValue(question.choices[int(p) - 1], cf) for p in dict.fromkeys(parts)]
            print(f"номери через кому, 1-{len(labels)}")
    picked = _read_choice(session, "> ", len(labels))
    if picked is NO_RESPONSE:
        return NO_RESPONSE
    return [CFValue(question.choices[picked - 1], _read_confidence(session))]


def cmd_consult(args) -> int:
    kb = eskb.parse_kb(Path(args.file).read_bytes())
    session = esengine.start(kb)
    if kb.title:
        print(f"{session.tr('TR_KB')} {kb.title}")
    while session.status is Status.IN_PROGRESS:
        response = _ask_terminal(session)
        session = esengine.answer(session, session.pending.attr, response)
    print()
    print(esengine.explain(session))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .app import create_app

    port = int(os.environ.get("MATHFORGE_PORT", args.port))
    app = create_app(kb_dir=args.kb_dir, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "kb":
            if args.kb_command == "validate":
                return cmd_kb_validate(args)
            return cmd_kb_compile(args)
        if args.command == "consult":
            return cmd_consult(args)
        return cmd_serve(args)
    except (
        worksheet.TemplateError,
        eskb.KbError,
        esengine.EngineError,
        OSError,
    ) as err:
        print(f"помилка: {err}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print(file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
