#!/usr/bin/env python3
"""Generate a seeded worksheet and print timing/size stats per variant count."""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mathforge import worksheet


def main():
    template = worksheet.get_template("linear-algebra")
    for num_variants in (1, 5, 25, 100):
        started = time.perf_counter()
        doc = worksheet.build_worksheet(
            template,
            worksheet.WorksheetRequest("linear-algebra", num_variants=num_variants, seed=2024),
        )
        html = worksheet.render_html(doc, show_answers=True)
        elapsed = time.perf_counter() - started
        print(
            f"variants={num_variants:4d}  answers={len(doc.answer_key):4d}  "
            f"html={len(html):7d} bytes  {elapsed * 1000:7.1f} ms"
        )
    out = Path(__file__).resolve().parent.parent / "worksheet_demo.html"
    doc = worksheet.build_worksheet(
        template, worksheet.WorksheetRequest("linear-algebra", num_variants=3, seed=7)
    )
    out.write_text(worksheet.render_html(doc, show_answers=True, full_page=True), "utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
