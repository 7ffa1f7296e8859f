#!/usr/bin/env python3
"""Record real API responses into frontend/test/fixtures/ for the UI stub."""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from mathforge import worksheet
from mathforge.service.app import create_app
from mathforge.taskgen import GeneratorParams

FIXTURES = ROOT / "frontend" / "test" / "fixtures"


def dump(name: str, payload):
    FIXTURES.mkdir(parents=True, exist_ok=True)
    path = FIXTURES / f"{name}.json"
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", "utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


def main():
    with TestClient(create_app()) as client:
        dump("templates", client.get("/api/templates").json())

        request = {"template": "linear-algebra", "num_variants": 2, "seed": 7}
        dump(
            "worksheet_with_answers",
            client.post("/api/worksheets", json={**request, "show_answers": True}).json(),
        )
        dump(
            "worksheet_no_answers",
            client.post("/api/worksheets", json={**request, "show_answers": False}).json(),
        )

        state = client.post("/api/consultations", json={"kb_id": "diffeq"}).json()
        sid = state["session_id"]
        dump("consult_create", state)
        dump("consult_why_first", client.get(f"/api/consultations/{sid}/why").json())
        answers = [
            ("consult_step1", {"values": [{"value": 1, "cf": 100}]}),
            ("consult_step2", {"values": [{"value": "no", "cf": 100}]}),
            ("consult_step3", {"values": [{"value": "yes", "cf": 100}]}),
            ("consult_step4", {"values": [{"value": "no", "cf": 100}]}),
        ]
        for name, body in answers:
            dump(name, client.post(f"/api/consultations/{sid}/answers", json=body).json())
        dump("consult_explain", client.get(f"/api/consultations/{sid}/explain").json())
        dump("consult_restart", client.post(f"/api/consultations/{sid}/restart").json())
        why_409 = client.get(f"/api/consultations/{sid}/why")
        # recorded while concluded (the restart above re-opened it; redo)
        client.post(f"/api/consultations/{sid}/answers", json={"values": [{"value": 2, "cf": 100}]})
        why_409 = client.get(f"/api/consultations/{sid}/why")
        dump("consult_why_409", {"status": why_409.status_code, "body": why_409.json()})

    # the 422 shape, recorded against a degenerate template
    degenerate = worksheet.WorksheetTemplate(
        id="degenerate",
        title="degenerate",
        task_kinds=("inverse",),
        params=GeneratorParams(entry_lo=0, entry_hi=0, max_attempts=3),
    )
    original = worksheet.get_template
    worksheet.get_template = lambda _id: degenerate
    try:
        with TestClient(create_app()) as client:
            response = client.post(
                "/api/worksheets", json={"template": "degenerate", "num_variants": 1}
            )
            dump("worksheet_422", {"status": response.status_code, "body": response.json()})
    finally:
        worksheet.get_template = original


if __name__ == "__main__":
    main()
