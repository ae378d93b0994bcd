"""
Pruebas de la serializacion JSON de bases, transcripciones y reportes
"""

import json

import pytest

from src.harness.runner import run_demo
from src.harness.serialization import (
    database_from_json, database_to_json, report_from_json, report_to_json, reports_to_json,
    transcript_from_json, transcript_to_json,
)
from src.models.errors import ParseError
from src.services.audit import PrivacyAuditor


def test_database_json_format(demo_db):
    payload = json.loads(database_to_json(demo_db))
    assert payload["lambda"] == 3
    assert set(payload["files"]) == {"1,1", "1,2", "2,1", "2,2"}
    assert database_from_json(database_to_json(demo_db)) == demo_db


def test_transcript_round_trip():
    transcript = run_demo(seed=4)
    restored = transcript_from_json(transcript_to_json(transcript))
    assert restored == transcript
    assert json.loads(transcript_to_json(transcript))["metrics"]["R"] == "1/4"


def test_transcript_without_timing():
    payload = json.loads(transcript_to_json(run_demo(seed=4), include_timing=False))
    assert "wall_time" not in payload["metrics"]
    assert transcript_from_json(json.dumps(payload)).metrics.wall_time is None


def test_report_round_trip(demo_ctx):
    report = PrivacyAuditor(demo_ctx).audit_points()
    assert report_from_json(report_to_json(report)) == report
    assert len(json.loads(reports_to_json([report, report]))) == 2


def test_truncated_json():
    """Prueba que un JSON cortado da ParseError con linea:columna"""
    text = transcript_to_json(run_demo(seed=4))
    with pytest.raises(ParseError) as info:
        transcript_from_json(text[: len(text) // 2])
    assert info.value.location.startswith("1:")


def test_schema_violation_location():
    with pytest.raises(ParseError) as info:
        database_from_json('{"q": 17, "M": 1, "F": [1], "lambda": 1, "K": 1, "files": {"1": [["x"]]}}')
    assert info.value.location.startswith("files")


def test_bad_file_key():
    with pytest.raises(ParseError):
        database_from_json('{"q": 17, "M": 1, "F": [1], "lambda": 1, "K": 1, "files": {"a": [[1]]}}')


def test_database_must_be_object():
    with pytest.raises(ParseError):
        database_from_json("[1, 2]")
