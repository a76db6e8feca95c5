"""
JSONL report sink
"""
import json

from services.report_service import BaselineRecord, FinalRecord, ReportService


def baseline_record(**overrides):
    data = {"setting": {"slevel": 0}, "status": "completed", "a_uni_size": 2, "time": 1.5}
    data.update(overrides)
    return BaselineRecord(**data)


def final_record():
    return FinalRecord(
        final_setting={"slevel": 18},
        argv=["frama-c", "-eva-slevel", "18"],
        final_alarm_count=0,
        a_uni_size=2,
        rounds=1,
        total_wall_time=3.0,
        termination="refine_count_reached",
    )


def test_emit_and_read_back(tmp_path):
    path = tmp_path / "out" / "report.jsonl"
    report = ReportService(path)
    assert report.emit(baseline_record())
    assert report.emit(final_record())

    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["record_type"] == "baseline"

    first, last = ReportService.read_records(path)
    assert first.time == 1.5 and first.timestamp is not None
    assert last.argv == ["frama-c", "-eva-slevel", "18"]
    assert last.schema_version == 1


def test_no_timestamps_is_byte_stable(tmp_path):
    outputs = []
    for name in ("a.jsonl", "b.jsonl"):
        report = ReportService(tmp_path / name, timestamps=False)
        report.emit(baseline_record())
        report.emit(final_record())
        outputs.append((tmp_path / name).read_text())
    assert outputs[0] == outputs[1]
    assert "timestamp" not in outputs[0]


def test_memory_only_sink():
    report = ReportService()
    assert report.emit(baseline_record(status="failed", reason="crash", a_uni_size=0))
    assert report.records[0]["reason"] == "crash"


def test_existing_report_is_truncated(tmp_path):
    path = tmp_path / "report.jsonl"
    path.write_text("stale\n")
    ReportService(path).emit(final_record())
    assert len(path.read_text().splitlines()) == 1


def test_write_failure_is_not_fatal(tmp_path):
    path = tmp_path / "gone" / "report.jsonl"
    report = ReportService(path)
    path.unlink()
    path.parent.rmdir()
    assert report.emit(baseline_record()) is False
    assert len(report.records) == 1


def test_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "report.jsonl"
    ReportService(path, timestamps=False).emit(final_record())
    path.write_text(path.read_text() + "\n\n")
    assert len(ReportService.read_records(path)) == 1
