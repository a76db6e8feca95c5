"""
Deadline-bound process runs
"""
import math

from services.process_service import ProcessService
from tests.conftest import pid_alive


def test_captures_output_and_exit_code():
    result = ProcessService.run(["sh", "-c", "echo out; echo err >&2; exit 4"], timeout=10.0)
    assert result.launched
    assert not result.timed_out
    assert result.returncode == 4
    assert result.stdout == "out\n"
    assert result.stderr == "err\n"
    assert result.output == "out\nerr\n"


def test_output_joins_unterminated_stdout():
    result = ProcessService.run(["sh", "-c", "printf out; echo err >&2"], timeout=10.0)
    assert result.output == "out\nerr\n"


def test_infinite_timeout():
    result = ProcessService.run(["true"], timeout=math.inf)
    assert result.returncode == 0
    assert not result.timed_out


def test_cwd_and_env(tmp_path):
    result = ProcessService.run(["sh", "-c", 'pwd; echo "$EXTRA"'], timeout=10.0, cwd=str(tmp_path), env={"EXTRA": "yes"})
    assert result.stdout.splitlines() == [str(tmp_path), "yes"]


def test_launch_failure_is_reported(tmp_path):
    result = ProcessService.run([str(tmp_path / "missing")], timeout=10.0)
    assert not result.launched
    assert result.error
    assert result.returncode is None


def test_timeout_terminates_the_group(tmp_path):
    pidfile = tmp_path / "child.pid"
    result = ProcessService.run(["sh", "-c", f'sleep 30 & echo $! > {pidfile}; wait'], timeout=0.5, grace=0.5)
    assert result.timed_out
    assert result.wall_time < 5.0
    assert not pid_alive(int(pidfile.read_text()))


def test_sigterm_ignoring_tree_is_killed(tmp_path):
    pidfile = tmp_path / "child.pid"
    script = f"trap '' TERM; sleep 30 & echo $! > {pidfile}; wait"
    result = ProcessService.run(["sh", "-c", script], timeout=0.5, grace=0.5)
    assert result.timed_out
    assert result.wall_time < 6.0
    assert not pid_alive(int(pidfile.read_text()))
