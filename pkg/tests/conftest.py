"""
Shared fixtures: small profiles, the three-alarm simulator model and stub analyzer scripts
"""
import stat
from pathlib import Path

import psutil
import pytest

from analyzers.sim_analyzer import SimAlarm, SimModel
from core.lattice import ParamSpec, ParamType, Setting, make_profile

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def int_profile():
    """Two integer parameters"""
    return make_profile([
        ParamSpec("slevel", ParamType.integer()),
        ParamSpec("loop-unroll", ParamType.integer()),
    ])


@pytest.fixture
def mixed_profile():
    """One parameter of each kind"""
    return make_profile([
        ParamSpec("slevel", ParamType.integer()),
        ParamSpec("octagon-through-calls", ParamType.boolean()),
        ParamSpec("equality-through-calls", ParamType.ordered_enum(["none", "formals"])),
        ParamSpec("domains", ParamType.string_set(
            ["cvalue", "octagon", "equality", "gauges", "symbolic-locations"]
        )),
    ])


def three_alarm_model(profile, base_cost=1.0, weights=(0.0, 0.0), failure_cap=None) -> SimModel:
    """a1 needs (12,14), a2 needs (18,9), a3 needs (12,9)"""
    return SimModel(
        profile,
        (
            SimAlarm("a1", (Setting.ints(12, 14),)),
            SimAlarm("a2", (Setting.ints(18, 9),)),
            SimAlarm("a3", (Setting.ints(12, 9),)),
        ),
        base_cost=base_cost,
        cost_weights=weights,
        failure_cap=failure_cap,
    )


@pytest.fixture
def worked_model(int_profile):
    return three_alarm_model(int_profile)


@pytest.fixture
def stub_script(tmp_path):
    """Write an executable /bin/sh script and return its path"""
    def write(name: str, body: str) -> str:
        path = tmp_path / name
        path.write_text("#!/bin/sh\n" + body)
        path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
        return str(path)
    return write


@pytest.fixture(autouse=True)
def isolated_tmpdir(tmp_path, monkeypatch):
    """Analyzer working directories go under the test's tmp_path"""
    work = tmp_path / "work"
    work.mkdir()
    monkeypatch.setattr("config.TEMP_DIR", str(work))
    monkeypatch.setenv("TUNER_TMPDIR", str(work))
    return work


def pid_alive(pid: int) -> bool:
    """Running and not a zombie"""
    try:
        return psutil.Process(pid).status() != psutil.STATUS_ZOMBIE
    except psutil.NoSuchProcess:
        return False
