"""
Process Service for the Lattice Parameter Tuner
Runs one external command under a wall-clock deadline and tears down its whole process tree
"""
import logging
import math
import os
import signal
import subprocess
import time
from dataclasses import dataclass
from typing import Dict, List, Optional

import psutil

from config import DEFAULT_TIMEOUT_GRACE_SECONDS

logger = logging.getLogger(__name__)


@dataclass
class ProcessResult:
    """What one command run produced"""
    argv: List[str]
    returncode: Optional[int] = None
    stdout: str = ""
    stderr: str = ""
    wall_time: float = 0.0
    timed_out: bool = False
    error: str = ""

    @property
    def launched(self) -> bool:
        return not self.error

    @property
    def output(self) -> str:
        """stdout followed by stderr; analyzers interleave diagnostics on both"""
        if self.stdout and self.stderr and not self.stdout.endswith("\n"):
            return self.stdout + "\n" + self.stderr
        return self.stdout + self.stderr


def _process_tree(pid: int) -> List[psutil.Process]:
    try:
        return psutil.Process(pid).children(recursive=True)
    except (psutil.NoSuchProcess, psutil.AccessDenied):
        return []


def _signal_group(proc: subprocess.Popen, sig: int):
    try:
        os.killpg(os.getpgid(proc.pid), sig)
    except (OSError, ProcessLookupError) as e:
        logger.debug(f"Process group signal {sig} failed, signalling pid {proc.pid}: {e}")
        try:
            proc.send_signal(sig)
        except OSError:
            pass


def _kill_stragglers(snapshot: List[psutil.Process]):
    """Kill descendants that left the process group (setsid, double fork)"""
    alive = []
    for child in snapshot:
        try:
            if child.is_running() and child.status() != psutil.STATUS_ZOMBIE:
                child.kill()
                alive.append(child)
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            continue
    if alive:
        psutil.wait_procs(alive, timeout=1.0)


def _group_members(pgid: int) -> List[psutil.Process]:
    """Live processes in process group pgid; the group outlives its leader"""
    members = []
    for candidate in psutil.process_iter():
        try:
            if os.getpgid(candidate.pid) == pgid:
                members.append(candidate)
        except (OSError, psutil.Error):
            continue
    return members


def _reap_group(pgid: int):
    """Kill whatever a finished analyzer left running in its session"""
    members = _group_members(pgid)
    if members:
        logger.debug(f"Killing {len(members)} leftover process(es) of group {pgid}")
        _kill_stragglers(members)


class ProcessService:
    """Service for running analyzer processes"""

    @staticmethod
    def run(
        argv: List[str],
        timeout: float,
        grace: float = DEFAULT_TIMEOUT_GRACE_SECONDS,
        cwd: Optional[str] = None,
        env: Optional[Dict[str, str]] = None,
    ) -> ProcessResult:
        """
        Run argv with a wall-clock deadline

        At the deadline the process group gets SIGTERM; whatever is still
        alive after grace seconds gets SIGKILL. Processes left in the group
        after a normal exit are killed too. Never raises: launch errors
        are reported in ProcessResult.error.

        Args:
            argv: Command and arguments, no shell involved
            timeout: Seconds before termination starts
            grace: Seconds between SIGTERM and SIGKILL
            cwd: Working directory
            env: Extra environment variables on top of os.environ
        """
        result = ProcessResult(argv=list(argv))
        full_env = dict(os.environ)
        if env:
            full_env.update(env)

        start = time.monotonic()
        try:
            proc = subprocess.Popen(
                argv,
                cwd=cwd,
                env=full_env,
                stdin=subprocess.DEVNULL,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                errors="replace",
                start_new_session=True,
            )
        except (OSError, ValueError) as e:
            logger.error(f"Could not launch {argv[0] if argv else '<empty>'}: {e}")
            result.error = str(e)
            result.wall_time = time.monotonic() - start
            return result

        try:
            limit = None if timeout is None or math.isinf(timeout) else max(timeout, 0.0)
            result.stdout, result.stderr = proc.communicate(timeout=limit)
        except subprocess.TimeoutExpired:
            result.timed_out = True
            snapshot = _process_tree(proc.pid)
            _signal_group(proc, signal.SIGTERM)
            try:
                result.stdout, result.stderr = proc.communicate(timeout=max(grace, 0.0))
            except subprocess.TimeoutExpired:
                logger.warning(f"pid {proc.pid} ignored SIGTERM for {grace}s, killing")
                _signal_group(proc, signal.SIGKILL)
                _kill_stragglers(snapshot)
                try:
                    result.stdout, result.stderr = proc.communicate(timeout=1.0)
                except subprocess.TimeoutExpired:
                    # A descendant outside the tree still holds the pipes
                    proc.kill()
                    proc.wait()
            _kill_stragglers(snapshot)
        except Exception as e:
            logger.error(f"Error while running {argv[0]}: {e}")
            result.error = str(e)
            _signal_group(proc, signal.SIGKILL)
            proc.wait()
        finally:
            result.wall_time = time.monotonic() - start

        # Background children keep the group alive after the leader exits
        _reap_group(proc.pid)
        result.returncode = proc.returncode
        result.stdout = result.stdout or ""
        result.stderr = result.stderr or ""
        return result
