"""
Incremental refining of a distribution from one round of analysis results

The base moves up to the join, over every known alarm, of the meet of the
settings that eliminated it. The delta is rescaled by
eta = (2 * completed + 1) / sampled, shrinking exploration when most
analyses failed and widening it when most completed.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Sequence, Tuple

from core.distributions import DeltaDist, scale
from core.errors import ContractViolation
from core.lattice import Setting, meet_all, setting_join
from core.outcome import AlarmId, AnalysisOutcome

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RefineInput:
    p_list: Sequence[Setting]
    r_list: Sequence[AnalysisOutcome]
    a_uni: FrozenSet[AlarmId]
    base: Setting
    delta: Sequence[DeltaDist] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "p_list", tuple(self.p_list))
        object.__setattr__(self, "r_list", tuple(self.r_list))
        object.__setattr__(self, "a_uni", frozenset(self.a_uni))
        object.__setattr__(self, "delta", tuple(self.delta))

        if not self.p_list:
            raise ContractViolation("refinement needs at least one sampled setting")
        if any(not r.is_completed for r in self.r_list):
            raise ContractViolation("r_list may only hold completed outcomes")

        remaining = list(self.p_list)
        for r in self.r_list:
            if r.setting not in remaining:
                raise ContractViolation(f"completed setting {r.setting} was never sampled")
            remaining.remove(r.setting)


def eliminator_meet(alarm: AlarmId, r_list: Sequence[AnalysisOutcome]):
    """Meet of all completed settings that did not emit alarm, or None if none did"""
    eliminators = [r.setting for r in r_list if alarm not in r.alarms]
    if not eliminators:
        return None
    return meet_all(eliminators)


def refine_base(refine_in: RefineInput) -> Setting:
    result = refine_in.base
    # Sorted so the join order (and any logging) is reproducible
    for alarm in sorted(refine_in.a_uni):
        p_a = eliminator_meet(alarm, refine_in.r_list)
        if p_a is None:
            continue
        result = setting_join(result, p_a)
    return result


def eta_scale(num_completed: int, num_sampled: int) -> float:
    if num_sampled <= 0:
        raise ContractViolation(f"number of sampled settings must be positive, got {num_sampled}")
    if not 0 <= num_completed <= num_sampled:
        raise ContractViolation(f"completed count {num_completed} outside [0, {num_sampled}]")
    return (2 * num_completed + 1) / num_sampled


def refine(refine_in: RefineInput) -> Tuple[Setting, List[DeltaDist]]:
    """Return the refined (base, delta) pair"""
    new_base = refine_base(refine_in)
    eta = eta_scale(len(refine_in.r_list), len(refine_in.p_list))
    new_delta = [scale(eta, d) for d in refine_in.delta]

    logger.debug(
        f"refined base {refine_in.base} -> {new_base} "
        f"({len(refine_in.r_list)}/{len(refine_in.p_list)} completed, eta={eta:.4f})"
    )
    return new_base, new_delta
