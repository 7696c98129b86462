"""
Size caps shared by the enumeration-based algorithms
"""

from dataclasses import dataclass

from .errors import CapExceededError


@dataclass
class ComputeLimits:
    """User-configurable caps for element scans and searches"""
    decompose_max_order: int = 4096            # idempotent scan
    ideal_enumeration_max_order: int = 256     # any ideal enumeration
    complete_ideal_enumeration_max_order: int = 64  # joins run to a fixpoint
    ideal_join_depth: int = 3                  # join rounds above the complete cap
    iso_search_max_assignments: int = 200_000
    exhaustive_iso_max_target: int = 16
    paranoid: bool = False                     # cross-check all epi conditions

    def require(self, what: str, size: int, cap: int) -> None:
        """Raise CapExceededError when size is above cap"""
        if size > cap:
            raise CapExceededError(what, size, cap)


DEFAULT_LIMITS = ComputeLimits()
