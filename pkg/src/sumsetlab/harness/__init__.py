"""Instance generation, suite orchestration and witness persistence."""

from .generators import DEFAULT_BUDGET, InstanceGenerator, exhaustive_size, gen_instances, group_catalog
from .runner import ReplayResult, SuiteReport, Witness, log_witness, replay, run_suite, search_tight
from .suites import SUITES, Suite, get_suite

__all__ = [
    "DEFAULT_BUDGET",
    "InstanceGenerator",
    "exhaustive_size",
    "gen_instances",
    "group_catalog",
    "ReplayResult",
    "SuiteReport",
    "Witness",
    "log_witness",
    "replay",
    "run_suite",
    "search_tight",
    "SUITES",
    "Suite",
    "get_suite",
]
