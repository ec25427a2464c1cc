"""Services module: workload execution and the differential harness."""

from vfc_oracle.services.harness import check_instance, minimize, replay, run_verify
from vfc_oracle.services.workload import WorkloadRunner, parse_workload, run_workload

__all__ = [
    "WorkloadRunner",
    "parse_workload",
    "run_workload",
    "check_instance",
    "minimize",
    "replay",
    "run_verify",
]
