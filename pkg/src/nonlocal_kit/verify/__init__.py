"""Verification suites, their report model and the ``nlk`` command line."""

from .report import CaseResult, SuiteReport
from .suites import SUITES, run_suite

__all__ = ["CaseResult", "SuiteReport", "SUITES", "run_suite"]
