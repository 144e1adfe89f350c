"""Solver verdicts that are values, not exceptions."""

from __future__ import annotations

import enum


class Verdict(enum.Enum):
    INFEASIBLE = "infeasible"
    BUDGET_EXCEEDED = "budget_exceeded"

    def __repr__(self) -> str:  # nicer in test output
        return f"Verdict.{self.name}"
