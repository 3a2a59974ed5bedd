"""Shared exception types for certified evaluation and ordering."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .enclosure import Enclosure

__all__ = ["DivergentError", "BudgetExceededError", "UnresolvedComparisonError"]


class DivergentError(ValueError):
    """The requested sum diverges (inadmissible index or exponent below 2)."""


class BudgetExceededError(RuntimeError):
    """The precision budget ran out before reaching the target width.

    ``partial`` carries the narrowest enclosure achieved, when one exists.
    """

    def __init__(self, message: str, partial: "Optional[Enclosure]" = None):
        super().__init__(message)
        self.partial = partial


class UnresolvedComparisonError(RuntimeError):
    """Two values could not be separated within budget; names both sides."""

    def __init__(self, message: str, left: object = None, right: object = None):
        super().__init__(message)
        self.left = left
        self.right = right
