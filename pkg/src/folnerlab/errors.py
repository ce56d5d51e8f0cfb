"""Shared exception types."""


class GraphFormatError(ValueError):
    """Raised when a graph file violates the on-disk format."""


class BudgetExceededError(RuntimeError):
    """Raised when a construction would exceed a size budget.

    Carries enough context to tell the user which stage blew up and how far
    it got before the guard fired.
    """

    def __init__(self, stage: str, reached: int, budget: int):
        self.stage = stage
        self.reached = reached
        self.budget = budget
        super().__init__(
            f"{stage}: size {reached} exceeds budget {budget}"
        )


class NotGeneratingError(ValueError):
    """Raised when a purported generating set fails the generation checks."""


class ConfigError(ValueError):
    """Raised when an experiment config is malformed; names the bad field."""
