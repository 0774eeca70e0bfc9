from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class EpParams:
    """Ewens-Pitman parameters in the regime 0 < alpha < 1, theta > -alpha."""

    alpha: float
    theta: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not self.theta > -self.alpha:
            raise DomainError(f"theta must exceed -alpha, got theta={self.theta!r}")
