"""Specification of the glassy perturbation applied to state coefficients."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .sampling import Family

__all__ = ["DisorderSpec", "Target"]


class Target(enum.Enum):
    """Which coefficient parts the disorder replaces."""

    REAL_PARTS = "real"
    IMAG_PARTS = "imag"
    BOTH_PARTS = "both"


@dataclass(frozen=True)
class DisorderSpec:
    """Family, strength and target of one quenched-disorder configuration.

    ``siqr`` is the semi-interquartile range gamma common to all families;
    ``configs_per_state`` is how many disordered copies are averaged per
    base state.
    """

    family: Family
    siqr: float = 0.5
    target: Target = Target.REAL_PARTS
    configs_per_state: int = 100

    def __post_init__(self) -> None:
        if not self.siqr > 0:
            raise ValueError("siqr must be > 0")
        if self.configs_per_state < 1:
            raise ValueError("configs_per_state must be >= 1")
