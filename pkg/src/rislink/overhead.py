"""SSB budget check for cells with SSB-reflecting RIS panels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple


@dataclass(frozen=True)
class RisSsbLoad:
    columns: int
    beams_per_column: int = 1  # one FFT beam per horizontal column
    reflects_ssb: bool = True

    def __post_init__(self):
        if self.columns < 1 or self.beams_per_column < 1:
            raise ValueError("columns and beams_per_column must be positive")

    @property
    def beams(self) -> int:
        return self.columns * self.beams_per_column if self.reflects_ssb else 0


@dataclass(frozen=True)
class OverheadConfig:
    ssb_budget: int = 64
    ris_list: tuple[RisSsbLoad, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.ssb_budget < 1:
            raise ValueError("ssb_budget must be positive")
        object.__setattr__(self, "ris_list", tuple(self.ris_list))


class SsbDemand(NamedTuple):
    required: int
    feasible: bool
    utilization: float


def ssb_demand(config: OverheadConfig) -> SsbDemand:
    required = sum(r.beams for r in config.ris_list)
    return SsbDemand(required, required <= config.ssb_budget, required / config.ssb_budget)
