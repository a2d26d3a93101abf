"""
Hypertoric Duality Engine - Data Models
Defines enums, report records, domain exceptions and the arrangement input schema
"""

from dataclasses import dataclass, field, asdict
from typing import List, Optional, Dict, Any
from datetime import datetime
from enum import Enum

from pydantic import BaseModel, Field, StrictInt


# Exceptions

class HypertoricError(ValueError):
    """Base class for domain errors; subclasses outside InputError mean a computation failed"""


class InputError(HypertoricError):
    """The input document or options cannot be used; the CLI exits with status 2"""


class DimensionMismatchError(InputError):
    pass


class ValidationError(InputError):
    pass


class LatticeMismatchError(HypertoricError):
    pass


class DegreeOfZeroError(HypertoricError):
    pass


class LimitDivergesError(HypertoricError):
    pass


class TruncationError(HypertoricError):
    pass


class GenericityError(InputError):
    pass


class LiftInconsistentError(HypertoricError):
    pass


class LocalizationError(HypertoricError):
    pass


class SlopeNotGenericError(InputError):
    """Raised when the leading q-grades of a stable envelope entry tie"""

    def __init__(self, source: str, target: str, detail: str = ""):
        self.source = source
        self.target = target
        message = f"slope not generic at pair ({source}, {target})"
        if detail:
            message += f": {detail}"
        super().__init__(message)


# Enums

class Coordinate(Enum):
    X = "x"
    Y = "y"
    ABSENT = "absent"

    def flipped(self) -> 'Coordinate':
        if self is Coordinate.X:
            return Coordinate.Y
        if self is Coordinate.Y:
            return Coordinate.X
        return self


class Boundedness(Enum):
    STRICTLY_BOUNDED = "strictly_bounded"
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"

    @property
    def is_bounded(self) -> bool:
        return self is not Boundedness.UNBOUNDED


class WeightType(Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"


class PneqqFactorType(Enum):
    BASE_NOT_DUAL_BASE = "b_p and not b_q"  # e in b_p, e not in b_q
    BOTH_BASES = "b_p and b_q"
    NEITHER_BASE = "neither"
    DUAL_BASE_ONLY = "b_q and not b_p"


# Reports

@dataclass
class CheckResult:
    """Outcome of one mathematical check"""
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[Dict[str, Any]] = None
    informational: bool = False  # reported, never fails the run


@dataclass
class Report:
    """Shared envelope for every CLI subcommand"""
    command: str
    input_hash: str
    checks: List[CheckResult] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    calibration: Dict[str, Any] = field(default_factory=dict)
    created_at: datetime = field(default_factory=datetime.now)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, checks: List[CheckResult]):
        self.checks.extend(checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'input_hash': self.input_hash,
            'checks': [asdict(c) for c in self.checks],
            'pass': self.passed,
            'data': self.data,
            'calibration': self.calibration,
        }


@dataclass
class RunConfig:
    """Command-line options for one run"""
    command: str
    input_path: Optional[str] = None
    preset: Optional[str] = None
    q_order: int = 4
    slope: Optional[str] = None  # "a/b,c/d,..."
    slope_dual: Optional[str] = None
    zeta: Optional[List[int]] = None
    output_format: str = "human"
    seed: int = 0
    random_slopes: int = 0
    export_format: Optional[str] = None
    use_cache: bool = True
    polarization: str = "standard"  # or "opposite"
    cache_action: Optional[str] = None

    def __post_init__(self):
        if self.q_order < 1:
            raise InputError(f"q_order must be at least 1, got {self.q_order}")


# Arrangement input document

class ArrangementInput(BaseModel):
    """UTF-8 JSON input describing one hypertoric variety"""
    E: List[str] = Field(description="Ordered labels of the coordinate index set")
    partial: List[List[StrictInt]] = Field(description="n x k integer matrix of the inclusion of G")
    beta: List[List[StrictInt]] = Field(description="(n-k) x n integer matrix of the projection to A")
    eta: List[StrictInt] = Field(description="Character of G used for the GIT quotient")
    zeta: List[StrictInt] = Field(description="Cocharacter of A chosen as the chamber")
    name: Optional[str] = Field(default=None, description="Human readable arrangement name")

