"""Core domain models for setlat: settings, verdicts and reports."""

from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Point = Tuple[float, ...]


class Tolerances(BaseModel):
    """Numeric tolerances shared by the kernel and the checkers."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(default=1e-9, gt=0, description="incidence tolerance")
    tau_h: float = Field(default=1e-6, gt=0, description="set comparison tolerance")
    tau_strict: float = Field(default=1e-7, gt=0, description="strict inequality ties")
    eps_lsc: float = Field(default=1e-6, gt=0, description="lower semicontinuity slack")
    guard_tol: float = Field(default=1e-12, gt=0, description="guard comparisons")


class DiniConfig(BaseModel):
    """Discretization of lim inf over t down to 0 by t_k = t0 * rho^k.

    With ``extrapolate`` the O(t) term is eliminated between neighbouring
    quotients before the tail minimum is taken, so exact zeros such as the
    apex of -x^2 come out as 0. Without it the estimate is the raw minimum
    of the last ``window`` quotients.
    """

    model_config = ConfigDict(frozen=True)

    t0: float = Field(default=0.1, gt=0)
    rho: float = Field(default=0.5, gt=0, lt=1)
    K: int = Field(default=24, ge=2)
    window: int = Field(default=6, ge=1)
    stability_tol: float = Field(default=1e-4, gt=0)
    extrapolate: bool = True
    residual_depth: int = Field(default=10, ge=2)

    @model_validator(mode="after")
    def validate_window(self) -> "DiniConfig":
        """The tail window must be shorter than the step sequence."""
        if self.window >= self.K:
            raise ValueError("K must exceed window")
        return self

    def steps(self) -> List[float]:
        """The geometric step sequence t_0 > t_1 > ... > t_{K-1}."""
        return [self.t0 * self.rho**k for k in range(self.K)]

    def residual_steps(self) -> List[float]:
        """Leading steps used by set residuals.

        Set residuals are compared at absolute tolerance, so steps whose
        second-order terms drop below it would hide an empty residual.
        """
        return self.steps()[:self.residual_depth]


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_DINI = DiniConfig()


class Verdict(str, Enum):
    """Outcome of a check, ordered from best to worst."""

    PASS = "PASS"
    CONDITIONAL_PASS = "CONDITIONAL_PASS"
    LOW_CONFIDENCE = "LOW_CONFIDENCE"
    INCONSISTENT_NUMERICS = "INCONSISTENT_NUMERICS"
    FAIL = "FAIL"

    @property
    def severity(self) -> int:
        return list(Verdict).index(self)

    @classmethod
    def worst(cls, verdicts: Iterable["Verdict"]) -> "Verdict":
        """Worst verdict of a collection; PASS for an empty one."""
        return max(verdicts, key=lambda v: v.severity, default=cls.PASS)


class DiniMode(str, Enum):
    SCALAR = "SCALAR"
    ZSTAR = "ZSTAR"
    RESIDUAL = "RESIDUAL"


class CheckMode(str, Enum):
    SUFFICIENT = "SUFFICIENT"
    NECESSARY = "NECESSARY"


class ConvexityProperty(str, Enum):
    QUASI = "QUASI"
    SEMISTRICT_QUASI = "SEMISTRICT_QUASI"
    PSEUDO = "PSEUDO"
    QCONVEX_AT_POINT = "QCONVEX_AT_POINT"
    SET_QUASI = "SET_QUASI"
    LSC = "LSC"
    STAR_SHAPED = "STAR_SHAPED"
    STRICT_MONOTONE = "STRICT_MONOTONE"
    LEVEL_INTERVALS = "LEVEL_INTERVALS"


class SegmentShape(str, Enum):
    DEC_CONST_INC = "DEC_CONST_INC"
    CONSTANT = "CONSTANT"
    MONOTONE_DEC = "MONOTONE_DEC"
    MONOTONE_INC = "MONOTONE_INC"
    IRREGULAR = "IRREGULAR"


class AssertedProperty(str, Enum):
    """Hypotheses a problem file may assert but the checkers cannot verify."""

    UNIFORM_LSC = "uniform_lsc"
    RADIAL_LSC = "radial_lsc"
    RADIAL_SEMISTRICT_QUASICONVEX = "radial_semistrict_quasiconvex"
    RADIAL_PSEUDOCONVEX = "radial_pseudoconvex"
    QCONVEX_AT_POINT = "qconvex_at_point"


class SegmentProfile(BaseModel):
    """Decrease / constant / increase split of a function on [0, 1]."""

    model_config = ConfigDict(frozen=True)

    s0: float = Field(ge=0, le=1)
    t0: float = Field(ge=0, le=1)
    inf_value: float
    shape: SegmentShape
    grid_points: int = 0

    @model_validator(mode="after")
    def validate_order(self) -> "SegmentProfile":
        if self.s0 > self.t0:
            raise ValueError("s0 must not exceed t0")
        return self


class ConvexityVerdict(BaseModel):
    """Whether a generalized convexity property held on the sampled grid."""

    model_config = ConfigDict(frozen=True)

    property: ConvexityProperty
    holds: bool
    witness: Optional[Dict[str, Any]] = None
    grid: str = ""
    samples: int = 0

    @model_validator(mode="after")
    def validate_witness(self) -> "ConvexityVerdict":
        """A failed property must carry its counterexample."""
        if not self.holds and not self.witness:
            raise ValueError("a failed verdict requires a witness")
        return self

    def __bool__(self) -> bool:
        return self.holds


class CertificateKind(str, Enum):
    """Claim a certificate makes about its point."""

    SEPARATION = "SEPARATION"
    DINI_MEMBER = "DINI_MEMBER"
    DINI_INTERIOR = "DINI_INTERIOR"
    DINI_EXCESS = "DINI_EXCESS"


class Certificate(BaseModel):
    """One re-checkable piece of evidence in a report.

    SEPARATION claims phi(x) < phi(base) at zstar.  The DINI kinds claim
    dini <= 0, dini < 0 with phi(x) > -inf, or dini > 0 along direction.
    """

    model_config = ConfigDict(frozen=True)

    kind: CertificateKind
    x: Point
    base: Optional[Point] = None
    zstar: Optional[Point] = None
    phi: Optional[float] = None
    dini: Optional[float] = None
    reference: Optional[float] = None
    direction: Optional[Point] = None


class Failure(BaseModel):
    """A violated condition together with its witness."""

    model_config = ConfigDict(frozen=True)

    message: str
    witness: Dict[str, Any] = Field(default_factory=dict)
    certificates: List[Certificate] = Field(default_factory=list)

    @field_validator("message")
    @classmethod
    def validate_message(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("failure message cannot be empty")
        return v.strip()


class CheckReport(BaseModel):
    """Verdict of a checker plus the samples it covered and its evidence."""

    model_config = ConfigDict(frozen=True)

    check: str
    verdict: Verdict
    mode: Optional[CheckMode] = None
    grid: str = ""
    grid_points: int = 0
    duals: List[Point] = Field(default_factory=list)
    certificates: List[Certificate] = Field(default_factory=list)
    failures: List[Failure] = Field(default_factory=list)
    children: List["CheckReport"] = Field(default_factory=list)
    hypotheses_asserted: List[str] = Field(default_factory=list)
    hypotheses_unverified: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_failures(self) -> "CheckReport":
        """A FAIL must carry a witness, directly or through a child report."""
        if self.verdict == Verdict.FAIL and not self.failures:
            if not any(c.verdict == Verdict.FAIL for c in self.children):
                raise ValueError("a FAIL report requires at least one failure")
        return self

    def child(self, name: str) -> "CheckReport":
        """Sub-report by check name."""
        for report in self.children:
            if report.check == name:
                return report
        raise KeyError(name)

    def iter_reports(self) -> Iterable["CheckReport"]:
        """This report and all nested sub-reports, depth first."""
        yield self
        for report in self.children:
            yield from report.iter_reports()


class DominationSet(BaseModel):
    """Grid points x with f(x) not contained in f(x0), with separating duals."""

    model_config = ConfigDict(frozen=True)

    x0: Point
    members: List[Point] = Field(default_factory=list)
    certificates: List[Certificate] = Field(default_factory=list)
    uncertified: List[Point] = Field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def low_confidence(self) -> bool:
        return bool(self.uncertified)
