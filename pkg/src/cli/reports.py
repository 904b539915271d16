"""
Versioned run reports written by ``realize``.
"""
import csv
import io
from typing import Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, Field

from src import __version__
from src.baselines import BaselineResult
from src.mepsolve import CriticalPoint, RealizationResult

SCHEMA_VERSION = 1
CANDIDATE_COLUMNS = ["rank", "global", "misfit_sq", "poles", "coefficients", "fonc_max", "hankel_rank"]


class ComplexValue(BaseModel):
    re: float
    im: float

    @classmethod
    def of(cls, value: complex) -> "ComplexValue":
        value = complex(value)
        return cls(re=value.real, im=value.imag)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


class FoncReport(BaseModel):
    r_b: float
    r_yhat: float
    r_lambda: float
    r_mu: float
    max: float


class CandidateReport(BaseModel):
    poles: List[ComplexValue]
    coefficients: List[float]
    misfit_sq: float
    fonc: Optional[FoncReport] = None
    hankel_rank: Optional[int] = None
    rank_borderline: bool = False
    polished: bool = False
    is_global: bool = False


class ProblemSpec(BaseModel):
    N: int
    n: int
    m: int
    fixed_poles: List[ComplexValue]


class SpectrumCounts(BaseModel):
    affine: int
    real: int
    infinite: int
    solver: str


class RunReport(BaseModel):
    """Everything ``realize`` found; round-trips through JSON losslessly."""

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    tool_version: str = __version__
    input_digest: str
    problem: ProblemSpec
    method: str
    candidates: List[CandidateReport]
    global_solution: CandidateReport
    counts: Optional[SpectrumCounts] = None
    timings: Dict[str, float] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)

    model_config = {"populate_by_name": True}

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.model_validate_json(text)


def candidate_report(point: CriticalPoint, is_global: bool) -> CandidateReport:
    return CandidateReport(
        poles=[ComplexValue.of(p) for p in point.poles],
        coefficients=[float(v) for v in point.a.coeffs],
        misfit_sq=float(point.misfit_sq),
        fonc=FoncReport(
            r_b=float(point.fonc.r_b),
            r_yhat=float(point.fonc.r_yhat),
            r_lambda=float(point.fonc.r_lambda),
            r_mu=float(point.fonc.r_mu),
            max=float(point.fonc.max)
        ),
        hankel_rank=int(point.hankel_rank),
        rank_borderline=bool(point.rank_borderline),
        polished=bool(point.polished),
        is_global=is_global
    )


def baseline_report(result: BaselineResult) -> CandidateReport:
    return CandidateReport(
        poles=[ComplexValue.of(p) for p in result.poles],
        coefficients=[float(v) for v in result.combined_model.coeffs],
        misfit_sq=float(result.misfit_sq),
        is_global=True
    )


def build_report(
    result: Union[RealizationResult, BaselineResult],
    method: str,
    N: int,
    n: int,
    fixed_poles: Sequence[complex],
    digest: str,
    all_candidates: bool = False,
    timings: Optional[Dict[str, float]] = None
) -> RunReport:
    """Turn a realization or baseline result into a RunReport."""
    problem = ProblemSpec(N=N, n=n, m=len(fixed_poles),
                          fixed_poles=[ComplexValue.of(p) for p in fixed_poles])

    if isinstance(result, BaselineResult):
        best = baseline_report(result)
        return RunReport(input_digest=digest, problem=problem, method=method,
                         candidates=[best], global_solution=best, timings=timings or {})

    candidates = [
        candidate_report(point, i == result.global_index)
        for i, point in enumerate(result.candidates)
    ]
    return RunReport(
        input_digest=digest,
        problem=problem,
        method=method,
        candidates=candidates if all_candidates else [candidates[result.global_index]],
        global_solution=candidates[result.global_index],
        counts=SpectrumCounts(
            affine=int(result.n_affine),
            real=int(result.n_real),
            infinite=int(result.n_infinite),
            solver=result.solver
        ),
        timings=timings or {},
        warnings=list(result.warnings)
    )


def _complex_text(value: ComplexValue) -> str:
    sign = "+" if value.im >= 0 else "-"
    return f"{value.re!r}{sign}{abs(value.im)!r}j"


def report_to_csv(report: RunReport) -> str:
    """One row per reported candidate, in misfit order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CANDIDATE_COLUMNS)
    for rank, candidate in enumerate(report.candidates):
        writer.writerow([
            rank,
            int(candidate.is_global),
            repr(candidate.misfit_sq),
            " ".join(_complex_text(p) for p in candidate.poles),
            " ".join(repr(c) for c in candidate.coefficients),
            "" if candidate.fonc is None else repr(candidate.fonc.max),
            "" if candidate.hankel_rank is None else candidate.hankel_rank
        ])
    return buffer.getvalue()
