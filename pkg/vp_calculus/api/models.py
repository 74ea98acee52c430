"""
API Models for the VP calculus toolkit

This module defines the Pydantic models used for request and response validation.
"""

import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator


class ReduceRequest(BaseModel):
    """Expression whose pole products should be reduced."""

    expr: str = Field(min_length=1)
    var: Optional[str] = None


class ReduceResponse(BaseModel):
    """Reduced expression in the expression language."""

    input: str
    result: str
    terms: int


class IntegrateRequest(BaseModel):
    """Repeated integration of an expression."""

    expr: str = Field(min_length=1)
    spec: str = Field(min_length=1)
    params: Dict[str, float] = Field(default_factory=dict)
    functions: List[str] = Field(default_factory=list, description="Definitions NAME(ARGS)=POLYNOMIAL")
    form: Literal["auto", "explicit", "derivative"] = "auto"

    @field_validator("params")
    @classmethod
    def _finite_params(cls, value: Dict[str, float]) -> Dict[str, float]:
        for name, number in value.items():
            if not math.isfinite(number):
                raise ValueError(f"Parameter {name} must be finite")
        return value


class IntegrateResponse(BaseModel):
    """Value, error estimate and the symbolic result it was evaluated from."""

    value: float
    error_estimate: float
    expression: str


class QuadRequest(BaseModel):
    """One oracle quadrature."""

    kind: Literal["pv", "log", "dilog", "regular"]
    fn: Optional[str] = Field(default=None, description="Polynomial integrand or weight")
    pole: Optional[float] = None
    degree: int = Field(default=1, ge=1)
    center: Optional[float] = None
    a: float = 0.0
    b: float = 1.0
    z: Optional[float] = None
    degrees: List[int] = Field(default_factory=list)


class QuadResponse(BaseModel):
    """Result of an oracle quadrature."""

    value: float
    error_estimate: Optional[float] = None
    evaluations: Optional[int] = None


class SimplexRequest(BaseModel):
    """Evaluation of the simplex integral I(z)."""

    z: float
    route: Literal["A", "B", "both"] = "B"
    one_sided: bool = False


class ScenarioReportModel(BaseModel):
    """One verification report. Non-finite numbers are sent as null."""

    name: str
    computed: Optional[float]
    expected: Optional[float]
    abs_error: Optional[float]
    passed: bool
    runtime_ms: float
    tolerance: float
    reference: str = ""
    details: Dict[str, float] = Field(default_factory=dict)
    message: Optional[str] = None

    @field_validator("computed", "expected", "abs_error", mode="before")
    @classmethod
    def _finite_or_none(cls, value):
        if value is not None and not math.isfinite(value):
            return None
        return value


class VerifyRequest(BaseModel):
    """Selection of verification checks."""

    only: Optional[List[str]] = None
    tolerance_scale: float = Field(default=1.0, gt=0)
    include_slow: bool = False


class VerifyResponse(BaseModel):
    """Reports of a verification run."""

    passed: bool
    total: int
    failed: List[str]
    reports: List[ScenarioReportModel]
