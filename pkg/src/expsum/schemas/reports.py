from typing import Any

from pydantic import BaseModel, Field

from expsum.schemas.census import PadicNumberSchema


class CheckResultSchema(BaseModel):
    """Outcome of one verification check."""

    name: str
    passed: bool
    required: bool = True
    detail: dict[str, Any] = Field(default_factory=dict)


class SuiteReportSchema(BaseModel):
    """Schema for a verification suite run."""

    suite: str
    passed: bool
    checks: list[CheckResultSchema] = Field(default_factory=list)


class FibreReportSchema(BaseModel):
    """Schema for the fibre command output."""

    p: int
    d: int
    s: int
    lam: list[int]
    exact: list[list[str]]
    padic: list[PadicNumberSchema]
    slopes: list[str]
    predicted: list[str] | None = None
    match: bool


class MkReportSchema(BaseModel):
    """Schema for the mk command output."""

    p: int
    k: int
    degree: int
    method: str
    exact: list[list[str]] | None = None
    padic: list[PadicNumberSchema] | None = None
    ord_c1: str | None = None
    slopes: list[str] = Field(default_factory=list)
    fe_constant: list[str] | PadicNumberSchema | None = None
    match: bool | None = None
