from datetime import datetime
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, Field, field_validator

from expsum.models.cyclotomic import CycloElem
from expsum.models.lpoly import LPoly
from expsum.models.padic import PadicElem
from expsum.services.padic_tower import padic_context

RecordKindType = Literal["fibre", "sympow"]
MethodType = Literal["oracle", "cohomology", "both"]


def rational_text(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class CensusKeySchema(BaseModel):
    """Key of a census record: (p, d, kind, k or lambda, s)."""

    p: int = Field(ge=2)
    d: int = Field(default=3, ge=2)
    kind: RecordKindType
    k: int | None = None
    lam: list[int] | None = Field(default=None, description="lambda in base-p coordinates")
    s: int = Field(default=1, ge=1)

    def file_stem(self) -> str:
        """File name of the record inside <root>/p<p>/d<d>/<kind>/."""
        if self.kind == "sympow":
            return f"k{self.k}"
        digits = "_".join(str(c) for c in self.lam or [])
        return f"s{self.s}-lam{digits}"


class PadicNumberSchema(BaseModel):
    """p-adic number as base-pi digits; every digit is certified, none beyond prec."""

    p: int
    s: int
    prec: int
    start: int
    digits: list[list[int]]

    @classmethod
    def from_elem(cls, x: PadicElem) -> "PadicNumberSchema":
        start, digits = x.pi_digits()
        return cls(
            p=x.p, s=x.ctx.s, prec=x.prec, start=start, digits=[list(d) for d in digits]
        )

    def to_elem(self) -> PadicElem:
        ctx = padic_context(self.p, self.s)
        return PadicElem.from_pi_digits(ctx, self.start, self.digits, self.prec)


class ProvenanceSchema(BaseModel):
    """Where a record came from; the timestamp only lives here."""

    method: MethodType
    precision: int | None = None
    version: str
    timestamp: datetime


class CensusRecordSchema(BaseModel):
    """Schema for one computed L-polynomial."""

    key: CensusKeySchema
    exact: list[list[str]] | None = None
    padic: list[PadicNumberSchema] | None = None
    provenance: ProvenanceSchema

    @field_validator("exact", mode="before")
    @classmethod
    def validate_exact(cls, value: object) -> object:
        """Integers are kept as decimal strings."""
        if isinstance(value, list):
            return [[str(int(c)) for c in row] for row in value]
        return value

    def payload(self) -> dict:
        """Everything except the provenance."""
        return self.model_dump(mode="json", exclude={"provenance"})

    def exact_lpoly(self) -> LPoly:
        if self.exact is None:
            raise ValueError("record carries no exact coefficients")
        coeffs = tuple(CycloElem(self.key.p, tuple(int(c) for c in row)) for row in self.exact)
        meta = self.key.model_dump(exclude_none=True)
        return LPoly(coeffs, "cyclotomic", meta)

    def padic_lpoly(self) -> LPoly:
        if self.padic is None:
            raise ValueError("record carries no p-adic coefficients")
        coeffs = tuple(number.to_elem() for number in self.padic)
        meta = {**self.key.model_dump(exclude_none=True), "prec": self.provenance.precision}
        return LPoly(coeffs, "padic", meta)


def exact_payload(poly: LPoly) -> list[list[str]]:
    """Cyclotomic coefficients as integer vectors over zeta^0..zeta^(p-2)."""
    rows = []
    for c in poly.coeffs:
        if isinstance(c, CycloElem):
            rows.append([str(v) for v in c.coeffs])
        else:
            rows.append([str(int(c))])
    return rows


def padic_payload(poly: LPoly) -> list[PadicNumberSchema]:
    return [PadicNumberSchema.from_elem(c) for c in poly.coeffs]
