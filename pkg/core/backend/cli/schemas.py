# core/backend/cli/schemas.py

"""
schemas.py

Pydantic-модели входных сценариев и выходного отчёта.

Файл сценария - JSON с дискриминатором kind:

{
  "kind": "kirwan",
  "name": "c2_weights",
  "body": {"rank": 1, "weights": [[1], [-1]], "chi": [1], "names": ["z_1", "z_2"]},
  "window": {"homological": 6, "internal": 10},
  "truncate": 20,
  "flags": {"proper_over_affine": true, "finite_invariants": true},
  "expected": {"residual": {"0": 1}},
  "expected_loci": {"M^ss": "{z_1 ≠ 0}"}
}
"""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ------------------ общие части ------------------ #

class WindowIn(_Strict):
    homological: int = Field(ge=0)
    internal: int = Field(ge=0)


class FlagsIn(_Strict):
    proper_over_affine: bool = True
    finite_invariants: bool = True


class CharacterIn(_Strict):
    internal: int = 0
    weight: List[int] = Field(default_factory=list)


def parse_rational(value: Union[int, str]) -> Fraction:
    """Строка вида p/q или целое -> Fraction; ValueError при мусоре."""
    if isinstance(value, bool):
        raise ValueError("ожидалось рациональное число")
    return Fraction(value)


# ------------------ лагранжевы пересечения ------------------ #

class LagrangianIn(_Strict):
    kind: Literal["zero_section", "graph", "conormal", "linear"]
    potential: Optional[str] = None
    components: List[str] = Field(default_factory=list)
    vanishing: List[str] = Field(default_factory=list)
    basis: List[Dict[str, Union[int, str]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _graph_needs_form(self) -> "LagrangianIn":
        if self.kind == "graph" and self.potential is None and not self.components:
            raise ValueError("graph: нужен potential или components")
        return self


class LagrangianBody(_Strict):
    base: List[str] = Field(min_length=1)
    base_degrees: Optional[List[int]] = None
    fiber_degrees: Optional[List[int]] = None
    weights: Optional[List[List[int]]] = None
    l1: LagrangianIn
    l2: LagrangianIn
    f1: Optional[CharacterIn] = None
    f2: Optional[CharacterIn] = None
    spin: bool = False
    level: Optional[List[Union[int, str]]] = None

    @model_validator(mode="after")
    def _variables_declared(self) -> "LagrangianBody":
        n = len(self.base)
        if len(set(self.base)) != n:
            raise ValueError("имена базовых переменных повторяются")
        for label, seq in (("base_degrees", self.base_degrees), ("fiber_degrees", self.fiber_degrees),
                           ("weights", self.weights)):
            if seq is not None and len(seq) != n:
                raise ValueError(f"{label}: ожидалось {n} значений, получено {len(seq)}")
        if self.weights:
            ranks = {len(w) for w in self.weights}
            if len(ranks) != 1 or 0 in ranks:
                raise ValueError("weights: все веса должны иметь одну и ту же ненулевую длину")
        declared = set(self.base) | {f"w_{z}" for z in self.base}
        for lag in (self.l1, self.l2):
            for z in lag.vanishing:
                if z not in self.base:
                    raise ValueError(f"vanishing: {z!r} не объявлена как базовая переменная")
            for vec in lag.basis:
                for name in vec:
                    if name not in declared:
                        raise ValueError(f"basis: переменная {name!r} не объявлена")
        if self.level is not None:
            for v in self.level:
                parse_rational(v)
        return self


class LagrangianScenario(_Strict):
    kind: Literal["lagrangian_intersection"]
    body: LagrangianBody


# ------------------ торическая GIT ------------------ #

class KirwanBody(_Strict):
    rank: int = Field(ge=1)
    weights: List[List[int]] = Field(min_length=1, max_length=12)
    chi: List[int]
    names: Optional[List[str]] = None
    cotangent: bool = False
    local_system_orders: List[int] = Field(default_factory=lambda: [1])

    @model_validator(mode="after")
    def _shapes(self) -> "KirwanBody":
        for w in self.weights:
            if len(w) != self.rank:
                raise ValueError(f"вес {w} не согласован с rank = {self.rank}")
        if len(self.chi) != self.rank:
            raise ValueError(f"chi {self.chi} не согласован с rank = {self.rank}")
        if self.names is not None and len(self.names) != len(self.weights):
            raise ValueError("names: число имён не совпадает с числом весов")
        if self.cotangent and len(self.weights) > 6:
            raise ValueError("cotangent: не больше 6 базовых весов")
        if any(n < 1 for n in self.local_system_orders):
            raise ValueError("local_system_orders: порядки должны быть >= 1")
        return self


class KirwanScenario(_Strict):
    kind: Literal["kirwan"]
    body: KirwanBody


# ------------------ локальные системы ------------------ #

class MonodromyIn(_Strict):
    order: int = Field(ge=1)
    # (u, v, k): монодромия ζ_order^k на ребре u -> v
    edges: List[Tuple[int, int, int]] = Field(default_factory=list)
    seam_exponent: Optional[int] = None


class LocalsysBody(_Strict):
    complex: Optional[Literal["circle", "torus", "point"]] = None
    size: int = Field(default=3, ge=3)
    facets: Optional[List[List[int]]] = None
    monodromy: MonodromyIn
    cover_orders: List[int] = Field(default_factory=list)
    gauge: Optional[Dict[str, int]] = None

    @field_validator("cover_orders")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("порядки накрытий должны быть >= 1")
        return v

    @model_validator(mode="after")
    def _one_source(self) -> "LocalsysBody":
        if (self.complex is None) == (self.facets is None):
            raise ValueError("нужно ровно одно из complex / facets")
        if self.monodromy.seam_exponent is not None and self.complex != "torus":
            raise ValueError("seam_exponent допустим только для complex = torus")
        return self


class LocalsysScenario(_Strict):
    kind: Literal["localsys"]
    body: LocalsysBody


# ------------------ файл сценария ------------------ #

class _ScenarioCommon(_Strict):
    name: str = ""
    window: Optional[WindowIn] = None
    truncate: Optional[int] = Field(default=None, ge=0)
    flags: FlagsIn = Field(default_factory=FlagsIn)
    expected: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    expected_loci: Dict[str, str] = Field(default_factory=dict)
    expect_error: Optional[str] = None


class LagrangianFile(_ScenarioCommon, LagrangianScenario):
    pass


class KirwanFile(_ScenarioCommon, KirwanScenario):
    pass


class LocalsysFile(_ScenarioCommon, LocalsysScenario):
    pass


ScenarioFile = Annotated[Union[LagrangianFile, KirwanFile, LocalsysFile], Field(discriminator="kind")]

scenario_adapter: TypeAdapter = TypeAdapter(ScenarioFile)


# ------------------ отчёт ------------------ #

class CheckResult(BaseModel):
    name: str
    ok: bool
    detail: str = ""
    # (k, d, вычислено, ожидалось)
    mismatches: List[Tuple[int, int, int, int]] = Field(default_factory=list)


class TableBlock(BaseModel):
    name: str
    d_values: List[int]
    rows: List[Tuple[int, List[int]]]

    def get(self, k: int, d: int) -> Optional[int]:
        if d not in self.d_values:
            return None
        for kk, row in self.rows:
            if kk == k:
                return row[self.d_values.index(d)]
        return None


class SeriesBlock(BaseModel):
    name: str
    coefficients: List[int]


class LocusBlock(BaseModel):
    name: str
    description: str
    supports: List[List[int]]


class Fact(BaseModel):
    key: str
    value: str


class Report(BaseModel):
    name: str
    kind: str
    facts: List[Fact] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)
    tables: List[TableBlock] = Field(default_factory=list)
    series: List[SeriesBlock] = Field(default_factory=list)
    loci: List[LocusBlock] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def table(self, name: str) -> Optional[TableBlock]:
        return next((t for t in self.tables if t.name == name), None)

    def series_block(self, name: str) -> Optional[SeriesBlock]:
        return next((s for s in self.series if s.name == name), None)

    def locus(self, name: str) -> Optional[LocusBlock]:
        return next((l for l in self.loci if l.name == name), None)
