from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Dict, List, Optional, Union

from . import config

Label = Union[int, str]


class MorphismSchema(BaseModel):
    id: Label
    dom: Label
    cod: Label


class CategorySchema(BaseModel):
    model_config = ConfigDict(extra='ignore')

    name: Optional[str] = None
    objects: List[Label]
    morphisms: List[MorphismSchema]
    identities: Dict[str, Label]
    compose: List[List[Label]]

    @field_validator('compose')
    @classmethod
    def triples_only(cls, rows):
        for row in rows:
            if len(row) != 3:
                raise ValueError(f"compose rows are [g, f, g∘f] triples, got {row}")
        return rows


class RelCategorySchema(CategorySchema):
    weq: List[Label]
    # alternative markings by name, each audited like `weq`
    markings: Dict[str, List[Label]] = Field(default_factory=dict)


class PermCategorySchema(RelCategorySchema):
    tensor_obj: List[List[Label]]
    tensor_mor: List[List[Label]]
    unit: Label
    braid: List[List[Label]]


class AlgebraSchema(BaseModel):
    n: int
    obj: Dict[str, Label]
    struct: Dict[str, Label]


class SSetSchema(BaseModel):
    dimension: int
    simplices: List[List[str]]
    faces: List[List[List[int]]]
    degeneracies: List[List[List[int]]]


class Report(BaseModel):
    name: str
    anchor: str
    passed: bool
    counterexamples: List[str] = Field(default_factory=list)
    bounds: Dict[str, int] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)


class RunConfig(BaseModel):
    max_n: int = config.MAX_N
    perm_n: int = config.PERM_N
    fmt: str = 'text'
    out: Optional[str] = None
    verbose: bool = False
    fixtures: List[str] = Field(default_factory=list)
    checks: List[str] = Field(default_factory=lambda: list(config.SUITES))

    @field_validator('checks')
    @classmethod
    def known_checks(cls, value):
        unknown = [c for c in value if c not in config.SUITES]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; choose from {', '.join(config.SUITES)}")
        return [c for c in config.SUITES if c in value]

    @field_validator('max_n', 'perm_n')
    @classmethod
    def nonnegative_bound(cls, value):
        if value < 0:
            raise ValueError('bounds must be >= 0')
        return value

    @field_validator('fmt')
    @classmethod
    def known_format(cls, value):
        if value not in config.OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(config.OUTPUT_FORMATS)}")
        return value


def make_report(name: str, anchor: str, failures, bounds: Optional[Dict[str, int]] = None,
                notes: Optional[List[str]] = None) -> Report:
    failures = [str(f) for f in failures]
    return Report(
        name=name,
        anchor=anchor,
        passed=not failures,
        counterexamples=failures,
        bounds=dict(sorted((bounds or {}).items())),
        notes=list(notes or []),
    )


def merge_reports(name: str, anchor: str, reports: List[Report],
                  bounds: Optional[Dict[str, int]] = None) -> Report:
    failures = []
    for r in reports:
        failures.extend(f"{r.name}: {c}" for c in r.counterexamples)
    notes = [f"{r.name}: {'pass' if r.passed else 'FAIL'}" for r in reports]
    return make_report(name, anchor, failures, bounds, notes)
