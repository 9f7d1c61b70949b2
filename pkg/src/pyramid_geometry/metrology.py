"""Monument measurements, quantitative claims and their evaluation.

A claim compares two expressions written in the construction-script
expression language, extended with measurement references
``monument.dimension[source]``. References resolve in the claim's unit
system, converting with the dataset's cubit length when only the other unit
was recorded. The relative error is taken against the right-hand side, which
by convention holds the geometric ideal.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import jsonschema

from .dsl.evaluator import eval_expr
from .dsl.syntax import DslError, Node, Ref, parse_expression
from .geom import Angle

CUBIT_IN_METERS = 0.5235
DEFAULT_SLACK = 1.5


class Unit(str, Enum):
    METER = "meter"
    CUBIT = "cubit"


class MetrologyError(ValueError):
    pass


class MissingMeasurementError(MetrologyError, KeyError):
    def __str__(self):
        return self.args[0]


class SchemaError(MetrologyError):
    """A dataset or claims file that does not match its schema."""

    def __init__(self, path, where: str, message: str):
        self.path = str(path)
        self.where = where
        super().__init__(f"{self.path}: {where or '<root>'}: {message}")


def convert(value: float, from_unit, to_unit, cubit_in_meters: float = CUBIT_IN_METERS) -> float:
    src, dst = Unit(from_unit), Unit(to_unit)
    if src is dst:
        return value
    if src is Unit.CUBIT:
        return value * cubit_in_meters
    return value / cubit_in_meters


# --- data model -----------------------------------------------------------------


@dataclass(frozen=True)
class Measurement:
    monument: str
    dimension: str
    value: float
    unit: Unit
    source: str
    paper_ref: str = ""

    def __post_init__(self):
        object.__setattr__(self, "unit", Unit(self.unit))
        if not (math.isfinite(self.value) and self.value > 0):
            raise MetrologyError(f"{self.monument}.{self.dimension}: value must be positive")
        if not self.source:
            raise MetrologyError(f"{self.monument}.{self.dimension}: source must be given")


@dataclass(frozen=True)
class Dataset:
    measurements: tuple[Measurement, ...]
    cubit_in_meters: float = CUBIT_IN_METERS

    def __post_init__(self):
        seen = set()
        for m in self.measurements:
            key = (m.monument, m.dimension, m.source, m.unit)
            if key in seen:
                raise MetrologyError(f"duplicate measurement {m.monument}.{m.dimension}[{m.source}] in {m.unit.value}")
            seen.add(key)

    def sources(self, monument: str, dimension: str) -> list[str]:
        out = []
        for m in self.measurements:
            if m.monument == monument and m.dimension == dimension and m.source not in out:
                out.append(m.source)
        return out

    def value(self, monument: str, dimension: str, source: str | None, unit) -> float:
        """Value in ``unit``, preferring an entry recorded in that unit."""
        unit = Unit(unit)
        key = f"{monument}.{dimension}"
        if source is None:
            srcs = self.sources(monument, dimension)
            if not srcs:
                raise MissingMeasurementError(f"missing measurement '{key}'")
            if len(srcs) > 1:
                raise MissingMeasurementError(f"'{key}' is ambiguous; pick a source from {', '.join(srcs)}")
            source = srcs[0]
        found = [m for m in self.measurements if (m.monument, m.dimension, m.source) == (monument, dimension, source)]
        if not found:
            raise MissingMeasurementError(f"missing measurement '{key}[{source}]'")
        for m in found:
            if m.unit is unit:
                return m.value
        m = found[0]
        return convert(m.value, m.unit, unit, self.cubit_in_meters)

    def only(self, unit) -> Dataset:
        """Copy keeping entries recorded in ``unit``."""
        unit = Unit(unit)
        return Dataset(tuple(m for m in self.measurements if m.unit is unit), self.cubit_in_meters)


@dataclass(frozen=True)
class Claim:
    id: str
    description: str
    lhs: str
    rhs: str
    unit_system: Unit
    claimed_rel_err: float
    source_bindings: dict = field(default_factory=dict, hash=False)
    paper_ref: str = ""

    def __post_init__(self):
        object.__setattr__(self, "unit_system", Unit(self.unit_system))
        if not self.claimed_rel_err > 0:
            raise MetrologyError(f"{self.id}: claimed_rel_err must be positive")
        for side in (self.lhs, self.rhs):
            try:
                parse_expression(side)
            except DslError as exc:
                raise MetrologyError(f"{self.id}: cannot parse {side!r}: {exc.message} (col {exc.col})") from None

    @property
    def lhs_ast(self) -> Node:
        return parse_expression(self.lhs)

    @property
    def rhs_ast(self) -> Node:
        return parse_expression(self.rhs)


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    lhs_value: float | None
    rhs_value: float | None
    rel_err: float | None
    claimed_rel_err: float
    passed: bool
    margin: float | None
    error: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class SuiteReport:
    results: tuple[ClaimResult, ...]
    slack: float = DEFAULT_SLACK

    @property
    def summary(self) -> dict:
        errored = sum(r.error is not None for r in self.results)
        passed = sum(r.passed for r in self.results)
        return {
            "total": len(self.results),
            "passed": passed,
            "failed": len(self.results) - passed - errored,
            "errored": errored,
        }

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"slack": self.slack, "results": [r.to_dict() for r in self.results], "summary": self.summary}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "lhs", "rhs", "rel_err", "claimed", "pass"])
        for r in self.results:
            w.writerow([r.claim_id, _num(r.lhs_value), _num(r.rhs_value), _num(r.rel_err), repr(r.claimed_rel_err), str(r.passed).lower()])
        return buf.getvalue()

    def to_text(self) -> str:
        head = f"{'claim':<26} {'lhs':>16} {'rhs':>16} {'rel_err':>10} {'limit':>10}  result"
        lines = [head, "-" * len(head)]
        for r in self.results:
            limit = r.claimed_rel_err * self.slack
            if r.error:
                lines.append(f"{r.claim_id:<26} {'-':>16} {'-':>16} {'-':>10} {limit:>10.2e}  ERROR {r.error}")
                continue
            lines.append(
                f"{r.claim_id:<26} {r.lhs_value:>16.6g} {r.rhs_value:>16.6g} {r.rel_err:>10.2e} {limit:>10.2e}  {'pass' if r.passed else 'FAIL'}"
            )
        s = self.summary
        lines.append(f"{s['total']} claims: {s['passed']} passed, {s['failed']} failed, {s['errored']} errored")
        return "\n".join(lines) + "\n"


def _num(v) -> str:
    return "" if v is None else repr(v)


# --- evaluation -----------------------------------------------------------------


def _scalar(value, side: str) -> float:
    if isinstance(value, Angle):
        return value.degrees
    if isinstance(value, float):
        return value
    raise MetrologyError(f"{side} evaluates to a {type(value).__name__.lower()}, not a number")


def evaluate_claim(claim: Claim, dataset: Dataset, slack: float = DEFAULT_SLACK) -> ClaimResult:
    """Evaluate one claim. Raises on missing measurements or arithmetic faults."""

    missing: list[MissingMeasurementError] = []

    def resolve(ref: Ref) -> float:
        source = ref.source or claim.source_bindings.get(ref.key)
        try:
            return dataset.value(ref.monument, ref.dimension, source, claim.unit_system)
        except MissingMeasurementError as exc:
            missing.append(exc)
            raise

    try:
        lhs = _scalar(eval_expr(claim.lhs_ast, resolver=resolve), "lhs")
        rhs = _scalar(eval_expr(claim.rhs_ast, resolver=resolve), "rhs")
    except DslError as exc:
        if missing:
            raise MissingMeasurementError(f"{claim.id}: {missing[0]}") from None
        raise MetrologyError(f"{claim.id}: {exc.message}") from None
    if rhs == 0:
        raise MetrologyError(f"{claim.id}: division by zero (right-hand side is 0)")
    rel = abs(lhs - rhs) / abs(rhs)
    limit = claim.claimed_rel_err * slack
    return ClaimResult(claim.id, lhs, rhs, rel, claim.claimed_rel_err, rel <= limit, limit - rel)


def run_suite(claims, dataset: Dataset, slack: float = DEFAULT_SLACK) -> SuiteReport:
    """Evaluate every claim in order; a failing claim does not stop the rest."""
    results = []
    for c in claims:
        try:
            results.append(evaluate_claim(c, dataset, slack))
        except MetrologyError as exc:
            results.append(ClaimResult(c.id, None, None, None, c.claimed_rel_err, False, None, str(exc)))
    return SuiteReport(tuple(results), slack)


# --- files ----------------------------------------------------------------------

_DECIMAL = {"type": "string", "pattern": r"^[0-9]+(\.[0-9]+)?([eE][-+]?[0-9]+)?$"}
_TEXT = {"type": "string", "minLength": 1}

DATASET_SCHEMA = {
    "type": "object",
    "required": ["cubit_in_meters", "measurements"],
    "additionalProperties": False,
    "properties": {
        "cubit_in_meters": _DECIMAL,
        "measurements": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["monument", "dimension", "value", "unit", "source"],
                "additionalProperties": False,
                "properties": {
                    "monument": _TEXT,
                    "dimension": _TEXT,
                    "value": _DECIMAL,
                    "unit": {"enum": ["meter", "cubit"]},
                    "source": _TEXT,
                    "paper_ref": {"type": "string"},
                },
            },
        },
    },
}

CLAIMS_SCHEMA = {
    "type": "object",
    "required": ["claims"],
    "additionalProperties": False,
    "properties": {
        "claims": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "lhs", "rhs", "unit_system", "claimed_rel_err"],
                "additionalProperties": False,
                "properties": {
                    "id": _TEXT,
                    "description": {"type": "string"},
                    "lhs": _TEXT,
                    "rhs": _TEXT,
                    "unit_system": {"enum": ["meter", "cubit"]},
                    "claimed_rel_err": _DECIMAL,
                    "source_bindings": {"type": "object", "additionalProperties": _TEXT},
                    "paper_ref": {"type": "string"},
                },
            },
        }
    },
}


def _load_json(path, text: str | None, schema: dict):
    try:
        doc = json.loads(text if text is not None else Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(path, "", f"cannot read file: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "".join(f"[{p}]" if isinstance(p, int) else (f".{p}" if i else p) for i, p in enumerate(e.absolute_path))
        raise SchemaError(path, where, e.message)
    return doc


def load_dataset(path=None, text: str | None = None) -> Dataset:
    doc = _load_json(path or "<dataset>", text, DATASET_SCHEMA)
    try:
        ms = tuple(
            Measurement(m["monument"], m["dimension"], float(m["value"]), m["unit"], m["source"], m.get("paper_ref", ""))
            for m in doc["measurements"]
        )
        return Dataset(ms, float(doc["cubit_in_meters"]))
    except MetrologyError as exc:
        raise SchemaError(path or "<dataset>", "measurements", str(exc)) from None


def load_claims(path=None, text: str | None = None) -> list[Claim]:
    doc = _load_json(path or "<claims>", text, CLAIMS_SCHEMA)
    out = []
    for i, c in enumerate(doc["claims"]):
        try:
            out.append(
                Claim(
                    c["id"], c.get("description", ""), c["lhs"], c["rhs"], c["unit_system"],
                    float(c["claimed_rel_err"]), dict(c.get("source_bindings", {})), c.get("paper_ref", ""),
                )
            )
        except MetrologyError as exc:
            raise SchemaError(path or "<claims>", f"claims[{i}]", str(exc)) from None
    ids = [c.id for c in out]
    if len(set(ids)) != len(ids):
        raise SchemaError(path or "<claims>", "claims", "duplicate claim id")
    return out


def _bundled_text(name: str) -> str:
    return resources.files("pyramid_geometry").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def bundled_dataset() -> Dataset:
    return load_dataset("<bundled>/lehner.json", _bundled_text("lehner.json"))


def bundled_claims() -> list[Claim]:
    return load_claims("<bundled>/claims.json", _bundled_text("claims.json"))
