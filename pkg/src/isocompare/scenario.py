"""Scenario files: loading, validation, batch execution and report emission.

A scenario is a JSON object::

    {
      "version": "v1",
      "name": "euclidean_ball",
      "manifold": {"kind": "ModelBall", "k": 0, "n": 3, "radius": 1},
      "k": 0,
      "verifiers": [{"id": "hkr"}, {"id": "tube", "params": {"rho_grid": [0.5, 1.0]}}],
      "ambient": null,
      "tolerances": {"default": 1e-6, "equality": 5e-4, "hkr": 1e-8},
      "resolution": {"panels": 32}
    }

Only ``version``, ``name``, ``manifold``, ``k`` and ``verifiers`` are
required.  Unknown fields are rejected at every level.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DomainError, IsocompareError, ScenarioError
from .geometry.spec import ManifoldSpec, resolution_from_dict
from .reports import VerificationReport
from .suite import VERIFIERS, run_verifier

SCHEMA_VERSION = "v1"
TOLERANCE_FLOOR = 1e-13

EXIT_OK, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_ERROR = 0, 1, 2, 3

_TOP_FIELDS = {"version", "name", "description", "manifold", "ambient", "k", "verifiers", "tolerances",
               "resolution"}
_VERIFIER_FIELDS = {"id", "params", "equality"}

# column names of the series each verifier records
SERIES_COLUMNS = {
    "cut": ("sample", "cut", "focal"),
    "superlevel": ("t", "lhs", "rhs"),
    "tube": ("rho", "lhs", "rhs"),
    "ratio": ("x", "ratio", "limit"),
    "distance": ("triangle", "t", "d_actual", "d_model"),
}


@dataclass(frozen=True)
class VerifierCall:
    id: str
    params: dict = field(default_factory=dict, hash=False, compare=True)
    equality: bool | None = None

    def to_dict(self) -> dict:
        d = {"id": self.id}
        if self.params:
            d["params"] = self.params
        if self.equality is not None:
            d["equality"] = self.equality
        return d


@dataclass(frozen=True)
class Scenario:
    name: str
    manifold: ManifoldSpec
    k: float
    verifiers: tuple
    ambient: ManifoldSpec | None = None
    tolerances: dict = field(default_factory=dict, hash=False)
    resolution: dict = field(default_factory=dict, hash=False)
    description: str = ""

    @property
    def effective_manifold(self) -> ManifoldSpec:
        return self.manifold.with_resolution(**self.resolution) if self.resolution else self.manifold

    def tolerance_for(self, theorem_id: str):
        return self.tolerances.get(theorem_id, self.tolerances.get("default"))

    def to_dict(self) -> dict:
        d = {"version": SCHEMA_VERSION, "name": self.name}
        if self.description:
            d["description"] = self.description
        d["manifold"] = self.manifold.to_dict()
        if self.ambient is not None:
            d["ambient"] = self.ambient.to_dict()
        d["k"] = self.k
        d["verifiers"] = [v.to_dict() for v in self.verifiers]
        if self.tolerances:
            d["tolerances"] = dict(self.tolerances)
        if self.resolution:
            d["resolution"] = dict(self.resolution)
        return d


# -- loading and validation --------------------------------------------------------------

def _fail(where: str, msg: str):
    raise ScenarioError(f"{where}: {msg}")


def _finite(where, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        _fail(where, f"expected a finite number, got {value!r}")
    return float(value)


def scenario_from_dict(d: dict, source: str = "<scenario>") -> Scenario:
    if not isinstance(d, dict):
        _fail(source, "top level must be a JSON object")
    unknown = set(d) - _TOP_FIELDS
    if unknown:
        _fail(source, f"unknown fields {sorted(unknown)}")
    if "version" not in d:
        _fail(source, "field 'version' is mandatory")
    if d["version"] != SCHEMA_VERSION:
        _fail(f"{source}: version", f"unsupported schema version {d['version']!r}; expected {SCHEMA_VERSION!r}")
    for key in ("name", "manifold", "k", "verifiers"):
        if key not in d:
            _fail(source, f"missing required field {key!r}")
    name = d["name"]
    if not isinstance(name, str) or not name or any(c in name for c in "/\\ \t\n"):
        _fail(f"{source}: name", "must be a non-empty string without whitespace or slashes")
    description = d.get("description", "")
    if not isinstance(description, str):
        _fail(f"{source}: description", "must be a string")
    try:
        manifold = ManifoldSpec.from_dict(d["manifold"])
        ambient = None if d.get("ambient") is None else ManifoldSpec.from_dict(d["ambient"])
    except DomainError as exc:
        _fail(f"{source}: manifold", str(exc))
    k = _finite(f"{source}: k", d["k"])

    res = d.get("resolution") or {}
    if not isinstance(res, dict):
        _fail(f"{source}: resolution", "must be an object")
    for key, val in res.items():
        if isinstance(val, bool) or not isinstance(val, int) or val <= 0:
            _fail(f"{source}: resolution.{key}", f"must be a positive integer, got {val!r}")
    try:
        resolution_from_dict({**manifold.resolution.__dict__, **res})
    except DomainError as exc:
        _fail(f"{source}: resolution", str(exc))

    tols = d.get("tolerances") or {}
    if not isinstance(tols, dict):
        _fail(f"{source}: tolerances", "must be an object")
    for key, val in tols.items():
        if key not in ("default", "equality") and key not in VERIFIERS:
            _fail(f"{source}: tolerances.{key}", "not 'default', 'equality' or a theorem id")
        val = _finite(f"{source}: tolerances.{key}", val)
        if val < TOLERANCE_FLOOR:
            _fail(f"{source}: tolerances.{key}", f"{val!r} is below the floor {TOLERANCE_FLOOR}")

    raw = d["verifiers"]
    if not isinstance(raw, list) or not raw:
        _fail(f"{source}: verifiers", "must be a non-empty list")
    calls = []
    for i, item in enumerate(raw):
        where = f"{source}: verifiers[{i}]"
        if isinstance(item, str):
            item = {"id": item}
        if not isinstance(item, dict):
            _fail(where, "must be an id string or an object")
        unknown = set(item) - _VERIFIER_FIELDS
        if unknown:
            _fail(where, f"unknown fields {sorted(unknown)}")
        tid = item.get("id")
        if tid not in VERIFIERS:
            _fail(f"{where}.id", f"unknown theorem id {tid!r}")
        params = item.get("params") or {}
        if not isinstance(params, dict):
            _fail(f"{where}.params", "must be an object")
        bad = set(params) - set(VERIFIERS[tid].params)
        if bad:
            _fail(f"{where}.params", f"{tid} does not accept {sorted(bad)}")
        eq = item.get("equality")
        if eq is not None and not isinstance(eq, bool):
            _fail(f"{where}.equality", "must be true, false or null")
        calls.append(VerifierCall(tid, dict(params), eq))
    return Scenario(name, manifold, k, tuple(calls), ambient, dict(tols), dict(res), description)


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file; bundled names resolve without a path."""
    path = Path(path)
    if not path.exists() and not path.parent.name:
        bundled = resources.files("isocompare") / "scenarios" / path.name
        if bundled.is_file():
            path = Path(str(bundled))
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data, str(path))


def bundled_scenarios() -> list[str]:
    folder = resources.files("isocompare") / "scenarios"
    return sorted(p.name for p in folder.iterdir() if p.name.endswith(".json"))


# -- execution ---------------------------------------------------------------------

def _run_one(scenario: Scenario, call: VerifierCall) -> VerificationReport:
    params = dict(call.params)
    manifold = scenario.effective_manifold
    if "ambient" in VERIFIERS[call.id].params:
        amb = params.get("ambient")
        if isinstance(amb, dict):
            try:
                params["ambient"] = ManifoldSpec.from_dict(amb)
            except DomainError as exc:
                return VerificationReport.failure(call.id, scenario.name, exc)
        elif amb is None and scenario.ambient is not None:
            params["ambient"] = scenario.ambient
    if call.id == "cutlocus_bound" and "directions" not in params:
        params["directions"] = manifold.resolution.directions
    try:
        rep = run_verifier(call.id, manifold, scenario.k, params, tolerance=scenario.tolerance_for(call.id),
                           equality=call.equality, scenario=scenario.name)
    except IsocompareError as exc:
        rep = VerificationReport.failure(call.id, scenario.name, exc)
    if "equality" in scenario.tolerances:
        rep.equality_tolerance = float(scenario.tolerances["equality"])
    return rep


def run(scenario: Scenario, parallelism: int = 1) -> list[VerificationReport]:
    """Run every verifier; the result is ordered by theorem id, then by position in the file."""
    jobs = max(1, int(parallelism))
    calls = list(enumerate(scenario.verifiers))
    if jobs == 1:
        reports = [_run_one(scenario, c) for _, c in calls]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda ic: _run_one(scenario, ic[1]), calls))
    order = sorted(range(len(calls)), key=lambda i: (calls[i][1].id, i))
    return [reports[i] for i in order]


def exit_status(reports) -> int:
    """3 on any engine error, else 1 on any inequality failure, else 2 on hypothesis trouble, else 0."""
    statuses = {r.status for r in reports}
    if "error" in statuses:
        return EXIT_ERROR
    if "fail" in statuses:
        return EXIT_FAIL
    if statuses & {"hypothesis-failure", "not-applicable"}:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def with_overrides(scenario: Scenario, tolerance=None, samples=None) -> Scenario:
    """Apply the command-line --tol and --samples overrides."""
    tols, res = dict(scenario.tolerances), dict(scenario.resolution)
    if tolerance is not None:
        tolerance = _finite("--tol", tolerance)
        if tolerance < TOLERANCE_FLOOR:
            raise ScenarioError(f"--tol {tolerance!r} is below the floor {TOLERANCE_FLOOR}")
        tols["default"] = tolerance
        for key in list(tols):
            if key not in ("default", "equality"):
                del tols[key]
    if samples is not None:
        if int(samples) <= 0:
            raise ScenarioError("--samples must be positive")
        res["panels"] = int(samples)
    return replace(scenario, tolerances=tols, resolution=res)


# -- emission ------------------------------------------------------------------------

def _plain(obj):
    """Reduce numpy scalars and arrays to Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _float17(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float at 17 significant digits; non-finite floats become strings."""
    obj = _plain(obj) if _level == 0 else obj
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float17(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


_NONFINITE = {"nan": math.nan, "inf": math.inf, "-inf": -math.inf}


def _revive(obj):
    if isinstance(obj, dict):
        return {k: _revive(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_revive(v) for v in obj]
    if isinstance(obj, str) and obj in _NONFINITE:
        return _NONFINITE[obj]
    return obj


def reports_to_json(reports) -> str:
    if not reports:
        raise ScenarioError("no reports to emit")
    return dumps({"version": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]}) + "\n"


def reports_from_json(text: str) -> list[VerificationReport]:
    try:
        data = _revive(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"report JSON parse error at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or data.get("version") != SCHEMA_VERSION or "reports" not in data:
        raise ScenarioError("not a v1 report document")
    return [VerificationReport.from_dict(d) for d in data["reports"]]


def _g9(x) -> str:
    return format(float(x), ".9g")


def reports_to_csv(reports) -> str:
    if not reports:
        raise ScenarioError("no reports to emit")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem_id", "scenario", "lhs", "rhs", "margin", "pass", "status"])
    for r in reports:
        w.writerow([r.theorem_id, r.scenario, _g9(r.lhs), _g9(r.rhs), _g9(r.margin),
                    "true" if r.passed else "false", r.status])
    return buf.getvalue()


def reports_to_plotdata(reports) -> dict[str, str]:
    """File name -> contents: one checks table per report plus one file per recorded series."""
    if not reports:
        raise ScenarioError("no reports to emit")
    files = {}
    seen = {}
    for r in reports:
        stem = f"{r.scenario or 'scenario'}_{r.theorem_id}"
        seen[stem] = seen.get(stem, 0) + 1
        if seen[stem] > 1:
            stem += f"_{seen[stem]}"
        head = f"# theorem: {r.theorem_id}\n# scenario: {r.scenario}\n"
        rows = [f"{_g17(c.x if c.x is not None else i)} {_g17(c.lhs)} {_g17(c.rhs)} {_g17(c.margin)}"
                for i, c in enumerate(r.checks)]
        files[f"{stem}.dat"] = head + "# columns: x lhs rhs margin\n" + "".join(s + "\n" for s in rows)
        for name, series in r.series.items():
            cols = SERIES_COLUMNS.get(name)
            width = len(series[0]) if series else 0
            if cols is None or len(cols) != width:
                cols = tuple(f"c{j}" for j in range(width))
            body = "".join(" ".join(_g17(v) for v in row) + "\n" for row in series)
            files[f"{stem}_{name}.dat"] = head + f"# series: {name}\n# columns: {' '.join(cols)}\n" + body
    return files


def _g17(x) -> str:
    return format(float(x), ".17g")


def write_outputs(reports, out_dir, formats=("json", "csv", "plotdata")) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        written.append(out / "reports.json")
        written[-1].write_text(reports_to_json(reports))
    if "csv" in formats:
        written.append(out / "reports.csv")
        written[-1].write_text(reports_to_csv(reports))
    if "plotdata" in formats:
        folder = out / "plotdata"
        folder.mkdir(exist_ok=True)
        for name, text in reports_to_plotdata(reports).items():
            written.append(folder / name)
            written[-1].write_text(text)
    return written


def summary_line(r: VerificationReport) -> str:
    return (f"{r.status.upper():18s} {r.theorem_id:20s} {r.scenario}: lhs={_g9(r.lhs)} "
            f"{r.sense} rhs={_g9(r.rhs)} margin={_g9(r.margin)}")


__all__ = ["Scenario", "VerifierCall", "load_scenario", "scenario_from_dict", "run", "exit_status",
           "with_overrides", "reports_to_json", "reports_from_json", "reports_to_csv", "reports_to_plotdata",
           "write_outputs", "bundled_scenarios", "dumps", "SCHEMA_VERSION"]
