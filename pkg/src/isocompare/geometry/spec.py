"""Immutable, serialisable descriptions of the test manifolds.

A :class:`ManifoldSpec` is the JSON-facing handle on the zoo.  ``build()``
returns the engine object; builds are memoised per (kind, parameters,
resolution) so that repeated verifiers share cut distances, foot-point
clouds and meshes.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import asdict, dataclass, field, fields

from ..errors import DomainError
from .closed import FlatTorus, ProjectivePlane
from .domains import RadialDomain, Resolution, RevolutionDomain, TorusHoleDomain, WarpedBall, model_ball
from .shapes import shape_from_dict
from .spaceform import SpaceForm

KINDS = ("ModelBall", "EuclideanDomain", "HyperbolicDomain", "SphericalDomain", "WarpedProduct",
         "SurfaceOfRevolution", "FlatTorus", "ProjectivePlaneQuotient", "SpaceForm")

# required and optional parameter names per kind
_PARAMS = {
    "ModelBall": ({"k", "n", "radius"}, set()),
    "EuclideanDomain": ({"n", "shape"}, set()),
    "HyperbolicDomain": ({"n", "shape"}, {"k"}),
    "SphericalDomain": ({"n", "shape"}, {"k"}),
    "WarpedProduct": ({"n", "radius", "profile"}, set()),
    "SurfaceOfRevolution": ({"profile"}, set()),
    "FlatTorus": (set(), {"a", "b", "hole"}),
    "ProjectivePlaneQuotient": (set(), {"r"}),
    "SpaceForm": ({"k", "n"}, set()),
}

_RESOLUTION_FIELDS = {f.name for f in fields(Resolution)}

_builds: dict = {}
_builds_lock = threading.Lock()


def _number(name, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"parameter {name!r} must be a number, got {value!r}")
    if integer and int(value) != value:
        raise DomainError(f"parameter {name!r} must be an integer, got {value!r}")
    if not math.isfinite(value):
        raise DomainError(f"parameter {name!r} must be finite")
    return int(value) if integer else float(value)


def resolution_from_dict(d: dict | None) -> Resolution:
    d = dict(d or {})
    unknown = set(d) - _RESOLUTION_FIELDS
    if unknown:
        raise DomainError(f"unknown resolution fields {sorted(unknown)}")
    for key, val in d.items():
        if val is not None:
            d[key] = _number(key, val, integer=True)
    return Resolution(**d).validate()


def resolution_to_dict(res: Resolution) -> dict:
    default = Resolution()
    return {k: v for k, v in asdict(res).items() if v != getattr(default, k)}


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    params_json: str = "{}"
    resolution: Resolution = field(default_factory=Resolution)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown manifold kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        required, optional = _PARAMS[self.kind]
        params = self.params
        missing = required - set(params)
        if missing:
            raise DomainError(f"{self.kind} is missing {sorted(missing)}")
        unknown = set(params) - required - optional
        if unknown:
            raise DomainError(f"{self.kind} does not accept {sorted(unknown)}")
        self.resolution.validate()

    # -- construction ---------------------------------------------------------
    @classmethod
    def make(cls, kind: str, resolution: Resolution | None = None, **params) -> "ManifoldSpec":
        return cls(kind, json.dumps(params, sort_keys=True), resolution or Resolution())

    @classmethod
    def from_dict(cls, d: dict) -> "ManifoldSpec":
        if not isinstance(d, dict):
            raise DomainError("manifold description must be an object")
        d = dict(d)
        kind = d.pop("kind", None)
        if kind is None:
            raise DomainError("manifold description needs a 'kind'")
        res = resolution_from_dict(d.pop("resolution", None))
        return cls.make(kind, res, **d)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, **self.params}
        res = resolution_to_dict(self.resolution)
        if res:
            d["resolution"] = res
        return d

    def with_resolution(self, **changes) -> "ManifoldSpec":
        res = resolution_from_dict({**asdict(self.resolution), **changes})
        return ManifoldSpec(self.kind, self.params_json, res)

    @property
    def params(self) -> dict:
        return json.loads(self.params_json)

    # -- building -------------------------------------------------------------
    def build(self):
        key = (self.kind, self.params_json, self.resolution)
        with _builds_lock:
            obj = _builds.get(key)
            if obj is None:
                obj = _builds[key] = self._construct()
        return obj

    def _construct(self):
        p = self.params
        res = self.resolution
        kind = self.kind
        if kind == "ModelBall":
            k, n, r = _number("k", p["k"]), _number("n", p["n"], True), _number("radius", p["radius"])
            if r <= 0:
                raise DomainError("ball radius must be positive")
            return model_ball(k, n, r, res)
        if kind in ("EuclideanDomain", "HyperbolicDomain", "SphericalDomain"):
            default_k = {"EuclideanDomain": 0.0, "HyperbolicDomain": -1.0, "SphericalDomain": 1.0}[kind]
            k = _number("k", p.get("k", default_k))
            if (kind == "HyperbolicDomain" and k >= 0) or (kind == "SphericalDomain" and k <= 0):
                raise DomainError(f"{kind} has the wrong sign of k ({k})")
            outer, inner = shape_from_dict(p["shape"])
            return RadialDomain(SpaceForm(k, _number("n", p["n"], True)), outer, inner, kind, res)
        if kind == "WarpedProduct":
            if not isinstance(p["profile"], dict):
                raise DomainError("warping profile must be an object")
            return WarpedBall(p["profile"], _number("n", p["n"], True), _number("radius", p["radius"]), res)
        if kind == "SurfaceOfRevolution":
            prof = p["profile"]
            if not isinstance(prof, dict) or prof.get("type") != "exp" or set(prof) != {"type", "L"}:
                raise DomainError("surface of revolution profile must be {'type': 'exp', 'L': ...}")
            return RevolutionDomain(_number("L", prof["L"]), res)
        if kind == "FlatTorus":
            torus = FlatTorus(_number("a", p.get("a", 1.0)), _number("b", p.get("b", 1.0)))
            hole = p.get("hole")
            if hole is None:
                return torus
            if not isinstance(hole, dict) or set(hole) - {"center", "radius"} or "radius" not in hole:
                raise DomainError("torus hole must be {'center': [x, y], 'radius': r}")
            center = [_number("center", c) for c in hole.get("center", [0.0, 0.0])]
            if len(center) != 2:
                raise DomainError("torus hole centre needs two coordinates")
            return TorusHoleDomain(torus, center, _number("radius", hole["radius"]), res)
        if kind == "ProjectivePlaneQuotient":
            return ProjectivePlane(_number("r", p.get("r", 1.0)))
        k, n = _number("k", p["k"]), _number("n", p["n"], True)
        return SpaceForm(k, n)

    def __repr__(self):
        return f"ManifoldSpec({self.kind}, {self.params_json})"
