"""Radial functions describing star-shaped regions in tangent polar coordinates.

A shape maps unit vectors omega of R^n (shape (Q, n)) to the boundary
radius R(omega).  Shapes with corners list the polar angles of the
corners (n = 2 only) so quadrature panels and finite-difference stencils
never straddle them.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError


class Shape:
    name = "shape"
    dims = (2, 3)

    def radius(self, omega: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def corners(self) -> tuple:
        return ()

    def max_radius(self) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def check_dim(self, n: int):
        if n not in self.dims:
            raise DomainError(f"shape {self.name!r} is not available in dimension {n}")


class Ball(Shape):
    name = "ball"

    def __init__(self, radius: float):
        if not radius > 0:
            raise DomainError("ball radius must be positive")
        self.r = float(radius)

    def radius(self, omega):
        return np.full(np.asarray(omega).shape[0], self.r)

    def max_radius(self):
        return self.r

    def to_dict(self):
        return {"type": "ball", "radius": self.r}


class Ellipsoid(Shape):
    """Semi-axes a_i along the tangent frame (an ellipse when n = 2)."""

    name = "ellipsoid"

    def __init__(self, axes):
        self.axes = np.asarray(axes, dtype=float)
        if np.any(self.axes <= 0):
            raise DomainError("ellipsoid semi-axes must be positive")

    def check_dim(self, n):
        if self.axes.size != n:
            raise DomainError(f"ellipsoid needs {n} semi-axes, got {self.axes.size}")

    def radius(self, omega):
        return 1.0 / np.sqrt(np.sum((np.asarray(omega) / self.axes) ** 2, axis=1))

    def max_radius(self):
        return float(self.axes.max())

    def to_dict(self):
        return {"type": "ellipsoid", "axes": self.axes.tolist()}


class Rectangle(Shape):
    """Axis-parallel rectangle with side lengths ``width`` x ``height``."""

    name = "rectangle"
    dims = (2,)

    def __init__(self, width: float, height: float):
        if not (width > 0 and height > 0):
            raise DomainError("rectangle sides must be positive")
        self.width, self.height = float(width), float(height)

    def radius(self, omega):
        omega = np.asarray(omega)
        a, b = 0.5 * self.width, 0.5 * self.height
        with np.errstate(divide="ignore"):
            rx = np.where(np.abs(omega[:, 0]) > 0, a / np.abs(omega[:, 0]), np.inf)
            ry = np.where(np.abs(omega[:, 1]) > 0, b / np.abs(omega[:, 1]), np.inf)
        return np.minimum(rx, ry)

    def corners(self):
        t = math.atan2(self.height, self.width)
        return (t, math.pi - t, math.pi + t, 2 * math.pi - t)

    def max_radius(self):
        return 0.5 * math.hypot(self.width, self.height)

    def to_dict(self):
        return {"type": "rectangle", "width": self.width, "height": self.height}


class Superellipse(Shape):
    """|x/a|^p + |y/b|^p = 1: a rectangle with smoothed corners for large p."""

    name = "superellipse"
    dims = (2,)

    def __init__(self, width: float, height: float, power: float):
        if not (width > 0 and height > 0 and power >= 2):
            raise DomainError("superellipse needs positive sides and power >= 2")
        self.width, self.height, self.p = float(width), float(height), float(power)

    def radius(self, omega):
        omega = np.asarray(omega)
        a, b = 0.5 * self.width, 0.5 * self.height
        s = np.abs(omega[:, 0] / a) ** self.p + np.abs(omega[:, 1] / b) ** self.p
        return s ** (-1.0 / self.p)

    def max_radius(self):
        return 0.5 * math.hypot(self.width, self.height)

    def to_dict(self):
        return {"type": "superellipse", "width": self.width, "height": self.height,
                "power": self.p}


class PerturbedCircle(Shape):
    """R(theta) = r (1 + eps cos(mode theta))."""

    name = "perturbed_circle"
    dims = (2,)

    def __init__(self, radius: float, eps: float, mode: int = 3):
        if not (radius > 0 and 0 <= eps < 1):
            raise DomainError("perturbed circle needs r > 0 and 0 <= eps < 1")
        self.r, self.eps, self.mode = float(radius), float(eps), int(mode)

    def radius(self, omega):
        omega = np.asarray(omega)
        th = np.arctan2(omega[:, 1], omega[:, 0])
        return self.r * (1.0 + self.eps * np.cos(self.mode * th))

    def max_radius(self):
        return self.r * (1.0 + self.eps)

    def to_dict(self):
        return {"type": "perturbed_circle", "radius": self.r, "eps": self.eps, "mode": self.mode}


def shape_from_dict(d: dict) -> tuple[Shape, Shape | None]:
    """Build (outer, inner) shapes; ``annulus`` is the only shape with a hole."""
    d = dict(d)
    kind = d.pop("type", None)
    inner = None
    try:
        if kind == "ball":
            outer = Ball(d.pop("radius"))
        elif kind in ("ellipsoid", "ellipse"):
            outer = Ellipsoid(d.pop("axes"))
        elif kind == "rectangle":
            outer = Rectangle(d.pop("width"), d.pop("height"))
        elif kind == "superellipse":
            outer = Superellipse(d.pop("width"), d.pop("height"), d.pop("power"))
        elif kind == "perturbed_circle":
            outer = PerturbedCircle(d.pop("radius"), d.pop("eps"), d.pop("mode", 3))
        elif kind == "annulus":
            r_in, r_out = float(d.pop("inner")), float(d.pop("outer"))
            if not 0 < r_in < r_out:
                raise DomainError("annulus needs 0 < inner < outer")
            outer, inner = Ball(r_out), Ball(r_in)
        elif kind is None:
            raise DomainError("shape needs a 'type'")
        else:
            raise DomainError(f"unknown shape type {kind!r}")
    except KeyError as exc:
        raise DomainError(f"shape {kind!r} is missing field {exc.args[0]!r}") from None
    if d:
        raise DomainError(f"unknown shape fields {sorted(d)}")
    return outer, inner


def shape_to_dict(outer: Shape, inner: Shape | None) -> dict:
    if inner is not None:
        return {"type": "annulus", "inner": inner.r, "outer": outer.r}
    return outer.to_dict()
