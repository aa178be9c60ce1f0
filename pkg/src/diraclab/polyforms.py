"""Polynomial differential forms on euclidean space, used as ambient
representatives of sections over the unit sphere.

A form is a sparse map from ascending multi-indices (bitmasks over the
ambient coordinates x_0..x_n) to polynomial coefficients with exact
rational arithmetic, so exterior derivatives and interior products stay
exact until a final float evaluation at sample points.

The intrinsic operators of the embedded sphere are expressed through the
ambient ones: with position field x and unit normal x at points of the
sphere,

    tangential part   w_T = w - x_flat ^ (i_x w)
    sphere star       *w  = (-1)^p i_x *_amb (w_T)        (p = deg w)
    sphere codiff     dw* = (-1)^(n(p+1)+1) * d * w

all of which keep polynomial data polynomial.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .multivector import blade_wedge, swap_count


class Poly:
    """Sparse multivariate polynomial: {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        data = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} has wrong length")
                if c != 0:
                    data[exps] = c
        self.terms = data

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        exps = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, {exps: 1})

    @classmethod
    def linear(cls, coeffs) -> "Poly":
        """sum_i coeffs[i] * x_i."""
        coeffs = list(coeffs)
        n = len(coeffs)
        return cls(n, {tuple(1 if k == i else 0 for k in range(n)): c
                       for i, c in enumerate(coeffs) if c != 0})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        data = dict(self.terms)
        for e, c in other.terms.items():
            data[e] = data.get(e, 0) + c
        return Poly(self.nvars, data)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        data = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                data[e] = data.get(e, 0) + ca * cb
        return Poly(self.nvars, data)

    def scale(self, factor) -> "Poly":
        if factor == 0:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: factor * c for e, c in self.terms.items()})

    def diff(self, i: int) -> "Poly":
        data = {}
        for e, c in self.terms.items():
            if e[i]:
                de = tuple(x - 1 if k == i else x for k, x in enumerate(e))
                data[de] = data.get(de, 0) + e[i] * c
        return Poly(self.nvars, data)

    def eval(self, point) -> float:
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for xi, p in zip(point, e):
                if p:
                    term *= xi ** p if p > 1 else xi
            total += term
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            mono = "*".join(f"x{i}^{p}" if p > 1 else f"x{i}"
                            for i, p in enumerate(e) if p)
            c = self.terms[e]
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class PolyForm:
    """Polynomial differential form of fixed degree on R^nvars.

    Components are keyed by bitmasks over the ambient coordinates; the
    component at mask {i1 < ... < ip} is the coefficient of dx_i1^...^dx_ip.
    """

    __slots__ = ("nvars", "degree", "comps")

    def __init__(self, nvars: int, degree: int, comps=None):
        if not 0 <= degree <= nvars:
            raise ValueError(f"form degree {degree} out of range 0..{nvars}")
        self.nvars = nvars
        self.degree = degree
        data = {}
        if comps:
            for mask, poly in comps.items():
                if mask.bit_count() != degree:
                    raise ValueError(f"mask {mask:#x} has wrong grade for degree {degree}")
                if poly:
                    data[mask] = poly
        self.comps = data

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "PolyForm":
        return cls(nvars, degree)

    @classmethod
    def function(cls, poly: Poly) -> "PolyForm":
        return cls(poly.nvars, 0, {0: poly})

    @classmethod
    def constant_one_form(cls, coeffs) -> "PolyForm":
        """sum_i coeffs[i] dx_i with constant coefficients."""
        coeffs = list(coeffs)
        n = len(coeffs)
        return cls(n, 1, {1 << i: Poly.const(n, c) for i, c in enumerate(coeffs) if c != 0})

    @classmethod
    def top(cls, nvars: int) -> "PolyForm":
        """dx_0 ^ ... ^ dx_{nvars-1}."""
        return cls(nvars, nvars, {(1 << nvars) - 1: Poly.const(nvars, 1)})

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if (self.nvars, self.degree) != (other.nvars, other.degree):
            raise ValueError("form shape mismatch")
        data = dict(self.comps)
        for mask, poly in other.comps.items():
            cur = data.get(mask)
            data[mask] = poly if cur is None else cur + poly
        return PolyForm(self.nvars, self.degree, data)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + other.scale(-1)

    def scale(self, factor) -> "PolyForm":
        return PolyForm(self.nvars, self.degree,
                        {m: p.scale(factor) for m, p in self.comps.items()})

    def wedge(self, other: "PolyForm") -> "PolyForm":
        data = {}
        for ma, pa in self.comps.items():
            for mb, pb in other.comps.items():
                sign, mask = blade_wedge(ma, mb)
                if sign:
                    term = (pa * pb).scale(sign)
                    cur = data.get(mask)
                    data[mask] = term if cur is None else cur + term
        return PolyForm(self.nvars, self.degree + other.degree, data)

    def d(self) -> "PolyForm":
        """Exterior derivative."""
        data = {}
        for mask, poly in self.comps.items():
            for i in range(self.nvars):
                dp = poly.diff(i)
                if not dp:
                    continue
                sign, out = blade_wedge(1 << i, mask)
                if sign:
                    term = dp.scale(sign)
                    cur = data.get(out)
                    data[out] = term if cur is None else cur + term
        return PolyForm(self.nvars, self.degree + 1, data)

    def interior(self, vector_field) -> "PolyForm":
        """Interior product with a polynomial vector field (list of Poly)."""
        data = {}
        for mask, poly in self.comps.items():
            for i, vi in enumerate(vector_field):
                if not vi or not mask >> i & 1:
                    continue
                below = mask & ((1 << i) - 1)
                sign = -1 if below.bit_count() & 1 else 1
                out = mask ^ (1 << i)
                term = (vi * poly).scale(sign)
                cur = data.get(out)
                data[out] = term if cur is None else cur + term
        return PolyForm(self.nvars, self.degree - 1, data)

    def ambient_hodge(self) -> "PolyForm":
        """Euclidean Hodge star of R^nvars on the component masks."""
        full = (1 << self.nvars) - 1
        data = {}
        for mask, poly in self.comps.items():
            comp = full ^ mask
            sign = -1 if swap_count(mask, comp) & 1 else 1
            data[comp] = poly.scale(sign)
        return PolyForm(self.nvars, self.nvars - self.degree, data)

    def eval(self, point) -> dict:
        """Float component values {mask: value} at an ambient point."""
        return {mask: poly.eval(point) for mask, poly in self.comps.items()}

    def max_poly_degree(self) -> int:
        return max((p.degree() for p in self.comps.values()), default=0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyForm)
                and (self.nvars, self.degree) == (other.nvars, other.degree)
                and self.comps == other.comps)

    def __repr__(self) -> str:
        if not self.comps:
            return "0-form 0" if self.degree == 0 else f"{self.degree}-form 0"
        bits = []
        for mask in sorted(self.comps):
            label = "^".join(f"dx{i}" for i in range(self.nvars) if mask >> i & 1) or "1"
            bits.append(f"({self.comps[mask]}) {label}")
        return " + ".join(bits)


def position_field(nvars: int) -> list[Poly]:
    return [Poly.variable(nvars, i) for i in range(nvars)]


def constant_field(coeffs) -> list[Poly]:
    coeffs = list(coeffs)
    n = len(coeffs)
    return [Poly.const(n, c) for c in coeffs]


def normal_one_form(nvars: int) -> PolyForm:
    """x_flat = sum_i x_i dx_i, dual of the unit normal on the sphere."""
    return PolyForm(nvars, 1, {1 << i: Poly.variable(nvars, i) for i in range(nvars)})


def tangential_part(form: PolyForm) -> PolyForm:
    """Representative with vanishing normal components on the sphere;
    has the same pullback to the sphere as the input."""
    if form.degree == 0:
        return form
    nu = normal_one_form(form.nvars)
    return form - nu.wedge(form.interior(position_field(form.nvars)))


def sphere_hodge(form: PolyForm) -> PolyForm:
    """Ambient representative of the intrinsic Hodge star on the unit
    sphere, oriented by the volume form i_x (dx_0^...^dx_n)."""
    p = form.degree
    starred = tangential_part(form).ambient_hodge().interior(position_field(form.nvars))
    return starred.scale(-1) if p & 1 else starred


def sphere_codifferential(form: PolyForm, n: int) -> PolyForm:
    """Ambient representative of the codifferential d* on p-forms of the
    n-sphere, via (-1)^(n(p+1)+1) * d *."""
    p = form.degree
    if p == 0:
        return PolyForm.zero(form.nvars, 0)
    out = sphere_hodge(sphere_hodge(form).d())
    sign = (-1) ** (n * (p + 1) + 1)
    return out.scale(sign)


def sphere_volume_form(nvars: int) -> PolyForm:
    """i_x (dx_0 ^ ... ^ dx_n), the intrinsic volume form of the sphere."""
    return PolyForm.top(nvars).interior(position_field(nvars))


def rational_point(rng, nvars: int, denom: int = 64):
    """Random rational ambient direction (not normalized); exact data for
    constructors that must keep derivatives exact."""
    return [Fraction(int(rng.integers(-denom, denom + 1)), denom) for _ in range(nvars)]


def unit_sphere_point(rng, n: int) -> np.ndarray:
    """Seeded normal-then-normalize sample on the n-sphere in R^(n+1)."""
    while True:
        v = rng.standard_normal(n + 1)
        norm = np.linalg.norm(v)
        if norm > 0.1:
            return v / norm
