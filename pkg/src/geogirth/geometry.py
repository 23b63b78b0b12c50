"""Exact symbolic point sets: rotations, blow-up embeddings, tensor squares.

A point is ``scale * base`` (``raw``/``tensor`` layout) or
``scale * (base * cos 2*pi*a, base * sin 2*pi*a)`` (``rotated-pair`` and
``plane-combination`` layouts), with ``base`` an integer vector, ``a`` a
rational number of turns and ``scale`` either a positive rational or the
square root of one.  Every orthogonality and distance decision then reduces
to integer arithmetic plus the rational values of cos(2*pi*a) (Niven).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParameterError, UnsupportedInputError
from .graph import Graph
from .report import Report

LAYOUTS = ("rotated-pair", "plane-combination", "tensor", "raw")
KINDS = ("orthogonality-sphere", "unit-distance", "diameter")
PAIR_LAYOUTS = ("rotated-pair", "plane-combination")

#: Denominator multiplier of the blow-up angle scheme.
ANGLE_K = 4


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class Scale:
    """``num/den`` or, with ``sqrt``, ``sqrt(num/den)``; always positive."""

    num: int = 1
    den: int = 1
    sqrt: bool = False

    def __post_init__(self):
        if self.num <= 0 or self.den <= 0:
            raise ParameterError("scale must be positive")
        r = Fraction(self.num, self.den)
        if self.sqrt:
            root = _rational_sqrt(r)
            if root is not None:
                r, sq = root, False
            else:
                sq = True
        else:
            sq = False
        object.__setattr__(self, "num", r.numerator)
        object.__setattr__(self, "den", r.denominator)
        object.__setattr__(self, "sqrt", sq)

    @classmethod
    def of(cls, r: Fraction | int) -> Scale:
        r = Fraction(r)
        return cls(r.numerator, r.denominator, False)

    @classmethod
    def root_of(cls, r: Fraction | int) -> Scale:
        r = Fraction(r)
        return cls(r.numerator, r.denominator, True)

    @property
    def square(self) -> Fraction:
        r = Fraction(self.num, self.den)
        return r if self.sqrt else r * r

    @property
    def rational(self) -> Fraction | None:
        return None if self.sqrt else Fraction(self.num, self.den)

    def __mul__(self, other: Scale) -> Scale:
        if not self.sqrt and not other.sqrt:
            return Scale.of(Fraction(self.num, self.den) * Fraction(other.num, other.den))
        return Scale.root_of(self.square * other.square)

    def __float__(self) -> float:
        r = self.num / self.den
        return math.sqrt(r) if self.sqrt else r

    def to_json_dict(self) -> dict:
        return {"num": self.num, "den": self.den, "sqrt": self.sqrt}


ONE = Scale()

_NIVEN_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 6): Fraction(1, 2),
    Fraction(1, 4): Fraction(0),
    Fraction(1, 3): Fraction(-1, 2),
    Fraction(1, 2): Fraction(-1),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(3, 4): Fraction(0),
    Fraction(5, 6): Fraction(1, 2),
}


def cos_turn(t: Fraction) -> Fraction | None:
    """cos(2*pi*t) when it is rational, else None."""
    return _NIVEN_COS.get(Fraction(t) % 1)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _primitive(vec: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g == 0:
        return vec, 1
    return tuple(x // g for x in vec), g


class SymbolicPoint:
    """A point of R^d in exact symbolic form; equality is geometric equality."""

    __slots__ = ("base", "angle_num", "angle_den", "scale", "layout", "_key")

    def __init__(
        self,
        base: Sequence[int],
        angle_num: int = 0,
        angle_den: int = 1,
        scale: Scale = ONE,
        layout: str = "raw",
    ):
        if layout not in LAYOUTS:
            raise ParameterError(f"unknown layout {layout!r}")
        if angle_den < 1 or not 0 <= angle_num < angle_den:
            raise ParameterError("angle must satisfy 0 <= num < den")
        if layout not in PAIR_LAYOUTS and angle_num != 0:
            raise ParameterError(f"{layout} points carry no angle")
        self.base = tuple(int(x) for x in base)
        self.angle_num = angle_num
        self.angle_den = angle_den
        self.scale = scale
        self.layout = layout
        self._key = None

    @property
    def is_pair(self) -> bool:
        return self.layout in PAIR_LAYOUTS

    @property
    def turn(self) -> Fraction:
        return Fraction(self.angle_num, self.angle_den)

    @property
    def ambient_dim(self) -> int:
        return 2 * len(self.base) if self.is_pair else len(self.base)

    @property
    def squared_norm(self) -> Fraction:
        # rotation in the pair plane preserves norm
        return self.scale.square * _dot(self.base, self.base)

    def materialize(self) -> tuple[tuple[int, ...], Scale] | None:
        """Integer coordinates and scale, when the angle is a multiple of 1/8 turn."""
        if not self.is_pair:
            return self.base, self.scale
        eighths = self.turn * 8
        if eighths.denominator != 1:
            return None
        b = self.base
        neg = tuple(-x for x in b)
        zero = (0,) * len(b)
        e = int(eighths)
        if e % 2 == 0:
            first, second = {0: (b, zero), 2: (zero, b), 4: (neg, zero), 6: (zero, neg)}[e]
            return first + second, self.scale
        first, second = {1: (b, b), 3: (neg, b), 5: (neg, neg), 7: (b, neg)}[e]
        return first + second, self.scale * Scale.root_of(Fraction(1, 2))

    def as_pair(self) -> tuple[tuple[int, ...], Fraction, Scale] | None:
        """(base, turn, scale) pair form, when one exists."""
        if self.is_pair:
            return self.base, self.turn, self.scale
        if len(self.base) % 2:
            return None
        h = len(self.base) // 2
        c1, c2 = self.base[:h], self.base[h:]
        if not any(c2):
            return c1, Fraction(0), self.scale
        if not any(c1):
            return c2, Fraction(1, 4), self.scale
        root2 = Scale.root_of(2)
        if c1 == c2:
            return c1, Fraction(1, 8), self.scale * root2
        if c1 == tuple(-x for x in c2):
            return c1, Fraction(7, 8), self.scale * root2
        return None

    def key(self) -> tuple:
        if self._key is None:
            self._key = self._canonical()
        return self._key

    def _canonical(self) -> tuple:
        mat = self.materialize()
        if mat is not None:
            vec, s = mat
            vec, g = _primitive(vec)
            return ("raw", vec, s.square * g * g)
        vec, g = _primitive(self.base)
        t = self.turn % 1
        if t >= Fraction(1, 2):
            vec, t = tuple(-x for x in vec), t - Fraction(1, 2)
        return ("pair", vec, t, self.scale.square * g * g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolicPoint):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"SymbolicPoint(base={self.base}, angle={self.angle_num}/{self.angle_den}, "
            f"scale={self.scale}, layout={self.layout!r})"
        )

    def to_floats(self) -> list[float]:
        s = float(self.scale)
        if not self.is_pair:
            return [s * x for x in self.base]
        theta = 2 * math.pi * self.angle_num / self.angle_den
        c, sn = math.cos(theta), math.sin(theta)
        return [s * x * c for x in self.base] + [s * x * sn for x in self.base]

    def with_scale(self, factor: Scale) -> SymbolicPoint:
        return SymbolicPoint(self.base, self.angle_num, self.angle_den, self.scale * factor, self.layout)

    def to_json_dict(self) -> dict:
        return {
            "base": list(self.base),
            "angle": {"num": self.angle_num, "den": self.angle_den},
            "scale": self.scale.to_json_dict(),
            "layout": self.layout,
        }

    @classmethod
    def from_json_dict(cls, d: Mapping) -> SymbolicPoint:
        sc = d["scale"]
        return cls(
            d["base"],
            d["angle"]["num"],
            d["angle"]["den"],
            Scale(sc["num"], sc["den"], sc["sqrt"]),
            d.get("layout", "raw"),
        )


@dataclass(frozen=True)
class InnerProduct:
    """``scale * base * cos(2*pi*turn)``."""

    base: int
    turn: Fraction
    scale: Scale

    @property
    def is_zero(self) -> bool:
        return self.base == 0 or self.turn % 1 in (Fraction(1, 4), Fraction(3, 4))

    @property
    def exact(self) -> Fraction | None:
        """The value as a rational, or None when it is irrational."""
        if self.is_zero:
            return Fraction(0)
        c, s = cos_turn(self.turn), self.scale.rational
        if c is None or s is None:
            return None
        return self.base * c * s

    def __float__(self) -> float:
        return self.base * math.cos(2 * math.pi * self.turn) * float(self.scale)


def symbolic_inner_product(a: SymbolicPoint, b: SymbolicPoint) -> InnerProduct:
    if a.ambient_dim != b.ambient_dim:
        raise ParameterError("points live in different dimensions")
    if a.is_pair and b.is_pair:
        return InnerProduct(_dot(a.base, b.base), (a.turn - b.turn) % 1, a.scale * b.scale)
    if not a.is_pair and not b.is_pair:
        return InnerProduct(_dot(a.base, b.base), Fraction(0), a.scale * b.scale)
    pa, pb = a.as_pair(), b.as_pair()
    if pa is None or pb is None or len(pa[0]) != len(pb[0]):
        raise ParameterError("incompatible layouts")
    return InnerProduct(_dot(pa[0], pb[0]), (pa[1] - pb[1]) % 1, pa[2] * pb[2])


@dataclass(frozen=True)
class TrigValue:
    """``const + coef * cos(2*pi*turn)`` with rational const and coef."""

    const: Fraction
    coef: Fraction = Fraction(0)
    turn: Fraction = Fraction(0)

    @property
    def rational(self) -> Fraction | None:
        if self.coef == 0:
            return self.const
        c = cos_turn(self.turn)
        return None if c is None else self.const + self.coef * c

    def equals(self, x: Fraction | int) -> bool:
        # an irrational cosine never yields a rational total unless coef == 0
        r = self.rational
        return r is not None and r == x

    def __float__(self) -> float:
        return float(self.const) + float(self.coef) * math.cos(2 * math.pi * self.turn)


def squared_distance(a: SymbolicPoint, b: SymbolicPoint) -> TrigValue:
    ip = symbolic_inner_product(a, b)
    norms = a.squared_norm + b.squared_norm
    if ip.is_zero:
        return TrigValue(norms)
    s = ip.scale.rational
    if s is None:
        raise UnsupportedInputError("distance between points with incommensurable scales")
    return TrigValue(norms, -2 * ip.base * s, ip.turn)


# ---------------------------------------------------------------- embeddings


@dataclass
class Embedding:
    points: dict[int, SymbolicPoint]
    ambient_dim: int
    kind: str = "orthogonality-sphere"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown embedding kind {self.kind!r}")
        seen: dict[tuple, int] = {}
        for vid, pt in self.points.items():
            if pt.ambient_dim != self.ambient_dim:
                raise ParameterError(f"point {vid} has dimension {pt.ambient_dim}, expected {self.ambient_dim}")
            k = pt.key()
            if k in seen:
                raise ParameterError(f"points {seen[k]} and {vid} coincide")
            seen[k] = vid
        if self.kind == "orthogonality-sphere" and self.common_squared_norm() is None and self.points:
            raise ParameterError("orthogonality-sphere points must share one squared norm")

    def __len__(self) -> int:
        return len(self.points)

    def ids(self) -> list[int]:
        return sorted(self.points)

    def common_squared_norm(self) -> Fraction | None:
        norms = {pt.squared_norm for pt in self.points.values()}
        return norms.pop() if len(norms) == 1 else None

    def to_json_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "kind": self.kind,
            "points": [{"id": i, **self.points[i].to_json_dict()} for i in self.ids()],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> Embedding:
        pts = {int(p["id"]): SymbolicPoint.from_json_dict(p) for p in data["points"]}
        return cls(pts, int(data["ambient_dim"]), data["kind"])

    def to_csv(self) -> str:
        """Float coordinates, one row per point.  Lossy; for plotting only."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id"] + [f"x{i}" for i in range(self.ambient_dim)])
        for i in self.ids():
            w.writerow([i] + [repr(x) for x in self.points[i].to_floats()])
        return buf.getvalue()


def rotate_family(vectors: Sequence, m: int) -> Embedding:
    """Points v(j) = (v cos 2*pi*j/m, v sin 2*pi*j/m); vertex id ``i*m + j``.

    ``vectors`` may be SignVectors or plain integer sequences.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    pts = {}
    dim = None
    for i, v in enumerate(vectors):
        coords = tuple(v.coords) if hasattr(v, "coords") else tuple(v)
        dim = 2 * len(coords)
        for j in range(m):
            pts[i * m + j] = SymbolicPoint(coords, j, m, ONE, "rotated-pair")
    return Embedding(pts, dim or 0, "orthogonality-sphere")


def raw_embedding(vectors: Iterable[Sequence[int]], kind: str = "orthogonality-sphere") -> Embedding:
    pts = {i: SymbolicPoint(tuple(v)) for i, v in enumerate(vectors)}
    dim = len(next(iter(pts.values())).base) if pts else 0
    return Embedding(pts, dim, kind)


def blowup_embed(base: Embedding, m: int) -> Embedding:
    """m unit points per base point inside span{(v, 0), (0, v)} in doubled dimension.

    The base point with sorted index s gets angles
    ``(t*K + s) / (m*K*N*K)`` turns, t = 0..m-1, N = number of base points.
    All angles stay below a quarter turn, so images of one base point are
    pairwise non-orthogonal and antipodal base points never collide.
    Image ids are ``s*m + t``, matching blowup_graph on the sorted base ids.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    if base.kind != "orthogonality-sphere":
        raise ParameterError("base embedding must be an orthogonality-sphere embedding")
    r2 = base.common_squared_norm()
    if r2 is None:
        raise ParameterError("base points are not on a common sphere")
    n = len(base)
    den = m * ANGLE_K * n * ANGLE_K
    normalise = Scale.root_of(1 / r2)
    pts = {}
    for s, vid in enumerate(base.ids()):
        mat = base.points[vid].materialize()
        if mat is None:
            raise UnsupportedInputError(f"base point {vid} has no integer coordinates")
        vec, sc = mat
        for t in range(m):
            pts[s * m + t] = SymbolicPoint(vec, t * ANGLE_K + s, den, sc * normalise, "plane-combination")
    return Embedding(pts, 2 * base.ambient_dim, "orthogonality-sphere")


def tensor_square(emb: Embedding) -> Embedding:
    """v -> v (x) v in dimension d**2; inner products become squares."""
    pts = {}
    for vid, pt in emb.points.items():
        mat = pt.materialize()
        if mat is None:
            raise UnsupportedInputError(f"point {vid} is not integer-representable")
        vec, sc = mat
        tensor = tuple(x * y for x in vec for y in vec)
        s2 = sc.square
        pts[vid] = SymbolicPoint(tensor, 0, 1, Scale.of(s2), "tensor")
    return Embedding(pts, emb.ambient_dim**2, "diameter")


def reduced_tensor_dimension(d: int) -> int:
    """Dimension of the span of all v (x) v for v in R^d: d + C(d, 2)."""
    if d < 1:
        raise ParameterError("d must be >= 1")
    return d + math.comb(d, 2)


def to_unit_distance(emb: Embedding) -> Embedding:
    """Rescale a common-norm orthogonality embedding so orthogonal pairs sit at distance 1."""
    if emb.kind != "orthogonality-sphere":
        raise ParameterError("unit-distance conversion needs an orthogonality-sphere embedding")
    r2 = emb.common_squared_norm()
    if r2 is None:
        raise ParameterError("points do not share one squared norm")
    factor = Scale.root_of(1 / (2 * r2))
    pts = {vid: pt.with_scale(factor) for vid, pt in emb.points.items()}
    return Embedding(pts, emb.ambient_dim, "unit-distance")


# ---------------------------------------------------------------- verification


def verify_orthogonality(emb: Embedding, graph: Graph) -> Report:
    for a, b in graph.edges():
        if a not in emb.points or b not in emb.points:
            return Report("orthogonality", False, {"reason": "vertex without a point"}, (a, b))
        if not symbolic_inner_product(emb.points[a], emb.points[b]).is_zero:
            return Report("orthogonality", False, {"reason": "edge not orthogonal"}, (a, b))
    return Report("orthogonality", True, {"edges_checked": graph.num_edges})


def verify_unit_distance(emb: Embedding, graph: Graph) -> Report:
    for a, b in graph.edges():
        d2 = squared_distance(emb.points[a], emb.points[b])
        if not d2.equals(1):
            return Report(
                "unit-distance", False, {"reason": "edge not at distance 1", "squared": float(d2)}, (a, b)
            )
    return Report("unit-distance", True, {"edges_checked": graph.num_edges})


def verify_diameter_property(emb: Embedding, graph: Graph) -> Report:
    """Every edge must realise the maximum pairwise distance of the point set.

    Non-adjacent pairs at the maximum are allowed (the graph need not be
    faithful) and are only counted; ``faithful`` records whether the maximal
    pairs are exactly the edges.
    """
    ids = emb.ids()
    if set(ids) != set(range(graph.n)):
        return Report("diameter", False, {"reason": "embedding ids do not match graph vertices"})
    best: Fraction | None = None
    at_max: set[tuple[int, int]] = set()
    for i, a in enumerate(ids):
        pa = emb.points[a]
        for b in ids[i + 1 :]:
            d2 = squared_distance(pa, emb.points[b]).rational
            if d2 is None:
                raise UnsupportedInputError("irrational squared distance")
            if best is None or d2 > best:
                best, at_max = d2, {(a, b)}
            elif d2 == best:
                at_max.add((a, b))
    edges = set(graph.edges())
    missing = sorted(edges - at_max)
    extra = sorted(at_max - edges)
    details = {
        "max_squared_distance": best,
        "pairs_at_max": len(at_max),
        "edges": len(edges),
        "non_edges_at_max": len(extra),
        "faithful": not missing and not extra,
    }
    if missing:
        return Report("diameter", False, {**details, "reason": "edge below the maximum distance"}, missing[0])
    return Report("diameter", True, details)
