"""Points of the projective plane PG(2, q) as left-normalized vectors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, FieldMismatch, PolarFlyError, ZeroVector
from .gf import FieldSpec


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A nonzero vector in GF(q)^3 whose first nonzero coordinate is 1."""

    coords: tuple[int, int, int]
    field: FieldSpec = field(compare=False, repr=False)

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if len(c) != 3:
            raise PolarFlyError("projective points have three coordinates")
        lead = next((x for x in c if x != 0), None)
        if lead is None:
            raise ZeroVector("the zero vector is not a projective point")
        if lead != 1:
            raise PolarFlyError(f"{c} is not left-normalized")
        object.__setattr__(self, "coords", c)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def _same_field(u: ProjectivePoint, v: ProjectivePoint):
    if u.field != v.field:
        raise FieldMismatch(f"{u.field!r} vs {v.field!r}")
    return u.field


def normalize_raw(F: FieldSpec, v) -> tuple[int, int, int]:
    """Scale ``v`` so its first nonzero coordinate is 1; returns a bare tuple."""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        raise ZeroVector("cannot normalize the zero vector")
    if lead == 1:
        return tuple(int(x) for x in v)
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in v)


def normalize(F: FieldSpec, v) -> ProjectivePoint:
    return ProjectivePoint(normalize_raw(F, v), F)


def dot_raw(F: FieldSpec, u, v) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return acc


def dot(u: ProjectivePoint, v: ProjectivePoint) -> int:
    return dot_raw(_same_field(u, v), u.coords, v.coords)


def is_quadric(v: ProjectivePoint) -> bool:
    return dot(v, v) == 0


def cross_raw(F: FieldSpec, s, d) -> tuple[int, int, int]:
    m, sub = F.mul, F.sub
    return (
        sub(m(s[1], d[2]), m(s[2], d[1])),
        sub(m(s[2], d[0]), m(s[0], d[2])),
        sub(m(s[0], d[1]), m(s[1], d[0])),
    )


def cross(s: ProjectivePoint, d: ProjectivePoint) -> ProjectivePoint:
    """The point orthogonal to both ``s`` and ``d``, left-normalized."""
    F = _same_field(s, d)
    raw = cross_raw(F, s.coords, d.coords)
    if not any(raw):
        raise DegenerateInput(f"{s.coords} and {d.coords} are the same projective point")
    return normalize(F, raw)


def enumerate_raw(F: FieldSpec) -> list[tuple[int, int, int]]:
    q = F.q
    pts = [(0, 0, 1)]
    pts += [(0, 1, z) for z in range(q)]
    pts += [(1, y, z) for y, z in itertools.product(range(q), repeat=2)]
    return pts


def enumerate_points(F: FieldSpec) -> list[ProjectivePoint]:
    """All q^2+q+1 points in lexicographic coordinate order."""
    return [ProjectivePoint(c, F) for c in enumerate_raw(F)]


def point_array(F: FieldSpec) -> np.ndarray:
    return np.array(enumerate_raw(F), dtype=np.int64)


def dot_matrix(F: FieldSpec, A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    """Pairwise dot products between rows of ``A`` and ``B`` (default ``A``)."""
    if B is None:
        B = A
    if F.m == 1:
        return (A @ B.T) % F.p
    mul, add = F.mul_table, F.add_table
    out = mul[A[:, 0][:, None], B[:, 0][None, :]]
    for i in (1, 2):
        out = add[out, mul[A[:, i][:, None], B[:, i][None, :]]]
    return out
