"""The projective plane PG(2, q) and its rational lines.

Points are homogeneous coordinate triples over a field context,
normalized so the first nonzero coordinate is 1.  The global
enumeration order is lexicographic on the normalized triples (using
the integer element encoding), and every downstream structure that
needs an order — line bases, incidence matrices, matchings — inherits
this one.  Lines live over the base field only; points may live over
any extension context, which is how closed points of higher degree
are represented (as a chosen geometric point plus its Frobenius
orbit size).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import gf
from .gf import FieldCtx


@dataclass(frozen=True)
class ProjPoint:
    """A normalized projective point over some field context."""
    coords: tuple[int, int, int]
    ctx: FieldCtx

    def __repr__(self):
        x, y, z = self.coords
        return f"[{x}:{y}:{z}]"

    def __hash__(self):
        return hash((self.coords, id(self.ctx)))

    def __eq__(self, other):
        return (isinstance(other, ProjPoint)
                and self.coords == other.coords and self.ctx is other.ctx)


@dataclass(frozen=True)
class ProjLine:
    """A rational line a*x + b*y + c*z = 0, with its canonical basis.

    The basis is the first two incident points in the global point
    order; everything that parametrizes the line (form restriction,
    tangency conditions) goes through this pair, so the parametrization
    is the same in every module.
    """
    coeffs: tuple[int, int, int]
    basis: tuple[ProjPoint, ProjPoint]
    ctx: FieldCtx

    def __repr__(self):
        a, b, c = self.coeffs
        return f"<{a}x+{b}y+{c}z>"

    def __hash__(self):
        return hash((self.coeffs, id(self.ctx)))

    def __eq__(self, other):
        return (isinstance(other, ProjLine)
                and self.coeffs == other.coeffs and self.ctx is other.ctx)


def normalize(ctx: FieldCtx, coords: tuple[int, int, int]) -> ProjPoint:
    """Scale a nonzero coordinate triple so its first nonzero entry is 1."""
    if all(c == 0 for c in coords):
        raise ValueError("(0,0,0) is not a projective point")
    lead = next(c for c in coords if c != 0)
    if lead != 1:
        s = ctx.inv(lead)
        coords = tuple(ctx.mul(s, c) for c in coords)
    return ProjPoint(tuple(coords), ctx)


@lru_cache(maxsize=None)
def enumerate_points(ctx: FieldCtx) -> tuple[ProjPoint, ...]:
    """All points of PG(2, size) in global lexicographic order."""
    pts = [ProjPoint((0, 0, 1), ctx)]
    pts += [ProjPoint((0, 1, z), ctx) for z in range(ctx.size)]
    pts += [ProjPoint((1, y, z), ctx)
            for y in range(ctx.size) for z in range(ctx.size)]
    return tuple(pts)


@lru_cache(maxsize=None)
def enumerate_lines(ctx: FieldCtx) -> tuple[ProjLine, ...]:
    """All rational lines, ordered lexicographically by coefficient triple."""
    if ctx.k != 1:
        raise ValueError("lines are enumerated over the base field only")
    pts = enumerate_points(ctx)
    lines = []
    # line coefficient triples normalize exactly like points
    coeff_triples = sorted({normalize(ctx, (a, b, c)).coords
                            for a in range(ctx.size)
                            for b in range(ctx.size)
                            for c in range(ctx.size)
                            if (a, b, c) != (0, 0, 0)})
    for abc in coeff_triples:
        inc = [p for p in pts if _dot(ctx, abc, p.coords) == 0]
        lines.append(ProjLine(abc, (inc[0], inc[1]), ctx))
    return tuple(lines)


def _dot(ctx, abc, xyz):
    acc = 0
    for a, x in zip(abc, xyz):
        acc = ctx.add(acc, ctx.mul(a, x))
    return acc


def incident(point: ProjPoint, line: ProjLine) -> bool:
    """Whether a point (possibly over an extension) lies on a rational line."""
    ctx = point.ctx
    if ctx is not line.ctx and ctx.base is not line.ctx:
        raise ValueError("point and line live over unrelated fields")
    abc = [ctx.embed(c) for c in line.coeffs] if ctx is not line.ctx \
        else line.coeffs
    return _dot(ctx, abc, point.coords) == 0


def lines_through(point: ProjPoint) -> tuple[ProjLine, ...]:
    """The q+1 rational lines through a rational point."""
    return tuple(L for L in enumerate_lines(point.ctx) if incident(point, L))


def point_degree(point: ProjPoint) -> int:
    """Size of the Frobenius orbit of the point over the base field."""
    ctx = point.ctx
    seen = {point.coords}
    cur = point
    while True:
        cur = normalize(ctx, tuple(ctx.frobenius(c) for c in cur.coords))
        if cur.coords in seen:
            return len(seen)
        seen.add(cur.coords)


def parameter_on_line(line: ProjLine, point: ProjPoint) -> tuple[int, int]:
    """(s, t) with point = s*B0 + t*B1 exactly, B0/B1 the line basis.

    The point may live over an extension of the line's field.  Raises
    if the point is not on the line.  The returned pair is the exact
    combination matching the point's normalized coordinates (not
    re-normalized), which keeps it usable directly in homogeneous
    tangency conditions.
    """
    ctx = point.ctx
    emb = ctx.embed if ctx is not line.ctx else (lambda v: v)
    b0 = [emb(c) for c in line.basis[0].coords]
    b1 = [emb(c) for c in line.basis[1].coords]
    # pick two coordinate slots where the basis 2x2 block is invertible
    for c1 in range(3):
        for c2 in range(c1 + 1, 3):
            det = ctx.sub(ctx.mul(b0[c1], b1[c2]), ctx.mul(b0[c2], b1[c1]))
            if det != 0:
                dinv = ctx.inv(det)
                p1, p2 = point.coords[c1], point.coords[c2]
                s = ctx.mul(dinv, ctx.sub(ctx.mul(p1, b1[c2]),
                                          ctx.mul(p2, b1[c1])))
                t = ctx.mul(dinv, ctx.sub(ctx.mul(b0[c1], p2),
                                          ctx.mul(b0[c2], p1)))
                got = tuple(ctx.add(ctx.mul(s, a), ctx.mul(t, b))
                            for a, b in zip(b0, b1))
                if got != point.coords:
                    raise ValueError("point is not on the line")
                return s, t
    raise AssertionError("degenerate line basis")  # unreachable


def closed_point_counts(q: int, r: int) -> tuple[int, ...]:
    """Number of closed points of each degree 1..r on the projective line.

    a_e satisfies sum over m | e of m*a_m = q^e + 1 (points of P^1 over
    GF(q^e) grouped by Frobenius orbit size), which pins every a_e by
    induction on e.
    """
    if r < 1:
        raise ValueError("r must be positive")
    a: list[int] = []
    for e in range(1, r + 1):
        s = q ** e + 1 - sum(m * a[m - 1] for m in range(1, e) if e % m == 0)
        if s % e:
            raise AssertionError("point count not divisible by orbit size")
        a.append(s // e)
    return tuple(a)
