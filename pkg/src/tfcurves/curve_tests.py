"""Pointwise tests for plane curves: transversality, tangency, smoothness.

Conventions, fixed once for the whole package:

* the zero form is transverse to nothing (every line sees a zero
  restriction, which is tangent everywhere), is singular at every
  point, and is never smooth;
* a line with identically-zero restriction counts as tangent at each
  of its points;
* singularity of f at P means f and all three formal partials vanish
  at P.  All four are checked: in characteristic p dividing d the
  Euler relation degenerates and f(P) = 0 is not implied by the
  partials.

Smoothness is decided by enumerating points of P2 over extension
fields of increasing degree and testing is_singular_at, with an exact
early-out: if a curve of degree d is singular at all, it is singular
at a closed point of degree <= a cap computed from how f could factor
over the algebraic closure (see _detection_cap).  The enumeration is
vectorized over points but remains plain point enumeration; the
scan_cap argument lets tests force a wider scan and cross-check the
cap itself.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, gcd

import numpy as np

from . import forms, gf, pg2
from .forms import BinaryForm, TernaryForm
from .gf import CapExceeded, FieldCtx
from .pg2 import ProjLine, ProjPoint


def is_transverse(f: TernaryForm, line: ProjLine) -> bool:
    """Whether the restriction of f to the line is squarefree."""
    if f.is_zero():
        return False
    return forms.binary_squarefree(forms.restrict_to_line(f, line))


def is_transverse_free(f: TernaryForm) -> bool:
    """Whether no rational line is transverse to f.

    True for the zero form (every restriction is zero, hence not
    squarefree); censuses rely on that convention.
    """
    return all(not is_transverse(f, L) for L in pg2.enumerate_lines(f.ctx))


def is_tangent_at(f: TernaryForm, line: ProjLine, point: ProjPoint) -> bool:
    """Restriction has a root of multiplicity >= 2 at the point.

    The point must be on the line (any extension degree).  A zero
    restriction counts as tangent everywhere on the line.
    """
    if not pg2.incident(point, line):
        raise ValueError("point is not on the line")
    g = forms.restrict_to_line(f, line)
    if g.is_zero():
        return True
    s0, t0 = pg2.parameter_on_line(line, point)
    return forms.linear_factor_multiplicity(g, s0, t0, point.ctx) >= 2


def is_singular_at(f: TernaryForm, point: ProjPoint) -> bool:
    """f and all three partials vanish at the point."""
    if f.d < 1:
        raise ValueError("need degree >= 1")
    if f.is_zero():
        return True
    if forms.evaluate(f, point) != 0:
        return False
    return all(forms.evaluate(g, point) == 0 for g in forms.partials(f))


def tangency_points(f: TernaryForm, line: ProjLine,
                    r: int) -> list[tuple[ProjPoint, int]]:
    """Tangency points on the line of degree <= r, with multiplicities.

    Scans the restriction's roots over GF(q^e) for e = 1..r, reporting
    each closed point once through a representative of its Frobenius
    orbit (the first one in parameter order).  Errors if the
    restriction is identically zero, where every point is tangent.
    """
    g = forms.restrict_to_line(f, line)
    if g.is_zero():
        raise ValueError("restriction is identically zero on this line")
    out = []
    base = f.ctx
    for e in range(1, r + 1):
        ctx_e = gf.ext_field(base, e) if e > 1 else base
        handled = set()
        for s0, t0 in _p1_params(ctx_e):
            if (s0, t0) in handled or _param_degree(ctx_e, s0, t0) != e:
                continue
            cur = (s0, t0)
            for _ in range(e):  # retire the whole Frobenius orbit
                handled.add(cur)
                a, b = ctx_e.frobenius(cur[0]), ctx_e.frobenius(cur[1])
                cur = (1, ctx_e.mul(ctx_e.inv(a), b)) if a else (0, 1)
            mult = forms.linear_factor_multiplicity(g, s0, t0, ctx_e)
            if mult >= 2:
                emb = ctx_e.embed
                b0 = [emb(c) for c in line.basis[0].coords]
                b1 = [emb(c) for c in line.basis[1].coords]
                coords = tuple(ctx_e.add(ctx_e.mul(s0, a), ctx_e.mul(t0, b))
                               for a, b in zip(b0, b1))
                out.append((pg2.normalize(ctx_e, coords), mult))
    return out


def _p1_params(ctx):
    for c in range(ctx.size):
        yield (1, c)
    yield (0, 1)


def _param_degree(ctx, s0, t0):
    seen = set()
    cur = (s0, t0)
    while cur not in seen:
        seen.add(cur)
        a, b = ctx.frobenius(cur[0]), ctx.frobenius(cur[1])
        if a != 0:
            inv = ctx.inv(a)
            cur = (1, ctx.mul(inv, b))
        else:
            cur = (0, 1)
    return len(seen)


# ---------------------------------------------------------------------------
# smoothness


@lru_cache(maxsize=None)
def _detection_cap(d: int) -> tuple[int, int]:
    """(base_cap, full_cap) on the degree of some singular closed point.

    If a degree-d curve over GF(q) is singular, it has a singular
    closed point of degree <= full_cap, and of degree <= base_cap
    unless f is irreducible over GF(q) while reducible over the
    closure.  Case analysis on the factorization of f:

    * repeated factor: the product v of the repeated irreducible
      factors is defined over GF(q) (Galois-stable), deg v <= d/2, and
      every point of v = 0 is singular; restricting v to a rational
      line not inside it yields a root of degree <= deg v;
    * f reduced and reducible over GF(q), f = g*h: the intersection
      scheme {g = h = 0} is nonempty, rational, of length
      deg g * deg h <= floor(d^2/4), so all its closed points have
      degree <= floor(d^2/4), and they are singular on f = 0;
    * f geometrically integral: at most C(d-1, 2) geometric singular
      points (delta invariants bounded by the arithmetic genus), a
      Galois-stable set, so every orbit is that small;
    * f irreducible over GF(q) but a product of a >= 2 conjugate
      components of degree b = d/a: pairwise intersections are
      nonempty and singular; that stable set has at most C(a,2)*b^2
      points, and a single orbit also has size <= a*b^2 because the
      a-th Frobenius power fixes each pairwise intersection set;
      component-interior singular points form a stable set of size
      <= a*C(b-1, 2).

    The last case is the only one that can exceed the first three,
    and it forces every rational (more generally every degree-k point,
    gcd(k, d) = 1) point of the curve to be singular, which is what
    the shortcut in is_smooth exploits.
    """
    if d <= 1:
        return (0, 0)
    base = max(d // 2, (d * d) // 4, comb(d - 1, 2))
    full = base
    for a in range(2, d + 1):
        if d % a:
            continue
        b = d // a
        pair_orbit = min(comb(a, 2) * b * b, a * b * b)
        interior = a * comb(b - 1, 2)
        full = max(full, pair_orbit, interior)
    return (base, full)


class _VecField:
    """Vectorized arithmetic on int64 element-index arrays."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.exp, self.log = ctx.tables_np()
        self.n = ctx.size - 1
        self.p = ctx.p

    def mul(self, u, v):
        out = np.zeros_like(u)
        nz = (u != 0) & (v != 0)
        out[nz] = self.exp[(self.log[u[nz]] + self.log[v[nz]]) % self.n]
        return out

    def mul_scalar(self, c: int, u):
        if c == 0:
            return np.zeros_like(u)
        if c == 1:
            return u.copy()
        lc = self.log[c]
        out = np.zeros_like(u)
        nz = u != 0
        out[nz] = self.exp[(self.log[u[nz]] + lc) % self.n]
        return out

    def add(self, u, v):
        if self.p == 2:
            return u ^ v
        out = np.zeros_like(u)
        mult = 1
        uu, vv = u, v
        for _ in range(self.ctx.deg):
            out += ((uu + vv) % self.p) * mult
            uu, vv = uu // self.p, vv // self.p
            mult *= self.p
        return out

    def pow_list(self, u, emax):
        """[u^0, u^1, ..., u^emax] with 0^0 = 1."""
        out = [np.ones_like(u)]
        for _ in range(emax):
            out.append(self.mul(out[-1], u))
        return out


def _poly_data(f: TernaryForm, ctx_e: FieldCtx):
    """(monomial triples, embedded coefficients) for nonzero terms."""
    emb = ctx_e.embed if ctx_e is not f.ctx else (lambda v: v)
    monos, coefs = [], []
    for m, c in zip(forms.monomials(f.d), f.coeffs):
        if c:
            monos.append(m)
            coefs.append(emb(c))
    return monos, coefs


def _eval_chunk(vec: _VecField, polys, xs, ys, zs):
    """Values of each (monos, coefs) poly at the coordinate arrays."""
    emax = max((max(i for i, _, _ in monos) for monos, _ in polys if monos),
               default=0)
    jmax = max((max(j for _, j, _ in monos) for monos, _ in polys if monos),
               default=0)
    kmax = max((max(k for _, _, k in monos) for monos, _ in polys if monos),
               default=0)
    xp = vec.pow_list(xs, emax)
    yp = vec.pow_list(ys, jmax)
    zp = vec.pow_list(zs, kmax)
    cache: dict[tuple[int, int, int], np.ndarray] = {}
    out = []
    for monos, coefs in polys:
        acc = np.zeros_like(xs)
        for (i, j, k), c in zip(monos, coefs):
            mv = cache.get((i, j, k))
            if mv is None:
                mv = vec.mul(vec.mul(xp[i], yp[j]), zp[k])
                cache[(i, j, k)] = mv
            acc = vec.add(acc, vec.mul_scalar(c, mv))
        out.append(acc)
    return out


def _chunks_of_plane(ctx: FieldCtx, chunk: int = 1 << 18):
    """Coordinate arrays covering P2 once: [0:0:1], [0:1:z], [1:y:z]."""
    q = ctx.size
    yield (np.array([0], dtype=np.int64), np.array([0], dtype=np.int64),
           np.array([1], dtype=np.int64))
    for lo in range(0, q, chunk):
        z = np.arange(lo, min(lo + chunk, q), dtype=np.int64)
        yield (np.zeros_like(z), np.ones_like(z), z)
    for lo in range(0, q * q, chunk):
        idx = np.arange(lo, min(lo + chunk, q * q), dtype=np.int64)
        yield (np.ones_like(idx), idx // q, idx % q)


def _scan_degree(f: TernaryForm, ctx_e: FieldCtx,
                 want_smooth_flag: bool) -> tuple[bool, bool]:
    """(found_singular, found_smooth_point_on_curve) over one extension."""
    grads = forms.partials(f)
    polys = [_poly_data(f, ctx_e)] + [_poly_data(g, ctx_e) for g in grads]
    try:
        vec = _VecField(ctx_e)
    except CapExceeded:
        return _scan_degree_scalar(f, ctx_e, grads, want_smooth_flag)
    saw_smooth = False
    for xs, ys, zs in _chunks_of_plane(ctx_e):
        vf, vx, vy, vz = _eval_chunk(vec, polys, xs, ys, zs)
        grad0 = (vx == 0) & (vy == 0) & (vz == 0)
        if bool(np.any((vf == 0) & grad0)):
            return True, saw_smooth
        if want_smooth_flag and not saw_smooth:
            saw_smooth = bool(np.any((vf == 0) & ~grad0))
    return False, saw_smooth


def _scan_degree_scalar(f, ctx_e, grads, want_smooth_flag):
    # only reachable above the vector-table cap; same semantics, slow
    saw_smooth = False
    for P in pg2.enumerate_points(ctx_e):
        if forms.evaluate(f, P) != 0:
            continue
        if all(forms.evaluate(g, P) == 0 for g in grads):
            return True, saw_smooth
        saw_smooth = True
    return False, saw_smooth


def is_smooth(f: TernaryForm, *, degree_cap: int = 4, q_cap: int = 4,
              scan_cap: int | None = None) -> bool:
    """Whether the curve f = 0 has no singular point over the closure.

    Scans closed points by degree, out to a cap that provably catches
    a singular point of any singular curve (see _detection_cap).  The
    caps guard against accidentally huge scans; raise them explicitly
    for bigger inputs.  scan_cap overrides the computed cap and forces
    the full scan out to that degree (no structural shortcut) — meant
    for validating the cap, not for normal use.
    """
    if f.is_zero():
        raise ValueError("zero form")
    if f.d < 1:
        raise ValueError("need degree >= 1")
    if scan_cap is None:
        if f.d > degree_cap:
            raise CapExceeded(f"degree {f.d} above cap {degree_cap}")
        if f.ctx.size > q_cap:
            raise CapExceeded(f"field size {f.ctx.size} above cap {q_cap}")
    if f.d == 1:
        return True
    grads = forms.partials(f)
    if all(g.is_zero() for g in grads):
        return False  # p-th power, non-reduced
    base_cap, full_cap = _detection_cap(f.d)
    if scan_cap is not None:
        base_cap = full_cap = scan_cap
    conjugate_split_excluded = False
    for k in range(1, full_cap + 1):
        if k > base_cap and conjugate_split_excluded:
            return True
        ctx_e = gf.ext_field(f.ctx, k) if k > 1 else f.ctx
        want_flag = (scan_cap is None and not conjugate_split_excluded
                     and gcd(k, f.d) == 1)
        found_sing, found_smooth = _scan_degree(f, ctx_e, want_flag)
        if found_sing:
            return False
        if want_flag and found_smooth:
            # a smooth curve point of degree coprime to d rules out the
            # conjugate-components case, whose points are all singular
            conjugate_split_excluded = True
    return True
