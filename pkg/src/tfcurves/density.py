"""Censuses, Monte Carlo estimation, and closed-form density bounds.

A census measures the exact fraction of ALL degree-d coefficient
vectors (zero included) satisfying a predicate; estimates are exact
rationals hits/total.  Monte Carlo draws coefficient vectors from a
seeded counter-based generator, so a (seed, samples) pair always
reproduces the same estimate, and reports a 95% Wilson interval.

Predicates are CurveSet objects carrying two faces: test(form) decides
a single form, and mask(block) vectorizes the decision over a block of
coefficient vectors.  Anything that is an F_q-linear condition on the
coefficients (vanishing at a point, tangency to a line at a point,
singularity at a point) reduces to an F_p-linear condition on the
base-p digit expansion of the coefficient encoding, which one matrix
multiply checks for a whole block.  Non-transversality of one line is
a lookup: the restriction-to-the-line map is linear, and a per-(q,d)
table of which binary forms are squarefree decides the rest.
Smoothness stays a per-form test and should be ordered last inside
And(...) so the cheap masks shrink the survivor set first.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import curve_tests, forms, gf, pg2
from .forms import TernaryForm
from .gf import CapExceeded, FieldCtx
from .pg2 import ProjLine, ProjPoint

_CENSUS_CAP = 1 << 34
_CHUNK = 1 << 16
_WILSON_Z = 1.959963984540054  # 97.5% normal quantile, 95% two-sided


# ---------------------------------------------------------------------------
# coefficient blocks


class _Block:
    """A batch of degree-d coefficient vectors over F_q.

    coeffs holds element encodings (n x N int64); digits is the base-p
    expansion (n x N*m), which coincides with coeffs when q is prime.
    """

    def __init__(self, ctx: FieldCtx, d: int, coeffs: np.ndarray,
                 indices: np.ndarray | None = None):
        self.ctx = ctx
        self.d = d
        self.coeffs = coeffs
        self.indices = indices
        self._digits = None

    @classmethod
    def from_indices(cls, ctx: FieldCtx, d: int, lo: int, hi: int) -> "_Block":
        n_coeffs = forms.num_coeffs(d)
        idx = np.arange(lo, hi, dtype=np.int64)
        q = ctx.size
        weights = q ** np.arange(n_coeffs, dtype=np.int64)
        coeffs = (idx[:, None] // weights[None, :]) % q
        return cls(ctx, d, coeffs, idx)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def digits(self) -> np.ndarray:
        if self._digits is None:
            m = self.ctx.deg
            if m == 1:
                self._digits = self.coeffs
            else:
                p = self.ctx.p
                pw = p ** np.arange(m, dtype=np.int64)
                # digit u of coefficient i lands in column i*m + u
                d3 = (self.coeffs[:, :, None] // pw[None, None, :]) % p
                self._digits = d3.reshape(self.n, -1)
        return self._digits

    def form_at(self, row: int) -> TernaryForm:
        return TernaryForm(self.d, tuple(int(v) for v in self.coeffs[row]),
                           self.ctx)


# ---------------------------------------------------------------------------
# predicate algebra


class CurveSet:
    """A measurable set of degree-d forms over a fixed field."""

    vector_cheap = True

    def test(self, f: TernaryForm) -> bool:
        raise NotImplementedError

    def mask(self, block: _Block) -> np.ndarray:
        out = np.empty(block.n, dtype=bool)
        for i in range(block.n):
            out[i] = self.test(block.form_at(i))
        return out

    def describe(self) -> str:
        raise NotImplementedError

    def __and__(self, other: "CurveSet") -> "CurveSet":
        return And(self, other)

    def __or__(self, other: "CurveSet") -> "CurveSet":
        return Or(self, other)

    def __invert__(self) -> "CurveSet":
        return Not(self)


def _digit_rows(ctx: FieldCtx, ctx_e: FieldCtx, weights: list[int]):
    """F_p rows expressing "sum_i c_i * weights[i] = 0 in ctx_e".

    The functional is F_q-linear in the c_i with values in ctx_e; one
    row per base-p coordinate of the value.  Columns follow the digit
    layout of _Block: coefficient i, digit u -> column i*m + u.
    """
    p = ctx.p
    m = ctx.deg
    ncols = len(weights) * m
    rows = [[0] * ncols for _ in range(ctx_e.deg)]
    for i, w in enumerate(weights):
        for u in range(m):
            beta = ctx_e.mul(w, ctx_e.embed(p ** u))
            for v in range(ctx_e.deg):
                rows[v][i * m + u] = (beta // p ** v) % p
    return [r for r in rows if any(r)]


class LinearSet(CurveSet):
    """Forms whose digit expansion lies in the kernel of an F_p matrix."""

    def __init__(self, ctx: FieldCtx, d: int, rows, label: str):
        self.ctx = ctx
        self.d = d
        self.matrix = np.array(rows, dtype=np.int64).reshape(len(rows), -1)
        self.label = label

    def mask(self, block: _Block) -> np.ndarray:
        if self.matrix.shape[0] == 0:
            return np.ones(block.n, dtype=bool)
        residues = (block.digits @ self.matrix.T) % self.ctx.p
        return ~residues.any(axis=1)

    def test(self, f: TernaryForm) -> bool:
        coeffs = np.array(f.coeffs, dtype=np.int64)[None, :]
        return bool(self.mask(_Block(self.ctx, self.d, coeffs))[0])

    def describe(self) -> str:
        return self.label


def _point_label(point: ProjPoint) -> str:
    return "[" + ":".join(str(c) for c in point.coords) + "]"


def _line_label(line: ProjLine) -> str:
    return "{" + ":".join(str(c) for c in line.coeffs) + "}"


def vanishing_at(ctx: FieldCtx, d: int, point: ProjPoint) -> LinearSet:
    """Forms vanishing at the point (any degree of the point)."""
    ctx_e = point.ctx
    w = [_eval_monomial(ctx_e, mono, point.coords)
         for mono in forms.monomials(d)]
    return LinearSet(ctx, d, _digit_rows(ctx, ctx_e, w),
                     f"vanish@{_point_label(point)}")


def _eval_monomial(ctx_e, mono, coords):
    out = 1
    for c, e in zip(coords, mono):
        out = ctx_e.mul(out, ctx_e.pow(c, e))
    return out


def singular_at(ctx: FieldCtx, d: int, point: ProjPoint) -> LinearSet:
    """Forms singular at the point: f and all three partials vanish."""
    ctx_e = point.ctx
    rows = []
    w_val = [_eval_monomial(ctx_e, mono, point.coords)
             for mono in forms.monomials(d)]
    rows += _digit_rows(ctx, ctx_e, w_val)
    for var in range(3):
        w = []
        for mono in forms.monomials(d):
            mult = mono[var] % ctx.p
            if mult == 0 or (mono[var] == 0):
                w.append(0)
                continue
            shifted = list(mono)
            shifted[var] -= 1
            v = _eval_monomial(ctx_e, tuple(shifted), point.coords)
            w.append(ctx_e.mul(v, ctx_e.embed(mult)))
        rows += _digit_rows(ctx, ctx_e, w)
    return LinearSet(ctx, d, rows, f"singular@{_point_label(point)}")


def tangent_at(ctx: FieldCtx, d: int, line: ProjLine,
               point: ProjPoint) -> LinearSet:
    """Forms tangent to the line at the point (singular included).

    Two conditions on the restriction g: value and first derivative at
    the point's parameter vanish, the derivative taken in a direction
    transverse to the parameter so that the pair means multiplicity
    >= 2 in every characteristic.
    """
    if not pg2.incident(point, line):
        raise ValueError("point is not on the line")
    ctx_e = point.ctx
    s0, t0 = pg2.parameter_on_line(line, point)
    R = forms.restriction_matrix(line, d)
    emb = ctx_e.embed
    # weight of coefficient i in functional "sum_j vec_j * g_j":
    # g_j = sum_i R[j][i] c_i
    def weights(vec):
        out = []
        for i in range(forms.num_coeffs(d)):
            acc = 0
            for j in range(d + 1):
                if vec[j] and R[j][i]:
                    acc = ctx_e.add(acc, ctx_e.mul(vec[j], emb(R[j][i])))
            out.append(acc)
        return out

    val = [ctx_e.mul(ctx_e.pow(s0, d - j), ctx_e.pow(t0, j))
           for j in range(d + 1)]
    der = []
    for j in range(d + 1):
        if s0 != 0:
            mult = j % ctx.p
            term = 0 if mult == 0 else ctx_e.mul(
                ctx_e.embed(mult),
                ctx_e.mul(ctx_e.pow(s0, d - j), ctx_e.pow(t0, j - 1)))
        else:
            mult = (d - j) % ctx.p
            term = 0 if mult == 0 else ctx_e.mul(
                ctx_e.embed(mult),
                ctx_e.mul(ctx_e.pow(s0, d - j - 1), ctx_e.pow(t0, j)))
        der.append(term)
    rows = _digit_rows(ctx, ctx_e, weights(val)) + \
        _digit_rows(ctx, ctx_e, weights(der))
    return LinearSet(ctx, d, rows,
                     f"tangent@{_line_label(line)}@{_point_label(point)}")


@lru_cache(maxsize=None)
def _nonsquarefree_table(ctx: FieldCtx, d: int) -> np.ndarray:
    q = ctx.size
    out = np.empty(q ** (d + 1), dtype=bool)
    for idx in range(q ** (d + 1)):
        coeffs = tuple((idx // q ** j) % q for j in range(d + 1))
        g = forms.BinaryForm(d, coeffs, ctx)
        out[idx] = not forms.binary_squarefree(g)
    return out


class NonTransverseSet(CurveSet):
    """Forms whose restriction to one line is not squarefree.

    This is exactly "the line is tangent somewhere or meets a singular
    point", i.e. the line fails to be transverse; the zero form
    belongs for every line.
    """

    def __init__(self, ctx: FieldCtx, d: int, line: ProjLine):
        self.ctx = ctx
        self.d = d
        self.line = line
        p, m = ctx.p, ctx.deg
        R = forms.restriction_matrix(line, d)
        n_coeffs = forms.num_coeffs(d)
        rows = []
        for j in range(d + 1):
            for v in range(m):
                row = [0] * (n_coeffs * m)
                for i in range(n_coeffs):
                    if R[j][i] == 0:
                        continue
                    for u in range(m):
                        beta = ctx.mul(R[j][i], p ** u)
                        row[i * m + u] = (beta // p ** v) % p
                rows.append(row)
        self.matrix = np.array(rows, dtype=np.int64)
        self.pack = p ** np.arange((d + 1) * m, dtype=np.int64)
        self.table = _nonsquarefree_table(ctx, d)

    def mask(self, block: _Block) -> np.ndarray:
        res = (block.digits @ self.matrix.T) % self.ctx.p
        packed = res @ self.pack
        return self.table[packed]

    def test(self, f: TernaryForm) -> bool:
        return not forms.binary_squarefree(forms.restrict_to_line(f, self.line))

    def describe(self) -> str:
        return f"nontransverse@{_line_label(self.line)}"


class TransverseFreeSet(CurveSet):
    """Forms with no transverse rational line."""

    def __init__(self, ctx: FieldCtx, d: int):
        self.ctx = ctx
        self.d = d
        self.parts = [NonTransverseSet(ctx, d, L)
                      for L in pg2.enumerate_lines(ctx)]

    def mask(self, block: _Block) -> np.ndarray:
        out = np.ones(block.n, dtype=bool)
        for part in self.parts:
            out &= part.mask(block)
            if not out.any():
                break
        return out

    def test(self, f: TernaryForm) -> bool:
        return curve_tests.is_transverse_free(f)

    def describe(self) -> str:
        return "transverse_free"


class SmoothSet(CurveSet):
    """Forms defining smooth curves; zero form excluded by convention."""

    vector_cheap = False

    def __init__(self, ctx: FieldCtx, d: int):
        self.ctx = ctx
        self.d = d

    def test(self, f: TernaryForm) -> bool:
        if f.is_zero():
            return False
        return curve_tests.is_smooth(f, degree_cap=max(4, f.d),
                                     q_cap=max(4, f.ctx.size))

    def describe(self) -> str:
        return "smooth"


class And(CurveSet):
    def __init__(self, *parts: CurveSet):
        self.parts = parts

    @property
    def vector_cheap(self):
        return all(p.vector_cheap for p in self.parts)

    def test(self, f: TernaryForm) -> bool:
        return all(p.test(f) for p in self.parts)

    def mask(self, block: _Block) -> np.ndarray:
        cheap = [p for p in self.parts if p.vector_cheap]
        costly = [p for p in self.parts if not p.vector_cheap]
        out = np.ones(block.n, dtype=bool)
        for p in cheap:
            out &= p.mask(block)
            if not out.any():
                return out
        for p in costly:
            for i in np.flatnonzero(out):
                if not p.test(block.form_at(int(i))):
                    out[i] = False
        return out

    def describe(self) -> str:
        return " & ".join(p.describe() for p in self.parts)


class Or(CurveSet):
    def __init__(self, *parts: CurveSet):
        self.parts = parts

    @property
    def vector_cheap(self):
        return all(p.vector_cheap for p in self.parts)

    def test(self, f: TernaryForm) -> bool:
        return any(p.test(f) for p in self.parts)

    def mask(self, block: _Block) -> np.ndarray:
        out = np.zeros(block.n, dtype=bool)
        for p in self.parts:
            rest = ~out
            if not rest.any():
                break
            if p.vector_cheap:
                out |= p.mask(block)
            else:
                for i in np.flatnonzero(rest):
                    if p.test(block.form_at(int(i))):
                        out[i] = True
        return out

    def describe(self) -> str:
        return " | ".join(p.describe() for p in self.parts)


class Not(CurveSet):
    def __init__(self, part: CurveSet):
        self.part = part

    @property
    def vector_cheap(self):
        return self.part.vector_cheap

    def test(self, f: TernaryForm) -> bool:
        return not self.part.test(f)

    def mask(self, block: _Block) -> np.ndarray:
        return ~self.part.mask(block)

    def describe(self) -> str:
        return "not(" + self.part.describe() + ")"


class Everything(CurveSet):
    def __init__(self, ctx: FieldCtx, d: int):
        self.ctx, self.d = ctx, d

    def test(self, f: TernaryForm) -> bool:
        return True

    def mask(self, block: _Block) -> np.ndarray:
        return np.ones(block.n, dtype=bool)

    def describe(self) -> str:
        return "all"


def tangent_somewhere_on(ctx: FieldCtx, d: int, line: ProjLine,
                         r: int) -> CurveSet:
    """Union of tangent_at over the closed points of degree <= r on the
    line (a truncated version of non-transversality).

    One representative per Frobenius orbit: a form over the base field
    is tangent at a point iff tangent at every conjugate, so the orbit
    contributes a single condition.
    """
    pts = []
    for e in range(1, r + 1):
        ctx_e = gf.ext_field(ctx, e) if e > 1 else ctx
        seen: set[tuple[int, ...]] = set()
        for P in _line_points(ctx_e, line):
            if P.coords in seen or pg2.point_degree(P) != e:
                continue
            cur = P.coords
            for _ in range(e):
                seen.add(cur)
                cur = pg2.normalize(
                    ctx_e, tuple(ctx_e.frobenius(c) for c in cur)).coords
            pts.append(P)
    return Or(*[tangent_at(ctx, d, line, P) for P in pts])


def _line_points(ctx_e, line):
    emb = ctx_e.embed
    b0 = [emb(c) for c in line.basis[0].coords]
    b1 = [emb(c) for c in line.basis[1].coords]
    out = []
    for s, t in [(1, c) for c in range(ctx_e.size)] + [(0, 1)]:
        coords = tuple(ctx_e.add(ctx_e.mul(s, a), ctx_e.mul(t, b))
                       for a, b in zip(b0, b1))
        out.append(pg2.normalize(ctx_e, coords))
    return out


def non_transverse(ctx: FieldCtx, d: int, line: ProjLine) -> NonTransverseSet:
    return NonTransverseSet(ctx, d, line)


def transverse_free(ctx: FieldCtx, d: int) -> TransverseFreeSet:
    return TransverseFreeSet(ctx, d)


def smooth_transverse_free(ctx: FieldCtx, d: int) -> CurveSet:
    return And(TransverseFreeSet(ctx, d), SmoothSet(ctx, d))


def untangent_all_lines_at(ctx: FieldCtx, d: int, point: ProjPoint) -> CurveSet:
    """Tangent to none of the q+1 lines through a rational point at it."""
    ls = pg2.lines_through(point)
    return And(*[Not(tangent_at(ctx, d, L, point)) for L in ls])


def tangent_only_to(ctx: FieldCtx, d: int, line: ProjLine,
                    point: ProjPoint) -> CurveSet:
    """Tangent to this line at the point but not singular there."""
    return And(tangent_at(ctx, d, line, point),
               Not(singular_at(ctx, d, point)))


# ---------------------------------------------------------------------------
# census and Monte Carlo


@dataclass(frozen=True)
class DensityEstimate:
    """Exact or sampled fraction of degree-d forms in a set."""
    q: int
    d: int
    predicate: str
    hits: int
    total: int
    method: str
    seed: int | None = None
    elapsed_ms: float = 0.0

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.hits, self.total)

    @property
    def ci(self) -> tuple[float, float] | None:
        if self.method != "monte_carlo":
            return None
        return wilson_interval(self.hits, self.total)

    def to_record(self) -> dict:
        ci = self.ci
        return {
            "kind": self.method,
            "q": self.q,
            "d": self.d,
            "predicate": self.predicate,
            "hits": self.hits,
            "total": self.total,
            "estimate": float(Fraction(self.hits, self.total)),
            "exact": f"{self.hits}/{self.total}",
            "ci": list(ci) if ci else None,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def wilson_interval(hits: int, total: int,
                    z: float = _WILSON_Z) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if total == 0:
        return (0.0, 1.0)
    phat = hits / total
    denom = 1.0 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = (z / denom) * ((phat * (1 - phat) / total
                           + z * z / (4 * total * total)) ** 0.5)
    return (max(0.0, center - half), min(1.0, center + half))


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("TFCURVES_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def census(q: int, d: int, predicate: CurveSet, *,
           threads: int | None = None,
           size_cap: int = _CENSUS_CAP) -> DensityEstimate:
    """Exact count of the predicate over every degree-d form (0 included).

    Deterministic and independent of threading: blocks of the index
    space are counted exactly and summed.
    """
    ctx = gf.ctx_for_q(q)
    n_coeffs = forms.num_coeffs(d)
    total = q ** n_coeffs
    if total > size_cap:
        raise CapExceeded(
            f"census space q^{n_coeffs} = {total} exceeds cap {size_cap}")
    t0 = time.perf_counter()
    ranges = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]

    def count_range(r):
        lo, hi = r
        block = _Block.from_indices(ctx, d, lo, hi)
        return int(np.count_nonzero(predicate.mask(block)))

    nthreads = min(_thread_count(threads), len(ranges))
    if nthreads <= 1 or len(ranges) == 1:
        hits = sum(map(count_range, ranges))
    else:
        with ThreadPoolExecutor(nthreads) as pool:
            hits = sum(pool.map(count_range, ranges))
    elapsed = (time.perf_counter() - t0) * 1000
    return DensityEstimate(q, d, predicate.describe(), hits, total,
                           "census", None, elapsed)


def monte_carlo(q: int, d: int, predicate: CurveSet, samples: int,
                seed: int) -> DensityEstimate:
    """Sampled estimate of the same fraction with a 95% Wilson interval.

    The sample matrix is drawn in one shot from Philox keyed by the
    seed, so the estimate depends only on (seed, samples).
    """
    if samples < 1:
        raise ValueError("need samples >= 1")
    ctx = gf.ctx_for_q(q)
    n_coeffs = forms.num_coeffs(d)
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(key=seed))
    coeffs = rng.integers(0, q, size=(samples, n_coeffs),
                          dtype=np.int64)
    hits = 0
    for lo in range(0, samples, _CHUNK):
        block = _Block(ctx, d, coeffs[lo:lo + _CHUNK])
        hits += int(np.count_nonzero(predicate.mask(block)))
    elapsed = (time.perf_counter() - t0) * 1000
    return DensityEstimate(q, d, predicate.describe(), hits, samples,
                           "monte_carlo", seed, elapsed)


# ---------------------------------------------------------------------------
# closed-form bounds


def tangency_density_limit(q: int) -> Fraction:
    """Density of forms not transverse to one fixed line (d >= 3)."""
    return Fraction(q * q + q - 1, q ** 3)


def smooth_density(q: int) -> Fraction:
    """Limiting fraction of smooth curves: product (1 - q^-i), i=1..3."""
    return (Fraction(q - 1, q) * Fraction(q * q - 1, q * q)
            * Fraction(q ** 3 - 1, q ** 3))


def xi(q: int) -> Fraction:
    """(1 - q^-2)^-(q^2+q+1), the sharp constant of the upper bound."""
    n = q * q + q + 1
    return Fraction(q * q, q * q - 1) ** n


def psi(q: int) -> Fraction:
    """(1 - q^-2)^q / (1 - q^-1), >= 1 and decreasing to 1."""
    return (Fraction(q * q - 1, q * q) ** q) / Fraction(q - 1, q)


def h_value(q: int) -> Fraction:
    """(1 + 1/(q^2+q-1))^(q^2+q+1) * smooth_density(q), >= 1."""
    n = q * q + q + 1
    return Fraction(q * q + q, q * q + q - 1) ** n * smooth_density(q)


@dataclass(frozen=True)
class BoundsReport:
    """The density bounds for smooth transverse-free curves at one q.

    lower is e^-n * t^n with t the single-line tangency density and
    n = q^2 + q + 1 lines; upper_precise is xi(q) * t^n; upper75 is
    the rounded-constant form 7.5 * t^n; bertini_lower bounds the
    conditional probability that a smooth curve admits a transverse
    line, 1 - upper75 / smooth_density.
    """
    q: int
    n: int
    smooth_density: Fraction
    lower: mpmath.mpf
    upper_precise: Fraction
    upper75: Fraction
    bertini_lower: Fraction

    def to_record(self) -> dict:
        with mpmath.workdps(30):
            return {
                "kind": "bounds",
                "q": self.q,
                "n": self.n,
                "smooth_density": float(self.smooth_density),
                "smooth_density_exact": str(self.smooth_density),
                "lower": mpmath.nstr(self.lower, 12),
                "upper_precise": mpmath.nstr(mpmath.mpf(
                    self.upper_precise.numerator)
                    / self.upper_precise.denominator, 12),
                "upper75": mpmath.nstr(mpmath.mpf(
                    self.upper75.numerator) / self.upper75.denominator, 12),
                "bertini_lower": mpmath.nstr(mpmath.mpf(
                    self.bertini_lower.numerator)
                    / self.bertini_lower.denominator, 12),
            }


def bounds_report(q: int) -> BoundsReport:
    if q < 2:
        raise ValueError("need q >= 2")
    n = q * q + q + 1
    t = tangency_density_limit(q)
    with mpmath.workdps(50):
        lower = mpmath.e ** (-n) * (mpmath.mpf(t.numerator)
                                    / t.denominator) ** n
    upper_precise = xi(q) * t ** n
    upper75 = Fraction(15, 2) * t ** n
    bertini = 1 - upper75 / smooth_density(q)
    return BoundsReport(q, n, smooth_density(q), lower,
                        upper_precise, upper75, bertini)


def _prime_powers(limit: int) -> list[int]:
    out = []
    for q in range(2, limit + 1):
        v = q
        for p in range(2, q + 1):
            if p * p > q and v == q:
                out.append(q)  # prime
                break
            if v % p == 0:
                while v % p == 0:
                    v //= p
                if v == 1:
                    out.append(q)
                break
    return out


@dataclass(frozen=True)
class InequalityReport:
    q: int
    h: Fraction
    psi: Fraction
    xi: Fraction
    ok: bool

    def to_record(self) -> dict:
        return {"kind": "inequalities", "q": self.q,
                "h": float(self.h), "psi": float(self.psi),
                "xi": float(self.xi), "ok": self.ok}


def inequality_suite(q_max: int) -> list[InequalityReport]:
    """h, psi, xi at every prime power q <= q_max, with the claims
    h >= 1, psi >= 1, psi and xi decreasing, xi < 7.5 checked exactly."""
    if q_max < 2:
        raise ValueError("need q_max >= 2")
    out = []
    prev_psi = prev_xi = None
    for q in _prime_powers(q_max):
        hq, pq, xq = h_value(q), psi(q), xi(q)
        ok = (hq >= 1 and pq >= 1 and xq < Fraction(15, 2))
        if prev_psi is not None:
            ok = ok and pq < prev_psi and xq < prev_xi
        out.append(InequalityReport(q, hq, pq, xq, ok))
        prev_psi, prev_xi = pq, xq
    return out


def truncated_tangency_product(q: int, r: int, *, exact: bool = False):
    """1 - prod_{e<=r} (1 - q^-2e)^(a_e): density of restrictions with a
    repeated root of degree <= r.  Increases in r toward the single-line
    limit q^-1 + q^-2 - q^-3.  exact=True returns a Fraction (small r
    only; the exponents a_e grow like q^e/e)."""
    if r < 1:
        raise ValueError("need r >= 1")
    counts = pg2.closed_point_counts(q, r)
    if exact:
        prod = Fraction(1)
        for e, a_e in enumerate(counts, start=1):
            prod *= (1 - Fraction(1, q ** (2 * e))) ** a_e
        return 1 - prod
    with mpmath.workdps(60):
        prod = mpmath.mpf(1)
        for e, a_e in enumerate(counts, start=1):
            prod *= (1 - mpmath.mpf(q) ** (-2 * e)) ** a_e
        return 1 - prod
