"""Synthesis of smooth curves tangent to every line.

A perfect point-line matching pairs each line L_i with a point P_i on
it.  Requiring "tangent to L_i at P_i" for every pair is two linear
conditions per pair on the coefficient space of degree-d forms: the
restriction of f to L_i must vanish to order >= 2 at the parameter of
P_i (value and first derivative, which is multiplicity >= 2 in every
characteristic).  Every nonzero form in the kernel of the resulting
system meets no line transversely, because each of the q^2+q+1 lines
carries one forced tangency.  Smoothness is not linear, so it is
obtained by rejection: draw kernel elements from a seeded generator
until one passes the smoothness test, then re-verify the result with
the independent per-curve checkers before returning it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import curve_tests, density, forms, gf, levi, pg2
from .forms import TernaryForm
from .gf import FieldCtx
from .levi import Matching


def _q_from_matching(matching: Matching) -> int:
    n = matching.n
    q = int((math.isqrt(4 * n - 3) - 1) // 2)
    if q * q + q + 1 != n or q < 2:
        raise ValueError(f"matching size {n} is not q^2+q+1 for any q >= 2")
    return q


def _rref_kernel(ctx: FieldCtx, rows: list[list[int]], width: int):
    """Reduced row echelon form over the field; returns (rank, kernel).

    Deterministic: columns are processed left to right and the first
    row with a nonzero pivot entry is used, so the kernel basis is a
    pure function of the input rows.  Kernel vectors are the standard
    free-column basis (one per non-pivot column, unit at that column).
    """
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        sel = None
        for i in range(r, len(m)):
            if m[i][col]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = ctx.inv(m[r][col])
        if inv != 1:
            m[r] = [ctx.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                c = m[i][col]
                m[i] = [ctx.sub(a, ctx.mul(c, b))
                        for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    pivot_set = set(pivots)
    kernel = []
    for col in range(width):
        if col in pivot_set:
            continue
        vec = [0] * width
        vec[col] = 1
        for prow, pcol in enumerate(pivots):
            vec[pcol] = ctx.neg(m[prow][col])
        kernel.append(tuple(vec))
    return r, tuple(kernel)


@dataclass(frozen=True)
class TangencySystem:
    """Linear system "tangent to L_i at P_i" for one matching.

    rows has two functionals per matched pair, each a vector over the
    base field paired against the degree-d coefficient vector; pairs
    records the (point, line) pair behind rows 2i and 2i+1.
    kernel_basis spans the solution space.
    """
    q: int
    d: int
    rows: tuple[tuple[int, ...], ...]
    pairs: tuple
    rank: int
    kernel_basis: tuple[tuple[int, ...], ...]

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_basis)

    @property
    def ctx(self) -> FieldCtx:
        return gf.ctx_for_q(self.q)

    def form_from_coords(self, coords) -> TernaryForm:
        """The kernel element with the given basis coordinates."""
        if len(coords) != self.kernel_dim:
            raise ValueError("coordinate count does not match kernel")
        ctx = self.ctx
        acc = [0] * forms.num_coeffs(self.d)
        for c, vec in zip(coords, self.kernel_basis):
            if c:
                for i, v in enumerate(vec):
                    if v:
                        acc[i] = ctx.add(acc[i], ctx.mul(c, v))
        return TernaryForm(self.d, tuple(acc), ctx)


def _tangency_rows(ctx: FieldCtx, d: int, line: pg2.ProjLine,
                   point: pg2.ProjPoint):
    """The two functionals on coefficient vectors: restriction value
    and first derivative at the point's parameter on the line."""
    s0, t0 = pg2.parameter_on_line(line, point)
    R = forms.restriction_matrix(line, d)
    n_coeffs = forms.num_coeffs(d)
    val = [ctx.mul(ctx.pow(s0, d - j), ctx.pow(t0, j)) for j in range(d + 1)]
    der = [0] * (d + 1)
    for j in range(d + 1):
        if s0 != 0:
            mult = j % ctx.p
            if mult:
                der[j] = ctx.mul(ctx.scalar(mult),
                                 ctx.mul(ctx.pow(s0, d - j),
                                         ctx.pow(t0, j - 1)))
        else:
            mult = (d - j) % ctx.p
            if mult:
                der[j] = ctx.mul(ctx.scalar(mult),
                                 ctx.mul(ctx.pow(s0, d - j - 1),
                                         ctx.pow(t0, j)))
    out = []
    for vec in (val, der):
        row = [0] * n_coeffs
        for j in range(d + 1):
            if vec[j]:
                for i in range(n_coeffs):
                    if R[j][i]:
                        row[i] = ctx.add(row[i], ctx.mul(vec[j], R[j][i]))
        out.append(tuple(row))
    return out


def tangency_system(matching: Matching, d: int) -> TangencySystem:
    """Build and eliminate the tangency system of a matching.

    Point i is matched to line sigma[i]; the system has 2(q^2+q+1)
    rows on the (d+1)(d+2)/2 coefficients.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    q = _q_from_matching(matching)
    im = levi.incidence_matrix(q)
    levi.validate_matching(im, matching)
    ctx = gf.ctx_for_q(q)
    pairs = levi.matching_pairs(im, matching)
    rows: list[tuple[int, ...]] = []
    for point, line in pairs:
        rows.extend(_tangency_rows(ctx, d, line, point))
    rank, kernel = _rref_kernel(ctx, [list(r) for r in rows],
                                forms.num_coeffs(d))
    return TangencySystem(q, d, tuple(rows), pairs, rank, kernel)


@dataclass(frozen=True)
class SynthFailure:
    """Report for a sampling run that found no smooth kernel element."""
    q: int
    d: int
    sigma: tuple[int, ...]
    seed: int
    attempts: int
    non_smooth: int
    reason: str

    def to_record(self) -> dict:
        return {"kind": "synth", "ok": False, "q": self.q, "d": self.d,
                "matching": list(self.sigma), "seed": self.seed,
                "attempts": self.attempts, "non_smooth": self.non_smooth,
                "reason": self.reason}


def _sample(system: TangencySystem, seed: int, max_attempts: int):
    """(form or None, attempts, non_smooth): seeded rejection loop."""
    q, d = system.q, system.d
    rng = np.random.Generator(np.random.Philox(key=seed))
    attempts = 0
    non_smooth = 0
    while attempts < max_attempts:
        coords = rng.integers(0, q, size=system.kernel_dim)
        if not coords.any():
            continue  # zero vector is not a curve; redraw, not an attempt
        attempts += 1
        f = system.form_from_coords([int(c) for c in coords])
        if not curve_tests.is_smooth(f, degree_cap=max(4, d),
                                     q_cap=max(4, q)):
            non_smooth += 1
            continue
        # never trust the construction: independent final checks
        if not curve_tests.is_transverse_free(f):
            raise AssertionError(
                "kernel element is not transverse-free; system is wrong")
        return f, attempts, non_smooth
    return None, attempts, non_smooth


def _run(q: int, d: int, matching: Matching, seed: int, max_attempts: int):
    if max_attempts < 1:
        raise ValueError("need max_attempts >= 1")
    if q != _q_from_matching(matching):
        raise ValueError("q does not match the matching size")
    system = tangency_system(matching, d)
    if system.kernel_dim == 0:
        return None, SynthFailure(q, d, matching.sigma, seed, 0, 0,
                                  "tangency system has trivial kernel")
    f, attempts, non_smooth = _sample(system, seed, max_attempts)
    if f is None:
        return None, SynthFailure(
            q, d, matching.sigma, seed, attempts, non_smooth,
            f"no smooth kernel element in {attempts} draws")
    return (f, attempts, non_smooth), None


def sample_transverse_free(q: int, d: int, matching: Matching, seed: int,
                           max_attempts: int = 1000):
    """A smooth transverse-free form of degree d, or a SynthFailure.

    Draws uniform nonzero kernel elements of the matching's tangency
    system until one passes the smoothness test (d >= q+2 gives the
    construction room; below that failure is common and is reported,
    not raised).  Success is re-verified with the independent
    transverse-freeness checker.  Deterministic given (matching, seed).
    """
    good, bad = _run(q, d, matching, seed, max_attempts)
    return bad if bad is not None else good[0]


def synth_record(q: int, d: int, matching: Matching, seed: int,
                 max_attempts: int = 1000) -> dict:
    """JSON-ready record of one sampling run, success or failure."""
    good, bad = _run(q, d, matching, seed, max_attempts)
    if bad is not None:
        return bad.to_record()
    f, attempts, non_smooth = good
    return {"kind": "synth", "ok": True, "q": q, "d": d,
            "matching": list(matching.sigma), "seed": seed,
            "attempts": attempts, "non_smooth": non_smooth,
            "form": forms.serialize(f)}


def smooth_rate_report(system: TangencySystem, seed: int,
                       draws: int) -> dict:
    """Measured smoothness rate among kernel draws, next to the limit.

    Samples nonzero kernel elements and counts how many are smooth.
    The asymptotic heuristic says this rate tends (in d) to the plane
    smooth-curve density, so rate * q^(dim - N) tends to that density
    times q^(-2(q^2+q+1)); the report carries the measured rate, its
    predicted limit, and the gap in units of the binomial sigma at the
    predicted rate.  No convergence speed is asserted: at small d the
    measured rate sits far below the limit (degree-d restrictions have
    too few roots to avoid coincidences; see the synthesis notes).
    """
    if draws < 1:
        raise ValueError("need draws >= 1")
    if system.kernel_dim == 0:
        raise ValueError("trivial kernel has no nonzero elements")
    q, d = system.q, system.d
    rng = np.random.Generator(np.random.Philox(key=seed))
    smooth = 0
    done = 0
    while done < draws:
        coords = rng.integers(0, q, size=system.kernel_dim)
        if not coords.any():
            continue
        done += 1
        f = system.form_from_coords([int(c) for c in coords])
        if curve_tests.is_smooth(f, degree_cap=max(4, d), q_cap=max(4, q)):
            smooth += 1
    n_coeffs = forms.num_coeffs(d)
    kernel_density = float(q) ** (system.kernel_dim - n_coeffs)
    rate = smooth / draws
    predicted_rate = float(density.smooth_density(q))
    sigma = math.sqrt(predicted_rate * (1.0 - predicted_rate) / draws)
    return {"kind": "smooth_rate", "q": q, "d": d,
            "kernel_dim": system.kernel_dim, "seed": seed,
            "draws": draws, "smooth": smooth, "rate": rate,
            "kernel_density": kernel_density,
            "measured_product": rate * kernel_density,
            "predicted_rate": predicted_rate,
            "predicted_product": predicted_rate * kernel_density,
            "z": (rate - predicted_rate) / sigma}


def kernel_smooth_scan(system: TangencySystem, limit: int | None = None):
    """Yield the smooth forms among all nonzero kernel elements.

    Exhaustive over q^dim - 1 combinations (small kernels only); used
    to settle existence questions at fixed small d.
    """
    q = system.q
    dim = system.kernel_dim
    total = q ** dim
    count = 0
    for idx in range(1, total):
        coords = [(idx // q ** i) % q for i in range(dim)]
        f = system.form_from_coords(coords)
        if curve_tests.is_smooth(f, degree_cap=max(4, system.d),
                                 q_cap=max(4, q)):
            yield f
            count += 1
            if limit is not None and count >= limit:
                return
