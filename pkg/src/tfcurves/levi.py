"""Point-line incidence matrices and exact permanents.

The permanent of the incidence matrix counts the perfect matchings
between points and lines that pair each point with a line through it.
Two independent engines compute it:

* permanent_ryser: inclusion-exclusion over column subsets in
  Gray-code order, compiled with numba.  Exact for every matrix this
  module accepts: per-subset products are split so each half fits in
  int64, then accumulated in base-2^20 limbs with periodic carry
  folds, so no intermediate ever overflows.  The 2^n subset counter
  is cut into contiguous partitions; each partition's signed partial
  sum is exact, so the total is independent of thread count and of
  the partition layout, and partials can be checkpointed to a file
  and resumed.

* count_matchings_backtrack: direct backtracking over rows with
  column bitmasks.  Practical when the matching count itself is
  small (sparse regular matrices up to n ~ 21); cross-checks Ryser.

Lower bounds for matchings of k-regular bipartite graphs on n + n
vertices are provided for comparison: the Schrijver bound
((k-1)^(k-1) / k^(k-2))^n, the factorial bound n! (k/n)^n, and the
weaker closed form (k/e)^n of the latter.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np
from numba import njit

from . import gf, pg2
from .gf import CapExceeded

_RYSER_N_CAP = 34
_LIMB_BITS = 20
_LIMB_MASK = (1 << _LIMB_BITS) - 1
_NLIMB = 10
_HALF_PRODUCT_CAP = 1 << 62


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """0/1 matrix with rows indexed by points and columns by lines.

    points/lines carry the row and column labels when the matrix came
    from a projective plane; they are None for matrices built from raw
    arrays.
    """
    mat: np.ndarray
    points: tuple | None = None
    lines: tuple | None = None

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.mat, dtype=np.uint8))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.all((m == 0) | (m == 1)):
            raise ValueError("entries must be 0 or 1")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.mat.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.mat.sum(axis=0)

    def check_regular(self, k: int) -> None:
        if not (np.all(self.row_sums() == k) and np.all(self.col_sums() == k)):
            raise ValueError(f"matrix is not {k}-regular")

    def row_masks(self) -> np.ndarray:
        """Column-set bitmask per row (needs n <= 63)."""
        if self.n > 63:
            raise CapExceeded("bitmask form needs n <= 63")
        weights = (np.int64(1) << np.arange(self.n, dtype=np.int64))
        return (self.mat.astype(np.int64) * weights).sum(axis=1)

    def to_text(self) -> str:
        return "\n".join("".join(str(int(v)) for v in row)
                         for row in self.mat) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IncidenceMatrix":
        rows = [line.strip() for line in text.splitlines() if line.strip()]
        arr = np.array([[int(ch) for ch in row] for row in rows],
                       dtype=np.uint8)
        return cls(arr)

    def digest(self) -> str:
        return hashlib.sha256(self.mat.tobytes()).hexdigest()[:16]


@dataclass(frozen=True)
class Matching:
    """A perfect point-line matching: row i is paired with column
    sigma[i], and the matrix has a 1 there."""
    sigma: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError("sigma is not a permutation")

    @property
    def n(self) -> int:
        return len(self.sigma)


def validate_matching(im: IncidenceMatrix, matching: Matching) -> None:
    """Raise unless every matched pair is incident in the matrix."""
    if matching.n != im.n:
        raise ValueError("matching size does not match matrix")
    for i, j in enumerate(matching.sigma):
        if not im.mat[i, j]:
            raise ValueError(f"pair ({i}, {j}) is not incident")


def incidence_matrix(q: int) -> IncidenceMatrix:
    """Incidence matrix of the projective plane of order q.

    Rows are points and columns are lines, both in their global
    enumeration order; the matrix is (q+1)-regular of size
    q^2 + q + 1.
    """
    ctx = gf.ctx_for_q(q)
    points = pg2.enumerate_points(ctx)
    lines = pg2.enumerate_lines(ctx)
    m = np.zeros((len(points), len(lines)), dtype=np.uint8)
    for i, P in enumerate(points):
        for j, L in enumerate(lines):
            if pg2.incident(P, L):
                m[i, j] = 1
    im = IncidenceMatrix(m, tuple(points), tuple(lines))
    im.check_regular(q + 1)
    return im


# ---------------------------------------------------------------------------
# Ryser permanent


@njit(cache=True, nogil=True)
def _ryser_partition(col_rows, col_off, n, h, lo, hi):
    """Exact signed partial sum over subset counters in [lo, hi).

    Returns (pos, neg): base-2^20 limb vectors of the positive and
    negative term totals.  Terms are sign(|S|) * prod_i rowsum_i(S)
    for S = gray(c); products are computed as two int64 halves
    (rows [0,h) and [h,n)), split into 20-bit limbs and multiplied
    schoolbook-style.  Limb accumulators are carry-folded every 2^20
    steps so they stay far below 2^63.
    """
    pos = np.zeros(_NLIMB, np.int64)
    neg = np.zeros(_NLIMB, np.int64)
    rowsum = np.zeros(n, np.int64)
    g = lo ^ (lo >> 1)
    zero_rows = n
    parity = 0
    cur = np.int64(0)
    for j in range(n):
        if (g >> j) & 1:
            parity ^= 1
            cur |= np.int64(1) << j
            for t in range(col_off[j], col_off[j + 1]):
                r = col_rows[t]
                if rowsum[r] == 0:
                    zero_rows -= 1
                rowsum[r] += 1
    c = lo
    steps = np.int64(0)
    while True:
        if zero_rows == 0:
            p1 = np.int64(1)
            for i in range(h):
                p1 *= rowsum[i]
            p2 = np.int64(1)
            for i in range(h, n):
                p2 *= rowsum[i]
            a0 = p1 & _LIMB_MASK
            a1 = (p1 >> 20) & _LIMB_MASK
            a2 = (p1 >> 40) & _LIMB_MASK
            a3 = p1 >> 60
            b0 = p2 & _LIMB_MASK
            b1 = (p2 >> 20) & _LIMB_MASK
            b2 = (p2 >> 40) & _LIMB_MASK
            b3 = p2 >> 60
            acc = pos if parity == 0 else neg
            acc[0] += a0 * b0
            acc[1] += a0 * b1 + a1 * b0
            acc[2] += a0 * b2 + a1 * b1 + a2 * b0
            acc[3] += a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
            acc[4] += a1 * b3 + a2 * b2 + a3 * b1
            acc[5] += a2 * b3 + a3 * b2
            acc[6] += a3 * b3
        steps += 1
        if (steps & _LIMB_MASK) == 0:
            for k in range(_NLIMB - 1):
                carry = pos[k] >> _LIMB_BITS
                pos[k] &= _LIMB_MASK
                pos[k + 1] += carry
                carry = neg[k] >> _LIMB_BITS
                neg[k] &= _LIMB_MASK
                neg[k + 1] += carry
        c += 1
        if c >= hi:
            break
        # column toggled between gray(c-1) and gray(c): lowest set bit of c
        b = c & (-c)
        j = 0
        bb = b
        while bb > 1:
            bb >>= 1
            j += 1
        parity ^= 1
        if (cur >> j) & 1:
            cur &= ~b
            for t in range(col_off[j], col_off[j + 1]):
                r = col_rows[t]
                rowsum[r] -= 1
                if rowsum[r] == 0:
                    zero_rows += 1
        else:
            cur |= b
            for t in range(col_off[j], col_off[j + 1]):
                r = col_rows[t]
                if rowsum[r] == 0:
                    zero_rows -= 1
                rowsum[r] += 1
    return pos, neg


def _limbs_to_int(pos, neg) -> int:
    total = 0
    for k in range(_NLIMB - 1, -1, -1):
        total = (total << _LIMB_BITS) + int(pos[k]) - int(neg[k])
    return total


def _product_split(row_counts: list[int]) -> int:
    """First row index h splitting the product of row sums into two
    int64-safe halves; CapExceeded when no split works."""
    n = len(row_counts)
    for h in range(n + 1):
        left = 1
        for v in row_counts[:h]:
            left *= v
        right = 1
        for v in row_counts[h:]:
            right *= v
        if left < _HALF_PRODUCT_CAP and right < _HALF_PRODUCT_CAP:
            return h
    raise CapExceeded("row sums too large for exact int64 half-products")


def _columns_flat(mat: np.ndarray):
    n = mat.shape[0]
    col_rows, col_off = [], [0]
    for j in range(n):
        col_rows.extend(int(i) for i in np.flatnonzero(mat[:, j]))
        col_off.append(len(col_rows))
    return (np.array(col_rows, dtype=np.int64),
            np.array(col_off, dtype=np.int64))


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("TFCURVES_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def permanent_ryser(m, *, threads: int | None = None,
                    partitions: int | None = None,
                    checkpoint: str | None = None) -> int:
    """Exact permanent of a square 0/1 matrix, n <= 34.

    Runs Ryser partitions on a thread pool (kernel releases the GIL).
    The result does not depend on threads or partition count.  With
    checkpoint set, finished partitions are appended to that file as
    "index value" lines under a comment header binding n, the
    partition count and a matrix digest; rerunning with the same file
    skips them.
    """
    im = m if isinstance(m, IncidenceMatrix) else IncidenceMatrix(np.asarray(m))
    n = im.n
    if n == 0:
        return 1
    if n > _RYSER_N_CAP:
        raise CapExceeded(f"permanent supports n <= {_RYSER_N_CAP}, got {n}")
    counts = [int(v) for v in im.row_sums()]
    if min(counts) == 0 or int(im.col_sums().min()) == 0:
        return 0
    h = _product_split(counts)
    col_rows, col_off = _columns_flat(im.mat)

    if partitions is None:
        partitions = 1 << max(0, min(10, n - 16))
    if partitions < 1 or partitions & (partitions - 1):
        raise ValueError("partitions must be a power of two")
    total_counters = 1 << n
    if partitions > total_counters:
        partitions = total_counters
    width = total_counters // partitions

    header = f"# ryser {n} {partitions} {im.digest()}"
    done: dict[int, int] = {}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            first = fh.readline().strip()
            if first != header:
                raise ValueError("checkpoint file does not match this run")
            for line in fh:
                parts = line.split()
                if len(parts) == 2:
                    done[int(parts[0])] = int(parts[1])
    ck = None
    if checkpoint:
        new = not os.path.exists(checkpoint)
        ck = open(checkpoint, "a")
        if new:
            ck.write(header + "\n")
            ck.flush()

    def run_one(idx: int) -> tuple[int, int]:
        lo = np.int64(idx * width)
        hi = np.int64((idx + 1) * width)
        pos, neg = _ryser_partition(col_rows, col_off, n, h, lo, hi)
        return idx, _limbs_to_int(pos, neg)

    todo = [i for i in range(partitions) if i not in done]
    try:
        if todo:
            nthreads = min(_thread_count(threads), len(todo))
            if nthreads == 1:
                results = map(run_one, todo)
                for idx, val in results:
                    done[idx] = val
                    if ck:
                        ck.write(f"{idx} {val}\n")
                        ck.flush()
            else:
                with ThreadPoolExecutor(nthreads) as pool:
                    for idx, val in pool.map(run_one, todo):
                        done[idx] = val
                        if ck:
                            ck.write(f"{idx} {val}\n")
                            ck.flush()
    finally:
        if ck:
            ck.close()
    signed = sum(done.values())
    return signed if n % 2 == 0 else -signed


# ---------------------------------------------------------------------------
# direct matching count and enumeration


@njit(cache=True, nogil=True)
def _count_matchings_kernel(row_masks, n):
    avail = np.zeros(n, np.int64)
    chosen = np.zeros(n, np.int64)
    used = np.int64(0)
    count = np.int64(0)
    depth = 0
    avail[0] = row_masks[0]
    while depth >= 0:
        m = avail[depth]
        if m != 0:
            b = m & (-m)
            avail[depth] = m ^ b
            if depth == n - 1:
                count += 1
            else:
                chosen[depth] = b
                used |= b
                depth += 1
                avail[depth] = row_masks[depth] & ~used
        else:
            depth -= 1
            if depth >= 0:
                used ^= chosen[depth]
    return count


_BACKTRACK_N_CAP = 21


def count_matchings_backtrack(m) -> int:
    """Perfect matchings by row-by-row backtracking (lowest column
    first), n <= 21.  Independent of the Ryser engine; exact."""
    im = m if isinstance(m, IncidenceMatrix) else IncidenceMatrix(np.asarray(m))
    if im.n == 0:
        return 1
    if im.n > _BACKTRACK_N_CAP:
        raise CapExceeded(
            f"backtracking count supports n <= {_BACKTRACK_N_CAP}, got {im.n}")
    return int(_count_matchings_kernel(im.row_masks(), im.n))


def enumerate_matchings(m, limit: int | None = None):
    """Yield perfect matchings in lexicographic-backtracking order
    (the order count_matchings_backtrack visits them), up to limit."""
    im = m if isinstance(m, IncidenceMatrix) else IncidenceMatrix(np.asarray(m))
    n = im.n
    if limit is not None and limit <= 0:
        return
    masks = [int(v) for v in im.row_masks()]
    cols = [0] * n
    emitted = 0

    def rec(depth: int, used: int):
        if depth == n:
            yield Matching(tuple(cols))
            return
        m_ = masks[depth] & ~used
        while m_:
            b = m_ & (-m_)
            m_ ^= b
            cols[depth] = b.bit_length() - 1
            yield from rec(depth + 1, used | b)

    for matching in rec(0, 0):
        yield matching
        emitted += 1
        if limit is not None and emitted >= limit:
            return


def matching_pairs(im: IncidenceMatrix, matching: Matching) -> tuple:
    """(point, line) pairs of a matching against a labeled matrix."""
    if im.points is None or im.lines is None:
        raise ValueError("matrix has no point/line labels")
    validate_matching(im, matching)
    return tuple((im.points[i], im.lines[j])
                 for i, j in enumerate(matching.sigma))


# ---------------------------------------------------------------------------
# matching-count lower bounds for k-regular bipartite graphs


def schrijver_bound(n: int, k: int) -> Fraction:
    """((k-1)^(k-1) / k^(k-2))^n, exact rational (k >= 2)."""
    if k < 2:
        raise ValueError("need k >= 2")
    return Fraction((k - 1) ** (k - 1), k ** (k - 2)) ** n


def factorial_bound(n: int, k: int) -> Fraction:
    """n! (k/n)^n: van der Waerden-style bound, exact rational."""
    return Fraction(factorial(n) * k ** n, n ** n)


def euler_bound(n: int, k: int) -> mpmath.mpf:
    """(k/e)^n: weaker closed form of the factorial bound."""
    with mpmath.workdps(50):
        return (mpmath.mpf(k) / mpmath.e) ** n
