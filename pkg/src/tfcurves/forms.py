"""Dense homogeneous forms in three (curve) and two (restriction) variables.

A TernaryForm of degree d stores one coefficient per monomial
x^i y^j z^k with i+j+k = d, in graded-lexicographic order with x
heaviest: (d,0,0), (d-1,1,0), (d-1,0,1), ..., (0,0,d).  A BinaryForm
of degree d stores coefficients a_0..a_d of s^(d-u) t^u.  Coefficients
are field element indices (see gf).  Degree-0 forms are allowed as
containers (they arise as partials of linear forms); the zero form of
any degree is representable and is treated as non-squarefree.

Differentiation is formal with exponents reduced mod the
characteristic, so everything here is honest in small characteristic:
a partial derivative may vanish identically, and the squarefreeness
test below has an explicit branch for that (both binary partials
identically zero means the form is a p-th power, hence not squarefree).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .gf import FieldCtx
from .pg2 import ProjLine, ProjPoint


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of degree d in descending lexicographic order."""
    return tuple((i, j, d - i - j)
                 for i in range(d, -1, -1)
                 for j in range(d - i, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(d: int) -> dict[tuple[int, int, int], int]:
    return {m: i for i, m in enumerate(monomials(d))}


def num_coeffs(d: int) -> int:
    return (d + 1) * (d + 2) // 2


@dataclass(frozen=True)
class TernaryForm:
    d: int
    coeffs: tuple[int, ...]
    ctx: FieldCtx

    def __post_init__(self):
        if self.d < 0 or len(self.coeffs) != num_coeffs(self.d):
            raise ValueError("coefficient count does not match degree")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __hash__(self):
        return hash((self.d, self.coeffs, id(self.ctx)))

    def __eq__(self, other):
        return (isinstance(other, TernaryForm) and self.d == other.d
                and self.coeffs == other.coeffs and self.ctx is other.ctx)

    def __repr__(self):
        return f"TernaryForm(d={self.d}, {serialize(self)!r})"


@dataclass(frozen=True)
class BinaryForm:
    d: int
    coeffs: tuple[int, ...]
    ctx: FieldCtx

    def __post_init__(self):
        if self.d < 0 or len(self.coeffs) != self.d + 1:
            raise ValueError("coefficient count does not match degree")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __hash__(self):
        return hash((self.d, self.coeffs, id(self.ctx)))

    def __eq__(self, other):
        return (isinstance(other, BinaryForm) and self.d == other.d
                and self.coeffs == other.coeffs and self.ctx is other.ctx)


def make_form(ctx: FieldCtx, d: int,
              terms: dict[tuple[int, int, int], int]) -> TernaryForm:
    """Build a form from a sparse {exponent triple: coefficient} mapping."""
    idx = monomial_index(d)
    coeffs = [0] * num_coeffs(d)
    for mono, c in terms.items():
        coeffs[idx[mono]] = c
    return TernaryForm(d, tuple(coeffs), ctx)


# -- coefficient-vector encoding used by exhaustive enumerations ----------

def form_from_index(ctx: FieldCtx, d: int, index: int) -> TernaryForm:
    """The index-th form: base-q digits of index, monomial 0 least significant."""
    n = num_coeffs(d)
    coeffs = []
    for _ in range(n):
        index, c = divmod(index, ctx.size)
        coeffs.append(c)
    if index:
        raise ValueError("index out of range")
    return TernaryForm(d, tuple(coeffs), ctx)


def form_to_index(f: TernaryForm) -> int:
    idx = 0
    for c in reversed(f.coeffs):
        idx = idx * f.ctx.size + c
    return idx


# -- evaluation and differentiation ----------------------------------------

def evaluate(f: TernaryForm, point: ProjPoint) -> int:
    """f at a point, in the point's field (coefficients embedded as needed)."""
    ctx = point.ctx
    if ctx is not f.ctx and ctx.base is not f.ctx:
        raise ValueError("point field does not extend the form's field")
    emb = ctx.embed if ctx is not f.ctx else (lambda v: v)
    x, y, z = point.coords
    acc = 0
    for (i, j, k), c in zip(monomials(f.d), f.coeffs):
        if c:
            term = ctx.mul(emb(c), ctx.mul(ctx.pow(x, i),
                                           ctx.mul(ctx.pow(y, j), ctx.pow(z, k))))
            acc = ctx.add(acc, term)
    return acc


def partials(f: TernaryForm) -> tuple[TernaryForm, TernaryForm, TernaryForm]:
    """Formal partial derivatives (f_x, f_y, f_z), degree d-1 each."""
    if f.d == 0:
        raise ValueError("cannot differentiate a degree-0 form")
    ctx = f.ctx
    out = []
    tgt = monomial_index(f.d - 1)
    for var in range(3):
        coeffs = [0] * num_coeffs(f.d - 1)
        for mono, c in zip(monomials(f.d), f.coeffs):
            e = mono[var]
            if c and e:
                mult = ctx.scalar(e)
                if mult:
                    lower = list(mono)
                    lower[var] -= 1
                    pos = tgt[tuple(lower)]
                    coeffs[pos] = ctx.add(coeffs[pos], ctx.mul(mult, c))
        out.append(TernaryForm(f.d - 1, tuple(coeffs), ctx))
    return tuple(out)


def binary_partials(g: BinaryForm) -> tuple[BinaryForm, BinaryForm]:
    """(g_s, g_t), formal, degree d-1."""
    if g.d == 0:
        raise ValueError("cannot differentiate a degree-0 form")
    ctx = g.ctx
    gs = [0] * g.d
    gt = [0] * g.d
    for u, a in enumerate(g.coeffs):
        if not a:
            continue
        es, et = g.d - u, u
        if es:
            m = ctx.scalar(es)
            if m:
                gs[u] = ctx.add(gs[u], ctx.mul(m, a))
        if et:
            m = ctx.scalar(et)
            if m:
                gt[u - 1] = ctx.add(gt[u - 1], ctx.mul(m, a))
    return (BinaryForm(g.d - 1, tuple(gs), ctx),
            BinaryForm(g.d - 1, tuple(gt), ctx))


def eval_binary(g: BinaryForm, s: int, t: int, ctx: FieldCtx | None = None) -> int:
    """g(s, t); pass ctx to evaluate over an extension of g's field."""
    ctx = ctx or g.ctx
    emb = ctx.embed if ctx is not g.ctx else (lambda v: v)
    acc = 0
    for u, a in enumerate(g.coeffs):
        if a:
            acc = ctx.add(acc, ctx.mul(emb(a), ctx.mul(ctx.pow(s, g.d - u),
                                                       ctx.pow(t, u))))
    return acc


# -- restriction to a line ---------------------------------------------------

def _binom_mod(n: int, r: int, p: int) -> int:
    from math import comb
    return comb(n, r) % p


@lru_cache(maxsize=None)
def _linear_power_table(ctx: FieldCtx, a0: int, a1: int, e: int) -> tuple[int, ...]:
    """Coefficients of (a0*s + a1*t)^e as a binary form of degree e."""
    out = []
    for r in range(e + 1):
        b = _binom_mod(e, r, ctx.p)
        if b == 0:
            out.append(0)
            continue
        v = ctx.mul(ctx.scalar(b), ctx.mul(ctx.pow(a0, e - r), ctx.pow(a1, r)))
        out.append(v)
    return tuple(out)


def _conv(a, b, ctx):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return out


@lru_cache(maxsize=None)
def restriction_matrix(line: ProjLine, d: int) -> tuple[tuple[int, ...], ...]:
    """(d+1) x num_coeffs(d) matrix over the base field.

    Row u gives coefficient a_u of the restricted binary form as a
    linear functional of the ternary coefficient vector, using the
    line's canonical basis (B0, B1): (x,y,z) = s*B0 + t*B1.
    """
    ctx = line.ctx
    b0, b1 = line.basis[0].coords, line.basis[1].coords
    cols = []
    for (i, j, k) in monomials(d):
        v = [1]
        for var, e in ((0, i), (1, j), (2, k)):
            if e:
                v = _conv(v, _linear_power_table(ctx, b0[var], b1[var], e), ctx)
        v += [0] * (d + 1 - len(v))
        cols.append(v)
    return tuple(tuple(cols[c][u] for c in range(len(cols)))
                 for u in range(d + 1))


def restrict_to_line(f: TernaryForm, line: ProjLine) -> BinaryForm:
    """The binary form f(s*B0 + t*B1) in the line's canonical parameters."""
    if f.ctx is not line.ctx:
        raise ValueError("form and line must share a field")
    mat = restriction_matrix(line, f.d)
    ctx = f.ctx
    out = []
    for row in mat:
        acc = 0
        for w, c in zip(row, f.coeffs):
            if w and c:
                acc = ctx.add(acc, ctx.mul(w, c))
        out.append(acc)
    return BinaryForm(f.d, tuple(out), ctx)


# -- squarefreeness and root multiplicity ------------------------------------

def _val_t(g: BinaryForm) -> int:
    """Multiplicity of the factor t, i.e. of the root [1:0]."""
    for u, a in enumerate(g.coeffs):
        if a:
            return u
    return g.d + 1  # zero form: conventionally everything divides it


def _dehom(g: BinaryForm) -> list[int]:
    """g(X, 1) as a univariate coefficient list, ascending degree."""
    return [g.coeffs[g.d - j] for j in range(g.d + 1)]


def _upoly_strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _upoly_mod(a: list[int], b: list[int], ctx: FieldCtx) -> list[int]:
    a = list(a)
    db = len(b) - 1
    binv = ctx.inv(b[-1])
    while len(a) - 1 >= db and a:
        lead = ctx.mul(a[-1], binv)
        if lead:
            shift = len(a) - 1 - db
            for i, bi in enumerate(b):
                a[shift + i] = ctx.sub(a[shift + i], ctx.mul(lead, bi))
        a.pop()
    return _upoly_strip(a)


def _upoly_gcd(a: list[int], b: list[int], ctx: FieldCtx) -> list[int]:
    a, b = _upoly_strip(list(a)), _upoly_strip(list(b))
    while b:
        a, b = b, _upoly_mod(a, b, ctx)
    if a:
        ainv = ctx.inv(a[-1])
        a = [ctx.mul(ainv, c) for c in a]
    return a


def binary_squarefree(g: BinaryForm) -> bool:
    """Whether g has no repeated root over the algebraic closure.

    The zero form is not squarefree.  A nonzero form is squarefree iff
    gcd(g, g_s, g_t) is a unit: a repeated linear factor divides both
    partials, while at a simple root at least one partial is nonzero in
    every characteristic.  If both partials vanish identically, g is a
    p-th power and fails immediately.
    """
    if g.is_zero():
        return False
    if g.d == 0:
        return True
    gs, gt = binary_partials(g)
    if gs.is_zero() and gt.is_zero():
        return False
    if min(_val_t(g), min(_val_t(h) for h in (gs, gt) if not h.is_zero())) >= 1:
        return False  # t is a repeated factor
    ctx = g.ctx
    acc = _dehom(g)
    for h in (gs, gt):
        if not h.is_zero():
            acc = _upoly_gcd(acc, _dehom(h), ctx)
    return len(acc) == 1


def linear_factor_multiplicity(g: BinaryForm, s0: int, t0: int,
                               ctx: FieldCtx | None = None) -> int:
    """Multiplicity of the linear factor vanishing at (s0:t0).

    (s0, t0) may live over an extension of g's field; pass its context.
    Errors on the zero form (every multiplicity would be infinite).
    """
    if g.is_zero():
        raise ValueError("zero form has no well-defined multiplicity")
    ctx = ctx or g.ctx
    if s0 == 0 and t0 == 0:
        raise ValueError("(0,0) is not a projective parameter")
    if t0 == 0:
        return _val_t(g)
    emb = ctx.embed if ctx is not g.ctx else (lambda v: v)
    # root of the dehomogenization at X0 = s0/t0; divide out (X - X0)
    x0 = ctx.mul(s0, ctx.inv(t0))
    poly = [emb(c) for c in _dehom(g)]
    mult = 0
    while poly:
        # Horner pass: quot holds the synthetic-division quotient
        quot = []
        acc = 0
        for c in reversed(poly):
            acc = ctx.add(ctx.mul(acc, x0), c)
            quot.append(acc)
        if quot.pop() != 0:
            break
        mult += 1
        poly = list(reversed(quot))
    return mult


def count_nonsquarefree(ctx: FieldCtx, d: int) -> int:
    """Exact count of non-squarefree binary forms of degree d (zero included)."""
    total = ctx.size ** (d + 1)
    if total > 2 ** 24:
        from .gf import CapExceeded
        raise CapExceeded("binary form space exceeds enumeration cap")
    bad = 0
    for enc in range(total):
        e = enc
        coeffs = []
        for _ in range(d + 1):
            e, c = divmod(e, ctx.size)
            coeffs.append(c)
        if not binary_squarefree(BinaryForm(d, tuple(coeffs), ctx)):
            bad += 1
    return bad


# -- serialization ------------------------------------------------------------

_TERM_RE = re.compile(r"^(\d+)\*x\^(\d+)\*y\^(\d+)\*z\^(\d+)$")


def serialize(f: TernaryForm) -> str:
    """Canonical text: nonzero terms 'c*x^i*y^j*z^k' joined by '+', or '0'."""
    parts = [f"{c}*x^{i}*y^{j}*z^{k}"
             for (i, j, k), c in zip(monomials(f.d), f.coeffs) if c]
    return "+".join(parts) if parts else "0"


def parse_form(text: str, ctx: FieldCtx, d: int | None = None) -> TernaryForm:
    """Inverse of serialize.  d is required for the '0' text."""
    text = text.strip()
    if text == "0":
        if d is None:
            raise ValueError("degree required to parse the zero form")
        return TernaryForm(d, (0,) * num_coeffs(d), ctx)
    terms = {}
    deg = None
    for part in text.split("+"):
        m = _TERM_RE.match(part.strip())
        if not m:
            raise ValueError(f"bad term {part!r}")
        c, i, j, k = map(int, m.groups())
        if not 0 <= c < ctx.size:
            raise ValueError(f"coefficient {c} out of range for {ctx}")
        if deg is None:
            deg = i + j + k
        elif i + j + k != deg:
            raise ValueError("terms of mixed degree")
        if (i, j, k) in terms:
            raise ValueError("repeated monomial")
        terms[(i, j, k)] = c
    if d is not None and d != deg:
        raise ValueError(f"expected degree {d}, text has degree {deg}")
    return make_form(ctx, deg, terms)


# -- linear coordinate changes ------------------------------------------------

def _ternary_mul(a: dict, b: dict, ctx: FieldCtx) -> dict:
    out: dict[tuple[int, int, int], int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
            v = ctx.mul(ca, cb)
            if v:
                out[m] = ctx.add(out.get(m, 0), v)
    return {m: c for m, c in out.items() if c}


def linear_substitution(f: TernaryForm, mat) -> TernaryForm:
    """f composed with the linear map v -> mat @ v (rows over f's field)."""
    ctx = f.ctx
    rows = [dict() for _ in range(3)]
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for r in range(3):
        for c in range(3):
            if mat[r][c]:
                rows[r][units[c]] = mat[r][c]
    acc: dict[tuple[int, int, int], int] = {}
    for (i, j, k), coef in zip(monomials(f.d), f.coeffs):
        if not coef:
            continue
        term = {(0, 0, 0): coef}
        for var, e in ((0, i), (1, j), (2, k)):
            for _ in range(e):
                term = _ternary_mul(term, rows[var], ctx)
        for m, c in term.items():
            acc[m] = ctx.add(acc.get(m, 0), c)
    return make_form(ctx, f.d, {m: c for m, c in acc.items() if c})
