"""Finite field arithmetic with deterministic, reproducible encodings.

Elements of GF(p^n) are plain Python ints in [0, p^n).  The int is the
base-p digit string of a polynomial over GF(p): idx = sum(c_i * p^i)
where c_i is the coefficient of x^i in the residue representative.
Digit i of the index is therefore coordinate i in the power basis of
the quotient ring, and the elements 0..p-1 are exactly the prime
subfield in every field built here.

The modulus is always the lexicographically smallest monic irreducible
polynomial of the right degree, "smallest" meaning smallest integer
encoding of the non-leading coefficients.  Together with the fixed
generator choice below this makes every table, every element index and
every downstream enumeration order reproducible across runs.

Extension fields are built directly over the prime field (degree m*k
for GF(q^k) over GF(q), q = p^m), never as towers; the subfield sits
inside via an explicit embedding table.

Multiplication uses exp/log tables for field sizes up to 2^16 and
falls back to on-the-fly polynomial arithmetic above that.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SIZE_CAP = 2 ** 20
TABLE_CAP = 2 ** 16


class CapExceeded(RuntimeError):
    """A desk-scale resource cap would be exceeded."""


# ---------------------------------------------------------------------------
# polynomial scratch arithmetic over GF(p), used only at construction time
# (modulus search, generator search, bootstrap powers).  Polynomials are
# tuples of ints mod p, ascending degree, no trailing zeros.

def _pstrip(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pstrip(out)


def _pmod(a, m, p):
    """a mod m with m monic."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _pstrip(a)


def _pmulmod(a, b, m, p):
    return _pmod(_pmul(a, b, p), m, p)


def _ppowmod(a, e, m, p):
    r = (1,)
    while e:
        if e & 1:
            r = _pmulmod(r, a, m, p)
        a = _pmulmod(a, a, m, p)
        e >>= 1
    return r


def _idx_to_poly(idx, p):
    c = []
    while idx:
        idx, d = divmod(idx, p)
        c.append(d)
    return tuple(c)


def _poly_to_idx(c, p):
    idx = 0
    for d in reversed(c):
        idx = idx * p + d
    return idx


def _irreducible(m, p):
    """Monic m irreducible over GF(p), by trial division.

    A reducible polynomial has a monic factor of degree <= deg(m)//2,
    so dividing by every monic polynomial of those degrees is a full
    test.
    """
    deg = len(m) - 1
    if deg == 1:
        return True
    if m[0] == 0:  # divisible by x
        return False
    for d in range(1, deg // 2 + 1):
        for enc in range(p ** d):
            div = _idx_to_poly(enc, p) + (0,) * (d - len(_idx_to_poly(enc, p))) + (1,)
            if not _pmod(m, div, p):
                return False
    return True


def _smallest_modulus(p, deg):
    for enc in range(p ** deg):
        low = _idx_to_poly(enc, p)
        m = low + (0,) * (deg - len(low)) + (1,)
        if _irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # unreachable


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n):
    return n >= 2 and _prime_factors(n) == [n]


# ---------------------------------------------------------------------------


class FieldCtx:
    """Immutable context for one finite field GF(p^(m*k)).

    k == 1 is a base field GF(q), q = p^m.  k > 1 is the degree-k
    extension of that base field, built directly over GF(p); `base`
    then points at the k == 1 context and `embed` maps its elements in.
    Do not construct directly, use field_ctx / ext_field (they cache).
    """

    def __init__(self, p: int, m: int, k: int, base: "FieldCtx | None"):
        deg = m * k
        size = p ** deg
        if size > SIZE_CAP:
            raise CapExceeded(f"field size {p}^{deg} exceeds cap 2^20")
        self.p = p
        self.m = m
        self.k = k
        self.q = p ** m          # base field size; frobenius is x -> x^q
        self.deg = deg
        self.size = size
        self.modulus = _smallest_modulus(p, deg)
        self._mod_mask = _poly_to_idx(self.modulus, p) if p == 2 else None
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if size <= TABLE_CAP:
            self._build_tables()
        self.base = base if base is not None else self
        self._embed: list[int] | None = None
        self._gamma_inv: list[list[int]] | None = None
        if k > 1:
            self._build_embedding()
        self._np_exp: np.ndarray | None = None
        self._np_log: np.ndarray | None = None

    # -- raw polynomial products on int encodings (no tables) --

    def _mulraw(self, a: int, b: int) -> int:
        if self.p == 2:
            mm, deg, r = self._mod_mask, self.deg, 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if (a >> deg) & 1:
                    a ^= mm
            return r
        pa = _idx_to_poly(a, self.p)
        pb = _idx_to_poly(b, self.p)
        return _poly_to_idx(_pmulmod(pa, pb, self.modulus, self.p), self.p)

    def _powraw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mulraw(r, a)
            a = self._mulraw(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        n = self.size - 1
        gen = None
        primes = _prime_factors(n)
        for g in range(1, self.size):  # g=1 only passes when n == 1 (GF(2))
            if all(self._powraw(g, n // ell) != 1 for ell in primes):
                gen = g
                break
        assert gen is not None
        exp = [1] * n
        for i in range(1, n):
            exp[i] = self._mulraw(exp[i - 1], gen)
        log = [-1] * self.size
        for i, v in enumerate(exp):
            log[v] = i
        assert log.count(-1) == 1, "generator is not primitive"
        self._exp, self._log = exp, log

    def _build_embedding(self):
        # alpha = smallest root of the base modulus inside this field;
        # embed(a) = sum digit_i(a) * alpha^i is then a field embedding.
        base = self.base
        alpha = None
        for c in range(self.size):
            acc = 0
            for coef in reversed(base.modulus):
                acc = self.add(self.mul(acc, c), coef)
            if acc == 0:
                alpha = c
                break
        assert alpha is not None, "base modulus has no root in extension"
        apow = [1]
        for _ in range(base.deg - 1):
            apow.append(self.mul(apow[-1], alpha))
        emb = []
        for a in range(base.size):
            v, i = 0, 0
            while a:
                a, d = divmod(a, self.p)
                if d:
                    v = self.add(v, self.mul(d, apow[i]))
                i += 1
            emb.append(v)
        self._embed = emb
        # gamma = class of x; {gamma^i : i < k} is a basis over the base
        # field.  Columns of B are the GF(p)-digit vectors of
        # embed(alpha^j) * gamma^i; inverting B mod p gives coordinate
        # extraction used by to_base_coords.
        gamma_pows = [1]
        for _ in range(self.k - 1):
            gamma_pows.append(self.mul(gamma_pows[-1], self.p))
        cols = []
        base_units = [emb[base.p ** j] for j in range(base.deg)]
        for i in range(self.k):
            for j in range(base.deg):
                cols.append(self.mul(gamma_pows[i], base_units[j]))
        bmat = [[(c // self.p ** r) % self.p for c in cols]
                for r in range(self.deg)]
        self._gamma_inv = _matinv_modp(bmat, self.p)

    # -- public arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        r, mult = 0, 1
        while a or b:
            a, da = divmod(a, self.p)
            b, db = divmod(b, self.p)
            r += ((da + db) % self.p) * mult
            mult *= self.p
        return r

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        r, mult = 0, 1
        while a:
            a, d = divmod(a, self.p)
            r += (-d % self.p) * mult
            mult *= self.p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            n = self.size - 1
            return self._exp[(self._log[a] + self._log[b]) % n]
        return self._mulraw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._exp is not None:
            n = self.size - 1
            return self._exp[(n - self._log[a]) % n]
        return self._powraw(a, self.size - 2)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        n = self.size - 1
        if self._log is not None:
            return self._exp[(self._log[a] * e) % n]
        return self._powraw(a, e % n)

    def frobenius(self, a: int) -> int:
        """The q-power map, q the base field size.  Identity on k == 1."""
        return self.pow(a, self.q)

    def scalar(self, n: int) -> int:
        """The image of the integer n, an element of the prime subfield."""
        return n % self.p

    def embed(self, a: int) -> int:
        """Map an element of the base field into this extension."""
        if self.k == 1:
            return a
        return self._embed[a]

    def to_base_coords(self, v: int) -> tuple[int, ...]:
        """Coordinates of v in the basis {gamma^i} over the base field.

        Returns k base-field indices c_i with v = sum embed(c_i)*gamma^i.
        """
        if self.k == 1:
            return (v,)
        digits = [(v // self.p ** r) % self.p for r in range(self.deg)]
        raw = _matvec_modp(self._gamma_inv, digits, self.p)
        m = self.base.deg
        out = []
        for i in range(self.k):
            out.append(_poly_to_idx(tuple(raw[i * m:(i + 1) * m]), self.p))
        return tuple(out)

    def elements(self):
        return range(self.size)

    def tables_np(self) -> tuple[np.ndarray, np.ndarray]:
        """exp/log as int64 numpy arrays, for vectorized callers."""
        if self._exp is None:
            raise CapExceeded("no tables above 2^16; vector ops unavailable")
        if self._np_exp is None:
            self._np_exp = np.array(self._exp, dtype=np.int64)
            self._np_log = np.array(self._log, dtype=np.int64)
        return self._np_exp, self._np_log

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"
        return f"GF(({self.p}^{self.m})^{self.k})"


def _matinv_modp(a, p):
    """Inverse of a square matrix mod p (lists of lists of ints)."""
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] % p != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        ipiv = pow(aug[col][col], -1, p)
        aug[col] = [(x * ipiv) % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _matvec_modp(a, v, p):
    return [sum(x * y for x, y in zip(row, v)) % p for row in a]


@lru_cache(maxsize=None)
def field_ctx(p: int, m: int = 1) -> FieldCtx:
    """The base field GF(p^m), cached."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("degree must be positive")
    return FieldCtx(p, m, 1, None)


@lru_cache(maxsize=None)
def ext_field(base: FieldCtx, k: int) -> FieldCtx:
    """The degree-k extension of a base field context, cached.

    Towers are not supported: base must itself have k == 1.
    """
    if base.k != 1:
        raise ValueError("extension of an extension is not supported")
    if k < 1:
        raise ValueError("degree must be positive")
    if k == 1:
        return base
    return FieldCtx(base.p, base.m, k, base)


@lru_cache(maxsize=None)
def ctx_for_q(q: int) -> FieldCtx:
    """Base field context for a prime power q."""
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    p = min(_prime_factors(q))
    m = 0
    qq = q
    while qq % p == 0 and qq > 1:
        qq //= p
        m += 1
    if p ** m != q:
        raise ValueError(f"{q} is not a prime power")
    return field_ctx(p, m)
