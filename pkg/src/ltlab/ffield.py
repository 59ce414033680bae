"""Exact arithmetic in compatibly embedded towers of finite fields.

An element of F_{p^m} is encoded as an integer code in [0, p^m): the code
sum(c_i * p**i) stands for sum(c_i * x**i), where x is the class of the
modulus variable.  The modulus for each (p, m) is computed deterministically:
the least monic primitive polynomial (in ascending code order of its
coefficient vector) whose root is norm-compatible with the moduli of all
proper subfields, in the style of the Conway polynomial tables.  Repeated
calls with the same (p, m) therefore give bit-identical moduli, and element
codes are usable as cache keys.

Fields F_{p^d} <= F_{p^m} with d | m come with a fixed embedding sending
the degree-d generator g_d to g_m ** ((p^m-1)//(p^d-1)); by construction of
the moduli this is a ring homomorphism commuting with Frobenius, and the
whole system of embeddings commutes.

Additive characters of F_{q^h} are indexed by field elements:
psi_lambda(a) = zeta_p ** Tr(lambda * a) with Tr the absolute trace.
Character values accumulate exactly in Z[zeta_p] (CyclotomicInteger);
no floating point enters any reported quantity.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import numpy as np

__all__ = [
    "make_field",
    "field_of",
    "FieldDesc",
    "FieldElement",
    "CyclotomicInteger",
    "rel_trace",
    "psi_value",
    "is_primitive_char",
    "prime_power",
]


# ----------------------------------------------------------------------
# polynomial helpers over F_p (dense little-endian integer-coefficient lists)

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, f, p):
    m = len(f) - 1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    # reduce modulo monic f
    for i in range(len(res) - 1, m - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(m):
                res[i - m + j] = (res[i - m + j] - c * f[j]) % p
    return _poly_trim(res)


def _poly_powmod(a, e, f, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # r = a mod b, with b monic-ized on the fly
        inv_lead = pow(b[-1], p - 2, p)
        bm = [(c * inv_lead) % p for c in b]
        r = list(a)
        while len(r) >= len(bm):
            c = r[-1]
            if c:
                off = len(r) - len(bm)
                for j in range(len(bm)):
                    r[off + j] = (r[off + j] - c * bm[j]) % p
            r.pop()
            _poly_trim(r)
        a, b = b, r
    return a


def _prime_factors(n):
    fs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fs.append(n)
    return fs


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _is_irreducible(f, p):
    m = len(f) - 1
    if m == 1:
        return True
    x = [0, 1]
    # x^(p^m) == x mod f
    t = x
    for _ in range(m):
        t = _poly_powmod(t, p, f, p)
    if _poly_sub(t, x, p):
        return False
    for ell in _prime_factors(m):
        t = x
        for _ in range(m // ell):
            t = _poly_powmod(t, p, f, p)
        g = _poly_gcd(f, _poly_sub(t, x, p), p)
        if len(g) - 1 != 0:
            return False
    return True


def _is_primitive_root_x(f, p, m):
    order = p ** m - 1
    if f[0] == 0:
        return False  # x divides f: x is not even a unit
    for ell in _prime_factors(order):
        t = _poly_powmod([0, 1], order // ell, f, p)
        if t == [1]:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _modulus(p, m):
    """Deterministic Conway-style modulus for F_{p^m}, as a tuple (monic)."""
    if m == 1:
        for c0 in range(p):
            f = [c0, 1]
            if f[0] != 0 and _is_primitive_root_x(f, p, 1):
                return tuple(f)
        raise AssertionError("no degree-1 primitive polynomial found")
    divisors = [d for d in range(1, m) if m % d == 0]
    subs = {d: _modulus(p, d) for d in divisors}
    order = p ** m - 1
    for code in range(p ** m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if not _is_irreducible(f, p):
            continue
        if not _is_primitive_root_x(f, p, m):
            continue
        ok = True
        for d in divisors:
            e = order // (p ** d - 1)
            y = _poly_powmod([0, 1], e, f, p)
            # evaluate the subfield modulus at y (Horner)
            acc = []
            for k in range(d, -1, -1):
                acc = _poly_mulmod(acc, y, f, p)
                ck = subs[d][k]
                if ck:
                    if acc:
                        acc[0] = (acc[0] + ck) % p
                        _poly_trim(acc)
                    else:
                        acc = [ck]
            if acc:
                ok = False
                break
        if ok:
            return tuple(f)
    raise AssertionError(f"no compatible primitive polynomial for p={p}, m={m}")


def prime_power(q):
    """Split a prime power q into (p, e) with q == p**e."""
    for p in _prime_factors(q):
        e = 0
        n = q
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError(f"{q} is not a prime power")
        return p, e
    raise ValueError(f"{q} is not a prime power")


# ----------------------------------------------------------------------
# field descriptors

class FieldDesc:
    """Immutable descriptor of F_{p^m} with log/exp tables and embeddings.

    All arithmetic methods work on integer codes.  Instances are cached per
    (p, m) by make_field(), so identity comparison of descriptors is safe.
    """

    def __init__(self, p, m, modulus):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        q = self.q
        # exp/log tables w.r.t. the class of x (primitive by construction)
        exp = [0] * (q - 1)
        log = [0] * q
        if m == 1:
            gen = (-modulus[0]) % p
        else:
            gen = p  # code of x
        cur = 1
        for k in range(q - 1):
            exp[k] = cur
            log[cur] = k
            cur = self._mul_slow(cur, gen)
        assert cur == 1, "generator does not have full order"
        self.exp = exp
        self.log = log
        self.gen = gen
        self._np = {}
        self._embed_up = {}    # m_super -> np.ndarray codes
        self._unembed = {}     # m_sub -> dict big_code -> sub_code

    # -- slow digit arithmetic used for bootstrap and odd-p addition

    def _digits(self, a):
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def _from_digits(self, digs):
        code = 0
        for d in reversed(digs):
            code = code * self.p + d
        return code

    def _mul_slow(self, a, b):
        p, m, f = self.p, self.m, self.modulus
        da, db = self._digits(a), self._digits(b)
        res = [0] * (2 * m - 1) if m > 1 else [da[0] * db[0] % p]
        if m > 1:
            for i in range(m):
                if da[i]:
                    for j in range(m):
                        res[i + j] = (res[i + j] + da[i] * db[j]) % p
            for i in range(2 * m - 2, m - 1, -1):
                c = res[i]
                if c:
                    res[i] = 0
                    for j in range(m):
                        res[i - m + j] = (res[i - m + j] - c * f[j]) % p
        return self._from_digits(res[:m])

    # -- fast scalar code arithmetic

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        code, mult = 0, 1
        while a or b:
            code += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return code

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        code, mult = 0, 1
        while a:
            code += ((-a) % p) * mult
            a //= p
            mult *= p
        return code

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def frob(self, a, j=1):
        """a ** (p**j)."""
        return self.pow(a, pow(self.p, j, self.q - 1) if a else 0) if a else 0

    def abs_trace(self, a):
        """Absolute trace to F_p, returned as an int in [0, p)."""
        t = 0
        cur = a
        for _ in range(self.m):
            t = self.add(t, cur)
            cur = self.frob(cur)
        assert t < self.p
        return t

    def elements(self):
        return range(self.q)

    def element(self, code):
        return FieldElement(self, code)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    # -- numpy tables for the vectorized enumeration engine

    def np_tables(self):
        """(LOG, EXPZ) such that mul(a, b) == EXPZ[LOG[a] + LOG[b]]."""
        if "logexp" not in self._np:
            q = self.q
            LOG = np.empty(q, dtype=np.int64)
            LOG[0] = 2 * (q - 1)
            for c in range(1, q):
                LOG[c] = self.log[c]
            EXPZ = np.zeros(4 * (q - 1) + 1, dtype=np.int64)
            for i in range(2 * (q - 1)):
                EXPZ[i] = self.exp[i % (q - 1)]
            self._np["logexp"] = (LOG, EXPZ)
        return self._np["logexp"]

    def np_add_table(self):
        if self.p == 2:
            return None
        if "add" not in self._np:
            if self.q > 4096:
                raise ValueError("addition table too large for this field")
            tab = np.empty((self.q, self.q), dtype=np.int64)
            for a in range(self.q):
                for b in range(a, self.q):
                    s = self.add(a, b)
                    tab[a, b] = s
                    tab[b, a] = s
            self._np["add"] = tab
        return self._np["add"]

    def np_neg_table(self):
        key = "neg"
        if key not in self._np:
            self._np[key] = np.array([self.neg(a) for a in range(self.q)],
                                     dtype=np.int64)
        return self._np[key]

    def np_frob_table(self, j):
        """Lookup table for a -> a ** (p**j)."""
        key = ("frob", j % self.m)
        if key not in self._np:
            self._np[key] = np.array(
                [self.frob(a, j % self.m) for a in range(self.q)],
                dtype=np.int64)
        return self._np[key]

    # -- embeddings

    def embed_table(self, sup):
        """Codes of this field's elements inside the superfield sup."""
        if sup.m in self._embed_up:
            return self._embed_up[sup.m]
        if sup.p != self.p or sup.m % self.m != 0:
            raise ValueError("no embedding: incompatible fields")
        g = sup.pow(sup.gen, (sup.q - 1) // (self.q - 1))
        gp = [1]
        for _ in range(1, self.m):
            gp.append(sup.mul(gp[-1], g))
        tab = np.zeros(self.q, dtype=np.int64)
        for c in range(self.q):
            acc = 0
            for i, d in enumerate(self._digits(c)):
                if d:
                    acc = sup.add(acc, sup.mul(d, gp[i]))
            tab[c] = acc
        self._embed_up[sup.m] = tab
        self._unembed[sup.m] = {int(v): k for k, v in enumerate(tab)}
        return tab

    def embed(self, sup, code):
        return int(self.embed_table(sup)[code])

    def unembed(self, sup, big_code):
        """Inverse of embed; raises KeyError if big_code is not in the image."""
        self.embed_table(sup)
        return self._unembed[sup.m][big_code]

    def __repr__(self):
        return f"FieldDesc(GF({self.p}^{self.m}))"


@functools.lru_cache(maxsize=None)
def make_field(p, m):
    """Field description for F_{p^m}; deterministic modulus, cached."""
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if p < 2 or _prime_factors(p) != [p]:
        raise ValueError(f"{p} is not prime")
    return FieldDesc(p, m, _modulus(p, m))


def field_of(q, h=1):
    """Field description for F_{q^h} where q is any prime power."""
    p, e = prime_power(q)
    return make_field(p, e * h)


# ----------------------------------------------------------------------
# elements

class FieldElement:
    """An element of F_{p^m}: a descriptor reference plus an integer code."""

    __slots__ = ("desc", "code")

    def __init__(self, desc, code):
        self.desc = desc
        self.code = code

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.desc is not self.desc:
                raise ValueError("field mismatch")
            return other.code
        if isinstance(other, int):
            return other % self.desc.p
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.sub(self.code, c))

    def __neg__(self):
        return FieldElement(self.desc, self.desc.neg(self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.desc, self.desc.div(self.code, c))

    def __pow__(self, k):
        return FieldElement(self.desc, self.desc.pow(self.code, k))

    def frob(self, j=1):
        return FieldElement(self.desc, self.desc.frob(self.code, j))

    def q_power(self, q, j=1):
        """self ** (q**j) for a prime power q of the same characteristic."""
        p, e = prime_power(q)
        if p != self.desc.p:
            raise ValueError("characteristic mismatch")
        return self.frob(e * j)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.desc is other.desc and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.desc.p and self.code < self.desc.p
        return NotImplemented

    def __hash__(self):
        return hash((id(self.desc), self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"GF({self.desc.p}^{self.desc.m}):{self.code}"

    def digits(self):
        """Little-endian base-p digit vector (the serialization payload)."""
        return self.desc._digits(self.code)

    def serialize(self):
        """Cache-key serialization: (p, m) header plus base-p digits."""
        return {"p": self.desc.p, "m": self.desc.m, "digits": self.digits()}


def rel_trace(a, d):
    """Relative trace of a in F_{p^m} down to F_{p^d}, d | m.

    Returns sum_{j<m/d} a^(p^(d j)) as an element of the subfield, through
    the stored embedding.
    """
    desc = a.desc
    if desc.m % d != 0:
        raise ValueError(f"{d} does not divide {desc.m}")
    t = 0
    cur = a.code
    for _ in range(desc.m // d):
        t = desc.add(t, cur)
        cur = desc.frob(cur, d)
    sub = make_field(desc.p, d)
    if d == desc.m:
        return FieldElement(sub, t)
    return FieldElement(sub, sub.unembed(desc, t))


def psi_value(lam, a):
    """Additive character value psi_lambda(a) = zeta_p ** Tr(lambda a)."""
    if lam.desc is not a.desc:
        raise ValueError("field mismatch")
    e = lam.desc.abs_trace(lam.desc.mul(lam.code, a.code))
    return CyclotomicInteger.root_of_unity(lam.desc.p, e)


def is_primitive_char(lam, q, h):
    """True iff psi_lambda does not factor through any proper subtrace.

    lam must lie in F_{q^h}; psi_lambda factors through
    Tr_{F_{q^h}/F_{q^d}} exactly when lam is in F_{q^d}.
    """
    if lam.code == 0:
        return False
    p, e = prime_power(q)
    assert lam.desc.m == e * h, "lambda not in F_{q^h}"
    for d in range(1, h):
        if h % d == 0 and lam.desc.frob(lam.code, e * d) == lam.code:
            return False
    return True


# ----------------------------------------------------------------------
# cyclotomic integers

def cyc_reduce(vec, p):
    """Reduce an exponent-indexed vector of length >= p to canonical form.

    Input vec[i] multiplies zeta_p^i (indices taken mod p); the relation
    1 + zeta + ... + zeta^(p-1) = 0 eliminates the zeta^(p-1) coordinate.
    Works for any commutative coefficient type (int, Fraction).
    """
    full = [0] * p
    for i, c in enumerate(vec):
        full[i % p] = full[i % p] + c
    top = full[p - 1]
    return tuple(full[i] - top for i in range(p - 1))


def cyc_mul(a, b, p):
    prod = [0] * (2 * p)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = prod[i + j] + ai * bj
    return cyc_reduce(prod, p)


class CyclotomicInteger:
    """Exact element of Z[zeta_p], stored as p-1 integer coordinates.

    Canonical form: n_0 + n_1 zeta + ... + n_{p-2} zeta^{p-2}; the element
    is a rational integer iff all coordinates past n_0 vanish.
    """

    __slots__ = ("p", "coords")

    def __init__(self, p, coords):
        coords = tuple(coords)
        if len(coords) != p - 1:
            raise ValueError("coordinate vector must have length p-1")
        self.p = p
        self.coords = coords

    @classmethod
    def zero(cls, p):
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_int(cls, p, n):
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def root_of_unity(cls, p, e):
        e %= p
        if e < p - 1:
            vec = [0] * (p - 1)
            vec[e] = 1
            return cls(p, vec)
        return cls(p, (-1,) * (p - 1))

    def _check(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.from_int(self.p, other)
        if not isinstance(other, CyclotomicInteger) or other.p != self.p:
            raise TypeError("incompatible cyclotomic operands")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CyclotomicInteger(
            self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return CyclotomicInteger(
            self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CyclotomicInteger(self.p, tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = self._check(other)
        return CyclotomicInteger(self.p, cyc_mul(self.coords, other.coords, self.p))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational_integer() and self.coords[0] == other
        if isinstance(other, CyclotomicInteger):
            return self.p == other.p and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coords))

    def is_rational_integer(self):
        return all(c == 0 for c in self.coords[1:])

    def to_int(self):
        if not self.is_rational_integer():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.coords[0]

    def complex_value(self):
        """Float evaluation at exp(2 pi i / p) -- test oracle only."""
        import cmath
        z = cmath.exp(2j * cmath.pi / self.p)
        return sum(c * z ** i for i, c in enumerate(self.coords))

    def __repr__(self):
        return f"Cyc(p={self.p}, {list(self.coords)})"


def cyc_fraction_mul(a, b, p):
    """Multiply two length-(p-1) Fraction coordinate vectors in Q(zeta_p)."""
    return cyc_mul(tuple(Fraction(x) for x in a),
                   tuple(Fraction(x) for x in b), p)
