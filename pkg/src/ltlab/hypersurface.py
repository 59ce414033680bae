"""The determinantal hypersurface X and its point counts.

X lives in A^h over F_{q^h} and is cut out by the h x h determinant d_full
whose first row is (V_1^{q^h}-V_1, ..., V_h^{q^h}-V_h) and whose lower rows
form a unit-subdiagonal Hessenberg band of Frobenius powers V_{j-i+1}^{q^(i-1)}.
Dropping the V_h column entry from the first row gives d_as, the
Artin-Schreier presentation: d_full(V) = d_as(V_1..V_{h-1}) +
(-1)^(1+h) (V_h^{q^h} - V_h), so X -> A^{h-1} is an Artin-Schreier cover
with group F_{q^h} and the fiber over V' is nonempty (with q^h points) iff
the relative trace of d_as(V') to F_{q^h} vanishes.

The production counter enumerates A^{h-1}(F_{q^{hn}}) once and histograms
the subtrace of d_as; the histogram also feeds every character sum in
lfunc.  brute_count enumerates all of A^h and exists purely as an oracle.
All heavy loops are vectorized over numpy int64 code arrays; results are
exact integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffield import field_of, prime_power

__all__ = [
    "HyperParams",
    "HyperPoint",
    "moore",
    "d_full",
    "d_as",
    "minors_b",
    "count_points",
    "brute_count",
    "h_translate",
    "subtrace_histogram",
    "hermitian_check",
    "ENUM_GUARD",
    "BRUTE_GUARD",
]

ENUM_GUARD = 10 ** 9
BRUTE_GUARD = 10 ** 8


class GuardExceeded(Exception):
    """Raised when an enumeration would exceed the configured resource guard."""


@dataclass(frozen=True)
class HyperParams:
    q: int
    h: int
    n: int

    def __post_init__(self):
        prime_power(self.q)
        if self.h < 1 or self.n < 1:
            raise ValueError("h and n must be >= 1")


@dataclass(frozen=True)
class HyperPoint:
    """A point of X: h coordinates over F_{q^{hn}}, d_full(V) = 0."""

    params: HyperParams
    coords: tuple


# ----------------------------------------------------------------------
# generic determinants (work on FieldElement, TruncatedSeries, MultiPoly)

def hessenberg_det(first_row, vees, h, qpow):
    """Determinant of the paper's bordered Hessenberg matrices.

    The matrix has the given first row, entry 1 on the subdiagonal, zeros
    below it, and entry vees[j-i] ** (q^(i-1)) at (row i, col j) for
    2 <= i <= j (1-based; vees = [V_1, ..., V_{h-1}]).  Uses the leading
    principal minor recurrence d_k = sum_i (-1)^(k-i) M[i][k] d_{i-1},
    valid for unit-subdiagonal upper Hessenberg matrices.  Returns d_h.
    Entries may be None, meaning a structural zero.
    """
    minors = [None] * (h + 1)  # minors[0] stands for 1
    for k in range(1, h + 1):
        acc = None
        for i in range(1, k + 1):
            entry = first_row[k - 1] if i == 1 else qpow(vees[k - i], i - 1)
            if entry is None:
                continue
            term = entry if i == 1 else (entry * minors[i - 1]
                                         if minors[i - 1] is not None else None)
            if term is None:
                continue
            if (k - i) % 2 == 1:
                term = -term
            acc = term if acc is None else acc + term
        minors[k] = acc
    return minors


def moore(xs, qpow):
    """Moore determinant det(x_i ** q^j), j = 0..h-1, via Leibniz expansion."""
    h = len(xs)
    powers = [[xs[i]] for i in range(h)]
    for i in range(h):
        for j in range(1, h):
            powers[i].append(qpow(powers[i][j - 1], 1))
    acc = None
    for perm in itertools.permutations(range(h)):
        term = powers[perm[0]][0]
        for j in range(1, h):
            term = term * powers[perm[j]][j]
        sign = _perm_sign(perm)
        if sign < 0:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _qpow_elem(q):
    def qp(x, j):
        return x.q_power(q, j)
    return qp


def d_full(V, q):
    """The Thm-1.1 determinant at a length-h coordinate vector."""
    h = len(V)
    qp = _qpow_elem(q)
    first = [qp(v, h) - v for v in V]
    return hessenberg_det(first, list(V[: h - 1]), h, qp)[h]


def d_as(V, q):
    """Artin-Schreier determinant at a length-(h-1) vector (h x h, zero corner)."""
    h = len(V) + 1
    qp = _qpow_elem(q)
    first = [qp(v, h) - v for v in V] + [None]
    return hessenberg_det(first, list(V), h, qp)[h]


def minors_b(V, q):
    """Signed leading minors B_1..B_h of the untwisted first-row matrix.

    B_i is (-1)^i times the i x i leading principal minor of the matrix with
    first row (V_1, ..., V_{h-1}, 0) over the usual Hessenberg body.  The
    map (V_1..V_{h-1}) -> (B_1..B_{h-1}) is an involution.
    """
    h = len(V) + 1
    qp = _qpow_elem(q)
    first = list(V) + [None]
    minors = hessenberg_det(first, list(V), h, qp)
    zero = V[0] - V[0]
    out = []
    for i in range(1, h + 1):
        m = minors[i] if minors[i] is not None else zero
        out.append(-m if i % 2 == 1 else m)
    return out


# ----------------------------------------------------------------------
# vectorized engine

class VecOps:
    """Vectorized field arithmetic on numpy int64 code arrays."""

    def __init__(self, desc):
        self.desc = desc
        self.LOG, self.EXPZ = desc.np_tables()
        self.p = desc.p
        self._add = desc.np_add_table() if desc.p != 2 else None
        self._neg = desc.np_neg_table() if desc.p != 2 else None

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        return self._add[a, b]

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        return self._add[a, self._neg[b]]

    def neg(self, a):
        if self.p == 2:
            return a
        return self._neg[a]

    def mul(self, a, b):
        return self.EXPZ[self.LOG[a] + self.LOG[b]]

    def frob(self, a, j):
        return self.desc.np_frob_table(j)[a]


@lru_cache(maxsize=None)
def _engine(q, h, n):
    """Tables shared by all enumerations at (q, h, n)."""
    p, e = prime_power(q)
    big = field_of(q, h * n)
    small = field_of(q, h)
    ops = VecOps(big)
    # a -> a^(q^j) in the big field, j = 1..h
    powq = {j: big.np_frob_table((e * j) % big.m) for j in range(1, h + 1)}
    # subtrace table: big code -> code of Tr_{big/F_{q^h}} in the small field
    idx = np.arange(big.q, dtype=np.int64)
    tr = np.zeros(big.q, dtype=np.int64)
    cur = idx
    for _ in range(n):
        tr = ops.add(tr, cur)
        cur = big.np_frob_table((e * h) % big.m)[cur]
    emb = small.embed_table(big)
    inv = np.full(big.q, -1, dtype=np.int64)
    inv[emb] = np.arange(small.q, dtype=np.int64)
    trmap = inv[tr]
    assert trmap.min() >= 0, "subtrace landed outside the subfield"
    return big, small, ops, powq, trmap


def _d_as_vec(cols, q, h, ops, powq):
    """Vectorized d_as on h-1 coordinate arrays; also used for d_full bodies."""
    first = [ops.sub(powq[h][v], v) for v in cols] + [None]
    return _hessenberg_vec(first, cols, h, ops, powq)


def _d_full_vec(cols, q, h, ops, powq):
    first = [ops.sub(powq[h][v], v) for v in cols]
    return _hessenberg_vec(first, cols[: h - 1], h, ops, powq)


def _hessenberg_vec(first_row, vees, h, ops, powq):
    minors = [None] * (h + 1)
    for k in range(1, h + 1):
        acc = None
        for i in range(1, k + 1):
            if i == 1:
                term = first_row[k - 1]
            else:
                ent = powq[i - 1][vees[k - i]]
                term = ent if minors[i - 1] is None else ops.mul(ent, minors[i - 1])
            if term is None:
                continue
            if (k - i) % 2 == 1:
                term = ops.neg(term)
            acc = term if acc is None else ops.add(acc, term)
        minors[k] = acc
    return minors[h]


def _chunk_hist(q, h, n, start, stop):
    """Histogram of subtrace(d_as(V)) over enumeration indices [start, stop)."""
    big, small, ops, powq, trmap = _engine(q, h, n)
    Q = big.q
    idx = np.arange(start, stop, dtype=np.int64)
    cols = [(idx // Q ** j) % Q for j in range(h - 1)]
    if h == 1:
        vals = np.zeros(len(idx), dtype=np.int64)
    else:
        vals = _d_as_vec(cols, q, h, ops, powq)
    return np.bincount(trmap[vals], minlength=small.q)


def subtrace_histogram(q, h, n, threads=1, chunk=1 << 20):
    """Counts of each value of Tr_{F_{q^{hn}}/F_{q^h}}(d_as(V)) over A^{h-1}.

    Deterministic regardless of worker count: partial histograms from
    contiguous index ranges merge by addition.
    """
    p, e = prime_power(q)
    Q = q ** (h * n)
    total = Q ** (h - 1)
    if total > ENUM_GUARD:
        raise GuardExceeded(f"enumeration of {total} vectors exceeds guard")
    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if threads > 1 and len(ranges) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_hist_worker,
                                [(q, h, n, a, b) for a, b in ranges]))
    else:
        parts = [_chunk_hist(q, h, n, a, b) for a, b in ranges]
    hist = np.zeros(q ** h, dtype=object)
    for part in parts:
        hist += part
    return tuple(int(x) for x in hist)


def _hist_worker(args):
    return _chunk_hist(*args)


def count_points(params, threads=1):
    """#X(F_{q^{hn}}) via the trace criterion on the Artin-Schreier base."""
    q, h, n = params.q, params.h, params.n
    hist = subtrace_histogram(q, h, n, threads=threads)
    return q ** h * hist[0]


def brute_count(params):
    """#X(F_{q^{hn}}) by full enumeration of A^h; oracle for count_points."""
    q, h, n = params.q, params.h, params.n
    Q = q ** (h * n)
    total = Q ** h
    if total > BRUTE_GUARD:
        raise GuardExceeded(f"brute enumeration of {total} vectors exceeds guard")
    big, small, ops, powq, trmap = _engine(q, h, n)
    count = 0
    chunk = 1 << 20
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = [(idx // Q ** j) % Q for j in range(h)]
        vals = _d_full_vec(cols, q, h, ops, powq)
        count += int(np.count_nonzero(vals == 0))
    return count


def on_hypersurface(params, coords):
    q, h = params.q, params.h
    return d_full(list(coords), q).code == 0


def points(params):
    """All points of X(F_{q^{hn}}), as HyperPoints (feasible instances only)."""
    q, h, n = params.q, params.h, params.n
    Q = q ** (h * n)
    if Q ** h > BRUTE_GUARD:
        raise GuardExceeded("point listing exceeds guard")
    big, small, ops, powq, trmap = _engine(q, h, n)
    idx = np.arange(Q ** h, dtype=np.int64)
    cols = [(idx // Q ** j) % Q for j in range(h)]
    vals = _d_full_vec(cols, q, h, ops, powq)
    mask = vals == 0
    out = []
    for i in np.nonzero(mask)[0]:
        coords = tuple(big.element(int(c[i])) for c in cols)
        out.append(HyperPoint(params, coords))
    return out


def h_translate(pt, gamma):
    """Action of 1 + gamma*pi in H = U^1/K_2: V_h -> V_h + gamma.

    gamma lives in F_{q^h} and is embedded into the coordinate field; the
    other coordinates are untouched and the image stays on X.
    """
    params = pt.params
    if not on_hypersurface(params, pt.coords):
        raise ValueError("point is not on the hypersurface")
    big = pt.coords[0].desc
    gcode = gamma.desc.embed(big, gamma.code) if gamma.desc is not big else gamma.code
    new_last = big.add(pt.coords[-1].code, gcode)
    coords = pt.coords[:-1] + (big.element(new_last),)
    return HyperPoint(params, coords)


def hermitian_check(q, n):
    """h = 2 cross-check: #X(F_{q^{2n}}) = q * #{y^q + y = v^(q+1)}, brute both."""
    big = field_of(q, 2 * n)
    p, e = prime_power(q)
    Q = big.q
    ops = VecOps(big)
    idx = np.arange(Q * Q, dtype=np.int64)
    v, y = idx % Q, idx // Q
    frq = big.np_frob_table(e % big.m)
    lhs = ops.add(frq[y], y)
    rhs = ops.mul(frq[v], v)
    hermitian = int(np.count_nonzero(lhs == rhs))
    x_count = brute_count(HyperParams(q, 2, n))
    return {
        "q": q,
        "n": n,
        "x_count": x_count,
        "hermitian_count": hermitian,
        "match": x_count == q * hermitian,
    }
