"""Exact character sums over the hypersurface and the L-function comparator.

The hypersurface X is an Artin-Schreier cover of A^{h-1} with group F_{q^h},
so its zeta function factors as the product over additive characters psi of
F_{q^h} of the L-functions L(A^{h-1}, L_psi, t) = exp(sum_n S_n(psi) t^n/n),
where

    S_n(psi_lambda) = sum over V in F_{q^{hn}}^{h-1} of
                      psi_lambda(Tr_{F_{q^{hn}}/F_{q^h}}(d_as(V))).

A primitive psi is one that does not factor through a proper subtrace.  The
conjecture under test says that for every primitive psi,

    L(A^{h-1}, L_psi, t) = (1 + c t)^c   with   c = (-1)^h q^{h(h-1)/2},

equivalently S_n = (-1)^(n-1) c^(n+1) for every n.  All values here are
exact: character sums are cyclotomic integers, L-coefficients are rational
cyclotomic numbers (integer coordinate vectors over a common denominator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .ffield import (CyclotomicInteger, FieldElement, field_of,
                     is_primitive_char, prime_power)
from .hypersurface import HyperParams, count_points, subtrace_histogram

__all__ = [
    "CharSumRecord",
    "LSeries",
    "char_sum",
    "char_sums_all",
    "predicted_S",
    "l_series",
    "conjecture_report",
    "zeta_consistency",
]


@dataclass(frozen=True)
class CharSumRecord:
    q: int
    h: int
    n: int
    lam: FieldElement
    value: CyclotomicInteger
    primitive: bool


def _sums_from_histogram(q, h, hist):
    """All q^h character sums from one subtrace histogram.

    hist[a] counts the vectors V whose subtrace equals the field element
    with code a; then S(psi_lambda) = sum_a hist[a] zeta_p^Tr(lambda a).
    One pass per lambda over the absolute-trace classes.
    """
    p, _ = prime_power(q)
    small = field_of(q, h)
    out = []
    for lcode in range(small.q):
        residue = [0] * p
        for a, cnt in enumerate(hist):
            if cnt:
                residue[small.abs_trace(small.mul(lcode, a))] += cnt
        top = residue[p - 1]
        value = CyclotomicInteger(p, tuple(residue[i] - top
                                           for i in range(p - 1)))
        out.append((small.element(lcode), value))
    return out


def char_sums_all(q, h, n, threads=1):
    """CharSumRecords for every lambda in F_{q^h}, one V-space pass total."""
    hist = subtrace_histogram(q, h, n, threads=threads)
    records = []
    for lam, value in _sums_from_histogram(q, h, hist):
        records.append(CharSumRecord(q, h, n, lam, value,
                                     is_primitive_char(lam, q, h)))
    return records


def char_sum(q, h, n, lam, threads=1):
    """The exact sum S_n(psi_lambda); lambda given as element or code."""
    small = field_of(q, h)
    code = lam.code if isinstance(lam, FieldElement) else int(lam)
    for rec in char_sums_all(q, h, n, threads=threads):
        if rec.lam.code == code:
            return rec
    raise ValueError("lambda outside F_{q^h}")


def predicted_S(q, h, n):
    """S_n forced by L = (1+ct)^c, c = (-1)^h q^(h(h-1)/2): (-1)^(n-1) c^(n+1)."""
    c = q ** (h * (h - 1) // 2)
    if h % 2 == 1:
        c = -c
    return (-1) ** (n - 1) * c ** (n + 1)


class LSeries:
    """Truncation of exp(sum S_n t^n / n) with exact rational-cyclotomic terms.

    Coefficient l_m is stored as (numerator CyclotomicInteger, positive
    integer denominator), reduced; l_0 = 1 and m*l_m = sum_n S_n l_{m-n}.
    """

    def __init__(self, coefficients):
        self.coefficients = list(coefficients)

    def coefficient(self, m):
        return self.coefficients[m]

    def rational_coefficients(self):
        """The l_m as Fractions; raises if any is not rational."""
        out = []
        for num, den in self.coefficients:
            out.append(Fraction(num.to_int(), den))
        return out

    def __eq__(self, other):
        return (isinstance(other, LSeries)
                and self.coefficients == other.coefficients)


def _reduce(num, den):
    g = den
    for c in num.coords:
        g = gcd(g, c)
    if g > 1:
        num = CyclotomicInteger(num.p, tuple(c // g for c in num.coords))
        den //= g
    return num, den


def l_series(sums):
    """Assemble L = exp(sum S_n t^n/n) from S_1..S_N, exactly.

    sums may be plain integers or CyclotomicIntegers (mixing allowed once
    a cyclotomic fixes p; all-integer input uses p = 2 coordinates).
    """
    p = next((s.p for s in sums if isinstance(s, CyclotomicInteger)), 2)
    sums = [s if isinstance(s, CyclotomicInteger)
            else CyclotomicInteger.from_int(p, s) for s in sums]
    coeffs = [(CyclotomicInteger.from_int(p, 1), 1)]
    for m in range(1, len(sums) + 1):
        # sum_n S_n * l_{m-n} over a common denominator, then divide by m
        den = 1
        for n in range(1, m + 1):
            den = den * coeffs[m - n][1] // gcd(den, coeffs[m - n][1])
        acc = CyclotomicInteger.zero(p)
        for n in range(1, m + 1):
            num_prev, den_prev = coeffs[m - n]
            acc = acc + sums[n - 1] * num_prev * (den // den_prev)
        coeffs.append(_reduce(acc, den * m))
    return LSeries(coeffs)


def _cyc_json(value):
    if value.is_rational_integer():
        return value.to_int()
    return list(value.coords)


def conjecture_report(q, h, N, threads=1):
    """Compare measured S_n against the predicted values for n = 1..N.

    Reports every lambda; primitive lambdas carry match verdicts, the
    trivial and imprimitive ones carry measured values only.  The summary
    also states what the matches imply for the cover's middle cohomology:
    virtual dimension (-1)^(h-1) per primitive character and Frobenius
    eigenvalue q^(h(h-1)/2) of the expected sign.
    """
    by_lambda = {}
    for n in range(1, N + 1):
        for rec in char_sums_all(q, h, n, threads=threads):
            by_lambda.setdefault(rec.lam.code, []).append(rec)
    predicted = [predicted_S(q, h, n) for n in range(1, N + 1)]
    per_lambda = []
    all_match = True
    for code in sorted(by_lambda):
        recs = by_lambda[code]
        vals = [rec.value for rec in recs]
        primitive = recs[0].primitive
        match = None
        if primitive:
            match = all(v == s for v, s in zip(vals, predicted))
            all_match = all_match and match
        per_lambda.append({
            "lambda": code,
            "primitive": primitive,
            "S": [_cyc_json(v) for v in vals],
            "predicted": predicted if primitive else None,
            "match": match,
        })
    c = predicted_S(q, h, 1)
    frob_eigenvalue = q ** (h * (h - 1) // 2)
    return {
        "q": q,
        "h": h,
        "N": N,
        "per_lambda": per_lambda,
        "all_match": all_match,
        "implied": {
            "virtual_dimension": (-1) ** (h - 1),
            "frobenius_eigenvalue": frob_eigenvalue,
            "eigenvalue_positive_iff_h_odd": h % 2 == 1,
            "S1_equals_c_squared": c,
        },
    }


def zeta_consistency(q, h, n, threads=1):
    """Orthogonality check: sum over all lambda of S_n equals #X(F_{q^{hn}}).

    The two sides are computed independently (character transform of the
    histogram vs the trace-criterion point count); the cyclotomic sum must
    collapse to a rational integer.
    """
    records = char_sums_all(q, h, n, threads=threads)
    p, _ = prime_power(q)
    total = CyclotomicInteger.zero(p)
    for rec in records:
        total = total + rec.value
    points = count_points(HyperParams(q, h, n), threads=threads)
    collapsed = total.is_rational_integer()
    return {
        "q": q,
        "h": h,
        "n": n,
        "sum_over_lambda": _cyc_json(total),
        "rational": collapsed,
        "count_points": points,
        "match": collapsed and total.to_int() == points,
    }
