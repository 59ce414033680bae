"""Equal-characteristic formal modules over truncated Laurent-series fields.

Everything here exploits the additive models: the formal sum is plain
addition and the pi-action is a q-linearized polynomial, so formal-module
arithmetic is arithmetic of additive polynomials

    f(X) = a_0 X + a_1 X^q + ... + a_d X^{q^d}

whose coefficients are truncated Laurent series over a finite residue
field.  The module family of interest is [pi]_u(X) = pi X + u_1 X^q + ...
+ u_{h-1} X^{q^{h-1}} + X^{q^h}, its canonical specialization u = 0, and
the height-one module [pi]_LT(X) = pi X + (-1)^(h-1) X^q.  The determinant
form mu_n sends level-n torsion of the big module to level-n torsion of the
height-one module; verify_section3 checks that numerically at n = 2.

Valuations are tracked in t-units (t the series variable); callers convert
to pi-units by dividing by the ramification index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .ffield import field_of, prime_power


def _k_field(q):
    return field_of(q, 1)
from .hypersurface import moore as _generic_moore

__all__ = [
    "TruncatedSeries",
    "AdditivePolynomial",
    "DrinfeldBasis",
    "LiftError",
    "make_univ",
    "make_lt",
    "additive_root_lift",
    "mu_n",
    "drinfeld_check",
    "verify_section3",
]

EXACT = 1 << 40  # precision sentinel for exact (polynomial) inputs


class LiftError(Exception):
    """A torsion-point lift could not proceed (unsolvable digit equation)."""


class TruncatedSeries:
    """Laurent series sum c_j t^j over F_{p^M}, known modulo t^prec."""

    __slots__ = ("desc", "coeffs", "prec")

    def __init__(self, desc, coeffs, prec):
        self.desc = desc
        self.prec = prec
        self.coeffs = {j: c for j, c in coeffs.items() if c != 0 and j < prec}

    @classmethod
    def monomial(cls, desc, exp, code=1, prec=EXACT):
        return cls(desc, {exp: code}, prec)

    @classmethod
    def constant(cls, desc, code, prec=EXACT):
        return cls(desc, {0: code}, prec)

    @classmethod
    def zero(cls, desc, prec=EXACT):
        return cls(desc, {}, prec)

    def valuation(self):
        """Least exponent with nonzero coefficient, or None if the series
        is indistinguishable from zero at this precision."""
        return min(self.coeffs) if self.coeffs else None

    def bound(self):
        v = self.valuation()
        return self.prec if v is None else v

    def leading(self):
        v = self.valuation()
        return (v, self.coeffs[v])

    def is_zero_to_prec(self):
        return not self.coeffs

    def _compat(self, other):
        if isinstance(other, int):
            return TruncatedSeries.constant(self.desc, other)
        if other.desc is not self.desc:
            raise ValueError("residue-field mismatch")
        return other

    def __add__(self, other):
        other = self._compat(other)
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        add = self.desc.add
        for j, c in other.coeffs.items():
            out[j] = add(out.get(j, 0), c)
        return TruncatedSeries(self.desc, out, prec)

    __radd__ = __add__

    def __neg__(self):
        neg = self.desc.neg
        return TruncatedSeries(self.desc,
                               {j: neg(c) for j, c in self.coeffs.items()},
                               self.prec)

    def __sub__(self, other):
        return self + (-self._compat(other))

    def __mul__(self, other):
        other = self._compat(other)
        prec = min(self.bound() + other.prec, other.bound() + self.prec)
        out = {}
        add, mul = self.desc.add, self.desc.mul
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j < prec:
                    out[i + j] = add(out.get(i + j, 0), mul(a, b))
        return TruncatedSeries(self.desc, out, prec)

    __rmul__ = __mul__

    def q_power(self, q, j=1):
        """Exact q^j-th power: exponents scale, coefficients Frobenius,
        and the precision window grows by the same factor."""
        p, e = prime_power(q)
        coeffs, prec = self.coeffs, self.prec
        for _ in range(e * j):
            coeffs = {p * k: self.desc.frob(c, 1) for k, c in coeffs.items()}
            prec = min(p * prec, EXACT)
        return TruncatedSeries(self.desc, coeffs, prec)

    def __pow__(self, n):
        out = TruncatedSeries.constant(self.desc, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def invert(self):
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverting a series indistinguishable "
                                    "from zero")
        nterms = self.prec - v
        a = [self.coeffs.get(v + k, 0) for k in range(nterms)]
        d = self.desc
        lead_inv = d.inv(a[0])
        b = [lead_inv]
        for n in range(1, nterms):
            s = 0
            for k in range(1, n + 1):
                if a[k] and b[n - k]:
                    s = d.add(s, d.mul(a[k], b[n - k]))
            b.append(d.mul(d.neg(lead_inv), s))
        prec = self.prec - 2 * v if self.prec != EXACT else EXACT
        return TruncatedSeries(d, {k - v: c for k, c in enumerate(b)}, prec)

    def truncate(self, prec):
        return TruncatedSeries(self.desc, self.coeffs, min(self.prec, prec))

    def __eq__(self, other):
        """Exact structural equality (same coefficients and precision)."""
        if isinstance(other, int):
            other = self._compat(other)
        return (isinstance(other, TruncatedSeries)
                and self.desc is other.desc
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __repr__(self):
        v = self.valuation()
        return f"Series(v={v}, prec={self.prec}, {len(self.coeffs)} terms)"


def agree(a, b):
    """True when a and b are indistinguishable at the common precision."""
    return (a - b).is_zero_to_prec()


def diff_valuation(a, b):
    """Valuation of a - b in t-units; None means >= working precision."""
    return (a - b).valuation()


@dataclass(frozen=True)
class AdditivePolynomial:
    """X -> sum coeffs[i] * X^{q^i} with TruncatedSeries coefficients."""

    q: int
    coeffs: tuple

    def eval(self, x):
        acc = None
        for i, a in enumerate(self.coeffs):
            if isinstance(a, TruncatedSeries) and a.is_zero_to_prec():
                continue
            term = a * x.q_power(self.q, i)
            acc = term if acc is None else acc + term
        if acc is None:
            return self.coeffs[0] * x
        return acc

    def compose(self, other):
        """(self o other): c_k = sum_{i+j=k} f_i * g_j^{q^i}."""
        if self.q != other.q:
            raise ValueError("q mismatch")
        n = len(self.coeffs) + len(other.coeffs) - 1
        out = [None] * n
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                term = a * b.q_power(self.q, i)
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        return AdditivePolynomial(self.q, tuple(out))

    def __add__(self, other):
        if self.q != other.q:
            raise ValueError("q mismatch")
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return AdditivePolynomial(self.q, tuple(out))

    def degree_q(self):
        return len(self.coeffs) - 1


def make_univ(u_values, q, h, pi, one=None):
    """[pi]_u(X) = pi X + u_1 X^q + ... + u_{h-1} X^{q^{h-1}} + X^{q^h}."""
    if len(u_values) != h - 1:
        raise ValueError("need h-1 deformation coefficients")
    if one is None:
        one = TruncatedSeries.constant(pi.desc, 1)
    return AdditivePolynomial(q, (pi,) + tuple(u_values) + (one,))


def make_lt(q, h, pi, one=None):
    """The height-one module [pi]_LT(X) = pi X + (-1)^(h-1) X^q."""
    if one is None:
        one = TruncatedSeries.constant(pi.desc, 1)
    top = one if h % 2 == 1 else -one
    return AdditivePolynomial(q, (pi, top))


def _digit_solutions(desc, q, pairs, rhs):
    """All c in the residue field with sum b_i c^{q^i} = rhs, by enumeration
    (the residue field is tiny by construction)."""
    _, e = prime_power(q)
    sols = []
    for c in range(desc.q):
        acc = 0
        for i, b in pairs:
            acc = desc.add(acc, desc.mul(b, desc.frob(c, (e * i) % desc.m)))
        if acc == rhs:
            sols.append(c)
    return sols


def additive_root_lift(f, target, seed, min_gain=1, tie_break="least"):
    """Digit-by-digit root of f(X) = target near seed.

    Each step reads the Newton polygon of f at the residual's valuation w:
    candidate digit exponents s solve v(a_i) + s q^i = w for some i, the
    residue equation sums the contributions of every i attaining the
    minimum, and the digit is the least (or greatest, per tie_break)
    solution in the residue field.  Deterministic throughout.  Raises
    LiftError when no digit exponent admits a solution, and when the
    finished root gains less than min_gain t-units over the seed.
    """
    if tie_break not in ("least", "greatest"):
        raise ValueError("tie_break must be 'least' or 'greatest'")
    q = f.q
    desc = seed.desc
    coeff_lead = []
    for i, a in enumerate(f.coeffs):
        v = a.valuation()
        if v is not None:
            coeff_lead.append((i, v, a.coeffs[v]))
    x = seed
    rho = target - f.eval(seed)
    steps = 0
    while not rho.is_zero_to_prec():
        w, rlead = rho.leading()
        steps += 1
        if steps > 4 * rho.prec:
            raise LiftError("digit lifting failed to converge")
        candidates = set()
        for i, v, _ in coeff_lead:
            num = w - v
            if num >= 0 and num % q ** i == 0:
                candidates.add(num // q ** i)
        digit = None
        for s in sorted(candidates):
            m = min(v + s * q ** i for i, v, _ in coeff_lead)
            if m != w:
                continue
            pairs = [(i, lead) for i, v, lead in coeff_lead
                     if v + s * q ** i == w]
            sols = _digit_solutions(desc, q, pairs, rlead)
            if sols:
                c = min(sols) if tie_break == "least" else max(sols)
                digit = (s, c)
                break
        if digit is None:
            raise LiftError(f"no residue digit cancels t^{w}")
        s, c = digit
        delta = TruncatedSeries.monomial(desc, s, c)
        x = x + delta
        rho = rho - f.eval(delta)
    gain = diff_valuation(x, seed)
    base = seed.valuation()
    if gain is not None and base is not None and gain < base + min_gain:
        raise LiftError("lifted root is not closer to the seed than required")
    return x


def mu_n(points, n, module):
    """sum of Moore determinants mu([pi^{a_1}]X_1, ..., [pi^{a_h}]X_h)
    over tuples 0 <= a_i <= n-1 with sum (h-1)(n-1); level-n torsion of the
    big module maps to level-n torsion of the height-one module."""
    h = len(points)
    q = module.q
    if h == 1:
        # empty-determinant convention: mu(X) = X, single tuple a = (0,)
        return points[0]
    powers = []
    for x in points:
        row = [x]
        for _ in range(n - 1):
            row.append(module.eval(row[-1]))
        powers.append(row)
    qpow = lambda x, j: x.q_power(q, j)
    acc = None
    for a in itertools.product(range(n), repeat=h):
        if sum(a) != (h - 1) * (n - 1):
            continue
        term = _generic_moore([powers[i][a[i]] for i in range(h)], qpow)
        acc = term if acc is None else acc + term
    return acc


@dataclass(frozen=True)
class DrinfeldBasis:
    level: int
    points: tuple
    module: AdditivePolynomial


def _span_product(points, q, variable_prec=None):
    """Coefficients of prod over a in k^h of (T - sum a_i x_i), as a map
    degree -> TruncatedSeries."""
    desc = points[0].desc
    h = len(points)
    small = _k_field(q)
    emb = small.embed_table(desc)
    poly = {0: TruncatedSeries.constant(desc, 1)}
    for a in itertools.product(range(q), repeat=h):
        root = TruncatedSeries.zero(desc)
        for c, x in zip(a, points):
            if c:
                root = root + TruncatedSeries.constant(desc, int(emb[c])) * x
        new = {}
        for d, coef in poly.items():
            new[d + 1] = new[d + 1] + coef if d + 1 in new else coef
            prod = -(root * coef)
            new[d] = new[d] + prod if d in new else prod
        poly = new
    return poly


def drinfeld_check(basis):
    """Level 1: the span product equals lead * [pi](T) coefficientwise up to
    the module's top coefficient.  Level 2: the [pi]-images form a level-1
    basis and all points are pi^2-torsion."""
    module = basis.module
    q = module.q
    if basis.level == 1:
        points = basis.points
        poly = _span_product(points, q)
        top = module.coeffs[-1]
        ok = True
        for i, a in enumerate(module.coeffs):
            got = poly.get(q ** i)
            ok = ok and got is not None and agree(top * got, a)
        for d, coef in poly.items():
            if d not in {q ** i for i in range(len(module.coeffs))}:
                ok = ok and coef.is_zero_to_prec()
        return ok
    if basis.level == 2:
        images = tuple(module.eval(y) for y in basis.points)
        for img in images:
            if not module.eval(img).is_zero_to_prec():
                return False
        return drinfeld_check(DrinfeldBasis(1, images, module))
    raise ValueError("only levels 1 and 2 are supported")


def _random_matrix(rng, q, h):
    """h x h matrix over O_F/pi^2: entries (m0, m1) with digits in k."""
    return [[(rng.randrange(q), rng.randrange(q)) for _ in range(h)]
            for _ in range(h)]


def verify_section3(q, h, samples=5, prec=None, residue_degree=None,
                    seed=2026):
    """Numerical checks of the determinant-functor properties at level 2.

    For u = 0 and `samples` random integral deformations: (a) the
    compatibility [pi]_LT(mu_2(Y)) = mu([pi]_u(Y)); (b) mu_2 of a level-2
    basis is a level-2 point of the height-one module; (c) the trace lemma
    for 10 random matrices over O_F/pi^2; (d) Delta^(q-1) = (-1)^h pi;
    (e) k-linearity and alternation of mu_2.  Valuation slack is reported
    as exact rationals in pi-units.
    """
    import random

    from .congruence import build_tower, sample_point

    model = build_tower(q, h, prec=prec, residue_degree=residue_degree)
    rng = random.Random(seed)
    desc = model.desc
    small = _k_field(q)
    emb = small.embed_table(desc)

    def kconst(code):
        return TruncatedSeries.constant(desc, int(emb[code]))

    lt = model.lt
    lt2 = lt.compose(lt)
    reports = []
    specs = [None] + [rng.randrange(1, 1 << 30) for _ in range(samples)]
    for sample_seed in specs:
        sp = sample_point(model, seed=sample_seed)
        Y = sp.level2
        X = sp.level1
        mod = sp.module

        delta2 = mu_n(Y, 2, mod)
        lhs_a = lt.eval(delta2)
        rhs_a = _generic_moore(X, lambda x, j: x.q_power(q, j)) if h > 1 \
            else X[0]
        check_a = agree(lhs_a, rhs_a)

        check_b = (lt2.eval(delta2).is_zero_to_prec()
                   and not lt.eval(delta2).is_zero_to_prec()
                   and drinfeld_check(DrinfeldBasis(2, (delta2,), lt)))

        def apply_entry(m, y):
            m0, m1 = m
            acc = kconst(m0) * y
            if m1:
                acc = acc + kconst(m1) * mod.eval(y)
            return acc

        check_c = True
        for _ in range(10):
            M = _random_matrix(rng, q, h)
            lhs = None
            for r in range(h):
                args = list(Y)
                args[r] = sum((apply_entry(M[r][s], Y[s]) for s in range(h)),
                              TruncatedSeries.zero(desc))
                term = mu_n(args, 2, mod)
                lhs = term if lhs is None else lhs + term
            tr0 = tr1 = 0
            for i in range(h):
                tr0 = small.add(tr0, M[i][i][0])
                tr1 = small.add(tr1, M[i][i][1])
            rhs = kconst(tr0) * delta2 + kconst(tr1) * lt.eval(delta2)
            check_c = check_c and agree(lhs, rhs)

        delta = _generic_moore(X, lambda x, j: x.q_power(q, j)) if h > 1 \
            else X[0]
        dq = delta ** (q - 1)
        target = model.pi if h % 2 == 0 else -model.pi
        check_d = agree(dq, target)

        check_e = True
        if h > 1:
            swapped = list(Y)
            swapped[0], swapped[1] = swapped[1], swapped[0]
            check_e = check_e and agree(mu_n(swapped, 2, mod),
                                        -mu_n(Y, 2, mod))
            check_e = check_e and mu_n([Y[0]] + list(Y[1:h - 1]) + [Y[0]],
                                       2, mod).is_zero_to_prec()
            a, b = rng.randrange(q), rng.randrange(q)
            combo = kconst(a) * Y[0] + kconst(b) * Y[1]
            lin = mu_n([combo] + list(Y[1:]), 2, mod)
            expect = kconst(a) * mu_n(Y, 2, mod)
            check_e = check_e and agree(lin, expect)

        slack = (lhs_a - rhs_a).prec
        reports.append({
            "sample_seed": sample_seed,
            "compat_mu2": check_a,
            "mu2_drinfeld_lt": check_b,
            "trace_lemma": check_c,
            "delta_power": check_d,
            "multilinear_alternating": check_e,
            "all": all([check_a, check_b, check_c, check_d, check_e]),
            "working_precision_pi_units": str(Fraction(slack, model.e)),
        })
    return {
        "q": q,
        "h": h,
        "samples": len(specs),
        "per_sample": reports,
        "all_pass": all(r["all"] for r in reports),
    }

