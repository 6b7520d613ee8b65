"""Exact scalar arithmetic for every ground field the workbench uses.

Four kinds of scalars, one per ground field:

* arbitrary-precision rationals (``Rat``; gmpy2.mpq when available,
  fractions.Fraction otherwise),
* bivariate Laurent polynomials in l and r over Q (``LaurentPoly``) and
  their fractions (``RatFunc``) -- the field Q(l,r),
* the same restricted to r only -- the field Q(r),
* elements of quotient rings Q[x]/(f) for algebraic values of r
  (``AlgebraicNumber`` over a ``NumberField``).

All values are immutable after construction and safe to share between
workers.  Text serialization round-trips bit-exactly for every type.
"""

from __future__ import annotations

import os
import re
from math import gcd

from . import kernels
from .errors import (
    DenominatorVanishesIdentically,
    DivisionByZero,
    ExponentOverflow,
    FieldMismatch,
    PoleAtSpecialization,
    ZeroDivisorEncountered,
)

try:
    from gmpy2 import mpq as Rat

    RAT_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - depends on environment
    from fractions import Fraction as Rat

    RAT_BACKEND = "fractions"

_RAT_TYPES = (type(Rat(0)), int)

_DEFAULT_EXP_BOUND = 1 << 16


def _read_exp_bound():
    raw = os.environ.get("LKWB_MAX_DEGREE")
    if not raw:
        return _DEFAULT_EXP_BOUND
    try:
        val = int(raw)
    except ValueError:
        raise ExponentOverflow(f"LKWB_MAX_DEGREE is not an integer: {raw!r}")
    if not 1 <= val <= (kernels.PACK >> 2):
        raise ExponentOverflow(f"LKWB_MAX_DEGREE out of range: {val}")
    return val


_EXP_BOUND = _read_exp_bound()


def exponent_bound():
    """Current bound on |exponent| for l and r (env LKWB_MAX_DEGREE)."""
    return _EXP_BOUND


def set_exponent_bound(value):
    global _EXP_BOUND
    if not 1 <= value <= (kernels.PACK >> 2):
        raise ExponentOverflow(f"exponent bound out of range: {value}")
    _EXP_BOUND = value


def rat(p, q=1):
    """Exact rational p/q."""
    if q == 0:
        raise DivisionByZero("rational with zero denominator")
    return Rat(p) / q if q != 1 else Rat(p)


def is_rat(x):
    return isinstance(x, _RAT_TYPES)


def format_rat(x):
    return str(x)


_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rat(s):
    m = _RAT_RE.match(s.strip())
    if not m:
        raise ValueError(f"not a rational: {s!r}")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) else 1
    return rat(p, q)


def _rat_gcd(a, b):
    # gcd of two rationals: gcd of numerators / lcm of denominators
    an, ad = int(a.numerator), int(a.denominator)
    bn, bd = int(b.numerator), int(b.denominator)
    num = gcd(abs(an), abs(bn))
    den = ad * bd // gcd(ad, bd)
    return Rat(num) / den


# ---------------------------------------------------------------------------
# Laurent polynomials in l, r
# ---------------------------------------------------------------------------

_pack = kernels.pack_exp
_unpack = kernels.unpack_exp


class LaurentPoly:
    """Laurent polynomial in l and r with rational coefficients.

    Terms are stored as a dict from packed exponent keys to nonzero
    coefficients; equality is structural.  Exponents are bounded by
    ``exponent_bound()`` and overflow raises ExponentOverflow.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @classmethod
    def from_pairs(cls, pairs):
        """Build from an iterable of ((a, b), coeff) exponent pairs."""
        bound = _EXP_BOUND
        terms = {}
        for (a, b), c in pairs:
            if abs(a) > bound or abs(b) > bound:
                raise ExponentOverflow(f"exponent ({a},{b}) exceeds bound {bound}")
            c = Rat(c)
            if not c:
                continue
            k = _pack(a, b)
            v = terms.get(k)
            if v is None:
                terms[k] = c
            else:
                v = v + c
                if v:
                    terms[k] = v
                else:
                    del terms[k]
        return cls(terms)

    @classmethod
    def const(cls, c):
        c = Rat(c)
        return cls({0: c} if c else {})

    @classmethod
    def term(cls, c, a, b):
        return cls.from_pairs([((a, b), c)])

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def one(cls):
        return cls({0: Rat(1)})

    @classmethod
    def var_l(cls):
        return cls({_pack(1, 0): Rat(1)})

    @classmethod
    def var_r(cls):
        return cls({_pack(0, 1): Rat(1)})

    def pairs(self):
        """Iterate ((a, b), coeff) in lexicographically descending order."""
        for k in sorted(self.terms, reverse=True):
            yield _unpack(k), self.terms[k]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if is_rat(other):
            return self.terms == ({0: Rat(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if is_rat(other):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentPoly(kernels.terms_add(self.terms, o.terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) == 1 and len(self.terms) > 1:
            out = self._mul_single(o)
        elif len(self.terms) == 1 and o.terms:
            out = o._mul_single(self)
        else:
            out = LaurentPoly(kernels.terms_mul(self.terms, o.terms))
        out._check_bound()
        return out

    __rmul__ = __mul__

    def _mul_single(self, mono):
        ((k0, c0),) = mono.terms.items()
        if k0 == 0:
            return LaurentPoly({k: c * c0 for k, c in self.terms.items()})
        return LaurentPoly({k + k0: c * c0 for k, c in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            if len(self.terms) == 1:
                ((k, c),) = self.terms.items()
                out = LaurentPoly({k * n: Rat(1) / c ** (-n)})
                out._check_bound()
                return out
            raise ValueError("negative power of a non-monomial Laurent polynomial")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _check_bound(self):
        bound = _EXP_BOUND
        for k in self.terms:
            a, b = _unpack(k)
            if abs(a) > bound or abs(b) > bound:
                raise ExponentOverflow(f"exponent ({a},{b}) exceeds bound {bound}")

    # -- structure ---------------------------------------------------------

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self):
        if not self.terms:
            return Rat(0)
        if len(self.terms) == 1 and 0 in self.terms:
            return self.terms[0]
        raise ValueError("not a constant")

    def is_monomial(self):
        return len(self.terms) == 1

    def exp_range(self):
        """(amin, amax, bmin, bmax) over all terms; zero poly gives zeros."""
        if not self.terms:
            return (0, 0, 0, 0)
        amin = amax = bmin = bmax = None
        for k in self.terms:
            a, b = _unpack(k)
            if amin is None:
                amin = amax = a
                bmin = bmax = b
            else:
                if a < amin:
                    amin = a
                elif a > amax:
                    amax = a
                if b < bmin:
                    bmin = b
                elif b > bmax:
                    bmax = b
        return (amin, amax, bmin, bmax)

    def is_univariate_r(self):
        return all(_unpack(k)[0] == 0 for k in self.terms)

    def total_span(self):
        amin, amax, bmin, bmax = self.exp_range()
        return (amax - amin) + (bmax - bmin)

    def leading_key(self):
        return max(self.terms)

    def leading_coeff(self):
        return self.terms[max(self.terms)]

    def content(self):
        """Positive rational gcd of the coefficients (0 for the zero poly)."""
        it = iter(self.terms.values())
        try:
            g = abs(next(it))
        except StopIteration:
            return Rat(0)
        for c in it:
            # no early exit: a fractional coefficient can still shrink g below 1
            g = _rat_gcd(g, c)
        return g

    def scale(self, c):
        c = Rat(c)
        if not c:
            return LaurentPoly.zero()
        return LaurentPoly({k: v * c for k, v in self.terms.items()})

    def shift(self, da, db):
        """Multiply by the monomial l^da * r^db."""
        if not self.terms:
            return self
        k0 = _pack(da, db)
        out = LaurentPoly({k + k0: c for k, c in self.terms.items()})
        out._check_bound()
        return out

    def divexact(self, other):
        """Exact division in the Laurent ring; ValueError when inexact."""
        if not other.terms:
            raise DivisionByZero("division by zero polynomial")
        if not self.terms:
            return LaurentPoly.zero()
        rem = dict(self.terms)
        quot = {}
        lead_k = max(other.terms)
        lead_c = other.terms[lead_k]
        oterms = other.terms
        # any exact quotient has its lowest key >= qmin
        qmin = min(self.terms) - min(other.terms)
        while rem:
            rk = max(rem)
            qk = rk - lead_k
            if qk < qmin:
                raise ValueError("inexact Laurent division")
            qc = rem[rk] / lead_c
            quot[qk] = qc
            for k, c in oterms.items():
                kk = qk + k
                v = rem.get(kk)
                nv = (v if v is not None else Rat(0)) - qc * c
                if nv:
                    rem[kk] = nv
                elif v is not None:
                    del rem[kk]
        return LaurentPoly(quot)

    # -- substitution and evaluation ----------------------------------------

    def substitute_l(self, eps, k):
        """Replace l by eps*r^k (eps in {1,-1}); result is univariate in r."""
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        out = {}
        for key, c in self.terms.items():
            a, b = _unpack(key)
            nb = b + k * a
            if abs(nb) > _EXP_BOUND:
                raise ExponentOverflow(f"exponent {nb} exceeds bound after substitution")
            cc = c if (eps == 1 or a % 2 == 0) else -c
            nk = _pack(0, nb)
            v = out.get(nk)
            if v is None:
                out[nk] = cc
            else:
                v = v + cc
                if v:
                    out[nk] = v
                else:
                    del out[nk]
        return LaurentPoly(out)

    def evaluate(self, l_val, r_val):
        """Exact evaluation; the result lives in the arithmetic of the inputs."""
        acc = None
        lp = _PowCache(l_val)
        rp = _PowCache(r_val)
        for key, c in self.terms.items():
            a, b = _unpack(key)
            v = c * lp[a] * rp[b] if a else c * rp[b]
            acc = v if acc is None else acc + v
        if acc is None:
            return Rat(0)
        return acc

    def to_dense_r(self):
        """(shift, coeffs): self = r^shift * sum coeffs[i] r^i, univariate only."""
        if not self.terms:
            return 0, []
        exps = []
        for k in self.terms:
            a, b = _unpack(k)
            if a:
                raise ValueError("not univariate in r")
            exps.append(b)
        lo, hi = min(exps), max(exps)
        coeffs = [Rat(0)] * (hi - lo + 1)
        for k, c in self.terms.items():
            coeffs[_unpack(k)[1] - lo] = c
        return lo, coeffs

    def to_dense_int_r(self):
        """(scale, shift, intcoeffs): self = scale * r^shift * poly(intcoeffs).

        Univariate in r only; intcoeffs is primitive with no trailing zeros.
        """
        lo, coeffs = self.to_dense_r()
        if not coeffs:
            return Rat(0), 0, []
        den_lcm = 1
        for c in coeffs:
            d = int(c.denominator)
            den_lcm = den_lcm * d // gcd(den_lcm, d)
        ints = [int(c.numerator) * (den_lcm // int(c.denominator)) for c in coeffs]
        cont = 0
        for v in ints:
            cont = gcd(cont, abs(v))
        ints = [v // cont for v in ints]
        return Rat(cont) / den_lcm, lo, ints

    # -- gcd ----------------------------------------------------------------

    def gcd(self, other):
        """Polynomial gcd, exact; see RatFunc for when it is applied."""
        if not self.terms:
            return _make_positive(other)
        if not other.terms:
            return _make_positive(self)
        a_uni = self.is_univariate_r()
        b_uni = other.is_univariate_r()
        if a_uni and b_uni:
            return _gcd_univariate_r(self, other)
        return _gcd_bivariate(self, other)

    # -- text ---------------------------------------------------------------

    def to_text(self):
        return laurent_to_text(self)

    def __repr__(self):
        return f"LaurentPoly({laurent_to_text(self)})"


class _PowCache:
    """Memoized integer powers of one value (supports negative exponents)."""

    def __init__(self, base):
        self.base = base
        self.cache = {}

    def __getitem__(self, e):
        c = self.cache.get(e)
        if c is None:
            c = self.base ** e
            self.cache[e] = c
        return c


def _make_positive(p):
    if p.terms and p.leading_coeff() < 0:
        return -p
    return p


def _gcd_univariate_r(p, q):
    _, ps, pi = p.to_dense_int_r()
    _, qs, qi = q.to_dense_int_r()
    g = kernels.poly_gcd_int(pi, qi)
    return LaurentPoly.from_pairs([((0, i), c) for i, c in enumerate(g)])


def _bi_coeff_map(p):
    """Map a -> dense int-list in r, plus overall monomial shift and scale."""
    amin, _amax, bmin, _bmax = p.exp_range()
    cols = {}
    den_lcm = 1
    for k, c in p.terms.items():
        den_lcm = den_lcm * int(c.denominator) // gcd(den_lcm, int(c.denominator))
    for k, c in p.terms.items():
        a, b = _unpack(k)
        cols.setdefault(a - amin, {})[b - bmin] = int(c.numerator) * (den_lcm // int(c.denominator))
    dense = {}
    for a, col in cols.items():
        hi = max(col)
        lst = [0] * (hi + 1)
        for b, v in col.items():
            lst[b] = v
        dense[a] = lst
    return dense


def _gcd_bivariate(p, q):
    """Primitive-PRS gcd viewing p, q in (Z[r])[l]; exact for small inputs."""
    dp = _bi_coeff_map(p)
    dq = _bi_coeff_map(q)

    def content(d):
        g = []
        for lst in d.values():
            g = kernels.poly_gcd_int(g, lst)
            if g == [1]:
                break
        return g

    def primitive(d):
        c = content(d)
        if c == [1]:
            return d, c
        return {a: kernels.poly_divexact_int(lst, c) for a, lst in d.items()}, c

    def degree(d):
        return max(d) if d else -1

    def pseudo_rem(u, v):
        dv = degree(v)
        lv = v[dv]
        u = {a: list(l) for a, l in u.items()}
        while u and degree(u) >= dv:
            du = degree(u)
            lu = u.pop(du)
            # u = lv*u - lu*l^(du-dv)*v  (leading term cancels)
            nu = {}
            for a, l in u.items():
                nu[a] = kernels.poly_mul_int(lv, l)
            for a, l in v.items():
                if a == dv:
                    continue
                t = kernels.poly_mul_int(lu, l)
                tgt = a + du - dv
                cur = nu.get(tgt, [])
                m = max(len(cur), len(t))
                s = [(cur[i] if i < len(cur) else 0) - (t[i] if i < len(t) else 0) for i in range(m)]
                while s and not s[-1]:
                    s.pop()
                if s:
                    nu[tgt] = s
                elif tgt in nu:
                    del nu[tgt]
            u = {a: l for a, l in nu.items() if l}
        return u

    u, cu = primitive(dp)
    v, cv = primitive(dq)
    cont_gcd = kernels.poly_gcd_int(cu, cv)
    if degree(u) < degree(v):
        u, v = v, u
    while v:
        r = pseudo_rem(u, v)
        if r:
            r, _ = primitive(r)
        u, v = v, r
    # result = cont_gcd * u, as a LaurentPoly with nonnegative exponents
    pairs = []
    for a, lst in u.items():
        for i, c in enumerate(lst):
            if c:
                pairs.append(((a, i), c))
    g = LaurentPoly.from_pairs(pairs)
    if cont_gcd != [1]:
        g = g * LaurentPoly.from_pairs([((0, i), c) for i, c in enumerate(cont_gcd)])
    return _make_positive(g)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

_GCD_SPAN_LIMIT = 32


class RatFunc:
    """Quotient of Laurent polynomials, normalized.

    The denominator is a true polynomial (minimum exponents zero), has
    content 1 and positive leading coefficient.  Full gcd reduction is
    applied when both parts are univariate in r or small (total exponent
    span <= 32); beyond that only content and monomial factors are removed.
    Equality and zero tests never rely on canonical form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _normalized=False):
        if den is None:
            den = LaurentPoly.one()
        if _normalized:
            self.num = num
            self.den = den
            return
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            self.num = LaurentPoly.zero()
            self.den = LaurentPoly.one()
            return
        amin, _, bmin, _ = den.exp_range()
        if amin or bmin:
            den = den.shift(-amin, -bmin)
            num = num.shift(-amin, -bmin)
        c = den.content()
        if den.leading_coeff() < 0:
            c = -c
        if c != 1:
            inv = Rat(1) / c
            den = den.scale(inv)
            num = num.scale(inv)
        if not den.is_const():
            if (den.is_univariate_r() and num.is_univariate_r()) or (
                num.total_span() <= _GCD_SPAN_LIMIT and den.total_span() <= _GCD_SPAN_LIMIT
            ):
                namin, _, nbmin, _ = num.exp_range()
                shifted = num.shift(-namin, -nbmin) if (namin or nbmin) else num
                g = shifted.gcd(den)
                if not g.is_const():
                    num = num.divexact(g)
                    den = den.divexact(g)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_const(cls, c):
        return cls(LaurentPoly.const(c), LaurentPoly.one(), _normalized=True)

    @classmethod
    def zero(cls):
        return cls.from_const(0)

    @classmethod
    def one(cls):
        return cls.from_const(1)

    @classmethod
    def var_l(cls):
        return cls(LaurentPoly.var_l(), LaurentPoly.one(), _normalized=True)

    @classmethod
    def var_r(cls):
        return cls(LaurentPoly.var_r(), LaurentPoly.one(), _normalized=True)

    @classmethod
    def from_laurent(cls, p):
        return cls(p, LaurentPoly.one(), _normalized=True)

    # -- predicates -----------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def is_univariate_r(self):
        return self.num.is_univariate_r() and self.den.is_univariate_r()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return kernels.terms_mul(self.num.terms, o.den.terms) == kernels.terms_mul(o.num.terms, self.den.terms)

    __hash__ = None

    # -- arithmetic ------------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if is_rat(other):
            return RatFunc.from_const(other)
        if isinstance(other, LaurentPoly):
            return RatFunc.from_laurent(other)
        return None

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_const() and o.den.is_const():
            dc = self.den.const_value() * o.den.const_value()
            num = self.num * o.num
            return RatFunc(num.scale(Rat(1) / dc) if dc != 1 else num, LaurentPoly.one(), _normalized=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise DivisionByZero("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if n < 0:
            if not self.num:
                raise DivisionByZero("negative power of zero")
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n)

    # -- substitution / evaluation ----------------------------------------------

    def substitute_l(self, eps, k):
        """Substitute l -> eps*r^k; univariate-in-r result."""
        den = self.den.substitute_l(eps, k)
        if not den:
            raise DenominatorVanishesIdentically(f"denominator vanishes under l -> {eps:+d}*r^{k}")
        return RatFunc(self.num.substitute_l(eps, k), den)

    def evaluate(self, l_val, r_val):
        try:
            dv = self.den.evaluate(l_val, r_val)
            if not dv:
                raise PoleAtSpecialization("denominator vanishes at the specialization point")
            return self.num.evaluate(l_val, r_val) / dv
        except ZeroDivisionError:
            # negative Laurent exponent hit a zero base
            raise PoleAtSpecialization("negative exponent at a zero coordinate")

    def to_text(self):
        return ratfunc_to_text(self)

    def __repr__(self):
        return f"RatFunc({ratfunc_to_text(self)})"


# ---------------------------------------------------------------------------
# Algebraic ground fields Q[x]/(f)
# ---------------------------------------------------------------------------


class NumberField:
    """Quotient ring Q[x]/(f) for a monic modulus f.

    Irreducibility of f is the caller's contract; a reducible modulus
    surfaces as ZeroDivisorEncountered during inversion.
    """

    def __init__(self, modulus, label=None):
        coeffs = tuple(Rat(c) for c in modulus)
        if len(coeffs) < 2:
            raise ValueError("modulus must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("modulus must be monic")
        self.modulus = coeffs
        self.degree = len(coeffs) - 1
        self.label = label
        d = self.degree
        # reductions of x^d .. x^(2d-2) modulo f
        red = [tuple(-c for c in coeffs[:-1])]
        for _ in range(d - 2):
            prev = red[-1]
            shifted = [Rat(0)] + list(prev[:-1])
            top = prev[-1]
            if top:
                base = red[0]
                shifted = [s + top * b for s, b in zip(shifted, base)]
            red.append(tuple(shifted))
        self._red = red

    @property
    def tag(self):
        return "mod: " + poly_x_to_text(self.modulus)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(("NumberField", self.modulus))

    def __repr__(self):
        return f"NumberField({self.tag})"

    def element(self, coeffs):
        coeffs = [Rat(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = self._reduce(coeffs)
        coeffs.extend(Rat(0) for _ in range(self.degree - len(coeffs)))
        return AlgebraicNumber(self, tuple(coeffs))

    def _reduce(self, coeffs):
        d = self.degree
        out = list(coeffs[:d])
        out.extend(Rat(0) for _ in range(d - len(out)))
        for i in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[i]
            if c:
                for j, rc in enumerate(self._red[i - d]):
                    if rc:
                        out[j] += c * rc
        return out

    def gen(self):
        return self.element([0, 1])

    def zero(self):
        return AlgebraicNumber(self, tuple(Rat(0) for _ in range(self.degree)))

    def one(self):
        return self.element([1])

    def from_int(self, i):
        return self.element([i])

    def from_rat(self, c):
        return self.element([c])

    def coerce(self, x):
        if isinstance(x, AlgebraicNumber):
            if x.field != self:
                raise FieldMismatch(f"element of {x.field.tag} used in {self.tag}")
            return x
        if is_rat(x):
            return self.from_rat(x)
        raise FieldMismatch(f"cannot coerce {type(x).__name__} into {self.tag}")

    def random(self, rng, bound=9):
        return self.element([rat(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(self.degree)])

    def format(self, x):
        return algebraic_to_text(x)

    def parse(self, s):
        return parse_algebraic(s, self)


class AlgebraicNumber:
    """Element of a NumberField, represented by coefficients of degree < deg f."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.coeffs == other.coeffs
        if is_rat(other):
            return self == self.field.from_rat(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise FieldMismatch("algebraic numbers from different fields")
            return other
        if is_rat(other):
            return self.field.from_rat(other)
        return None

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-c for c in self.coeffs))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        d = self.field.degree
        prod = [Rat(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return AlgebraicNumber(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise DivisionByZero("inverse of zero in quotient ring")
        # extended Euclid in Q[x] against the modulus
        f = list(self.field.modulus)
        g = list(self.coeffs)
        while g and not g[-1]:
            g.pop()
        r0, r1 = f, g
        s0, s1 = [], [Rat(1)]
        while r1:
            q, r = _qpoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1))
        if len(r0) != 1:
            raise ZeroDivisorEncountered(
                "element not invertible modulo the supplied modulus (modulus reducible?)"
            )
        inv_lead = Rat(1) / r0[0]
        return self.field.element([c * inv_lead for c in s0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def to_text(self):
        return algebraic_to_text(self)

    def __repr__(self):
        return f"AlgebraicNumber({algebraic_to_text(self)}, {self.field.tag})"


def _qpoly_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    inv = Rat(1) / b[-1]
    q = [Rat(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            qc = c * inv
            q[i - db] = qc
            for j in range(db + 1):
                a[i - db + j] -= qc * b[j]
    while a and not a[-1]:
        a.pop()
    return q, a


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Rat(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    while out and not out[-1]:
        out.pop()
    return out


def _qpoly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else Rat(0)) - (b[i] if i < len(b) else Rat(0)) for i in range(n)]
    while out and not out[-1]:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# Ground-field objects
# ---------------------------------------------------------------------------


class RationalField:
    """The field Q; elements are Rat values."""

    tag = "Q"

    def zero(self):
        return Rat(0)

    def one(self):
        return Rat(1)

    def from_int(self, i):
        return Rat(i)

    def from_rat(self, c):
        return Rat(c)

    def coerce(self, x):
        if is_rat(x):
            return Rat(x)
        raise FieldMismatch(f"cannot coerce {type(x).__name__} into Q")

    def random(self, rng, bound=100):
        return rat(rng.randint(-bound, bound), rng.randint(1, bound))

    def format(self, x):
        return format_rat(x)

    def parse(self, s):
        return parse_rat(s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "QQ"


class FunctionField:
    """Q(l,r) or Q(r); elements are RatFunc values."""

    def __init__(self, variables):
        if tuple(variables) not in (("l", "r"), ("r",)):
            raise ValueError("supported variable sets: (l, r) and (r,)")
        self.variables = tuple(variables)

    @property
    def tag(self):
        return "Q(" + ",".join(self.variables) + ")"

    def zero(self):
        return RatFunc.zero()

    def one(self):
        return RatFunc.one()

    def from_int(self, i):
        return RatFunc.from_const(i)

    def from_rat(self, c):
        return RatFunc.from_const(c)

    def l(self):
        if "l" not in self.variables:
            raise FieldMismatch("l is not a variable of " + self.tag)
        return RatFunc.var_l()

    def r(self):
        return RatFunc.var_r()

    def coerce(self, x):
        if isinstance(x, RatFunc):
            out = x
        elif isinstance(x, LaurentPoly):
            out = RatFunc.from_laurent(x)
        elif is_rat(x):
            return RatFunc.from_const(x)
        else:
            raise FieldMismatch(f"cannot coerce {type(x).__name__} into {self.tag}")
        if "l" not in self.variables and not out.is_univariate_r():
            raise FieldMismatch("element involves l but the field is " + self.tag)
        return out

    def random(self, rng, bound=6):
        nterms = rng.randint(1, 3)
        pairs = []
        for _ in range(nterms):
            a = rng.randint(-2, 2) if "l" in self.variables else 0
            b = rng.randint(-3, 3)
            pairs.append(((a, b), rat(rng.randint(-bound, bound), rng.randint(1, 4))))
        num = LaurentPoly.from_pairs(pairs)
        if not num:
            num = LaurentPoly.one()
        return RatFunc(num)

    def format(self, x):
        return ratfunc_to_text(x)

    def parse(self, s):
        return self.coerce(parse_ratfunc(s))

    def __eq__(self, other):
        return isinstance(other, FunctionField) and self.variables == other.variables

    def __hash__(self):
        return hash(("FunctionField", self.variables))

    def __repr__(self):
        return self.tag


QQ = RationalField()
QLR = FunctionField(("l", "r"))
QR = FunctionField(("r",))

# Cyclotomic-style moduli used by the exceptional-point suite (ascending
# coefficients).  x is a primitive 12th / 20th / 24th root of unity.
CYCLOTOMIC_MODULI = {
    "phi12": (1, 0, -1, 0, 1),
    "phi20": (1, 0, -1, 0, 1, 0, -1, 0, 1),
    "phi24": (1, 0, 0, 0, -1, 0, 0, 0, 1),
}


def cyclotomic_field(name):
    try:
        coeffs = CYCLOTOMIC_MODULI[name]
    except KeyError:
        raise KeyError(f"unknown cyclotomic modulus {name!r}; known: {sorted(CYCLOTOMIC_MODULI)}")
    return NumberField(coeffs, label=name)


def field_of(x):
    """Ground field of a scalar (Q(r) is reported for univariate RatFuncs)."""
    if is_rat(x):
        return QQ
    if isinstance(x, RatFunc):
        return QR if x.is_univariate_r() else QLR
    if isinstance(x, LaurentPoly):
        return QR if x.is_univariate_r() else QLR
    if isinstance(x, AlgebraicNumber):
        return x.field
    raise FieldMismatch(f"not a scalar: {type(x).__name__}")


def field_from_tag(tag):
    tag = tag.strip()
    if tag == "Q":
        return QQ
    if tag == "Q(l,r)":
        return QLR
    if tag == "Q(r)":
        return QR
    if tag.startswith("mod:"):
        return NumberField(parse_poly_x(tag[4:]))
    raise ValueError(f"unknown field tag: {tag!r}")


# ---------------------------------------------------------------------------
# Field operations on scalars
# ---------------------------------------------------------------------------


def field_arith(a, b, op):
    """Strict field arithmetic: operands must share one ground field."""
    ta, tb = _strict_kind(a), _strict_kind(b)
    if ta != tb:
        raise FieldMismatch(f"mixed ground fields: {ta} vs {tb}")
    if isinstance(a, AlgebraicNumber) and a.field != b.field:
        raise FieldMismatch("algebraic numbers from different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("field_arith: division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def _strict_kind(x):
    if is_rat(x):
        return "rational"
    if isinstance(x, RatFunc):
        return "ratfunc"
    if isinstance(x, AlgebraicNumber):
        return "algebraic"
    raise FieldMismatch(f"not a scalar: {type(x).__name__}")


def m_of_r(r_val):
    """m = 1/r - r; satisfies r^2 + m*r - 1 = 0."""
    if isinstance(r_val, int):
        r_val = Rat(r_val)
    if not r_val:
        raise DivisionByZero("m_of_r at r = 0")
    if is_rat(r_val):
        return Rat(1) / r_val - r_val
    if isinstance(r_val, RatFunc):
        return RatFunc.one() / r_val - r_val
    if isinstance(r_val, AlgebraicNumber):
        return r_val.inverse() - r_val
    raise FieldMismatch(f"unsupported scalar type {type(r_val).__name__}")


def substitute_locus(p, eps, k):
    """Substitute l -> eps*r^k into a rational function (eps in {+1,-1})."""
    if isinstance(p, LaurentPoly):
        p = RatFunc.from_laurent(p)
    return p.substitute_l(eps, k)


def specialize(p, r_val, l_val=None):
    """Exact evaluation of p at (l, r); raises PoleAtSpecialization on poles."""
    if isinstance(p, LaurentPoly):
        p = RatFunc.from_laurent(p)
    if l_val is None:
        if not p.is_univariate_r():
            raise ValueError("l value required for a bivariate rational function")
        l_val = Rat(1)
    if isinstance(r_val, int):
        r_val = Rat(r_val)
    if isinstance(l_val, int):
        l_val = Rat(l_val)
    return p.evaluate(l_val, r_val)


# ---------------------------------------------------------------------------
# Text serialization
# ---------------------------------------------------------------------------


def _term_text(c, parts):
    body = "*".join(parts)
    ac = abs(c)
    if not parts:
        return str(ac)
    if ac == 1:
        return body
    return f"{ac}*{body}"


def laurent_to_text(p):
    if not p.terms:
        return "0"
    chunks = []
    for (a, b), c in p.pairs():
        parts = []
        if a:
            parts.append("l" if a == 1 else f"l^{a}")
        if b:
            parts.append("r" if b == 1 else f"r^{b}")
        text = _term_text(c, parts)
        if not chunks:
            chunks.append(("-" if c < 0 else "") + text)
        else:
            chunks.append(("- " if c < 0 else "+ ") + text)
    return " ".join(chunks)


def ratfunc_to_text(f):
    if f.den.is_const() and f.den.const_value() == 1:
        return laurent_to_text(f.num)
    return f"({laurent_to_text(f.num)})/({laurent_to_text(f.den)})"


def algebraic_to_text(x):
    return "[" + ",".join(format_rat(c) for c in x.coeffs) + "]"


def parse_algebraic(s, field):
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"not an algebraic element: {s!r}")
    inner = s[1:-1].strip()
    coeffs = [parse_rat(t) for t in inner.split(",")] if inner else []
    return field.element(coeffs)


_TERM_FACTOR_RE = re.compile(r"^([a-z])(?:\^(-?\d+))?$")


def _parse_term(tok, varnames):
    exps = dict.fromkeys(varnames, 0)
    coeff = Rat(1)
    sign = 1
    tok = tok.strip()
    while tok.startswith("-") or tok.startswith("+"):
        if tok[0] == "-":
            sign = -sign
        tok = tok[1:].strip()
    if not tok:
        raise ValueError("empty term")
    saw_coeff = False
    for factor in tok.split("*"):
        factor = factor.strip()
        m = _TERM_FACTOR_RE.match(factor)
        if m and m.group(1) in varnames:
            exps[m.group(1)] += int(m.group(2)) if m.group(2) else 1
        else:
            if saw_coeff:
                coeff = coeff * parse_rat(factor)
            else:
                coeff = parse_rat(factor)
                saw_coeff = True
    return sign * coeff, exps


def _split_terms(s):
    # split a sum on top-level "+" / "-" (no parentheses inside a sum)
    s = s.strip()
    out = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and cur.strip() and s[i - 1] not in "^*/eE+-" and not cur.rstrip().endswith("^"):
            out.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse_laurent(s, varnames=("l", "r")):
    s = s.strip()
    if s == "0":
        return LaurentPoly.zero()
    pairs = []
    for term in _split_terms(s):
        coeff, exps = _parse_term(term, varnames)
        pairs.append(((exps.get("l", 0), exps.get("r", 0)), coeff))
    return LaurentPoly.from_pairs(pairs)


def parse_ratfunc(s):
    s = s.strip()
    if s.startswith("(") and ")/(" in s and s.endswith(")"):
        idx = s.index(")/(")
        num = parse_laurent(s[1:idx])
        den = parse_laurent(s[idx + 3 : -1])
        return RatFunc(num, den)
    return RatFunc.from_laurent(parse_laurent(s))


def poly_x_to_text(coeffs):
    """Canonical text of a univariate rational polynomial in x, ascending coeffs."""
    chunks = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if not c:
            continue
        parts = []
        if d:
            parts.append("x" if d == 1 else f"x^{d}")
        text = _term_text(c, parts)
        if not chunks:
            chunks.append(("-" if c < 0 else "") + text)
        else:
            chunks.append(("- " if c < 0 else "+ ") + text)
    return " ".join(chunks) if chunks else "0"


def parse_poly_x(s):
    s = s.strip()
    if s == "0":
        return ()
    terms = {}
    for term in _split_terms(s):
        coeff, exps = _parse_term(term, ("x",))
        e = exps["x"]
        if e < 0:
            raise ValueError("negative exponent in modulus")
        terms[e] = terms.get(e, Rat(0)) + coeff
    deg = max(terms)
    return tuple(terms.get(i, Rat(0)) for i in range(deg + 1))


def scalar_to_text(x):
    if is_rat(x):
        return format_rat(x)
    if isinstance(x, LaurentPoly):
        return laurent_to_text(x)
    if isinstance(x, RatFunc):
        return ratfunc_to_text(x)
    if isinstance(x, AlgebraicNumber):
        return algebraic_to_text(x)
    raise TypeError(f"not a scalar: {type(x).__name__}")


def scalar_from_text(s, field):
    return field.parse(s)
