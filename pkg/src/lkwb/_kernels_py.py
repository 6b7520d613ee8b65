"""Pure-Python implementations of the hot computational kernels.

These are the reference implementations; lkwb._speedups provides compiled
twins with identical semantics. lkwb.kernels selects one at import time.

Conventions shared by both backends:

* "terms" dicts map packed exponent keys (int) to nonzero coefficient
  objects supporting +, *, and truthiness (mpq/Fraction/int).  Packing is
  key = a*PACK + b for the monomial l^a r^b, so key addition is exponent
  addition.
* dense integer polynomials are lists of int coefficients, index = degree,
  with no trailing zeros ([] is the zero polynomial).
"""

from math import gcd

BACKEND = "pure"

# Key packing stride for (a, b) exponent pairs.  |b| stays far below
# PACK/2 for any legal exponent bound, so packed addition never carries.
PACK = 1 << 34
_HALF = PACK >> 1


def pack_exp(a, b):
    return a * PACK + b


def unpack_exp(key):
    b = ((key + _HALF) % PACK) - _HALF
    return (key - b) // PACK, b


def terms_mul(a, b):
    """Convolution of two packed-key term dicts."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = k1 + k2
            v = out.get(k)
            if v is None:
                out[k] = c1 * c2
            else:
                v = v + c1 * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def terms_add(a, b):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = c
        else:
            v = v + c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def terms_scale(a, c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def poly_mul_int(a, b):
    """Product of dense integer polynomials."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    while out and not out[-1]:
        out.pop()
    return out


def poly_divexact_int(a, b):
    """Exact quotient a // b in Z[x]; raises ValueError if inexact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) < len(b):
        raise ValueError("inexact polynomial division")
    rem = list(a)
    lead = b[-1]
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if not c:
            continue
        qc, r = divmod(c, lead)
        if r:
            raise ValueError("inexact polynomial division")
        q[i - db] = qc
        for j in range(db + 1):
            rem[i - db + j] -= qc * b[j]
    if any(rem):
        raise ValueError("inexact polynomial division")
    while q and not q[-1]:
        q.pop()
    return q


def poly_eval_int(c, x):
    """Horner evaluation of a dense integer polynomial at integer x."""
    acc = 0
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def poly_content_int(a):
    g = 0
    for c in a:
        if c:
            g = gcd(g, c if c > 0 else -c)
            if g == 1:
                return 1
    return g


def poly_gcd_int(a, b):
    """Primitive gcd in Z[x] via a primitive pseudo-remainder sequence.

    Result is primitive with positive leading coefficient (or [] if both
    inputs are zero).
    """
    a = list(a)
    b = list(b)
    if not a and not b:
        return []
    if not a or not b:
        c = a or b
        cc = poly_content_int(c)
        c = [x // cc for x in c]
        return c if c[-1] > 0 else [-x for x in c]
    ca, cb = poly_content_int(a), poly_content_int(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    cg = gcd(ca, cb)
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lead = b[-1]
        db = len(b) - 1
        while len(r) - 1 >= db and r:
            if not r[-1]:
                r.pop()
                continue
            shift = len(r) - 1 - db
            c = r[-1]
            # scale r by lead, subtract c * x^shift * b
            r = [lead * x for x in r]
            for j in range(db + 1):
                r[shift + j] -= c * b[j]
            while r and not r[-1]:
                r.pop()
        cr = poly_content_int(r)
        if cr > 1:
            r = [c // cr for c in r]
        a, b = b, r
    if a[-1] < 0:
        a = [-c for c in a]
    if cg > 1:
        a = [c * cg for c in a]
    return a


def bareiss_det_int(rows):
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            head = row_i[k]
            if head:
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - head * row_k[j]) // prev
                row_i[k] = 0
            else:
                # the Bareiss update still rescales rows with a zero head
                for j in range(k + 1, n):
                    if row_i[j]:
                        row_i[j] = (pivot * row_i[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def bareiss_det_polyint(rows):
    """Determinant over Z[x]: entries and result are dense int-coeff lists."""
    n = len(rows)
    if n == 0:
        return [1]
    a = [[list(e) for e in r] for r in rows]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        piv = None
        best = None
        for i in range(k, n):
            e = a[i][k]
            if e:
                nt = sum(1 for c in e if c)
                if best is None or nt < best:
                    best = nt
                    piv = i
        if piv is None:
            return []
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            head = row_i[k]
            for j in range(k + 1, n):
                t = poly_mul_int(pivot, row_i[j])
                if head:
                    s = poly_mul_int(head, row_k[j])
                    t = [x - y for x, y in _zip_pad(t, s)]
                    while t and not t[-1]:
                        t.pop()
                row_i[j] = poly_divexact_int(t, prev) if prev != [1] else t
            row_i[k] = []
        prev = pivot
    d = a[n - 1][n - 1]
    return [-c for c in d] if sign < 0 else d


def _zip_pad(a, b):
    la, lb = len(a), len(b)
    if la < lb:
        a = a + [0] * (lb - la)
    elif lb < la:
        b = b + [0] * (la - lb)
    return zip(a, b)
