# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the hot kernels in lkwb._kernels_py.

Same API, same semantics, same deterministic pivot choices.  Coefficients
stay arbitrary-precision Python objects; the speedup comes from removing
interpreter dispatch in the inner loops.
"""

from math import gcd

BACKEND = "compiled"

PACK = 1 << 34
_HALF = PACK >> 1


def pack_exp(a, b):
    return a * PACK + b


def unpack_exp(key):
    b = ((key + _HALF) % PACK) - _HALF
    return (key - b) // PACK, b


def terms_mul(dict a, dict b):
    cdef dict out = {}
    if not a or not b:
        return out
    if len(a) > len(b):
        a, b = b, a
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


def terms_add(dict a, dict b):
    cdef dict out = dict(a)
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


def terms_scale(dict a, c):
    cdef dict out = {}
    if not c:
        return out
    for k, v in a.items():
        out[k] = v * c
    return out


def poly_mul_int(list a, list b):
    cdef Py_ssize_t i, j, la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                bj = b[j]
                if bj:
                    out[i + j] = out[i + j] + ai * bj
    while out and not out[len(out) - 1]:
        out.pop()
    return out


def poly_divexact_int(list a, list b):
    cdef Py_ssize_t i, j, db
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) < len(b):
        raise ValueError("inexact polynomial division")
    cdef list rem = list(a)
    lead = b[len(b) - 1]
    db = len(b) - 1
    cdef list q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if not c:
            continue
        qc, r = divmod(c, lead)
        if r:
            raise ValueError("inexact polynomial division")
        q[i - db] = qc
        for j in range(db + 1):
            rem[i - db + j] = rem[i - db + j] - qc * b[j]
    for i in range(len(rem)):
        if rem[i]:
            raise ValueError("inexact polynomial division")
    while q and not q[len(q) - 1]:
        q.pop()
    return q


def poly_eval_int(list c, x):
    acc = 0
    cdef Py_ssize_t i
    for i in range(len(c) - 1, -1, -1):
        acc = acc * x + c[i]
    return acc


def poly_content_int(list a):
    g = 0
    for c in a:
        if c:
            g = gcd(g, c if c > 0 else -c)
            if g == 1:
                return 1
    return g


def poly_gcd_int(a, b):
    a = list(a)
    b = list(b)
    if not a and not b:
        return []
    if not a or not b:
        c = a or b
        cc = poly_content_int(c)
        c = [x // cc for x in c]
        return c if c[len(c) - 1] > 0 else [-x for x in c]
    ca = poly_content_int(a)
    cb = poly_content_int(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    cg = gcd(ca, cb)
    if len(a) < len(b):
        a, b = b, a
    cdef Py_ssize_t db, shift, j
    while b:
        r = list(a)
        lead = b[len(b) - 1]
        db = len(b) - 1
        while len(r) - 1 >= db and r:
            if not r[len(r) - 1]:
                r.pop()
                continue
            shift = len(r) - 1 - db
            c = r[len(r) - 1]
            r = [lead * x for x in r]
            for j in range(db + 1):
                r[shift + j] = r[shift + j] - c * b[j]
            while r and not r[len(r) - 1]:
                r.pop()
        cr = poly_content_int(r)
        if cr > 1:
            r = [c // cr for c in r]
        a, b = b, r
    if a[len(a) - 1] < 0:
        a = [-c for c in a]
    if cg > 1:
        a = [c * cg for c in a]
    return a


def bareiss_det_int(rows):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 1
    cdef list a = [list(r) for r in rows]
    cdef Py_ssize_t k, i, j, piv
    cdef int sign = 1
    prev = 1
    cdef list row_k, row_i
    for k in range(n - 1):
        piv = -1
        for i in range(k, n):
            if (<list>a[i])[k]:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != k:
            tmp = a[k]
            a[k] = a[piv]
            a[piv] = tmp
            sign = -sign
        row_k = <list>a[k]
        pivot = row_k[k]
        for i in range(k + 1, n):
            row_i = <list>a[i]
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
    d = (<list>a[n - 1])[n - 1]
    return -d if sign < 0 else d


def bareiss_det_polyint(rows):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return [1]
    cdef list a = [[list(e) for e in r] for r in rows]
    cdef int sign = 1
    cdef Py_ssize_t k, i, j, piv, nt, best
    prev = [1]
    cdef list row_k, row_i
    for k in range(n - 1):
        piv = -1
        best = -1
        for i in range(k, n):
            e = (<list>a[i])[k]
            if e:
                nt = 0
                for c in <list>e:
                    if c:
                        nt += 1
                if best < 0 or nt < best:
                    best = nt
                    piv = i
        if piv < 0:
            return []
        if piv != k:
            tmp = a[k]
            a[k] = a[piv]
            a[piv] = tmp
            sign = -sign
        row_k = <list>a[k]
        pivot = row_k[k]
        for i in range(k + 1, n):
            row_i = <list>a[i]
            head = row_i[k]
            for j in range(k + 1, n):
                t = poly_mul_int(pivot, row_i[j])
                if head:
                    s = poly_mul_int(head, row_k[j])
                    t = _sub_pad(t, s)
                row_i[j] = poly_divexact_int(t, prev) if prev != [1] else t
            row_i[k] = []
        prev = pivot
    d = (<list>a[n - 1])[n - 1]
    return [-c for c in d] if sign < 0 else d


cdef list _sub_pad(list a, list b):
    cdef Py_ssize_t la = len(a), lb = len(b), n = la if la > lb else lb, i
    cdef list out = [0] * n
    for i in range(n):
        x = a[i] if i < la else 0
        y = b[i] if i < lb else 0
        out[i] = x - y
    while out and not out[len(out) - 1]:
        out.pop()
    return out
