"""Dense exact linear algebra over any workbench ground field.

Determinants, kernels, subspace lattice operations, operator closure,
invertible-submatrix certificates and commutant computation.  Matrices and
bases are immutable values; all operations are pure functions, so
independent jobs can run concurrently without shared state.
"""

from __future__ import annotations

import hashlib
import json
from math import gcd as _int_gcd

from . import kernels
from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    NonSquare,
    SubmatrixNotFound,
    ZeroSeed,
)
from .scalars import (
    FunctionField,
    LaurentPoly,
    NumberField,
    Rat,
    RatFunc,
    RationalField,
    field_from_tag,
    is_rat,
    scalar_to_text,
)


class Matrix:
    """Immutable dense matrix with entries in one ground field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, *, _trusted=False):
        if _trusted:
            self.rows = rows
        else:
            self.rows = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        self.field = field
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise DimensionMismatch("ragged rows")

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one(), field.zero()
        return cls(field, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)),
                   _trusted=True)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        zero = field.zero()
        return cls(field, tuple((zero,) * ncols for _ in range(nrows)), _trusted=True)

    def _check_same_field(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"matrix fields differ: {self.field.tag} vs {other.field.tag}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.nrows == other.nrows
                and self.ncols == other.ncols
                and all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)))

    def __add__(self, other):
        self._check_same_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.field,
                      tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
                      _trusted=True)

    def __sub__(self, other):
        self._check_same_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.field,
                      tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
                      _trusted=True)

    def __neg__(self):
        return Matrix(self.field, tuple(tuple(-a for a in row) for row in self.rows), _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch("inner dimensions differ")
        bcols = tuple(zip(*other.rows))
        out = []
        for row in self.rows:
            orow = []
            for col in bcols:
                acc = None
                for a, b in zip(row, col):
                    if a and b:
                        acc = a * b if acc is None else acc + a * b
                orow.append(acc if acc is not None else self.field.zero())
            out.append(tuple(orow))
        return Matrix(self.field, tuple(out), _trusted=True)

    def scale(self, c):
        c = self.field.coerce(c)
        return Matrix(self.field, tuple(tuple(c * a for a in row) for row in self.rows), _trusted=True)

    def transpose(self):
        return Matrix(self.field, tuple(zip(*self.rows)), _trusted=True)

    def mat_vec(self, v):
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length differs from column count")
        out = []
        for row in self.rows:
            acc = None
            for a, x in zip(row, v):
                if a and x:
                    acc = a * x if acc is None else acc + a * x
            out.append(acc if acc is not None else self.field.zero())
        return tuple(out)

    def is_zero(self):
        return not any(any(row) for row in self.rows)

    def is_square(self):
        return self.nrows == self.ncols

    def submatrix(self, row_idx, col_idx):
        return Matrix(self.field,
                      tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx),
                      _trusted=True)

    # -- serialization -------------------------------------------------------

    def to_text(self):
        lines = [f"{self.nrows} {self.ncols} {self.field.tag}"]
        for row in self.rows:
            for x in row:
                lines.append(scalar_to_text(x))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.strip().split("\n")
        head = lines[0].split(None, 2)
        nrows, ncols = int(head[0]), int(head[1])
        field = field_from_tag(head[2] if len(head) > 2 else "Q")
        entries = [field.parse(s) for s in lines[1 : 1 + nrows * ncols]]
        rows = tuple(tuple(entries[i * ncols : (i + 1) * ncols]) for i in range(nrows))
        return cls(field, rows, _trusted=True)

    def to_json_obj(self):
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "field": self.field.tag,
            "entries": [[scalar_to_text(x) for x in row] for row in self.rows],
        }

    @classmethod
    def from_json_obj(cls, obj):
        field = field_from_tag(obj["field"])
        rows = tuple(tuple(field.parse(s) for s in row) for row in obj["entries"])
        return cls(field, rows, _trusted=True)

    def content_hash(self):
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field.tag})"


def matrix_to_json(m):
    return json.dumps(m.to_json_obj())


def matrix_from_json(s):
    return Matrix.from_json_obj(json.loads(s))


# ---------------------------------------------------------------------------
# Pivoting and echelon forms
# ---------------------------------------------------------------------------


def _pivot_cost(field, x):
    """Smaller cost = preferred pivot.

    Over polynomial entries prefer the sparsest candidate (fewest terms) to
    limit expression swell; over the rationals prefer the max-magnitude
    numerator; over quotient rings the first nonzero candidate.
    """
    if isinstance(x, RatFunc):
        return len(x.num.terms) + len(x.den.terms)
    if is_rat(x):
        n = x.numerator
        return -(n if n >= 0 else -n)
    return 0


def _rref(rows, field):
    """Reduced row echelon form; returns (rows, pivot_columns).

    Deterministic: best pivot by cost, ties broken by first row.
    """
    rows = [list(r) for r in rows]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    pivots = []
    pr = 0
    for c in range(nc):
        best = None
        best_cost = None
        for i in range(pr, nr):
            x = rows[i][c]
            if x:
                cost = _pivot_cost(field, x)
                if best_cost is None or cost < best_cost:
                    best, best_cost = i, cost
        if best is None:
            continue
        if best != pr:
            rows[pr], rows[best] = rows[best], rows[pr]
        pv = rows[pr][c]
        if pv != field.one():
            rows[pr] = [x / pv if x else x for x in rows[pr]]
        prow = rows[pr]
        for i in range(nr):
            if i != pr and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], prow)]
        pivots.append(c)
        pr += 1
        if pr == nr:
            break
    return [tuple(r) for r in rows[:pr]], pivots


def rank(m):
    _, pivots = _rref(m.rows, m.field)
    return len(pivots)


def inverse(m):
    if not m.is_square():
        raise NonSquare("inverse of a non-square matrix")
    n = m.nrows
    one, zero = m.field.one(), m.field.zero()
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m.rows)]
    rows, pivots = _rref(aug, m.field)
    if pivots[:n] != list(range(n)):
        raise DivisionByZero("matrix is singular")
    return Matrix(m.field, tuple(tuple(row[n:]) for row in rows), _trusted=True)


# ---------------------------------------------------------------------------
# Determinants
# ---------------------------------------------------------------------------


def det(m):
    """Exact determinant.

    Fraction-free (Bareiss) over polynomial entries after clearing
    denominators; ordinary elimination over the field otherwise.
    """
    if not m.is_square():
        raise NonSquare("determinant of a non-square matrix")
    if m.nrows == 0:
        return m.field.one()
    if isinstance(m.field, FunctionField):
        return _det_function_field(m)
    return _det_field_elimination(m)


def _det_field_elimination(m):
    a = [list(row) for row in m.rows]
    n = m.nrows
    field = m.field
    detval = field.one()
    for k in range(n):
        piv = None
        best_cost = None
        for i in range(k, n):
            if a[i][k]:
                cost = _pivot_cost(field, a[i][k])
                if best_cost is None or cost < best_cost:
                    piv, best_cost = i, cost
        if piv is None:
            return field.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            detval = -detval
        pv = a[k][k]
        detval = detval * pv
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / pv
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[k])]
    return detval


def _det_function_field(m):
    # clear denominators row by row; det m = bareiss_det / prod(row factors)
    cleared = []
    factor = RatFunc.one()
    for row in m.rows:
        den = LaurentPoly.one()
        for x in row:
            if x and not x.den.is_const():
                g = den.gcd(x.den)
                den = den.divexact(g) * x.den
        polys = []
        for x in row:
            p = x.num * den.divexact(x.den) if x else LaurentPoly.zero()
            polys.append(p)
        cleared.append(polys)
        factor = factor * RatFunc.from_laurent(den)
    if all(p.is_univariate_r() for row in cleared for p in row):
        d = _det_univariate(cleared)
    else:
        d = _bareiss_laurent(cleared)
    return RatFunc.from_laurent(d) / factor


def _det_univariate(rows):
    """Determinant of a matrix of univariate-in-r Laurent polys, as a poly."""
    n = len(rows)
    scale = Rat(1)
    shift = 0
    dense = []
    for row in rows:
        drow = []
        for p in row:
            c, s, ints = p.to_dense_int_r()
            drow.append((c, s, ints))
        dense.append(drow)
    mat = []
    for drow in dense:
        # pull out the row content and the lowest power of r
        nz = [(c, s, ints) for (c, s, ints) in drow if ints]
        if not nz:
            return LaurentPoly.zero()
        rshift = min(s for _, s, _ in nz)
        den_lcm = 1
        num_gcd = 0
        for c, _, _ in nz:
            den_lcm = den_lcm * int(c.denominator) // _int_gcd(den_lcm, int(c.denominator))
            num_gcd = _int_gcd(num_gcd, abs(int(c.numerator)))
        rowscale = Rat(num_gcd) / den_lcm
        scale = scale * rowscale
        shift += rshift
        irow = []
        for c, s, ints in drow:
            if not ints:
                irow.append([])
                continue
            mult = int((c / rowscale).numerator)
            assert int((c / rowscale).denominator) == 1
            lead = [0] * (s - rshift)
            irow.append(lead + [mult * v for v in ints])
        mat.append(irow)
    d = kernels.bareiss_det_polyint(mat)
    if not d:
        return LaurentPoly.zero()
    p = LaurentPoly.from_pairs([((0, i + shift), c) for i, c in enumerate(d)])
    return p.scale(scale)


def _bareiss_laurent(rows):
    """Fraction-free determinant over the bivariate Laurent ring."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = LaurentPoly.one()
    for k in range(n - 1):
        piv = None
        best = None
        for i in range(k, n):
            e = a[i][k]
            if e:
                if best is None or len(e.terms) < best:
                    best = len(e.terms)
                    piv = i
        if piv is None:
            return LaurentPoly.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            head = row_i[k]
            for j in range(k + 1, n):
                t = pivot * row_i[j]
                if head:
                    t = t - head * row_k[j]
                row_i[j] = t.divexact(prev) if prev.terms != {0: Rat(1)} else t
            row_i[k] = LaurentPoly.zero()
        prev = pivot
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


class SubspaceBasis:
    """Echelonized basis (reduced row echelon form) of a subspace.

    The RREF representation is canonical, so equality of values is equality
    of subspaces.
    """

    __slots__ = ("field", "ambient_dim", "vectors", "pivots")

    def __init__(self, field, ambient_dim, vectors, pivots, *, _trusted=False):
        if not _trusted:
            raise TypeError("use SubspaceBasis.from_vectors")
        self.field = field
        self.ambient_dim = ambient_dim
        self.vectors = vectors
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, field, ambient_dim, vectors):
        vecs = [tuple(field.coerce(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise AmbientMismatch("vector length differs from ambient dimension")
        rows, pivots = _rref(vecs, field)
        return cls(field, ambient_dim, tuple(rows), tuple(pivots), _trusted=True)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, (), (), _trusted=True)

    @classmethod
    def full(cls, field, ambient_dim):
        eye = Matrix.identity(field, ambient_dim)
        return cls(field, ambient_dim, eye.rows, tuple(range(ambient_dim)), _trusted=True)

    @classmethod
    def coordinate(cls, field, ambient_dim, indices):
        """Span of the unit vectors at the given coordinate indices."""
        one, zero = field.one(), field.zero()
        vecs = tuple(tuple(one if j == i else zero for j in range(ambient_dim)) for i in sorted(indices))
        return cls(field, ambient_dim, vecs, tuple(sorted(indices)), _trusted=True)

    @property
    def dim(self):
        return len(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots
                and all(a == b for va, vb in zip(self.vectors, other.vectors) for a, b in zip(va, vb)))

    def reduce(self, v):
        """Residue of v modulo the subspace."""
        v = list(v)
        for row, p in zip(self.vectors, self.pivots):
            c = v[p]
            if c:
                for j, b in enumerate(row):
                    if b:
                        v[j] = v[j] - c * b
        return tuple(v)

    def contains(self, v):
        return not any(self.reduce(v))

    def contains_space(self, other):
        return all(self.contains(v) for v in other.vectors)

    def extend(self, vectors):
        """Subspace spanned by self and the extra vectors (re-echelonized)."""
        return SubspaceBasis.from_vectors(self.field, self.ambient_dim,
                                          list(self.vectors) + list(vectors))

    def to_json_obj(self):
        return {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "pivots": list(self.pivots),
            "vectors": [[scalar_to_text(x) for x in v] for v in self.vectors],
        }

    def __repr__(self):
        return f"SubspaceBasis(dim {self.dim} in ambient {self.ambient_dim} over {self.field.tag})"


def kernel(m):
    """Echelonized basis of the right null space of m; M v = 0 is verified."""
    rows, pivots = _rref(m.rows, m.field)
    n = m.ncols
    free = [c for c in range(n) if c not in set(pivots)]
    one, zero = m.field.one(), m.field.zero()
    vecs = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for idx, p in enumerate(pivots):
            x = rows[idx][f]
            if x:
                v[p] = -x
        vecs.append(tuple(v))
    basis = SubspaceBasis.from_vectors(m.field, n, vecs)
    for v in basis.vectors:
        if any(m.mat_vec(v)):
            raise AssertionError("kernel verification failed")
    return basis


def subspace_intersect(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch("ambient dimensions differ")
    if a.field != b.field:
        raise FieldMismatch("subspaces over different fields")
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis.zero(a.field, a.ambient_dim)
    n = a.ambient_dim
    cols = list(a.vectors) + [tuple(-x for x in v) for v in b.vectors]
    mat = Matrix(a.field, tuple(tuple(col[i] for col in cols) for i in range(n)), _trusted=True)
    ker = kernel(mat)
    vecs = []
    for w in ker.vectors:
        acc = [a.field.zero()] * n
        for coef, av in zip(w[: a.dim], a.vectors):
            if coef:
                for j, x in enumerate(av):
                    if x:
                        acc[j] = acc[j] + coef * x
        vecs.append(tuple(acc))
    return SubspaceBasis.from_vectors(a.field, n, vecs)


def subspace_sum(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch("ambient dimensions differ")
    return a.extend(b.vectors)


def operator_closure(seed_vectors, ops):
    """Smallest subspace containing the seeds and stable under every op.

    Breadth-first generations with re-echelonization each generation;
    terminates because the dimension is bounded by the ambient dimension.
    """
    if not ops:
        raise DimensionMismatch("no operators given")
    n = ops[0].ncols
    field = ops[0].field
    for op in ops:
        if not op.is_square() or op.ncols != n:
            raise DimensionMismatch("operators must be square of equal size")
    seeds = [tuple(field.coerce(x) for x in v) for v in seed_vectors]
    for v in seeds:
        if len(v) != n:
            raise DimensionMismatch("seed length differs from operator size")
    if not any(any(v) for v in seeds):
        raise ZeroSeed("all seed vectors are zero")
    basis = SubspaceBasis.from_vectors(field, n, seeds)
    frontier = basis.vectors
    while frontier:
        images = [op.mat_vec(v) for op in ops for v in frontier]
        new_basis = basis.extend(images)
        old_pivots = set(basis.pivots)
        frontier = [v for v, p in zip(new_basis.vectors, new_basis.pivots) if p not in old_pivots]
        basis = new_basis
        if basis.dim == n:
            break
    return basis


def is_invariant(space, ops):
    """True iff op.v lies in the space for every op and basis vector v."""
    for op in ops:
        if op.ncols != space.ambient_dim:
            raise DimensionMismatch("operator size differs from ambient dimension")
        for v in space.vectors:
            if not space.contains(op.mat_vec(v)):
                return False
    return True


def find_invertible_submatrix(m, s):
    """Row/column index sets whose s x s minor is invertible.

    Greedy full pivoting with exact verification of the returned minor;
    raises SubmatrixNotFound when rank(m) < s.  Polynomial entries go
    through fraction-free elimination to avoid rational-function swell.
    """
    if s > min(m.nrows, m.ncols):
        raise DimensionMismatch("requested size exceeds matrix dimensions")
    if s == 0:
        return (), ()
    if isinstance(m.field, FunctionField):
        return _find_submatrix_fraction_free(m, s)
    field = m.field
    work = [list(row) for row in m.rows]
    rows_left = list(range(m.nrows))
    cols_left = list(range(m.ncols))
    chosen_rows = []
    chosen_cols = []
    for _ in range(s):
        best = None
        best_cost = None
        for i in rows_left:
            wi = work[i]
            for j in cols_left:
                x = wi[j]
                if x:
                    cost = _pivot_cost(field, x)
                    if best_cost is None or cost < best_cost:
                        best, best_cost = (i, j), cost
        if best is None:
            raise SubmatrixNotFound(f"no invertible {s}x{s} submatrix (rank < {s})")
        bi, bj = best
        chosen_rows.append(bi)
        chosen_cols.append(bj)
        rows_left.remove(bi)
        cols_left.remove(bj)
        pv = work[bi][bj]
        for i in rows_left:
            x = work[i][bj]
            if x:
                f = x / pv
                wi = work[i]
                wb = work[bi]
                for j in cols_left:
                    if wb[j]:
                        wi[j] = wi[j] - f * wb[j]
    rows_idx = tuple(sorted(chosen_rows))
    cols_idx = tuple(sorted(chosen_cols))
    minor = m.submatrix(rows_idx, cols_idx)
    if not det(minor):
        raise AssertionError("pivoting found a singular minor; this is a bug")
    return rows_idx, cols_idx


def _find_submatrix_fraction_free(m, s):
    """Submatrix search by Bareiss elimination over cleared polynomial rows.

    Row scaling by nonzero polynomials preserves which index sets give
    invertible minors; Sylvester's identity keeps every division exact.
    """
    cleared = []
    for row in m.rows:
        den = LaurentPoly.one()
        for x in row:
            if x and not x.den.is_const():
                g = den.gcd(x.den)
                den = den.divexact(g) * x.den
        cleared.append([x.num * den.divexact(x.den) if x else LaurentPoly.zero() for x in row])
    univariate = all(p.is_univariate_r() for row in cleared for p in row)
    if univariate:
        work = []
        for row in cleared:
            parts = [p.to_dense_int_r() for p in row]
            lows = [sh for _, sh, ints in parts if ints]
            rshift = min(lows) if lows else 0
            den_lcm = 1
            for c, _, ints in parts:
                if ints:
                    d = int(c.denominator)
                    den_lcm = den_lcm * d // _int_gcd(den_lcm, d)
            irow = []
            for c, sh, ints in parts:
                if not ints:
                    irow.append([])
                else:
                    mult = int(c.numerator) * (den_lcm // int(c.denominator))
                    irow.append([0] * (sh - rshift) + [mult * v for v in ints])
            work.append(irow)
        zero_p, mul_p, div_p = [], kernels.poly_mul_int, kernels.poly_divexact_int

        def sub_p(a, b):
            n = max(len(a), len(b))
            out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
            while out and not out[-1]:
                out.pop()
            return out

        def cost_p(e):
            return (sum(1 for c in e if c), len(e))

        one_p = [1]
    else:
        work = [list(r) for r in cleared]
        zero_p = LaurentPoly.zero()
        mul_p = lambda a, b: a * b
        div_p = lambda a, b: a.divexact(b)
        sub_p = lambda a, b: a - b
        cost_p = lambda e: (len(e.terms),)
        one_p = LaurentPoly.one()
    rows_left = list(range(m.nrows))
    cols_left = list(range(m.ncols))
    chosen_rows = []
    chosen_cols = []
    prev = one_p
    for _ in range(s):
        best = None
        best_cost = None
        for i in rows_left:
            wi = work[i]
            for j in cols_left:
                e = wi[j]
                if e:
                    c = cost_p(e)
                    if best_cost is None or c < best_cost:
                        best, best_cost = (i, j), c
        if best is None:
            raise SubmatrixNotFound(f"no invertible {s}x{s} submatrix (rank < {s})")
        bi, bj = best
        chosen_rows.append(bi)
        chosen_cols.append(bj)
        rows_left.remove(bi)
        cols_left.remove(bj)
        pivot = work[bi][bj]
        prow = work[bi]
        first = prev == one_p
        for i in rows_left:
            wi = work[i]
            head = wi[bj]
            for j in cols_left:
                a = wi[j]
                t = mul_p(pivot, a) if a else zero_p
                if head and prow[j]:
                    t = sub_p(t, mul_p(head, prow[j]))
                wi[j] = t if (first or not t) else div_p(t, prev)
        prev = pivot
    rows_idx = tuple(sorted(chosen_rows))
    cols_idx = tuple(sorted(chosen_cols))
    minor = m.submatrix(rows_idx, cols_idx)
    if not det(minor):
        raise AssertionError("fraction-free pivoting found a singular minor; this is a bug")
    return rows_idx, cols_idx


def commutant_basis(ops):
    """Basis of {X : X A = A X for all A in ops}; always contains the identity."""
    if not ops:
        raise DimensionMismatch("no operators given")
    n = ops[0].nrows
    field = ops[0].field
    for op in ops:
        if not op.is_square() or op.nrows != n:
            raise DimensionMismatch("operators must be square of equal size")
    zero = field.zero()
    rows = []
    for a in ops:
        ar = a.rows
        for i in range(n):
            for j in range(n):
                row = [zero] * (n * n)
                for p in range(n):
                    x = ar[i][p]
                    if x:
                        row[p * n + j] = row[p * n + j] + x
                for q in range(n):
                    x = ar[q][j]
                    if x:
                        row[i * n + q] = row[i * n + q] - x
                if any(row):
                    rows.append(tuple(row))
    if not rows:
        big = Matrix.zeros(field, 1, n * n)
    else:
        big = Matrix(field, tuple(rows), _trusted=True)
    ker = kernel(big)
    mats = []
    for v in ker.vectors:
        mats.append(Matrix(field, tuple(tuple(v[i * n + j] for j in range(n)) for i in range(n)),
                           _trusted=True))
    return mats


def charpoly(m):
    """Characteristic polynomial det(xI - m), ascending coefficients, monic.

    Faddeev-LeVerrier recursion; exact in characteristic zero.
    """
    if not m.is_square():
        raise NonSquare("charpoly of a non-square matrix")
    n = m.nrows
    field = m.field
    coeffs = [field.zero()] * (n + 1)
    coeffs[n] = field.one()
    mk = Matrix.identity(field, n)
    for k in range(1, n + 1):
        mk = m * mk
        tr = mk.rows[0][0]
        for i in range(1, n):
            tr = tr + mk.rows[i][i]
        c = -(tr / field.from_int(k))
        coeffs[n - k] = c
        if k < n:
            mk = mk + Matrix.identity(field, n).scale(c)
    return coeffs
