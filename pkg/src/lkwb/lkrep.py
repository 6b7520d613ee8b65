"""Lawrence-Krammer representation of the BMW algebra over a chosen field.

The braid-generator action is built on the pair basis x_{s,t}
(1 <= s < t <= n), rescaled by r so that the generator eigenvalues are
{r, -1/r, 1/l}, with the parameter dictionary q = 1/r^2 and tau = r^3/l.
The defining relations are verified explicitly; build_m_matrix in the
reducibility module refuses representations that have not passed the gate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterZero, SemisimplicityViolation
from .linalg import Matrix, inverse
from .scalars import QLR, QQ, QR, Rat, is_rat, m_of_r, scalar_to_text


def pair_basis(n):
    """Index pairs (s, t), 1 <= s < t <= n, in lexicographic order."""
    return tuple((s, t) for s in range(1, n + 1) for t in range(s + 1, n + 1))


def pair_index_map(n):
    return {p: i for i, p in enumerate(pair_basis(n))}


def rep_dim(n):
    return n * (n - 1) // 2


def semisimplicity_guard(r_val, n):
    """True iff r^(2k) != 1 for every k in 1..n (Hecke semisimplicity)."""
    if isinstance(r_val, int):
        r_val = Rat(r_val)
    if not r_val:
        raise ParameterZero("r = 0")
    p = r_val * r_val
    acc = p
    for _ in range(n):
        if acc == 1:
            return False
        acc = acc * p
    return True


class LKParams:
    """Strand count and the (l, r) parameters with their derived values.

    Derived: m = 1/r - r, q = 1/r^2, tau = r^3/l.  Construction enforces
    l, r, m nonzero and the semisimplicity guard.
    """

    __slots__ = ("n", "l", "r", "field", "m", "q", "tau")

    def __init__(self, n, l, r, field):
        if n < 3:
            raise ValueError("n must be at least 3")
        l = field.coerce(l)
        r = field.coerce(r)
        if not l or not r:
            raise ParameterZero("l and r must be nonzero")
        if not semisimplicity_guard(r, n):
            raise SemisimplicityViolation(f"r^(2k) = 1 for some k <= {n}")
        self.n = n
        self.l = l
        self.r = r
        self.field = field
        self.m = m_of_r(r)
        self.q = r ** -2
        self.tau = r ** 3 / l

    def delta(self):
        """e_i^2 = delta * e_i; delta = (1/l - l)/m + 1."""
        one = self.field.one()
        return (one / self.l - self.l) / self.m + one

    def __repr__(self):
        return f"LKParams(n={self.n}, field={self.field.tag})"


class LKRep:
    """The representation: generator matrices, their inverses, and the e_i."""

    __slots__ = ("params", "g", "g_inv", "e", "g_sq", "_gate")

    def __init__(self, params, g, g_inv, e, g_sq):
        self.params = params
        self.g = g
        self.g_inv = g_inv
        self.e = e
        self.g_sq = g_sq
        self._gate = None

    @property
    def field(self):
        return self.params.field

    @property
    def n(self):
        return self.params.n

    @property
    def dim(self):
        return rep_dim(self.params.n)

    def __repr__(self):
        return f"LKRep(n={self.n}, dim={self.dim}, field={self.field.tag})"


def build_sigma(n, q, tau, field):
    """Matrices of the braid generators sigma_k on the pair basis.

    Case-wise action on x_{s,t}; transcription fidelity is enforced by the
    relation gate, which rejects any build violating the braid/BMW laws.
    """
    if not q or not tau:
        raise ParameterZero("q and tau must be nonzero")
    basis = pair_basis(n)
    idx = {p: i for i, p in enumerate(basis)}
    N = len(basis)
    zero, one = field.zero(), field.one()
    qm1 = q - one
    one_minus_q = one - q
    qpow = {1: q}

    def qp(e):
        v = qpow.get(e)
        if v is None:
            v = q ** e
            qpow[e] = v
        return v

    mats = []
    for k in range(1, n):
        cols = [{} for _ in range(N)]
        for j, (s, t) in enumerate(basis):
            col = cols[j]

            def add(pair, c):
                i = idx[pair]
                col[i] = col[i] + c if i in col else c

            if k < s - 1 or k > t:
                add((s, t), one)
            elif k == s - 1:
                add((s - 1, t), one)
                add((s, t), one_minus_q)
            elif k == s and s < t - 1:
                add((s, s + 1), tau * q * qm1)
                add((s + 1, t), q)
            elif k == s and s == t - 1:
                add((s, t), tau * qp(2))
            elif s < k < t - 1:
                add((s, t), one)
                add((k, k + 1), tau * qp(k - s) * qm1 * qm1)
            elif s < k and k == t - 1:
                add((s, t - 1), one)
                add((t - 1, t), tau * qp(t - s) * qm1)
            elif k == t:
                add((s, t), one_minus_q)
                add((s, t + 1), q)
            else:  # unreachable: the cases cover 1 <= k <= n-1  # pragma: no cover
                raise AssertionError((k, s, t))
        rows = tuple(tuple(cols[j].get(i, zero) for j in range(N)) for i in range(N))
        mats.append(Matrix(field, rows, _trusted=True))
    return tuple(mats)


def build_rep(params):
    """Build g_k = r * sigma_k, the inverses, and e_k = (l/m)(g_k^2 + m g_k - 1).

    The rescale factor r is forced: matching the sigma eigenvalues
    {1, -q, tau q^2} to the BMW eigenvalues {r, -1/r, 1/l} requires the
    scalar r once q = 1/r^2 and tau = r^3/l.
    """
    field = params.field
    sigma = build_sigma(params.n, params.q, params.tau, field)
    g = tuple(s.scale(params.r) for s in sigma)
    g_inv = tuple(inverse(gk) for gk in g)
    g_sq = tuple(gk * gk for gk in g)
    N = rep_dim(params.n)
    eye = Matrix.identity(field, N)
    coef = params.l / params.m
    e = tuple((g2 + gk.scale(params.m) - eye).scale(coef) for g2, gk in zip(g_sq, g))
    return LKRep(params, g, g_inv, e, g_sq)


# ---------------------------------------------------------------------------
# Relation verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationReport:
    n: int
    field_tag: str
    braid: bool
    far_commutation: bool
    e_products: bool
    e_definition: bool
    cubic: bool
    e_square: bool
    delta: str
    failures: tuple

    @property
    def all_passed(self):
        return (self.braid and self.far_commutation and self.e_products
                and self.e_definition and self.cubic and self.e_square)

    def to_json_obj(self):
        return {
            "n": self.n,
            "field": self.field_tag,
            "braid": self.braid,
            "far_commutation": self.far_commutation,
            "e_products": self.e_products,
            "e_definition": self.e_definition,
            "cubic_annihilation": self.cubic,
            "e_square": self.e_square,
            "delta": self.delta,
            "all_passed": self.all_passed,
            "failures": list(self.failures),
        }


def verify_relations(rep):
    """Check the six defining relation families and report per-family results.

    (a) braid relations, (b) far commutation, (c) e_i e_j = 0 for
    |i-j| >= 2, (d) the e_i definition identity, (e) cubic annihilation
    (X-r)(X+1/r)(X-1/l), (f) e_i^2 = delta e_i.
    """
    p = rep.params
    n = p.n
    field = p.field
    g, e, g_sq = rep.g, rep.e, rep.g_sq
    N = rep.dim
    eye = Matrix.identity(field, N)
    failures = []

    braid = True
    for i in range(n - 2):
        lhs = g[i] * g[i + 1] * g[i]
        rhs = g[i + 1] * g[i] * g[i + 1]
        if lhs != rhs:
            braid = False
            failures.append(f"braid({i + 1},{i + 2})")

    far = True
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            if g[i] * g[j] != g[j] * g[i]:
                far = False
                failures.append(f"far({i + 1},{j + 1})")

    e_products = True
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            if not (e[i] * e[j]).is_zero():
                e_products = False
                failures.append(f"ee({i + 1},{j + 1})")

    coef = p.l / p.m
    e_definition = True
    for i in range(n - 1):
        rhs = (g_sq[i] + g[i].scale(p.m) - eye).scale(coef)
        if e[i] != rhs:
            e_definition = False
            failures.append(f"edef({i + 1})")

    # cubic (X - r)(X + 1/r)(X - 1/l) expanded via elementary symmetric sums
    one = field.one()
    r_inv = one / p.r
    l_inv = one / p.l
    s1 = p.r - r_inv + l_inv
    s2 = -one + p.r * l_inv - r_inv * l_inv
    cubic = True
    for i in range(n - 1):
        g3 = g_sq[i] * g[i]
        val = g3 - g_sq[i].scale(s1) + g[i].scale(s2) + eye.scale(l_inv)
        if not val.is_zero():
            cubic = False
            failures.append(f"cubic({i + 1})")

    delta = p.delta()
    e_square = True
    for i in range(n - 1):
        if e[i] * e[i] != e[i].scale(delta):
            e_square = False
            failures.append(f"esq({i + 1})")

    return RelationReport(
        n=n,
        field_tag=field.tag,
        braid=braid,
        far_commutation=far,
        e_products=e_products,
        e_definition=e_definition,
        cubic=cubic,
        e_square=e_square,
        delta=scalar_to_text(delta),
        failures=tuple(failures),
    )


def relation_gate(rep):
    """Cached relation verification used as the build gate for M(n)."""
    if rep._gate is None:
        rep._gate = verify_relations(rep)
    return rep._gate


def coordinate_inclusion_preserved(rep, k):
    """Entrywise check that g_1..g_{k-1} preserve the span of pairs with t <= k."""
    basis = pair_basis(rep.n)
    inside = [j for j, (_, t) in enumerate(basis) if t <= k]
    outside = [i for i, (_, t) in enumerate(basis) if t > k]
    for gk in list(rep.g[: k - 1]) + list(rep.g_inv[: k - 1]):
        for j in inside:
            for i in outside:
                if gk.rows[i][j]:
                    return False
    return True


# ---------------------------------------------------------------------------
# Parameter dictionary
# ---------------------------------------------------------------------------


def param_map(direction, *, l=None, r=None, q=None, t=None):
    """Exact conversion between (l, r) and the braid-group (q, t) parameters.

    lr_to_qt: q = 1/r^2, t = r^3/l.
    qt_to_lr: requires the chosen square root r of 1/q; both sign choices
    are reported, first the one matching the given r.
    """
    if direction == "lr_to_qt":
        if l is None or r is None or not l or not r:
            raise ParameterZero("l and r must be given and nonzero")
        return {"q": r ** -2, "t": r ** 3 / l}
    if direction == "qt_to_lr":
        if q is None or t is None or not q or not t:
            raise ParameterZero("q and t must be given and nonzero")
        if r is None or not r:
            raise ParameterZero("qt_to_lr requires a chosen square root r of 1/q")
        if r * r * q != 1:
            raise ValueError("r is not a square root of 1/q")
        l_pos = r ** 3 / t
        return {"choices": ((l_pos, r), (-l_pos, -r))}
    raise ValueError(f"unknown direction {direction!r}")


def convention_report(rep):
    """Echo of the parameter dictionary for auditability."""
    p = rep.params
    return {
        "field": p.field.tag,
        "n": p.n,
        "q": scalar_to_text(p.q),
        "tau": scalar_to_text(p.tau),
        "m": scalar_to_text(p.m),
        "rescale_factor": "r",
        "delta": scalar_to_text(p.delta()),
    }


# ---------------------------------------------------------------------------
# Convenience builders
# ---------------------------------------------------------------------------


def symbolic_rep(n):
    """Representation over Q(l,r) with symbolic parameters."""
    return build_rep(LKParams(n, QLR.l(), QLR.r(), QLR))


def substituted_rep(n, eps, k):
    """Representation over Q(r) with l = eps * r^k substituted."""
    r = QR.r()
    return build_rep(LKParams(n, (r ** k) * eps, r, QR))


def rational_rep(n, l, r):
    return build_rep(LKParams(n, l, r, QQ))


def field_rep(field, n, l, r):
    return build_rep(LKParams(n, l, r, field))
