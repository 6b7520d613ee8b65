"""Lawrence-Krammer construction: sigma action, dictionary, relations."""

import random

import pytest

from fractions import Fraction

from lkwb.errors import ParameterZero, SemisimplicityViolation
from lkwb.linalg import Matrix, det, rank
from lkwb.lkrep import (
    LKParams,
    build_rep,
    build_sigma,
    coordinate_inclusion_preserved,
    convention_report,
    pair_basis,
    param_map,
    rational_rep,
    rep_dim,
    semisimplicity_guard,
    substituted_rep,
    symbolic_rep,
    verify_relations,
)
from lkwb.scalars import NumberField, QLR, QQ, cyclotomic_field, rat

import oracles


class TestSigmaAction:
    def test_n3_case_iv(self):
        # sigma_1 x_{1,2} = tau q^2 x_{1,2}
        q, tau = rat(1, 4), rat(8, 5)
        mats = build_sigma(3, q, tau, QQ)
        basis = pair_basis(3)
        j = basis.index((1, 2))
        col = [mats[0].rows[i][j] for i in range(3)]
        assert col[j] == tau * q * q
        assert all(not col[i] for i in range(3) if i != j)

    def test_n4_case_v(self):
        # sigma_2 x_{1,4} = x_{1,4} + tau q (q-1)^2 x_{2,3}
        q, tau = rat(1, 4), rat(8, 5)
        mats = build_sigma(4, q, tau, QQ)
        basis = pair_basis(4)
        j = basis.index((1, 4))
        col = {basis[i]: mats[1].rows[i][j] for i in range(6) if mats[1].rows[i][j]}
        assert col == {(1, 4): rat(1), (2, 3): tau * q * (q - 1) ** 2}

    def test_braid_relation_symbolic_n4(self):
        rep = symbolic_rep(4)
        g = rep.g
        for i in range(2):
            assert g[i] * g[i + 1] * g[i] == g[i + 1] * g[i] * g[i + 1]

    def test_parameter_zero(self):
        with pytest.raises(ParameterZero):
            build_sigma(3, rat(0), rat(1), QQ)


class TestBuildRep:
    def test_dimensions(self):
        assert rational_rep(3, rat(5), rat(2)).dim == 3
        assert rational_rep(4, rat(5), rat(2)).dim == 6
        assert rep_dim(7) == 21

    def test_cubic_annihilation_against_matrix_poly_oracle(self):
        # (X - r)(X + 1/r)(X - 1/l) annihilates g_k; n = 4, r = 2, l = 5
        rep = rational_rep(4, rat(5), rat(2))
        r, l = Fraction(2), Fraction(5)
        # expand the cubic independently
        c = [Fraction(1)]
        for root in (r, Fraction(-1) / r, 1 / l):
            c = [a - root * b for a, b in oracles.zip_pad([Fraction(0)] + c, list(c) + [Fraction(0)])]
            while c and c[-1] == 0:
                c.pop()
        for gk in rep.g:
            rows = oracles.to_fraction_rows(gk)
            val = oracles.matrix_poly_eval(c, rows)
            assert all(x == 0 for row in val for x in row)

    def test_e_rank_one_via_naive_oracle(self):
        rng = random.Random(4)
        l = rat(rng.randint(2, 30), rng.randint(1, 7))
        r = rat(rng.randint(2, 9), 1)
        rep = rational_rep(4, l, r)
        for ek in rep.e:
            assert oracles.naive_rank(oracles.to_fraction_rows(ek)) == 1

    def test_inverses(self):
        rep = rational_rep(4, rat(7, 3), rat(3, 2))
        eye = Matrix.identity(QQ, rep.dim)
        for gk, gki in zip(rep.g, rep.g_inv):
            assert gk * gki == eye

    def test_semisimplicity_violation(self):
        with pytest.raises(SemisimplicityViolation):
            rational_rep(3, rat(5), rat(1))
        field = NumberField((1, 0, 1))  # x^2 + 1: r^4 = 1
        with pytest.raises(SemisimplicityViolation):
            build_rep(LKParams(3, field.from_int(5), field.gen(), field))

    def test_parameter_zero(self):
        with pytest.raises(ParameterZero):
            rational_rep(4, rat(0), rat(2))


class TestRelations:
    def test_symbolic_n3_all_pass(self):
        report = verify_relations(symbolic_rep(3))
        assert report.all_passed, report.failures

    def test_far_e_product_n4(self):
        rep = rational_rep(4, rat(5), rat(2))
        assert (rep.e[0] * rep.e[2]).is_zero()

    def test_delta_zero_at_l_inverse_r(self):
        # l = 1/r makes delta vanish; e_i is then nilpotent of rank 1
        rep = rational_rep(4, rat(1, 2), rat(2))
        assert not rep.params.delta()
        for ek in rep.e:
            assert (ek * ek).is_zero()
            assert rank(ek) == 1

    def test_eigenvalue_dictionary(self):
        rep = rational_rep(4, rat(5), rat(2))
        eye = Matrix.identity(QQ, rep.dim)
        for gk in rep.g:
            prod = (det(gk - eye.scale(rat(2)))
                    * det(gk + eye.scale(rat(1, 2)))
                    * det(gk - eye.scale(rat(1, 5))))
            assert not prod

    def test_relations_at_random_points_n6(self):
        rng = random.Random(12)
        for _ in range(2):
            l = rat(rng.randint(2, 50), rng.randint(1, 9))
            r = rat(rng.randint(2, 9), rng.randint(1, 3))
            if abs(r) == 1:
                continue
            report = verify_relations(rational_rep(6, l, r))
            assert report.all_passed, report.failures


class TestParamMap:
    def test_locus_images(self):
        # the catalog loci land on the resume list {1/q, -1, 1/q^n, (1/sqrt q)^n, -(1/sqrt q)^n}
        from lkwb.scalars import QLR

        l, r = QLR.l(), QLR.r()
        n = 5
        q = r ** -2
        cases = [
            (r, q ** -1),
            (-(r ** 3), QLR.from_int(-1)),
            (r ** (3 - 2 * n), q ** -n),
            (r ** (3 - n), r ** n),
            (-(r ** (3 - n)), -(r ** n)),
        ]
        for l_val, t_expected in cases:
            out = param_map("lr_to_qt", l=l_val, r=r)
            assert out["t"] == t_expected
            assert out["q"] == q

    def test_round_trip(self):
        rng = random.Random(19)
        for _ in range(20):
            l = rat(rng.randint(1, 40), rng.randint(1, 9)) * (1 if rng.random() < 0.5 else -1)
            r = rat(rng.randint(2, 9), rng.randint(1, 5))
            fwd = param_map("lr_to_qt", l=l, r=r)
            back = param_map("qt_to_lr", q=fwd["q"], t=fwd["t"], r=r)
            assert back["choices"][0] == (l, r)
            assert back["choices"][1] == (-l, -r)

    def test_bad_square_root(self):
        with pytest.raises(ValueError):
            param_map("qt_to_lr", q=rat(1, 4), t=rat(1), r=rat(3))


class TestGuardsAndStructure:
    def test_guard_rational(self):
        assert semisimplicity_guard(rat(2), 8)
        assert not semisimplicity_guard(rat(1), 3)
        assert not semisimplicity_guard(rat(-1), 3)

    def test_guard_cyclotomic(self):
        f12 = cyclotomic_field("phi12")
        assert semisimplicity_guard(f12.gen(), 3)
        f4 = NumberField((1, 0, 1))
        assert not semisimplicity_guard(f4.gen(), 3)

    def test_lower_inclusion_entrywise(self):
        for n in range(3, 8):
            rep = substituted_rep(n, 1, 1) if n >= 4 else substituted_rep(3, -1, 3)
            assert coordinate_inclusion_preserved(rep, n - 1)

    def test_convention_report(self):
        rep = rational_rep(4, rat(5), rat(2))
        conv = convention_report(rep)
        assert conv["rescale_factor"] == "r"
        assert conv["q"] == "1/4"
        assert conv["tau"] == "8/5"
