"""Test element M(n), kernels at loci, invariant subspaces, certification."""

import json
import random

import pytest

from lkwb.errors import DepthTooLarge, InfeasibleMode, RelationGateNotPassed, ZeroSeed
from lkwb.linalg import Matrix, det, kernel
from lkwb.lkrep import LKRep, rational_rep, substituted_rep, symbolic_rep
from lkwb.reducibility import (
    GENERIC,
    _kernel_at,
    build_m_matrix,
    catalog,
    certify,
    det_on_locus,
    embed_subspace,
    expected_spectrum,
    indecomposability_probe,
    kernel_k,
    loci_distinct,
    lower_intersection,
    minimal_invariant,
    named_locus,
    one_dim_subspaces,
    persistent_vector_check,
    probe_operators,
    rep_at,
    scan,
    summand_count,
)
from lkwb.scalars import QQ, QR, cyclotomic_field, rat

import oracles


class TestMnMatrix:
    def test_m3_structure(self):
        rep = rational_rep(3, rat(5), rat(2))
        mn = build_m_matrix(rep)
        e1, e2 = rep.e
        conj = rep.g_inv[1] * e1 * rep.g[1]
        assert mn.matrix == e1 + e2 + conj

    def test_summand_counts(self):
        assert summand_count(5) == 10
        assert summand_count(3) == 3
        assert summand_count(7) == 21

    def test_gate_enforced(self):
        rep = rational_rep(3, rat(5), rat(2))
        broken = LKRep(rep.params, rep.g, rep.g_inv,
                       tuple(e.scale(rat(2)) for e in rep.e), rep.g_sq)
        with pytest.raises(RelationGateNotPassed):
            build_m_matrix(broken)

    def test_rank1_fast_path_equals_dense_chain(self):
        # same M(n) whether or not the rank-1 factorization is exploited
        rep = rational_rep(4, rat(7, 2), rat(3))
        mn = build_m_matrix(rep)
        total = Matrix.zeros(QQ, rep.dim, rep.dim)
        for e in rep.e:
            total = total + e
        for i in range(1, 3):
            t = rep.e[i - 1]
            for j in range(i + 2, 5):
                t = rep.g_inv[j - 2] * t * rep.g[j - 2]
                total = total + t
        assert mn.matrix == total


class TestKernelDims:
    def test_n4_catalog_r2(self):
        for locus, exp in zip(catalog(4), (2, 3, 1, 3, 3)):
            report = kernel_k(4, locus, rat(2))
            assert report.k == exp
            assert report.invariant
            assert report.minimal_dims == (exp,)
            assert report.unique_minimal

    def test_n3_catalog(self):
        for locus, exp in zip(catalog(3), (1, 1, 2, 2)):
            report = kernel_k(3, locus, rat(2))
            assert report.k == exp
            assert report.minimal_dims == (exp,)

    def test_generic_point_trivial_kernel(self):
        rep = rep_at(4, None, rat(2), l_val=rat(5))
        mn = build_m_matrix(rep)
        assert kernel(mn.matrix).dim == 0

    def test_oracle_agreement_n4(self):
        # naive dense elimination oracle (no Bareiss, no pivot heuristics)
        for locus in catalog(4):
            report, rep, mn, _ = _kernel_at(4, locus, rat(2), with_closures=False)
            oracle_dim = oracles.naive_kernel_dim(oracles.to_fraction_rows(mn.matrix))
            assert report.k == oracle_dim


class TestDetOnLocus:
    def test_substituted_n3_n4_all_zero(self):
        for n in (3, 4):
            for locus in catalog(n):
                verdict = det_on_locus(n, locus, "substituted")
                assert verdict.verdict == "identically_zero"
                assert not verdict.probabilistic
                assert verdict.proof["technique"] in ("evaluation", "zero-row")

    def test_symbolic_generic_nonzero(self):
        verdict = det_on_locus(3, GENERIC, "symbolic")
        assert verdict.verdict == "nonzero"
        assert verdict.witness

    def test_symbolic_locus_matches_substituted_build(self):
        # substituting the symbolic matrix equals building with l substituted
        rep_sym = symbolic_rep(3)
        mn_sym = build_m_matrix(rep_sym)
        locus = named_locus("l=-r3", 3)
        sub_rows = tuple(tuple(locus.substitute(x) for x in row) for row in mn_sym.matrix.rows)
        rep_sub = substituted_rep(3, -1, 3)
        mn_sub = build_m_matrix(rep_sub)
        assert Matrix(QR, sub_rows) == mn_sub.matrix
        verdict = det_on_locus(3, locus, "symbolic")
        assert verdict.verdict == "identically_zero"
        assert verdict.method == "symbolic"

    def test_sampled_modes(self):
        rng = random.Random(42)
        assert det_on_locus(4, GENERIC, "sampled", rng=rng).verdict == "nonzero"
        v = det_on_locus(4, named_locus("l=r", 4), "sampled", rng=rng)
        assert v.verdict == "identically_zero"
        assert v.probabilistic

    def test_mode_limits(self):
        with pytest.raises(InfeasibleMode):
            det_on_locus(6, GENERIC, "symbolic")
        with pytest.raises(InfeasibleMode):
            det_on_locus(8, named_locus("l=r", 8), "substituted")


class TestOneDim:
    def test_unique_line_at_one_dim_locus(self):
        rep = rep_at(4, named_locus("l=r3-2n", 4), rat(2))
        lines = one_dim_subspaces(rep)
        assert sum(e["space"].dim for e in lines) == 1
        assert lines[0]["lambda"] == "r"

    def test_n3_line_at_minus_r3(self):
        rep = rep_at(3, named_locus("l=-r3", 3), rat(2))
        lines = one_dim_subspaces(rep)
        assert sum(e["space"].dim for e in lines) == 1
        assert lines[0]["lambda"] == "-1/r"

    def test_exceptional_two_lines(self):
        field = cyclotomic_field("phi12")
        x = field.gen()
        rep = rep_at(3, named_locus("l=-r3", 3), x)
        lines = one_dim_subspaces(rep)
        assert sum(e["space"].dim for e in lines) == 2
        assert {e["lambda"] for e in lines} == {"r", "-1/r"}


class TestMinimalInvariant:
    def test_dims_at_loci(self):
        cases = [
            (4, "l=r", 2),
            (5, "l=+r3-n", 4),
            (4, "l=-r3", 3),
        ]
        for n, name, expected in cases:
            locus = named_locus(name, n)
            report, rep, mn, closures = _kernel_at(n, locus, rat(2))
            assert report.minimal_dims == (expected,)
            for cl in closures:
                assert report.basis.contains_space(cl)

    def test_zero_seed(self):
        rep = rational_rep(3, rat(5), rat(2))
        with pytest.raises(ZeroSeed):
            minimal_invariant(rep, (rat(0),) * 3)


class TestLowerIntersections:
    def test_nontrivial_at_l_equals_r(self):
        report = kernel_k(5, named_locus("l=r", 5), rat(2), with_closures=False)
        inter = lower_intersection(report, 1)
        assert inter.dim > 0

    def test_depth_two_nontrivial_when_dimension_forces_it(self):
        # dim K(7) + dim V^(5) = 14 + 10 > 21 = dim V^(7)
        report = kernel_k(7, named_locus("l=r", 7), rat(2), with_closures=False)
        inter2 = lower_intersection(report, 2)
        assert inter2.dim >= 14 + 10 - 21

    def test_depth_guard(self):
        report = kernel_k(4, named_locus("l=r", 4), rat(2), with_closures=False)
        with pytest.raises(DepthTooLarge):
            lower_intersection(report, 2)
        with pytest.raises(DepthTooLarge):
            lower_intersection(report, 3)

    def test_exceptional_identity_phi20(self):
        # at r^10 = -1, l = -r^3: K(5) ∩ V^(4) = K(4), and the sandwich holds
        field = cyclotomic_field("phi20")
        x = field.gen()
        locus5 = named_locus("l=-r3", 5)
        report5 = kernel_k(5, locus5, x, with_closures=False)
        assert report5.k == 7
        inter = lower_intersection(report5, 1)
        report4 = kernel_k(4, named_locus("l=-r3", 4), x, with_closures=False)
        assert report4.k == 3
        assert inter == embed_subspace(report4.basis, 4, 5)
        assert report4.k + 3 <= report5.k <= report4.k + 4


class TestPersistence:
    def test_minus_r3_to_n6(self):
        report = persistent_vector_check(named_locus("l=-r3", 5), 6, rat(2))
        assert report.verified
        assert report.checked == ((6, True),)

    def test_second_specialization(self):
        # locus-level property: also holds at r = 3
        report = persistent_vector_check(named_locus("l=r", 5), 6, rat(3))
        assert report.verified


class TestProbe:
    def test_generic_commutant_scalars(self):
        rep = rational_rep(4, rat(5), rat(2))
        probe = indecomposability_probe(rep, 5, random.Random(1))
        assert probe.verdict == "indecomposable_evidence"
        assert probe.commutant_dim == 1
        assert not probe.probabilistic

    def test_locus_evidence(self):
        rep = rep_at(4, named_locus("l=r", 4), rat(2))
        probe = indecomposability_probe(rep, 10, random.Random(2))
        assert probe.verdict == "indecomposable_evidence"

    def test_block_diagonal_control(self):
        ops = [
            Matrix(QQ, [[2, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 3, 0, 0],
                        [0, 0, 0, 3, 0], [0, 0, 0, 0, 3]]),
            Matrix(QQ, [[2, 1, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 3, 0, 0],
                        [0, 0, 1, 3, 1], [0, 0, 0, 0, 3]]),
        ]
        probe = probe_operators(ops, 5, random.Random(3))
        assert probe.verdict == "decomposable_witness"
        assert probe.witness["verified_invariant"]
        assert sum(probe.witness["split_dims"]) == 5


class TestLociDistinctness:
    def test_rational_r_no_collisions(self):
        for n in (4, 5, 6):
            assert loci_distinct(n, rat(2)) == []
            assert loci_distinct(n, rat(3, 2)) == []

    def test_cyclotomic_collision(self):
        # -r^3 = r^(3-2n) exactly when r^(2n) = -1
        field = cyclotomic_field("phi20")
        x = field.gen()
        collisions = loci_distinct(5, x)
        assert ("l=-r3", "l=r3-2n") in collisions
        assert -(x ** 3) == x ** (3 - 2 * 5)


class TestCertifyAndScan:
    def test_certify_n3(self):
        report = certify(3, rat(2), seed=7)
        assert report.all_match
        by_name = {rec.locus: rec for rec in report.records}
        assert by_name["l=-r3"].k == 1
        assert by_name["l=r3-2n"].k == 1
        assert by_name["l=+r3-n"].k == 2
        assert by_name["l=-r3-n"].k == 2

    def test_certify_n4_example(self):
        report = certify(4, rat(2), seed=7)
        assert report.all_match
        dims = {rec.locus: rec.minimal_dims for rec in report.records}
        assert dims == {
            "l=r": (2,), "l=-r3": (3,), "l=r3-2n": (1,),
            "l=+r3-n": (3,), "l=-r3-n": (3,),
        }

    def test_certify_deterministic_json(self):
        a = json.dumps(certify(3, rat(2), seed=3).to_json_obj())
        b = json.dumps(certify(3, rat(2), seed=3).to_json_obj())
        assert a == b

    def test_certify_exceptional_point(self):
        field = cyclotomic_field("phi12")
        report = certify(3, field.gen(), seed=1, probe_trials=0)
        by_name = {rec.locus: rec for rec in report.records}
        # -r^3 = 1/r^3 at this point; both records expect two lines
        assert by_name["l=-r3"].one_dim_count == 2
        assert by_name["l=r3-2n"].one_dim_count == 2
        assert report.all_match

    def test_scan(self):
        report = scan(4, rat(3, 2), random.Random(42), seed=42)
        assert report.all_match
        kinds = [row["locus"] for row in report.rows]
        assert kinds.count("random") == 5

    def test_expected_spectrum_table(self):
        assert expected_spectrum(6, named_locus("l=r", 6))["k"] == 9
        assert expected_spectrum(6, named_locus("l=-r3", 6))["k"] == 10
        assert expected_spectrum(7, named_locus("l=-r3", 7))["min_dim"] == 15
        assert expected_spectrum(4, GENERIC) is None
