import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from ndqc.boolfn import make_named
from ndqc.polys import MultilinearPoly, MONOMIAL, weight_offset_poly
from ndqc.commsim import (HypothesisViolated, NondetMatrix, PairTable,
                          PatternMismatch, ProtocolSpec, Rectangle, Round,
                          ZeroRow, closed_one_rectangles, cover_number,
                          exact_matrix, fooling_set_check, full_rank_check,
                          intersect_complement_fooling_set, final_state_families,
                          make_pair_function, matrix_from_csv_lines,
                          matrix_from_poly, matrix_from_vector_families,
                          matrix_to_csv_lines, ncc_from_cover, ne_matrix,
                          ne_protocol, ne_protocol_spec, nrank_lower_bound,
                          protocol_summary_from_lines, protocol_to_lines,
                          run_protocol, svd_acceptance_sweep, svd_protocol,
                          svd_protocol_cost)

F = Fraction


def identity_matrix(n):
    f = make_pair_function("EQ", n)
    size = 1 << n
    return exact_matrix(n, [[1 if x == y else 0 for y in range(size)]
                            for x in range(size)], f)


class TestPairFunctions:
    def test_eq1_identity(self):
        f = make_pair_function("EQ", 1)
        assert [[f.value(x, y) for y in range(2)] for x in range(2)] == \
            [[1, 0], [0, 1]]

    def test_disj1(self):
        f = make_pair_function("DISJ", 1)
        assert f.value(0, 0) and f.value(0, 1) and f.value(1, 0)
        assert not f.value(1, 1)

    def test_intersect_not_one(self):
        f = make_pair_function("INTERSECT_NOT_ONE", 2)
        for x in range(4):
            for y in range(4):
                assert f.value(x, y) == int((x & y).bit_count() != 1)

    def test_ne_is_eq_complement(self):
        assert make_pair_function("NE", 2) == \
            make_pair_function("EQ", 2).complement()


class TestNondetMatrix:
    def test_pattern_enforced(self):
        f = make_pair_function("EQ", 1)
        with pytest.raises(PatternMismatch):
            exact_matrix(1, [[1, 1], [0, 1]], f)

    def test_eq1_matrix_rank(self):
        m = identity_matrix(1)
        assert m.rank() == 2

    def test_from_poly_intersect(self):
        for n in (2, 3, 4):
            f = make_pair_function("INTERSECT_NOT_ONE", n)
            m = matrix_from_poly(weight_offset_poly(n, 1), f)
            assert m.rank() <= n + 1

    def test_from_poly_sum_rank_le_n(self):
        n = 3
        rows = tuple(sum(1 << y for y in range(8) if x & y)
                     for x in range(8))
        f = PairTable(n, rows)
        m = matrix_from_poly(weight_offset_poly(n), f)
        assert m.rank() <= n

    def test_all_ones_rank1(self):
        f = PairTable(2, (15, 15, 15, 15))
        m = matrix_from_poly(MultilinearPoly.constant(2, 1), f)
        assert m.rank() == 1

    def test_from_poly_pattern_mismatch(self):
        with pytest.raises(PatternMismatch):
            matrix_from_poly(weight_offset_poly(2),
                             make_pair_function("EQ", 2))

    def test_from_poly_rank_le_monomial_count(self):
        # M(x,y) = p(x & y) = sum_S a_S X_S(x) X_S(y): one rank-1 term per
        # monomial
        import random as _random
        from ndqc.polys import exact_poly
        from ndqc.boolfn import random_table
        rng = _random.Random(33)
        for n in (2, 3):
            for _ in range(6):
                g = random_table(n, rng)
                p = exact_poly(g)
                if p.is_zero():
                    continue
                size = 1 << n
                rows = tuple(
                    sum((1 << y) for y in range(size) if g.value(x & y))
                    for x in range(size))
                m = matrix_from_poly(p, PairTable(n, rows))
                assert m.rank() <= len(p.coeffs)


def brute_force_triangularizable(f):
    size = 1 << f.n
    for rows in itertools.permutations(range(size)):
        for cols in itertools.permutations(range(size)):
            ok = True
            for i in range(size):
                if not f.value(rows[i], cols[i]):
                    ok = False
                    break
                for j in range(i):
                    if f.value(rows[i], cols[j]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
    return False


class TestFullRank:
    @pytest.mark.parametrize("n", [1, 2, 3, 8])
    def test_eq_diagonal(self, n):
        ev = full_rank_check(make_pair_function("EQ", n))
        assert ev.kind == "DIAGONAL" and ev.nrank == 1 << n

    @pytest.mark.parametrize("n", [1, 2, 3, 8])
    def test_disj_triangular(self, n):
        ev = full_rank_check(make_pair_function("DISJ", n))
        assert ev.kind == "TRIANGULAR" and ev.nrank == 1 << n

    def test_disj2_column_reversal(self):
        ev = full_rank_check(make_pair_function("DISJ", 2))
        assert ev.col_order == (3, 2, 1, 0)

    def test_all_ones_none(self):
        ev = full_rank_check(PairTable(1, (3, 3)))
        assert ev.kind == "NONE" and ev.nrank is None

    def test_greedy_matches_brute_force_n1(self):
        for rows in itertools.product(range(4), repeat=2):
            f = PairTable(1, rows)
            ev = full_rank_check(f)
            assert (ev.kind in ("DIAGONAL", "TRIANGULAR")) == \
                brute_force_triangularizable(f), rows

    def test_greedy_matches_brute_force_n2_sampled(self):
        rng = random.Random(17)
        for _ in range(40):
            f = PairTable(2, tuple(rng.randrange(16) for _ in range(4)))
            ev = full_rank_check(f)
            assert (ev.kind in ("DIAGONAL", "TRIANGULAR")) == \
                brute_force_triangularizable(f)

    def test_certificate_is_sound(self):
        # a certified pattern forces full rank on the 0/1 matrix itself
        rng = random.Random(18)
        for _ in range(30):
            f = PairTable(2, tuple(rng.randrange(16) for _ in range(4)))
            ev = full_rank_check(f)
            if ev.kind != "NONE":
                m = exact_matrix(2, [[f.value(x, y) for y in range(4)]
                                     for x in range(4)], f)
                assert m.rank() == 4


class TestSvdProtocol:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_identity_exact(self, n):
        m = identity_matrix(n)
        spec = svd_protocol(m)
        assert spec.cost == n + 1
        for x in range(1 << n):
            for y in range(1 << n):
                acc, tr = run_protocol(spec, x, y)
                assert acc == (F(1) if x == y else F(0))
                assert tr.cost == n + 1
                assert tr.rounds == (("A", n), ("B", 1))

    def test_identity_sweep_exact(self):
        m = identity_matrix(3)
        sweep = svd_acceptance_sweep(m)
        for x in range(8):
            for y in range(8):
                assert sweep[x][y] == (1 if x == y else 0)

    def test_zero_row(self):
        f = PairTable(1, (0, 3))
        m = NondetMatrix(1, ((F(0), F(0)), (F(1), F(1))), f)
        with pytest.raises(ZeroRow):
            svd_protocol(m)

    def test_cost_formula(self):
        assert svd_protocol_cost(1) == 1
        assert svd_protocol_cost(2) == 2
        assert svd_protocol_cost(5) == 4  # ceil(log2 5) + 1

    @pytest.mark.parametrize("n", [2, 3])
    def test_intersect_float_protocol(self, n):
        f = make_pair_function("INTERSECT_NOT_ONE", n)
        m = matrix_from_poly(weight_offset_poly(n, 1), f)
        r = m.rank()
        spec = svd_protocol(m)
        assert spec.cost == svd_protocol_cost(r)
        for x in range(1 << n):
            norm2 = sum(float(v) ** 2 for v in m.entries[x])
            for y in range(1 << n):
                acc, _ = run_protocol(spec, x, y, mode="float")
                expect = float(m.entries[x][y]) ** 2 / norm2
                assert abs(acc - expect) < 1e-9
                assert (acc > 1e-12) == (f.value(x, y) == 1)

    def test_sweep_matches_protocol_runs(self):
        n = 2
        f = make_pair_function("INTERSECT_NOT_ONE", n)
        m = matrix_from_poly(weight_offset_poly(n, 1), f)
        spec = svd_protocol(m)
        sweep = svd_acceptance_sweep(m)
        for x in range(4):
            for y in range(4):
                acc, _ = run_protocol(spec, x, y, mode="float")
                assert abs(acc - sweep[x][y]) < 1e-9

    def test_random_matrices_protocol_correctness(self):
        # upper-side characterization on arbitrary nondeterministic matrices
        rng = random.Random(29)
        for n in (2, 3):
            size = 1 << n
            for _ in range(5):
                rows = tuple(rng.randrange(1, 1 << size)
                             for _ in range(size))  # no zero rows
                f = PairTable(n, rows)
                entries = [[F(rng.choice([-3, -2, -1, 1, 2, 3]))
                            if f.value(x, y) else F(0)
                            for y in range(size)] for x in range(size)]
                m = NondetMatrix(n, tuple(tuple(r) for r in entries), f)
                spec = svd_protocol(m)
                assert spec.cost == svd_protocol_cost(m.rank())
                sweep = svd_acceptance_sweep(m)
                for x in range(size):
                    norm2 = sum(float(v) ** 2 for v in m.entries[x])
                    for y in range(size):
                        expect = float(m.entries[x][y]) ** 2 / norm2
                        assert abs(sweep[x][y] - expect) < 1e-9
                        assert (sweep[x][y] > 1e-9) == bool(f.value(x, y))

    def test_all_ones_cost_1(self):
        f = PairTable(1, (3, 3))
        m = exact_matrix(1, [[1, 1], [1, 1]], f)
        spec = svd_protocol(m)
        assert spec.cost == 1
        for x in range(2):
            for y in range(2):
                acc, _ = run_protocol(spec, x, y, mode="float")
                assert acc > 0.4


class TestProtocolModel:
    def test_alternation_enforced(self):
        with pytest.raises(ValueError, match="alternate"):
            ProtocolSpec(alice_qubits=0, channel_qubits=1, bob_qubits=0,
                         rounds=(Round("B", 1, lambda v: ()),), cost=1)

    def test_cost_must_match(self):
        with pytest.raises(ValueError, match="cost"):
            ProtocolSpec(alice_qubits=0, channel_qubits=1, bob_qubits=0,
                         rounds=(Round("A", 1, lambda v: ()),), cost=2)

    def test_party_qubit_restriction(self):
        # Bob touching Alice's private qubit must be rejected
        spec = ProtocolSpec(
            alice_qubits=1, channel_qubits=1, bob_qubits=0,
            rounds=(Round("A", 1, lambda v: ()),
                    Round("B", 1, lambda v: (("swap", 0, 1),))),
            cost=2)
        with pytest.raises(ValueError, match="foreign"):
            run_protocol(spec, 0, 0)

    def test_float_spec_rejects_exact_mode(self):
        spec = ne_protocol_spec(2)
        with pytest.raises(ValueError, match="float"):
            run_protocol(spec, 0, 1, mode="exact")

    def test_non_unitary_float_round_rejected(self):
        import numpy as np
        spec = ProtocolSpec(
            alice_qubits=0, channel_qubits=1, bob_qubits=0,
            rounds=(Round("A", 1,
                          lambda v: (("matrix", (0,),
                                      np.array([[1.0, 1.0], [0.0, 1.0]])),)),),
            cost=1, exact=False)
        with pytest.raises(ValueError, match="non-unitary"):
            run_protocol(spec, 0, 0)


class TestNeProtocol:
    def test_zero_iff_equal(self):
        for n in (1, 3, 6, 10):
            for x in (0, 1, (1 << n) - 1):
                assert ne_protocol(n, x, x) == 0.0
        assert ne_protocol(3, 1, 2) > 0

    def test_n1_opposite(self):
        assert abs(ne_protocol(1, 1, 0) - 1.0) < 1e-12

    def test_half_range_angle(self):
        for n in (2, 4, 8):
            assert abs(ne_protocol(n, 1 << (n - 1), 0) - 1.0) < 1e-12

    def test_matches_formula(self):
        for n in (3, 5):
            for x in range(0, 1 << n, 3):
                for y in range(0, 1 << n, 5):
                    expect = math.sin((x - y) * math.pi / (1 << n)) ** 2
                    assert abs(ne_protocol(n, x, y) - expect) < 1e-12

    def test_range_errors(self):
        with pytest.raises(ValueError):
            ne_protocol(2, 4, 0)

    def test_spec_embedding_cost_2(self):
        spec = ne_protocol_spec(4)
        assert spec.cost == 2
        for x in (0, 3, 9):
            for y in (0, 5, 15):
                acc, tr = run_protocol(spec, x, y, mode="float")
                assert abs(acc - ne_protocol(4, x, y)) < 1e-12
                assert tr.cost == 2

    def test_ne_matrix_rank_2_and_pattern(self):
        for n in (2, 3, 4):
            m = ne_matrix(n)
            assert m.is_float
            assert m.rank() <= 2
            for x in range(1 << n):
                assert m.entries[x][x] == 0.0


class TestRectangles:
    def test_closed_rectangles_are_one_rectangles(self):
        for fam in ("EQ", "DISJ", "INTERSECT_NOT_ONE"):
            f = make_pair_function(fam, 2)
            rects = closed_one_rectangles(f)
            assert rects
            assert all(r.is_b_rectangle(f, 1) for r in rects)

    def test_closed_rectangles_cover_all_ones(self):
        f = make_pair_function("DISJ", 2)
        covered = set()
        for r in closed_one_rectangles(f):
            covered.update((x, y) for x in r.rows() for y in r.cols())
        assert covered == set(f.ones())

    def test_rectangle_accessors(self):
        r = Rectangle(0b011, 0b101)
        assert r.rows() == [0, 1] and r.cols() == [0, 2]
        assert r.cell_mask(4) == (0b101) | (0b101 << 4)


def brute_force_cover(f, b):
    """Oracle: minimum over all subsets of all b-rectangles (tiny n only)."""
    g = f if b == 1 else f.complement()
    size = 1 << g.n
    cells = {(x, y) for x in range(size) for y in range(size)
             if g.value(x, y)}
    if not cells:
        return 0
    rects = []
    for smask in range(1, 1 << size):
        srows = [x for x in range(size) if (smask >> x) & 1]
        for tmask in range(1, 1 << size):
            tcols = [y for y in range(size) if (tmask >> y) & 1]
            if all(g.value(x, y) for x in srows for y in tcols):
                rects.append({(x, y) for x in srows for y in tcols})
    for k in range(1, len(cells) + 1):
        for combo in itertools.combinations(rects, k):
            if set().union(*combo) >= cells:
                return k
    raise AssertionError


class TestCovers:
    def test_constant_one(self):
        for n in (1, 2, 3):
            f = PairTable(n, tuple((1 << (1 << n)) - 1
                                   for _ in range(1 << n)))
            assert cover_number(f, 1) == 1

    def test_eq1(self):
        assert cover_number(make_pair_function("EQ", 1), 1) == 2

    def test_constant_zero(self):
        f = PairTable(2, (0, 0, 0, 0))
        assert cover_number(f, 1) == 0

    def test_eq_needs_2n_rectangles(self):
        for n in (1, 2):
            assert cover_number(make_pair_function("EQ", n), 1) == 1 << n

    def test_zero_cover_via_complement(self):
        assert cover_number(make_pair_function("EQ", 1), 0) == 2

    def test_brute_force_agreement_n1(self):
        for rows in itertools.product(range(4), repeat=2):
            f = PairTable(1, rows)
            assert cover_number(f, 1) == brute_force_cover(f, 1), rows

    def test_ncc_formula(self):
        assert ncc_from_cover(1) == 1
        assert ncc_from_cover(2) == 2
        assert ncc_from_cover(5) == 4


class TestFoolingSets:
    def test_eq_diagonal(self):
        f = make_pair_function("EQ", 3)
        ok, bound = fooling_set_check(f, [(x, x) for x in range(8)])
        assert ok and bound == 8

    def test_intersect_complement(self):
        for n in (2, 3, 5):
            fbar = make_pair_function("INTERSECT_NOT_ONE", n).complement()
            s = intersect_complement_fooling_set(n)
            assert len(s) == 1 << (n - 1)
            ok, bound = fooling_set_check(fbar, s)
            assert ok and bound == 1 << (n - 1)

    def test_singleton(self):
        f = make_pair_function("DISJ", 2)
        ok, bound = fooling_set_check(f, [(0, 0)])
        assert ok and bound == 1

    def test_not_fooling(self):
        f = PairTable(1, (3, 3))
        ok, bound = fooling_set_check(f, [(0, 0), (1, 1)])
        assert not ok and bound == 0

    def test_rejects_non_one_inputs(self):
        with pytest.raises(ValueError):
            fooling_set_check(make_pair_function("EQ", 2), [(0, 1)])

    def test_fooling_bound_le_cover_exhaustive_n1(self):
        for rows in itertools.product(range(4), repeat=2):
            f = PairTable(1, rows)
            ones = f.ones()
            cov = cover_number(f, 1)
            # every maximal-by-greedy fooling set bound must be <= Cov^1
            for start in range(len(ones)):
                s = []
                for cand in ones[start:] + ones[:start]:
                    trial = s + [cand]
                    if fooling_set_check(f, trial)[0]:
                        s = trial
                if s:
                    assert len(s) <= cov


class TestVectorFamilies:
    def test_rank1_all_ones(self):
        f = PairTable(1, (3, 3))
        a = [{0: (F(1),), 1: (F(1),)}]
        b = [{0: (F(2),), 1: (F(3),)}]
        m = matrix_from_vector_families(a, b, f, seed=5)
        assert m.rank() == 1

    def test_hypothesis_violated(self):
        f = PairTable(1, (3, 3))
        a = [{0: (F(1),), 1: (F(1),)}]
        b = [{0: (F(0),), 1: (F(3),)}]
        with pytest.raises(HypothesisViolated):
            matrix_from_vector_families(a, b, f, seed=5)

    @pytest.mark.parametrize("n", [2, 3])
    def test_svd_eq_families(self, n):
        f = make_pair_function("EQ", n)
        spec = svd_protocol(identity_matrix(n))
        a_f, b_f = final_state_families(spec, n)
        assert len(a_f) == 1 << (spec.cost - 1)
        m = matrix_from_vector_families(a_f, b_f, f, seed=9)
        assert m.rank() <= len(a_f)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_ne_protocol_families_rank_2(self, n):
        # the 2-qubit rotation protocol collapses to a rank <= 2^(l-1) = 2
        # nondeterministic matrix for NE
        f = make_pair_function("NE", n)
        spec = ne_protocol_spec(n)
        a_f, b_f = final_state_families(spec, n)
        assert len(a_f) == 2
        m = matrix_from_vector_families(a_f, b_f, f, seed=23)
        assert m.rank() <= 2

    def test_families_reproduce_final_state(self):
        # sum_i A_i(x) (x) B_i(y) must be zero exactly on 0-inputs
        n = 2
        spec = svd_protocol(identity_matrix(n))
        a_f, b_f = final_state_families(spec, n)
        f = make_pair_function("EQ", n)
        for x in range(4):
            for y in range(4):
                total = [F(0)] * (1 << spec.bob_qubits)
                for i in range(len(a_f)):
                    coef = a_f[i][x][0]
                    for k, v in enumerate(b_f[i][y]):
                        total[k] += coef * v
                assert (all(v == 0 for v in total)) == (f.value(x, y) == 0)


class TestMatrixFiles:
    def test_exact_round_trip(self):
        m = identity_matrix(2)
        m2 = matrix_from_csv_lines(matrix_to_csv_lines(m))
        assert m2.entries == m.entries and not m2.is_float

    def test_float_round_trip(self):
        m = ne_matrix(2)
        m2 = matrix_from_csv_lines(matrix_to_csv_lines(m))
        assert m2.is_float
        assert all(m2.entries[x][y] == m.entries[x][y]
                   for x in range(4) for y in range(4))

    def test_rational_entries_preserved(self):
        f = PairTable(1, (3, 3))
        m = exact_matrix(1, [[F(1, 3), F(-2, 7)], [F(5), F(1)]], f)
        m2 = matrix_from_csv_lines(matrix_to_csv_lines(m))
        assert m2.entries == m.entries


class TestProtocolFiles:
    def test_summary_round_trip(self):
        spec = svd_protocol(identity_matrix(2))
        summary = protocol_summary_from_lines(protocol_to_lines(spec))
        assert summary["cost"] == 3
        assert summary["rounds"] == [
            {"party": "A", "message_qubits": 2},
            {"party": "B", "message_qubits": 1}]

    def test_cost_mismatch_rejected(self):
        lines = ['{"alice_qubits":0,"channel_qubits":1,"bob_qubits":0,'
                 '"cost":5,"exact":true}',
                 '{"party":"A","message_qubits":1}']
        with pytest.raises(ValueError):
            protocol_summary_from_lines(lines)


def test_nrank_lower_bound_eq_full():
    assert nrank_lower_bound(make_pair_function("EQ", 3)) == 8


def test_nrank_lower_bound_valid():
    # the subpattern bound holds for every matrix with the pattern, so in
    # particular for the 0/1 matrix itself
    rng = random.Random(19)
    for _ in range(20):
        f = PairTable(2, tuple(rng.randrange(16) for _ in range(4)))
        if not any(f.rows):
            continue
        lb = nrank_lower_bound(f)
        m = exact_matrix(2, [[f.value(x, y) for y in range(4)]
                             for x in range(4)], f)
        assert lb <= m.rank()
