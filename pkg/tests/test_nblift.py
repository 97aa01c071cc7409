"""Non-binary lift tests.

Oracles: brute-force enumeration of the restricted support positions,
dense matrix products over GF(2^p), and direct evaluation of the cycle
determinant products.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbqc.gf2p import make_field
from nbqc.nblift import (ClosureViolation, CycleStructure, NBMatrix, NotACycle,
                         assemble_constraints, closed_form_cycle,
                         cycle_structure, lift_gamma, solve_delta,
                         verify_orthogonal)
from nbqc.qcpair import QCParams, SparseBinaryMatrix, build_pair, find_params

EX1 = QCParams(P=7, J=2, L=6, sigma=2, tau=3)


@pytest.fixture(scope="module")
def pair():
    return build_pair(EX1)


@pytest.fixture(scope="module")
def gf16():
    return make_field(4)


def brute_force_positions(hc, hd, m_prime):
    """All first-matrix nonzeros in the support columns of row m_prime."""
    support = set(hd.rows[m_prime])
    return {(m, n) for m, row in enumerate(hc.rows) for n in row if n in support}


class TestCycleStructure:
    def test_reference_row5_orders(self, pair):
        cyc = cycle_structure(pair.expand_c(), pair.expand_d(), 5)
        assert cyc.n_seq == [2, 25, 7, 38, 20, 29]
        assert cyc.m_seq == [1, 13, 5, 11, 2, 12]

    def test_reference_row5_position_set(self, pair):
        cyc = cycle_structure(pair.expand_c(), pair.expand_d(), 5)
        expected = {(1, 2), (5, 7), (2, 20), (1, 25), (2, 29), (5, 38),
                    (12, 2), (13, 7), (11, 20), (13, 25), (12, 29), (11, 38)}
        assert set(cyc.e1()) | set(cyc.e2()) == expected
        assert set(cyc.e1()) & set(cyc.e2()) == set()
        assert len(cyc.e1()) == len(cyc.e2()) == 6

    def test_all_rows_match_brute_force(self, pair):
        hc, hd = pair.expand_c(), pair.expand_d()
        for m_prime in range(hd.m):
            cyc = cycle_structure(hc, hd, m_prime)
            assert set(cyc.e1()) | set(cyc.e2()) == brute_force_positions(hc, hd, m_prime)
            assert len(set(cyc.n_seq)) == len(cyc.n_seq) == EX1.L
            assert len(set(cyc.m_seq)) == len(cyc.m_seq) == EX1.L

    def test_back_and_forth_structure(self, pair):
        hc, hd = pair.expand_c(), pair.expand_d()
        P, half_n = EX1.P, EX1.L * EX1.P // 2
        for m_prime in range(hd.m):
            cyc = cycle_structure(hc, hd, m_prime)
            for i in range(EX1.L):
                if i % 2 == 0:
                    assert cyc.m_seq[i] < P and cyc.n_seq[i] < half_n
                else:
                    assert cyc.m_seq[i] >= P and cyc.n_seq[i] >= half_n

    def test_even_odd_distinctness(self, pair):
        hc, hd = pair.expand_c(), pair.expand_d()
        for m_prime in range(hd.m):
            cyc = cycle_structure(hc, hd, m_prime)
            evens = cyc.m_seq[0::2]
            odds = cyc.m_seq[1::2]
            assert len(set(evens)) == len(evens)
            assert len(set(odds)) == len(odds)

    def test_closed_forms_match_walk_upper_half(self, pair):
        hc, hd = pair.expand_c(), pair.expand_d()
        for m_prime in range(EX1.P):
            walk = cycle_structure(hc, hd, m_prime)
            closed = closed_form_cycle(EX1, m_prime)
            assert walk.n_seq == closed.n_seq, m_prime
            assert walk.m_seq == closed.m_seq, m_prime

    def test_closed_forms_other_instances(self):
        for params in find_params(8, [13])[:4] + find_params(6, [13])[:4]:
            inst = build_pair(params)
            hc, hd = inst.expand_c(), inst.expand_d()
            for m_prime in range(params.P):
                walk = cycle_structure(hc, hd, m_prime)
                closed = closed_form_cycle(params, m_prime)
                assert walk.n_seq == closed.n_seq
                assert walk.m_seq == closed.m_seq

    def test_not_a_cycle_on_broken_input(self, pair):
        hc = pair.expand_c()
        hd = pair.expand_d()
        broken = SparseBinaryMatrix(m=hc.m, n=hc.n,
                                    rows=[list(r) for r in hc.rows])
        broken.rows[1] = [c for c in broken.rows[1] if c != 25]
        with pytest.raises(NotACycle):
            cycle_structure(broken, hd, 5)

    def test_bad_row_index(self, pair):
        with pytest.raises(IndexError):
            cycle_structure(pair.expand_c(), pair.expand_d(), 99)


class TestConstraints:
    def test_counts(self, pair):
        system, var_index = assemble_constraints(pair, 15)
        assert len(system.equations) == 14
        assert system.n_vars == 84
        assert len(var_index) == 84

    def test_row5_equation_content(self, pair):
        system, var_index = assemble_constraints(pair, 15)
        plus = {(1, 2), (13, 25), (5, 7), (11, 38), (2, 20), (12, 29)}
        minus = {(1, 25), (13, 7), (5, 38), (11, 20), (2, 29), (12, 2)}
        terms = system.equations[5]
        got_plus = {pos for pos, idx in var_index.items()
                    if (idx, 1) in terms}
        got_minus = {pos for pos, idx in var_index.items()
                     if (idx, -1) in terms}
        assert got_plus == plus
        assert got_minus == minus

    def test_all_zero_satisfies(self, pair):
        system, _ = assemble_constraints(pair, 15)
        assert system.check(np.zeros(84, dtype=np.int64))

    def test_constant_assignment_satisfies(self, pair):
        system, _ = assemble_constraints(pair, 15)
        assert system.check(np.full(84, 11, dtype=np.int64))


def dense_nb_product(gamma: NBMatrix, delta: NBMatrix) -> np.ndarray:
    """Dense orthogonality oracle over GF(2^p)."""
    field = gamma.field
    g = gamma.to_dense()
    d = delta.to_dense()
    out = np.zeros((gamma.m, delta.m), dtype=np.int64)
    for i in range(gamma.m):
        for j in range(delta.m):
            acc = 0
            for k in range(gamma.n):
                acc ^= field.mul(int(g[i, k]), int(d[j, k]))
            out[i, j] = acc
    return out


def all_ones_lift(pair, field) -> NBMatrix:
    hc = pair.expand_c()
    rows = [[(c, 1) for c in row] for row in hc.rows]
    return NBMatrix(m=hc.m, n=hc.n, role="GAMMA", field=field,
                    params=pair.params, rows=rows)


class TestLift:
    def test_all_ones_gamma_gives_all_ones_delta(self, pair, gf16):
        gamma = all_ones_lift(pair, gf16)
        delta = solve_delta(gamma, pair)
        assert all(v == 1 for row in delta.rows for _, v in row)
        assert verify_orthogonal(gamma, delta)

    def test_lift_satisfies_determinant_condition(self, pair, gf16):
        rng = np.random.default_rng(12)
        gamma = lift_gamma(pair, gf16, rng)
        hc, hd = pair.expand_c(), pair.expand_d()
        for m_prime in range(hd.m):
            cyc = cycle_structure(hc, hd, m_prime)
            p1 = p2 = 1
            for m, n in cyc.e1():
                p1 = gf16.mul(p1, gamma.entry(m, n))
            for m, n in cyc.e2():
                p2 = gf16.mul(p2, gamma.entry(m, n))
            assert p1 == p2

    def test_lift_support_and_weights(self, pair, gf16):
        gamma = lift_gamma(pair, gf16, np.random.default_rng(5))
        assert gamma.support().rows == pair.expand_c().rows
        assert all(v != 0 for row in gamma.rows for _, v in row)

    def test_lift_deterministic(self, pair, gf16):
        a = lift_gamma(pair, gf16, np.random.default_rng(77))
        b = lift_gamma(pair, gf16, np.random.default_rng(77))
        assert a.rows == b.rows

    def test_reject_trivial(self, pair, gf16):
        rng = np.random.default_rng(8)
        gamma = lift_gamma(pair, gf16, rng, reject_trivial=True)
        logs = [gf16.log(v) for row in gamma.rows for _, v in row]
        assert any(lg != 0 for lg in logs)

    def test_pair_orthogonal_dense_oracle(self, pair, gf16):
        rng = np.random.default_rng(21)
        gamma = lift_gamma(pair, gf16, rng)
        delta = solve_delta(gamma, pair)
        assert not dense_nb_product(gamma, delta).any()
        assert verify_orthogonal(gamma, delta)

    def test_delta_row_scaling_preserves_orthogonality(self, pair, gf16):
        rng = np.random.default_rng(31)
        gamma = lift_gamma(pair, gf16, rng)
        delta = solve_delta(gamma, pair)
        delta.rows[3] = [(c, gf16.mul(v, 7)) for c, v in delta.rows[3]]
        assert verify_orthogonal(gamma, delta)

    def test_perturbed_delta_breaks_orthogonality(self, pair, gf16):
        rng = np.random.default_rng(41)
        gamma = lift_gamma(pair, gf16, rng)
        delta = solve_delta(gamma, pair)
        c0, v0 = delta.rows[2][3]
        delta.rows[2][3] = (c0, v0 ^ 1 if v0 ^ 1 else 3)
        assert not verify_orthogonal(gamma, delta)

    def test_closure_violation_detected(self, pair, gf16):
        gamma = all_ones_lift(pair, gf16)
        # corrupt one entry of a cycle so the wrap-around product is off
        gamma.rows[0][0] = (gamma.rows[0][0][0], 5)
        with pytest.raises(ClosureViolation):
            solve_delta(gamma, pair)

    def test_zero_dim_orthogonal(self, gf16):
        empty = NBMatrix(m=0, n=0, role="GAMMA", field=gf16, params=EX1, rows=[])
        assert verify_orthogonal(empty, empty)

    @given(seed=st.integers(0, 2 ** 31), p=st.sampled_from([2, 4, 6, 8]))
    @settings(max_examples=25, deadline=None)
    def test_random_lifts_orthogonal(self, seed, p):
        params = QCParams(P=7, J=2, L=6, sigma=2, tau=3)
        pair = build_pair(params)
        field = make_field(p)
        rng = np.random.default_rng(seed)
        gamma = lift_gamma(pair, field, rng)
        delta = solve_delta(gamma, pair)
        assert verify_orthogonal(gamma, delta)
        assert gamma.support().rows == pair.expand_c().rows
        assert delta.support().rows == pair.expand_d().rows
