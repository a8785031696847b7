import json

import numpy as np
import pytest

from fdpc.code import (
    FdpcParams,
    build_base_t1,
    build_base_t2,
    build_full_H,
    code_from_descriptor,
    code_to_descriptor,
    encode,
    solve_params,
)
from fdpc.gf2 import mat_vec_mod2, min_distance_bruteforce, nullspace_mod2, rank_mod2


def column_pairs(H):
    """Row-index pairs of each weight-2 column, as plain tuples."""
    out = []
    for c in range(H.cols):
        sup = list(H.col_support[c])
        assert len(sup) == 2
        out.append((sup[0], sup[1]))
    return out


def gauss_solve_mod2(A, rhs):
    """Independent oracle: generic GF(2) Gauss-Jordan on the augmented system."""
    n = A.shape[0]
    aug = np.concatenate([A.astype(np.uint8), rhs.reshape(-1, 1).astype(np.uint8)], axis=1)
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r, col])
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] ^= aug[col]
    return aug[:, -1].copy()


class TestBaseT1:
    def test_t2_column_pairs(self):
        H = build_base_t1(2)
        assert (H.rows, H.cols) == (4, 4)
        assert column_pairs(H) == [(0, 1), (1, 2), (2, 3), (0, 3)]

    def test_t4_shape_and_weights(self):
        H = build_base_t1(4)
        assert (H.rows, H.cols) == (8, 16)
        assert (H.col_weights() == 2).all()
        assert (H.row_weights() == 4).all()

    def test_t4_group_layout(self):
        pairs = column_pairs(build_base_t1(4))
        expected = []
        for d in (1, 3, 5, 7):
            expected += [(r, r + d) for r in range(8 - d)]
        assert pairs == expected

    @pytest.mark.parametrize("t", [2, 4, 6, 8, 10])
    def test_structure_all_t(self, t):
        H = build_base_t1(t)
        assert (H.rows, H.cols) == (2 * t, t * t)
        assert (H.col_weights() == 2).all()
        assert (H.row_weights() == t).all()
        assert len(set(column_pairs(H))) == t * t
        for a, b in column_pairs(H):
            assert (b - a) % 2 == 1
        assert rank_mod2(H) == 2 * t - 1

    def test_t4_min_distance(self):
        assert min_distance_bruteforce(build_base_t1(4)) == 4

    def test_base_codewords_satisfy_checks(self):
        H = build_base_t1(4)
        rng = np.random.default_rng(3)
        basis = nullspace_mod2(H)
        for _ in range(50):
            pick = rng.integers(0, 2, len(basis))
            cw = np.zeros(H.cols, dtype=np.uint8)
            for b, on in zip(basis, pick):
                if on:
                    cw ^= b
            assert not mat_vec_mod2(H, cw).any()

    @pytest.mark.parametrize("t", [0, 1, 3])
    def test_rejects_bad_t(self, t):
        with pytest.raises(ValueError):
            build_base_t1(t)


class TestBaseT2:
    def test_prefix_equals_t1_group_one(self):
        H2 = build_base_t2(2, 3)
        H1 = build_base_t1(2)
        assert (H2.rows, H2.cols) == (4, 3)
        assert column_pairs(H2) == column_pairs(H1)[:3]

    def test_t4_width_10(self):
        H = build_base_t2(4, 10)
        assert (H.rows, H.cols) == (8, 10)
        assert (H.col_weights() == 2).all()
        for a, b in column_pairs(H):
            assert (b - a) % 2 == 1
        assert min_distance_bruteforce(H) >= 4

    def test_no_short_cycles_among_wide_columns(self):
        # columns with gap > 1 must not contain a 4-subset summing to zero
        H = build_base_t2(4, 10)
        wide = [c for c in range(H.cols) if H.col_support[c][1] - H.col_support[c][0] > 1]
        dense = H.to_dense()
        from itertools import combinations

        for quad in combinations(wide, 4):
            assert dense[:, quad].sum(axis=1).__mod__(2).any()

    def test_unreachable_width_reports_shortfall(self):
        # greedy skipping caps t=10 at 51 columns, short of the 55 cap
        with pytest.raises(ValueError, match="reached width 51"):
            build_base_t2(10, 55)

    def test_width_cap_validated(self):
        with pytest.raises(ValueError):
            build_base_t2(4, 37)  # above t*(t+1)/2 can never be requested


class TestFullH:
    def test_256_192_shape_and_weights(self):
        params = FdpcParams(t=16, num_per=1, n=256, k=192, perm_seed=17)
        code = build_full_H(params)
        H = code.H
        assert (H.rows, H.cols) == (64, 256)
        assert code.punctured_cols == ()
        # left block is the lower bidiagonal
        dense = H.to_dense()
        A = dense[:, :64]
        expected = np.eye(64, dtype=np.uint8)
        expected[np.arange(1, 64), np.arange(63)] = 1
        assert np.array_equal(A, expected)
        assert (H.col_weights()[64:] == 4).all()
        assert rank_mod2(H) == 64

    def test_128_80_puncture_list(self):
        code = build_full_H(FdpcParams(t=12, num_per=1, n=128, k=80, perm_seed=5))
        assert (code.H.rows, code.H.cols) == (48, 128)
        assert code.punctured_cols == tuple(range(128, 144))
        assert (code.H.col_weights()[48:] == 4).all()

    def test_num_per_zero_has_no_permutation(self):
        params = FdpcParams(t=4, num_per=0, n=16, k=8, perm_seed=123)
        dense = build_full_H(params).H.to_dense()
        base = build_base_t1(4).to_dense()
        assert np.array_equal(dense[:, 8:], base[:, 8:])

    def test_perm_seed_determinism(self):
        p = FdpcParams(t=16, num_per=1, n=256, k=192, perm_seed=42)
        assert build_full_H(p).H == build_full_H(p).H
        other = FdpcParams(t=16, num_per=1, n=256, k=192, perm_seed=43)
        assert build_full_H(other).H != build_full_H(p).H

    def test_copies_share_data_columns(self):
        # every data column carries weight 2 in each stacked block
        code = build_full_H(FdpcParams(t=16, num_per=1, n=256, k=192, perm_seed=9))
        dense = code.H.to_dense()
        for block in range(2):
            sub = dense[32 * block : 32 * (block + 1), 64:]
            assert (sub.sum(axis=0) == 2).all()

    def test_params_validation(self):
        with pytest.raises(ValueError):
            FdpcParams(t=3, num_per=1, n=128, k=80)
        with pytest.raises(ValueError):
            FdpcParams(t=12, num_per=1, n=128, k=81)  # n - k must equal m_size
        with pytest.raises(ValueError):
            FdpcParams(t=12, num_per=-1, n=128, k=80)
        with pytest.raises(ValueError):
            FdpcParams(t=12, num_per=1, n=200, k=152)  # wider than the t=12 base
        with pytest.raises(ValueError):
            FdpcParams(t=16, num_per=1, n=64, k=0)


class TestEncode:
    @pytest.fixture
    def small_code(self):
        return build_full_H(FdpcParams(t=4, num_per=0, n=16, k=8))

    def test_parity_matches_generic_solve(self, small_code):
        dense = small_code.H.to_dense()
        A, D = dense[:, :8], dense[:, 8:]
        rng = np.random.default_rng(1)
        messages = [np.ones(8, dtype=np.uint8)] + [rng.integers(0, 2, 8, dtype=np.uint8) for _ in range(200)]
        for m in messages:
            cw = encode(small_code, m)
            assert np.array_equal(cw[8:], m)
            expected_p = gauss_solve_mod2(A, (D.astype(np.int64) @ m) % 2)
            assert np.array_equal(cw[:8], expected_p)

    def test_zero_syndrome_for_random_messages(self):
        for params in [
            FdpcParams(t=16, num_per=1, n=256, k=192, perm_seed=2),
            FdpcParams(t=12, num_per=1, n=128, k=80, perm_seed=2),
        ]:
            code = build_full_H(params)
            rng = np.random.default_rng(7)
            for _ in range(100):
                m = rng.integers(0, 2, code.k, dtype=np.uint8)
                assert not mat_vec_mod2(code.H, encode(code, m)).any()

    def test_all_zero_message(self, small_code):
        assert not encode(small_code, np.zeros(8, dtype=np.uint8)).any()

    def test_length_checked(self, small_code):
        with pytest.raises(ValueError):
            encode(small_code, np.zeros(7, dtype=np.uint8))


class TestSolveParams:
    def test_paper_sizes(self):
        p = solve_params(256, 192)
        assert (p.t, p.num_per) == (16, 1)
        p = solve_params(128, 80)
        assert (p.t, p.num_per) == (12, 1)
        p = solve_params(256, 164)
        assert (p.t, p.num_per) == (46, 0)
        p = solve_params(1024, 844)
        assert (p.t, p.num_per) == (90, 0)

    def test_256_192_uses_square_base(self):
        # the triangular base caps at 136 columns for t=16, too narrow for n=256
        assert solve_params(256, 192).base_order == "base_t1"

    def test_base_preference_follows_reachable_width(self):
        # t=46 greedy reaches 373 >= 256; t=90 greedy reaches 889 < 1024
        assert solve_params(256, 164).base_order == "base_t2"
        assert solve_params(1024, 844).base_order == "base_t1"

    def test_solved_params_always_build_and_encode(self):
        for n, k in [(128, 80), (256, 164), (256, 192), (1024, 844)]:
            code = build_full_H(solve_params(n, k, perm_seed=3))
            m = np.random.default_rng(4).integers(0, 2, k, dtype=np.uint8)
            assert not mat_vec_mod2(code.H, encode(code, m)).any()

    def test_infeasible_sizes_rejected(self):
        with pytest.raises(ValueError):
            solve_params(16, 15)  # odd redundancy
        with pytest.raises(ValueError):
            solve_params(16, 16)
        with pytest.raises(ValueError):
            solve_params(10, 4)  # m=6 forces t=... no even t wide enough


class TestDescriptor:
    def test_round_trip(self, tmp_path):
        code = build_full_H(FdpcParams(t=12, num_per=1, n=128, k=80, perm_seed=77))
        d = code_to_descriptor(code)
        blob = json.dumps(d)
        rebuilt = code_from_descriptor(json.loads(blob))
        assert rebuilt.H == code.H
        assert rebuilt.punctured_cols == code.punctured_cols

    def test_descriptor_fields(self):
        d = code_to_descriptor(build_full_H(FdpcParams(t=4, num_per=0, n=16, k=8)))
        assert set(d) == {"t", "num_per", "N", "K", "base_order", "perm_seed", "punctured_cols"}

    def test_tampered_puncture_list_rejected(self):
        d = code_to_descriptor(build_full_H(FdpcParams(t=12, num_per=1, n=128, k=80)))
        d["punctured_cols"] = [1] + d["punctured_cols"][1:]
        with pytest.raises(ValueError):
            code_from_descriptor(d)
