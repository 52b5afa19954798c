import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kreisslab import (ConfigurationError, OperatorSystem, WaveTruncationParams, adjoint,
                       build_diagonal, build_jordan, build_wave, euclidean_form,
                       reversed_system, shifted, system)


def wave11_oracle():
    """Hand-assembled 18x18 generator for nx = ny = 1.

    Independent of the builder: literal mode table, flat index arithmetic
    idx1 = 3(m+1) + (n+1), idx2 = 9 + idx1.
    """
    gen = np.zeros((18, 18), dtype=complex)
    weight = np.ones(18)
    modes = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1)]
    for m, n in modes:
        i1 = 3 * (m + 1) + (n + 1)
        i2 = 9 + i1
        gen[i1, i2] = -1.0
        gen[i2, i1] = m * m + n * n
        if n - 1 >= -1:
            gen[i2, 3 * (m + 1) + (n - 1 + 1)] = -1j * m
        weight[i1] = 1.0 + m * m + n * n
    return gen, weight


class TestBuilders:
    def test_diagonal_scalar(self):
        sys = build_diagonal([1.0])
        assert sys.dim == 1
        assert sys.gen[0, 0] == 1.0
        assert sys.weight[0] == 1.0

    def test_diagonal_identity_semigroup(self):
        sys = build_diagonal([0.0])
        assert sys.gen[0, 0] == 0.0

    def test_diagonal_skew_is_unitary(self):
        # oracle: direct SVD of exp(-tA) for a skew-adjoint diagonal generator
        sys = build_diagonal([1j * k for k in range(-4, 5)])
        for t in (0.5, 2.0, 7.5):
            mat = np.diag(np.exp(-t * np.diag(sys.gen)))
            svals = np.linalg.svd(mat, compute_uv=False)
            assert svals[0] == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_rejects_empty(self):
        with pytest.raises(ConfigurationError):
            build_diagonal([])

    def test_diagonal_rejects_left_half_plane(self):
        with pytest.raises(ConfigurationError):
            build_diagonal([1.0, -0.1 + 2j])

    def test_jordan_size_one_matches_diagonal(self):
        assert np.array_equal(build_jordan(0.0, 1).gen, build_diagonal([0.0]).gen)

    def test_jordan_structure(self):
        sys = build_jordan(1.0, 3)
        expected = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=complex)
        assert np.array_equal(sys.gen, expected)

    def test_jordan_rejects_size_zero(self):
        with pytest.raises(ConfigurationError):
            build_jordan(0.0, 0)

    def test_weights_positive_and_entries_finite(self):
        for sys in (build_diagonal([0.0, 1j]), build_jordan(2.0, 4),
                    build_wave(WaveTruncationParams(2, 3))):
            assert np.all(np.isfinite(sys.gen))
            assert np.all(sys.weight > 0)
            assert np.all(np.isfinite(sys.weight))

    def test_system_rejects_bad_weight(self):
        with pytest.raises(ConfigurationError):
            system(np.eye(2), weight=[1.0, 0.0])
        with pytest.raises(ConfigurationError):
            system(np.eye(2), weight=[1.0, -2.0])

    def test_system_rejects_nonfinite(self):
        with pytest.raises(ConfigurationError):
            system(np.array([[np.inf]]))


class TestWaveTruncation:
    def test_dim(self):
        assert WaveTruncationParams(1, 1).dim == 18
        assert WaveTruncationParams(8, 8).dim == 578

    def test_matches_hand_assembled_oracle(self):
        sys = build_wave(WaveTruncationParams(1, 1))
        gen, weight = wave11_oracle()
        assert np.array_equal(sys.gen, gen)
        assert np.array_equal(sys.weight, weight)

    def test_spec_spot_entries(self):
        p = WaveTruncationParams(1, 1)
        sys = build_wave(p)
        assert sys.gen[p.index(2, 1, 0), p.index(1, 1, 0)] == 1.0
        assert sys.gen[p.index(2, 1, 0), p.index(1, 1, -1)] == -1j
        # the (0, 0) wave mode is free: both lower-block entries vanish
        row = sys.gen[p.index(2, 0, 0)]
        assert np.all(row == 0)

    def test_upper_right_block_is_minus_identity(self):
        p = WaveTruncationParams(2, 2)
        sys = build_wave(p)
        block = sys.gen[:p.block_dim, p.block_dim:]
        assert np.array_equal(block, -np.eye(p.block_dim))

    def test_lower_left_block_bandwidth(self):
        # for each fixed m the component-1 -> 2 coupling only touches n and n-1
        p = WaveTruncationParams(2, 3)
        sys = build_wave(p)
        for m, n in p.modes():
            row = sys.gen[p.index(2, m, n), :p.block_dim]
            hits = np.nonzero(row)[0]
            for col in hits:
                c, mm, nn = p.unindex(col)
                assert c == 1 and mm == m and nn in (n, n - 1)

    @given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4),
           st.data())
    @settings(max_examples=60, deadline=None)
    def test_index_round_trip(self, nx, ny, data):
        p = WaveTruncationParams(nx, ny)
        c = data.draw(st.sampled_from([1, 2]))
        m = data.draw(st.integers(min_value=-nx, max_value=nx))
        n = data.draw(st.integers(min_value=-ny, max_value=ny))
        i = p.index(c, m, n)
        assert 0 <= i < p.dim
        assert p.unindex(i) == (c, m, n)

    def test_index_is_bijection(self):
        p = WaveTruncationParams(2, 1)
        seen = {p.index(c, m, n) for c in (1, 2) for m, n in p.modes()}
        assert seen == set(range(p.dim))

    def test_params_validation(self):
        with pytest.raises(ConfigurationError):
            WaveTruncationParams(0, 1)


class TestTransforms:
    def test_euclidean_form_flat_weight_is_identity_map(self):
        sys = build_jordan(0.0, 3)
        assert np.array_equal(euclidean_form(sys), sys.gen)

    def test_euclidean_form_scalar(self):
        sys = system(np.array([[2.0 + 0j]]), weight=[9.0])
        assert euclidean_form(sys)[0, 0] == 2.0

    def test_euclidean_form_weighted_2x2(self):
        # oracle: direct D A D^{-1} product
        sys = system(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex), weight=[4.0, 1.0])
        d = np.diag([2.0, 1.0])
        expected = d @ sys.gen @ np.linalg.inv(d)
        assert np.allclose(euclidean_form(sys), expected, atol=1e-15)
        assert euclidean_form(sys)[0, 1] == 2.0

    def test_adjoint_diagonal_conjugates(self):
        sys = build_diagonal([2j, -3j, 1 + 1j])
        assert np.allclose(adjoint(sys).gen, np.conj(sys.gen), atol=1e-15)

    def test_adjoint_real_symmetric_fixed_point(self):
        gen = np.array([[2.0, 1.0], [1.0, 3.0]], dtype=complex)
        sys = system(gen)
        assert np.allclose(adjoint(sys).gen, gen, atol=1e-15)

    def test_adjoint_involution(self):
        sys = build_wave(WaveTruncationParams(2, 2))
        back = adjoint(adjoint(sys))
        assert np.max(np.abs(back.gen - sys.gen)) < 1e-12

    def test_adjoint_euclidean_is_conjugate_transpose(self):
        sys = build_wave(WaveTruncationParams(1, 2))
        lhs = euclidean_form(adjoint(sys))
        rhs = euclidean_form(sys).conj().T
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_adjoint_pairing_residual(self):
        sys = build_wave(WaveTruncationParams(2, 2))
        star = adjoint(sys)
        rng = np.random.default_rng(11)
        gen_scale = np.linalg.norm(sys.gen, 2)
        for _ in range(5):
            x = rng.standard_normal(sys.dim) + 1j * rng.standard_normal(sys.dim)
            y = rng.standard_normal(sys.dim) + 1j * rng.standard_normal(sys.dim)
            lhs = sys.inner(sys.gen @ x, y)
            rhs = sys.inner(x, star.gen @ y)
            bound = 1e-10 * sys.norm(x) * sys.norm(y) * gen_scale
            assert abs(lhs - rhs) <= bound

    def test_shift_zero_is_identity(self):
        sys = build_diagonal([1.0])
        assert shifted(sys, 0.0) is sys

    def test_shift_accumulates(self):
        sys = shifted(shifted(build_diagonal([1.0]), 0.5), 0.25)
        assert sys.shift == 0.75
        assert sys.gen[0, 0] == pytest.approx(1.75)

    def test_reversed_negates(self):
        sys = shifted(build_jordan(1.0, 2), 0.5)
        rev = reversed_system(sys)
        assert np.array_equal(rev.gen, -sys.gen)
        assert rev.shift == -0.5

    def test_wave_demo_generators(self):
        # the two time directions: A + 1/2 and -A + 1/2
        base = build_wave(WaveTruncationParams(1, 1))
        fwd = shifted(base, 0.5)
        bwd = shifted(reversed_system(base), 0.5)
        eye = np.eye(base.dim)
        assert np.allclose(fwd.gen, base.gen + 0.5 * eye, atol=1e-15)
        assert np.allclose(bwd.gen, -base.gen + 0.5 * eye, atol=1e-15)


class TestImmutability:
    def test_arrays_are_read_only(self):
        sys = build_jordan(0.0, 2)
        with pytest.raises(ValueError):
            sys.gen[0, 0] = 5.0
        with pytest.raises(ValueError):
            sys.weight[0] = 5.0

    def test_inner_product_matches_weight(self):
        sys = build_wave(WaveTruncationParams(1, 1))
        x = np.ones(sys.dim, dtype=complex)
        assert sys.inner(x, x).real == pytest.approx(float(np.sum(sys.weight)))
        assert sys.norm(x) == pytest.approx(float(np.sqrt(np.sum(sys.weight))))
