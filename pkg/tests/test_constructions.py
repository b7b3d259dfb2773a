import numpy as np
import pytest

import momentpoly as mp

from conftest import oracle_gram


class TestUnitTensor:
    def test_rank_one(self):
        t = mp.unit_tensor(1, 3)
        assert t.shape == (1, 1, 1) and t[0, 0, 0] == 1.0

    def test_norm(self):
        assert np.linalg.norm(mp.unit_tensor(4)) == pytest.approx(2.0)

    @pytest.mark.parametrize("r", [2, 3, 5])
    def test_uniform_spectra(self, r):
        for b in mp.spec_point(mp.unit_tensor(r)).blocks:
            assert np.allclose(b, 1.0 / r, atol=1e-14)

    def test_higher_order(self):
        t = mp.unit_tensor(3, 5)
        assert t.shape == (3,) * 5
        assert np.count_nonzero(t) == 3

    def test_invalid(self):
        with pytest.raises(ValueError):
            mp.unit_tensor(0)
        with pytest.raises(ValueError):
            mp.unit_tensor(2, 1)


class TestMatmulTensor:
    def test_shape_and_count(self):
        t = mp.matmul_tensor(2, 3, 4)
        assert t.shape == (6, 12, 8)
        assert np.count_nonzero(t) == 24
        assert set(np.unique(t[t != 0])) == {1.0 + 0.0j}

    def test_m11b_pattern(self):
        t = mp.matmul_tensor(1, 1, 3)
        assert t.shape == (1, 3, 3)
        assert np.array_equal(t[0], np.eye(3))

    def test_square_spectra_uniform(self):
        # leg slices are pairwise orthogonal with equal norm
        for n in (2, 3):
            t = mp.matmul_tensor(n, n, n)
            for leg in range(3):
                assert np.allclose(oracle_gram(t, leg), n * np.eye(n * n))

    def test_invalid(self):
        with pytest.raises(ValueError):
            mp.matmul_tensor(0, 1, 1)


class TestImmTensor:
    def test_order3_equals_matmul(self):
        for n in (1, 2, 3):
            assert np.array_equal(mp.imm_tensor(n, 3), mp.matmul_tensor(n, n, n))

    def test_trivial_bond(self):
        t = mp.imm_tensor(1, 5)
        assert t.shape == (1,) * 5 and t.ravel()[0] == 1.0

    def test_entry_count(self):
        assert np.count_nonzero(mp.imm_tensor(2, 4)) == 16

    def test_invalid(self):
        with pytest.raises(ValueError):
            mp.imm_tensor(2, 2)


class TestPolyMult:
    def test_pencil_is_degree_one_case(self):
        for c in (2, 3, 5):
            assert np.array_equal(mp.pencil_tensor(c), mp.poly_mult_tensor(2, c - 1))

    def test_single_row_case(self):
        assert np.array_equal(mp.poly_mult_tensor(1, 4), mp.matmul_tensor(1, 1, 4))

    def test_conciseness(self):
        for a, b in ((2, 3), (3, 4), (4, 4)):
            assert mp.conciseness_profile(mp.poly_mult_tensor(a, b)) == (a, b, a + b - 1)

    def test_slices_shift(self):
        t = mp.poly_mult_tensor(3, 2)
        assert np.array_equal(t[0], np.array([[1, 0, 0, 0], [0, 1, 0, 0]]))
        assert np.array_equal(t[2], np.array([[0, 0, 1, 0], [0, 0, 0, 1]]))


class TestBalancedPencil:
    def test_displayed_slices(self):
        t = mp.balanced_pencil(4)
        assert np.allclose(t[0], np.array([
            [np.sqrt(3), 0, 0, 0],
            [0, np.sqrt(2), 0, 0],
            [0, 0, 1, 0],
        ]))
        assert np.allclose(t[1], np.array([
            [0, 1, 0, 0],
            [0, 0, np.sqrt(2), 0],
            [0, 0, 0, np.sqrt(3)],
        ]))

    @pytest.mark.parametrize("c", range(3, 9))
    def test_uniform_marginals(self, c):
        mus = mp.moment_map(mp.balanced_pencil(c))
        for mu, d in zip(mus, (2, c - 1, c)):
            assert np.abs(mu - np.eye(d) / d).max() <= 1e-12

    def test_degenerate_case(self):
        mus = mp.moment_map(mp.balanced_pencil(2))
        assert np.allclose(mus[0], np.eye(2) / 2)
        assert np.allclose(mus[1], np.eye(1))
        assert np.allclose(mus[2], np.eye(2) / 2)

    @pytest.mark.parametrize("c", [3, 5, 7])
    def test_reached_from_pencil_by_diagonal_scaling(self, c):
        # solve d_j f_j = sqrt(c-j), d_j f_{j+1} = sqrt(j) for the diagonals
        f = np.ones(c)
        for j in range(1, c):
            f[j] = f[j - 1] * np.sqrt(j) / np.sqrt(c - j)
        d = np.array([np.sqrt(c - 1 - j0) / f[j0] for j0 in range(c - 1)])
        maps = (np.eye(2, dtype=complex), np.diag(d).astype(complex), np.diag(f).astype(complex))
        got = mp.restrict(mp.pencil_tensor(c), maps)
        assert np.abs(got - mp.balanced_pencil(c)).max() <= 1e-12


class TestBci:
    def test_entries(self):
        q = np.array([0.5, 0.3, 0.2])
        t = mp.bci_tensor(q)
        zeta = np.exp(2j * np.pi / 3)
        assert t[1, 2, 2] == pytest.approx(np.sqrt(0.3) * zeta ** 6)
        assert t[0, 1, 1] == pytest.approx(np.sqrt(0.5) * zeta ** 2)
        assert t[0, 1, 2] == 0.0

    def test_norm_squared_is_n(self):
        for q in ([0.5, 0.3, 0.2], [0.25] * 4, [1.0]):
            t = mp.bci_tensor(q)
            assert np.linalg.norm(t) ** 2 == pytest.approx(len(q))

    def test_spectra(self):
        q = np.array([0.5, 0.3, 0.2])
        sp = mp.spec_point(mp.bci_tensor(q))
        assert np.abs(sp.blocks[0] - q).max() <= 1e-10
        for b in sp.blocks[1:]:
            assert np.abs(b - 1 / 3).max() <= 1e-10

    def test_uniform_q(self):
        sp = mp.spec_point(mp.bci_tensor([0.25] * 4))
        for b in sp.blocks:
            assert np.abs(b - 0.25).max() <= 1e-10

    def test_point_mass_q(self):
        sp = mp.spec_point(mp.bci_tensor([1.0, 0.0, 0.0]))
        assert np.abs(sp.blocks[0] - np.array([1.0, 0.0, 0.0])).max() <= 1e-10

    def test_invalid_q(self):
        with pytest.raises(ValueError, match="nonincreasing"):
            mp.bci_tensor([0.2, 0.8])
        with pytest.raises(ValueError, match="sum"):
            mp.bci_tensor([0.5, 0.3])
        with pytest.raises(ValueError, match="nonnegative"):
            mp.bci_tensor([1.5, -0.5])
        with pytest.raises(ValueError, match="length"):
            mp.bci_tensor([0.5, 0.5], n=3)


class TestWedge:
    def test_entries_and_norm(self):
        t = mp.wedge3()
        assert np.linalg.norm(t) ** 2 == pytest.approx(6.0)
        assert t[0, 1, 2] == 1.0 and t[0, 2, 1] == -1.0
        assert np.count_nonzero(t) == 6

    def test_fully_antisymmetric(self):
        t = mp.wedge3()
        perms = [((0, 1, 2), 1), ((1, 0, 2), -1), ((1, 2, 0), 1), ((2, 1, 0), -1), ((0, 2, 1), -1), ((2, 0, 1), 1)]
        for perm, sign in perms:
            assert np.array_equal(np.transpose(t, perm), sign * t)

    def test_uniform_spectra(self):
        for b in mp.spec_point(mp.wedge3()).blocks:
            assert np.allclose(b, 1 / 3, atol=1e-14)


class TestZeroTensor:
    def test_basics(self):
        z = mp.zero_tensor((2, 3, 2))
        assert np.linalg.norm(z) == 0.0
        t = mp.unit_tensor(2)
        summed = mp.direct_sum(t, mp.zero_tensor((1, 1, 1)))
        assert np.array_equal(summed[:2, :2, :2], t)
        with pytest.raises(mp.ZeroTensorError):
            mp.marginal(z, 0)

    def test_invalid_shape(self):
        with pytest.raises(ValueError):
            mp.zero_tensor((2,))


class TestRestrictionHelpers:
    @pytest.mark.parametrize("a,b", [(1, 1), (2, 3), (3, 4), (4, 4), (5, 5)])
    def test_unit_to_poly_mult(self, a, b):
        maps = mp.unit_to_poly_mult_maps(a, b)
        got = mp.restrict(mp.unit_tensor(a + b - 1), maps)
        assert np.abs(got - mp.poly_mult_tensor(a, b)).max() <= 1e-12

    @pytest.mark.parametrize("a,b,n", [(2, 2, 2), (2, 3, 3), (3, 3, 4)])
    def test_matmul_outer_embedding(self, a, b, n):
        maps = mp.matmul_outer_embedding_maps(a, b, n)
        got = mp.restrict(mp.matmul_tensor(n, n, n), maps)
        assert np.array_equal(got, mp.matmul_tensor(a, 1, b))

    def test_matmul_outer_embedding_invalid(self):
        with pytest.raises(ValueError):
            mp.matmul_outer_embedding_maps(3, 2, 2)

    def test_completion_map(self, rng):
        for _ in range(10):
            a, b = rng.integers(1, 4), rng.integers(1, 4)
            s = mp.random_tensor((a, b, a * b), rng)
            n = mp.matmul_a1b_completion_map(s)
            got = mp.restrict(
                mp.matmul_tensor(a, 1, b),
                (np.eye(a, dtype=complex), np.eye(b, dtype=complex), n),
            )
            assert np.abs(got - s).max() <= 1e-12

    def test_completion_map_shape_check(self):
        with pytest.raises(ValueError):
            mp.matmul_a1b_completion_map(mp.unit_tensor(2))

    @pytest.mark.parametrize("n", [2, 3])
    def test_imm_collapse_exact(self, n):
        imm4 = mp.imm_tensor(n, 4)
        maps = [np.eye(n * n, dtype=complex)] * 3 + [mp.imm_collapse_map(n)]
        e1 = np.zeros(n * n)
        e1[0] = 1.0
        expected = np.multiply.outer(mp.imm_tensor(n, 3), e1)
        assert np.array_equal(mp.restrict(imm4, maps), expected)

    def test_imm_collapse_weight_scales(self):
        n = 2
        imm4 = mp.imm_tensor(n, 4)
        maps = [np.eye(n * n, dtype=complex)] * 3 + [mp.imm_collapse_map(n, weight=1.0 / n)]
        e1 = np.zeros(n * n)
        e1[0] = 1.0
        expected = np.multiply.outer(mp.imm_tensor(n, 3), e1) / n
        assert np.allclose(mp.restrict(imm4, maps), expected, atol=1e-15)


class TestReproducibility:
    def test_bit_identical_regeneration(self):
        builders = [
            lambda: mp.unit_tensor(4),
            lambda: mp.matmul_tensor(2, 3, 2),
            lambda: mp.imm_tensor(2, 4),
            lambda: mp.poly_mult_tensor(3, 4),
            lambda: mp.balanced_pencil(6),
            lambda: mp.bci_tensor([0.5, 0.3, 0.2]),
            lambda: mp.wedge3(),
        ]
        for build in builders:
            assert np.array_equal(build(), build())
