"""Representation table: completeness, orthogonality, transforms."""

import numpy as np
import pytest

from hmix import fourier
from hmix.group import (
    DistributionTable,
    GroupElement,
    canonical_measure,
    convolution_power,
    identity,
    inv,
    mul,
)


def random_element(rng, n):
    return GroupElement(*rng.integers(0, n, 3), n)


class TestEnumeration:
    def test_squared_dimensions_fill_the_group(self):
        for n in range(1, 17):
            assert sum(irr.m**2 for irr in fourier.enumerate_irreps(n)) == n**3

    def test_dimension_census_n12(self):
        counts = {}
        for irr in fourier.enumerate_irreps(12):
            counts[irr.m] = counts.get(irr.m, 0) + 1
        assert counts == {1: 144, 2: 36, 3: 32, 4: 18, 6: 8, 12: 4}

    def test_labels_are_validated(self):
        with pytest.raises(ValueError):
            fourier.Irrep(6, 4, 0, 0, 1)  # 4 does not divide 6
        with pytest.raises(ValueError):
            fourier.Irrep(6, 1, 0, 0, 1)  # scalar labels have c = 0
        with pytest.raises(ValueError):
            fourier.Irrep(8, 4, 0, 0, 2)  # 2 is not a unit mod 4

    def test_trivial_label_is_first(self):
        irreps = fourier.enumerate_irreps(9)
        assert irreps[0].is_trivial
        assert sum(irr.is_trivial for irr in irreps) == 1


class TestMatrices:
    def test_identity_maps_to_identity(self):
        for irr in fourier.enumerate_irreps(6):
            np.testing.assert_array_equal(
                irr.matrix(identity(6)), np.eye(irr.m, dtype=complex)
            )

    def test_unitarity(self):
        rng = np.random.default_rng(11)
        for n in (4, 6, 9):
            for irr in fourier.enumerate_irreps(n):
                g = random_element(rng, n)
                u = irr.matrix(g)
                np.testing.assert_allclose(
                    u @ u.conj().T, np.eye(irr.m), atol=1e-12
                )

    def test_homomorphism(self):
        rng = np.random.default_rng(12)
        for n in (4, 5, 6, 9):
            irreps = fourier.enumerate_irreps(n)
            for _ in range(30):
                irr = irreps[rng.integers(len(irreps))]
                g, h = random_element(rng, n), random_element(rng, n)
                np.testing.assert_allclose(
                    irr.matrix(mul(g, h)),
                    irr.matrix(g) @ irr.matrix(h),
                    atol=1e-12,
                )

    def test_inverse_maps_to_conjugate_transpose(self):
        rng = np.random.default_rng(13)
        for irr in fourier.enumerate_irreps(8):
            g = random_element(rng, 8)
            np.testing.assert_allclose(
                irr.matrix(inv(g)), irr.matrix(g).conj().T, atol=1e-12
            )


class TestCharacters:
    def test_character_is_trace(self):
        rng = np.random.default_rng(21)
        for n in (4, 6, 9):
            for irr in fourier.enumerate_irreps(n):
                for _ in range(5):
                    g = random_element(rng, n)
                    assert irr.character(g) == pytest.approx(
                        np.trace(irr.matrix(g)), abs=1e-12
                    )

    def test_support_condition(self):
        irr = fourier.Irrep(6, 3, 1, 0, 2)
        assert irr.character(GroupElement(1, 0, 0, 6)) == 0
        assert irr.character(GroupElement(0, 2, 0, 6)) == 0
        assert irr.character(GroupElement(3, 3, 5, 6)) != 0

    def test_gram_matrix_is_identity(self):
        for n in (4, 5, 6, 9, 12, 15):
            gram = fourier.character_gram(n)
            np.testing.assert_allclose(gram, np.eye(len(gram)), atol=1e-9)

    def test_shifted_labels_share_characters(self):
        # a or b moved by n/m lands in an equivalent representation
        n = 6
        _, table = fourier.character_table(n)
        for m, a, b, c in ((2, 1, 2, 1), (3, 0, 1, 2)):
            span = n // m
            base = fourier.Irrep(n, m, a, b, c)
            for shifted in (
                fourier.Irrep(n, m, a + span, b, c),
                fourier.Irrep(n, m, a, b + span, c),
            ):
                for idx in range(n**3):
                    g = GroupElement(idx % n, (idx // n) % n, idx // 36, n)
                    assert shifted.character(g) == pytest.approx(
                        base.character(g), abs=1e-12
                    )


class TestWalkTransform:
    def test_closed_form_matches_generic_sum(self):
        for n in (3, 4, 5, 6, 9, 12):
            q = canonical_measure(n)
            for irr in fourier.enumerate_irreps(n):
                got = fourier.walk_transform(irr)
                want = fourier.fourier_transform(q, irr)
                np.testing.assert_allclose(got, want, atol=1e-13)
                np.testing.assert_allclose(got, got.conj().T, atol=0)

    def test_prime_top_labels_give_cosine_band_matrix(self):
        # at (p, 0, 0, xi) the transform is the p-point band matrix with
        # diagonal cos(2*pi*(xi*j mod p)/p)/2 and quarter off-diagonals
        for p, xi in ((5, 1), (7, 3), (11, 10)):
            irr = fourier.Irrep(p, p, 0, 0, xi)
            got = fourier.walk_transform(irr)
            j = np.arange(p)
            r = (xi * j) % p
            want = np.zeros((p, p), dtype=complex)
            want[j, j] = 0.5 * np.cos(2 * np.pi * np.minimum(r, p - r) / p)
            want[j, (j + 1) % p] += 0.25
            want[j, (j - 1) % p] += 0.25
            np.testing.assert_array_equal(got, want)

    def test_scalar_grid(self):
        vals = fourier.scalar_eigenvalues(5)
        assert vals.shape == (24,)
        assert vals.max() < 1.0
        full = fourier.scalar_eigenvalues(5, include_trivial=True)
        assert full[0] == 1.0
        lam = 0.5 * np.cos(2 * np.pi / 5) + 0.5
        assert lam in full

    def test_spectra_account_for_every_label(self):
        spectra = fourier.nontrivial_walk_spectra(6)
        assert sum(d * len(e) for d, e in spectra) == sum(
            irr.m**2 for irr in fourier.enumerate_irreps(6) if not irr.is_trivial
        )
        for _, eigs in spectra:
            assert (np.abs(eigs) <= 1.0 + 1e-12).all()


class TestTransformCalculus:
    def test_convolution_becomes_matrix_power(self):
        n, k = 5, 3
        q = canonical_measure(n)
        pk = convolution_power(q, k)
        for irr in fourier.enumerate_irreps(n)[::7]:
            direct = fourier.transform_table(pk, irr)
            powered = np.linalg.matrix_power(fourier.fourier_transform(q, irr), k)
            np.testing.assert_allclose(direct, powered, atol=1e-13)

    def test_plancherel_identity(self):
        # sum of dim * ||phat||_F^2 over nontrivial labels equals the
        # squared l2 deviation from uniform, scaled by the group size
        for n in (4, 5):
            p = convolution_power(canonical_measure(n), 6)
            lhs = 0.0
            for irr in fourier.enumerate_irreps(n):
                if irr.is_trivial:
                    continue
                phat = fourier.transform_table(p, irr)
                lhs += irr.m * np.linalg.norm(phat) ** 2
            rhs = n**3 * np.sum((p.probs - 1.0 / n**3) ** 2)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_inversion_round_trip(self):
        rng = np.random.default_rng(31)
        n = 4
        probs = rng.random(n**3)
        probs /= probs.sum()
        table = DistributionTable(n, probs)
        pairs = [
            (irr, fourier.transform_table(table, irr))
            for irr in fourier.enumerate_irreps(n)
        ]
        back = fourier.inverse_transform(n, pairs)
        np.testing.assert_allclose(back, probs, atol=1e-12)

    def test_eigenweights_match_direct_conjugation(self):
        rng = np.random.default_rng(32)
        n = 4
        for irr in fourier.enumerate_irreps(n):
            if irr.m < 2:
                continue
            _, vecs = np.linalg.eigh(fourier.walk_transform(irr))
            table = fourier.eigenweight_table(irr, vecs)
            for _ in range(8):
                g = random_element(rng, n)
                rho_inv = irr.matrix(inv(g))
                want = np.einsum("il,ij,jl->l", vecs.conj(), rho_inv, vecs)
                np.testing.assert_allclose(table[g.index], want, atol=1e-12)
