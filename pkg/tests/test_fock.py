"""Tests for Fock bases and state containers."""

from math import comb

import numpy as np
import pytest
import torch

from src.config.settings import settings
from src.errors import CapacityError, DimensionError, NormalizationError
from src.fock import (
    FockState,
    MixedState,
    PureState,
    basis_size,
    enumerate_basis,
    pure_to_mixed,
    register_block,
    tensor_basis_indices,
    tensor_encode,
)


class TestEnumerateBasis:
    """Test basis enumeration."""

    def test_single_photon_two_modes(self):
        """Test the (2, 1) basis and its order."""
        basis = enumerate_basis(2, 1)
        assert basis.occupation_matrix() == ((1, 0), (0, 1))
        assert len(basis) == 2

    @pytest.mark.parametrize("m,k,size", [(4, 2, 10), (12, 2, 78), (6, 2, 21), (16, 2, 136)])
    def test_known_sizes(self, m, k, size):
        """Test sizes quoted for the PQCNN layouts."""
        assert len(enumerate_basis(m, k)) == size

    def test_sizes_match_binomial(self):
        """Test every m <= 12, k <= 4 against binomial(m+k-1, k)."""
        for m in range(1, 13):
            for k in range(0, 5):
                assert len(enumerate_basis(m, k)) == comb(m + k - 1, k) == basis_size(m, k)

    def test_descending_lexicographic_order(self):
        """Test that occupation vectors strictly decrease."""
        states = enumerate_basis(5, 3).occupation_matrix()
        assert list(states) == sorted(states, reverse=True)
        assert states[0] == (3, 0, 0, 0, 0)
        assert states[-1] == (0, 0, 0, 0, 3)

    def test_index_round_trip(self):
        """Test that index_of inverts positions."""
        basis = enumerate_basis(6, 3)
        for i, state in enumerate(basis):
            assert basis.index_of(state) == i
            assert state.k == 3 and state.m == 6

    def test_unknown_state(self):
        """Test lookup of a state with the wrong photon number."""
        basis = enumerate_basis(3, 2)
        assert (1, 1, 1) not in basis
        with pytest.raises(DimensionError):
            basis.index_of((1, 1, 1))

    def test_capacity_cap(self, mocker):
        """Test that oversize subspaces are refused."""
        mocker.patch.object(settings, "max_basis_states", 100)
        with pytest.raises(CapacityError):
            enumerate_basis(10, 3)

    def test_invalid_arguments(self):
        """Test that zero modes are rejected."""
        with pytest.raises(DimensionError):
            enumerate_basis(0, 1)


class TestFockState:
    """Test FockState helpers."""

    def test_properties(self):
        """Test photon modes, norm factor and collision check."""
        state = FockState((2, 0, 1))
        assert state.photon_modes() == (0, 0, 2)
        assert state.norm_factor() == 2
        assert not state.is_collision_free()
        assert FockState((1, 0, 1)).is_collision_free()
        assert str(state) == "|2,0,1>"

    def test_negative_occupation(self):
        """Test rejection of negative counts."""
        with pytest.raises(DimensionError):
            FockState((1, -1))


class TestTensorEncode:
    """Test tensor encoding on one photon per register."""

    def test_uniform_two_by_two(self):
        """Test four amplitudes of 1/2."""
        basis = enumerate_basis(4, 2)
        psi = tensor_encode(np.ones((2, 2)), basis, [2, 2])
        block = register_block(psi, [2, 2])
        assert torch.allclose(block, torch.full((4,), 0.5, dtype=torch.complex128))
        assert float(psi.probabilities().sum()) == pytest.approx(1.0, abs=1e-12)

    def test_one_hot_pixel(self):
        """Test that a single pixel gives a product basis state."""
        basis = enumerate_basis(8, 2)
        x = np.zeros((4, 4))
        x[1, 2] = 3.0
        psi = tensor_encode(x, basis, [4, 4])
        position = basis.index_of((0, 1, 0, 0, 0, 0, 1, 0))
        assert abs(complex(psi.amplitudes[position]) - 1.0) < 1e-12

    def test_random_tensor(self, rng):
        """Test element-wise amplitudes and support."""
        basis = enumerate_basis(8, 2)
        x = rng.normal(size=(4, 4))
        psi = tensor_encode(x, basis, [4, 4])
        indices = tensor_basis_indices(basis, [4, 4])
        np.testing.assert_allclose(psi.amplitudes[indices].real.numpy(), (x / np.linalg.norm(x)).reshape(-1), atol=1e-12)
        outside = torch.ones(len(basis), dtype=torch.bool)
        outside[indices] = False
        assert float(psi.amplitudes[outside].abs().max()) == 0.0

    def test_zero_tensor(self):
        """Test that a zero tensor cannot be encoded."""
        with pytest.raises(NormalizationError):
            tensor_encode(np.zeros((2, 2)), enumerate_basis(4, 2), [2, 2])

    def test_shape_mismatch(self):
        """Test register/shape mismatches."""
        with pytest.raises(DimensionError):
            tensor_encode(np.ones((2, 3)), enumerate_basis(4, 2), [2, 2])
        with pytest.raises(DimensionError):
            tensor_encode(np.ones((2, 2)), enumerate_basis(5, 2), [2, 2])


class TestStates:
    """Test PureState and MixedState validation."""

    def test_pure_to_mixed_basis_state(self):
        """Test a single 1 on the diagonal."""
        basis = enumerate_basis(3, 1)
        rho = pure_to_mixed(PureState(basis, torch.tensor([1.0, 0.0, 0.0])))
        expected = torch.zeros((3, 3), dtype=torch.complex128)
        expected[0, 0] = 1.0
        assert torch.equal(rho.rho, expected)

    def test_pure_to_mixed_uniform(self):
        """Test that a uniform two-state superposition has all entries 1/2."""
        basis = enumerate_basis(2, 1)
        rho = pure_to_mixed(PureState(basis, torch.tensor([1.0, 1.0], dtype=torch.float64) / np.sqrt(2)))
        assert torch.allclose(rho.rho, torch.full((2, 2), 0.5, dtype=torch.complex128))

    def test_pure_to_mixed_idempotent(self, rng):
        """Test trace one and rho squared equal to rho."""
        basis = enumerate_basis(4, 2)
        v = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        rho = pure_to_mixed(PureState(basis, v / np.linalg.norm(v))).rho
        assert float(torch.trace(rho).real) == pytest.approx(1.0, abs=1e-12)
        assert torch.allclose(rho @ rho, rho, atol=1e-12)

    def test_unnormalized_pure_state(self):
        """Test the norm check."""
        with pytest.raises(NormalizationError):
            PureState(enumerate_basis(2, 1), torch.tensor([1.0, 1.0]))

    def test_invalid_density_matrices(self):
        """Test Hermiticity, trace and positivity checks."""
        basis = enumerate_basis(2, 1)
        with pytest.raises(NormalizationError):
            MixedState(basis, torch.tensor([[0.5, 0.5], [0.0, 0.5]]))
        with pytest.raises(NormalizationError):
            MixedState(basis, torch.eye(2))
        with pytest.raises(NormalizationError):
            MixedState(basis, torch.tensor([[1.5, 0.0], [0.0, -0.5]]))
        with pytest.raises(DimensionError):
            MixedState(basis, torch.eye(3) / 3)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
