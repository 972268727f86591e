"""Tests for gates, circuits, permanents and the photon-number lift."""

import math

import numpy as np
import pytest
import torch

from src.errors import DimensionError, NormalizationError, ParameterError
from src.fock import PureState, enumerate_basis, pure_to_mixed
from src.optics import (
    BeamSplitterGate,
    Circuit,
    ModeUnitary,
    apply,
    batched_permanent,
    bs_matrix,
    compact_six_mode_mesh,
    compose,
    evolve_fock,
    lift,
    lift_block,
    mesh_universal,
    permanent,
    with_random_phases,
)
from tests.conftest import naive_permanent, random_unitary


def random_angles(n: int, seed: int) -> torch.Tensor:
    return torch.rand(n, generator=torch.Generator().manual_seed(seed), dtype=torch.float64) * 2 * math.pi


class TestBeamSplitter:
    """Test the 2x2 beam-splitter block."""

    def test_identity(self):
        """Test theta = 0."""
        assert torch.allclose(bs_matrix(0.0), torch.eye(2, dtype=torch.complex128))

    def test_full_reflection(self):
        """Test theta = pi/2."""
        expected = torch.tensor([[0, 1], [-1, 0]], dtype=torch.complex128)
        assert torch.allclose(bs_matrix(math.pi / 2), expected, atol=1e-15)

    def test_balanced(self):
        """Test theta = pi/4 magnitudes."""
        assert torch.allclose(bs_matrix(math.pi / 4).abs(), torch.full((2, 2), 1 / math.sqrt(2), dtype=torch.float64))

    def test_phase_unitary(self):
        """Test unitarity with a phase."""
        b = bs_matrix(0.3, 1.1)
        assert torch.allclose(b @ b.conj().T, torch.eye(2, dtype=torch.complex128), atol=1e-15)
        assert complex(b[0, 1]) == pytest.approx(complex(np.exp(1.1j) * np.sin(0.3)))

    def test_invalid_gate(self):
        """Test that a gate needs two distinct modes."""
        with pytest.raises(DimensionError):
            BeamSplitterGate((1, 1))


class TestCompose:
    """Test circuit composition."""

    def test_empty_circuit(self):
        """Test that an empty circuit is the identity."""
        assert torch.equal(compose(Circuit(3, ())).matrix, torch.eye(3, dtype=torch.complex128))

    def test_single_gate(self):
        """Test that one gate on two modes is its block."""
        circuit = Circuit(2, (BeamSplitterGate((0, 1), slot=0),))
        assert torch.allclose(compose(circuit, [0.7]).matrix, bs_matrix(0.7))

    def test_two_gates_application_order(self):
        """Test that later gates multiply on the left."""
        circuit = Circuit(3, (BeamSplitterGate((0, 1), slot=0), BeamSplitterGate((1, 2), slot=1)))
        g1 = torch.eye(3, dtype=torch.complex128)
        g1[:2, :2] = bs_matrix(0.4)
        g2 = torch.eye(3, dtype=torch.complex128)
        g2[1:, 1:] = bs_matrix(1.3)
        assert torch.allclose(compose(circuit, [0.4, 1.3]).matrix, g2 @ g1)

    def test_random_meshes_unitary(self):
        """Test unitarity of random meshes up to 16 modes."""
        for m in (2, 5, 9, 16):
            mesh = mesh_universal(m)
            u = compose(mesh, random_angles(mesh.n_params, m)).matrix
            assert float((u.conj().T @ u - torch.eye(m, dtype=torch.complex128)).abs().max()) < 1e-10

    def test_unbound_slot(self):
        """Test that missing parameters are reported."""
        with pytest.raises(ParameterError):
            compose(mesh_universal(3))
        with pytest.raises(ParameterError):
            compose(mesh_universal(3), [0.1])

    def test_non_finite_angle(self):
        """Test that NaN angles are rejected."""
        with pytest.raises(ParameterError):
            compose(mesh_universal(2), [float("nan")])

    def test_unreferenced_slot(self):
        """Test that slot gaps are rejected."""
        with pytest.raises(ParameterError):
            Circuit(2, (BeamSplitterGate((0, 1), slot=1),))

    def test_tied_slots(self):
        """Test that gates sharing a slot take the same angle."""
        circuit = Circuit(4, (BeamSplitterGate((0, 1), slot=0), BeamSplitterGate((2, 3), slot=0)))
        u = compose(circuit, [0.9]).matrix
        assert circuit.n_params == 1
        assert torch.allclose(u[:2, :2], u[2:, 2:])


class TestMeshes:
    """Test mesh layouts."""

    @pytest.mark.parametrize("m,gates", [(2, 1), (4, 6), (6, 15), (8, 28)])
    def test_gate_counts(self, m, gates):
        """Test m(m-1)/2 independently parameterized gates."""
        mesh = mesh_universal(m)
        assert len(mesh) == gates
        assert mesh.n_params == gates

    @pytest.mark.parametrize("m", [4, 6, 8])
    def test_rectangular_depth(self, m):
        """Test an m-mode rectangular mesh is m columns deep."""
        assert mesh_universal(m).depth == m

    def test_depth_of_cascades(self):
        """Test the compact layout, a cascade and an empty circuit."""
        assert compact_six_mode_mesh().depth == 4
        cascade = Circuit(4, tuple(BeamSplitterGate((j, j + 1)) for j in range(3)))
        assert cascade.depth == 3
        assert Circuit(3, ()).depth == 0

    def test_every_pair_crosses(self):
        """Test that a photon can reach every output from every input."""
        mesh = mesh_universal(5)
        u = compose(mesh, random_angles(mesh.n_params, 21)).matrix
        assert bool((u.abs() > 1e-12).all())

    def test_compact_six_mode_mesh(self):
        """Test the eight-gate dense layout."""
        mesh = compact_six_mode_mesh()
        assert mesh.m == 6
        assert mesh.n_params == 8
        assert [g.modes for g in mesh.gates][:3] == [(2, 3), (1, 2), (3, 4)]
        assert mesh.param_bindings == {i: i for i in range(8)}

    def test_random_phases_frozen(self):
        """Test that random phases keep slots and land in [0, 2pi)."""
        mesh = compact_six_mode_mesh()
        phased = with_random_phases(mesh, torch.Generator().manual_seed(5))
        assert phased.n_params == mesh.n_params
        assert all(0.0 <= g.phi < 2 * math.pi for g in phased.gates)
        assert len({g.phi for g in phased.gates}) == len(phased.gates)
        again = with_random_phases(mesh, torch.Generator().manual_seed(5))
        assert again == phased

    def test_round_trip_dict(self):
        """Test circuit serialization."""
        phased = with_random_phases(mesh_universal(4), torch.Generator().manual_seed(1))
        assert Circuit.from_dict(phased.to_dict()) == phased


class TestPermanent:
    """Test Ryser permanents."""

    def test_identity(self):
        """Test Per(I) = 1."""
        assert permanent(np.eye(3)) == pytest.approx(1.0)

    def test_all_ones(self):
        """Test Per(J_2) = 2."""
        assert permanent(np.ones((2, 2))) == pytest.approx(2.0)

    def test_random_against_naive(self, rng):
        """Test 200 random complex matrices up to 6x6."""
        for trial in range(200):
            n = 1 + trial % 6
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            assert abs(permanent(a) - naive_permanent(a)) < 1e-12 * max(1.0, abs(naive_permanent(a)))

    def test_permutation_invariance(self, rng):
        """Test row and column permutations."""
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        value = permanent(a)
        assert permanent(a[[2, 0, 3, 1]]) == pytest.approx(value, abs=1e-12)
        assert permanent(a[:, [3, 1, 0, 2]]) == pytest.approx(value, abs=1e-12)

    def test_batched_matches_scalar(self, rng):
        """Test the batched formula against the Gray-code one."""
        for n in range(0, 5):
            a = rng.normal(size=(7, n, n)) + 1j * rng.normal(size=(7, n, n))
            batched = batched_permanent(torch.as_tensor(a))
            for i in range(7):
                assert abs(complex(batched[i]) - permanent(a[i])) < 1e-12

    def test_non_square(self):
        """Test shape validation."""
        with pytest.raises(DimensionError):
            permanent(np.ones((2, 3)))
        with pytest.raises(DimensionError):
            batched_permanent(torch.ones((2, 3), dtype=torch.complex128))


class TestLift:
    """Test the k-photon lift."""

    def test_single_photon_equals_unitary(self):
        """Test k = 1."""
        u = random_unitary(4, 0)
        assert torch.allclose(lift(ModeUnitary(4, u), 1).matrix, u, atol=1e-12)

    def test_hong_ou_mandel_dip(self):
        """Test zero coincidence after a balanced splitter."""
        u = compose(Circuit(2, (BeamSplitterGate((0, 1), theta=math.pi / 4),)))
        out = evolve_fock(u, (1, 1))
        coincidence = out.amplitudes[out.basis.index_of((1, 1))]
        assert abs(complex(coincidence)) ** 2 < 1e-12
        assert float(out.probabilities()[out.basis.index_of((2, 0))]) == pytest.approx(0.5, abs=1e-12)

    def test_coincidence_closed_form(self):
        """Test the |1,1> amplitude cos^2 - sin^2."""
        theta = 0.37
        u = compose(Circuit(2, (BeamSplitterGate((0, 1), theta=theta),)))
        out = evolve_fock(u, (1, 1))
        expected = math.cos(theta) ** 2 - math.sin(theta) ** 2
        assert complex(out.amplitudes[out.basis.index_of((1, 1))]) == pytest.approx(expected, abs=1e-12)

    def test_unitary_and_homomorphism(self):
        """Test 50 random unitaries for unitarity and lift(UV) = lift(U) lift(V)."""
        for trial in range(50):
            m = 2 + trial % 4
            k = 1 + trial % 3
            u, v = random_unitary(m, 2 * trial), random_unitary(m, 2 * trial + 1)
            lu, lv = lift(ModeUnitary(m, u), k), lift(ModeUnitary(m, v), k)
            luv = lift(ModeUnitary(m, u @ v), k)
            eye = torch.eye(len(lu.basis), dtype=torch.complex128)
            assert float((lu.matrix @ lu.matrix.conj().T - eye).abs().max()) < 1e-8
            assert float((luv.matrix - lu.matrix @ lv.matrix).abs().max()) < 1e-8

    def test_lift_block_chunks(self, mocker):
        """Test that row chunking does not change the result."""
        from src.config.settings import settings

        u = random_unitary(5, 11)
        full = lift_block(u, 3)
        mocker.patch.object(settings, "lift_row_chunk", 7)
        assert torch.allclose(lift_block(u, 3), full, atol=1e-14)

    def test_lift_block_selection(self):
        """Test that sub-blocks match the full lift."""
        u = random_unitary(4, 3)
        full = lift_block(u, 2)
        rows, cols = torch.tensor([0, 4, 9]), torch.tensor([1, 2])
        assert torch.allclose(lift_block(u, 2, rows=rows, cols=cols), full[rows][:, cols])

    def test_lift_gradient_flows(self):
        """Test that angles stay differentiable through the lift."""
        theta = torch.tensor([0.4], dtype=torch.float64, requires_grad=True)
        circuit = Circuit(2, (BeamSplitterGate((0, 1), slot=0),))
        from src.optics import compose_matrix

        out = lift_block(compose_matrix(circuit, theta), 2)
        out[1, 1].real.backward()
        # d/dtheta (cos^2 - sin^2) = -2 sin(2 theta)
        assert float(theta.grad) == pytest.approx(-2 * math.sin(0.8), abs=1e-12)


class TestApply:
    """Test evolution of pure and mixed states."""

    def test_identity(self):
        """Test that the identity leaves states alone."""
        basis = enumerate_basis(3, 2)
        psi = PureState(basis, torch.eye(len(basis), dtype=torch.complex128)[2])
        out = apply(lift(ModeUnitary.identity(3), 2), psi)
        assert torch.equal(out.amplitudes, psi.amplitudes)

    def test_pure_and_mixed_agree(self, rng):
        """Test outer(U psi) = U outer(psi) U^dagger."""
        basis = enumerate_basis(4, 2)
        v = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        psi = PureState(basis, v / np.linalg.norm(v))
        w = lift(ModeUnitary(4, random_unitary(4, 9)), 2)
        pure = pure_to_mixed(apply(w, psi)).rho
        mixed = apply(w, pure_to_mixed(psi)).rho
        assert float((pure - mixed).abs().max()) < 1e-10
        assert torch.linalg.matrix_rank(mixed, atol=1e-8) == 1

    def test_basis_mismatch(self):
        """Test that bases must agree."""
        basis = enumerate_basis(3, 1)
        psi = PureState(basis, torch.eye(3, dtype=torch.complex128)[0])
        with pytest.raises(DimensionError):
            apply(lift(ModeUnitary.identity(3), 2), psi)

    def test_non_unitary_rejected(self):
        """Test the subspace unitarity check."""
        from src.optics import SubspaceUnitary

        with pytest.raises(NormalizationError):
            SubspaceUnitary(enumerate_basis(2, 1), 2 * torch.eye(2, dtype=torch.complex128))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
