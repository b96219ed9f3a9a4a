"""Tests for the eigensolver layer: spectra, pseudostates, relative errors."""

import math

import numpy as np
import pytest

from lagmesh.basis import Family, MeshSpec
from lagmesh.matelem import (
    HamiltonianVariant,
    Mode,
    OperatorMatrix,
    hamiltonian_3d,
    kinetic_matrix,
    overlap_matrix,
    potential_matrix,
)
from lagmesh.potentials import builtin
from lagmesh.solver import pseudostates, relative_error, solve_bound_states


def _trivial_pair(values, n=None):
    n = n or values.shape[0]
    mesh = MeshSpec(n, 1.0, Family.RegSqrt, 1.0)
    H = OperatorMatrix(values, Mode.Gauss, "test", mesh)
    S = OperatorMatrix(np.eye(n), Mode.Gauss, "Overlap", mesh)
    return H, S


class TestSolveBoundStates:
    def test_diagonal_matrix(self):
        H, S = _trivial_pair(np.diag([1.0, 2.0, 3.0]))
        spec = solve_bound_states(H, S)
        assert np.allclose(spec.energies, [1.0, 2.0, 3.0], atol=1e-15)
        assert np.allclose(spec.coefficients, np.eye(3), atol=1e-15)

    def test_oscillator_p_wave_variational(self):
        mesh = MeshSpec(20, 1.0, Family.RegSqrt, 0.09)
        H, S = hamiltonian_3d(mesh, 1, builtin("harmonic"), HamiltonianVariant.Var)
        spec = solve_bound_states(H, S)
        assert abs(spec.energies[0] - 2.5) / 2.5 <= 1e-10
        assert spec.variant == "Var"
        assert spec.angular == 1

    def test_coulomb_d_wave_on_r_regularized_mesh(self):
        mesh = MeshSpec(10, 0.0, Family.RegR, 0.9)
        H, S = hamiltonian_3d(mesh, 2, builtin("coulomb"), "RegRMesh")
        spec = solve_bound_states(H, S)
        eps = relative_error(spec.energies[0], -1.0 / 18.0)
        assert 2.3e-6 / 2 <= abs(eps) <= 2.3e-6 * 2

    def test_degenerate_ties_ordered_by_first_coefficient(self):
        H, S = _trivial_pair(np.eye(4))
        spec = solve_bound_states(H, S)
        assert np.allclose(spec.energies, 1.0)
        assert np.allclose(spec.coefficients, np.eye(4), atol=1e-15)

    def test_asymmetric_hamiltonian_rejected(self):
        values = np.array([[1.0, 2.0], [0.0, 1.0]])
        H, S = _trivial_pair(values)
        with pytest.raises(ValueError, match="symmetric"):
            solve_bound_states(H, S)

    def test_ill_conditioned_overlap_rejected(self):
        H, S = _trivial_pair(np.eye(3))
        bad = np.diag([1.0, 1.0, 1e-16])
        S = OperatorMatrix(bad, Mode.Exact, "Overlap", S.mesh)
        with pytest.raises(ValueError, match="ill-conditioned"):
            solve_bound_states(H, S)

    def test_deterministic_repeat(self):
        mesh = MeshSpec(12, 1.0, Family.RegSqrt, 0.2)
        H, S = hamiltonian_3d(mesh, 0, builtin("coulomb"), "RegSqrtMesh")
        a = solve_bound_states(H, S)
        b = solve_bound_states(H, S)
        assert np.array_equal(a.energies, b.energies)
        assert np.array_equal(a.coefficients, b.coefficients)

    def test_generalized_problem_orthonormality(self):
        # exact overlap on the r-regularized family is far from identity
        mesh = MeshSpec(8, 0.0, Family.RegR, 0.4)
        Hv = kinetic_matrix(mesh, Mode.Exact).values / (2 * mesh.h**2)
        Hv = Hv + potential_matrix(mesh, builtin("harmonic"), Mode.Gauss).values
        H = OperatorMatrix(Hv, Mode.Exact, "custom", mesh)
        S = overlap_matrix(mesh, Mode.Exact)
        spec = solve_bound_states(H, S)
        gram = spec.coefficients.T @ S.values @ spec.coefficients
        assert np.abs(gram - np.eye(8)).max() <= 1e-10

    def test_normalization_and_residual_invariants(self):
        mesh = MeshSpec(15, 1.0, Family.RegSqrt, 0.3)
        H, S = hamiltonian_3d(mesh, 0, builtin("harmonic"), "Var")
        spec = solve_bound_states(H, S)
        for j in range(15):
            c = spec.coefficients[:, j]
            assert abs(c @ S.values @ c - 1.0) <= 1e-12
            res = H.values @ c - spec.energies[j] * (S.values @ c)
            assert np.linalg.norm(res) <= 1e-9 * np.linalg.norm(H.values)

    def test_variational_bound_on_analytic_spectra(self):
        # lowest three states stay at or above the analytic energies
        mesh = MeshSpec(20, 1.0, Family.RegSqrt, 0.2)
        for V, exact in [
            (builtin("harmonic"), [1.5, 3.5, 5.5]),
            (builtin("coulomb"), [-0.5, -0.125, -1.0 / 18.0]),
        ]:
            H, S = hamiltonian_3d(mesh, 0, V, "Var")
            spec = solve_bound_states(H, S)
            for j, e_exact in enumerate(exact):
                assert relative_error(spec.energies[j], e_exact) >= -1e-12

    def test_eigenvalues_interlace_with_growing_basis(self):
        # variational eigenvalues are non-increasing as N grows
        prev = None
        for N in range(10, 16):
            mesh = MeshSpec(N, 1.0, Family.RegSqrt, 0.9)
            H, S = hamiltonian_3d(mesh, 0, builtin("coulomb"), "Var")
            spec = solve_bound_states(H, S)
            lowest = spec.energies[:3]
            if prev is not None:
                assert np.all(lowest <= prev + 1e-13)
            prev = lowest


class TestPseudostates:
    def test_eckart_first_pseudostate_sqrt_mesh(self):
        mesh = MeshSpec(15, 1.0, Family.RegSqrt, 0.1)
        H, S = hamiltonian_3d(mesh, 0, builtin("eckart"), "RegSqrtMesh")
        states = pseudostates(solve_bound_states(H, S))
        assert states[0].energy == pytest.approx(0.1982139, abs=1e-6)
        assert states[0].k == pytest.approx(math.sqrt(2 * states[0].energy))

    def test_eckart_first_pseudostate_r_mesh(self):
        mesh = MeshSpec(15, 0.0, Family.RegR, 0.1)
        H, S = hamiltonian_3d(mesh, 0, builtin("eckart"), "RegRMesh")
        states = pseudostates(solve_bound_states(H, S))
        assert states[0].energy == pytest.approx(0.2145073, abs=1e-6)

    def test_alpha_alpha_d_wave_first_pseudostate(self):
        V = builtin("buck_alpha_alpha")
        mesh = MeshSpec(15, 1.0, Family.RegSqrt, 0.23)
        H, S = hamiltonian_3d(mesh, 2, V, "RegSqrtMesh")
        states = pseudostates(solve_bound_states(H, S))
        assert states[0].energy * V.energy_unit == pytest.approx(2.10795, abs=1e-4)

    def test_ascending_and_indexed(self):
        mesh = MeshSpec(12, 1.0, Family.RegSqrt, 0.1)
        H, S = hamiltonian_3d(mesh, 0, builtin("eckart"), "RegSqrtMesh")
        spec = solve_bound_states(H, S)
        states = pseudostates(spec)
        energies = [s.energy for s in states]
        assert energies == sorted(energies)
        for s in states:
            assert spec.energies[s.index] == s.energy

    def test_may_be_empty(self):
        H, S = _trivial_pair(np.diag([-3.0, -1.0]))
        assert pseudostates(solve_bound_states(H, S)) == ()


class TestRelativeError:
    def test_small_positive(self):
        assert relative_error(1.5 + 1e-10, 1.5) == pytest.approx(6.7e-11, rel=0.01)

    def test_accuracy_loss_case(self):
        assert relative_error(-0.4655, -0.5) == pytest.approx(0.069, rel=1e-10)

    def test_exact_match(self):
        assert relative_error(2.5, 2.5) == 0.0

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            relative_error(1.0, 0.0)
