"""Symmetric (generalized) eigensolves for mesh Hamiltonians.

The overlap matrix is the identity for every Gauss-mode scheme, so most
solves are standard symmetric eigenproblems; an exact RegR overlap makes
the problem generalized.  Results are deterministic: eigenvalues ascend,
ties are broken by the index of the first nonzero coefficient, and each
coefficient vector's sign is fixed by its largest component.
"""

from __future__ import annotations

import dataclasses
import math
import re

import numpy as np
from scipy.linalg import eigh

from .basis import MeshSpec

__all__ = [
    "BoundSpectrum",
    "Pseudostate",
    "pseudostates",
    "relative_error",
    "solve_bound_states",
]

_HAMILTONIAN_TAG = re.compile(r"^H[23]D\((?:l|m)=(\d+),.*,([A-Za-z0-9]+)\)$")


@dataclasses.dataclass(frozen=True, eq=False)
class BoundSpectrum:
    """Full spectrum of one Hamiltonian.

    ``coefficients[:, j]`` is the coefficient vector of state ``j``,
    normalized to c^T S c = 1.  ``variant`` and ``angular`` (l in 3D, m in
    2D) are recovered from the Hamiltonian's tag when it was produced by
    one of the builders, and are None otherwise.
    """

    energies: np.ndarray
    coefficients: np.ndarray
    mesh: MeshSpec
    variant: str | None
    angular: int | None


@dataclasses.dataclass(frozen=True)
class Pseudostate:
    """A positive-energy eigenstate with its wave number k = sqrt(2E)."""

    energy: float
    k: float
    index: int
    coefficients: np.ndarray


def solve_bound_states(H, S):
    """Solve H c = E S c for a symmetric Hamiltonian and S.P.D. overlap.

    Parameters
    ----------
    H, S : OperatorMatrix
        Assembled Hamiltonian and overlap on the same mesh.

    Returns
    -------
    BoundSpectrum

    Raises
    ------
    ValueError
        If H is not symmetric or the overlap is ill-conditioned
        (reciprocal condition estimate below 1e-14) or not positive
        definite.
    """
    A = np.asarray(H.values, dtype=float)
    B = np.asarray(S.values, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError("H and S must be square matrices of the same size")
    scale = max(1.0, np.abs(A).max())
    if np.abs(A - A.T).max() > 1e-10 * scale:
        raise ValueError("Hamiltonian matrix is not symmetric")
    if np.array_equal(B, np.eye(n)):
        energies, vectors = eigh(A)
    else:
        beig = np.linalg.eigvalsh(B)
        if beig[0] <= 0.0 or beig[0] < 1e-14 * beig[-1]:
            raise ValueError(
                "ill-conditioned basis: overlap matrix has reciprocal "
                f"condition estimate {beig[0] / beig[-1]:.2e}"
            )
        energies, vectors = eigh(A, B)
    # deterministic signs: largest-magnitude component positive
    pick = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pick, np.arange(n)])
    signs[signs == 0.0] = 1.0
    vectors = vectors * signs
    # ties ordered by first nonzero coefficient
    order = _tie_order(energies, vectors)
    energies = energies[order]
    vectors = vectors[:, order]
    variant = angular = None
    m = _HAMILTONIAN_TAG.match(H.tag)
    if m:
        angular = int(m.group(1))
        variant = m.group(2)
    return BoundSpectrum(energies, vectors, H.mesh, variant, angular)


def _tie_order(energies, vectors):
    n = len(energies)
    order = list(range(n))
    tol = 1e-14 * max(1.0, np.abs(energies).max())
    first_nonzero = np.argmax(np.abs(vectors) > 1e-12 * np.abs(vectors).max(axis=0), axis=0)
    i = 0
    while i < n:
        j = i + 1
        while j < n and abs(energies[order[j]] - energies[order[i]]) <= tol:
            j += 1
        if j - i > 1:
            order[i:j] = sorted(order[i:j], key=lambda k: first_nonzero[k])
        i = j
    return np.array(order)


def pseudostates(spectrum):
    """Positive-energy states of a spectrum, ascending, with k = sqrt(2E).

    Returns a tuple of Pseudostate (possibly empty).  ``index`` is the
    state's position in the full spectrum.
    """
    out = []
    for j, E in enumerate(spectrum.energies):
        if E > 0.0:
            out.append(
                Pseudostate(float(E), math.sqrt(2.0 * E), j, spectrum.coefficients[:, j])
            )
    return tuple(out)


def relative_error(e_app, e_exact):
    """Signed relative error (E_app - E_exact)/|E_exact|."""
    if e_exact == 0.0:
        raise ValueError("relative error is undefined for a zero reference energy")
    return (e_app - e_exact) / abs(e_exact)
