"""Operator matrices on Lagrange-Laguerre meshes and Hamiltonian assembly.

Matrices come in two modes.  ``Gauss`` evaluates the defining integral with
the quadrature rule attached to the mesh, which collapses multiplicative
operators to diagonal matrices and derivative operators to combinations of
basis-function derivatives at the nodes.  ``Exact`` returns the true
integral: closed forms are used for the sqrt-regularized family, and an
exactifying quadrature (a larger rule with a shifted weight exponent, chosen
so the integrand is exactly a polynomial times the weight) covers every
other case.

Sign convention: ``Kinetic`` stores the matrix of ``-d^2/dr^2`` and
``Kinetic2D`` the matrix of ``-(d^2/drho^2 + 1/(4 rho^2))``, so Hamiltonian
assembly adds every term with a positive coefficient.  All stored matrices
are unscaled; the builders apply ``h**-2`` to derivative terms, ``h**p`` to
power terms, and evaluate potentials at ``h * r_i``.
"""

from __future__ import annotations

import dataclasses
import enum
import functools

import numpy as np

from .basis import (
    Family,
    MeshSpec,
    _family_power,
    _node_derivative_matrices,
    _prefactors,
    _weighted_cardinal_all,
)
from .potentials import evaluate as evaluate_potential
from .quadrature import generate_rule

__all__ = [
    "Classification",
    "HamiltonianVariant",
    "Mode",
    "OperatorMatrix",
    "Variant2D",
    "centrifugal_matrix",
    "classify_singularity",
    "ddr_matrix",
    "exact_element_oracle",
    "hamiltonian_2d",
    "hamiltonian_3d",
    "kinetic2d_matrix",
    "kinetic_matrix",
    "overlap_matrix",
    "potential_matrix",
    "power_matrix",
]

_ORACLE_EXTRA_ORDER = 10
_ORACLE_TAGS = ("Overlap", "InvR", "InvR2", "R", "R2", "DDr", "Kinetic", "Kinetic2D")


class Mode(enum.Enum):
    Exact = "Exact"
    Gauss = "Gauss"


class HamiltonianVariant(enum.Enum):
    """Evaluation schemes for the 3D radial Hamiltonian.

    ``Var`` is the variational reference: every matrix element exact.
    ``RegSqrtMesh`` and ``RegRMesh`` are mesh calculations with all terms at
    the Gauss approximation.  ``NonReg`` uses Gauss for the potential and
    centrifugal terms only; ``NonRegVG`` restricts Gauss to the potential.
    """

    Var = "Var"
    RegSqrtMesh = "RegSqrtMesh"
    RegRMesh = "RegRMesh"
    NonReg = "NonReg"
    NonRegVG = "NonRegVG"


class Variant2D(enum.Enum):
    Var2D = "Var2D"
    RegSqrtMesh2D = "RegSqrtMesh2D"


class Classification(enum.Enum):
    AccuracyLoss = "AccuracyLoss"
    Safe = "Safe"


@dataclasses.dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """An N x N operator matrix with its evaluation mode and provenance."""

    values: np.ndarray
    mode: Mode
    tag: str
    mesh: MeshSpec


def _coerce(enum_cls, value):
    if isinstance(value, str):
        try:
            return enum_cls[value]
        except KeyError:
            raise ValueError(f"unknown {enum_cls.__name__}: {value!r}") from None
    if not isinstance(value, enum_cls):
        raise ValueError(f"unknown {enum_cls.__name__}: {value!r}")
    return value


def _sign_grid(N):
    ij = np.arange(N)
    return (-1.0) ** np.abs(ij[:, None] - ij[None, :])


# ---------------------------------------------------------------------------
# exactifying-quadrature oracle

def _operator_components(kind, p):
    """Decomposition of f_i * (O f_j) over weighted-cardinal products.

    With psi_j the cardinal-ratio polynomial and W_j^{(d)} its d-th
    derivative times e^{-x/2} (the arrays the basis module evaluates), each
    supported operator satisfies
    f_i (O f_j) = B_i B_j sum_t c_t W_i^{(0)} W_j^{(d_t)} x^{2p + e_t}.
    Entries are (d, e, c); zero coefficients are dropped.  The minimal
    power 2p + e decides integrability and the oracle's weight exponent.
    Singular 1/x^2 coefficients are formed analytically here, so the cases
    where they vanish (p(p-1) at p in {0,1}; (p-1/2)^2 at p=1/2) drop out
    exactly instead of by numerical cancellation.
    """
    if kind == "Overlap":
        comps = [(0, 0, 1.0)]
    elif kind == "InvR":
        comps = [(0, -1, 1.0)]
    elif kind == "InvR2":
        comps = [(0, -2, 1.0)]
    elif kind == "R":
        comps = [(0, 1, 1.0)]
    elif kind == "R2":
        comps = [(0, 2, 1.0)]
    elif kind == "DDr":
        comps = [(1, 0, 1.0), (0, -1, p), (0, 0, -0.5)]
    elif kind == "Kinetic":
        comps = [
            (2, 0, -1.0),
            (1, -1, -2.0 * p),
            (1, 0, 1.0),
            (0, -2, -(p * p - p)),
            (0, -1, p),
            (0, 0, -0.25),
        ]
    elif kind == "Kinetic2D":
        comps = [
            (2, 0, -1.0),
            (1, -1, -2.0 * p),
            (1, 0, 1.0),
            (0, -2, -((p - 0.5) ** 2)),
            (0, -1, p),
            (0, 0, -0.25),
        ]
    else:
        raise ValueError(f"unknown operator tag: {kind!r}")
    return [(d, e, c) for d, e, c in comps if c != 0.0]


@functools.lru_cache(maxsize=None)
def _oracle_matrix(mesh, kind):
    """Exact matrix of an operator, by quadrature that is exact by design.

    After factoring out ``e^{-x}``, the integrand of every supported
    operator/family pair is ``x^mu`` times a polynomial of degree at most
    2N; a rule of order N + 10 with weight exponent mu integrates that
    without error.  Combinations whose integrand diverges at the origin
    (mu <= -1) are rejected.
    """
    p = _family_power(mesh.family, mesh.alpha)
    comps = _operator_components(kind, p)
    mu = min(2.0 * p + e for _, e, _ in comps)
    if mu <= -1.0 + 1e-12:
        raise ValueError(
            f"divergent integral: {kind} on family {mesh.family.name} with alpha={mesh.alpha}"
        )
    rule = generate_rule(mesh.N + _ORACLE_EXTRA_ORDER, mu)
    x = rule.nodes
    lam = rule.weights
    pw = _weighted_cardinal_all(mesh, x)
    pref = _prefactors(mesh)
    values = np.zeros((mesh.N, mesh.N))
    for d, e, c in comps:
        values += c * np.einsum("k,ik,jk->ij", lam * x ** (2.0 * p + e), pw[0], pw[d])
    values *= np.outer(pref, pref)
    if kind == "DDr":
        return values  # antisymmetric; no symmetrization
    return 0.5 * (values + values.T)


def exact_element_oracle(mesh, tag, i, j):
    """Exact matrix element (1-based indices) by exactifying quadrature.

    Supported tags: Overlap, InvR, InvR2, R, R2, DDr, Kinetic, Kinetic2D.
    """
    if tag not in _ORACLE_TAGS:
        raise ValueError(f"unknown operator tag: {tag!r}")
    if not (1 <= i <= mesh.N and 1 <= j <= mesh.N):
        raise ValueError(f"indices must be in 1..{mesh.N}")
    return float(_oracle_matrix(mesh, tag)[i - 1, j - 1])


# ---------------------------------------------------------------------------
# individual operator matrices

def overlap_matrix(mesh, mode=Mode.Gauss):
    """Overlap matrix.  Identity at the Gauss approximation for every
    family; the exact overlap differs from the identity only for RegR."""
    mode = _coerce(Mode, mode)
    if mode is Mode.Gauss or mesh.family in (Family.NonReg, Family.RegSqrt):
        values = np.eye(mesh.N)
    else:
        values = _oracle_matrix(mesh, "Overlap")
    return OperatorMatrix(values, mode, "Overlap", mesh)


def power_matrix(mesh, p, mode=Mode.Gauss):
    """Matrix of r**p for p in {-2, -1, 1, 2} (unscaled coordinates).

    Gauss mode is diagonal for every family.  Exact mode uses the compact
    closed forms on the RegSqrt family and the oracle elsewhere.
    """
    mode = _coerce(Mode, mode)
    if p not in (-2, -1, 1, 2):
        raise ValueError("p must be one of -2, -1, 1, 2")
    tag = {-2: "InvR2", -1: "InvR", 1: "R", 2: "R2"}[p]
    r = mesh.nodes
    N = mesh.N
    if mode is Mode.Gauss:
        return OperatorMatrix(np.diag(r ** float(p)), mode, tag, mesh)
    if mesh.family is not Family.RegSqrt:
        return OperatorMatrix(_oracle_matrix(mesh, tag), mode, tag, mesh)
    alpha = mesh.alpha
    if p == -2:
        if alpha == 0.0:
            raise ValueError("matrix of 1/r^2 diverges on the RegSqrt family at alpha=0")
        values = np.diag(r**-2.0) + _sign_grid(N) / (alpha * np.outer(r, r))
    elif p == -1:
        values = np.diag(1.0 / r)
    elif p == 1:
        values = np.diag(r) + _sign_grid(N)
    else:
        values = np.diag(r**2.0) + _sign_grid(N) * (2.0 * N + alpha + 1.0 + r[:, None] + r[None, :])
    return OperatorMatrix(values, mode, tag, mesh)


def kinetic_matrix(mesh, mode=Mode.Gauss):
    """Matrix of -d^2/dr^2 (unscaled coordinates).

    RegSqrt has closed forms; the Gauss value drops the correcting term
    proportional to (1 - alpha^2)/alpha, which vanishes at alpha = 1.  The
    other families use the oracle in Exact mode and node derivative values
    in Gauss mode.
    """
    mode = _coerce(Mode, mode)
    if mesh.family is Family.RegSqrt:
        r = mesh.nodes
        N, alpha = mesh.N, mesh.alpha
        if mode is Mode.Exact and alpha == 0.0:
            raise ValueError("exact -d^2/dr^2 diverges on the RegSqrt family at alpha=0")
        with np.errstate(divide="ignore"):
            off = 2.0 / (r[:, None] - r[None, :]) ** 2
        diag = (2.0 * (2.0 * N + alpha + 1.0) - r + (1.0 - alpha**2) / r) / (12.0 * r)
        if mode is Mode.Exact:
            off = off + (1.0 - alpha**2) / (4.0 * alpha * np.outer(r, r))
            diag = diag + 3.0 * (1.0 - alpha**2) / (alpha * 12.0 * r**2)
        values = _sign_grid(N) * off
        np.fill_diagonal(values, diag)
        return OperatorMatrix(values, mode, "Kinetic", mesh)
    if mode is Mode.Exact:
        return OperatorMatrix(_oracle_matrix(mesh, "Kinetic"), mode, "Kinetic", mesh)
    return OperatorMatrix(_gauss_kinetic_from_nodes(mesh), mode, "Kinetic", mesh)


@functools.lru_cache(maxsize=None)
def _gauss_kinetic_from_nodes(mesh):
    """Gauss-quadrature kinetic matrix from node derivative values,
    symmetrized (the raw quadrature of f_i f_j'' is not symmetric in i, j
    because the integrand is not; its symmetric part is the approximation
    of the symmetric operator)."""
    _, d2 = _node_derivative_matrices(mesh)
    lam = mesh.weights
    raw = -np.sqrt(lam)[:, None] * d2
    return 0.5 * (raw + raw.T)


def ddr_matrix(mesh):
    """Matrix of d/dr on the RegSqrt family: exact at the Gauss quadrature,
    zero diagonal, antisymmetric off-diagonal part."""
    if mesh.family is not Family.RegSqrt:
        raise ValueError("d/dr closed form is defined for the RegSqrt family only")
    r = mesh.nodes
    with np.errstate(divide="ignore"):
        values = _sign_grid(mesh.N) / (r[:, None] - r[None, :])
    np.fill_diagonal(values, 0.0)
    return OperatorMatrix(values, Mode.Exact, "DDr", mesh)


def kinetic2d_matrix(mesh, mode=Mode.Gauss):
    """Matrix of the combined operator -(d^2/drho^2 + 1/(4 rho^2)).

    On the RegSqrt family with alpha = 0 (the 2D mesh) the Gauss value is
    exact and has a closed form, even though the two pieces diverge
    separately.  Other meshes fall back to the oracle (Exact) or node
    values (Gauss).
    """
    mode = _coerce(Mode, mode)
    if mesh.family is Family.RegSqrt and mesh.alpha == 0.0:
        r = mesh.nodes
        N = mesh.N
        with np.errstate(divide="ignore"):
            values = _sign_grid(N) * 2.0 / (r[:, None] - r[None, :]) ** 2
        np.fill_diagonal(values, (2.0 * (2.0 * N + 1.0) - r - 2.0 / r) / (12.0 * r))
        return OperatorMatrix(values, mode, "Kinetic2D", mesh)
    if mode is Mode.Exact:
        return OperatorMatrix(_oracle_matrix(mesh, "Kinetic2D"), mode, "Kinetic2D", mesh)
    values = _gauss_kinetic_from_nodes(mesh) - np.diag(0.25 / mesh.nodes**2)
    return OperatorMatrix(values, mode, "Kinetic2D", mesh)


def centrifugal_matrix(mesh, l, mode=Mode.Gauss):
    """Matrix of l(l+1)/r^2 (unscaled; the builder scales by 1/(2 h^2))."""
    mode = _coerce(Mode, mode)
    l = int(l)
    if l < 0:
        raise ValueError("l must be nonnegative")
    coeff = l * (l + 1.0)
    if coeff == 0.0:
        values = np.zeros((mesh.N, mesh.N))
    else:
        values = coeff * power_matrix(mesh, -2, mode).values
    return OperatorMatrix(values, mode, f"Centrifugal({l})", mesh)


def potential_matrix(mesh, V, mode=Mode.Gauss):
    """Matrix of a potential on the scaled mesh (this one includes the h
    scaling, since potentials are functions of the physical radius).

    Gauss mode is diagonal with entries V(h r_i).  Exact mode is available
    when every term of the potential is a pure power r**p with p in
    {-2, -1, 1, 2}; other shapes have no exact quadrature and raise.
    """
    mode = _coerce(Mode, mode)
    if mode is Mode.Gauss:
        values = np.diag(evaluate_potential(V, mesh.scaled_nodes))
        return OperatorMatrix(values, mode, f"Potential({V.label})", mesh)
    if V.coulomb_erf is not None or V.eckart is not None:
        raise ValueError(f"potential {V.label!r} has no exact matrix elements")
    values = np.zeros((mesh.N, mesh.N))
    for c, p, a, b in V.terms:
        if a != 0.0 or b != 0.0 or p not in (-2.0, -1.0, 1.0, 2.0):
            raise ValueError(f"potential {V.label!r} has no exact matrix elements")
        values += c * mesh.h**p * power_matrix(mesh, int(p), Mode.Exact).values
    return OperatorMatrix(values, mode, f"Potential({V.label})", mesh)


# ---------------------------------------------------------------------------
# Hamiltonian assembly

_VARIANT_FAMILY = {
    HamiltonianVariant.Var: Family.RegSqrt,
    HamiltonianVariant.RegSqrtMesh: Family.RegSqrt,
    HamiltonianVariant.RegRMesh: Family.RegR,
    HamiltonianVariant.NonReg: Family.NonReg,
    HamiltonianVariant.NonRegVG: Family.NonReg,
}

# per-variant evaluation modes: (kinetic, centrifugal, potential)
_VARIANT_MODES = {
    HamiltonianVariant.Var: (Mode.Exact, Mode.Exact, Mode.Exact),
    HamiltonianVariant.RegSqrtMesh: (Mode.Gauss, Mode.Gauss, Mode.Gauss),
    HamiltonianVariant.RegRMesh: (Mode.Gauss, Mode.Gauss, Mode.Gauss),
    HamiltonianVariant.NonReg: (Mode.Exact, Mode.Gauss, Mode.Gauss),
    HamiltonianVariant.NonRegVG: (Mode.Exact, Mode.Exact, Mode.Gauss),
}


def hamiltonian_3d(mesh, l, V, variant):
    """Hamiltonian and overlap matrices for the 3D radial equation
    (-1/2 d^2/dr^2 + l(l+1)/(2 r^2) + V) in the chosen evaluation scheme.

    Returns
    -------
    (OperatorMatrix, OperatorMatrix)
        Scaled Hamiltonian H and overlap S.
    """
    variant = _coerce(HamiltonianVariant, variant)
    l = int(l)
    if l < 0:
        raise ValueError("l must be nonnegative")
    if mesh.N <= l:
        raise ValueError(f"N must exceed l (got N={mesh.N}, l={l})")
    want = _VARIANT_FAMILY[variant]
    if mesh.family is not want:
        raise ValueError(f"variant {variant.name} requires family {want.name}")
    t_mode, c_mode, v_mode = _VARIANT_MODES[variant]
    h = mesh.h
    values = kinetic_matrix(mesh, t_mode).values / (2.0 * h**2)
    if l > 0:
        values = values + centrifugal_matrix(mesh, l, c_mode).values / (2.0 * h**2)
    values = values + potential_matrix(mesh, V, v_mode).values
    s_mode = Mode.Exact if variant is HamiltonianVariant.Var else Mode.Gauss
    S = overlap_matrix(mesh, s_mode)
    H = OperatorMatrix(values, t_mode, f"H3D(l={l},{V.label},{variant.name})", mesh)
    return H, S


def hamiltonian_2d(mesh, m, V, variant):
    """Hamiltonian and overlap matrices for the 2D radial equation
    (-1/2 [d^2/drho^2 + 1/(4 rho^2)] + m^2/(2 rho^2) + V).

    The mesh scheme (RegSqrtMesh2D) works on the given RegSqrt alpha=0 mesh
    with the combined closed form plus Gauss-approximated m-term and
    potential.  The variational scheme (Var2D) is built, from the same mesh
    argument, on a basis of N-1 functions with alpha=2 and exact elements
    throughout.
    """
    variant = _coerce(Variant2D, variant)
    m = int(m)
    if m < 0:
        raise ValueError("m must be nonnegative")
    if mesh.N <= m:
        raise ValueError(f"N must exceed m (got N={mesh.N}, m={m})")
    if mesh.family is not Family.RegSqrt or mesh.alpha != 0.0:
        raise ValueError("2D schemes require a RegSqrt mesh with alpha=0")
    h = mesh.h
    if variant is Variant2D.RegSqrtMesh2D:
        basis_mesh = mesh
        values = kinetic2d_matrix(mesh, Mode.Gauss).values / (2.0 * h**2)
        if m > 0:
            values = values + np.diag(m**2 / (2.0 * (h * mesh.nodes) ** 2))
        values = values + potential_matrix(mesh, V, Mode.Gauss).values
        s_mode = Mode.Gauss
    else:
        basis_mesh = MeshSpec(mesh.N - 1, 2.0, Family.RegSqrt, h)
        values = kinetic2d_matrix(basis_mesh, Mode.Exact).values / (2.0 * h**2)
        if m > 0:
            values = values + (m**2 / 2.0) * power_matrix(basis_mesh, -2, Mode.Exact).values / h**2
        values = values + potential_matrix(basis_mesh, V, Mode.Exact).values
        s_mode = Mode.Exact
    S = overlap_matrix(basis_mesh, s_mode)
    H = OperatorMatrix(values, s_mode, f"H2D(m={m},{V.label},{variant.name})", basis_mesh)
    return H, S


def classify_singularity(family, alpha, l_or_m, s, dimension="3D"):
    """Predict whether a Gauss-approximated operator costs accuracy.

    The Gauss error is governed by the origin exponent of
    ``f_i (O phi)/w`` with ``phi`` the exact solution: the basis leading
    power, plus the solution's origin power (l+1 in 3D, m+1/2 in 2D), minus
    the operator's inverse power s, minus the weight exponent alpha.  A
    negative exponent means a singular quotient and an accuracy loss.
    """
    family = _coerce(Family, family)
    if s not in (0, 1, 2):
        raise ValueError("s must be 0, 1, or 2")
    if dimension not in ("3D", "2D"):
        raise ValueError("dimension must be '3D' or '2D'")
    b = _family_power(family, float(alpha))
    origin = l_or_m + 1.0 if dimension == "3D" else l_or_m + 0.5
    e = b + origin - s - float(alpha)
    return Classification.AccuracyLoss if e < 0.0 else Classification.Safe
