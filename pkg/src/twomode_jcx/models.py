"""Two-mode spin-boson models and their spinor eigenstates.

Two Hamiltonians on (two-level system) x (two bosonic modes):

    JC_AJC:  H = hbar [sigma_- (g a† + f b) + sigma_+ (g* a + f* b†)] + mc² sigma_z
    JC_JC:   H = hbar [sigma_- (g a† + f b†) + sigma_+ (g* a + f* b)] + mc² sigma_z

Writing the coupling block X (upper-right: X = g a† + f b or g a† + f b†),
the components of an eigenspinor (psi1, psi2) with energy E satisfy

    hbar X psi2 = (E - mc²) psi1,     hbar X† psi1 = (E + mc²) psi2,

so psi1 is an eigenvector of the second-order operator hbar² X X† and psi2
of hbar² X† X, both with eigenvalue E² - m²c⁴. X X† conserves the number
difference N_d for JC_AJC and the total number N_s for JC_JC, which makes
each charge sector an independent tridiagonal eigenproblem.

Both second-order operators are built as products of the hard-truncated
ladder matrices, so the block identity KG_upper = hbar² X X† holds exactly
at finite cutoff (boundary rows included).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .errors import (
    DomainError,
    EdgeStateError,
    SectorMismatchError,
    SingularBranchError,
)
from .fock import (
    ChargeKind,
    FockBasis,
    LadderKind,
    Mode,
    OperatorMatrix,
    SectorBasis,
    get_sector,
    ladder_op,
    project_operator,
)

EDGE_REL_TOL = 1e-12


class ModelKind(Enum):
    JC_AJC = "jc-ajc"  # su(1,1) symmetry, conserves N_d
    JC_JC = "jc-jc"  # su(2) symmetry, conserves N_s


class Component(Enum):
    UPPER = "upper"
    LOWER = "lower"


class Branch(Enum):
    PLUS = 1
    MINUS = -1


def conserved_charge(kind: ModelKind) -> ChargeKind:
    return ChargeKind.DIFFERENCE_ND if kind is ModelKind.JC_AJC else ChargeKind.SUM_NS


@dataclass(frozen=True)
class ModelParams:
    """Complex couplings (angular-frequency units), rest energy, hbar."""

    g: complex
    f: complex
    mc2: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.mc2 <= 0:
            raise ValueError("mc2 must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class SpinorState:
    """Normalized two-component eigenstate over a FockBasis.

    ``edge`` marks one-component states whose partner component vanishes
    identically (|E| = mc²); ``partner_qn`` carries the relabeling of the
    lower component when it stays inside the (n_l >= 0, m_n >= 0) domain.
    """

    upper: np.ndarray
    lower: np.ndarray
    energy: float
    branch: Branch
    qn: tuple
    kind: ModelKind
    edge: bool = False
    partner_qn: tuple | None = None

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.upper) ** 2) + np.sum(np.abs(self.lower) ** 2)))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.upper, self.lower])


# Densify composed operators below this dimension; keeps eigvalsh and
# np.block convenient at desk scale while large bases stay sparse.
DENSE_RESULT_DIM = 2048


def coupling_block(kind: ModelKind, p: ModelParams, basis: FockBasis) -> OperatorMatrix:
    """Upper-right block X of the full Hamiltonian (without the hbar).

    Built sparse regardless of basis size: X and the second-order products
    X X†, X† X have a bounded number of entries per column.
    """
    a_dag = ladder_op(Mode.A, LadderKind.RAISE, basis, storage="sparse")
    if kind is ModelKind.JC_AJC:
        b_or_bdag = ladder_op(Mode.B, LadderKind.LOWER, basis, storage="sparse")
    else:
        b_or_bdag = ladder_op(Mode.B, LadderKind.RAISE, basis, storage="sparse")
    return p.g * a_dag + p.f * b_or_bdag


def build_full_hamiltonian(kind: ModelKind, p: ModelParams, basis: FockBasis) -> OperatorMatrix:
    """Full 2 dim(basis) Hamiltonian in (upper, lower) block order."""
    x = coupling_block(kind, p, basis).data
    dim = basis.dim
    hx = p.hbar * x
    eye = sp.identity(dim, dtype=complex, format="csr")
    h = sp.bmat(
        [[p.mc2 * eye, hx], [hx.conjugate().transpose(), -p.mc2 * eye]],
        format="csr",
    )
    if 2 * dim <= DENSE_RESULT_DIM:
        return OperatorMatrix(np.asarray(h.todense()), 2 * dim)
    return OperatorMatrix(h, 2 * dim)


def build_kg_operator(
    kind: ModelKind,
    component: Component,
    p: ModelParams,
    basis_or_sector,
) -> OperatorMatrix:
    """Second-order operator whose eigenvalues are E² - m²c⁴.

    Upper component: hbar² X X†; lower component: hbar² X† X. Passing a
    SectorBasis restricts to that charge sector (SectorMismatchError when
    the sector charge does not match the model's conserved quantity).
    """
    if isinstance(basis_or_sector, SectorBasis):
        sector = basis_or_sector
        if sector.charge_kind is not conserved_charge(kind):
            raise SectorMismatchError(
                f"{kind.value} conserves {conserved_charge(kind).value}, "
                f"got a {sector.charge_kind.value} sector"
            )
        from .fock import build_basis

        basis = build_basis(sector.parent_cutoff)
        full = build_kg_operator(kind, component, p, basis)
        return project_operator(full, sector)

    basis = basis_or_sector
    x = coupling_block(kind, p, basis)
    xd = x.dagger()
    kg = x @ xd if component is Component.UPPER else xd @ x
    kg = (p.hbar**2) * kg
    if kg.basis_dim <= DENSE_RESULT_DIM and kg.is_sparse:
        return OperatorMatrix(np.asarray(kg.data.todense()), kg.basis_dim)
    return kg


def lower_from_upper(
    kind: ModelKind,
    p: ModelParams,
    energy: float,
    upper: np.ndarray,
    basis: FockBasis,
) -> np.ndarray:
    """psi2 = hbar X† psi1 / (E + mc²), unnormalized."""
    if abs(energy + p.mc2) <= EDGE_REL_TOL * p.mc2:
        raise SingularBranchError("lower component not reconstructible at E = -mc^2")
    xd = coupling_block(kind, p, basis).dagger()
    return p.hbar * (xd.apply(np.asarray(upper, dtype=complex))) / (energy + p.mc2)


def _tilted_state_position(kind: ModelKind, n_l: int, m_n: int, inner_sign: int):
    """(sector charge, position of the tilted number state inside it)."""
    if kind is ModelKind.JC_AJC:
        # Sector N_d = -m_n holds states (n + m_n, n); position = n_l.
        return -m_n, n_l
    if inner_sign >= 0:
        # mu = +m_n/2: state (n_l + m_n, n_l), position = n_a.
        return 2 * n_l + m_n, n_l + m_n
    # mu = -m_n/2: state (n_l, n_l + m_n).
    return 2 * n_l + m_n, n_l


def build_spinor(
    kind: ModelKind,
    p: ModelParams,
    n_l: int,
    m_n: int,
    branch: Branch,
    basis: FockBasis,
    inner_sign: int = 1,
) -> SpinorState:
    """Eigenspinor with the analytic energy of the (n_l, m_n) level.

    The upper component is the tilted number state mapped back by the
    displacement operator; the lower component follows exactly from the
    coupled first-order equation, which fixes its phase and gives the
    amplitude split |upper|² = (E + mc²)/2E, |lower|² = (E - mc²)/2E.

    The coupling moves one charge quantum, so the lower component is the
    displaced number state of the adjacent sector (one angular quantum
    down). ``partner_qn`` instead records the (n_l+1, m_n-2) / (n_l-1, m_n)
    relabeling conventionally quoted with these spinors, which reproduces
    the same energy; it is spectral bookkeeping, not the state mapping.

    At |E| = mc² the partner component vanishes identically: the PLUS
    branch returns a flagged one-component spinor, the MINUS branch has no
    eigenvector with these labels and raises EdgeStateError.
    """
    from . import spectra
    from .liealg import su11_generators, su2_generators
    from .displace import displacement_direct

    if n_l < 0 or m_n < 0:
        raise DomainError("n_l and m_n must be nonnegative")

    if kind is ModelKind.JC_AJC:
        level = spectra.analytic_energy_su11(p, n_l, m_n, branch)
    else:
        level = spectra.analytic_energy_su2(p, n_l, m_n, branch, inner_sign)
    energy = level.energy

    tilt = spectra.tilting_parameters(kind, p)
    charge, pos = _tilted_state_position(kind, n_l, m_n, inner_sign)
    sector = get_sector(basis, conserved_charge(kind), charge)
    if pos >= sector.dim:
        raise DomainError(
            f"state (n_l={n_l}, m_n={m_n}) exceeds the cutoff-{basis.cutoff} sector"
        )
    gens = su11_generators(basis) if kind is ModelKind.JC_AJC else su2_generators(basis)
    d = displacement_direct(gens, tilt.xi, sector).dense()
    upper = sector.embed(d[:, pos], basis.dim)

    if kind is ModelKind.JC_AJC:
        partner = (n_l + 1, m_n - 2) if m_n >= 2 else None
    else:
        partner = (n_l - 1, m_n) if n_l >= 1 else None

    if abs(energy**2 - p.mc2**2) <= EDGE_REL_TOL * p.mc2**2:
        if branch is Branch.MINUS:
            raise EdgeStateError(
                f"(n_l={n_l}, m_n={m_n}) has no lower-branch eigenvector of this form"
            )
        return SpinorState(
            upper=upper / np.linalg.norm(upper),
            lower=np.zeros_like(upper),
            energy=p.mc2,
            branch=branch,
            qn=(n_l, m_n),
            kind=kind,
            edge=True,
            partner_qn=partner,
        )

    lower_raw = lower_from_upper(kind, p, energy, upper, basis)
    amp = np.sqrt((energy + p.mc2) / (2.0 * energy))
    vec_upper = amp * upper
    vec_lower = amp * lower_raw
    norm = np.sqrt(np.sum(np.abs(vec_upper) ** 2) + np.sum(np.abs(vec_lower) ** 2))
    return SpinorState(
        upper=vec_upper / norm,
        lower=vec_lower / norm,
        energy=energy,
        branch=branch,
        qn=(n_l, m_n),
        kind=kind,
        edge=False,
        partner_qn=partner,
    )


def eigen_residual(h_full: OperatorMatrix, state: SpinorState) -> float:
    """|| H psi - E psi || for a spinor over the same basis."""
    vec = state.as_vector()
    return float(np.linalg.norm(h_full.apply(vec) - state.energy * vec))
