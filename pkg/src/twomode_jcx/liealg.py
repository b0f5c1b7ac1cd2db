"""Jordan-Schwinger realizations of su(1,1) and su(2) on two bosonic modes.

su(1,1):  K0 = (a†a + b†b + 1)/2,  K+ = a†b†,  K- = ba, with
[K0, K±] = ±K± and [K-, K+] = 2K0. The number difference N_d = b†b - a†a
commutes with all three generators and fixes the Bargmann index
k = (|N_d| + 1)/2 of each sector; the Casimir is K² = N_d²/4 - 1/4.

su(2):  J0 = (a†a - b†b)/2,  J+ = a†b,  J- = b†a, with [J0, J±] = ±J± and
[J+, J-] = 2J0. The total number N_s = a†a + b†b commutes with everything
and each N_s sector carries the spin-j representation with j = N_s/2;
the Casimir is J² = (N_s/2)(N_s/2 + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fock
from .errors import NonIntegerError
from .fock import (
    ChargeKind,
    FockBasis,
    LadderKind,
    Mode,
    OperatorMatrix,
    commutator,
)


class AlgebraKind(Enum):
    SU11 = "su11"
    SU2 = "su2"


@dataclass(frozen=True)
class Su11Generators:
    k0: OperatorMatrix
    k_plus: OperatorMatrix
    k_minus: OperatorMatrix
    basis: FockBasis

    @property
    def algebra(self) -> AlgebraKind:
        return AlgebraKind.SU11


@dataclass(frozen=True)
class Su2Generators:
    j0: OperatorMatrix
    j_plus: OperatorMatrix
    j_minus: OperatorMatrix
    basis: FockBasis

    @property
    def algebra(self) -> AlgebraKind:
        return AlgebraKind.SU2


def _densify_small(op: OperatorMatrix) -> OperatorMatrix:
    if op.is_sparse and op.basis_dim <= fock.DENSE_RESULT_DIM:
        return OperatorMatrix(op.dense(), op.basis_dim)
    return op


def su11_generators(basis: FockBasis) -> Su11Generators:
    # Compose through sparse ladders: the bilinears keep one entry per column.
    a = fock.ladder_op(Mode.A, LadderKind.LOWER, basis, storage="sparse")
    b = fock.ladder_op(Mode.B, LadderKind.LOWER, basis, storage="sparse")
    a_dag = fock.ladder_op(Mode.A, LadderKind.RAISE, basis, storage="sparse")
    b_dag = fock.ladder_op(Mode.B, LadderKind.RAISE, basis, storage="sparse")
    na = fock.number_op(Mode.A, basis, storage="sparse")
    nb = fock.number_op(Mode.B, basis, storage="sparse")
    k0 = 0.5 * (na + nb + fock.identity_op(basis, storage="sparse"))
    k_plus = a_dag @ b_dag
    k_minus = b @ a
    return Su11Generators(
        k0=_densify_small(k0),
        k_plus=_densify_small(k_plus),
        k_minus=_densify_small(k_minus),
        basis=basis,
    )


def su2_generators(basis: FockBasis) -> Su2Generators:
    a = fock.ladder_op(Mode.A, LadderKind.LOWER, basis, storage="sparse")
    b = fock.ladder_op(Mode.B, LadderKind.LOWER, basis, storage="sparse")
    a_dag = fock.ladder_op(Mode.A, LadderKind.RAISE, basis, storage="sparse")
    b_dag = fock.ladder_op(Mode.B, LadderKind.RAISE, basis, storage="sparse")
    na = fock.number_op(Mode.A, basis, storage="sparse")
    nb = fock.number_op(Mode.B, basis, storage="sparse")
    j0 = 0.5 * (na - nb)
    j_plus = a_dag @ b
    j_minus = b_dag @ a
    return Su2Generators(
        j0=_densify_small(j0),
        j_plus=_densify_small(j_plus),
        j_minus=_densify_small(j_minus),
        basis=basis,
    )


def generator_triple(gens):
    """(G0, G+, G-) for either algebra."""
    if isinstance(gens, Su11Generators):
        return gens.k0, gens.k_plus, gens.k_minus
    return gens.j0, gens.j_plus, gens.j_minus


def casimir(gens) -> OperatorMatrix:
    """K² = K0² - (K+K- + K-K+)/2 for su(1,1); J² = J0² + (J+J- + J-J+)/2."""
    g0, gp, gm = generator_triple(gens)
    cross = 0.5 * (gp @ gm + gm @ gp)
    if isinstance(gens, Su11Generators):
        return g0 @ g0 - cross
    return g0 @ g0 + cross


@dataclass(frozen=True)
class AlgebraReport:
    """Max interior residual per commutation identity.

    ``residuals`` holds the closure relations, adjointness and charge
    commutation (absolute residuals; entries are O(cutoff) so these sit at
    the float epsilon). ``casimir_residuals`` are normalized by the Casimir
    magnitude, which grows like cutoff² and would otherwise dominate the
    roundoff budget.
    """

    algebra: AlgebraKind
    margin: int
    residuals: dict
    casimir_residuals: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def max_casimir_residual(self) -> float:
        return max(self.casimir_residuals.values())


def _column_residual(mat: OperatorMatrix, columns: np.ndarray) -> float:
    data = mat.data
    if fock.sp.issparse(data):
        data = data.tocsc()[:, columns]
        return fock._absmax(data)
    return fock._absmax(data[:, columns])


def verify_algebra(gens, interior_margin: int = 1) -> AlgebraReport:
    """Check the commutation relations on interior states.

    Residual for each identity is the largest matrix element of
    (commutator - expected) over columns whose state has both occupations
    at most cutoff - margin. The raising operators push one quantum out of
    a margin-1 interior at most, so margin >= 1 suffices for exactness.
    """
    basis = gens.basis
    cols = basis.interior_indices(interior_margin)
    # The Casimir contains G+G- and G-G+, so its commutators move two quanta
    # before coming back; they need one extra unit of headroom.
    cols_cas = basis.interior_indices(interior_margin + 1)
    g0, gp, gm = generator_triple(gens)
    su11 = isinstance(gens, Su11Generators)
    cas = casimir(gens)
    nd_or_ns = fock.charge_op(
        ChargeKind.DIFFERENCE_ND if su11 else ChargeKind.SUM_NS, basis
    )

    residuals = {}
    residuals["[G0,G+] - G+"] = _column_residual(commutator(g0, gp) - gp, cols)
    residuals["[G0,G-] + G-"] = _column_residual(commutator(g0, gm) + gm, cols)
    if su11:
        residuals["[G-,G+] - 2G0"] = _column_residual(
            commutator(gm, gp) - 2.0 * g0, cols
        )
    else:
        residuals["[G+,G-] - 2G0"] = _column_residual(
            commutator(gp, gm) - 2.0 * g0, cols
        )
    residuals["G+ - (G-)†"] = (gp - gm.dagger()).absmax()
    for name, g in (("G0", g0), ("G+", gp), ("G-", gm)):
        residuals[f"[charge,{name}]"] = _column_residual(commutator(nd_or_ns, g), cols)
    cas_scale = max(1.0, cas.absmax())
    casimir_residuals = {}
    for name, g in (("G0", g0), ("G+", gp), ("G-", gm)):
        casimir_residuals[f"[Casimir,{name}]"] = (
            _column_residual(commutator(cas, g), cols_cas) / cas_scale
        )
    return AlgebraReport(
        algebra=gens.algebra,
        margin=interior_margin,
        residuals=residuals,
        casimir_residuals=casimir_residuals,
    )


@dataclass(frozen=True)
class GroupLabels:
    """Group quantum numbers attached to a physical state (n_l, m_n).

    su(1,1): n = n_l and k = (m_n + 1)/2 (Bargmann index).
    su(2):   j = n_l + m_n/2 and mu = m_n/2.

    The physical state |n_l, m_n> is realized as the two-mode number state
    (n_a, n_b) = (n_l + m_n, n_l); this is the unique assignment under
    which K0, N_d, J0 and N_s all take their conventional eigenvalues for
    m_n >= 0.
    """

    algebra: AlgebraKind
    n_l: int
    m_n: int

    @property
    def k(self) -> float:
        if self.algebra is not AlgebraKind.SU11:
            raise ValueError("k is an su(1,1) label")
        return 0.5 * (self.m_n + 1)

    @property
    def n(self) -> int:
        if self.algebra is not AlgebraKind.SU11:
            raise ValueError("n is an su(1,1) label")
        return self.n_l

    @property
    def j(self) -> float:
        if self.algebra is not AlgebraKind.SU2:
            raise ValueError("j is an su(2) label")
        return self.n_l + 0.5 * self.m_n

    @property
    def mu(self) -> float:
        if self.algebra is not AlgebraKind.SU2:
            raise ValueError("mu is an su(2) label")
        return 0.5 * self.m_n

    def two_mode_state(self):
        """(n_a, n_b) realization of this state."""
        return (self.n_l + self.m_n, self.n_l)


def group_labels_from_physical(algebra: AlgebraKind, n_l: int, m_n: int) -> GroupLabels:
    if n_l < 0 or m_n < 0:
        raise ValueError("n_l and m_n must be nonnegative integers")
    return GroupLabels(algebra=algebra, n_l=int(n_l), m_n=int(m_n))


def _as_nonneg_int(x: float, what: str) -> int:
    rounded = round(x)
    if abs(x - rounded) > 1e-9 or rounded < 0:
        raise NonIntegerError(f"{what} = {x} is not a nonnegative integer")
    return int(rounded)


def physical_from_group_labels(algebra: AlgebraKind, **labels) -> GroupLabels:
    """Inverse mapping; raises NonIntegerError when n_l or m_n are not
    nonnegative integers."""
    if algebra is AlgebraKind.SU11:
        k, n = labels["k"], labels["n"]
        n_l = _as_nonneg_int(n, "n_l")
        m_n = _as_nonneg_int(2 * k - 1, "m_n")
    else:
        j, mu = labels["j"], labels["mu"]
        n_l = _as_nonneg_int(j - mu, "n_l")
        m_n = _as_nonneg_int(2 * mu, "m_n")
    return GroupLabels(algebra=algebra, n_l=n_l, m_n=m_n)
