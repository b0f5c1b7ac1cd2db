"""Structured self-verification suite behind the ``verify`` CLI command.

Each check produces a ReportRecord with a stable anchor slug, the computed
and reference values, the residual and its tolerance. Checks cover algebra
closure, conjugation identities, tilting diagonalization, analytic-versus-
numeric spectra, coherent-state normalization, and the wavefunction
equivalences. Runtimes are recorded but excluded from serialized reports
unless requested, so fixed-seed runs are byte-identical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import displace, liealg, spectra, wavefunc
from .fock import ChargeKind, build_basis, get_sector
from .liealg import AlgebraKind
from .models import Branch, Component, ModelKind, ModelParams, build_full_hamiltonian, build_spinor, eigen_residual
from .parallel import parallel_map


@dataclass
class ReportRecord:
    name: str
    anchor: str
    computed: float
    reference: float
    residual: float
    tolerance: float
    status: str  # PASS / FAIL / SKIP
    runtime: float | None = None
    detail: str = ""

    @classmethod
    def check(cls, name, anchor, residual, tolerance, computed=0.0, reference=0.0, detail=""):
        return cls(
            name=name,
            anchor=anchor,
            computed=float(computed),
            reference=float(reference),
            residual=float(residual),
            tolerance=float(tolerance),
            status="PASS" if residual <= tolerance else "FAIL",
            detail=detail,
        )

    @classmethod
    def skip(cls, name, anchor, detail):
        return cls(
            name=name,
            anchor=anchor,
            computed=0.0,
            reference=0.0,
            residual=0.0,
            tolerance=0.0,
            status="SKIP",
            detail=detail,
        )


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)

    @property
    def failed(self) -> list:
        return [r for r in self.records if r.status == "FAIL"]

    @property
    def all_passed(self) -> bool:
        return not self.failed


def _timed(fn):
    t0 = time.perf_counter()
    recs = fn()
    dt = time.perf_counter() - t0
    for r in recs:
        if r.runtime is None:
            r.runtime = dt / max(1, len(recs))
    return recs


def _algebra_checks(cutoff: int):
    recs = []
    basis = build_basis(cutoff)
    for gens, tag in (
        (liealg.su11_generators(basis), "su11"),
        (liealg.su2_generators(basis), "su2"),
    ):
        rep = liealg.verify_algebra(gens, interior_margin=1)
        recs.append(
            ReportRecord.check(
                f"{tag} closure (cutoff {cutoff})",
                f"algebra-closure-{tag}",
                rep.max_residual,
                1e-12,
                detail="; ".join(f"{k}={v:.1e}" for k, v in rep.residuals.items()),
            )
        )
        recs.append(
            ReportRecord.check(
                f"{tag} Casimir commutes (scaled)",
                f"casimir-commutation-{tag}",
                rep.max_casimir_residual,
                1e-12,
            )
        )
    return recs


def _similarity_checks(seed: int):
    recs = []
    rng = np.random.default_rng(seed)
    basis = build_basis(24)
    g2 = liealg.su2_generators(basis)
    for n_s in (4, 8):
        xi = 0.4 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        sec = get_sector(basis, ChargeKind.SUM_NS, n_s)
        rep = displace.verify_similarity(g2, xi, sec)
        recs.append(
            ReportRecord.check(
                f"su2 conjugation identities (N_s={n_s})",
                "bch-similarity-su2",
                rep.max_residual,
                1e-10,
            )
        )
    basis11 = build_basis(120)
    g11 = liealg.su11_generators(basis11)
    for d, mag in ((0, 0.5), (1, 0.2)):
        xi = mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        sec = get_sector(basis11, ChargeKind.DIFFERENCE_ND, d)
        rep = displace.verify_similarity(g11, xi, sec, keep=12)
        recs.append(
            ReportRecord.check(
                f"su11 conjugation identities (N_d={d}, |xi|={mag})",
                "bch-similarity-su11",
                rep.max_residual,
                1e-8,
            )
        )
    # Normal form == direct exponential
    tp = displace.TiltingParams.from_xi(AlgebraKind.SU2, 0.3 * np.exp(0.7j))
    sec = get_sector(basis, ChargeKind.SUM_NS, 6)
    dev = (
        displace.displacement_normal(g2, tp, sec)
        - displace.displacement_direct(g2, tp.xi, sec)
    ).absmax()
    recs.append(
        ReportRecord.check("su2 normal form == direct", "normal-form-su2", dev, 1e-12)
    )
    tp11 = displace.TiltingParams.from_xi(AlgebraKind.SU11, -0.4)
    sec = get_sector(basis11, ChargeKind.DIFFERENCE_ND, 0)
    full_dev = (
        displace.displacement_normal(g11, tp11, sec).dense()[:15, :15]
        - displace.displacement_direct(g11, tp11.xi, sec).dense()[:15, :15]
    )
    recs.append(
        ReportRecord.check(
            "su11 normal form == direct (lowest 15)",
            "normal-form-su11",
            float(np.max(np.abs(full_dev))),
            1e-8,
        )
    )
    return recs


def _tilting_checks(p: ModelParams, seed: int, n_random: int = 5):
    recs = []
    rng = np.random.default_rng(seed)

    def pairs():
        yield p.f, p.g, "configured"
        made = 0
        while made < n_random:
            f = rng.uniform(0.4, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            g = rng.uniform(0.4, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            # keep the hyperbolic angle moderate so cutoff-140 truncation
            # stays far below the tolerance
            if 2 * abs(f) * abs(g) / (abs(f) ** 2 + abs(g) ** 2) > 0.8:
                continue
            made += 1
            yield f, g, f"random-{made}"

    basis11 = build_basis(140)
    basis2 = build_basis(24)
    for f, g, tag in pairs():
        pp = ModelParams(g=g, f=f, mc2=p.mc2, hbar=p.hbar)
        if abs(abs(f) - abs(g)) < 1e-12:
            recs.append(
                ReportRecord.skip(
                    f"su11 tilting ({tag})",
                    "tilting-su11",
                    "|f| = |g|: hyperbolic angle diverges; excluded domain",
                )
            )
        else:
            sec = get_sector(basis11, ChargeKind.DIFFERENCE_ND, 0)
            rep = spectra.verify_tilting(ModelKind.JC_AJC, pp, sec, keep=10)
            recs.append(
                ReportRecord.check(
                    f"su11 tilting eliminates ladder terms ({tag})",
                    "tilting-su11",
                    max(rep.max_offdiag_rel, rep.max_diag_dev_rel),
                    1e-7,
                )
            )
        sec2 = get_sector(basis2, ChargeKind.SUM_NS, 5)
        rep2 = spectra.verify_tilting(ModelKind.JC_JC, pp, sec2)
        recs.append(
            ReportRecord.check(
                f"su2 tilting eliminates ladder terms ({tag})",
                "tilting-su2",
                max(rep2.max_offdiag_rel, rep2.max_diag_dev_rel),
                1e-10,
            )
        )
    return recs


def _spectrum_checks(p: ModelParams, cutoff: int):
    recs = []
    basis2 = build_basis(max(12, cutoff // 10))

    def su2_sector_dev(n_s):
        sec = get_sector(basis2, ChargeKind.SUM_NS, n_s)
        numeric = spectra.numeric_spectrum(ModelKind.JC_JC, Component.UPPER, p, sec, n_s + 1)
        analytic = []
        for m_n in range(n_s, -1, -1):
            if (n_s - m_n) % 2 == 0:
                n_l = (n_s - m_n) // 2
                analytic.append(spectra.su2_energy_sq(p, n_l, m_n, 1))
                if m_n:
                    analytic.append(spectra.su2_energy_sq(p, n_l, m_n, -1))
        analytic = np.sort(analytic)
        return float(np.max(np.abs(numeric - analytic) / np.abs(analytic)))

    devs = parallel_map(su2_sector_dev, range(0, basis2.cutoff // 2))
    recs.append(
        ReportRecord.check(
            "su2 numeric == analytic spectrum (all sectors)",
            "spectrum-oracle-su2",
            max(devs),
            1e-10,
        )
    )

    if abs(abs(p.f) - abs(p.g)) < 1e-12:
        recs.append(
            ReportRecord.skip(
                "su11 numeric == analytic spectrum",
                "spectrum-oracle-su11",
                "|f| = |g|: analytic spectrum collapses; excluded domain",
            )
        )
        return recs

    basis11 = build_basis(cutoff)

    def su11_sector_dev(d):
        sec = get_sector(basis11, ChargeKind.DIFFERENCE_ND, d)
        numeric = spectra.numeric_spectrum(ModelKind.JC_AJC, Component.UPPER, p, sec, 8)
        analytic = np.array([spectra.su11_sector_energy_sq(p, d, n) for n in range(8)])
        return float(np.max(np.abs(numeric - analytic) / np.abs(analytic)))

    devs = parallel_map(su11_sector_dev, range(-3, 4))
    recs.append(
        ReportRecord.check(
            "su11 numeric == analytic spectrum (N_d -3..3)",
            "spectrum-oracle-su11",
            max(devs),
            1e-8,
        )
    )
    return recs


def _coherent_state_checks(seed: int):
    recs = []
    rng = np.random.default_rng(seed)
    basis = build_basis(120)
    g11 = liealg.su11_generators(basis)
    worst_col, worst_norm = 0.0, 0.0
    for k2, n in ((1, 0), (1, 2), (4, 1)):
        k = k2 / 2.0
        zeta = 0.45 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        c = displace.su11_ncs_coefficients(k, n, zeta)
        worst_norm = max(worst_norm, abs(c.norm_sq - 1.0))
        d = int(round(-(2 * k - 1)))
        sec = get_sector(basis, ChargeKind.DIFFERENCE_ND, d)
        xi = displace.zeta_to_xi(AlgebraKind.SU11, zeta)
        col = displace.ncs_from_displacement(g11, xi, sec, n)
        m = min(len(c.coeffs), len(col))
        worst_col = max(worst_col, float(np.max(np.abs(c.coeffs[:m] - col[:m]))))
    recs.append(
        ReportRecord.check(
            "su11 number coherent states == displacement columns",
            "ncs-oracle-su11",
            worst_col,
            1e-8,
        )
    )
    recs.append(
        ReportRecord.check(
            "su11 number coherent state normalization",
            "ncs-normalization-su11",
            worst_norm,
            1e-10,
        )
    )

    basis2 = build_basis(16)
    g2 = liealg.su2_generators(basis2)
    worst_col, worst_norm = 0.0, 0.0
    for j2, mu2 in ((4, 0), (3, -3), (6, 4)):
        j, mu = j2 / 2.0, mu2 / 2.0
        zeta = rng.uniform(0.2, 1.4) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        c = displace.su2_ncs_coefficients(j, mu, zeta)
        worst_norm = max(worst_norm, abs(c.norm_sq - 1.0))
        sec = get_sector(basis2, ChargeKind.SUM_NS, int(2 * j))
        xi = displace.zeta_to_xi(AlgebraKind.SU2, zeta)
        col = displace.ncs_from_displacement(g2, xi, sec, int(j + mu))
        worst_col = max(worst_col, float(np.max(np.abs(c.coeffs - col))))
    recs.append(
        ReportRecord.check(
            "su2 number coherent states == displacement columns",
            "ncs-oracle-su2",
            worst_col,
            1e-10,
        )
    )
    recs.append(
        ReportRecord.check(
            "su2 number coherent state normalization",
            "ncs-normalization-su2",
            worst_norm,
            1e-10,
        )
    )
    return recs


def _wavefunction_checks():
    recs = []
    worst = 0.0
    for n, m in ((0, 0), (2, 1), (4, 4)):
        fn = lambda r, p, n=n, m=m: wavefunc.oscillator_wavefunction(n, m, r, p)
        res = wavefunc.quadrature_inner_product(fn, fn)
        worst = max(worst, abs(res.value - 1.0))
    f01 = lambda r, p: wavefunc.oscillator_wavefunction(0, 1, r, p)
    f11 = lambda r, p: wavefunc.oscillator_wavefunction(1, 1, r, p)
    worst_orth = abs(wavefunc.quadrature_inner_product(f01, f11).value)
    recs.append(
        ReportRecord.check(
            "oscillator eigenfunctions orthonormal by quadrature",
            "wavefunction-orthonormality",
            max(worst, worst_orth),
            1e-9,
        )
    )
    fs = lambda r, p: wavefunc.ncs_wavefunction_series(0.3j, 1, 1, r, p)
    res = wavefunc.quadrature_inner_product(fs, fs)
    recs.append(
        ReportRecord.check(
            "coherent-state wavefunction norm (series)",
            "ncs-wavefunction-norm",
            abs(res.value - 1.0),
            1e-8,
        )
    )
    rep = wavefunc.closed_form_comparison(0.3j, 1, 1)
    recs.append(
        ReportRecord.check(
            "closed form (resummed) == series",
            "ncs-closed-resummed",
            rep.max_dev_resummed,
            1e-7,
        )
    )
    recs.append(
        ReportRecord.check(
            "sigma-variant mismatch characterized (mirror identity)",
            "ncs-closed-sigma-discrepancy",
            rep.max_dev_sigma_mirror,
            1e-7,
            computed=rep.max_dev_sigma,
            detail=(
                "sigma variant deviates from the series by "
                f"{rep.max_dev_sigma:.3e}; with the Laguerre-argument sign "
                "flipped it equals the resummed form at -zeta"
            ),
        )
    )
    return recs


def _structural_identity_checks(seed: int, n_samples: int = 10_000):
    # Relative gap guard: near the excluded |f| = |g| ray the first radical
    # cancels catastrophically (conditioning eps * S / gap) and no float
    # evaluation can certify 1e-13; the identities are checked over the
    # validated non-degenerate domain.
    rng = np.random.default_rng(seed)
    f = np.empty(n_samples, dtype=complex)
    g = np.empty(n_samples, dtype=complex)
    have = 0
    while have < n_samples:
        cf = rng.uniform(0.1, 3.0, 2 * n_samples) * np.exp(
            1j * rng.uniform(0, 2 * np.pi, 2 * n_samples)
        )
        cg = rng.uniform(0.1, 3.0, 2 * n_samples) * np.exp(
            1j * rng.uniform(0, 2 * np.pi, 2 * n_samples)
        )
        ok = np.abs(np.abs(cf) ** 2 - np.abs(cg) ** 2) >= 0.05 * (
            np.abs(cf) ** 2 + np.abs(cg) ** 2
        )
        take = min(n_samples - have, int(np.sum(ok)))
        f[have : have + take] = cf[ok][:take]
        g[have : have + take] = cg[ok][:take]
        have += take
    fa2, ga2 = np.abs(f) ** 2, np.abs(g) ** 2
    rad_a = np.sqrt((ga2 + fa2) ** 2 - 4 * ga2 * fa2)
    dev_a = np.max(np.abs(rad_a - np.abs(fa2 - ga2)) / (fa2 + ga2))
    rad_b = np.sqrt((ga2 - fa2) ** 2 + 4 * ga2 * fa2)
    dev_b = np.max(np.abs(rad_b - (fa2 + ga2)) / (fa2 + ga2))
    return [
        ReportRecord.check(
            "radicand identity sqrt((S)^2-4|fg|^2) == | |f|^2-|g|^2 |",
            "radicand-identity-a",
            float(dev_a),
            1e-13,
        ),
        ReportRecord.check(
            "radicand identity sqrt((D)^2+4|fg|^2) == |f|^2+|g|^2",
            "radicand-identity-b",
            float(dev_b),
            1e-13,
        ),
    ]


def _special_case_checks():
    recs = []
    # 1+1 oscillator preset: the rewritten one-parameter form reproduces
    # 2 hbar w mc^2 (n+1); the general (oracle-backed) formula gives exactly
    # half of that at this preset, and the factor is pinned as part of the
    # record so the mismatch between the two printed forms stays documented.
    worst, worst_factor = 0.0, 0.0
    for omega in (0.1, 0.5):
        pre, _ = spectra.special_case_params(spectra.Dirac1p1(omega))
        for n_l in range(6):
            target = 2.0 * pre.hbar * omega * pre.mc2 * (n_l + 1)
            rewritten = spectra.su11_energy_sq_rewritten(pre, n_l) - pre.mc2**2
            general = spectra.su11_energy_sq(pre, n_l, 0) - pre.mc2**2
            worst = max(worst, abs(rewritten - target) / target)
            worst_factor = max(worst_factor, abs(rewritten - 2.0 * general) / target)
    recs.append(
        ReportRecord.check(
            "1+1 oscillator preset: rewritten form gives 2 hbar w mc^2 (n+1)",
            "special-case-dirac1p1",
            worst,
            1e-12,
        )
    )
    recs.append(
        ReportRecord.check(
            "rewritten su11 form carries twice the general coupling term",
            "special-case-dirac1p1-factor",
            worst_factor,
            1e-12,
            detail="general (oracle-backed) spectrum at this preset is hbar w mc^2 (n+1)",
        )
    )
    # 2+1 oscillator: inner-minus branch reproduces mc^2 sqrt(1 + 4 xi n)
    worst = 0.0
    for xi in (0.05, 0.1, 0.25):
        pre, kind = spectra.special_case_params(spectra.Dirac2p1(xi))
        for n_l in range(11):
            e = spectra.analytic_energy_su2(pre, n_l, 3, Branch.PLUS, inner_sign=-1).energy
            ref = pre.mc2 * np.sqrt(1.0 + 4.0 * xi * n_l)
            worst = max(worst, abs(e - ref) / ref)
    recs.append(
        ReportRecord.check(
            "2+1 oscillator preset: E = mc^2 sqrt(1 + 4 xi n)",
            "special-case-dirac2p1",
            worst,
            1e-12,
        )
    )
    # amplifier / coupled-oscillator presets equal the general formulas
    worst = 0.0
    for n_l in range(4):
        for m in range(4):
            lvl = spectra.ndpa_energy(1.0, 2.0, n_l, m)
            pre, _ = spectra.special_case_params(
                spectra.NondegenerateParametricAmplifier(1.0, 2.0)
            )
            ref = spectra.su11_energy_sq(pre, n_l, m)
            worst = max(worst, abs(lvl.energy_sq - ref) / ref)
    for j2 in range(0, 7):
        for mu2 in range(-j2, j2 + 1, 2):
            lvl = spectra.coupled_osc_energy(1.0, 2.0, j2 / 2, mu2 / 2)
            pre, _ = spectra.special_case_params(spectra.CoupledOscillators(1.0, 2.0))
            ref = spectra.su2_energy_sq(
                pre, int((j2 - abs(mu2)) // 2), abs(mu2), 1 if mu2 >= 0 else -1
            )
            worst = max(worst, abs(lvl.energy_sq - ref) / max(ref, 1.0))
    recs.append(
        ReportRecord.check(
            "amplifier/coupled presets equal the general spectra",
            "special-case-presets",
            worst,
            1e-12,
        )
    )
    return recs


def _limit_checks():
    recs = []
    rep = spectra.nonrelativistic_limit_check(
        spectra.CoupledOscillators(1.0, 2.0), 2, 1, 1e6
    )
    recs.append(
        ReportRecord.check(
            "coupled-oscillator weak-coupling limit at scale 1e6",
            "nonrelativistic-limit-coupled",
            rep.rel_error,
            1e-5,
            computed=rep.eps_model,
            reference=rep.eps_analytic,
        )
    )
    rep = spectra.nonrelativistic_limit_check(
        spectra.NondegenerateParametricAmplifier(1.0, 2.0), 0, 1, 1e6
    )
    recs.append(
        ReportRecord.check(
            "amplifier weak-coupling limit at scale 1e6",
            "nonrelativistic-limit-ndpa",
            rep.rel_error,
            1e-5,
            computed=rep.eps_model,
            reference=rep.eps_analytic,
        )
    )
    slope = spectra.limit_decay_exponent(
        spectra.CoupledOscillators(1.0, 2.0), 2, 1, [1e4, 1e5, 1e6]
    )
    recs.append(
        ReportRecord.check(
            "limit error decays first order in 1/scale",
            "nonrelativistic-limit-slope",
            abs(slope + 1.0),
            0.15,
            computed=slope,
            reference=-1.0,
        )
    )
    return recs


def _spinor_checks(p: ModelParams):
    recs = []
    basis = build_basis(70)
    if abs(abs(p.f) - abs(p.g)) < 1e-12:
        recs.append(
            ReportRecord.skip(
                "su11 eigenspinor residuals",
                "spinor-residual-su11",
                "|f| = |g|: analytic spectrum not certified on this ray",
            )
        )
    else:
        h = build_full_hamiltonian(ModelKind.JC_AJC, p, basis)
        worst = 0.0
        for n_l, m_n in ((0, 0), (2, 1), (1, 4)):
            for br in (Branch.PLUS, Branch.MINUS):
                s = build_spinor(ModelKind.JC_AJC, p, n_l, m_n, br, basis)
                worst = max(worst, eigen_residual(h, s))
        recs.append(
            ReportRecord.check(
                "su11 eigenspinor residuals",
                "spinor-residual-su11",
                worst,
                1e-8,
            )
        )
    h2 = build_full_hamiltonian(ModelKind.JC_JC, p, basis)
    worst = 0.0
    for n_l, m_n in ((1, 0), (1, 2), (0, 3)):
        s = build_spinor(ModelKind.JC_JC, p, n_l, m_n, Branch.PLUS, basis)
        worst = max(worst, eigen_residual(h2, s))
    recs.append(
        ReportRecord.check(
            "su2 eigenspinor residuals",
            "spinor-residual-su2",
            worst,
            1e-8,
        )
    )
    return recs


def run_verification_suite(
    p: ModelParams,
    cutoff: int = 120,
    seed: int = 2024,
) -> VerificationReport:
    """Run every suite; deterministic for fixed seed and parameters."""
    report = VerificationReport()
    report.records += _timed(lambda: _algebra_checks(min(cutoff, 20)))
    report.records += _timed(lambda: _similarity_checks(seed))
    report.records += _timed(lambda: _tilting_checks(p, seed))
    report.records += _timed(lambda: _spectrum_checks(p, cutoff))
    report.records += _timed(lambda: _coherent_state_checks(seed))
    report.records += _timed(_wavefunction_checks)
    report.records += _timed(lambda: _structural_identity_checks(seed))
    report.records += _timed(_special_case_checks)
    report.records += _timed(_limit_checks)
    report.records += _timed(lambda: _spinor_checks(p))
    return report
