"""Cross-module invariant suite.

Every check is deterministic given the master seed (each one derives its
own generator from a hash of seed and check name, so the result does not
depend on execution order or thread count).  Checks are independent and
may run in a thread pool capped by the KREIN_LAB_THREADS environment
variable.
"""
from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracles
from ._linalg import (
    eig_min_herm,
    hermitize,
    operator_norm,
    orthonormal_columns,
    orthonormal_complement,
    random_unitary,
)
from .angular import (
    PartialContraction,
    c0_operator,
    cayley_g0,
    duality_test,
    extract_angular,
    reconstruct_subspaces,
)
from .errors import CayleyUndefinedError
from .extensions import (
    cayley,
    cayley_inverse,
    classify_case,
    density_test,
    extension_from_x,
    extremality_test,
    krein_interval,
    solve_x_equation,
    symmetrize_solution,
    x_equation_residual,
)
from .gmetric import GMetric, g_inner, jg_product, metric_report
from .quasibasis import (
    anharmonic_family,
    biorthogonal_gram,
    c_action,
    c_action_multiplier,
    eigen_residual,
    expansion,
    family_eigenvalues,
    g_gram_fourier,
    h_gram_in_g,
    shifted_family,
    sign_pattern,
    weighted_gram,
)
from .sequence_model import (
    SequenceModelSpec,
    build_model,
    classify_analytic,
    defect_prediction,
    truncated_density_sweep,
    xi_preimage_diagnostic,
)
from .serialize import dumps_report, matrix_from_obj, matrix_to_obj
from .spaces import (
    SignatureSpace,
    Subspace,
    classify_subspace,
    fundamental_projections,
)


# --- deterministic sample builders (also used by the test suite) -----------

def random_signature_space(rng: np.random.Generator, dim: int | None = None) -> SignatureSpace:
    if dim is None:
        dim = int(rng.integers(2, 7))
    plus = int(rng.integers(1, dim))
    u = random_unitary(rng, dim)
    signs = np.concatenate([np.ones(plus), -np.ones(dim - plus)])
    return SignatureSpace(hermitize((u * signs) @ u.conj().T))


def random_anticommuting_contraction(rng: np.random.Generator, space: SignatureSpace,
                                     norm_cap: float = 0.9) -> np.ndarray:
    """Self-adjoint contraction with J T = -T J (off-diagonal in H_+ (+) H_-)."""
    p, q = space.plus_dim, space.minus_dim
    k = rng.standard_normal((p, q)) + 1j * rng.standard_normal((p, q))
    scale = operator_norm(k)
    if scale > 0:
        k *= norm_cap * float(rng.uniform(0.3, 1.0)) / scale
    basis = np.hstack([space.plus_basis(), space.minus_basis()])
    blocks = np.zeros((space.dim, space.dim), dtype=complex)
    blocks[:p, p:] = k
    blocks[p:, :p] = k.conj().T
    return hermitize(basis @ blocks @ basis.conj().T)


def random_partial_contraction(rng: np.random.Generator, space: SignatureSpace,
                               t_full: np.ndarray | None = None,
                               proper: bool = True) -> PartialContraction:
    """Restriction of an anticommuting contraction to a random J-invariant domain."""
    if t_full is None:
        t_full = random_anticommuting_contraction(rng, space)
    p, q = space.plus_dim, space.minus_dim
    while True:
        d_plus = int(rng.integers(0, p + 1))
        d_minus = int(rng.integers(0, q + 1))
        if d_plus + d_minus == 0:
            continue
        if proper and d_plus + d_minus == space.dim:
            continue
        break
    cols = []
    for basis, d in ((space.plus_basis(), d_plus), (space.minus_basis(), d_minus)):
        if d:
            coeff = rng.standard_normal((basis.shape[1], d)) + 1j * rng.standard_normal((basis.shape[1], d))
            cols.append(orthonormal_columns(basis @ coeff))
    domain = np.hstack(cols)
    return PartialContraction(space, domain, t_full @ domain)


def random_x(rng: np.random.Generator, m: int) -> np.ndarray:
    a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    h = hermitize(a @ a.conj().T)
    return h / (operator_norm(h) + float(rng.uniform(0.05, 1.0)))


def t_half_problem():
    """The 2x2 worked instance: J = diag(1,-1), T0 e1 = e2 / 2."""
    space = SignatureSpace(np.diag([1.0, -1.0]))
    domain = np.array([[1.0], [0.0]])
    action = np.array([[0.0], [0.5]])
    return PartialContraction(space, domain, action)


# --- individual checks ------------------------------------------------------

def _check_spaces_projections(rng) -> str:
    worst = 0.0
    for _ in range(6):
        sp = random_signature_space(rng)
        pp, pm = fundamental_projections(sp)
        eye = np.eye(sp.dim)
        worst = max(
            worst,
            operator_norm(pp + pm - eye),
            operator_norm(pp @ pp - pp),
            operator_norm(pm @ pm - pm),
            operator_norm(pp @ pm),
            operator_norm(sp.j - pp + pm),
        )
        for basis, want in ((sp.plus_basis(), "positive"), (sp.minus_basis(), "negative")):
            label = classify_subspace(sp, Subspace(basis)).label
            if label != want:
                raise AssertionError(f"fundamental subspace classified as {label}")
    if worst > 1e-10:
        raise AssertionError(f"projection identity residual {worst:.3e}")
    return f"projection identities hold (residual {worst:.2e})"


def _check_angular_roundtrip(rng) -> str:
    worst = 0.0
    for _ in range(6):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp, proper=False)
        lp, lm = reconstruct_subspaces(t0)
        back = extract_angular(sp, lp if lp.dim else None, lm if lm.dim else None)
        worst = max(worst, operator_norm(t0.full_matrix() - back.full_matrix()))
        pd = t0.domain @ t0.domain.conj().T
        pb = back.domain @ back.domain.conj().T
        worst = max(worst, operator_norm(pd - pb))
    if worst > 1e-8:
        raise AssertionError(f"angular roundtrip residual {worst:.3e}")
    return f"extract/reconstruct roundtrip residual {worst:.2e}"


def _check_angular_duality(rng) -> str:
    for _ in range(5):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp)
        if not duality_test(t0):
            raise AssertionError("symmetric restriction failed the duality test")
        p, q = sp.plus_dim, sp.minus_dim
        k1 = rng.standard_normal((p, q)) + 1j * rng.standard_normal((p, q))
        k2 = rng.standard_normal((p, q)) + 1j * rng.standard_normal((p, q))
        basis = np.hstack([sp.plus_basis(), sp.minus_basis()])
        blocks = np.zeros((sp.dim, sp.dim), dtype=complex)
        blocks[:p, p:] = 0.2 * k1 / max(operator_norm(k1), 1e-12)
        blocks[p:, :p] = 0.4 * k2.conj().T / max(operator_norm(k2), 1e-12)
        skew = basis @ blocks @ basis.conj().T
        broken = PartialContraction(sp, t0.domain, skew @ t0.domain)
        if broken.domain_dim and duality_test(broken) and operator_norm(
                hermitize(t0.domain.conj().T @ broken.action)
                - t0.domain.conj().T @ broken.action) > 1e-8:
            raise AssertionError("non-symmetric action passed the duality test")
    return "duality holds iff the restricted action is symmetric"


def _check_angular_c0(rng) -> str:
    worst = 0.0
    for _ in range(5):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp, proper=False)
        lp, lm = reconstruct_subspaces(t0)
        c0 = c0_operator(t0)
        for sub, sgn in ((lp, 1.0), (lm, -1.0)):
            for k in range(sub.dim):
                v = sub.basis[:, k]
                worst = max(worst, float(np.linalg.norm(c0.apply(v) - sgn * v)))
        # G0 = J C0 positivity through the Cayley route.
        g0 = cayley_g0(t0)
        for _ in range(4):
            c = rng.standard_normal(t0.domain_dim) + 1j * rng.standard_normal(t0.domain_dim)
            x = t0.domain @ c
            fx = x + t0.apply(x)
            val = np.real(np.vdot(fx, g0.apply(fx)))
            expect = float(np.vdot(x, x).real - np.vdot(t0.apply(x), t0.apply(x)).real)
            worst = max(worst, abs(val - expect))
    if worst > 1e-8:
        raise AssertionError(f"C0/G0 residual {worst:.3e}")
    return f"C0 involution and (G0 f, f) = ||x||^2 - ||T0 x||^2 (residual {worst:.2e})"


def _check_endpoints_vs_completion(rng) -> str:
    worst = 0.0
    worst_anti = 0.0
    for _ in range(8):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp)
        interval = krein_interval(t0)
        o_min, o_max = oracles.completion_endpoints(t0)
        worst = max(worst, operator_norm(interval.t_mu - o_min),
                    operator_norm(interval.t_m - o_max))
        worst_anti = max(worst_anti, operator_norm(
            sp.j @ interval.t_mu + interval.t_m @ sp.j))
    if worst > 1e-8:
        raise AssertionError(f"endpoint routes disagree by {worst:.3e}")
    if worst_anti > 1e-10:
        raise AssertionError(f"J T_mu + T_M J = {worst_anti:.3e}")
    return f"square-root and block-completion endpoints agree ({worst:.2e})"


def _check_defect_complement(rng) -> str:
    worst = 0.0
    for _ in range(6):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp)
        interval = krein_interval(t0)
        comp = orthonormal_complement(t0.domain, sp.dim)
        mb = interval.defect.basis
        if mb.shape[1] != comp.shape[1]:
            raise AssertionError("defect dimension differs from codim D(T0)")
        worst = max(worst, operator_norm(mb @ mb.conj().T - comp @ comp.conj().T))
        ev = np.linalg.eigvalsh(hermitize(comp.conj().T @ sp.j @ comp))
        sig = (int(np.sum(ev > 0)), int(np.sum(ev < 0)))
        if sig != interval.signature:
            raise AssertionError(f"defect signature {interval.signature} != {sig}")
    if worst > 1e-8:
        raise AssertionError(f"defect/complement distance {worst:.3e}")
    return "defect space = D(T0)-perp with matching J-signature (strong-contraction seeds)"


def _check_anticommute_equivalence(rng) -> str:
    n_true = n_false = 0
    for _ in range(5):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp)
        interval = krein_interval(t0)
        m = interval.defect_dim
        jm = interval.j_on_defect()
        samples = [0.5 * np.eye(m), np.zeros((m, m)), np.eye(m)]
        for _ in range(12):
            x = random_x(rng, m)
            samples.extend([x, symmetrize_solution(x, jm)])
        for x in samples:
            choice = extension_from_x(interval, x)   # raises if verdicts split
            if choice.anticommuting:
                n_true += 1
                if choice.x_residual > 1e-10:
                    raise AssertionError("anticommuting extension with nonzero X-residual")
            else:
                n_false += 1
                if x_equation_residual(x, jm) < 1e-10:
                    raise AssertionError("X solves the equation but JT != -TJ")
    if n_true == 0 or n_false == 0:
        raise AssertionError("equivalence was not exercised on both sides")
    return f"JT = -TJ iff X = J(I-X)J on {n_true}+{n_false} samples"


def _check_x_solutions(rng) -> str:
    n_proj = 0
    for _ in range(6):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp)
        interval = krein_interval(t0)
        jm = interval.j_on_defect()
        sols = solve_x_equation(interval, seed=int(rng.integers(2 ** 31)),
                                n_projection_samples=3)
        if sols.projection_exists != (interval.signature[0] == interval.signature[1]):
            raise AssertionError("projection existence does not track the signature balance")
        for x0 in [sols.elementary, *sols.projections]:
            for alpha in (0.0, 0.25, 1.0):
                xa = sols.affine(x0, alpha)
                if x_equation_residual(xa, jm) > 1e-10:
                    raise AssertionError("affine family left the solution set")
        for x in sols.projections:
            n_proj += 1
            if operator_norm(x @ x - x) > 1e-10:
                raise AssertionError("projection solution is not a projection")
    return f"elementary, affine and {n_proj} projection solutions all verified"


def _check_extremality_routes(rng) -> str:
    n_checked = 0
    for _ in range(6):
        sp = random_signature_space(rng)
        t0 = random_partial_contraction(rng, sp)
        interval = krein_interval(t0)
        m = interval.defect_dim
        xs = [0.5 * np.eye(m)]
        sols = solve_x_equation(interval, seed=int(rng.integers(2 ** 31)))
        xs.extend(sols.projections)
        xs.extend(random_x(rng, m) for _ in range(4))
        for x in xs:
            choice = extension_from_x(interval, x)
            result = extremality_test(t0, choice)   # raises on route disagreement
            if result.cayley_defined:
                n_checked += 1
                if result.projection_criterion != (operator_norm(x @ x - x) <= 1e-10):
                    raise AssertionError("projection criterion mislabeled a sample")
    if n_checked == 0:
        raise AssertionError("no sample had a defined Cayley transform")
    return f"projection and rank extremality criteria agree on {n_checked} samples"


def _check_cayley_roundtrip(rng) -> str:
    worst = 0.0
    for _ in range(8):
        n = int(rng.integers(2, 7))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        t = hermitize(a + a.conj().T)
        t *= 0.95 * float(rng.uniform(0.2, 1.0)) / max(operator_norm(t), 1e-12)
        worst = max(worst, operator_norm(cayley_inverse(cayley(t)) - t))
    if worst > 1e-10:
        raise AssertionError(f"Cayley roundtrip residual {worst:.3e}")
    try:
        cayley(np.array([[0.0, 1.0], [1.0, 0.0]]))
    except CayleyUndefinedError:
        pass
    else:
        raise AssertionError("cayley accepted a contraction with -1 in the spectrum")
    return f"cayley_inverse(cayley(T)) = T (residual {worst:.2e}); -1 rejected"


def _check_gmetric(rng) -> str:
    worst = 0.0
    for _ in range(5):
        sp = random_signature_space(rng)
        t = random_anticommuting_contraction(rng, sp, norm_cap=0.9)
        metric = GMetric.from_contraction(sp, t)
        report = metric_report(metric, seed=int(rng.integers(2 ** 31)))
        res = report["agreement_residuals"]
        worst = max(worst, res["inner_decomposition"] / max(1.0, metric.cond),
                    res["jg_vs_ambient"], res["xi_norm_identity"])
        # J G = G^{-1} J for anticommuting T.
        worst = max(worst, operator_norm(
            sp.j @ metric.g - np.linalg.solve(metric.g, sp.j)) / metric.cond)
        f = rng.standard_normal(sp.dim) + 1j * rng.standard_normal(sp.dim)
        g = rng.standard_normal(sp.dim) + 1j * rng.standard_normal(sp.dim)
        g_inner(metric, f, g)      # self-checking routes
        jg_product(metric, f, g)
    if worst > 1e-8:
        raise AssertionError(f"metric agreement residual {worst:.3e}")
    zero = GMetric.from_contraction(
        random_signature_space(rng, 4),
        np.zeros((4, 4)))
    if zero.cond != 1.0 or zero.degenerate:
        raise AssertionError("T = 0 did not give the identity metric")
    return f"metric route agreements within {worst:.2e}; T = 0 gives G = I"


def _check_model_table(rng) -> str:
    expected_both = dict(zip((0.6, 0.8, 1.0, 1.1, 1.25, 1.5), "AAABBB"))
    expected_chi = dict(zip((0.6, 0.8, 1.0, 1.1, 1.25, 1.5), "AAACCC"))
    for delta, want in expected_both.items():
        got = classify_analytic(SequenceModelSpec(delta, "both_constraints"))
        if got != want:
            raise AssertionError(f"delta {delta} both: {got} != {want}")
    for delta, want in expected_chi.items():
        got = classify_analytic(SequenceModelSpec(delta, "chi_plus_zero"))
        if got != want:
            raise AssertionError(f"delta {delta} chi_plus_zero: {got} != {want}")
    for delta in (0.8, 1.25):
        for variant in ("both_constraints", "chi_plus_zero"):
            pred = defect_prediction(SequenceModelSpec(delta, variant))
            if pred.case != classify_analytic(SequenceModelSpec(delta, variant)):
                raise AssertionError("defect prediction disagrees with the classifier")
    return "12-entry classification table and defect predictions reproduced"


def _check_model_truncation_cases(rng) -> str:
    for variant, want in (("both_constraints", "B"), ("chi_plus_zero", "C")):
        spec = SequenceModelSpec(1.25, variant, 6)
        inst = build_model(spec)
        interval = krein_interval(inst.t0)
        got = classify_case(interval)
        if got != want:
            raise AssertionError(f"finite truncation of {variant}: case {got} != {want}")
    full = SequenceModelSpec(0.8, "both_constraints", 4)
    inst = build_model(full)
    t_all = PartialContraction(inst.space, np.eye(8), inst.t)
    if classify_case(krein_interval(t_all)) != "A":
        raise AssertionError("full-domain instance must be case A")
    return "finite truncations: both -> B, chi_plus_zero -> C, full domain -> A"


def _check_model_series(rng) -> str:
    worst = 0.0
    for delta in (0.8, 1.25):
        for variant in ("both_constraints", "chi_plus_zero"):
            spec = SequenceModelSpec(delta, variant, 64)
            for sample in truncated_density_sweep(spec, exponents=(4, 6)):
                rel = abs(sample.preimage_norm_sq_matrix - sample.preimage_norm_sq_series)
                rel /= sample.preimage_norm_sq_series
                worst = max(worst, rel)
                if sample.domain_dense:
                    raise AssertionError("proper truncated domain reported as dense")
    if worst > 1e-9:
        raise AssertionError(f"series/matrix preimage norms differ by {worst:.3e}")
    return f"||Xi^-1 chi||^2 matrix vs series within {worst:.2e}"


def _check_model_divergence(rng) -> str:
    rep_div = xi_preimage_diagnostic(SequenceModelSpec(0.8, "both_constraints"), max_exponent=14)
    rep_marg = xi_preimage_diagnostic(SequenceModelSpec(1.0, "both_constraints"), max_exponent=14)
    rep_conv = xi_preimage_diagnostic(SequenceModelSpec(1.25, "both_constraints"), max_exponent=14)
    if rep_div.verdict != "diverges" or rep_div.marginal:
        raise AssertionError("delta = 0.8 must diverge cleanly")
    if rep_marg.verdict != "diverges" or not rep_marg.marginal:
        raise AssertionError("delta = 1.0 must be marginal-divergent")
    if rep_conv.verdict != "converges":
        raise AssertionError("delta = 1.25 must converge")
    return (f"growth exponents {rep_div.exponent_estimate:.3f} / "
            f"{rep_marg.exponent_estimate:.3f} (marginal) / {rep_conv.exponent_estimate:.3f}")


def _check_t_half(rng) -> str:
    t0 = t_half_problem()
    interval = krein_interval(t0)
    t_mu_ref = np.array([[0.0, 0.5], [0.5, -0.75]])
    t_m_ref = np.array([[0.0, 0.5], [0.5, 0.75]])
    if operator_norm(interval.t_mu - t_mu_ref) > 1e-10:
        raise AssertionError("T_mu differs from the worked value")
    if operator_norm(interval.t_m - t_m_ref) > 1e-10:
        raise AssertionError("T_M differs from the worked value")
    if interval.defect_dim != 1 or interval.signature != (0, 1):
        raise AssertionError("defect must be the negative line span{e2}")
    if classify_case(interval) != "C":
        raise AssertionError("worked instance must be case C")
    sols = solve_x_equation(interval)
    if sols.projection_exists or abs(sols.elementary[0, 0] - 0.5) > 1e-12:
        raise AssertionError("unique anticommuting solution X = 1/2 expected")
    choice = extension_from_x(interval, sols.elementary)
    if not choice.anticommuting or choice.extremal:
        raise AssertionError("X = 1/2 must be anticommuting and non-extremal")
    if operator_norm(choice.t - np.array([[0.0, 0.5], [0.5, 0.0]])) > 1e-10:
        raise AssertionError("realized extension differs from the worked value")
    if density_test(t0, choice.t):
        raise AssertionError("proper domain misreported as dense")
    return "worked 2x2 instance reproduced end-to-end"


def _check_quasibasis_hermite(rng) -> str:
    fam = shifted_family(0.4, 8)
    sigma, offdiag, ok = sign_pattern(fam)
    if not ok or np.any(sigma != fam.g_parities):
        raise AssertionError(f"sign pattern broken (offdiag {offdiag:.3e})")
    gram = g_gram_fourier(fam)
    dev = operator_norm(gram - np.eye(fam.n_max + 1))
    if dev > 1e-6:
        raise AssertionError(f"metric Gram deviates from I by {dev:.3e}")
    lam, residuals = eigen_residual(fam)
    if np.max(residuals) > 1e-8:
        raise AssertionError(f"eigen-residual {np.max(residuals):.3e}")
    bio = biorthogonal_gram(fam)
    if operator_norm(bio - np.eye(fam.n_max + 1)) > 1e-6:
        raise AssertionError("biorthogonality failed")
    hg = h_gram_in_g(fam)
    if operator_norm(hg - np.diag(lam)) > 1e-5:
        raise AssertionError("H is not diagonal in the metric Gram")
    target = fam.f[2] + 0.5j * fam.f[5]
    rep = expansion(fam, target)
    if rep.g_errors[-1] > 1e-8 or np.any(np.diff(rep.g_errors) > 1e-12):
        raise AssertionError("in-span expansion failed to converge monotonically")
    return (f"a = 0.4 family: Gram dev {offdiag:.1e}, metric Gram dev {dev:.1e}, "
            f"max eigen-residual {np.max(residuals):.1e}")


def _check_quasibasis_c_routes(rng) -> str:
    worst = 0.0
    fam = shifted_family(0.4, 8)
    coeff = rng.standard_normal(fam.n_max + 1) + 1j * rng.standard_normal(fam.n_max + 1)
    u = fam.f.T @ coeff
    worst = max(worst, float(np.max(np.abs(c_action(fam, u) - c_action_multiplier(fam, u)))))
    for n in (0, 3, 6):
        cu = c_action(fam, fam.f[n])
        worst = max(worst, float(np.max(np.abs(cu - fam.g_parities[n] * fam.f[n]))))
    afam = anharmonic_family(4.0, "tanh", n_max=5)
    coeff = rng.standard_normal(afam.n_max + 1) + 1j * rng.standard_normal(afam.n_max + 1)
    u = afam.f.T @ coeff
    worst = max(worst, float(np.max(np.abs(c_action(afam, u) - c_action_multiplier(afam, u)))))
    if worst > 1e-6:
        raise AssertionError(f"C-routes disagree by {worst:.3e}")
    return f"span and multiplier C-operator routes agree within {worst:.2e}"


def _check_quasibasis_anharmonic(rng) -> str:
    fam = anharmonic_family(4.0, "x_over_1px2", n_max=6)
    sigma, offdiag, ok = sign_pattern(fam)
    if not ok or np.any(sigma != fam.g_parities):
        raise AssertionError(f"indefinite Gram not diag(+/-1) (offdiag {offdiag:.3e})")
    wg = weighted_gram(fam)
    dev = operator_norm(wg - np.eye(fam.n_max + 1))
    if dev > 1e-10:
        raise AssertionError(f"weighted Gram deviates from I by {dev:.3e}")
    lam, residuals = eigen_residual(fam)
    if np.max(residuals) > 1e-4:
        raise AssertionError(f"conjugated-operator residual {np.max(residuals):.3e}")
    if np.max(fam.richardson_error) > 1e-4:
        raise AssertionError("eigenvalue discretization error too large")
    target = fam.f[1] - 2.0 * fam.f[4]
    rep = expansion(fam, target)
    if rep.g_errors[-1] > 1e-8 or np.any(np.diff(rep.g_errors) > 1e-12):
        raise AssertionError("in-span anharmonic expansion failed")
    return (f"beta = 4 family: Gram dev {offdiag:.1e}, weighted Gram dev {dev:.1e}, "
            f"max residual {np.max(residuals):.1e}")


def _check_serialize(rng) -> str:
    m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    back = matrix_from_obj(matrix_to_obj(m))
    if not np.array_equal(back, m):
        raise AssertionError("matrix JSON roundtrip is lossy")
    report = {"b": [1.0, float(np.pi)], "a": {"x": -0.0, "y": 3}, "s": "text"}
    first = dumps_report(report)
    second = dumps_report({"s": "text", "a": {"y": 3, "x": -0.0}, "b": [1.0, float(np.pi)]})
    if first != second:
        raise AssertionError("report serialization is order-sensitive")
    if f"{np.pi:.17g}" not in first:
        raise AssertionError("floats are not serialized at 17 significant digits")
    return "serialization deterministic and lossless"


_CHECKS = {
    "angular.c0_involution": _check_angular_c0,
    "angular.duality": _check_angular_duality,
    "angular.roundtrip": _check_angular_roundtrip,
    "extensions.anticommute_equivalence": _check_anticommute_equivalence,
    "extensions.cayley_roundtrip": _check_cayley_roundtrip,
    "extensions.defect_is_domain_complement": _check_defect_complement,
    "extensions.endpoints_vs_completion": _check_endpoints_vs_completion,
    "extensions.extremality_routes": _check_extremality_routes,
    "extensions.t_half_instance": _check_t_half,
    "extensions.x_solutions": _check_x_solutions,
    "gmetric.consistency": _check_gmetric,
    "model.classification_table": _check_model_table,
    "model.divergence_verdicts": _check_model_divergence,
    "model.finite_truncation_cases": _check_model_truncation_cases,
    "model.series_identity": _check_model_series,
    "quasibasis.anharmonic": _check_quasibasis_anharmonic,
    "quasibasis.c_routes": _check_quasibasis_c_routes,
    "quasibasis.hermite": _check_quasibasis_hermite,
    "serialize.determinism": _check_serialize,
    "spaces.projections": _check_spaces_projections,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _rng_for(seed: int, name: str) -> np.random.Generator:
    digest = hashlib.blake2b(f"{seed}:{name}".encode(), digest_size=8).digest()
    return np.random.default_rng(int.from_bytes(digest, "big"))


def thread_cap(requested: int | None = None) -> int:
    if requested is not None and requested > 0:
        return requested
    env = os.environ.get("KREIN_LAB_THREADS", "")
    try:
        value = int(env)
    except ValueError:
        value = 0
    if value > 0:
        return value
    return min(4, os.cpu_count() or 1)


def _run_one(name: str, seed: int) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = _CHECKS[name](_rng_for(seed, name))
        return CheckResult(name, True, detail, time.perf_counter() - start)
    except Exception as exc:  # noqa: BLE001 - any failure fails the check
        detail = f"{type(exc).__name__}: {exc}"
        return CheckResult(name, False, detail, time.perf_counter() - start)


def run_verification(seed: int = 0, threads: int | None = None) -> list[CheckResult]:
    """Run every registered check; results sorted by name, independent of
    the thread count."""
    names = sorted(_CHECKS)
    workers = thread_cap(threads)
    if workers <= 1:
        return [_run_one(name, seed) for name in names]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {name: pool.submit(_run_one, name, seed) for name in names}
        return [futures[name].result() for name in names]


def verification_report(results: list[CheckResult], seed: int) -> dict:
    """JSON-ready summary (timings excluded: reports must be seed-deterministic)."""
    return {
        "seed": seed,
        "passed": all(r.passed for r in results),
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
    }
