"""Self-adjoint contractive extensions of a symmetric partial contraction.

The admissible extensions of T0 form an operator interval [T_mu, T_M]; the
endpoints are produced by the square-root/projection corrections

    T_mu = T - sqrt(I+T) Q_1 sqrt(I+T),   T_M = T + sqrt(I-T) Q_2 sqrt(I-T),

where T is any anticommuting self-adjoint contractive extension and Q_1/Q_2
project onto the orthogonal complements of sqrt(I+T) D(T0) and
sqrt(I-T) D(T0).  Extensions are parametrized by 0 <= X <= I on the defect
space M = ran(T_M - T_mu), and T anticommutes with J iff X solves

    X = J (I - X) J   (restricted to M).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import (
    RANK_RCOND,
    STRUCT_TOL,
    as_matrix,
    eig_min_herm,
    herm_residual,
    hermitize,
    inner,
    operator_norm,
    orthonormal_columns,
    orthonormal_complement,
    psd_sqrt,
    random_unitary,
)
from .angular import PartialContraction, duality_test
from .errors import CayleyUndefinedError, InvariantViolation
from .spaces import SignatureSpace, Subspace

# Eigenvalues of T_M - T_mu above this (relative to the largest) span the
# defect space; below, the direction is considered rigid.
DEFECT_RCOND = 1e-8
# Absolute floor: a difference this small means case A (no defect at all).
DEFECT_FLOOR = 1e-10


def _blocks(t0: PartialContraction) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Quasi-unitary column split [D | E] and the fixed blocks A, B of T0."""
    d = t0.domain
    e = orthonormal_complement(d, t0.space.dim)
    a = hermitize(d.conj().T @ t0.action)
    b = e.conj().T @ t0.action
    return d, e, a, b


def any_sa_extension(t0: PartialContraction) -> np.ndarray:
    """Some self-adjoint contractive extension of T0 (interval midpoint).

    In the block form wrt D (+) D^perp the admissible lower-right blocks form
    the operator interval [-I + B(I+A)^{-1}B*, I - B(I-A)^{-1}B*]; the
    midpoint is completed in.
    """
    if not duality_test(t0):
        raise InvariantViolation("extension theory needs a symmetric T0")
    n = t0.space.dim
    d, e, a, b = _blocks(t0)
    k = e.shape[1]
    if k == 0:
        return hermitize(t0.action @ d.conj().T)
    eye_d = np.eye(d.shape[1])
    c_min = -np.eye(k) + b @ np.linalg.solve(eye_d + a, b.conj().T)
    c_max = np.eye(k) - b @ np.linalg.solve(eye_d - a, b.conj().T)
    c_mid = hermitize(0.5 * (c_min + c_max))
    t = d @ a @ d.conj().T + e @ b @ d.conj().T + d @ b.conj().T @ e.conj().T \
        + e @ c_mid @ e.conj().T
    t = hermitize(t)
    if operator_norm(t) > 1.0 + 1e-10:
        raise InvariantViolation("completed midpoint is not a contraction")
    return t


def j_symmetrize(space: SignatureSpace, t_prime, t0: PartialContraction | None = None,
                 tol: float = STRUCT_TOL) -> np.ndarray:
    """T = (T' - J T' J)/2: anticommutes with J exactly, stays a contraction,
    and still extends T0 whenever T' does (the domain is J-invariant)."""
    t_prime = as_matrix(t_prime)
    if herm_residual(t_prime) > tol * max(1.0, operator_norm(t_prime)):
        raise InvariantViolation("input to j_symmetrize must be self-adjoint")
    if operator_norm(t_prime) > 1.0 + 1e-10:
        raise InvariantViolation("input to j_symmetrize must be a contraction")
    if t0 is not None:
        if operator_norm(t_prime @ t0.domain - t0.action) > tol:
            raise InvariantViolation("input does not extend T0")
    return hermitize(0.5 * (t_prime - space.j @ t_prime @ space.j))


@dataclass
class ExtensionInterval:
    """Operator interval of self-adjoint contractive extensions."""

    space: SignatureSpace
    t0: PartialContraction
    t_mu: np.ndarray
    t_m: np.ndarray
    defect: Subspace
    signature: tuple[int, int]
    seed_extension: np.ndarray = field(repr=False)

    @property
    def defect_dim(self) -> int:
        return self.defect.dim

    def j_on_defect(self) -> np.ndarray:
        mb = self.defect.basis
        return hermitize(mb.conj().T @ self.space.j @ mb)

    def delta_half(self) -> np.ndarray:
        return psd_sqrt(hermitize(self.t_m - self.t_mu))


def krein_interval(t0: PartialContraction, seed_extension=None,
                   tol: float = STRUCT_TOL) -> ExtensionInterval:
    """Extreme extensions via the square-root/projection corrections.

    seed_extension may supply any anticommuting self-adjoint contractive
    extension; the endpoints do not depend on the choice.
    """
    space = t0.space
    n = space.dim
    if seed_extension is None:
        t = j_symmetrize(space, any_sa_extension(t0), t0)
    else:
        t = hermitize(as_matrix(seed_extension))
        if operator_norm(space.j @ t + t @ space.j) > tol:
            raise InvariantViolation("seed extension must anticommute with J")
        if operator_norm(t @ t0.domain - t0.action) > tol:
            raise InvariantViolation("seed does not extend T0")
        if operator_norm(t) > 1.0 + 1e-10:
            raise InvariantViolation("seed extension is not a contraction")
    eye = np.eye(n)
    sqrt_plus = psd_sqrt(eye + t)
    sqrt_minus = psd_sqrt(eye - t)
    corrections = []
    for s in (sqrt_plus, sqrt_minus):
        u = orthonormal_columns(s @ t0.domain)
        q = eye - u @ u.conj().T
        corrections.append(hermitize(s @ q @ s))
    t_mu = hermitize(t - corrections[0])
    t_m = hermitize(t + corrections[1])

    delta = hermitize(t_m - t_mu)
    w, v = np.linalg.eigh(delta)
    if w[0] < -tol:
        raise InvariantViolation("interval order failed: T_M - T_mu not PSD")
    top = float(w[-1])
    if top <= DEFECT_FLOOR:
        defect = Subspace.empty(n)
    else:
        keep = w > DEFECT_RCOND * top
        defect = Subspace(v[:, keep])

    # Structural invariants of the endpoint pair.
    for endpoint in (t_mu, t_m):
        if operator_norm(endpoint @ t0.domain - t0.action) > 1e-8:
            raise InvariantViolation("interval endpoint does not extend T0")
        if operator_norm(endpoint) > 1.0 + 1e-8:
            raise InvariantViolation("interval endpoint is not a contraction")
    if operator_norm(space.j @ t_mu + t_m @ space.j) > tol * max(1.0, operator_norm(t_m)):
        raise InvariantViolation("J T_mu != -T_M J")

    if defect.dim:
        mb = defect.basis
        jm = mb.conj().T @ space.j @ mb
        if operator_norm(space.j @ mb - mb @ jm) > 1e-8:
            raise InvariantViolation("defect space is not J-invariant")
        ev = np.linalg.eigvalsh(hermitize(jm))
        if np.max(np.abs(np.abs(ev) - 1.0)) > 1e-8:
            raise InvariantViolation("J does not restrict to a symmetry of the defect")
        p = int(np.sum(ev > 0))
        q = defect.dim - p
    else:
        p = q = 0
    return ExtensionInterval(space, t0, t_mu, t_m, defect, (p, q), t)


def classify_case(interval: ExtensionInterval, tol: float = DEFECT_FLOOR) -> str:
    """A: unique extension; B: balanced defect signature; C: unbalanced."""
    if operator_norm(interval.t_m - interval.t_mu) < tol:
        return "A"
    p, q = interval.signature
    return "B" if p == q else "C"


def x_equation_residual(x, j_defect) -> float:
    """|| X - J (I - X) J || on the defect space."""
    x = as_matrix(x)
    j = as_matrix(j_defect)
    return operator_norm(x - j @ (np.eye(x.shape[0]) - x) @ j)


def symmetrize_solution(x, j_defect) -> np.ndarray:
    """Project any 0 <= X <= I onto a solution of X = J(I-X)J:
    (X + J(I-X)J)/2 always solves the equation and stays in [0, I]."""
    x = as_matrix(x)
    j = as_matrix(j_defect)
    return hermitize(0.5 * (x + j @ (np.eye(x.shape[0]) - x) @ j))


@dataclass
class XSolutionSet:
    """Solutions of the anticommutation equation on the defect space."""

    elementary: np.ndarray               # X = I/2, always a solution
    projection_exists: bool              # iff the defect signature is balanced
    projections: list[np.ndarray]        # orthogonal-projection solutions
    signature: tuple[int, int]
    note: str

    def affine(self, x0: np.ndarray, alpha: float) -> np.ndarray:
        """(1 - alpha) X0 + alpha (I - X0): solutions for all alpha in [0, 1]."""
        return (1.0 - alpha) * x0 + alpha * (np.eye(x0.shape[0]) - x0)


def solve_x_equation(interval: ExtensionInterval, seed: int | None = None,
                     n_projection_samples: int = 1,
                     tol: float = STRUCT_TOL) -> XSolutionSet:
    """Describe the solution family of X = J(I-X)J on the defect space.

    X = I/2 always solves.  Orthogonal-projection solutions exist iff the
    defect signature is balanced (p = q); they are projections onto
    hypermaximal neutral subspaces M_1 built by pairing +1 and -1
    eigenvectors of J restricted to the defect, and a seed samples
    alternative pairings (there are infinitely many for p = q >= 1).
    """
    m = interval.defect_dim
    if m == 0:
        raise ValueError("the defect space is trivial; the extension is unique")
    jm = interval.j_on_defect()
    elementary = 0.5 * np.eye(m)
    p, q = interval.signature
    projections: list[np.ndarray] = []
    if p == q:
        w, v = np.linalg.eigh(jm)
        u_minus = v[:, :q]
        u_plus = v[:, q:]
        pairings = [(np.eye(p), np.eye(q))]
        if seed is not None and n_projection_samples > 0:
            rng = np.random.default_rng(seed)
            pairings = [
                (random_unitary(rng, p), random_unitary(rng, q))
                for _ in range(n_projection_samples)
            ]
        for v_plus, v_minus in pairings:
            m1 = (u_plus @ v_plus + jm @ (u_minus @ v_minus)) / np.sqrt(2.0)
            x = hermitize(m1 @ m1.conj().T)
            projections.append(x)
        note = "projection solutions onto hypermaximal neutral subspaces (infinitely many)"
    else:
        note = "no projection solutions: defect signature is unbalanced"
    for x in [elementary, *projections]:
        if x_equation_residual(x, jm) > tol:
            raise InvariantViolation("constructed X does not solve the equation")
        ev = np.linalg.eigvalsh(hermitize(x))
        if ev[0] < -tol or ev[-1] > 1.0 + tol:
            raise InvariantViolation("constructed X leaves [0, I]")
    return XSolutionSet(elementary, p == q, projections, (p, q), note)


@dataclass
class ExtensionChoice:
    """A single extension T = T_mu + Delta^{1/2} X Delta^{1/2}."""

    x: np.ndarray                        # in defect-space coordinates
    t: np.ndarray                        # ambient matrix
    anticommuting: bool
    extremal: bool
    x_residual: float
    anticommute_residual: float


def extension_from_x(interval: ExtensionInterval, x,
                     tol: float = STRUCT_TOL) -> ExtensionChoice:
    """Realize the extension parametrized by 0 <= X <= I on the defect space.

    The anticommutation flag is computed both as ||J T + T J|| and through
    the X-equation residual; the two verdicts must agree.
    """
    m = interval.defect_dim
    x = as_matrix(x)
    if x.shape != (m, m):
        raise ValueError(f"X must be {m}x{m} on the defect space")
    if herm_residual(x) > tol * max(1.0, operator_norm(x)):
        raise ValueError("X must be self-adjoint")
    ev = np.linalg.eigvalsh(hermitize(x))
    if m and (ev[0] < -tol or ev[-1] > 1.0 + tol):
        raise ValueError("X must satisfy 0 <= X <= I")
    mb = interval.defect.basis
    x_full = mb @ x @ mb.conj().T
    dh = interval.delta_half()
    t = hermitize(interval.t_mu + dh @ x_full @ dh)

    space = interval.space
    anti_resid = operator_norm(space.j @ t + t @ space.j)
    x_resid = x_equation_residual(x, interval.j_on_defect()) if m else 0.0
    anticommuting = anti_resid <= tol
    if anticommuting != (x_resid <= tol):
        raise InvariantViolation(
            "anticommutation verdicts disagree between the ambient and "
            f"defect-space tests (residuals {anti_resid:.3e} / {x_resid:.3e})"
        )
    extremal = bool(operator_norm(x @ x - x) <= tol) if m else True
    # Interval membership.
    if eig_min_herm(t - interval.t_mu) < -tol or eig_min_herm(interval.t_m - t) < -tol:
        raise InvariantViolation("realized extension leaves the interval")
    if operator_norm(t @ interval.t0.domain - interval.t0.action) > 1e-8:
        raise InvariantViolation("realized extension does not extend T0")
    return ExtensionChoice(x, t, anticommuting, extremal, x_resid, anti_resid)


def cayley(t, tol: float = STRUCT_TOL) -> np.ndarray:
    """G = (I - T)(I + T)^{-1} of a self-adjoint contraction, spectral form."""
    t = hermitize(as_matrix(t))
    w, v = np.linalg.eigh(t)
    if np.min(1.0 + w) < tol:
        raise CayleyUndefinedError(
            "-1 is in the spectrum; the metric operator would be unbounded"
        )
    g = (1.0 - w) / (1.0 + w)
    return hermitize((v * g) @ v.conj().T)


def cayley_inverse(g, tol: float = STRUCT_TOL) -> np.ndarray:
    """T = (I - G)(I + G)^{-1} of a PSD matrix; inverse of `cayley`."""
    g = hermitize(as_matrix(g))
    w, v = np.linalg.eigh(g)
    if w[0] < -tol:
        raise InvariantViolation("metric operator must be positive semidefinite")
    w = np.clip(w, 0.0, None)
    t = (1.0 - w) / (1.0 + w)
    return hermitize((v * t) @ v.conj().T)


@dataclass(frozen=True)
class ExtremalityResult:
    extremal: bool
    projection_criterion: bool
    rank_criterion: bool | None          # None when the Cayley transform fails
    cayley_defined: bool


def extremality_test(t0: PartialContraction, choice: ExtensionChoice,
                     tol: float = STRUCT_TOL) -> ExtremalityResult:
    """Extremality of an extension, by two routes.

    Projection route: || X^2 - X || <= tol on the defect space.  Metric
    route (when -1 is not in the spectrum): G^{1/2} (I + T) D(T0) must span
    G^{1/2} H, i.e. the domain is dense in the metric seminorm.  The routes
    are asserted to agree whenever both are computable.
    """
    proj = bool(operator_norm(choice.x @ choice.x - choice.x) <= tol) \
        if choice.x.size else True
    try:
        g = cayley(choice.t)
    except CayleyUndefinedError:
        return ExtremalityResult(proj, proj, None, False)
    w = np.linalg.eigvalsh(g)
    top = float(w[-1])
    if top <= 0.0:
        rank_g = 0
    else:
        rank_g = int(np.sum(w > tol * top))
    f = (np.eye(t0.space.dim) + choice.t) @ t0.domain
    fu = orthonormal_columns(f)
    if fu.shape[1] != f.shape[1]:
        raise InvariantViolation("(I + T) lost rank on the domain despite Cayley existing")
    if fu.shape[1] == 0 or top <= 0.0:
        rank_gf = 0
    else:
        gh = psd_sqrt(g)
        s = np.linalg.svd(gh @ fu, compute_uv=False)
        rank_gf = int(np.sum(s * s > tol * top))
    rank_crit = rank_gf == rank_g
    if rank_crit != proj:
        raise InvariantViolation(
            f"extremality routes disagree (projection {proj}, rank {rank_crit})"
        )
    return ExtremalityResult(proj, proj, rank_crit, True)


@dataclass
class MaximalDualPair:
    """Maximal definite pair (I + T) H_+/- with degeneracy diagnostics."""

    l_plus: Subspace
    l_minus: Subspace
    neutral_plus: list[np.ndarray]
    neutral_minus: list[np.ndarray]
    rank_loss_plus: int
    rank_loss_minus: int

    @property
    def degenerate(self) -> bool:
        return bool(self.neutral_plus or self.neutral_minus
                    or self.rank_loss_plus or self.rank_loss_minus)


def max_subspaces(space: SignatureSpace, t, neutral_tol: float = 1e-9) -> MaximalDualPair:
    """Maximal subspace pair of an anticommuting self-adjoint contraction.

    For ||T|| = 1 individual image directions may become neutral (or
    collapse); they are reported rather than silently classified.
    """
    t = hermitize(as_matrix(t))
    if operator_norm(space.j @ t + t @ space.j) > STRUCT_TOL:
        raise InvariantViolation("T must anticommute with J")
    if operator_norm(t) > 1.0 + 1e-10:
        raise InvariantViolation("T must be a contraction")
    eye = np.eye(space.dim)
    out = []
    for basis in (space.plus_basis(), space.minus_basis()):
        img = (eye + t) @ basis
        u = orthonormal_columns(img, floor=1.0)
        rank_loss = basis.shape[1] - u.shape[1]
        neutral = []
        if u.shape[1]:
            gram = hermitize(u.conj().T @ space.j @ u)
            w, v = np.linalg.eigh(gram)
            for k in range(len(w)):
                if abs(w[k]) < neutral_tol:
                    neutral.append(u @ v[:, k])
        out.append((Subspace(u) if u.shape[1] else Subspace.empty(space.dim),
                    neutral, rank_loss))
    (lp, np_, rp), (lm, nm, rm) = out
    return MaximalDualPair(lp, lm, np_, nm, rp, rm)


def density_test(t0: PartialContraction, t, tol: float = STRUCT_TOL) -> bool:
    """True iff ran(Xi) cap D(T0)^perp = {0} for Xi = sqrt(I - T^2).

    This is the finite-dimensional rendering of density of the domain in
    the energetic space of the extension.
    """
    t = hermitize(as_matrix(t))
    n = t0.space.dim
    xi_sq = hermitize(np.eye(n) - t @ t)
    w, v = np.linalg.eigh(xi_sq)
    top = max(float(w[-1]), 0.0)
    if top == 0.0:
        return True
    ran = v[:, w > RANK_RCOND * top]
    comp = orthonormal_complement(t0.domain, n)
    if comp.shape[1] == 0 or ran.shape[1] == 0:
        return True
    cos = operator_norm(ran.conj().T @ comp)
    return cos < 1.0 - tol


def uniqueness_sup(t0: PartialContraction, g) -> float:
    """sup over the domain of |(T0 x, g)|^2 / (||x||^2 - ||T0 x||^2).

    Finite-truncation diagnostic only: the sup is always finite for a
    strong contraction on a finite-dimensional domain, so it can only be
    read as a trend across truncations, never as a rigidity verdict.
    """
    g = np.asarray(g, dtype=complex)
    a = t0.action
    if a.shape[1] == 0:
        return 0.0
    s = hermitize(a.conj().T @ a)
    w, v = np.linalg.eigh(s)
    if np.max(w) >= 1.0:
        raise InvariantViolation("strong contraction required")
    inv_half = (v / np.sqrt(1.0 - w)) @ v.conj().T
    vec = inv_half @ (a.conj().T @ g)
    return float(np.real(np.vdot(vec, vec)))
