import numpy as np
import pytest

from kreinlab import (
    GMetric,
    SignatureSpace,
    energetic_norm,
    g_inner,
    indefinite_product,
    jg_product,
    max_subspaces,
    metric_report,
    xi_norm_identity_residual,
)
from kreinlab.errors import CayleyUndefinedError
from kreinlab.verify import random_anticommuting_contraction, random_signature_space

T_HALF = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)


def metric_for(j2, t):
    return GMetric.from_contraction(SignatureSpace(j2), t)


def test_zero_contraction_recovers_euclidean(j2, rng):
    m = metric_for(j2, np.zeros((2, 2)))
    np.testing.assert_allclose(m.g, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(m.j_g, j2, atol=1e-14)
    f = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    g = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    assert g_inner(m, f, g) == pytest.approx(complex(np.vdot(g, f)))
    assert jg_product(m, f, g) == pytest.approx(
        indefinite_product(m.space, f, g)
    )


def test_g_product_on_maximal_subspaces(j2):
    m = metric_for(j2, T_HALF)
    f = np.array([1.0, 0.5], dtype=complex)
    # on L_+^max the G-product reproduces the indefinite product: 1 - 1/4
    assert g_inner(m, f, f) == pytest.approx(0.75)
    pair = max_subspaces(m.space, T_HALF)
    f_plus = pair.l_plus.basis[:, 0]
    f_minus = pair.l_minus.basis[:, 0]
    assert abs(g_inner(m, f_plus, f_minus)) < 1e-12


@pytest.mark.parametrize("seed", range(8))
def test_indefinite_products_agree(seed):
    rng = np.random.default_rng(1000 + seed)
    space = random_signature_space(rng)
    t = random_anticommuting_contraction(rng, space)
    m = GMetric.from_contraction(space, t)
    for _ in range(5):
        f = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        g = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        lhs = jg_product(m, f, g)
        rhs = indefinite_product(space, f, g)
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_neutral_vector_stays_neutral(j2):
    m = metric_for(j2, T_HALF)
    f = np.array([1.0, 1.0], dtype=complex)
    assert abs(jg_product(m, f, f)) < 1e-12


def test_energetic_norm_values(j2):
    m = metric_for(j2, np.zeros((2, 2)))
    f = np.array([1.0, 0.0], dtype=complex)
    assert energetic_norm(m, f) == pytest.approx(np.sqrt(2.0))
    assert energetic_norm(m, np.zeros(2)) == 0.0
    # T = diag(1/2, -1/2) gives G = diag(1/3, 3)
    md = metric_for(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
                    np.diag([0.5, -0.5]).astype(complex))
    np.testing.assert_allclose(md.g, np.diag([1.0 / 3.0, 3.0]), atol=1e-12)
    assert energetic_norm(md, f) == pytest.approx(np.sqrt(1.0 + 1.0 / 3.0))


@pytest.mark.parametrize("seed", range(8))
def test_xi_norm_identity(seed):
    # ||(I + T)x||_G = ||Xi x|| with Xi = sqrt(I - T^2)
    rng = np.random.default_rng(1100 + seed)
    space = random_signature_space(rng)
    t = random_anticommuting_contraction(rng, space)
    m = GMetric.from_contraction(space, t)
    for _ in range(5):
        x = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        assert xi_norm_identity_residual(m, x) < 1e-10


def test_unit_norm_contraction_fails_loudly(j2):
    with pytest.raises(CayleyUndefinedError):
        metric_for(j2, np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))


def test_metric_report_structure(j2):
    m = metric_for(j2, T_HALF)
    rep = metric_report(m, seed=5)
    assert not rep["degenerate"]
    assert rep["cond_G"] == pytest.approx(9.0)
    for key in ("inner_decomposition", "jg_vs_ambient", "xi_norm_identity"):
        assert rep["agreement_residuals"][key] < 1e-10
