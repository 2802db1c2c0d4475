import math

import numpy as np
import pytest

vpfp = pytest.importorskip("vpfp")


def test_basis_dimension():
    # graded-lex Hermite basis in 3 velocities: C(N+3, 3)
    assert vpfp.basis_dimension(4) == 35
    assert len(vpfp.basis_manifest_hash(4)) > 0


def test_fluid_eigenvalue_of_A_at_zero():
    ev = np.array(vpfp.spectrum("A", 1e-9, 6))
    assert ev.real.max() == pytest.approx(-2.0, abs=1e-6)


def test_semigroup_is_contractive():
    E = vpfp.semigroup("B", 0.7, 1.5, 8)
    assert np.linalg.norm(E, 2) <= 1.0 + 1e-10
    I = vpfp.semigroup("B", 0.7, 0.0, 8)
    assert np.allclose(I, np.eye(I.shape[0]))


def test_variance_small_t():
    assert vpfp.variance_D(1e-3) / 1e-12 == pytest.approx(1 / 12, rel=1e-2)


def test_kernel_symmetry():
    v, u = (0.5, 0.1, -0.3), (0.2, 0.0, 0.1)
    a = vpfp.eval_G1_hat(0.7, (1.0, 0.2, 0.0), v, u)
    b = vpfp.eval_G1_hat(0.7, (1.0, 0.2, 0.0), u, v)
    assert abs(a - b) <= 1e-14 * abs(a)


def test_gaussian_self_dual():
    k = np.linspace(0.0, 12.0, 2401)
    x = [0.5, 1.0, 2.0]
    g = vpfp.radial_reconstruct(k, np.exp(-0.5 * k**2), x)
    assert np.allclose(np.real(g), np.exp(-0.5 * np.square(x)), atol=1e-8)


def test_fit_decay_power_law():
    r = np.linspace(5.0, 50.0, 46)
    f = vpfp.fit_decay(r, (1 + r**2) ** -2, 5.0, 50.0)
    assert f["exponent_x"] == pytest.approx(4.0, abs=0.01)


def test_usage_errors():
    with pytest.raises(ValueError):
        vpfp.cutoff_chi(0.1, 0.5, "middle")
    with pytest.raises(ValueError):
        vpfp.operator_matrix("Q", 1.0, 4)


def test_linear_simulation_conserves_mass():
    d = vpfp.simulate(max_degree=4, linear_only=True, t_end=1.0, dt=0.1)
    m = np.array(d["mass"])
    assert np.all(np.abs(m - m[0]) <= 1e-10 * max(1.0, abs(m[0])))
    assert all(math.isfinite(e) for e in d["energy"])
