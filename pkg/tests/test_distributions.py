import json
import math

import numpy as np
import pytest

from causalqed.distributions import (GAMMA, IDENTITY4, METRIC,
                                     CausalDistribution, ExternalLineSpec,
                                     PoleProximityError, descriptor_from_json,
                                     minkowski, pauli_jordan,
                                     propagator_distribution,
                                     ret_adv_commutation,
                                     scaling_degree_estimate, shell_energy,
                                     singularity_bound, slash, smear_shell)


def test_gamma_clifford_algebra():
    for mu in range(4):
        for nu in range(4):
            anti = GAMMA[mu] @ GAMMA[nu] + GAMMA[nu] @ GAMMA[mu]
            assert np.allclose(anti, 2.0 * METRIC[mu, nu] * IDENTITY4)


def test_slash_squares_to_p2():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = rng.normal(size=4)
        assert np.allclose(slash(p) @ slash(p), minkowski(p, p) * IDENTITY4)


def test_minkowski_signature():
    assert minkowski([1, 0, 0, 0], [1, 0, 0, 0]) == 1.0
    assert minkowski([0, 1, 0, 0], [0, 1, 0, 0]) == -1.0


def test_pauli_jordan_shell_weights():
    d = pauli_jordan(0.5)
    pts = d.shell_points([0.3, 0.0, 0.4])
    E = shell_energy(0.5, [0.3, 0.0, 0.4])
    assert pts[0] == (E, 1j * math.pi / E)
    assert pts[1] == (-E, -1j * math.pi / E)


def test_smear_shell_even_test_function_vanishes():
    # weights are odd under p0 -> -p0, so even g pairs to zero
    d = pauli_jordan(1.0)
    grid = np.linspace(0.1, 2.0, 8)
    w = np.full(8, grid[1] - grid[0])
    val = smear_shell(d, lambda p: math.exp(-p[0] * p[0]), grid, w)
    assert abs(val) < 1e-14


def test_retarded_advanced_difference_localizes_on_shell():
    # (Dret - Dav)(p) = 2 i eps p0 / ((m^2-p^2)^2 + (eps p0)^2): a nascent
    # signed shell delta; off shell it vanishes linearly in eps
    m = 1.0
    p = np.array([0.7, 0.2, 0.0, 0.1])  # p^2 != m^2
    for eps in (1e-4, 1e-6):
        diff = (ret_adv_commutation("Dret", m, p, eps=eps)
                - ret_adv_commutation("Dav", m, p, eps=eps))
        assert abs(diff) < 10 * eps


def test_propagator_formulas():
    p = np.array([0.3, 0.1, 0.0, 0.2])
    m = 1.2
    got = ret_adv_commutation("Feynman", m, p, eps=1e-10)
    assert got == pytest.approx(1.0 / (m * m - minkowski(p, p) - 1e-10j))
    S = ret_adv_commutation("Sret", m, p, eps=1e-8)
    scalar = ret_adv_commutation("Dret", m, p, eps=1e-8)
    assert np.allclose(S, (m * IDENTITY4 + slash(p)) * scalar)


def test_pole_proximity_guard():
    with pytest.raises(PoleProximityError):
        ret_adv_commutation("Feynman", 1.0, [1.0, 0.0, 0.0, 0.0], eps=0.0)


def test_singularity_bounds():
    assert singularity_bound(ExternalLineSpec(fermion_lines=2)) == 1
    assert singularity_bound(ExternalLineSpec(photon_lines=2)) == 2
    assert singularity_bound(ExternalLineSpec(fermion_lines=2, photon_lines=1)) == 0
    assert singularity_bound(ExternalLineSpec(fermion_lines=1, photon_lines=1)) == 1
    assert singularity_bound(
        ExternalLineSpec(boson_lines=3, derivatives=1), theory="yangmills") == 0
    with pytest.raises(ValueError):
        singularity_bound(ExternalLineSpec(), theory="phi4")
    with pytest.raises(ValueError):
        ExternalLineSpec(fermion_lines=-1)


def test_scaling_degree_estimate_on_powers():
    for power in (-2, 1, 3):
        est = scaling_degree_estimate(
            lambda p, q=power: minkowski(p, p) ** q if q > 0
            else abs(minkowski(p, p)) ** q,
            [1.0, 0.0, 0.0, 0.0])
        assert est == pytest.approx(2 * power, abs=1e-6)


def test_scaling_degree_estimate_rejects_zero_rays():
    with pytest.raises(ArithmeticError):
        scaling_degree_estimate(lambda p: 0.0, [1.0, 0.0, 0.0, 0.0])


def test_descriptor_json():
    d = descriptor_from_json(json.dumps({"kind": "pauli_jordan", "mass": 0.5}))
    assert d.support_tag == "causal"
    r = descriptor_from_json(json.dumps({"kind": "Dret", "mass": 1.0}))
    assert r.support_tag == "retarded"
    p = np.array([0.2, 0.0, 0.0, 0.0])
    assert r(p) == pytest.approx(ret_adv_commutation("Dret", 1.0, p))


def test_distribution_call_guards():
    d = pauli_jordan(1.0)
    with pytest.raises(TypeError):
        d([1.0, 0.0, 0.0, 0.0])
    f = propagator_distribution("Feynman", 1.0)
    with pytest.raises(TypeError):
        f.shell_points([0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        CausalDistribution(mass_params=(-1.0,))
