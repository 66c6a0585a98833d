import numpy as np
import pytest

from causalqed.distributions import CausalDistribution, propagator_distribution
from causalqed.splitting import (SplitInputError, SplitSpec,
                                 ambiguity_dimension,
                                 order_preservation_check,
                                 polynomial_fit_residual,
                                 reconstruction_residual, split, toy_causal,
                                 toy_retarded_exact)

ES = np.linspace(-5.0, 5.0, 21)


def test_ambiguity_dimension():
    assert ambiguity_dimension(-3) == 0
    assert ambiguity_dimension(-1) == 0
    assert ambiguity_dimension(0) == 1
    assert ambiguity_dimension(2) == 3


def test_spec_validates_constant_count():
    with pytest.raises(SplitInputError):
        SplitSpec(omega=1, normalization=(0.0,))
    SplitSpec(omega=1, normalization=(0.0, 0.0))
    SplitSpec(omega=-2)


def test_split_requires_causal_support_and_evaluator():
    with pytest.raises(SplitInputError):
        split(propagator_distribution("Dret", 1.0), SplitSpec(omega=-2))
    measure_only = CausalDistribution(shell=lambda p: [], support_tag="causal")
    with pytest.raises(SplitInputError):
        split(measure_only, SplitSpec(omega=-2))


def test_negative_order_split_matches_oracle():
    d = toy_causal(0)
    exact = toy_retarded_exact(0)
    result = split(d, SplitSpec(omega=-1))
    for E in ES:
        assert abs(result.retarded.eval_fn(E) - exact(E)) < 1e-8


def test_nonnegative_order_split_matches_oracle():
    d = toy_causal(3)
    exact = toy_retarded_exact(3)
    result = split(d, SplitSpec(omega=2, normalization=(0.0, 0.0, 0.0)))
    for E in ES:
        assert abs(result.retarded.eval_fn(E) - exact(E)) < 1e-7


def test_normalization_polynomial_is_added_verbatim():
    d = toy_causal(3)
    base = split(d, SplitSpec(omega=2, normalization=(0.0, 0.0, 0.0)))
    shifted = split(d, SplitSpec(omega=2, normalization=(1.0, -2.0, 0.5)))
    for E in (-3.0, 0.7, 2.0):
        diff = shifted.retarded.eval_fn(E) - base.retarded.eval_fn(E)
        assert diff == pytest.approx(1.0 - 2.0 * E + 0.5 * E * E, abs=1e-12)


def test_reconstruction_is_exact_by_construction():
    d = toy_causal(2)
    result = split(d, SplitSpec(omega=1, normalization=(0.0, 0.0)))
    assert reconstruction_residual(d, result, ES) == 0.0


def test_polynomial_fit_residual():
    vals = [1.0 + 2.0 * E - 0.5 * E * E for E in ES]
    assert polynomial_fit_residual(vals, ES, 2) < 1e-12
    assert polynomial_fit_residual(vals, ES, 1) > 1e-2


def test_order_preservation():
    d = toy_causal(3)
    result = split(d, SplitSpec(omega=2, normalization=(0.0, 0.0, 0.0)))
    e_in, e_ret = order_preservation_check(d, result)
    assert e_in == pytest.approx(2.0, abs=0.1)
    assert e_ret == pytest.approx(e_in, abs=0.2)


def test_toy_power_validation():
    with pytest.raises(ValueError):
        toy_causal(-1)
