"""Retarded/advanced splitting of causal distributions of finite
singularity order in a scalar dispersion variable.

The retarded part is the boundary value of the function analytic in the
upper half plane:

    ret(E) = (i / 2 pi) PV+delta integral dE' d(E') / (E - E' + i0)
           = d(E)/2 + (i / 2 pi) PV integral dE' d(E') / (E - E')

For singularity order omega >= 0 the kernel carries the subtraction
factor ((E - E0)/(E' - E0))^(omega+1) anchored at the normalization
point E0, and the result is unique only up to an added polynomial
sum_k C_k (E - E0)^k of degree omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .distributions import CausalDistribution, scaling_degree_estimate


class SplitInputError(ValueError):
    """Input distribution not splittable as requested."""


def ambiguity_dimension(omega: int) -> int:
    """Number of free normalization constants of a degree-omega split."""
    return 0 if omega < 0 else omega + 1


@dataclass
class SplitSpec:
    omega: int
    normalization: tuple = ()
    subtraction_point: float = 0.0

    def __post_init__(self):
        self.normalization = tuple(self.normalization)
        need = ambiguity_dimension(self.omega)
        if self.omega >= 0 and len(self.normalization) != need:
            raise SplitInputError(
                f"omega={self.omega} requires {need} normalization constants, "
                f"got {len(self.normalization)}"
            )


@dataclass
class SplitResult:
    retarded: CausalDistribution
    advanced: CausalDistribution


# integration window in the compactified variable u = arctan(E')
_U_EDGE = math.pi / 2 - 1e-10


def _pv_dispersion(dhat, E, omega, E0):
    """PV integral of dhat(E') K(E') / (E - E') over the real line.

    K = 1 for omega < 0, else 1/(E'-E0)^(omega+1).  Compactified with
    E' = tan(u) and evaluated with the Cauchy-weight quadrature.
    """
    u0 = math.atan(E)

    def kernel(Ep):
        if omega < 0:
            return dhat(Ep)
        if Ep == E0:
            # removable: dhat must vanish to order omega+1 at E0
            Ep = E0 + 1e-9 * (1.0 + abs(E0))
        return dhat(Ep) / (Ep - E0) ** (omega + 1)

    def f(u):
        # smooth factor: kernel * sec^2(u) * (u - u0) / (E - tan u)
        if abs(u - u0) < 1e-9:
            return -kernel(E)
        Ep = math.tan(u)
        sec2 = 1.0 + Ep * Ep
        return kernel(Ep) * sec2 * (u - u0) / (E - Ep)

    re, _ = integrate.quad(lambda u: f(u).real, -_U_EDGE, _U_EDGE,
                           weight="cauchy", wvar=u0, limit=400,
                           epsabs=1e-12, epsrel=1e-12)
    im, _ = integrate.quad(lambda u: f(u).imag, -_U_EDGE, _U_EDGE,
                           weight="cauchy", wvar=u0, limit=400,
                           epsabs=1e-12, epsrel=1e-12)
    return re + 1j * im


def split(d: CausalDistribution, spec: SplitSpec) -> SplitResult:
    """Split a causal distribution into retarded and advanced parts."""
    if d.support_tag != "causal":
        raise SplitInputError("input must carry support_tag='causal'")
    if d.eval_fn is None:
        raise SplitInputError("splitting needs a pointwise evaluator in the scalar variable")
    omega = spec.omega
    E0 = spec.subtraction_point
    consts = spec.normalization

    def dhat(E):
        return complex(d.eval_fn(E))

    def ret_eval(E):
        E = float(np.asarray(E).reshape(()))
        pv = _pv_dispersion(dhat, E, omega, E0)
        if omega >= 0:
            pv *= (E - E0) ** (omega + 1)
        val = dhat(E) / 2.0 + (1j / (2.0 * math.pi)) * pv
        for k, C in enumerate(consts):
            val += C * (E - E0) ** k
        return val

    def adv_eval(E):
        return ret_eval(E) - complex(d.eval_fn(float(np.asarray(E).reshape(()))))

    ret = CausalDistribution(eval_fn=ret_eval, mass_params=d.mass_params,
                             omega=omega, support_tag="retarded")
    adv = CausalDistribution(eval_fn=adv_eval, mass_params=d.mass_params,
                             omega=omega, support_tag="advanced")
    return SplitResult(retarded=ret, advanced=adv)


# 1D toy distributions with closed-form retarded parts, used as oracles
# and as CLI built-ins.  Base toy: d(t) = sgn(t) exp(-|t|), whose
# retarded part is theta(t) exp(-t) with transform 1/(1 - iE).

def toy_causal(power: int = 0) -> CausalDistribution:
    """Transform of (-i d/dt)^power applied to sgn(t) exp(-|t|).

    power = 0 has singularity order -1; power = p has order p - 1 and
    exact retarded transform E^p / (1 - iE).
    """
    if power < 0:
        raise ValueError("power must be nonnegative")

    def eval_fn(E):
        E = float(np.asarray(E).reshape(()))
        return (E ** power) * 2j * E / (1.0 + E * E)

    return CausalDistribution(eval_fn=eval_fn, mass_params=(),
                              omega=power - 1, support_tag="causal")


def toy_retarded_exact(power: int = 0):
    """Closed-form retarded transform of toy_causal(power)."""

    def r(E):
        E = float(np.asarray(E).reshape(()))
        return (E ** power) / (1.0 - 1j * E)

    return r


def polynomial_fit_residual(values_diff, Es, degree: int) -> float:
    """RMS residual of a degree-`degree` polynomial fit to a sample set."""
    Es = np.asarray(Es, dtype=float)
    vals = np.asarray(values_diff, dtype=complex)
    coef_re = np.polyfit(Es, vals.real, degree)
    coef_im = np.polyfit(Es, vals.imag, degree)
    fit = np.polyval(coef_re, Es) + 1j * np.polyval(coef_im, Es)
    return float(np.sqrt(np.mean(np.abs(vals - fit) ** 2)))


def reconstruction_residual(d: CausalDistribution, result: SplitResult, Es) -> float:
    """Max |ret - adv - d| over sample points, scaled by max |d|."""
    worst = 0.0
    scale = max(abs(complex(d.eval_fn(E))) for E in Es)
    for E in Es:
        r = complex(result.retarded.eval_fn(E))
        a = complex(result.advanced.eval_fn(E))
        worst = max(worst, abs(r - a - complex(d.eval_fn(E))))
    return worst / max(scale, 1e-300)


def order_preservation_check(d: CausalDistribution, result: SplitResult):
    """Scaling exponents (input, retarded) along the scalar ray E > 0."""

    def scalar_ray(f):
        return lambda p: f(float(np.asarray(p).reshape(-1)[0]))

    direction = [1.0, 0.0, 0.0, 0.0]
    e_in = scaling_degree_estimate(scalar_ray(d.eval_fn), direction)
    e_ret = scaling_degree_estimate(scalar_ray(result.retarded.eval_fn), direction)
    return e_in, e_ret
