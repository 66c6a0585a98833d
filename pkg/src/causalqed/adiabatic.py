"""Adiabatic switching: the scaling family g_eps(x) = g(eps x), smeared
second-order interacting-field contributions along eps -> 0+, and the
convergence/divergence classification of the resulting sweeps.

The smeared shell contribution is modeled after the convolution
mechanism: a retarded propagator evaluated on the mass shell produces an
explicit 1/(-i eps p0) factor multiplying the on-shell value of the
Green function (the dangerous coefficient), plus a regular part with a
finite eps -> 0 limit.  With on-shell normalization the dangerous
coefficient vanishes identically and the sweep converges; any other
normalization leaves a 1/eps divergence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .fock import DiscreteKernel, MomentumGrid
from .qed2 import SelfEnergy, VacuumPolarization, causal_imaginary_part

DEFAULT_SCHEDULE = tuple(2.0 ** (-k) for k in range(3, 15))

CHANNELS = ("Sigma_into_psi", "Pi_into_A", "Pi_into_current", "massless_charge")


@dataclass
class ScalingFamily:
    """Scaling family of switching functions via the transform profile.

    g_hat is the Fourier transform of the profile g with g(0) = alpha0;
    g_eps(x) = g(eps x) corresponds to g_hat_eps(p) = eps^-4 g_hat(p/eps).
    """

    g_hat: object
    alpha0: float = 1.0
    epsilon_schedule: tuple = DEFAULT_SCHEDULE

    def __post_init__(self):
        sched = tuple(self.epsilon_schedule)
        if any(e <= 0 for e in sched):
            raise ValueError("epsilon schedule must be positive")
        if any(b >= a for a, b in zip(sched, sched[1:])):
            raise ValueError("epsilon schedule must be strictly decreasing")
        if sched and sched[-1] < 1e-300:
            raise ValueError("epsilon below machine-safe minimum")
        self.epsilon_schedule = sched

    def g_hat_eps(self, p, eps: float):
        p = np.asarray(p, dtype=float)
        return self.g_hat(p / eps) / eps ** 4


def gaussian_profile(alpha0: float = 1.0, width: float = 1.0) -> ScalingFamily:
    """Profile with g_hat(p) = alpha0 (2 pi)^4 N exp(-w^2 |p|_E^2)."""
    a = width * width
    norm = alpha0 * (2.0 * math.pi) ** 4 * (a / math.pi) ** 2

    def g_hat(p):
        p = np.asarray(p, dtype=float)
        return norm * math.exp(-a * float(np.dot(p, p)))

    return ScalingFamily(g_hat=g_hat, alpha0=alpha0)


def bump_profile(alpha0: float = 1.0, width: float = 1.0, shape: float = 0.5) -> ScalingFamily:
    """Profile with a polynomial-times-Gaussian transform, same alpha0.

    g_hat(p) = alpha0 (2 pi)^4 N (1 + shape |p|_E^2) exp(-w^2 |p|_E^2)
    with N fixed so the transform integrates to (2 pi)^4 alpha0.
    """
    a = width * width
    # integral of (1 + shape r2) exp(-a r2) over R^4 = (pi/a)^2 (1 + 2 shape / a)
    norm = alpha0 * (2.0 * math.pi) ** 4 / ((math.pi / a) ** 2 * (1.0 + 2.0 * shape / a))

    def g_hat(p):
        p = np.asarray(p, dtype=float)
        r2 = float(np.dot(p, p))
        return norm * (1.0 + shape * r2) * math.exp(-a * r2)

    return ScalingFamily(g_hat=g_hat, alpha0=alpha0)


def scaling_delta_check(family: ScalingFamily, F, eps: float, kmax: float = 5.0,
                        n_nodes: int = 20) -> complex:
    """integral g_hat_eps(p) F(p) d^4p by substitution p = eps k.

    Converges to (2 pi)^4 alpha0 F(0) as eps -> 0 (delta-family property).
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    xs = kmax * nodes
    ws = kmax * weights
    total = 0.0 + 0.0j
    for i0, w0 in zip(xs, ws):
        for i1, w1 in zip(xs, ws):
            for i2, w2 in zip(xs, ws):
                for i3, w3 in zip(xs, ws):
                    k = np.array([i0, i1, i2, i3])
                    total += w0 * w1 * w2 * w3 * family.g_hat(k) * F(eps * k)
    return total


@dataclass
class SweepResult:
    epsilons: tuple
    values: tuple
    verdict: str  # converged | diverged | inconclusive
    fitted_exponent: float
    limit_estimate: complex = None


def classify_sweep(epsilons, values) -> SweepResult:
    """Verdict rule: fit slope sigma of log|value| vs log eps on the last
    half of the schedule.  sigma <= -0.25 -> diverged; |sigma| < 0.1 with
    shrinking Cauchy increments -> converged; all-zero tail -> converged
    with limit 0; otherwise inconclusive."""
    epsilons = tuple(float(e) for e in epsilons)
    values = tuple(complex(v) for v in values)
    n = len(values)
    if n < 3:
        return SweepResult(epsilons, values, "inconclusive", float("nan"))
    half = n // 2
    tail_e = np.array(epsilons[half:])
    tail_v = np.array(values[half:])
    mags = np.abs(tail_v)
    scale = max(np.max(np.abs(values)), 1e-300)
    if np.all(mags <= 1e-14 * scale) or np.all(mags == 0.0):
        return SweepResult(epsilons, values, "converged", 0.0, 0.0 + 0.0j)
    sigma = float(np.polyfit(np.log(tail_e), np.log(np.maximum(mags, 1e-300)), 1)[0])
    increments = np.abs(np.diff(np.array(values)))[half - 1:]
    shrinking = bool(np.all(np.diff(increments) <= 1e-12 * scale))
    if sigma <= -0.25:
        return SweepResult(epsilons, values, "diverged", sigma)
    if sigma >= 0.25 and bool(np.all(np.diff(mags) <= 0)):
        # decay to zero along the schedule
        return SweepResult(epsilons, values, "converged", sigma, 0.0 + 0.0j)
    if abs(sigma) < 0.1 and shrinking:
        # Richardson step assuming a leading term linear in eps
        limit = 2.0 * values[-1] - values[-2]
        return SweepResult(epsilons, values, "converged", sigma, limit)
    return SweepResult(epsilons, values, "inconclusive", sigma)


def _shell_overlap(m: float, xi, phi, pmax: float = 2.0, n_nodes: int = 12):
    """Quadrature data for the mass-shell smearing integral.

    Returns (sum_i w_i xi_i phi_i, sum_i w_i xi_i phi_i / E_i) over a
    radial momentum grid with p = (E(r), 0, 0, r).
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    rs = 0.5 * pmax * (nodes + 1.0)
    ws = 0.5 * pmax * weights
    plain = 0.0 + 0.0j
    over_e = 0.0 + 0.0j
    for r, w in zip(rs, ws):
        E = math.sqrt(r * r + m * m)
        pvec = np.array([0.0, 0.0, r])
        p4 = np.array([E, 0.0, 0.0, r])
        f = w * complex(xi(pvec)) * complex(phi(p4))
        plain += f
        over_e += f / E
    return plain, over_e


def _dangerous_and_regular(channel: str, green):
    """On-shell (dangerous) coefficient and the finite regular part."""
    if channel == "Sigma_into_psi":
        if not isinstance(green, SelfEnergy):
            raise TypeError("Sigma_into_psi needs a SelfEnergy")
        m2 = green.m * green.m
        kappa = complex(green.constants[0] + green.m * green.constants[1])
        s_probe = m2 * (1.0 - 1.0 / 16.0)
        regular = complex(green.a(s_probe) + green.m * green.b(s_probe))
        return kappa, regular
    if channel == "Pi_into_A":
        if not isinstance(green, VacuumPolarization):
            raise TypeError("Pi_into_A needs a VacuumPolarization")
        kappa = complex(green.constants[0])
        regular = complex(green.scalar_part(-green.m * green.m))
        return kappa, regular
    if channel == "Pi_into_current":
        if not isinstance(green, VacuumPolarization):
            raise TypeError("Pi_into_current needs a VacuumPolarization")
        kappa = complex(green.constants[1])
        s_probe = -green.m * green.m
        regular = complex(green.scalar_part(s_probe) / s_probe)
        return kappa, regular
    raise ValueError(f"unknown channel {channel!r}")


def _massless_standoff(eps: float, s_fix: float = -1.0) -> float:
    """Twice-subtracted massless dispersion anchored at s0 = -eps.

    The massless cut reaches the subtraction point, so the anchored
    integral grows like 1/eps as the standoff closes; no constant choice
    removes the growth.
    """
    s0 = -eps

    def kernel(sp):
        rho = causal_imaginary_part("Pi", 0.0, sp)
        return rho / ((sp - s0) ** 2 * (sp - s_fix))

    val, _ = integrate.quad(kernel, 0.0, np.inf, limit=300,
                            epsabs=1e-12, epsrel=1e-10)
    return (s_fix - s0) ** 2 / math.pi * val


def smeared_contribution(channel: str, green, xi, phi, eps: float,
                         constants=(0.0, 0.0)) -> complex:
    """One smeared interacting-field kernel value at fixed eps.

    The shell integral of xi phi multiplies [kappa / (-i eps p0) +
    regular], with kappa the on-shell coefficient of the Green function.
    The massless_charge channel replaces the Green function by the
    standoff-anchored massless dispersion plus the sampled constants.
    """
    if eps < 1e-300:
        raise ValueError("eps below safe minimum")
    if channel == "massless_charge":
        s_fix = -1.0
        plain, _ = _shell_overlap(0.0, xi, phi)
        body = _massless_standoff(eps, s_fix) + constants[0] + constants[1] * s_fix
        return plain * body
    kappa, regular = _dangerous_and_regular(channel, green)
    m = green.m
    plain, over_e = _shell_overlap(m, xi, phi)
    return kappa * over_e / (-1j * eps) + regular * plain


def epsilon_free_evaluation(channel: str, green, xi, phi) -> complex:
    """Direct eps-free on-shell evaluation: the regular part alone."""
    _, regular = _dangerous_and_regular(channel, green)
    plain, _ = _shell_overlap(green.m, xi, phi)
    return regular * plain


def sweep(channel: str, green, xi, phi, family: ScalingFamily,
          constants=(0.0, 0.0)) -> SweepResult:
    values = [smeared_contribution(channel, green, xi, phi, e, constants=constants)
              for e in family.epsilon_schedule]
    return classify_sweep(family.epsilon_schedule, values)


def weak_limit_vacuum(n: int, family: ScalingFamily, constants=(0.0, 0.0, 0.0),
                      m: float = 1.0, kmax: float = 6.0, n_nodes: int = 24) -> SweepResult:
    """Vacuum expectation of S_n(g_eps^(x) n) along the schedule.

    n = 1: identically zero (normal-ordered vertex).  n = 2: the vacuum
    graph value (2 pi)^-4 eps^-4 integral g_hat(k) g_hat(-k) w(eps^2 k.k)
    d^4k, where w is the thrice-subtracted vacuum kernel plus the
    normalization polynomial C0 + C1 s + C2 s^2.  The tuned choice
    C = 0 makes the limit vanish.
    """
    if n == 1:
        zeros = tuple(0.0 + 0.0j for _ in family.epsilon_schedule)
        return classify_sweep(family.epsilon_schedule, zeros)
    if n != 2:
        raise NotImplementedError("numeric weak limit implemented for n <= 2")

    eps_max = family.epsilon_schedule[0]
    thr = 4.0 * m * m
    smax = (eps_max * kmax) ** 2 * 1.05
    if smax >= thr:
        raise ValueError("schedule/profile reach the cut; enlarge m or shrink kmax")

    def u_factor(s):
        # w3(s) = s^3 u(s); u is smooth through s = 0, so the spline
        # below never spoils the exact s^3 zero that the eps^-4 scaling
        # amplifies
        val, _ = integrate.quad(
            lambda sp: causal_imaginary_part("Pi", m, sp) / (sp ** 3 * (sp - s)),
            thr, np.inf, limit=200, epsabs=1e-13, epsrel=1e-10)
        return val / math.pi

    s_grid = np.linspace(-smax, smax, 41)
    u_spline = CubicSpline(s_grid, [u_factor(s) for s in s_grid])

    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    k0 = kmax * nodes
    wk0 = kmax * weights
    r = 0.5 * kmax * (nodes + 1.0)
    wr = 0.5 * kmax * weights

    values = []
    for eps in family.epsilon_schedule:
        total = 0.0
        for a, wa in zip(k0, wk0):
            for b, wb in zip(r, wr):
                k = np.array([a, 0.0, 0.0, b])
                gg = family.g_hat(k) * family.g_hat(-k)
                s = (eps * eps) * (a * a - b * b)
                body = (constants[0] + constants[1] * s + constants[2] * s * s
                        + s ** 3 * float(u_spline(s)))
                total += wa * wb * (4.0 * math.pi * b * b) * gg * body
        values.append(total / ((2.0 * math.pi) ** 4 * eps ** 4))
    return classify_sweep(family.epsilon_schedule, values)


def product_of_limits(kernelA: DiscreteKernel, kernelB: DiscreteKernel,
                      grid: MomentumGrid):
    """Normal-ordered kernel expansion of Xi(A) Xi(B) on a Bose grid.

    Returns a list of DiscreteKernel terms whose Xi's sum to the operator
    product: the tensor-product kernel (no contraction) first, then one
    term per injective matching of A-annihilation slots with B-creation
    slots, each contracted index pair summed with one quadrature weight
    (from the delta_ij / w_i pairing).
    """
    if any(grid.is_fermi(i) for i in range(grid.n_modes)):
        raise NotImplementedError("kernel composition implemented for Bose grids")
    nm = grid.n_modes
    for K in (kernelA, kernelB):
        if K.l + K.m > 0 and K.values.shape != (nm,) * (K.l + K.m):
            raise ValueError("kernel shape does not match the grid")
    w = grid.weights
    terms = []
    ann_slots = list(range(kernelA.m))  # annihilation slots of A
    cre_slots = list(range(kernelB.l))  # creation slots of B
    for csize in range(0, min(len(ann_slots), len(cre_slots)) + 1):
        for asel in itertools.combinations(ann_slots, csize):
            for bperm in itertools.permutations(cre_slots, csize):
                a_keep = [s for s in ann_slots if s not in asel]
                b_keep = [s for s in cre_slots if s not in bperm]
                l_new = kernelA.l + len(b_keep)
                m_new = len(a_keep) + kernelB.m
                shape = (nm,) * (l_new + m_new)
                vals = np.zeros(shape if shape else (), dtype=complex)
                for idx in itertools.product(range(nm), repeat=l_new + m_new):
                    pa = idx[:kernelA.l]
                    pb_keep = idx[kernelA.l:kernelA.l + len(b_keep)]
                    qa_keep = idx[l_new:l_new + len(a_keep)]
                    qb = idx[l_new + len(a_keep):]
                    total = 0.0 + 0.0j
                    for contracted in itertools.product(range(nm), repeat=csize):
                        a_idx = [None] * kernelA.m
                        for s, j in zip(asel, contracted):
                            a_idx[s] = j
                        for s, j in zip(a_keep, qa_keep):
                            a_idx[s] = j
                        b_idx = [None] * kernelB.l
                        for s, j in zip(bperm, contracted):
                            b_idx[s] = j
                        for s, j in zip(b_keep, pb_keep):
                            b_idx[s] = j
                        weight = np.prod([w[j] for j in contracted]) if csize else 1.0
                        va = kernelA.values[tuple(pa) + tuple(a_idx)] \
                            if kernelA.l + kernelA.m else complex(kernelA.values)
                        vb = kernelB.values[tuple(b_idx) + tuple(qb)] \
                            if kernelB.l + kernelB.m else complex(kernelB.values)
                        total += weight * va * vb
                    if shape:
                        vals[idx] = total
                    else:
                        vals = np.asarray(total)
                terms.append(DiscreteKernel(l_new, m_new, vals))
    return terms
