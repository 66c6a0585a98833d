"""Second-order QED Green functions by causal splitting in the p^2
dispersion variable: vacuum polarization Pi and electron self-energy
Sigma, with on-mass-shell normalization.

The causal discontinuity (imaginary part across the cut) is computed by
numerical two-body phase-space integration of the pairing-function
product with explicit 4x4 gamma-matrix traces; the functions themselves
are subtracted dispersion integrals over that discontinuity.  Coupling
constants are set to 1 throughout.

Decompositions: Pi_tensor^{mu nu}(p) = (p^mu p^nu - p^2 g^{mu nu}) Pi(p^2),
Sigma(p) = a(p^2) + pslash b(p^2).

On-shell conditions enforced:
  Pi(0) = 0 and Pi(s)/s -> 0 as s -> 0 (constants C0 = C1 = 0);
  a(m^2) + m b(m^2) = 0 and 2m a'(m^2) + b(m^2) + 2m^2 b'(m^2) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .distributions import GAMMA, IDENTITY4, METRIC, slash


class MasslessNormalizationError(ValueError):
    """On-shell normalization impossible for a massless charged field."""


_COS_NODES, _COS_WEIGHTS = np.polynomial.legendre.leggauss(6)


def _kallen(s, m1, m2):
    return (s - (m1 + m2) ** 2) * (s - (m1 - m2) ** 2)


_SIN_NODES = np.sqrt(np.maximum(0.0, 1.0 - _COS_NODES ** 2))
_METRIC_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def _angular_phase_space(s, values, k):
    """(k / 4 sqrt(s)) * integral dOmega, from per-node integrand values."""
    total = 2.0 * math.pi * float(np.dot(_COS_WEIGHTS, values))  # azimuthal symmetry
    return (k / (4.0 * math.sqrt(s))) * total


def _slash_batch(qs):
    """gamma^mu q_mu for a batch of 4-vectors, shape (n, 4) -> (n, 4, 4)."""
    return np.einsum("ck,kij->cij", qs * _METRIC_SIGNS, GAMMA)


def causal_imaginary_part(which: str, m: float, s: float,
                          photon_mass: float = 0.0, component: str = "a") -> float:
    """Discontinuity of the designated Green function at p^2 = s.

    which = "Pi": transversal scalar discontinuity of the fermion loop,
    zero below s = 4 m^2.  which = "Sigma": the a- or b-component
    (selected by `component`) of the electron/photon loop, zero below
    s = (m + photon_mass)^2.
    """
    if m < 0:
        raise ValueError("mass must be nonnegative")
    if which == "Pi":
        if s <= 4.0 * m * m:
            return 0.0
        k = math.sqrt(s / 4.0 - m * m)
        E = math.sqrt(s) / 2.0
        p = np.array([math.sqrt(s), 0.0, 0.0, 0.0])
        p_low = METRIC @ p
        proj = METRIC - np.outer(p_low, p_low) / s  # P_{mu nu}
        zero = np.zeros_like(_SIN_NODES)
        q1 = np.stack([np.full_like(zero, E), k * _SIN_NODES, zero, k * _COS_NODES], axis=1)
        m1 = _slash_batch(q1) + m * IDENTITY4
        m2 = _slash_batch(-q1 + np.array([2.0 * E, 0.0, 0.0, 0.0])) - m * IDENTITY4
        # T^{mu nu} = Tr[gamma^mu m1 gamma^nu m2], one matrix per angular node
        T = np.einsum("mij,cjk,nkl,cli->cmn", GAMMA, m1, GAMMA, m2)
        values = (-np.einsum("mn,cmn->c", proj, T) / (3.0 * s)).real
        return _angular_phase_space(s, values, k)

    if which == "Sigma":
        mu_ph = photon_mass
        if s <= (m + mu_ph) ** 2:
            return 0.0
        lam = _kallen(s, m, mu_ph)
        k = math.sqrt(lam) / (2.0 * math.sqrt(s))
        Eq = (s + m * m - mu_ph * mu_ph) / (2.0 * math.sqrt(s))
        p = np.array([math.sqrt(s), 0.0, 0.0, 0.0])
        zero = np.zeros_like(_SIN_NODES)
        q = np.stack([np.full_like(zero, Eq), k * _SIN_NODES, zero, k * _COS_NODES], axis=1)
        qs = _slash_batch(q) + m * IDENTITY4
        # gamma^mu X gamma_mu with the (+,-,-,-) metric contraction
        N = np.einsum("m,mij,cjk,mkl->cil", _METRIC_SIGNS, GAMMA, qs, GAMMA)
        if component == "a":
            values = np.einsum("cii->c", N).real / 4.0
        elif component == "b":
            values = np.einsum("ij,cji->c", slash(p), N).real / (4.0 * s)
        else:
            raise ValueError(f"unknown Sigma component {component!r}")
        return _angular_phase_space(s, values, k)

    raise ValueError(f"unknown Green function {which!r}")


def _dispersion(rho, thr: float, z, n_sub: int, s0: float = 0.0):
    """Subtracted dispersion integral.

    ((z - s0)^n / pi) * integral_thr^inf rho(s') / ((s'-s0)^n (s'-z)) ds'
    with n = n_sub.  Real z on the cut gets the principal value plus
    i rho(z); complex z and real z below thr integrate directly.
    """
    z = complex(z)

    def kernel(sp, zz):
        return rho(sp) / ((sp - s0) ** n_sub * (sp - zz))

    if z.imag != 0.0 or z.real < thr:
        re, _ = integrate.quad(lambda sp: kernel(sp, z).real, thr, np.inf,
                               limit=300, epsabs=1e-12, epsrel=1e-11)
        if z.imag == 0.0:
            val = re + 0.0j  # the kernel is real for real z off the cut
        else:
            im, _ = integrate.quad(lambda sp: kernel(sp, z).imag, thr, np.inf,
                                   limit=300, epsabs=1e-12, epsrel=1e-11)
            val = re + 1j * im
    else:
        x = z.real
        h = (x - thr) / 2.0
        if h <= 0:
            raise ArithmeticError("dispersion evaluation at the threshold point")

        def smooth(sp):
            return rho(sp) / (sp - s0) ** n_sub

        pv, _ = integrate.quad(lambda sp: smooth(sp), x - h, x + h,
                               weight="cauchy", wvar=x, limit=300,
                               epsabs=1e-12, epsrel=1e-11)
        left, _ = integrate.quad(lambda sp: kernel(sp, x).real, thr, x - h,
                                 limit=300, epsabs=1e-12, epsrel=1e-11)
        right, _ = integrate.quad(lambda sp: kernel(sp, x).real, x + h, np.inf,
                                  limit=300, epsabs=1e-12, epsrel=1e-11)
        val = (-pv + left + right) + 1j * math.pi * rho(x) / (x - s0) ** n_sub

    out = (z - s0) ** n_sub / math.pi * val
    if z.imag == 0.0 and z.real < thr:
        return out.real
    return out


def _dispersion_derivative_at_anchor(rho, thr: float, s0: float) -> float:
    """d/ds at s = s0 of the once-subtracted dispersion anchored at s0."""
    val, _ = integrate.quad(lambda sp: rho(sp) / (sp - s0) ** 2, thr, np.inf,
                            limit=300, epsabs=1e-12, epsrel=1e-11)
    return val / math.pi


@dataclass
class VacuumPolarization:
    m: float
    constants: tuple  # (C0, C1)
    subtractions: int = 2

    @property
    def threshold(self) -> float:
        return 4.0 * self.m * self.m

    def rho(self, s: float) -> float:
        return causal_imaginary_part("Pi", self.m, s)

    def scalar_part(self, s):
        C0, C1 = self.constants
        if s == 0:
            return complex(C0)
        disp = _dispersion(self.rho, self.threshold, s, self.subtractions, s0=0.0)
        return C0 + C1 * complex(s) + disp

    def tensor(self, p) -> np.ndarray:
        """Pi^{mu nu}(p) = (p^mu p^nu - p^2 g^{mu nu}) Pi(p^2), upper indices."""
        p = np.asarray(p, dtype=float)
        s = p[0] * p[0] - np.dot(p[1:], p[1:])
        g_up = METRIC  # numerically equal to its inverse
        return (np.outer(p, p) - s * g_up) * self.scalar_part(s)


@dataclass
class SelfEnergy:
    m: float
    photon_mass: float
    constants: tuple  # (c0, c1): a += c0, b += c1

    @property
    def threshold(self) -> float:
        return (self.m + self.photon_mass) ** 2

    def rho_a(self, s: float) -> float:
        return causal_imaginary_part("Sigma", self.m, s,
                                     photon_mass=self.photon_mass, component="a")

    def rho_b(self, s: float) -> float:
        return causal_imaginary_part("Sigma", self.m, s,
                                     photon_mass=self.photon_mass, component="b")

    def _disp(self, rho, s):
        return _dispersion(rho, self.threshold, s, 1, s0=self.m * self.m)

    def a(self, s):
        if s == self.m * self.m:
            return complex(self.constants[0])
        return self.constants[0] + self._disp(self.rho_a, s)

    def b(self, s):
        if s == self.m * self.m:
            return complex(self.constants[1])
        return self.constants[1] + self._disp(self.rho_b, s)

    def a_prime_shell(self) -> float:
        return _dispersion_derivative_at_anchor(self.rho_a, self.threshold, self.m * self.m)

    def b_prime_shell(self) -> float:
        return _dispersion_derivative_at_anchor(self.rho_b, self.threshold, self.m * self.m)

    def shell_combination(self) -> complex:
        """a(m^2) + m b(m^2): the dangerous on-shell coefficient."""
        return self.a(self.m * self.m) + self.m * self.b(self.m * self.m)

    def matrix(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        s = p[0] * p[0] - np.dot(p[1:], p[1:])
        return self.a(s) * IDENTITY4 + self.b(s) * slash(p)


def build_vacuum_polarization(m: float, normalization="on-shell",
                              subtractions: int = 2) -> VacuumPolarization:
    """Vacuum polarization from the subtracted dispersion integral.

    normalization: "on-shell" fixes C0 = C1 = 0 so Pi(0) = 0 and
    Pi(s)/s -> 0 at s = 0; a pair (C0, C1) adds the ambiguity polynomial.
    Requires m > 0 for on-shell mode: with m = 0 the subtraction point 0
    sits on the cut and the on-shell-subtracted integral diverges.
    """
    if normalization == "on-shell":
        if m <= 0:
            raise MasslessNormalizationError(
                "on-shell normalization impossible: the normalization point "
                "cannot be chosen at p^2 = 0 for a massless charged field")
        constants = (0.0, 0.0)
    else:
        constants = tuple(float(c) for c in normalization)
        if len(constants) != 2:
            raise ValueError("custom normalization needs exactly (C0, C1)")
        if m <= 0:
            raise MasslessNormalizationError(
                "subtraction at p^2 = 0 sits on the massless cut; "
                "no normalization constants repair the dispersion integral")
    return VacuumPolarization(m=m, constants=constants, subtractions=subtractions)


def build_self_energy(m: float, photon_mass: float = None,
                      normalization="on-shell") -> SelfEnergy:
    """Self-energy from once-subtracted dispersion integrals at p^2 = m^2.

    The photon-mass regulator (default m/10) keeps the shell-derivative
    condition finite.  normalization: "on-shell" solves the two shell
    conditions for (c0, c1); a pair (c0, c1) is used verbatim.
    """
    if m <= 0:
        raise MasslessNormalizationError(
            "on-shell self-energy normalization needs m > 0 (massless charge "
            "admits no shell normalization point)")
    if photon_mass is None:
        photon_mass = m / 10.0
    if photon_mass < 0:
        raise ValueError("photon mass regulator must be nonnegative")
    probe = SelfEnergy(m=m, photon_mass=photon_mass, constants=(0.0, 0.0))
    if normalization == "on-shell":
        ap = probe.a_prime_shell()
        bp = probe.b_prime_shell()
        # condition 2: 2m a'(m^2) + b(m^2) + 2m^2 b'(m^2) = 0 with b(m^2) = c1
        c1 = -(2.0 * m * ap + 2.0 * m * m * bp)
        # condition 1: a(m^2) + m b(m^2) = c0 + m c1 = 0
        c0 = -m * c1
        constants = (c0, c1)
    else:
        constants = tuple(float(c) for c in normalization)
        if len(constants) != 2:
            raise ValueError("custom normalization needs exactly (c0, c1)")
    return SelfEnergy(m=m, photon_mass=photon_mass, constants=constants)


def check_on_shell(obj, tol: float = 1e-8) -> dict:
    """Numerical check of the on-shell normalization conditions.

    Returns {"conditions": [{"name", "residual", "pass"}...], "all_pass"}.
    """
    conds = []
    if isinstance(obj, VacuumPolarization):
        r1 = abs(obj.scalar_part(0.0))
        conds.append({"name": "Pi(0) = 0", "residual": float(r1), "pass": r1 <= tol})
        # two-level Richardson extrapolation of Pi(s)/s toward s = 0
        h = -0.01 * max(obj.threshold, 1.0)
        r = [obj.scalar_part(h / 2 ** k) / (h / 2 ** k) for k in range(3)]
        r1a = 2.0 * r[1] - r[0]
        r1b = 2.0 * r[2] - r[1]
        extrap = (4.0 * r1b - r1a) / 3.0
        r2 = abs(extrap)
        conds.append({"name": "Pi(s)/s -> 0 at s = 0", "residual": float(r2),
                      "pass": r2 <= tol})
    elif isinstance(obj, SelfEnergy):
        m = obj.m
        r1 = abs(obj.shell_combination())
        conds.append({"name": "a(m^2) + m b(m^2) = 0", "residual": float(r1),
                      "pass": r1 <= tol})
        r2 = abs(2.0 * m * obj.a_prime_shell() + obj.b(m * m)
                 + 2.0 * m * m * obj.b_prime_shell())
        conds.append({"name": "2m a' + b + 2m^2 b' = 0 at m^2",
                      "residual": float(r2), "pass": r2 <= tol})
    else:
        raise TypeError("expected VacuumPolarization or SelfEnergy")
    return {"conditions": conds, "all_pass": all(c["pass"] for c in conds)}
