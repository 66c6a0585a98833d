"""Adiabatic switching g(eps x) and the eps -> 0+ limit.

With on-shell normalization the smeared second-order contribution is
eps-independent and the sweep converges to the direct on-shell value.
Any other normalization leaves a dangerous 1/eps term; a massless
charged field admits no normalization point at all, so every sampled
constant pair diverges.  The vacuum graph with tuned constants decays
like eps^2 in the weak limit.
"""

import numpy as np

from causalqed.adiabatic import (ScalingFamily, bump_profile,
                                 epsilon_free_evaluation, gaussian_profile,
                                 sweep, weak_limit_vacuum)
from causalqed.qed2 import SelfEnergy, build_self_energy

schedule = tuple(2.0 ** (-k) for k in range(3, 13))
fam = gaussian_profile()
family = ScalingFamily(g_hat=fam.g_hat, epsilon_schedule=schedule)

xi = lambda pvec: float(np.exp(-float(np.dot(pvec, pvec))))
phi = lambda p4: float(np.exp(-float(np.dot(p4, p4))))

se = build_self_energy(1.0)

print("on-shell self-energy channel")
res = sweep("Sigma_into_psi", se, xi, phi, family)
direct = epsilon_free_evaluation("Sigma_into_psi", se, xi, phi)
print(f"  verdict {res.verdict}, slope {res.fitted_exponent:+.3f}")
print(f"  limit {res.limit_estimate:.10f}  eps-free value {direct:.10f}")

print("\noff-shell normalization (constants shifted by 0.3)")
off = SelfEnergy(se.m, se.photon_mass, (se.constants[0] + 0.3, se.constants[1]))
res = sweep("Sigma_into_psi", off, xi, phi, family)
print(f"  verdict {res.verdict}, slope {res.fitted_exponent:+.3f} "
      "(the dangerous 1/eps term)")

print("\nmassless charged field, sampled normalization constants")
for consts in ((0.0, 0.0), (1.0, 0.0), (3.0, -2.0)):
    res = sweep("massless_charge", None, xi, phi, family, constants=consts)
    print(f"  constants {consts}: verdict {res.verdict}, "
          f"slope {res.fitted_exponent:+.3f}")

print("\nprofile independence at equal g(0)")
for name, prof in (("gaussian w=1", gaussian_profile()),
                   ("gaussian w=2", gaussian_profile(width=2.0)),
                   ("bump", bump_profile())):
    f = ScalingFamily(g_hat=prof.g_hat, epsilon_schedule=schedule)
    res = sweep("Sigma_into_psi", se, xi, phi, f)
    print(f"  {name:14s} verdict {res.verdict}")

print("\nweak limit of the order-2 vacuum graph, tuned constants")
wfam = ScalingFamily(g_hat=fam.g_hat,
                     epsilon_schedule=tuple(2.0 ** (-k) for k in range(3, 15)))
res = weak_limit_vacuum(2, wfam, constants=(0.0, 0.0, 0.0))
print(f"  verdict {res.verdict}, decay exponent {res.fitted_exponent:+.3f}")
print(f"  |value| smallest/largest eps: "
      f"{abs(res.values[-1]) / abs(res.values[0]):.3e}")
