"""Symbolic Wick calculus: fields as sums of emission/absorption legs,
normal-ordered monomials, and operator products expanded by contraction
enumeration.

Coefficients stay symbolic: a monomial carries a complex prefactor and a
multiset of factors (pairing functions, vertex tags, retarded-part
wrappers).  Nothing here evaluates an integral; the numeric layers map
factor tags to functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import total_ordering

from .grassmann import FERMI

CREATION = "cre"
ANNIHILATION = "ann"

# field name -> (grade, contraction partner)
FIELDS = {
    "scalar": (0, "scalar"),
    "photon": (0, "photon"),
    "psi": (1, "psibar"),
    "psibar": (1, "psi"),
}

# pairing-function tag for an annihilation leg of `left` meeting a
# creation leg of `right`
_PAIR_NAMES = {
    ("scalar", "scalar"): "D+",
    ("photon", "photon"): "D0+",
    ("psi", "psibar"): "S+",
    ("psibar", "psi"): "Sbar+",
}


class ContractionError(ValueError):
    """Requested contraction between incompatible field legs."""


@total_ordering
@dataclass(frozen=True)
class FieldLeg:
    field: str
    character: str  # "cre" | "ann"
    slot: str  # spacetime variable label
    index: str = ""

    @property
    def grade(self) -> int:
        return FIELDS[self.field][0]

    def sort_key(self):
        # creation legs left of annihilation legs, then field/slot/index
        return (0 if self.character == CREATION else 1, self.field, self.slot, self.index)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()


@total_ordering
@dataclass(frozen=True)
class Factor:
    kind: str  # "pair" | "tag" | "ret"
    name: str
    args: tuple = ()

    def key(self):
        return (self.kind, self.name, self.args)

    def __lt__(self, other):
        return self.key() < other.key()


def pair_factor(left: FieldLeg, right: FieldLeg) -> Factor:
    name = _PAIR_NAMES.get((left.field, right.field))
    if name is None:
        raise ContractionError(f"cannot contract {left.field} with {right.field}")
    return Factor("pair", name, (left.slot, right.slot, left.index, right.index))


def _normal_order(legs):
    """Stable-sort legs into canonical order; return (sign, tuple) or None.

    Returns None when two identical fermionic legs collide (the monomial
    vanishes).  The sign counts fermi-fermi inversions of the reordering.
    """
    indexed = sorted(range(len(legs)), key=lambda i: (legs[i].sort_key(), i))
    ordered = [legs[i] for i in indexed]
    fermi_positions = [indexed[k] for k in range(len(ordered)) if ordered[k].grade == FERMI]
    inv = 0
    for i in range(len(fermi_positions)):
        for j in range(i + 1, len(fermi_positions)):
            if fermi_positions[i] > fermi_positions[j]:
                inv += 1
    for a, b in zip(ordered, ordered[1:]):
        if a == b and a.grade == FERMI:
            return None
    return (-1 if inv % 2 else 1), tuple(ordered)


@dataclass(frozen=True)
class WickMonomial:
    coeff: complex
    factors: tuple  # sorted tuple of Factor
    legs: tuple  # normal-ordered tuple of FieldLeg

    def signature(self):
        return (self.factors, self.legs)


class WickPolynomial:
    """Finite sum of normal-ordered monomials, merged on construction."""

    def __init__(self, monomials=()):
        table = {}
        for mono in monomials:
            if isinstance(mono, WickMonomial):
                coeff, factors, legs = mono.coeff, mono.factors, mono.legs
            else:
                coeff, factors, legs = mono
            res = _normal_order(list(legs))
            if res is None:
                continue
            sign, ordered = res
            key = (tuple(sorted(factors)), ordered)
            table[key] = table.get(key, 0) + sign * coeff
        self._terms = {k: v for k, v in table.items() if v != 0}

    @property
    def terms(self):
        return [WickMonomial(c, f, l) for (f, l), c in sorted(
            self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return isinstance(other, WickPolynomial) and self._terms == other._terms

    def __add__(self, other):
        return WickPolynomial(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, z):
        return WickPolynomial([WickMonomial(z * m.coeff, m.factors, m.legs) for m in self.terms])

    def is_zero(self):
        return not self._terms

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def chopped(self, rel_tol: float, scale: float = None) -> "WickPolynomial":
        """Drop terms with |coeff| <= rel_tol * scale (float-residue cleanup)."""
        if scale is None:
            scale = self.max_abs_coeff()
        cut = rel_tol * scale
        return WickPolynomial(
            [m for m in self.terms if abs(m.coeff) > cut])

    def relabel(self, mapping):
        """Rename spacetime slots in legs and factor args."""

        def ren(s):
            return mapping.get(s, s)

        out = []
        for m in self.terms:
            factors = tuple(
                Factor(f.kind, f.name, tuple(ren(a) if isinstance(a, str) else a for a in f.args))
                for f in m.factors
            )
            legs = tuple(
                FieldLeg(l.field, l.character, ren(l.slot), l.index) for l in m.legs
            )
            out.append(WickMonomial(m.coeff, factors, legs))
        return WickPolynomial(out)

    def max_total_legs(self):
        return max((len(m.legs) for m in self.terms), default=0)

    def to_json(self) -> str:
        rows = []
        for m in self.terms:
            rows.append(
                {
                    "coeff": [m.coeff.real if isinstance(m.coeff, complex) else float(m.coeff),
                              m.coeff.imag if isinstance(m.coeff, complex) else 0.0],
                    "factors": [[f.kind, f.name, list(f.args)] for f in m.factors],
                    "legs": [[l.field, l.character, l.slot, l.index] for l in m.legs],
                }
            )
        return json.dumps({"terms": rows}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WickPolynomial":
        obj = json.loads(text)
        monos = []
        for row in obj["terms"]:
            coeff = complex(row["coeff"][0], row["coeff"][1])
            factors = tuple(Factor(k, n, tuple(a)) for k, n, a in row["factors"])
            legs = tuple(FieldLeg(f, c, s, i) for f, c, s, i in row["legs"])
            monos.append(WickMonomial(coeff, factors, legs))
        return cls(monos)


ZERO = WickPolynomial()
ONE = WickPolynomial([WickMonomial(1.0 + 0.0j, (), ())])


def free_field(fname: str, slot: str, index: str = "") -> WickPolynomial:
    """A free field as its emission plus absorption kernel parts."""
    if fname not in FIELDS:
        raise ValueError(f"unknown field {fname!r}")
    return WickPolynomial(
        [
            WickMonomial(1.0 + 0.0j, (), (FieldLeg(fname, CREATION, slot, index),)),
            WickMonomial(1.0 + 0.0j, (), (FieldLeg(fname, ANNIHILATION, slot, index),)),
        ]
    )


def wick_product(factors, coeff=1.0 + 0.0j, extra_factors=()) -> WickPolynomial:
    """Normal-ordered (Wick) product: no contractions, kernels multiply."""
    result = [((coeff), tuple(sorted(extra_factors)), ())]
    for poly in factors:
        new = []
        for c0, f0, l0 in result:
            for m in poly.terms:
                new.append((c0 * m.coeff, tuple(sorted(f0 + m.factors)), l0 + m.legs))
        result = new
    return WickPolynomial(result)


def qed_vertex(slot: str) -> WickPolynomial:
    """The spinor QED interaction monomial :psibar gamma^mu psi A_mu:(x)."""
    gamma = Factor("tag", "gamma", (slot,))
    return wick_product(
        [
            free_field("psibar", slot, "a"),
            free_field("psi", slot, "b"),
            free_field("photon", slot, "mu"),
        ],
        extra_factors=(gamma,),
    )


def scalar_vertex(slot: str, power: int = 3) -> WickPolynomial:
    """Scalar toy interaction :phi^power:(x) / power!."""
    fact = 1.0
    for k in range(2, power + 1):
        fact *= k
    return wick_product([free_field("scalar", slot) for _ in range(power)], coeff=1.0 / fact)


def _matchings(ann_legs, cre_legs):
    """All injective partial matchings of contractible (ann, cre) pairs."""

    def rec(i):
        if i == len(ann_legs):
            yield []
            return
        pos_a, leg_a = ann_legs[i]
        partner = FIELDS[leg_a.field][1]
        for rest in rec(i + 1):
            yield rest
            used = {b for _, b in rest}
            for pos_b, leg_b in cre_legs:
                if pos_b in used:
                    continue
                if leg_b.field == partner:
                    yield [((pos_a, leg_a), (pos_b, leg_b))] + rest

    return rec(0)


def _contraction_sign(legs, pairs):
    """Sign from pulling each contracted pair adjacent, fermi legs only."""
    alive = [True] * len(legs)
    sign = 1
    for (pa, la), (pb, lb) in sorted(pairs, key=lambda pr: pr[0][0]):
        if la.grade == FERMI:
            crossings = sum(
                1
                for k in range(min(pa, pb) + 1, max(pa, pb))
                if alive[k] and legs[k].grade == FERMI
            )
            if crossings % 2:
                sign = -sign
        alive[pa] = False
        alive[pb] = False
    return sign


def operator_product(A: WickPolynomial, B: WickPolynomial) -> WickPolynomial:
    """Operator product expanded into normal form (Wick theorem).

    Sums over all ways to contract annihilation legs of A against
    creation legs of B of the matching field type; every contraction
    contributes a pairing factor and a fermionic sign.
    """
    out = []
    for ma in A.terms:
        ann_a = [(i, leg) for i, leg in enumerate(ma.legs) if leg.character == ANNIHILATION]
        for mb in B.terms:
            legs_all = list(ma.legs) + list(mb.legs)
            offset = len(ma.legs)
            cre_b = [
                (offset + j, leg)
                for j, leg in enumerate(mb.legs)
                if leg.character == CREATION
            ]
            for pairs in _matchings(ann_a, cre_b):
                sign = _contraction_sign(legs_all, pairs)
                dead = set()
                factors = list(ma.factors) + list(mb.factors)
                for (pa, la), (pb, lb) in pairs:
                    dead.add(pa)
                    dead.add(pb)
                    factors.append(pair_factor(la, lb))
                legs = tuple(l for k, l in enumerate(legs_all) if k not in dead)
                out.append(
                    WickMonomial(sign * ma.coeff * mb.coeff, tuple(sorted(factors)), legs)
                )
    return WickPolynomial(out)


def vacuum_expectation(P: WickPolynomial) -> WickPolynomial:
    """Leg-free (vacuum graph) part of a polynomial."""
    return WickPolynomial([m for m in P.terms if not m.legs])
