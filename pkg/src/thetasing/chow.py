"""Pushforward calculus on the universal ppav phi: X_g -> A_g, in codimension <= 2.

Classes upstairs are polynomials in the universal theta divisor ``Theta`` and the
Hodge classes. ``lambda_2`` is rewritten as ``lambda_1^2 / 2`` on construction and
Hodge classes of degree >= 3 are never formed (they only reach codimension >= 3
after pushforward). Pushforward uses

    phi_*(Theta^k) = 0 (k < g),  g!  (k = g),  (g+1)!/2 lambda_1  (k = g+1),
                     (g+2)!/8 lambda_1^2  (k = g+2)

together with the projection formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import CertificateFailure, DegreeOverflow, UnsupportedPower
from .ratlinalg import format_fraction


class GradedClass:
    """A polynomial in Theta and lambda_1 with rational coefficients on X_g.

    ``terms`` maps ``(a, b)`` (Theta^a lambda_1^b) or ``(a, b, c)`` (with an extra
    lambda_2^c, rewritten immediately) to coefficients.
    """

    __slots__ = ("g", "terms")

    def __init__(self, g: int, terms=None):
        self.g = g
        out: dict[tuple[int, int], Fraction] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) == 2:
                a, b, c = mono[0], mono[1], 0
            else:
                a, b, c = mono
            if min(a, b, c) < 0:
                raise ValueError(f"negative exponent in {mono}")
            key = (a, b + 2 * c)
            out[key] = out.get(key, Fraction(0)) + Fraction(coeff) / 2**c
        self.terms = {k: v for k, v in out.items() if v != 0}

    @classmethod
    def theta(cls, g):
        return cls(g, {(1, 0): 1})

    @classmethod
    def lambda1(cls, g):
        return cls(g, {(0, 1): 1})

    @classmethod
    def lambda2(cls, g):
        return cls(g, {(0, 0, 1): 1})

    @classmethod
    def one(cls, g):
        return cls(g, {(0, 0): 1})

    def _check(self, other):
        if not isinstance(other, GradedClass):
            other = GradedClass(self.g, {(0, 0): other})
        if other.g != self.g:
            raise ValueError("classes live over different genera")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return GradedClass(self.g, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.g, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        terms: dict = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                terms[k] = terms.get(k, Fraction(0)) + v1 * v2
        return GradedClass(self.g, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = GradedClass.one(self.g)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, GradedClass) and self.g == other.g and self.terms == other.terms

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.terms.get((a, b), Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), v in sorted(self.terms.items(), reverse=True):
            mono = "*".join(s for s in (f"Theta^{a}" if a else "", f"lambda1^{b}" if b else "") if s) or "1"
            parts.append(f"{format_fraction(v)}*{mono}")
        return " + ".join(parts)


@dataclass(frozen=True)
class BaseClass:
    """A polynomial of degree <= 2 in lambda_1 on A_g: coefficients of 1, lambda_1, lambda_1^2."""

    coeffs: tuple = (Fraction(0), Fraction(0), Fraction(0))

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coeffs)
        if len(c) > 3:
            if any(c[3:]):
                raise DegreeOverflow("base classes are capped at degree 2 in lambda_1")
            c = c[:3]
        object.__setattr__(self, "coeffs", c + (Fraction(0),) * (3 - len(c)))

    @classmethod
    def lambda1_power(cls, coeff, degree: int) -> "BaseClass":
        c = [0, 0, 0]
        c[degree] = coeff
        return cls(tuple(c))

    def __add__(self, other):
        return BaseClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return BaseClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, k):
        return BaseClass(tuple(a * Fraction(k) for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, k):
        return BaseClass(tuple(a / Fraction(k) for a in self.coeffs))

    def __getitem__(self, degree: int) -> Fraction:
        return self.coeffs[degree]

    def __str__(self):
        names = ("", "lambda1", "lambda1^2")
        parts = [f"{format_fraction(c)}*{names[d]}" if d else format_fraction(c) for d, c in enumerate(self.coeffs) if c]
        return " + ".join(reversed(parts)) if parts else "0"


def theta_power_pushforward(g: int, k: int) -> BaseClass:
    if k < g:
        return BaseClass()
    if k == g:
        return BaseClass.lambda1_power(factorial(g), 0)
    if k == g + 1:
        return BaseClass.lambda1_power(Fraction(factorial(g + 1), 2), 1)
    if k == g + 2:
        return BaseClass.lambda1_power(Fraction(factorial(g + 2), 8), 2)
    raise UnsupportedPower(f"no pushforward rule for Theta^{k} in genus {g}")


def pushforward(x: GradedClass) -> BaseClass:
    """phi_* of a class on X_g, by the Theta-power rules and the projection formula."""
    out = [Fraction(0)] * 5
    for (a, b), v in x.terms.items():
        if a > x.g + 2:
            raise UnsupportedPower(f"no pushforward rule for Theta^{a} in genus {x.g}")
        if a < x.g:
            continue
        base = theta_power_pushforward(x.g, a)
        for d, c in enumerate(base.coeffs):
            if c:
                out[d + b] += v * c
    if any(out[3:]):
        raise DegreeOverflow("pushforward lands in codimension > 2")
    return BaseClass(tuple(out[:3]))


def chern_top_omega_theta(g: int) -> GradedClass:
    """Top Chern class of the twisted relative cotangent bundle, truncated to Hodge degree <= 2.

    Theta^g + Theta^(g-1) lambda_1 + Theta^(g-2) lambda_2, with lambda_2 = lambda_1^2/2.
    """
    if g < 2:
        raise ValueError("genus must be at least 2")
    return GradedClass(g, {(g, 0): 1, (g - 1, 1): 1, (g - 2, 0, 1): 1})


def hessian_bundle_class(g: int) -> GradedClass:
    """First Chern class of O(g Theta) (x) det(E)^2, where the Hessian determinant lives."""
    return GradedClass(g, {(1, 0): g, (0, 1): 2})


def class_N0(g: int) -> BaseClass:
    """[N_0] = phi_*(c_g * Theta) = g!(g+3)/2 lambda_1."""
    return pushforward(chern_top_omega_theta(g) * GradedClass.theta(g))


def closed_form_N0_hess(g: int) -> Fraction:
    return Fraction(factorial(g), 8) * (g**3 + 7 * g**2 + 18 * g + 24)


def class_N0_hess(g: int) -> BaseClass:
    """[N_0^(g-1)]: pushforward of c_g * Theta * (g Theta + 2 lambda_1), checked against the closed form."""
    if g < 4:
        raise ValueError("the Hessian-degeneracy class of N_0 is only computed for g >= 4")
    pipeline = pushforward(chern_top_omega_theta(g) * GradedClass.theta(g) * hessian_bundle_class(g))
    expected = BaseClass.lambda1_power(closed_form_N0_hess(g), 2)
    if pipeline != expected:
        raise CertificateFailure(f"g={g}: pipeline {pipeline} != closed form {expected}", residual=pipeline - expected)
    return pipeline


@dataclass(frozen=True)
class ThetaNullHessFactors:
    count: int
    theta_constant_weight: Fraction
    hessian_weight: Fraction

    @property
    def coefficient(self) -> Fraction:
        return self.count * self.theta_constant_weight * self.hessian_weight


def thetanull_hess_factors(g: int) -> ThetaNullHessFactors:
    """Even characteristics, weight of a theta constant, weight of its Hessian determinant."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    return ThetaNullHessFactors(2 ** (g - 1) * (2**g + 1), Fraction(1, 2), Fraction(g + 4, 2))


def class_thetanull_hess(g: int) -> BaseClass:
    return BaseClass.lambda1_power(thetanull_hess_factors(g).coefficient, 2)


def closed_form_H(g: int) -> Fraction:
    return Fraction(factorial(g), 16) * (g**3 + 7 * g**2 + 18 * g + 24) - (g + 4) * Fraction(2) ** (g - 4) * (2**g + 1)


def class_H(g: int) -> BaseClass:
    """Class of the non-ordinary double point locus H: ([N_0^(g-1)] - [theta_null^(g-1)]) / 2."""
    h = (class_N0_hess(g) - class_thetanull_hess(g)) / 2
    expected = BaseClass.lambda1_power(closed_form_H(g), 2)
    if h != expected:
        raise CertificateFailure(f"g={g}: [H] = {h} but the closed form gives {expected}", residual=h - expected)
    return h


@dataclass(frozen=True)
class ModularWeights:
    g: int
    weight_Fg: Fraction
    weight_Ig: Fraction
    class_N0_split_check: bool

    @property
    def hessian_det_weight(self) -> Fraction:
        """Weight of det of the tau-gradient matrix of I_g restricted to {I_g = 0}."""
        return self.g * self.weight_Ig + 2

    @property
    def complete_intersection_class(self) -> Fraction:
        """lambda_1^2 coefficient of {I_g = det D(I_g) = 0}."""
        return self.weight_Ig * self.hessian_det_weight


def modular_weights(g: int) -> ModularWeights:
    """Weights of F_g (product of even theta constants) and I_g (the form cutting out N_0')."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    w_f = Fraction(2) ** (g - 2) * (2**g + 1)
    w_i = Fraction(factorial(g) * (g + 3), 4) - Fraction(2) ** (g - 3) * (2**g + 1)
    n0 = class_N0(g)[1]
    return ModularWeights(g, w_f, w_i, w_f + 2 * w_i == n0 == Fraction(factorial(g) * (g + 3), 2))


def factor_int(n) -> str:
    """'2^4*3*17' style factorisation of an integer (or 'p/q' for a proper fraction)."""
    n = Fraction(n)
    if n.denominator != 1:
        return format_fraction(n)
    m = abs(n.numerator)
    if m < 2:
        return str(n.numerator)
    parts = []
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            parts.append(f"{p}^{e}" if e > 1 else str(p))
        p += 1
    if m > 1:
        parts.append(str(m))
    return ("-" if n < 0 else "") + "*".join(parts)


def ag_table(g: int) -> list[tuple[str, Fraction]]:
    """Rows of divisor weights and codimension-2 coefficients printed by the CLI."""
    w = modular_weights(g)
    rows = [
        ("[N0]", class_N0(g)[1]),
        ("[theta_null]", w.weight_Fg),
        ("[N0']", w.weight_Ig),
    ]
    if g >= 4:
        rows.append(("[N0^{g-1}]", class_N0_hess(g)[2]))
    rows.append(("[theta_null^{g-1}]", class_thetanull_hess(g)[2]))
    if g >= 4:
        rows.append(("[H]", class_H(g)[2]))
    return rows
