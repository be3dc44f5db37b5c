"""Skew forms, Pfaffians and the Pfaffian quadric of a Prym-Petri map.

Everything is exact over the rationals. The basis of the second exterior power
of a 4-dimensional space is fixed once and for all as

    e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4

(indices 0..5 in ``PLUCKER_PAIRS``); signs of Pfaffians depend on this order.
A vector ``p`` in that basis is decomposable exactly when the Pluecker form
``p12 p34 - p13 p24 + p14 p23`` vanishes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import ratlinalg as la
from .errors import DimensionMismatch, OddDimension, UnsupportedKernelDimension

PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class SkewMatrix:
    """An exact skew-symmetric square matrix."""

    def __init__(self, entries):
        rows = la.frac_matrix(entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("skew matrix must be square")
        for j in range(n):
            if rows[j][j] != 0:
                raise ValueError("skew matrix must have zero diagonal")
            for k in range(j + 1, n):
                if rows[j][k] != -rows[k][j]:
                    raise ValueError(f"entries ({j},{k}) and ({k},{j}) are not opposite")
        self.entries = rows
        self.n = n

    @classmethod
    def from_upper(cls, n: int, upper: dict) -> "SkewMatrix":
        """Build from ``{(j, k): value}`` with j < k."""
        m = [[Fraction(0)] * n for _ in range(n)]
        for (j, k), v in upper.items():
            m[j][k] = Fraction(v)
            m[k][j] = -Fraction(v)
        return cls(m)

    def congruent(self, a) -> "SkewMatrix":
        """A^t M A."""
        a = la.frac_matrix(a)
        return SkewMatrix(la.matmul(la.matmul(la.transpose(a), self.entries), a))

    def __repr__(self):
        return f"SkewMatrix({[[la.format_fraction(x) for x in r] for r in self.entries]})"


def _pf(m, idx):
    if not idx:
        return Fraction(1)
    first, rest = idx[0], idx[1:]
    total = Fraction(0)
    for pos, j in enumerate(rest):
        a = m[first][j]
        if a == 0:
            continue
        sub = rest[:pos] + rest[pos + 1:]
        term = a * _pf(m, sub)
        total += term if pos % 2 == 0 else -term
    return total


def pfaffian(m) -> Fraction:
    """Pfaffian by expansion along the first row; Pf(m)^2 = det(m)."""
    if not isinstance(m, SkewMatrix):
        m = SkewMatrix(m)
    if m.n % 2:
        raise OddDimension(f"Pfaffian needs even size, got {m.n}")
    return _pf(m.entries, tuple(range(m.n)))


def skew_from_plucker(p) -> SkewMatrix:
    """The 4x4 skew matrix whose (k, j) entry is the coordinate of e_k^e_j in ``p``."""
    if len(p) != 6:
        raise DimensionMismatch("a vector of the second exterior power of a 4-space has 6 coordinates")
    return SkewMatrix.from_upper(4, dict(zip(PLUCKER_PAIRS, p)))


def plucker_value(p) -> Fraction:
    p = [Fraction(x) for x in p]
    return p[0] * p[5] - p[1] * p[4] + p[2] * p[3]


def wedge(u, v) -> list[Fraction]:
    """Coordinates of u ^ v for u, v in a 4-space."""
    return [Fraction(u[k]) * v[j] - Fraction(u[j]) * v[k] for k, j in PLUCKER_PAIRS]


@dataclass(frozen=True)
class PetriMap:
    """Matrix of the skew Petri map from the 6-dim exterior square to an ``n_target``-dim space.

    Column order follows ``PLUCKER_PAIRS``.
    """

    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.matrix)
        if not rows or any(len(r) != 6 for r in rows):
            raise DimensionMismatch("a Petri map has 6 source columns and at least one row")
        object.__setattr__(self, "matrix", rows)

    @property
    def n_target(self) -> int:
        return len(self.matrix)

    @property
    def rank(self) -> int:
        return la.rank([list(r) for r in self.matrix])

    def kernel(self) -> list[list[Fraction]]:
        return la.nullspace([list(r) for r in self.matrix])

    def dual_apply(self, w) -> list[Fraction]:
        """Coordinates of the pairing <mu(e_k^e_j), w> for every basis pair."""
        if len(w) != self.n_target:
            raise DimensionMismatch("covector has the wrong dimension")
        return [sum((Fraction(wr) * row[c] for wr, row in zip(w, self.matrix)), Fraction(0)) for c in range(6)]


@dataclass(frozen=True)
class QuadraticForm:
    gram: tuple

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def rank(self) -> int:
        return la.rank([list(r) for r in self.gram])

    def __call__(self, w) -> Fraction:
        w = [Fraction(x) for x in w]
        return sum((w[i] * self.gram[i][j] * w[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.gram for x in row)


def pfaffian_quadric(mu: PetriMap) -> QuadraticForm:
    """Q(w) = Pf of the 4x4 skew matrix (<mu(e_k^e_j), w>), as an exact Gram matrix.

    The Gram matrix is recovered by polarisation of the Pfaffian itself.
    """
    if not isinstance(mu, PetriMap):
        mu = PetriMap(mu)
    n = mu.n_target

    def q(w):
        return pfaffian(skew_from_plucker(mu.dual_apply(w)))

    unit = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    diag = [q(e) for e in unit]
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = diag[i]
        for j in range(i + 1, n):
            both = q([a + b for a, b in zip(unit[i], unit[j])])
            gram[i][j] = gram[j][i] = (both - diag[i] - diag[j]) / 2
    return QuadraticForm(tuple(tuple(r) for r in gram))


def kernel_meets_grassmannian(mu: PetriMap, field: str = "complex") -> bool:
    """Does the projectivised kernel of ``mu`` contain a decomposable vector?

    One-dimensional kernel: test the Pluecker relation on its generator.
    Two-dimensional kernel: the Pluecker form restricted to the pencil is a binary
    quadratic form. Over the complex numbers it always has a nontrivial zero;
    with ``field="rational"`` the zero must be rational (discriminant square test).
    A zero kernel never meets the Grassmannian.
    """
    if not isinstance(mu, PetriMap):
        mu = PetriMap(mu)
    if field not in ("complex", "rational"):
        raise ValueError("field must be 'complex' or 'rational'")
    ker = mu.kernel()
    if len(ker) == 0:
        return False
    if len(ker) == 1:
        return plucker_value(ker[0]) == 0
    if len(ker) == 2:
        if field == "complex":
            return True
        u, v = ker
        a = plucker_value(u)
        c = plucker_value(v)
        b = plucker_value([x + y for x, y in zip(u, v)]) - a - c
        if a == 0 or c == 0:
            return True
        return la.is_rational_square(b * b - 4 * a * c)
    raise UnsupportedKernelDimension(f"kernel dimension {len(ker)} is not supported (at most 2)")


def _rand_q(rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 3))


def _rand_vec(rng, n):
    while True:
        v = [_rand_q(rng) for _ in range(n)]
        if any(v):
            return v


def planted_petri_map(kernel_vectors, n_target: int, rng: random.Random) -> PetriMap:
    """A random Petri map whose kernel is spanned by ``kernel_vectors`` (generically)."""
    annihilator = la.nullspace([list(map(Fraction, k)) for k in kernel_vectors])
    mix = [[_rand_q(rng) for _ in annihilator] for _ in range(n_target)]
    return PetriMap(la.matmul(mix, annihilator))


def random_petri_map(kind: str, rng: random.Random, n_target: int = 5) -> PetriMap:
    """Random instance of one construction: generic, decomposable, nondecomposable or pencil."""
    if kind == "generic":
        return PetriMap([[_rand_q(rng) for _ in range(6)] for _ in range(n_target)])
    if kind == "decomposable":
        return planted_petri_map([wedge(_rand_vec(rng, 4), _rand_vec(rng, 4))], n_target, rng)
    if kind == "nondecomposable":
        omega = [a + b for a, b in zip(wedge(_rand_vec(rng, 4), _rand_vec(rng, 4)),
                                        wedge(_rand_vec(rng, 4), _rand_vec(rng, 4)))]
        return planted_petri_map([omega], n_target, rng)
    if kind == "pencil":
        return planted_petri_map([_rand_vec(rng, 6), _rand_vec(rng, 6)], n_target, rng)
    raise ValueError(f"unknown construction {kind!r}")


KINDS = ("generic", "decomposable", "nondecomposable", "pencil")


@dataclass
class Rk4Report:
    trials: int
    seed: int
    checked: int = 0
    agreements: int = 0
    zero_quadric: int = 0
    unsupported_kernel: int = 0
    rank_bound_violations: int = 0
    by_kind: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples and self.rank_bound_violations == 0

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "checked": self.checked,
            "agreements": self.agreements,
            "zero_quadric": self.zero_quadric,
            "unsupported_kernel": self.unsupported_kernel,
            "rank_bound_violations": self.rank_bound_violations,
            "by_kind": dict(self.by_kind),
            "counterexamples": list(self.counterexamples),
        }


def rk4_equivalence_check(trials: int, seed: int, n_target: int = 5) -> Rk4Report:
    """Test rank(Q) <= 4  <=>  P(Ker mu) meets the Grassmannian on random Petri maps.

    Instances cycle through the constructions in ``KINDS``. A quadric that is
    identically zero is counted separately and not scored. Counterexamples are
    recorded with their full matrix.
    """
    rng = random.Random(seed)
    report = Rk4Report(trials=trials, seed=seed)
    for i in range(trials):
        kind = KINDS[i % len(KINDS)]
        mu = random_petri_map(kind, rng, n_target)
        report.by_kind[kind] = report.by_kind.get(kind, 0) + 1
        try:
            meets = kernel_meets_grassmannian(mu)
        except UnsupportedKernelDimension:
            report.unsupported_kernel += 1
            continue
        quad = pfaffian_quadric(mu)
        if quad.is_zero:
            report.zero_quadric += 1
            continue
        rank_q = quad.rank
        if rank_q > mu.rank:
            report.rank_bound_violations += 1
        report.checked += 1
        if (rank_q <= 4) == meets:
            report.agreements += 1
        else:
            report.counterexamples.append({
                "trial": i,
                "kind": kind,
                "rank_Q": rank_q,
                "kernel_meets_grassmannian": meets,
                "matrix": [[la.format_fraction(x) for x in row] for row in mu.matrix],
            })
    return report
