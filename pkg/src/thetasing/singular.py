"""Singular points of theta divisors from certified families, and Hessian rank tests.

There is no general solver for Sing(Theta) here. Singular points are built from
families where they are known to exist:

* two-torsion points ``(tau eps + delta)/2`` on a theta-null, reached by a
  one-variable Newton path in one entry of ``tau``;
* decomposable period matrices ``tau1 (+) tau2``, where Theta_1 x Theta_2 is singular.

A singular point is an ordinary double point when its Hessian has full rank g;
the rank is decided from singular values with a relative threshold ``rank_tol``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPeriodMatrix, LeftSiegelSpace, NoConvergence, NotOnTheta
from .theta import Characteristic, EvalConfig, PeriodMatrix, _as_tau, enumerate_characteristics, theta_jet, theta_value

RANK_TOL = 1e-6
SING_TOL = 1e-8


@dataclass(frozen=True)
class TwoTorsion:
    char: Characteristic
    kind: str = field(default="two_torsion", init=False)


@dataclass(frozen=True)
class Product:
    g1: int
    g2: int
    kind: str = field(default="product", init=False)


@dataclass(frozen=True)
class Manual:
    kind: str = field(default="manual", init=False)


@dataclass(frozen=True)
class SingCandidate:
    tau: PeriodMatrix
    z: np.ndarray
    provenance: TwoTorsion | Product | Manual = Manual()

    def __post_init__(self):
        tau = _as_tau(self.tau)
        z = np.atleast_1d(np.asarray(self.z, dtype=complex))
        if z.shape != (tau.g,):
            raise ValueError(f"point must have length {tau.g}")
        if isinstance(self.provenance, TwoTorsion) and not np.array_equal(z, two_torsion_point(tau, self.provenance.char)):
            raise ValueError("a two-torsion candidate must sit exactly at (tau eps + delta)/2")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class SingReport:
    value_norm: float
    grad_norm: float
    hess_singular_values: np.ndarray
    numeric_rank: int
    in_Snull: bool
    in_Sdec: bool
    hess_degenerate: bool
    sing_tol: float = SING_TOL
    rank_tol: float = RANK_TOL

    @property
    def singular(self) -> bool:
        return self.value_norm <= self.sing_tol and self.grad_norm <= self.sing_tol

    @property
    def g(self) -> int:
        return len(self.hess_singular_values)


def two_torsion_point(tau, char: Characteristic) -> np.ndarray:
    tau = _as_tau(tau)
    if char.g != tau.g:
        raise ValueError("characteristic and period matrix have different genus")
    return (tau.tau @ np.asarray(char.eps, dtype=complex) + np.asarray(char.delta)) / 2


def odd_two_torsion_points(tau) -> list[np.ndarray]:
    """Two-torsion points of odd characteristic; they always lie on Theta."""
    tau = _as_tau(tau)
    return [two_torsion_point(tau, ch) for ch in enumerate_characteristics(tau.g, "odd")]


def product_tau(tau1, tau2) -> PeriodMatrix:
    t1, t2 = _as_tau(tau1).tau, _as_tau(tau2).tau
    g1, g2 = t1.shape[0], t2.shape[0]
    out = np.zeros((g1 + g2, g1 + g2), dtype=complex)
    out[:g1, :g1] = t1
    out[g1:, g1:] = t2
    return PeriodMatrix(out)


def product_singular_point(tau1, tau2, z2, cfg: EvalConfig = EvalConfig(), tol: float = 1e-10) -> SingCandidate:
    """Pair the genus-1 theta zero (1 + tau1)/2 with a point ``z2`` of Theta_{tau2}."""
    tau1, tau2 = _as_tau(tau1), _as_tau(tau2)
    if tau1.g != 1:
        raise ValueError("the first factor must have genus 1")
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    value = abs(theta_value(tau2, z2, None, cfg))
    if value > tol:
        raise NotOnTheta(f"|theta(tau2, z2)| = {value:.3e} exceeds {tol:g}")
    z1 = (1 + tau1.tau[0, 0]) / 2
    return SingCandidate(product_tau(tau1, tau2), np.concatenate([[z1], z2]), Product(1, tau2.g))


def numeric_rank(singular_values, rank_tol: float = RANK_TOL) -> int:
    s = np.asarray(singular_values)
    if s.size == 0:
        return 0
    return int(np.sum(s > rank_tol * max(1.0, float(s.max()))))


def verify_singular(c: SingCandidate, cfg: EvalConfig = EvalConfig(), sing_tol: float = SING_TOL,
                    rank_tol: float = RANK_TOL) -> SingReport:
    jet = theta_jet(c.tau, c.z, None, cfg)
    value_norm = abs(jet.value)
    grad_norm = float(np.linalg.norm(jet.grad))
    sv = np.linalg.svd(jet.hess, compute_uv=False)
    rank = numeric_rank(sv, rank_tol)
    singular = value_norm <= sing_tol and grad_norm <= sing_tol
    prov = c.provenance
    in_snull = isinstance(prov, TwoTorsion) and prov.char.is_even and value_norm <= sing_tol
    in_sdec = isinstance(prov, Product) and singular
    return SingReport(
        value_norm=value_norm,
        grad_norm=grad_norm,
        hess_singular_values=sv,
        numeric_rank=rank,
        in_Snull=in_snull,
        in_Sdec=in_sdec,
        hess_degenerate=rank < c.tau.g,
        sing_tol=sing_tol,
        rank_tol=rank_tol,
    )


def _newton_entry(char, tau0: PeriodMatrix, entry, cfg, sing_tol, max_iter, fd_step):
    j, k = entry
    z0 = np.zeros(tau0.g)

    def f(t):
        try:
            tau = tau0.shifted(j, k, t)
        except InvalidPeriodMatrix:
            raise LeftSiegelSpace(f"Im tau degenerated at step t={t}") from None
        return theta_value(tau, z0, char, cfg), tau

    t = 0j
    value, tau = f(t)
    for _ in range(max_iter):
        if abs(value) <= sing_tol:
            return tau
        deriv = (f(t + fd_step)[0] - f(t - fd_step)[0]) / (2 * fd_step)
        if deriv == 0:
            break
        step = value / deriv
        # damp wild steps; the theta constant is only trusted near the start
        if abs(step) > 0.5:
            step *= 0.5 / abs(step)
        t -= step
        value, tau = f(t)
    raise NoConvergence(f"no theta-null zero along entry {entry} after {max_iter} steps (|theta| = {abs(value):.2e})")


def thetanull_path(g: int, char: Characteristic, tau_start, entry=(0, 1), cfg: EvalConfig = EvalConfig(1e-14),
                   sing_tol: float = 1e-12, max_iter: int = 60, restarts: int = 8, seed: int = 0,
                   fd_step: float = 1e-6) -> PeriodMatrix:
    """Deform one entry of ``tau_start`` until the theta constant of ``char`` vanishes.

    ``entry`` is a 0-based (j, k) pair; the symmetric partner moves with it.
    On failure the search restarts from a random small complex offset in a
    random entry, at most ``restarts`` times.
    """
    tau0 = _as_tau(tau_start)
    if tau0.g != g or char.g != g:
        raise ValueError("genus mismatch between g, char and tau_start")
    if not char.is_even:
        raise ValueError("odd theta constants vanish identically; pass an even characteristic")
    rng = random.Random(seed)
    start, where = tau0, tuple(entry)
    last = None
    for attempt in range(restarts + 1):
        try:
            return _newton_entry(char, start, where, cfg, sing_tol, max_iter, fd_step)
        except (NoConvergence, LeftSiegelSpace) as exc:
            last = exc
        for _ in range(20):
            a, b = sorted((rng.randrange(g), rng.randrange(g)))
            offset = complex(rng.uniform(-0.2, 0.2), rng.uniform(-0.1, 0.1))
            try:
                start = tau0.shifted(a, b, offset)
            except InvalidPeriodMatrix:
                continue
            where = tuple(sorted((rng.randrange(g), rng.randrange(g))))
            break
    raise last
