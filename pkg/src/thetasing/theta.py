"""Riemann theta functions with characteristics and their z-derivatives.

The series

    theta[eps, delta](tau, z) = sum_m exp(pi i [n^t tau n + 2 n^t (z + delta/2)]),   n = m + eps/2,

is summed over the box ``max|n_i| <= R``. The radius ``R`` comes from an explicit
Gaussian tail bound using the smallest eigenvalue of ``Im tau``, so every entry of
the returned jet is within ``tol`` of the full lattice sum (up to float rounding).

No Siegel reduction is applied: callers should pass reasonably reduced period
matrices, otherwise the radius (and the cost) grows like ``1/sqrt(y_min)``.
Likewise ``z`` is used as given; quasi-periodicity is never applied.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPeriodMatrix, PrecisionUnreachable

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class Characteristic:
    """A theta characteristic ``[eps, delta]`` with entries in {0, 1}."""

    eps: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        delta = tuple(int(d) for d in self.delta)
        if len(eps) == 0 or len(eps) != len(delta):
            raise ValueError(f"characteristic halves must have equal positive length, got {eps} and {delta}")
        if any(e not in (0, 1) for e in eps + delta):
            raise ValueError("characteristic entries must be 0 or 1")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "delta", delta)

    @property
    def g(self) -> int:
        return len(self.eps)

    @property
    def parity(self) -> int:
        return sum(e * d for e, d in zip(self.eps, self.delta)) % 2

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    @classmethod
    def zero(cls, g: int) -> "Characteristic":
        return cls((0,) * g, (0,) * g)

    @classmethod
    def parse(cls, text: str) -> "Characteristic":
        """Parse the ``"0101|0011"`` form (eps before the bar, delta after)."""
        try:
            left, right = text.strip().split("|")
        except ValueError:
            raise ValueError(f"expected 'eps|delta' bit strings, got {text!r}") from None
        return cls(tuple(int(c) for c in left), tuple(int(c) for c in right))

    def __str__(self) -> str:
        return "".join(map(str, self.eps)) + "|" + "".join(map(str, self.delta))


class PeriodMatrix:
    """A point of the Siegel upper half space.

    The matrix must be exactly symmetric; ``Im tau`` must be positive definite.
    Only the upper triangle is kept, so the stored matrix is symmetric by
    construction. The smallest eigenvalue of ``Im tau`` is cached as ``y_min``.
    """

    __slots__ = ("_tau", "y_min")

    def __init__(self, tau):
        t = np.array(tau, dtype=complex)
        if t.ndim == 0:
            t = t.reshape(1, 1)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidPeriodMatrix(f"period matrix must be square, got shape {t.shape}")
        if not np.array_equal(t, t.T):
            raise InvalidPeriodMatrix("period matrix is not symmetric")
        upper = np.triu(t)
        t = upper + np.triu(t, 1).T
        y = t.imag
        try:
            np.linalg.cholesky(y)
        except np.linalg.LinAlgError:
            raise InvalidPeriodMatrix("imaginary part is not positive definite") from None
        y_min = float(np.linalg.eigvalsh(y)[0])
        if not y_min > 0:
            raise InvalidPeriodMatrix("imaginary part is not positive definite")
        t.setflags(write=False)
        self._tau = t
        self.y_min = y_min

    @property
    def tau(self) -> np.ndarray:
        return self._tau

    @property
    def g(self) -> int:
        return self._tau.shape[0]

    def shifted(self, j: int, k: int, t: complex) -> "PeriodMatrix":
        """Return ``tau + t*E_jk`` where ``E_jk`` touches both (j, k) and (k, j)."""
        new = self._tau.copy()
        new[j, k] += t
        if j != k:
            new[k, j] += t
        return PeriodMatrix(new)

    def __eq__(self, other):
        return isinstance(other, PeriodMatrix) and np.array_equal(self._tau, other._tau)

    def __hash__(self):
        return hash(self._tau.tobytes())

    def __repr__(self):
        return f"PeriodMatrix({self._tau.tolist()!r})"


@dataclass(frozen=True)
class EvalConfig:
    tol: float = 1e-12
    max_radius: int = 40

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_radius < 1:
            raise ValueError("max_radius must be at least 1")


@dataclass(frozen=True)
class ThetaJet:
    """Value, gradient and Hessian in z of one theta function at one point."""

    value: complex
    grad: np.ndarray
    hess: np.ndarray
    trunc_bound: float
    radius: int = field(default=0, compare=False)


def _as_tau(tau) -> PeriodMatrix:
    return tau if isinstance(tau, PeriodMatrix) else PeriodMatrix(tau)


def _as_point(z, g: int) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (g,):
        raise ValueError(f"point must have length {g}, got shape {z.shape}")
    return z


def _profile_peak(y: float, c: float, order: int) -> float:
    """Maximiser of t -> (2 pi t)^order exp(-pi y t^2 + 2 pi c t) on t >= 0."""
    return (2 * math.pi * c + math.sqrt(4 * math.pi**2 * c * c + 8 * math.pi * y * order)) / (4 * math.pi * y)


def _log_tail_profile(rho: float, y: float, c: float, order: int) -> float:
    """log of sup_{t >= rho} (2 pi t)^order exp(-pi y t^2 + 2 pi c t)."""
    t = max(rho, _profile_peak(y, c, order))
    if t == 0.0:
        return 0.0  # order 0 with c == 0: the profile at 0 is 1
    return order * math.log(2 * math.pi * t) - math.pi * y * t * t + 2 * math.pi * c * t


def tail_bound(g: int, y_min: float, imag_norm: float, order: int, radius: int) -> float:
    """Upper bound on the sum of |derivative-weighted terms| with ``max|n_i| > radius``.

    Shell ``j`` holds the points with ``radius+j-1 < max|n_i| <= radius+j``; there
    are at most ``(2(radius+j)+1)^g`` of them and each has Euclidean norm above
    ``radius+j-1``. ``imag_norm`` is the Euclidean norm of ``Im z``.
    """
    peak = _profile_peak(y_min, imag_norm, order)
    total = 0.0
    s = radius + 1
    while True:
        log_term = g * math.log(2 * s + 1) + _log_tail_profile(s - 1, y_min, imag_norm, order)
        if log_term > 700:
            return math.inf
        term = math.exp(log_term)
        total += term
        # beyond the peak the shell terms decay super-geometrically
        if s - 1 > peak + 1 and term <= total * 1e-18:
            return total
        s += 1


def truncation_radius(tau, z, char: Characteristic, order: int, tol: float, max_radius: int = 40) -> int:
    """Smallest box radius R >= 1 whose tail bound for the given derivative order is <= tol."""
    tau = _as_tau(tau)
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if char.g != tau.g:
        raise ValueError("characteristic and period matrix have different genus")
    z = _as_point(z, tau.g)
    c = float(np.linalg.norm(z.imag))
    for radius in range(1, max_radius + 1):
        if tail_bound(tau.g, tau.y_min, c, order, radius) <= tol:
            return radius
    raise PrecisionUnreachable(f"tolerance {tol:g} needs a lattice radius above max_radius={max_radius}")


def _lattice(g: int, char: Characteristic, radius: int) -> np.ndarray:
    axes = []
    for e in char.eps:
        shift = e / 2
        lo = math.ceil(-radius - shift)
        hi = math.floor(radius - shift)
        axes.append(np.arange(lo, hi + 1) + shift)
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([a.ravel() for a in grid], axis=1)


def _terms(tau: PeriodMatrix, z: np.ndarray, char: Characteristic, radius: int):
    n = _lattice(tau.g, char, radius)
    shift = z + np.asarray(char.delta) / 2
    quad = np.einsum("pi,ij,pj->p", n, tau.tau, n)
    terms = np.exp(1j * math.pi * (quad + 2 * (n @ shift)))
    return n, terms


def theta_value(tau, z, char: Characteristic | None = None, cfg: EvalConfig = EvalConfig()) -> complex:
    """theta[char](tau, z) alone, truncated with the order-0 bound."""
    tau = _as_tau(tau)
    char = char or Characteristic.zero(tau.g)
    z = _as_point(z, tau.g)
    radius = truncation_radius(tau, z, char, 0, cfg.tol, cfg.max_radius)
    _, terms = _terms(tau, z, char, radius)
    return complex(terms.sum())


def theta_jet(tau, z, char: Characteristic | None = None, cfg: EvalConfig = EvalConfig()) -> ThetaJet:
    """Value, gradient and Hessian in z, each within ``cfg.tol`` of the full series."""
    tau = _as_tau(tau)
    char = char or Characteristic.zero(tau.g)
    if char.g != tau.g:
        raise ValueError("characteristic and period matrix have different genus")
    z = _as_point(z, tau.g)
    radius = max(truncation_radius(tau, z, char, k, cfg.tol, cfg.max_radius) for k in (0, 1, 2))
    n, terms = _terms(tau, z, char, radius)
    value = complex(terms.sum())
    grad = TWO_PI_I * (n.T @ terms)
    hess = TWO_PI_I**2 * np.einsum("pi,pj,p->ij", n, n, terms)
    hess = (hess + hess.T) / 2
    return ThetaJet(value, grad, hess, cfg.tol, radius)


def heat_residual(tau, z, char: Characteristic, j: int, k: int, h: float, cfg: EvalConfig = EvalConfig()) -> float:
    """Defect of the heat equation d2/dz_j dz_k = 2 pi i (1 + [j == k]) d/dtau_jk.

    The tau-derivative is the five-point central difference with step ``h``
    along the symmetric direction ``E_jk`` (error O(h^4)); indices are 0-based.
    """
    tau = _as_tau(tau)
    if not (0 <= j < tau.g and 0 <= k < tau.g):
        raise IndexError(f"entry ({j}, {k}) outside a genus {tau.g} matrix")
    f = {s: theta_value(tau.shifted(j, k, s * h), z, char, cfg) for s in (-2, -1, 1, 2)}
    d_tau = (f[-2] - 8 * f[-1] + 8 * f[1] - f[2]) / (12 * h)
    jet = theta_jet(tau, z, char, cfg)
    factor = TWO_PI_I * (2 if j == k else 1)
    return float(abs(jet.hess[j, k] - factor * d_tau))


def parity_defect(tau, z, char: Characteristic, cfg: EvalConfig = EvalConfig()) -> float:
    tau = _as_tau(tau)
    z = _as_point(z, tau.g)
    sign = -1 if char.parity else 1
    return float(abs(theta_value(tau, -z, char, cfg) - sign * theta_value(tau, z, char, cfg)))


def enumerate_characteristics(g: int, parity="even") -> list[Characteristic]:
    """All characteristics of genus g with the given parity ("even"/"odd" or 0/1).

    There are 2^(g-1)(2^g+1) even and 2^(g-1)(2^g-1) odd ones.
    """
    if g < 1:
        raise ValueError("genus must be positive")
    want = {"even": 0, "odd": 1}.get(parity, parity)
    if want not in (0, 1):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    out = []
    for bits in itertools.product((0, 1), repeat=2 * g):
        ch = Characteristic(bits[:g], bits[g:])
        if ch.parity == want:
            out.append(ch)
    return out
