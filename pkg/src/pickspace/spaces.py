"""Radially weighted Besov spaces on the unit ball of C^d.

For a radial weight the monomials are orthogonal, so every norm here is
diagonal in the monomial basis and is determined by the squared monomial
norms ``||z^alpha||^2``.  The weighted Bergman part is computed in polar
coordinates with volume normalized to ``V(B_d) = 1``::

    ||z^alpha||^2_{L^2_a(w)} = 2d * S(alpha) * int_0^1 r^(2n+2d-1) w(r) dr

where ``n = |alpha|`` and ``S(alpha) = (d-1)! alpha! / (n+d-1)!`` is the
integral of ``|zeta^alpha|^2`` over the unit sphere with normalized surface
measure.  The Besov norm then scales the degree-``n`` part by ``n^(2s)``
for ``n >= 1`` and leaves the constant term alone.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from collections.abc import Mapping, Sequence

import numpy as np

from .polyring import DimensionError, MultiIndex, Polynomial, indices_up_to, radial_derivative

WEIGHT_KINDS = ("one", "standard", "tabulated")
SPACE_KINDS = ("besov", "drury_arveson", "dirichlet")


def beta_moment(n: float, a: float) -> float:
    """``int_0^1 t^n (1-t)^a dt = Gamma(n+1) Gamma(a+1) / Gamma(n+a+2)``."""
    if a <= -1:
        raise ValueError(f"weight exponent must be > -1, got {a}")
    if n <= -1:
        raise ValueError(f"moment index must be > -1, got {n}")
    return math.exp(math.lgamma(n + 1) + math.lgamma(a + 1) - math.lgamma(n + a + 2))


def multi_factorial(alpha: Sequence[int]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def sphere_factor(alpha: Sequence[int]) -> Fraction:
    """Exact ``int_S |zeta^alpha|^2 dsigma`` for normalized surface measure."""
    d = len(alpha)
    n = sum(alpha)
    return Fraction(math.factorial(d - 1) * multi_factorial(alpha), math.factorial(n + d - 1))


def monomial_norm_da(alpha: Sequence[int]) -> Fraction:
    """Squared Drury-Arveson norm ``alpha! / |alpha|!``, exactly."""
    return Fraction(multi_factorial(alpha), math.factorial(sum(alpha)))


@dataclass(frozen=True)
class RadialWeight:
    """A radial weight ``w(|z|)`` described by its radial moments.

    ``moment(k) = int_0^1 r^k w(r) dr``.  For ``kind="tabulated"`` the
    moments are supplied directly, indexed by ``k``.
    """

    kind: str = "one"
    a: float = 0.0
    moments: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}; expected one of {WEIGHT_KINDS}")
        if self.kind == "standard" and self.a <= -1:
            raise ValueError(f"standard weight needs a > -1, got {self.a}")
        if self.kind == "tabulated":
            if not self.moments:
                raise ValueError("tabulated weight needs at least one moment")
            m = self.moments
            if any(x <= 0 for x in m):
                raise ValueError("tabulated moments must be positive")
            if any(m[i + 1] > m[i] for i in range(len(m) - 1)):
                raise ValueError("tabulated moments must be non-increasing")

    @classmethod
    def one(cls) -> RadialWeight:
        return cls("one")

    @classmethod
    def standard(cls, a: float) -> RadialWeight:
        """``(1 - |z|^2)^a``."""
        return cls("standard", a=float(a))

    @classmethod
    def tabulated(cls, moments: Sequence[float]) -> RadialWeight:
        return cls("tabulated", moments=tuple(float(x) for x in moments))

    @property
    def evaluable(self) -> bool:
        return self.kind in ("one", "standard")

    def moment(self, k: float) -> float:
        if self.kind == "one":
            return 1.0 / (k + 1)
        if self.kind == "standard":
            # substitute t = r^2
            return 0.5 * beta_moment((k - 1) / 2, self.a)
        k_int = int(k)
        if k_int != k or k_int >= len(self.moments):
            raise ValueError(f"tabulated weight has no moment of order {k}")
        return self.moments[k_int]

    def density(self, r):
        """Radial profile ``w(r)``; only for the closed-form kinds."""
        if self.kind == "one":
            return np.ones_like(np.asarray(r, dtype=float))
        if self.kind == "standard":
            return (1.0 - np.asarray(r, dtype=float) ** 2) ** self.a
        raise ValueError("tabulated weights have no density")

    def to_config(self) -> dict:
        if self.kind == "one":
            return {"kind": "one"}
        if self.kind == "standard":
            return {"kind": "standard", "a": self.a}
        return {"kind": "tabulated", "moments": list(self.moments)}

    @classmethod
    def from_config(cls, cfg: Mapping) -> RadialWeight:
        kind = cfg.get("kind", "one")
        if kind == "one":
            return cls.one()
        if kind == "standard":
            return cls.standard(float(cfg["a"]))
        if kind == "tabulated":
            return cls.tabulated(cfg["moments"])
        raise ValueError(f"unknown weight kind {kind!r}")


@dataclass(frozen=True)
class SpaceSpec:
    """A Hilbert space of analytic functions on ``B_d`` with a diagonal
    monomial norm.

    ``kind="besov"`` is ``B^s_w``; ``"drury_arveson"`` is ``H^2_d`` with
    ``||z^alpha||^2 = alpha!/|alpha|!``; ``"dirichlet"`` is the Dirichlet
    space of the disc normed so that ``||z^n||^2 = n + 1``.
    """

    dim: int
    s: float = 0.0
    weight: RadialWeight = field(default_factory=RadialWeight.one)
    kind: str = "besov"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if self.kind not in SPACE_KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "dirichlet" and self.dim != 1:
            raise ValueError("the Dirichlet space is defined on the disc (dim = 1)")

    @classmethod
    def besov(cls, dim: int, s: float, weight: RadialWeight | None = None) -> SpaceSpec:
        return cls(dim, float(s), weight or RadialWeight.one())

    @classmethod
    def bergman(cls, dim: int, a: float = 0.0) -> SpaceSpec:
        """``L^2_a((1-|z|^2)^a dV)``."""
        w = RadialWeight.one() if a == 0 else RadialWeight.standard(a)
        return cls(dim, 0.0, w)

    @classmethod
    def drury_arveson(cls, dim: int) -> SpaceSpec:
        return cls(dim, kind="drury_arveson")

    @classmethod
    def dirichlet(cls) -> SpaceSpec:
        return cls(1, kind="dirichlet")

    def with_s(self, s: float) -> SpaceSpec:
        if self.kind != "besov":
            raise ValueError(f"cannot change the smoothness of a {self.kind} space")
        return replace(self, s=float(s))

    def label(self) -> str:
        if self.kind == "drury_arveson":
            return f"H2_{self.dim}"
        if self.kind == "dirichlet":
            return "D"
        w = self.weight
        wl = "1" if w.kind == "one" else (f"std({w.a:g})" if w.kind == "standard" else "tab")
        return f"B^{self.s:g}_{wl}(d={self.dim})"

    def to_config(self) -> dict:
        if self.kind != "besov":
            return {"dim": self.dim, "kind": self.kind}
        return {"dim": self.dim, "s": self.s, "weight": self.weight.to_config()}

    @classmethod
    def from_config(cls, cfg: Mapping) -> SpaceSpec:
        kind = cfg.get("kind", "besov")
        dim = int(cfg.get("dim", 1))
        if kind == "drury_arveson":
            return cls.drury_arveson(dim)
        if kind == "dirichlet":
            return cls.dirichlet()
        if kind != "besov":
            raise ValueError(f"unknown space kind {kind!r}")
        return cls(dim, float(cfg.get("s", 0.0)), RadialWeight.from_config(cfg.get("weight", {"kind": "one"})))

    @classmethod
    def parse(cls, text: str) -> SpaceSpec:
        """Parse a JSON config or a shorthand.

        Shorthands: ``da:D`` or ``h2:D`` (Drury-Arveson), ``dirichlet``,
        ``hardy:D`` (``B^{1/2}_1``), ``bergman:D[:a]``,
        ``besov:D:s[:a]`` (standard weight exponent ``a``, default constant one).
        """
        text = text.strip()
        if text.startswith("{"):
            return cls.from_config(json.loads(text))
        parts = text.split(":")
        head = parts[0].lower()
        try:
            args = [float(x) for x in parts[1:]]
        except ValueError as exc:
            raise ValueError(f"bad space shorthand {text!r}") from exc
        if head in ("da", "h2", "drury_arveson") and len(args) == 1:
            return cls.drury_arveson(int(args[0]))
        if head == "dirichlet" and not args:
            return cls.dirichlet()
        if head == "hardy" and len(args) == 1:
            return cls.besov(int(args[0]), 0.5)
        if head == "bergman" and len(args) in (1, 2):
            return cls.bergman(int(args[0]), args[1] if len(args) == 2 else 0.0)
        if head == "besov" and len(args) in (2, 3):
            w = RadialWeight.standard(args[2]) if len(args) == 3 and args[2] != 0 else RadialWeight.one()
            return cls.besov(int(args[0]), args[1], w)
        raise ValueError(f"bad space shorthand {text!r}")


def bergman_monomial_norm(weight: RadialWeight, alpha: Sequence[int]) -> float:
    """Squared norm of ``z^alpha`` in ``L^2_a(w dV)``."""
    d = len(alpha)
    n = sum(alpha)
    return float(2 * d * sphere_factor(alpha)) * weight.moment(2 * n + 2 * d - 1)


@lru_cache(maxsize=None)
def _monomial_norm(space: SpaceSpec, alpha: MultiIndex) -> float:
    if space.kind == "drury_arveson":
        return float(monomial_norm_da(alpha))
    n = sum(alpha)
    if space.kind == "dirichlet":
        return float(n + 1)
    m = bergman_monomial_norm(space.weight, alpha)
    return m if n == 0 else float(n) ** (2 * space.s) * m


def monomial_norm(space: SpaceSpec, alpha: Sequence[int]) -> float:
    """Squared norm ``||z^alpha||^2`` in ``space``."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != space.dim:
        raise DimensionError(f"multi-index {alpha} does not match dimension {space.dim}")
    return _monomial_norm(space, alpha)


class MonomialNormTable:
    """Memoized squared monomial norms for one space.

    Safe for concurrent readers; the cache is filled under a lock.
    """

    def __init__(self, space: SpaceSpec):
        self.space = space
        self.values: dict[MultiIndex, float] = {}
        self.max_degree = -1
        self._lock = threading.Lock()

    def extend(self, D: int) -> None:
        with self._lock:
            if D <= self.max_degree:
                return
            for alpha in indices_up_to(self.space.dim, D):
                if sum(alpha) > self.max_degree:
                    self.values[alpha] = monomial_norm(self.space, alpha)
            self.max_degree = D

    def __getitem__(self, alpha: Sequence[int]) -> float:
        alpha = tuple(alpha)
        v = self.values.get(alpha)
        if v is None:
            self.extend(sum(alpha))
            v = self.values[alpha]
        return v

    def array(self, indices: Sequence[MultiIndex]) -> np.ndarray:
        return np.array([self[a] for a in indices])


def inner_product(space: SpaceSpec, p: Polynomial, q: Polynomial) -> complex:
    """``<p, q>`` (linear in ``p``, conjugate-linear in ``q``)."""
    if p.dim != space.dim or q.dim != space.dim:
        raise DimensionError("polynomial dimension does not match the space")
    total = 0j
    for alpha, c in p.items():
        e = q.coeff(alpha)
        if e:
            total += c * e.conjugate() * monomial_norm(space, alpha)
    return total


def space_norm(space: SpaceSpec, p: Polynomial) -> float:
    if p.dim != space.dim:
        raise DimensionError(f"polynomial has dimension {p.dim}, space has {space.dim}")
    return math.sqrt(sum(abs(c) ** 2 * monomial_norm(space, a) for a, c in p.items()))


def weight_l1_norm(weight: RadialWeight, dim: int) -> float:
    """``int_{B_d} w dV``."""
    return 2 * dim * weight.moment(2 * dim - 1)


def integer_besov_norm(weight: RadialWeight, dim: int, N: int, p: Polynomial) -> float:
    """``B^N_w`` norm ``(||w||_1 |p(0)|^2 + ||R^N p||^2_{L^2_a(w)})^(1/2)``,
    computed through the radial derivative rather than the diagonal
    formula."""
    if N < 0 or int(N) != N:
        raise ValueError("N must be a non-negative integer")
    if p.dim != dim:
        raise DimensionError("polynomial dimension does not match")
    p0 = p.coeff((0,) * dim)
    rest = radial_derivative(p, N) if N > 0 else p - p0
    bergman = SpaceSpec.besov(dim, 0.0, weight)
    return math.sqrt(weight_l1_norm(weight, dim) * abs(p0) ** 2 + space_norm(bergman, rest) ** 2)


def besov_shift_ratio(s: float, a: float, d: int, Dmax: int) -> tuple[float, float]:
    """Range of ``||z^alpha||^2_{B^s_{w_a}} / ||z^alpha||^2_{B^{s-a/2}_1}``
    over ``1 <= |alpha| <= Dmax``, with ``w_a = (1-|z|^2)^a``."""
    if Dmax < 1:
        raise ValueError("Dmax must be >= 1")
    weighted = SpaceSpec.besov(d, s, RadialWeight.standard(a) if a != 0 else RadialWeight.one())
    plain = SpaceSpec.besov(d, s - a / 2)
    ratios = [
        monomial_norm(weighted, alpha) / monomial_norm(plain, alpha)
        for alpha in indices_up_to(d, Dmax)
        if sum(alpha) >= 1
    ]
    return min(ratios), max(ratios)
