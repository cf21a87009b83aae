"""Brute-force cross-checks for the closed forms used elsewhere.

Nothing in this module calls the closed-form monomial norms of
:mod:`pickspace.spaces` for the quantity being checked: inner products are
integrated numerically over the ball and multiplication matrices are built
from raw polynomial products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections.abc import Sequence

import numpy as np

from .kernels import sample_ball
from .polyring import Polynomial, evaluate_many, indices_up_to, poly_mul
from .spaces import RadialWeight, SpaceSpec, inner_product, monomial_norm, sphere_factor


@dataclass(frozen=True)
class QuadratureConfig:
    n_samples: int = 100_000
    seed: int = 0
    radial_nodes: int = 200
    batches: int = 50

    def __post_init__(self):
        if self.n_samples < 1 or self.batches < 2 or self.n_samples < self.batches:
            raise ValueError("need n_samples >= batches >= 2")
        if self.radial_nodes < 1:
            raise ValueError("radial_nodes must be positive")


def mc_inner_product(
    weight: RadialWeight, p: Polynomial, q: Polynomial, cfg: QuadratureConfig = QuadratureConfig()
) -> tuple[complex, float]:
    """Monte-Carlo estimate of ``int_B p conj(q) w dV`` (``V(B) = 1``) with a
    batch-means standard error."""
    if not weight.evaluable:
        raise ValueError(f"weight kind {weight.kind!r} has no density to sample")
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    rng = np.random.default_rng(cfg.seed)
    Z = sample_ball(p.dim, cfg.n_samples, rng, radius=1.0)
    vals = evaluate_many(p, Z) * np.conj(evaluate_many(q, Z)) * weight.density(np.linalg.norm(Z, axis=1))
    batches = np.array_split(vals, cfg.batches)
    means = np.array([b.mean() for b in batches])
    var = np.var(means.real, ddof=1) + np.var(means.imag, ddof=1)
    return complex(vals.mean()), float(math.sqrt(var / cfg.batches))


def mc_sphere_factor(alpha: Sequence[int], n_samples: int = 200_000, seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo estimate of ``int_S |zeta^alpha|^2 dsigma`` with standard error."""
    d = len(alpha)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_samples, d)) + 1j * rng.standard_normal((n_samples, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    vals = np.prod(np.abs(g) ** (2 * np.array(alpha)), axis=1)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n_samples))


def radial_integral(weight: RadialWeight, k: float, nodes: int = 200) -> float:
    """``int_0^1 r^k w(r) dr`` by Gauss-Legendre after ``r = 1 - (1-t)^m``.

    For ``(1 - r^2)^a`` the exponent ``m`` is chosen so that the endpoint
    factor ``(1-r)^a dr`` becomes an integer power of ``1 - t``.
    """
    m = 2.0
    if weight.kind == "standard":
        m = max(1, math.ceil(weight.a + 1)) / (weight.a + 1)
    t, wts = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (t + 1)
    wts = 0.5 * wts
    u = 1 - t
    r = 1 - u**m
    if weight.kind == "standard":
        # (1 - r^2)^a = u^(m a) (1 + r)^a avoids cancellation near r = 1
        integrand = m * u ** (m * (weight.a + 1) - 1) * (1 + r) ** weight.a
    else:
        integrand = m * u ** (m - 1) * weight.density(r)
    return float(np.sum(wts * integrand * r**k))


def quad_monomial_norm(weight: RadialWeight, alpha: Sequence[int], radial_nodes: int = 200) -> float:
    """``||z^alpha||^2_{L^2_a(w dV)}`` from polar coordinates: exact sphere
    factor times a numerical radial integral."""
    d = len(alpha)
    n = sum(alpha)
    return 2 * d * float(sphere_factor(alpha)) * radial_integral(weight, 2 * n + 2 * d - 1, radial_nodes)


def mult_matrix_raw(space: SpaceSpec, phi: Polynomial, D: int, dst: SpaceSpec | None = None) -> np.ndarray:
    """Matrix of ``M_phi`` entry by entry from ``<phi z^a, z^b> / (||z^a|| ||z^b||)``."""
    dst = dst or space
    if phi.dim != space.dim or dst.dim != space.dim:
        raise ValueError("dimension mismatch")
    cols = indices_up_to(space.dim, D)
    rows = indices_up_to(space.dim, D + max(phi.degree, 0))
    M = np.zeros((len(rows), len(cols)), dtype=complex)
    for j, a in enumerate(cols):
        prod = poly_mul(phi, Polynomial.monomial(a))
        na = math.sqrt(monomial_norm(space, a))
        for i, b in enumerate(rows):
            if prod.coeff(b):
                ip = inner_product(dst, prod, Polynomial.monomial(b))
                M[i, j] = ip / (na * math.sqrt(monomial_norm(dst, b)))
    return M


@dataclass
class OracleRecord:
    check: str
    label: str
    estimate: float
    reference: float
    stderr: float | None = None

    @property
    def rel_error(self) -> float:
        return abs(self.estimate - self.reference) / abs(self.reference) if self.reference else abs(self.estimate)

    @property
    def z_score(self) -> float | None:
        if self.stderr is None:
            return None
        return abs(self.estimate - self.reference) / self.stderr if self.stderr > 0 else 0.0


def norm_cross_validation(weights: Sequence[RadialWeight], dims: Sequence[int], max_degree: int, radial_nodes: int = 200):
    """Quadrature vs closed form for every monomial of degree ``<= max_degree``."""
    out = []
    for w in weights:
        for d in dims:
            space = SpaceSpec.besov(d, 0.0, w)
            for alpha in indices_up_to(d, max_degree):
                out.append(
                    OracleRecord(
                        "quad_monomial_norm",
                        f"{space.label()} alpha={alpha}",
                        quad_monomial_norm(w, alpha, radial_nodes),
                        monomial_norm(space, alpha),
                    )
                )
    return out


def orthogonality_checks(dim: int, max_degree: int, cfg: QuadratureConfig, weight: RadialWeight = RadialWeight.one()):
    """Monte-Carlo inner products of distinct monomials (reference 0) and of
    each monomial with itself (reference: closed form)."""
    space = SpaceSpec.besov(dim, 0.0, weight)
    idx = indices_up_to(dim, max_degree)
    out = []
    for i, a in enumerate(idx):
        for b in idx[i:]:
            est, se = mc_inner_product(weight, Polynomial.monomial(a), Polynomial.monomial(b), cfg)
            ref = monomial_norm(space, a) if a == b else 0.0
            out.append(OracleRecord("mc_inner_product", f"<z^{a}, z^{b}>", abs(est) if a != b else est.real, ref, se))
    return out
