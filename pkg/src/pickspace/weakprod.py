"""Weak products, quotient representations and Hankel forms.

The weak-product norm is an infimum over all factorizations, so an explicit
factorization only ever gives an upper bound.  Hankel forms give lower
bounds through the duality ``|<h, b>| <= ||h||_wp ||H_b||``, and
truncated Hankel matrices in turn give lower bounds for ``||H_b||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from .kernels import PointSet
from .multops import TruncationBasis, compressed_mult_matrix, mult_matrix, op_norm
from .polyring import Polynomial, evaluate_many, invert_one_minus
from .spaces import SpaceSpec, inner_product, monomial_norm, space_norm

DEFAULT_RS = (0.5, 0.9, 0.99)


@dataclass(frozen=True)
class Factorization:
    """A finite representation ``h = sum_i f_i g_i``."""

    pairs: tuple[tuple[Polynomial, Polynomial], ...]

    def __post_init__(self):
        pairs = tuple((f, g) for f, g in self.pairs)
        if not pairs:
            raise ValueError("a factorization needs at least one pair")
        if len({p.dim for pair in pairs for p in pair}) != 1:
            raise ValueError("all factors must share one dimension")
        object.__setattr__(self, "pairs", pairs)

    @property
    def dim(self) -> int:
        return self.pairs[0][0].dim

    def product(self) -> Polynomial:
        h = Polynomial.zero(self.dim)
        for f, g in self.pairs:
            h = h + f * g
        return h


def wp_norm_upper(space: SpaceSpec, F: Factorization) -> float:
    """``sum_i ||f_i|| ||g_i||``, an upper bound for ``||sum f_i g_i||`` in
    the weak product."""
    return sum(space_norm(space, f) * space_norm(space, g) for f, g in F.pairs)


def rescale_to_equal_norm(f: Polynomial, g: Polynomial, space: SpaceSpec) -> tuple[Polynomial, Polynomial]:
    nf, ng = space_norm(space, f), space_norm(space, g)
    if nf == 0 or ng == 0:
        raise ValueError("cannot balance a zero factor")
    t = math.sqrt(ng / nf)
    return f.scale(t), g.scale(1 / t)


def square_split(f: Polynomial, g: Polynomial, space: SpaceSpec, tol: float = 1e-10) -> Factorization:
    """Write ``fg = A^2 - B^2`` with ``A = (f+g)/2`` and ``B = (f-g)/2``.

    Needs ``||f|| = ||g||``; then the parallelogram law gives
    ``||f|| ||g|| = ||A||^2 + ||B||^2``.  The result is returned as the
    factorization ``[(A, A), (B, -B)]``.
    """
    nf, ng = space_norm(space, f), space_norm(space, g)
    if abs(nf - ng) > tol * max(1.0, nf, ng):
        raise ValueError(f"factors are not balanced: ||f|| = {nf}, ||g|| = {ng}")
    A = (f + g).scale(0.5)
    B = (f - g).scale(0.5)
    return Factorization(((A, A), (B, -B)))


def balanced_square_factorization(space: SpaceSpec, F: Factorization) -> Factorization:
    """Rewrite every pair as a difference of squares (after balancing)."""
    out = []
    for f, g in F.pairs:
        if f.is_zero() or g.is_zero():
            continue
        fb, gb = rescale_to_equal_norm(f, g, space)
        out.extend(square_split(fb, gb, space).pairs)
    return Factorization(tuple(out))


# -- quotient representations h = phi / (1 - psi)^2 ------------------------------


@dataclass(frozen=True)
class SmirnovWitness:
    h: Polynomial
    phi: Polynomial
    psi: Polynomial
    rs: tuple[float, ...] = DEFAULT_RS

    def __post_init__(self):
        if not (self.h.dim == self.phi.dim == self.psi.dim):
            raise ValueError("dimension mismatch")
        if self.psi.coeff((0,) * self.psi.dim) != 0:
            raise ValueError("psi must vanish at the origin")
        if any(not 0 < r < 1 for r in self.rs):
            raise ValueError("every r must lie in (0, 1)")


@dataclass
class SmirnovReport:
    residual: float
    pointwise_residual: float
    psi_mult_lower: float
    frac_bounds: dict[float, tuple[float, float]] = field(default_factory=dict)

    def ok(self, tol: float = 1e-9) -> bool:
        return (
            self.psi_mult_lower <= 1 + tol
            and all(a <= 1 + tol and b <= 2 + tol for a, b in self.frac_bounds.values())
        )


def smirnov_verify(w: SmirnovWitness, space: SpaceSpec, D: int, grid: PointSet | None = None) -> SmirnovReport:
    """Check ``(1 - psi)^2 h = phi`` through degree ``D`` and the multiplier
    bounds used to pass from ``phi`` back to ``h``.

    For each ``r`` the compressions to degree ``<= D`` of
    ``(1-r) psi / (1 - r psi)`` and ``(1 - psi) / (1 - r psi)`` are formed
    from their Taylor polynomials; their norms are lower bounds for the
    multiplier norms, which are at most 1 and 2 when ``psi`` is a
    contractive multiplier vanishing at 0.
    """
    one = Polynomial.constant(space.dim, 1)
    lhs = ((one - w.psi) ** 2 * w.h).truncate(D)
    residual = space_norm(space, lhs - w.phi.truncate(D))
    pointwise = 0.0
    if grid is not None:
        Z = grid.points
        vals = (1 - evaluate_many(w.psi, Z)) ** 2 * evaluate_many(w.h, Z) - evaluate_many(w.phi, Z)
        pointwise = float(np.max(np.abs(vals)))
    psi_lower = op_norm(mult_matrix(space, space, w.psi, D))
    bounds = {}
    for r in w.rs:
        inv = invert_one_minus(w.psi, r, D)
        small = (w.psi.scale(1 - r) * inv).truncate(D)
        ratio = ((one - w.psi) * inv).truncate(D)
        bounds[r] = (
            op_norm(compressed_mult_matrix(space, small, D)),
            op_norm(compressed_mult_matrix(space, ratio, D)),
        )
    return SmirnovReport(residual, pointwise, psi_lower, bounds)


# -- Hankel forms -----------------------------------------------------------------


@dataclass(frozen=True)
class HankelForm:
    """``B(f, g) = <f g, b>`` on polynomials of degree ``<= D``, as the
    complex symmetric matrix ``B[a, b] = <e_a e_b, b>``."""

    space: SpaceSpec
    symbol: Polynomial
    D: int
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def basis(self) -> TruncationBasis:
        return TruncationBasis(self.space, self.D)

    def __call__(self, f: Polynomial, g: Polynomial) -> complex:
        bas = self.basis
        return complex(bas.coordinates(f) @ self.matrix @ bas.coordinates(g))


def hankel_build(space: SpaceSpec, b: Polynomial, D: int) -> HankelForm:
    if b.dim != space.dim:
        raise ValueError("symbol dimension does not match the space")
    basis = TruncationBasis(space, D)
    n = len(basis)
    B = np.zeros((n, n), dtype=complex)
    for i, a in enumerate(basis.indices):
        for j in range(i, n):
            gamma = tuple(x + y for x, y in zip(a, basis.indices[j]))
            c = b.coeff(gamma)
            if c:
                B[i, j] = B[j, i] = c.conjugate() * monomial_norm(space, gamma) / (basis.norms[i] * basis.norms[j])
    return HankelForm(space, b, D, B)


def hankel_intertwine_check(H: HankelForm, phi: Polynomial, D_inner: int) -> float:
    """``max |B(phi e_a, e_b) - B(e_a, phi e_b)|`` over ``|a|, |b| <= D_inner``."""
    if D_inner + max(phi.degree, 0) > H.D:
        raise ValueError(f"degree budget exceeded: {D_inner} + deg(phi) > {H.D}")
    basis = H.basis
    inner = TruncationBasis(H.space, D_inner)
    # columns: phi * e_a for |a| <= D_inner, expressed in the form's basis
    P = np.zeros((len(basis), len(inner)), dtype=complex)
    E = np.zeros((len(basis), len(inner)), dtype=complex)
    for j, a in enumerate(inner.indices):
        e = Polynomial.monomial(a, 1.0 / inner.norms[j])
        P[:, j] = basis.coordinates(phi * e)
        E[:, j] = basis.coordinates(e)
    left = P.T @ H.matrix @ E
    right = E.T @ H.matrix @ P
    return float(np.max(np.abs(left - right), initial=0.0))


def hankel_norm_lower(H: HankelForm) -> float:
    return op_norm(H.matrix)


def duality_check(space: SpaceSpec, F: Factorization, b: Polynomial, D: int) -> float:
    """``wp_norm_upper(F) * ||B_D|| - |<sum f_i g_i, b>|``.

    Non-negative for a single pair of degree ``<= D``: the truncated form
    pairs such ``f, g`` exactly.
    """
    if any(max(f.degree, g.degree) > D for f, g in F.pairs):
        raise ValueError(f"degree budget exceeded: factors must have degree <= {D}")
    H = hankel_build(space, b, D)
    pairing = abs(inner_product(space, F.product(), b))
    return wp_norm_upper(space, F) * hankel_norm_lower(H) - pairing


def best_upper(space: SpaceSpec, candidates: Sequence[Factorization]) -> float:
    """Smallest :func:`wp_norm_upper` over several factorizations of the same
    function."""
    first = candidates[0].product()
    for c in candidates[1:]:
        if space_norm(space, c.product() - first) > 1e-12 * max(1.0, space_norm(space, first)):
            raise ValueError("candidates factor different functions")
    return min(wp_norm_upper(space, c) for c in candidates)
