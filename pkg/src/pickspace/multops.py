"""Finite sections of multiplication, column and row operators.

All norms computed here are norms of compressions of infinite operators to
polynomials of bounded degree.  They are lower bounds for the true operator
norms and increase with the truncation degree.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from collections.abc import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .kernels import KernelSpec, PointSet, kernel_matrix
from .polyring import MultiIndex, Polynomial, evaluate_many, indices_of_degree, indices_up_to, random_polynomial
from .spaces import SpaceSpec, monomial_norm, space_norm


@dataclass(frozen=True)
class TruncationBasis:
    """Orthonormal basis ``e_alpha = z^alpha / ||z^alpha||`` for ``|alpha| <= D``."""

    space: SpaceSpec
    D: int
    indices: tuple[MultiIndex, ...] = field(init=False, repr=False)
    norms: np.ndarray = field(init=False, repr=False, compare=False)
    position: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = tuple(indices_up_to(self.space.dim, self.D))
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "norms", np.sqrt([monomial_norm(self.space, a) for a in idx]))
        object.__setattr__(self, "position", {a: i for i, a in enumerate(idx)})

    def __len__(self) -> int:
        return len(self.indices)

    def degrees(self) -> np.ndarray:
        return np.array([sum(a) for a in self.indices])

    def coordinates(self, p: Polynomial) -> np.ndarray:
        """Coefficients of ``p`` in the orthonormal basis; ``p`` must have
        degree ``<= D``."""
        v = np.zeros(len(self), dtype=complex)
        for a, c in p.items():
            i = self.position.get(a)
            if i is None:
                raise ValueError(f"term z^{a} lies outside the truncation degree {self.D}")
            v[i] = c * self.norms[i]
        return v

    def polynomial(self, v: np.ndarray) -> Polynomial:
        return Polynomial(self.space.dim, {a: v[i] / self.norms[i] for i, a in enumerate(self.indices) if v[i] != 0})


@dataclass(frozen=True)
class MultiplierTuple:
    """A finite family ``(phi_1, ..., phi_m)`` acting as a column or row
    operator."""

    entries: tuple[Polynomial, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("a multiplier tuple needs at least one entry")
        if len({p.dim for p in entries}) != 1:
            raise ValueError("all entries must share one dimension")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries[0].dim

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.entries)

    def scale(self, c: complex) -> MultiplierTuple:
        return MultiplierTuple(tuple(p.scale(c) for p in self.entries))


@lru_cache(maxsize=256)
def _basis(space: SpaceSpec, D: int) -> TruncationBasis:
    return TruncationBasis(space, D)


def mult_sparse(src: SpaceSpec, dst: SpaceSpec, phi: Polynomial, D: int, D_out: int) -> sp.csr_matrix:
    """Matrix of ``f -> P_{D_out}(phi f)`` from degree ``<= D`` in ``src`` to
    degree ``<= D_out`` in ``dst``, in orthonormal bases."""
    if src.dim != dst.dim or phi.dim != src.dim:
        raise ValueError("dimension mismatch")
    bs = _basis(src, D)
    bd = _basis(dst, D_out)
    A = np.array(bs.indices)
    rows, cols, vals = [], [], []
    for gamma, c in phi.items():
        target = A + np.array(gamma)
        keep = np.flatnonzero(target.sum(axis=1) <= D_out)
        r = np.fromiter((bd.position[tuple(t)] for t in target[keep]), dtype=np.int64, count=len(keep))
        rows.append(r)
        cols.append(keep)
        vals.append(c * bd.norms[r] / bs.norms[keep])
    if rows:
        rows, cols, vals = np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    return sp.csr_matrix((vals, (rows, cols)), shape=(len(bd), len(bs)), dtype=complex)


def mult_matrix(src: SpaceSpec, dst: SpaceSpec, phi: Polynomial, D: int) -> np.ndarray:
    """Exact matrix of ``M_phi`` restricted to polynomials of degree ``<= D``;
    the codomain holds degree ``<= D + deg(phi)`` so nothing is cut off."""
    if D < 0:
        raise ValueError("D must be >= 0")
    return mult_sparse(src, dst, phi, D, D + max(phi.degree, 0)).toarray()


def compressed_mult_matrix(space: SpaceSpec, phi: Polynomial, D: int) -> np.ndarray:
    """``P_D M_phi P_D``.  Only the Taylor coefficients of ``phi`` up to
    degree ``D`` enter, so a Taylor polynomial of a non-polynomial
    multiplier gives its exact compression."""
    return mult_sparse(space, space, phi.truncate(D), D, D).toarray()


def op_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def _lambda_max(G: sp.spmatrix) -> float:
    G = G.tocsr()
    if G.shape[0] == 0:
        return 0.0
    diag = G.diagonal()
    if (G - sp.diags(diag)).count_nonzero() == 0:
        return max(float(np.max(diag.real)), 0.0)
    dense = G.toarray()
    return max(float(np.linalg.eigvalsh((dense + dense.conj().T) / 2)[-1]), 0.0)


def _blocks(src, dst, Phi: MultiplierTuple, D: int) -> list[sp.csr_matrix]:
    D_out = D + max(Phi.degree, 0)
    return [mult_sparse(src, dst, p, D, D_out) for p in Phi]


def column_norm(src: SpaceSpec, dst: SpaceSpec, Phi: MultiplierTuple, D: int) -> float:
    """Norm of ``h -> (phi_i h)_i`` on polynomials of degree ``<= D``."""
    blocks = _blocks(src, dst, Phi, D)
    G = blocks[0].conj().T @ blocks[0]
    for M in blocks[1:]:
        G = G + M.conj().T @ M
    return math.sqrt(_lambda_max(G))


def row_norm(src: SpaceSpec, dst: SpaceSpec, Phi: MultiplierTuple, D: int) -> float:
    """Norm of ``(h_i) -> sum_i phi_i h_i`` on tuples of polynomials of
    degree ``<= D``."""
    blocks = _blocks(src, dst, Phi, D)
    G = blocks[0] @ blocks[0].conj().T
    for M in blocks[1:]:
        G = G + M @ M.conj().T
    return math.sqrt(_lambda_max(G))


def pointwise_l2_sup(Phi: MultiplierTuple, grid: PointSet) -> float:
    """``max_z (sum_i |phi_i(z)|^2)^(1/2)`` over the grid."""
    vals = np.array([evaluate_many(p, grid.points) for p in Phi])
    return float(np.sqrt(np.max(np.sum(np.abs(vals) ** 2, axis=0))))


def kernel_ratio_bound(k_src: KernelSpec, k_dst: KernelSpec, Phi: MultiplierTuple, grid: PointSet) -> float:
    """``max_z sum_i |phi_i(z)|^2 ||k_src_z||^2 / ||k_dst_z||^2``; at most 1
    when the column operator src -> dst is contractive."""
    vals = np.array([evaluate_many(p, grid.points) for p in Phi])
    l2 = np.sum(np.abs(vals) ** 2, axis=0)
    ks = np.real(np.diag(kernel_matrix(k_src, grid.points, grid.points)))
    kd = np.real(np.diag(kernel_matrix(k_dst, grid.points, grid.points)))
    return float(np.max(l2 * ks / kd))


# -- a bounded row operator with unbounded column on H^2_d ---------------------


def counterexample_tuple(d: int, n_max: int) -> MultiplierTuple:
    """``phi_mu = z_mu / l(mu)`` for words ``mu`` of length ``<= n_max``.

    Words with the same multi-index ``alpha`` give the same function, and
    ``m`` copies of ``psi`` have the same row and column norms as the single
    entry ``sqrt(m) psi``; so one entry ``sqrt(|alpha|!/alpha!) z^alpha / n``
    is kept per ``alpha``.
    """
    if d < 2:
        raise ValueError("the construction requires d >= 2")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    entries = []
    for n in range(1, n_max + 1):
        for alpha in indices_of_degree(d, n):
            mult = math.factorial(n) // math.prod(math.factorial(a) for a in alpha)
            entries.append(Polynomial.monomial(alpha, math.sqrt(mult) / n))
    return MultiplierTuple(tuple(entries))


def column_sq_lower(d: int, n_max: int) -> float:
    """``sum_{n<=n_max} C(n+d-1, d-1) / n^2 = ||Phi^C 1||^2``."""
    return sum(math.comb(n + d - 1, d - 1) / n**2 for n in range(1, n_max + 1))


def row_sq_bound(n_max: int) -> float:
    return sum(1.0 / n**2 for n in range(1, n_max + 1))


@dataclass
class CounterexampleReport:
    d: int
    n_max: int
    D: int
    column_sq_lower: float
    column_sq_from_tuple: float
    row_upper_truncated: float
    row_sq_bound: float

    @property
    def row_ok(self) -> bool:
        return self.row_upper_truncated**2 <= self.row_sq_bound + 1e-8


def counterexample_report(d: int, n_max: int, D: int) -> CounterexampleReport:
    Phi = counterexample_tuple(d, n_max)
    da = SpaceSpec.drury_arveson(d)
    return CounterexampleReport(
        d=d,
        n_max=n_max,
        D=D,
        column_sq_lower=column_sq_lower(d, n_max),
        column_sq_from_tuple=sum(space_norm(da, p) ** 2 for p in Phi),
        row_upper_truncated=row_norm(da, da, Phi, D),
        row_sq_bound=row_sq_bound(n_max),
    )


def counterexample_sweep(d: int, n_max: int, D: int) -> Iterator[tuple[int, float, float]]:
    """Rows ``(n, column_sq_lower(n), row norm of the length-<=n subfamily)``,
    all row norms taken at truncation ``D`` with a common codomain."""
    Phi = counterexample_tuple(d, n_max)
    da = SpaceSpec.drury_arveson(d)
    D_out = D + n_max
    G = sp.csr_matrix((len(_basis(da, D_out)),) * 2, dtype=complex)
    by_degree: dict[int, list[Polynomial]] = {}
    for p in Phi:
        by_degree.setdefault(p.degree, []).append(p)
    for n in range(1, n_max + 1):
        for p in by_degree[n]:
            M = mult_sparse(da, da, p, D, D_out)
            G = G + M @ M.conj().T
        yield n, column_sq_lower(d, n), math.sqrt(_lambda_max(G))


def d_contraction_check(fs: Sequence[Polynomial]) -> float:
    """``sum_k ||f_k||^2 - ||sum_k z_k f_k||^2`` in ``H^2_d``; never negative."""
    d = len(fs)
    if d < 1 or any(f.dim != d for f in fs):
        raise ValueError("need exactly d polynomials in d variables")
    da = SpaceSpec.drury_arveson(d)
    total = Polynomial.zero(d)
    for k, f in enumerate(fs):
        total = total + Polynomial.coordinate(d, k) * f
    return sum(space_norm(da, f) ** 2 for f in fs) - space_norm(da, total) ** 2


# -- Leibnitz estimates ---------------------------------------------------------


def _radial_power(p: Polynomial, j: int) -> Polynomial:
    # order 0 is the identity here, unlike radial_derivative(p, 0)
    if j == 0:
        return p
    return Polynomial(p.dim, {a: c * sum(a) ** j for a, c in p.items() if sum(a) >= 1})


def _leibnitz_levels(src: SpaceSpec, dst: SpaceSpec, j: int, k: int) -> tuple[int, SpaceSpec]:
    if src.kind != "besov" or dst.kind != "besov":
        raise ValueError("Leibnitz estimates need weighted Besov spaces")
    N = src.s
    if N != int(N) or N < 0 or dst.s != N:
        raise ValueError("src and dst must both be B^N spaces with the same integer N")
    N = int(N)
    if j < 0 or k < 0 or j + k > N:
        raise ValueError(f"need j, k >= 0 and j + k <= N = {N}")
    if src.dim != dst.dim:
        raise ValueError("dimension mismatch")
    return N, dst.with_s(N - (j + k))


def leibnitz_ratio(Phi: MultiplierTuple, j: int, k: int, h: Polynomial, src: SpaceSpec, dst: SpaceSpec) -> float:
    """``sum_i ||(R^j phi_i) R^k h||^2_{B^(N-j-k)} / ||h||^2_{B^N}``."""
    _, target = _leibnitz_levels(src, dst, j, k)
    Rkh = _radial_power(h, k)
    num = sum(space_norm(target, _radial_power(p, j) * Rkh) ** 2 for p in Phi)
    return num / space_norm(src, h) ** 2


def leibnitz_check(
    Phi: MultiplierTuple, j: int, k: int, samples: Iterable[Polynomial], src: SpaceSpec, dst: SpaceSpec
) -> float:
    """Worst ratio over sample functions: an empirical Leibnitz constant."""
    _leibnitz_levels(src, dst, j, k)
    ratios = [leibnitz_ratio(Phi, j, k, h, src, dst) for h in samples if not h.is_zero()]
    if not ratios:
        raise ValueError("need at least one nonzero sample")
    return max(ratios)


def leibnitz_constant(Phi: MultiplierTuple, j: int, k: int, src: SpaceSpec, dst: SpaceSpec, D: int) -> float:
    """Supremum of :func:`leibnitz_ratio` over all ``h`` of degree ``<= D``."""
    _, target = _leibnitz_levels(src, dst, j, k)
    basis = _basis(src, D)
    Rk = sp.diags(np.array([float(n) ** k if (k == 0 or n > 0) else 0.0 for n in basis.degrees()]))
    D_out = D + max(Phi.degree, 0)
    G = sp.csr_matrix((len(basis),) * 2, dtype=complex)
    for p in Phi:
        M = mult_sparse(src, target, _radial_power(p, j), D, D_out) @ Rk
        G = G + M.conj().T @ M
    return _lambda_max(G)


def random_tuple(dim: int, m: int, degree: int, rng: np.random.Generator) -> MultiplierTuple:
    return MultiplierTuple(tuple(random_polynomial(dim, degree, rng) for _ in range(m)))


@dataclass
class RowColumnReport:
    empirical_c: float
    ratios: list[float]
    D: int


def row_from_column_report(src: SpaceSpec, dst: SpaceSpec, tuples: Iterable[MultiplierTuple], D: int) -> RowColumnReport:
    """Largest ``row_norm / column_norm`` over the sampled tuples at
    truncation ``D``."""
    ratios = []
    for Phi in tuples:
        col = column_norm(src, dst, Phi, D)
        if col == 0:
            continue
        ratios.append(row_norm(src, dst, Phi, D) / col)
    if not ratios:
        raise ValueError("all sampled tuples vanish")
    return RowColumnReport(max(ratios), ratios, D)
