"""Reproducing kernels on the unit ball, Gram matrices and positivity
certificates.

A negative eigenvalue of a Gram matrix on finitely many points is a proof
that a kernel is not positive definite; non-negative eigenvalues on sampled
point sets are only evidence.  Every certificate here is one-sided in that
sense.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from collections.abc import Mapping, Sequence

import numpy as np

from .polyring import Polynomial, evaluate_many, indices_up_to
from .spaces import SpaceSpec, monomial_norm

KERNEL_KINDS = ("drury_arveson", "szego", "dirichlet", "power", "from_space")

# psd tolerance relative to the matrix norm
PSD_RTOL = 1e-10
HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    dim: int = 1
    beta: float = 1.0
    space: SpaceSpec | None = None
    D: int = 0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}")
        if self.kind in ("szego", "dirichlet") and self.dim != 1:
            raise ValueError(f"the {self.kind} kernel lives on the disc (dim = 1)")
        if self.kind == "power" and self.beta <= 0:
            raise ValueError("power kernel needs beta > 0")
        if self.kind == "from_space":
            if self.space is None:
                raise ValueError("from_space kernel needs a space")
            if self.space.dim != self.dim:
                raise ValueError("kernel and space dimensions differ")
            if self.D < 0:
                raise ValueError("truncation degree must be >= 0")

    @classmethod
    def drury_arveson(cls, d: int) -> KernelSpec:
        return cls("drury_arveson", d)

    @classmethod
    def szego(cls) -> KernelSpec:
        return cls("szego", 1)

    @classmethod
    def dirichlet(cls) -> KernelSpec:
        return cls("dirichlet", 1)

    @classmethod
    def power(cls, d: int, beta: float) -> KernelSpec:
        """``(1 - <z, w>)^(-beta)``."""
        return cls("power", d, beta=float(beta))

    @classmethod
    def besov_power(cls, d: int, s: float) -> KernelSpec:
        """Kernel ``(1 - <z,w>)^-(d+1-2s)`` of ``B^s_1`` (up to equivalent
        norms), valid for ``s < (d+1)/2``."""
        if not s < (d + 1) / 2:
            raise ValueError(f"need s < (d+1)/2 = {(d + 1) / 2}, got {s}")
        return cls.power(d, d + 1 - 2 * s)

    @classmethod
    def from_space(cls, space: SpaceSpec, D: int) -> KernelSpec:
        return cls("from_space", space.dim, space=space, D=D)

    def label(self) -> str:
        if self.kind == "power":
            return f"power(d={self.dim},beta={self.beta:g})"
        if self.kind == "from_space":
            return f"from_space({self.space.label()},D={self.D})"
        if self.kind == "drury_arveson":
            return f"drury_arveson(d={self.dim})"
        return self.kind

    def to_config(self) -> dict:
        cfg: dict = {"kind": self.kind, "dim": self.dim}
        if self.kind == "power":
            cfg["beta"] = self.beta
        if self.kind == "from_space":
            cfg["space"] = self.space.to_config()
            cfg["D"] = self.D
        return cfg

    @classmethod
    def from_config(cls, cfg: Mapping) -> KernelSpec:
        kind = cfg["kind"]
        if kind == "from_space":
            space = SpaceSpec.from_config(cfg["space"])
            return cls.from_space(space, int(cfg["D"]))
        return cls(kind, int(cfg.get("dim", 1)), beta=float(cfg.get("beta", 1.0)))

    @classmethod
    def parse(cls, text: str) -> KernelSpec:
        """JSON config or shorthand: ``da:D``, ``szego``, ``dirichlet``,
        ``power:D:beta``, ``bergman:D`` (``beta = D + 1``)."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_config(json.loads(text))
        parts = text.split(":")
        head = parts[0].lower()
        try:
            if head in ("da", "drury_arveson") and len(parts) == 2:
                return cls.drury_arveson(int(parts[1]))
            if head == "szego" and len(parts) == 1:
                return cls.szego()
            if head == "dirichlet" and len(parts) == 1:
                return cls.dirichlet()
            if head == "power" and len(parts) == 3:
                return cls.power(int(parts[1]), float(parts[2]))
            if head == "bergman" and len(parts) == 2:
                d = int(parts[1])
                return cls.power(d, d + 1)
        except ValueError as exc:
            raise ValueError(f"bad kernel shorthand {text!r}: {exc}") from exc
        raise ValueError(f"bad kernel shorthand {text!r}")


@dataclass
class PointSet:
    """Finitely many distinct points of the open unit ball."""

    points: np.ndarray
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        if pts.size and np.any(np.linalg.norm(pts, axis=1) >= 1):
            raise ValueError("all points must lie in the open unit ball")
        if len(pts) > 1:
            diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
            np.fill_diagonal(diff, np.inf)
            if np.min(diff) == 0:
                raise ValueError("points must be pairwise distinct")
        self.points = pts

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def to_json(self) -> list:
        return [[[z.real, z.imag] for z in p] for p in self.points]

    @classmethod
    def from_json(cls, data: Sequence) -> PointSet:
        return cls(np.array([[complex(re, im) for re, im in p] for p in data]))


def sample_ball(d: int, n: int, rng: np.random.Generator, radius: float = 0.95) -> np.ndarray:
    """``n`` points uniform w.r.t. volume in the ball of the given radius in C^d."""
    g = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(n) ** (1.0 / (2 * d))
    return g * r[:, None]


def random_points(d: int, n: int, seed: int, radius: float = 0.95) -> PointSet:
    rng = np.random.default_rng(seed)
    return PointSet(sample_ball(d, n, rng, radius), seed=seed, meta={"radius": radius})


def _as_points(z, d: int) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(z, dtype=complex))
    if Z.shape[1] != d:
        raise ValueError(f"points must have dimension {d}")
    if np.any(np.linalg.norm(Z, axis=1) >= 1):
        raise ValueError("points must lie in the open unit ball")
    return Z


def _dirichlet_fn(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-3
    xs = x[small]
    # removable singularity at 0: sum_n x^n / (n+1)
    series = np.zeros_like(xs)
    for n in range(10, -1, -1):
        series = series * xs + 1.0 / (n + 1)
    out[small] = series
    xl = x[~small]
    out[~small] = -np.log1p(-xl) / xl
    return out


def _feature_matrix(space: SpaceSpec, D: int, Z: np.ndarray) -> np.ndarray:
    idx = indices_up_to(space.dim, D)
    scale = np.array([1.0 / math.sqrt(monomial_norm(space, a)) for a in idx])
    A = np.array(idx)
    return np.prod(Z[:, None, :] ** A[None, :, :], axis=2) * scale[None, :]


def kernel_matrix(k: KernelSpec, Z, W) -> np.ndarray:
    """Matrix ``[k(z_i, w_j)]``."""
    Z = _as_points(Z, k.dim)
    W = _as_points(W, k.dim)
    if k.kind == "from_space":
        return _feature_matrix(k.space, k.D, Z) @ _feature_matrix(k.space, k.D, W).conj().T
    X = Z @ W.conj().T
    if k.kind in ("drury_arveson", "szego"):
        return 1.0 / (1.0 - X)
    if k.kind == "power":
        return (1.0 - X) ** (-k.beta)
    return _dirichlet_fn(X)


def kernel_eval(k: KernelSpec, z, w) -> complex:
    return complex(kernel_matrix(k, [z], [w])[0, 0])


def gram(k: KernelSpec, pts: PointSet) -> np.ndarray:
    return kernel_matrix(k, pts.points, pts.points)


def is_hermitian(M: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    return bool(np.max(np.abs(M - M.conj().T), initial=0.0) <= rtol * scale)


def min_eigenvalue(M: np.ndarray) -> float:
    M = np.asarray(M)
    if not is_hermitian(M):
        raise ValueError("matrix is not Hermitian")
    if M.size == 0:
        return math.inf
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])


def is_psd(M: np.ndarray, rtol: float = PSD_RTOL) -> bool:
    scale = max(1.0, float(np.linalg.norm(M, 2))) if np.size(M) else 1.0
    return min_eigenvalue(M) >= -rtol * scale


def complete_pick_gram(k: KernelSpec, pts: PointSet, z0=None) -> np.ndarray:
    """Gram matrix of ``u = 1 - 1/k~`` where ``k~`` is ``k`` normalized at ``z0``.

    ``k`` has the complete Pick property exactly when these matrices are psd
    for every finite point set.
    """
    if z0 is None:
        z0 = np.zeros(k.dim)
    z0 = _as_points(z0, k.dim)
    K = gram(k, pts)
    a = kernel_matrix(k, pts.points, z0)[:, 0]
    k00 = kernel_matrix(k, z0, z0)[0, 0]
    if np.any(a == 0) or k00 == 0:
        raise ValueError("kernel vanishes against the normalization point")
    Kn = K * k00 / np.outer(a, a.conj())
    if np.any(Kn == 0):
        raise ValueError("normalized kernel vanishes; 1/k is undefined")
    return 1.0 - 1.0 / Kn


def schur_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ValueError(f"order mismatch: {A.shape} vs {B.shape}")
    return A * B


def contractive_mult_gram(k_src: KernelSpec, k_dst: KernelSpec, phi: Polynomial, pts: PointSet) -> np.ndarray:
    """``[k_dst(z_i,z_j) - phi(z_i) conj(phi(z_j)) k_src(z_i,z_j)]``; psd on
    all finite sets iff ``phi`` is a contractive multiplier src -> dst."""
    if phi.dim != pts.dim:
        raise ValueError("polynomial and points differ in dimension")
    v = evaluate_many(phi, pts.points)
    return gram(k_dst, pts) - np.outer(v, v.conj()) * gram(k_src, pts)


def max_contractive_scale(k_src: KernelSpec, k_dst: KernelSpec, phi: Polynomial, pts: PointSet) -> float:
    """Largest ``c`` with ``contractive_mult_gram(c * phi)`` psd on ``pts``
    (``inf`` when ``phi`` vanishes on ``pts``)."""
    import scipy.linalg

    v = evaluate_many(phi, pts.points)
    P = np.outer(v, v.conj()) * gram(k_src, pts)
    Kd = gram(k_dst, pts)
    lam = scipy.linalg.eigh(P, Kd, eigvals_only=True)[-1]
    return math.inf if lam <= 0 else 1.0 / math.sqrt(lam)


def inclusion_descent_check(phi: Polynomial, d: int, s: float, t: float, pts: PointSet) -> tuple[float, float]:
    """Minimum eigenvalues of the contractive-multiplier Gram for
    ``B^s_1 -> B^t_1`` and for ``B^(s-1)_1 -> B^(t-1)_1`` on ``pts``.

    The descended kernels are the level kernels times ``(1-<z,w>)^-2``, so by
    the Schur product theorem psd at the level forces psd after descent.
    """
    bound = (d + 1) / 2
    if not (s < bound and t < bound):
        raise ValueError(f"need s, t < (d+1)/2 = {bound}")
    if phi.dim != d or pts.dim != d:
        raise ValueError("dimension mismatch")
    level = contractive_mult_gram(KernelSpec.besov_power(d, s), KernelSpec.besov_power(d, t), phi, pts)
    down = contractive_mult_gram(KernelSpec.besov_power(d, s - 1), KernelSpec.besov_power(d, t - 1), phi, pts)
    return min_eigenvalue(level), min_eigenvalue(down)


@dataclass
class PickSearchResult:
    min_eig: float
    witness: PointSet | None
    trials: int


def pick_refutation_search(
    k: KernelSpec,
    budget: int,
    seed: int,
    *,
    sizes: Sequence[int] = (2, 3, 4, 5),
    radius: float = 0.95,
    threshold: float = -1e-6,
    z0=None,
) -> PickSearchResult:
    """Random search for a point set on which ``complete_pick_gram`` has an
    eigenvalue below ``threshold``.  Stops at the first hit."""
    rng = np.random.default_rng(seed)
    best = math.inf
    best_pts = None
    for trial in range(1, budget + 1):
        m = sizes[(trial - 1) % len(sizes)]
        pts = PointSet(sample_ball(k.dim, m, rng, radius))
        lam = min_eigenvalue(complete_pick_gram(k, pts, z0))
        if lam < best:
            best, best_pts = lam, pts
        if best < threshold:
            return PickSearchResult(best, best_pts, trial)
    return PickSearchResult(best, best_pts, budget)
