"""Sparse multivariate polynomials on the unit ball of C^d.

A :class:`Polynomial` is an immutable map from exponent tuples to complex
coefficients. Zero coefficients are never stored, so two polynomials are
equal exactly when their term maps are equal.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import Union

import numpy as np

MultiIndex = tuple[int, ...]
Number = Union[int, float, complex]


class DimensionError(ValueError):
    """Raised when operands live in different ambient dimensions."""


def degree_of(alpha: Sequence[int]) -> int:
    return sum(alpha)


def grlex_key(alpha: MultiIndex) -> tuple:
    """Sort key for graded-lexicographic order (lower degree first, then
    larger leading exponents first, e.g. ``z1^2 < z1 z2 < z2^2``)."""
    return (sum(alpha), tuple(-a for a in alpha))


def indices_of_degree(d: int, n: int) -> Iterator[MultiIndex]:
    """All multi-indices of length ``d`` and total degree ``n``, in
    lexicographically descending order."""
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in indices_of_degree(d - 1, n - first):
            yield (first,) + rest


def indices_up_to(d: int, D: int) -> list[MultiIndex]:
    """All multi-indices of length ``d`` and degree ``<= D`` in grlex order."""
    out: list[MultiIndex] = []
    for n in range(D + 1):
        out.extend(indices_of_degree(d, n))
    return out


def count_up_to(d: int, D: int) -> int:
    return math.comb(D + d, d)


class Polynomial:
    """Immutable sparse polynomial in ``dim`` complex variables."""

    __slots__ = ("_dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Sequence[int], Number] | None = None):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        clean: dict[MultiIndex, complex] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim:
                raise DimensionError(f"exponent {alpha} has length {len(alpha)}, expected {dim}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = complex(c)
            if c != 0:
                clean[alpha] = clean.get(alpha, 0) + c
        self._dim = dim
        self._terms = {a: c for a, c in sorted(clean.items(), key=lambda t: grlex_key(t[0])) if c != 0}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> Polynomial:
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, c: Number) -> Polynomial:
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: Number = 1.0) -> Polynomial:
        alpha = tuple(alpha)
        return cls(len(alpha), {alpha: c})

    @classmethod
    def coordinate(cls, dim: int, i: int, c: Number = 1.0) -> Polynomial:
        """The coordinate function ``c * z_{i+1}`` (``i`` is zero-based)."""
        alpha = [0] * dim
        alpha[i] = 1
        return cls(dim, {tuple(alpha): c})

    # -- basic accessors ----------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Mapping[MultiIndex, complex]:
        return dict(self._terms)

    def items(self) -> Iterable[tuple[MultiIndex, complex]]:
        return self._terms.items()

    def coeff(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(tuple(alpha), 0j)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(a) for a in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, complex)):
            other = Polynomial.constant(self._dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._dim, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self._dim}, {format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other._dim != self._dim:
                raise DimensionError(f"dimension mismatch: {self._dim} vs {other._dim}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Polynomial.constant(self._dim, complex(other))
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return poly_add(self, q)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self._dim, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return poly_add(self, -q)

    def __rsub__(self, other) -> Polynomial:
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return poly_add(q, -self)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return poly_mul(self, q)

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> Polynomial:
        return self.scale(1 / complex(c))

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.constant(self._dim, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: Number) -> Polynomial:
        c = complex(c)
        return Polynomial(self._dim, {a: c * v for a, v in self._terms.items()})

    def conj_coeffs(self) -> Polynomial:
        return Polynomial(self._dim, {a: v.conjugate() for a, v in self._terms.items()})

    def truncate(self, D: int) -> Polynomial:
        """Drop all terms of degree greater than ``D``."""
        return Polynomial(self._dim, {a: c for a, c in self._terms.items() if sum(a) <= D})

    def __call__(self, z: Sequence[complex]) -> complex:
        return evaluate(self, z)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.dim != q.dim:
        raise DimensionError(f"dimension mismatch: {p.dim} vs {q.dim}")
    out: dict[MultiIndex, complex] = dict(p.items())
    for a, c in q.items():
        out[a] = out.get(a, 0j) + c
    return Polynomial(p.dim, out)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.dim != q.dim:
        raise DimensionError(f"dimension mismatch: {p.dim} vs {q.dim}")
    out: defaultdict[MultiIndex, complex] = defaultdict(complex)
    for a, c in p.items():
        for b, e in q.items():
            out[tuple(x + y for x, y in zip(a, b))] += c * e
    return Polynomial(p.dim, out)


def homogeneous_part(p: Polynomial, n: int) -> Polynomial:
    return Polynomial(p.dim, {a: c for a, c in p.items() if sum(a) == n})


def homogeneous_parts(p: Polynomial) -> dict[int, Polynomial]:
    parts: dict[int, dict] = defaultdict(dict)
    for a, c in p.items():
        parts[sum(a)][a] = c
    return {n: Polynomial(p.dim, t) for n, t in sorted(parts.items())}


def radial_derivative(p: Polynomial, t: float = 1.0) -> Polynomial:
    """Fractional radial derivative: scale the degree-``n`` part by ``n**t``.

    The constant term is dropped for every ``t`` (including ``t == 0``).
    """
    return Polynomial(p.dim, {a: c * float(sum(a)) ** t for a, c in p.items() if sum(a) >= 1})


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    """Formal derivative in ``z_{i+1}``."""
    out = {}
    for a, c in p.items():
        if a[i] > 0:
            b = list(a)
            b[i] -= 1
            out[tuple(b)] = c * a[i]
    return Polynomial(p.dim, out)


def evaluate(p: Polynomial, z: Sequence[complex]) -> complex:
    z = [complex(x) for x in z]
    if len(z) != p.dim:
        raise DimensionError(f"point has dimension {len(z)}, polynomial has {p.dim}")
    total = 0j
    for a, c in p.items():
        term = c
        for x, k in zip(z, a):
            if k:
                term *= x**k
        total += term
    return total


def evaluate_many(p: Polynomial, Z: np.ndarray) -> np.ndarray:
    """Evaluate ``p`` at each row of the ``(m, d)`` array ``Z``."""
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[1] != p.dim:
        raise DimensionError(f"points must have shape (m, {p.dim})")
    out = np.zeros(Z.shape[0], dtype=complex)
    for a, c in p.items():
        out += c * np.prod(Z ** np.array(a), axis=1)
    return out


def invert_one_minus(psi: Polynomial, r: float, D: int) -> Polynomial:
    """Taylor polynomial of ``1/(1 - r*psi)`` through total degree ``D``.

    ``psi`` must vanish at the origin, so each power ``(r psi)^k`` starts in
    degree ``>= k`` and the geometric series needs only ``D + 1`` terms.
    """
    if not 0 <= r <= 1:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    if psi.coeff((0,) * psi.dim) != 0:
        raise ValueError("psi must have zero constant term")
    one = Polynomial.constant(psi.dim, 1)
    out = one
    power = one
    step = psi.scale(r)
    for _ in range(D):
        power = (power * step).truncate(D)
        if power.is_zero():
            break
        out = out + power
    return out


def random_polynomial(
    dim: int,
    degree: int,
    rng: np.random.Generator,
    *,
    density: float = 1.0,
    complex_coeffs: bool = True,
    constant_term: bool = True,
) -> Polynomial:
    """Random polynomial with standard normal coefficients on a random subset
    (of the given density) of the monomials of degree ``<= degree``."""
    terms = {}
    for alpha in indices_up_to(dim, degree):
        if not constant_term and sum(alpha) == 0:
            continue
        if density < 1.0 and rng.random() > density:
            continue
        c = rng.standard_normal()
        if complex_coeffs:
            c = c + 1j * rng.standard_normal()
        terms[alpha] = c
    return Polynomial(dim, terms)


# -- text format --------------------------------------------------------------


def _fmt_coeff(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}j"
    return f"({c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}j)"


def format_polynomial(p: Polynomial) -> str:
    """Human-readable form, e.g. ``1.0 + 0.5*z1^2*z2``; parseable by
    :func:`pickspace.textio.parse_polynomial`."""
    if p.is_zero():
        return "0"
    out = ""
    for a, c in p.items():
        mono = "*".join(f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(a) if k)
        negative = (c.imag == 0 and c.real < 0) or (c.real == 0 and c.imag < 0)
        if negative:
            c = -c
        if not mono:
            term = _fmt_coeff(c)
        elif c == 1:
            term = mono
        else:
            term = f"{_fmt_coeff(c)}*{mono}"
        if not out:
            out = "-" + term if negative else term
        else:
            out += (" - " if negative else " + ") + term
    return out


def to_records(p: Polynomial) -> list[dict]:
    """Serialize as ``[{"exponents": [...], "re": .., "im": ..}, ...]`` in
    grlex order."""
    return [{"exponents": list(a), "re": c.real, "im": c.imag} for a, c in p.items()]


def from_records(records: Sequence[Mapping], dim: int | None = None) -> Polynomial:
    terms: dict[MultiIndex, complex] = defaultdict(complex)
    for rec in records:
        try:
            alpha = tuple(int(e) for e in rec["exponents"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad polynomial record {rec!r}") from exc
        terms[alpha] += complex(float(rec.get("re", 0.0)), float(rec.get("im", 0.0)))
    if dim is None:
        if not terms:
            raise ValueError("cannot infer dimension of an empty record list")
        dim = len(next(iter(terms)))
    return Polynomial(dim, terms)


def max_abs_coeff(p: Polynomial) -> float:
    return max((abs(c) for _, c in p.items()), default=0.0)
