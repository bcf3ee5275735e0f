"""Presented cohomology rings of orthogonal Grassmannians OG(n-k, 2n).

Three presentations are built here, all graded by weight (``tau_p`` has
weight ``p``, i.e. cohomological degree ``2p``):

* ``finite``: H*(OG(n-k, 2n)) on ``tau_1..tau_k, tau_k', tau_{k+1}..tau_{n+k-1}``
  with the five relation families of the Buch-Kresch-Tamvakis presentation;
* ``stable``: the inverse limit over n, keeping the quadratic relations only,
  truncated at a weight ``D``;
* ``bar``: the subring generated by ``d = tau_k - tau_k'`` and the Chern
  classes ``c_p``, presented on ``d, c_1, c_2, ...``.

Each graded piece is computed on demand: free monomials of that weight
modulo the span of (monomial x relation) products, reduced to echelon form
over QQ or GF(2).  For the finite and stable rings the tau^lambda count is
the certificate and a mismatch aborts construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .polyalg import Poly

__all__ = [
    "KStrictPartition",
    "kstrict_enumerate",
    "tau_count",
    "index_set",
    "special_codimension_index",
    "HilbertMismatch",
    "TruncationError",
    "PresentedRing",
    "RingElement",
    "build_ring",
    "ring_multiply",
    "schur_determinant",
    "xi_generator_image_stable",
    "xi_generator_image_bar",
    "restriction_map",
    "restriction_surjectivity",
    "Mod2Report",
    "mod2_injectivity_check",
    "coset_count_D",
    "finite_relations",
    "stable_relations",
    "bar_relations",
]


# --------------------------------------------------------------------------
# k-strict partitions

@dataclass(frozen=True)
class KStrictPartition:
    parts: tuple[int, ...]
    k: int
    type_tag: int = 0

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} is not a partition")
        if any(a > self.k and a == b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} repeats a part larger than {self.k}")
        has_k = self.k in parts
        if self.type_tag not in (0, 1, 2) or (self.type_tag == 0) == has_k:
            raise ValueError(f"type {self.type_tag} not admissible for {parts} with k={self.k}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def in_rectangle(self, n: int) -> bool:
        return self.length <= n - self.k and (not self.parts or self.parts[0] <= n + self.k - 1)

    def __str__(self):
        body = ",".join(map(str, self.parts)) or "()"
        return f"({body})" + (f"_{self.type_tag}" if self.type_tag else "")


def _kstrict_parts(m: int, k: int, max_part: int, max_len: int | None) -> Iterator[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(m, max_part), 0, -1):
        nxt = first - 1 if first > k else first
        rest_len = None if max_len is None else max_len - 1
        for tail in _kstrict_parts(m - first, k, nxt, rest_len):
            yield (first,) + tail


def kstrict_enumerate(k: int, n: int | None, m: int) -> list[KStrictPartition]:
    """k-strict partitions of ``m``, one entry per admissible type.

    With ``n`` given only partitions inside the ``(n-k) x (n+k-1)`` rectangle
    are listed; ``n=None`` is the unbounded (stable) range.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if m < 0:
        return []
    max_part = m if n is None else n + k - 1
    max_len = None if n is None else n - k
    out = []
    for parts in _kstrict_parts(m, k, max_part, max_len):
        if k in parts:
            out.append(KStrictPartition(parts, k, 1))
            out.append(KStrictPartition(parts, k, 2))
        else:
            out.append(KStrictPartition(parts, k, 0))
    return out


@lru_cache(maxsize=None)
def tau_count(k: int, n: int | None, m: int) -> int:
    return len(kstrict_enumerate(k, n, m))


def coset_count_D(n: int, k: int) -> int:
    """``|W^P|`` for the maximal parabolic of D_n giving OG(n-k, 2n)."""
    return 2 ** (n - k) * comb(n, k)


def index_set(lam: KStrictPartition, n: int) -> list[int]:
    """The index set ``p'_1 < ... < p'_l`` of a k-strict partition in the rectangle."""
    k = lam.k
    if not lam.in_rectangle(n):
        raise ValueError(f"{lam} is not inside the ({n - k}) x ({n + k - 1}) rectangle")
    parts = lam.parts
    out = []
    for j in range(1, lam.length + 1):
        lj = parts[j - 1]
        count = sum(1 for i in range(1, j) if parts[i - 1] + lj <= 2 * k - 1 + j - i)
        prev = parts[j - 2] if j >= 2 else None
        k_branch = lj == k and (prev is None or k < prev) and (n - 1 + j + lam.type_tag) % 2 == 0
        bump = 1 if lj > k or k_branch else 2
        out.append(n + k - 1 - lj + count + bump)
    if any(a >= b for a, b in zip(out, out[1:])) or any(not 1 <= p <= 2 * n for p in out):
        raise ValueError(f"index set {out} of {lam} is not strictly increasing in [1, {2 * n}]")
    return out


def special_codimension_index(p: int, n: int, k: int) -> int:
    """``eps(p)``: the flag index in the single Schubert condition of ``X_p`` (``p != k``)."""
    return n + k - p + (2 if p <= k else 1)


# --------------------------------------------------------------------------
# linear algebra over QQ and GF(2)

class _QQEchelon:
    """Primitive integer rows keyed by pivot (their largest column).

    Rows are kept fraction-free; rational arithmetic only appears when an
    arbitrary vector is brought to normal form.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    @staticmethod
    def _integral(v: Mapping[int, object]) -> dict[int, int]:
        fr = {c: Fraction(a) for c, a in v.items() if a}
        den = 1
        for a in fr.values():
            den = den * a.denominator // gcd(den, a.denominator)
        return {c: int(a * den) for c, a in fr.items()}

    def add(self, v: Mapping[int, object]) -> bool:
        v = self._integral(v)
        while v:
            c = max(v)
            row = self.rows.get(c)
            if row is None:
                g = 0
                for a in v.values():
                    g = gcd(g, a)
                if v[c] < 0:
                    g = -g
                self.rows[c] = {j: a // g for j, a in v.items()}
                return True
            a, b = row[c], v[c]
            out = {j: a * x for j, x in v.items()}
            for j, y in row.items():
                x = out.get(j, 0) - b * y
                if x:
                    out[j] = x
                else:
                    out.pop(j, None)
            g = 0
            for x in out.values():
                g = gcd(g, x)
            v = {j: x // g for j, x in out.items()} if g > 1 else out
        return False

    def normal_form(self, v: Mapping[int, object]) -> dict[int, Fraction]:
        v = {c: Fraction(a) for c, a in v.items() if a}
        for c in sorted(self.rows, reverse=True):
            f = v.get(c)
            if f:
                row = self.rows[c]
                f = f / row[c]
                for j, a in row.items():
                    x = v.get(j, 0) - f * a
                    if x:
                        v[j] = x
                    else:
                        v.pop(j, None)
        return v

    @property
    def rank(self) -> int:
        return len(self.rows)


class _GF2Echelon:
    """Rows are int bitsets keyed by their highest bit."""

    def __init__(self):
        self.rows: dict[int, int] = {}

    def add(self, v: int) -> bool:
        while v:
            c = v.bit_length() - 1
            row = self.rows.get(c)
            if row is None:
                self.rows[c] = v
                return True
            v ^= row
        return False

    def normal_form(self, v: int) -> int:
        for c in sorted(self.rows, reverse=True):
            if v >> c & 1:
                v ^= self.rows[c]
        return v

    @property
    def rank(self) -> int:
        return len(self.rows)


def _rank(vectors: Iterable, field_: str) -> int:
    ech = _GF2Echelon() if field_ == "GF2" else _QQEchelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


# --------------------------------------------------------------------------
# presented rings

class HilbertMismatch(ArithmeticError):
    """The graded dimension disagrees with the tau^lambda count."""


class TruncationError(ValueError):
    """A product or element exceeds the truncation weight of a stable ring."""


def _monomials(weights: Sequence[int], m: int, start: int = 0) -> Iterator[tuple[int, ...]]:
    n = len(weights)
    if start == n:
        if m == 0:
            yield ()
        return
    w = weights[start]
    for e in range(m // w, -1, -1):
        for rest in _monomials(weights, m - e * w, start + 1):
            yield (e,) + rest


@dataclass
class _Piece:
    weight: int
    monomials: list[tuple[int, ...]]
    index: dict[tuple[int, ...], int]
    echelon: object
    standard: list[tuple[int, ...]]


class PresentedRing:
    """A graded commutative ring given by generators, weights and relations."""

    def __init__(self, kind: str, k: int, names: Sequence[str], weights: Sequence[int],
                 relations: Sequence[tuple[str, Poly]], field_: str = "QQ", *,
                 n: int | None = None, truncation: int | None = None, certificate=None):
        if field_ not in ("QQ", "GF2"):
            raise ValueError(f"unknown coefficient field {field_!r}")
        self.kind = kind
        self.k = k
        self.n = n
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.field = field_
        self.truncation = truncation
        self.relations = [(label, p) for label, p in relations if p]
        self._rel_weights = [self._weight_of_poly(p) for _, p in self.relations]
        self._certificate = certificate
        self._pieces: dict[int, _Piece] = {}

    def __repr__(self):
        extra = f"n={self.n}" if self.n is not None else f"D={self.truncation}"
        return f"PresentedRing({self.kind}, k={self.k}, {extra}, {self.field})"

    # -- helpers
    def _weight(self, e: Sequence[int]) -> int:
        return sum(a * w for a, w in zip(e, self.weights))

    def _weight_of_poly(self, p: Poly) -> int:
        ws = {self._weight(e) for e in p.terms}
        if len(ws) != 1:
            raise ValueError(f"relation {p.to_text()} is not weighted-homogeneous")
        return ws.pop()

    def _coeff(self, c):
        c = Fraction(c)
        if self.field == "GF2":
            if c.denominator % 2 == 0:
                raise ValueError(f"coefficient {c} is not defined mod 2")
            return c.numerator % 2
        return c

    def _vector(self, piece: _Piece, terms: Mapping[tuple, object]):
        if self.field == "GF2":
            v = 0
            for e, c in terms.items():
                if self._coeff(c):
                    v ^= 1 << piece.index[e]
            return v
        out: dict[int, Fraction] = {}
        for e, c in terms.items():
            i = piece.index[e]
            out[i] = out.get(i, 0) + Fraction(c)
        return {i: c for i, c in out.items() if c}

    def _check_truncation(self, m: int):
        if self.truncation is not None and m > self.truncation:
            raise TruncationError(f"weight {m} exceeds the truncation {self.truncation}")

    # -- graded pieces
    def piece(self, m: int) -> _Piece:
        got = self._pieces.get(m)
        if got is not None:
            return got
        self._check_truncation(m)
        mons = sorted(_monomials(self.weights, m))
        index = {e: i for i, e in enumerate(mons)}
        piece = _Piece(m, mons, index, _GF2Echelon() if self.field == "GF2" else _QQEchelon(), [])
        for (_, rel), rw in zip(self.relations, self._rel_weights):
            if rw > m:
                continue
            for u in _monomials(self.weights, m - rw):
                prod = {}
                for e, c in rel.terms.items():
                    key = tuple(a + b for a, b in zip(e, u))
                    prod[key] = c
                piece.echelon.add(self._vector(piece, prod))
                if piece.echelon.rank == len(mons):
                    break
            if piece.echelon.rank == len(mons):
                break
        pivots = set(piece.echelon.rows)
        piece.standard = [e for i, e in enumerate(mons) if i not in pivots]
        if self._certificate is not None:
            expected = self._certificate(m)
            if expected != len(piece.standard):
                raise HilbertMismatch(
                    f"{self!r}: weight {m} has dimension {len(piece.standard)}, tau-count {expected}"
                )
        self._pieces[m] = piece
        return piece

    def dimension(self, m: int) -> int:
        return len(self.piece(m).standard)

    def hilbert(self, top: int | None = None) -> list[int]:
        if top is None:
            top = self.top_weight if self.top_weight is not None else self.truncation
        return [self.dimension(m) for m in range(top + 1)]

    @property
    def top_weight(self) -> int | None:
        """Weight of the point class for the finite ring, ``dim_C OG(n-k, 2n)``."""
        if self.kind != "finite":
            return None
        r = self.n - self.k
        return r * (2 * self.n - r) - r * (r + 1) // 2

    # -- elements
    @property
    def variables(self) -> tuple[str, ...]:
        return self.names

    def poly_gen(self, name: str) -> Poly:
        return Poly.var(self.names, name)

    def element(self, p: Poly | int) -> "RingElement":
        if not isinstance(p, Poly):
            p = Poly.const(self.names, p)
        if p.variables != self.names:
            raise ValueError("polynomial lives in a different variable space")
        by_weight: dict[int, dict] = {}
        for e, c in p.terms.items():
            by_weight.setdefault(self._weight(e), {})[e] = c
        parts = {}
        for m, terms in by_weight.items():
            nf = self._normal_form(m, terms)
            if nf:
                parts[m] = nf
        return RingElement(self, parts)

    def _normal_form(self, m: int, terms: Mapping[tuple, object]) -> dict[tuple, object]:
        piece = self.piece(m)
        v = piece.echelon.normal_form(self._vector(piece, terms))
        if self.field == "GF2":
            return {piece.monomials[i]: 1 for i in range(v.bit_length()) if v >> i & 1}
        return {piece.monomials[i]: c for i, c in v.items()}

    def gen(self, name: str) -> "RingElement":
        return self.element(self.poly_gen(name))

    def one(self) -> "RingElement":
        return self.element(1)

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def basis(self, m: int) -> list["RingElement"]:
        return [RingElement(self, {m: {e: self._coeff(1)}}) for e in self.piece(m).standard]

    # -- the named classes of the presentation
    def tau(self, p: int) -> Poly:
        """``tau_p`` as a polynomial; ``tau_0 = 1`` and out-of-range indices vanish."""
        if p == 0:
            return Poly.one(self.names)
        name = f"tau_{p}"
        if p < 0 or name not in self.names:
            return Poly.zero(self.names)
        return self.poly_gen(name)

    def tau_prime(self) -> Poly:
        return self.poly_gen(f"tau_{self.k}'")

    def c(self, p: int) -> Poly:
        """Chern class ``c_p`` of the tautological quotient as a polynomial."""
        if p == 0:
            return Poly.one(self.names)
        if p < 0:
            return Poly.zero(self.names)
        if self.kind == "bar":
            name = f"c_{p}"
            return self.poly_gen(name) if name in self.names else Poly.zero(self.names)
        if p < self.k:
            return self.tau(p)
        if p == self.k:
            return self.tau(p) + self.tau_prime()
        return self.tau(p) * 2

    def delta(self, s: int) -> Poly:
        return _delta_poly(self, s)


def _delta_poly(ring: PresentedRing, s: int) -> Poly:
    """Toeplitz expansion ``Delta_s = sum_i (-1)^(i+1) c_i Delta_{s-i}``, ``Delta_0 = 1``."""
    if s < 0:
        return Poly.zero(ring.names)
    memo = [Poly.one(ring.names)]
    for t in range(1, s + 1):
        acc = Poly.zero(ring.names)
        for i in range(1, t + 1):
            term = ring.c(i) * memo[t - i]
            acc = acc + term if i % 2 else acc - term
        memo.append(acc)
    return memo[s]


@dataclass(frozen=True)
class RingElement:
    """Normal form of a (possibly inhomogeneous) element, keyed by weight."""

    ring: PresentedRing
    parts: Mapping[int, Mapping[tuple, object]] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and _canon(self.parts) == _canon(other.parts)

    def __hash__(self):
        return hash(_canon(self.parts))

    def __bool__(self):
        return any(self.parts.values())

    def to_poly(self) -> Poly:
        terms = {}
        for d in self.parts.values():
            terms.update(d)
        return Poly(self.ring.names, terms)

    def homogeneous(self, m: int) -> "RingElement":
        d = self.parts.get(m)
        return RingElement(self.ring, {m: dict(d)} if d else {})

    def vector(self, m: int):
        """Coordinates on the standard monomials of weight ``m``."""
        piece = self.ring.piece(m)
        d = self.parts.get(m, {})
        return [d.get(e, 0) for e in piece.standard]

    def __add__(self, other: "RingElement") -> "RingElement":
        _same_ring(self, other)
        return self.ring.element(self.to_poly() + other.to_poly())

    def __sub__(self, other: "RingElement") -> "RingElement":
        _same_ring(self, other)
        return self.ring.element(self.to_poly() - other.to_poly())

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return ring_multiply(self, other)
        return self.ring.element(self.to_poly() * other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RingElement":
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def to_text(self) -> str:
        return self.to_poly().to_text()

    def __repr__(self):
        return f"RingElement({self.to_text()})"


def _canon(parts):
    return tuple(sorted((m, tuple(sorted(d.items()))) for m, d in parts.items() if d))


def _same_ring(a: RingElement, b: RingElement):
    if a.ring is not b.ring:
        raise ValueError("elements of different rings")


def ring_multiply(a: RingElement, b: RingElement) -> RingElement:
    _same_ring(a, b)
    ring = a.ring
    for ma in a.parts:
        for mb in b.parts:
            ring._check_truncation(ma + mb)
    return ring.element(a.to_poly() * b.to_poly())


def schur_determinant(s: int, ring: PresentedRing) -> RingElement:
    """``Delta_s = det(c_{1+j-i})`` as an element of ``ring``."""
    if s < 1:
        raise ValueError("s must be positive")
    return ring.element(_delta_poly(ring, s))


# --------------------------------------------------------------------------
# constructors

def _tau_names(k: int, top: int) -> tuple[list[str], list[int]]:
    names, weights = [], []
    for p in range(1, top + 1):
        names.append(f"tau_{p}")
        weights.append(p)
        if p == k:
            names.append(f"tau_{k}'")
            weights.append(k)
    return names, weights


def _quadratic_relations(ring: PresentedRing, s_range: Iterable[int]) -> list[tuple[str, Poly]]:
    k = ring.k
    rels = []
    for s in s_range:
        acc = ring.tau(s) * ring.tau(s)
        for p in range(1, s + 1):
            term = ring.tau(s + p) * ring.c(s - p)
            acc = acc - term if p % 2 else acc + term
        rels.append((f"tau_{s}^2 quadratic", acc))
    acc = ring.tau(k) * ring.tau_prime()
    for p in range(1, k + 1):
        term = ring.tau(k + p) * ring.tau(k - p)
        acc = acc - term if p % 2 else acc + term
    rels.append(("tau_k tau_k' quadratic", acc))
    return rels


def finite_relations(ring: PresentedRing) -> list[tuple[str, Poly]]:
    """The five relation families of H*(OG(n-k, 2n)), labelled."""
    n, k = ring.n, ring.k
    rels = []
    for s in range(n - k + 1, n):
        rels.append((f"Delta_{s}", ring.delta(s)))
    rhs = Poly.zero(ring.names)
    for p in range(k + 1, n + 1):
        term = ring.tau(p) * ring.delta(n - p)
        rhs = rhs + term if (p + k + 1) % 2 == 0 else rhs - term
    rels.append(("tau_k Delta_{n-k}", ring.tau(k) * ring.delta(n - k) - rhs))
    rels.append(("tau_k' Delta_{n-k}", ring.tau_prime() * ring.delta(n - k) - rhs))
    for s in range(n + 1, n + k):
        acc = Poly.zero(ring.names)
        for p in range(k + 1, s + 1):
            term = ring.tau(p) * ring.delta(s - p)
            acc = acc + term if p % 2 == 0 else acc - term
        rels.append((f"tail_{s}", acc))
    rels.extend(_quadratic_relations(ring, range(k + 1, n)))
    return rels


def stable_relations(ring: PresentedRing) -> list[tuple[str, Poly]]:
    D = ring.truncation
    return _quadratic_relations(ring, [s for s in range(ring.k + 1, D // 2 + 1)])


def bar_relations(ring: PresentedRing) -> list[tuple[str, Poly]]:
    """``c_s^2 + 2 sum (-1)^p c_{s+p} c_{s-p}`` (``s > k``) and the ``d^2`` relation at ``s = k``."""
    k, D = ring.k, ring.truncation
    d = ring.poly_gen("d")
    rels = []
    for s in range(k, D // 2 + 1):
        acc = ring.c(s) * ring.c(s)
        for p in range(1, s + 1):
            term = ring.c(s + p) * ring.c(s - p) * 2
            acc = acc - term if p % 2 else acc + term
        if s == k:
            acc = acc - d * d
        rels.append((f"c_{s}^2 quadratic", acc))
    return rels


def build_ring(k: int, n: int | None = None, *, kind: str | None = None, truncation: int | None = None,
               field_: str = "QQ", eager: bool = True) -> PresentedRing:
    """Build a presented ring.

    ``kind`` is ``finite`` (needs ``n``), ``stable`` or ``bar`` (both truncated at
    ``truncation``, default ``4k + 4``).  The finite ring checks every graded
    dimension against the tau^lambda count as it is built.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if kind is None:
        kind = "finite" if n is not None else "stable"
    if kind == "finite":
        if n is None or n < k + 2:
            raise ValueError("the finite ring needs n >= k + 2")
        names, weights = _tau_names(k, n + k - 1)
        ring = PresentedRing("finite", k, names, weights, [], field_, n=n,
                             certificate=lambda m: tau_count(k, n, m))
        ring.relations = finite_relations(ring)
    elif kind in ("stable", "bar"):
        D = 4 * k + 4 if truncation is None else truncation
        if D < 2 * k:
            raise ValueError(f"truncation {D} is below the weight 2k of the tau_k tau_k' relation")
        if kind == "stable":
            names, weights = _tau_names(k, D)
        else:
            names = ["d"] + [f"c_{p}" for p in range(1, D + 1)]
            weights = [k] + list(range(1, D + 1))
        # the unbounded tau^lambda count certifies the stable ring too
        cert = (lambda m: tau_count(k, None, m)) if kind == "stable" else None
        ring = PresentedRing(kind, k, names, weights, [], field_, truncation=D, certificate=cert)
        ring.relations = stable_relations(ring) if kind == "stable" else bar_relations(ring)
    else:
        raise ValueError(f"unknown ring kind {kind!r}")
    ring.relations = [(label, p) for label, p in ring.relations if p]
    ring._rel_weights = [ring._weight_of_poly(p) for _, p in ring.relations]
    if eager:
        ring.hilbert()
    return ring


# --------------------------------------------------------------------------
# images and maps

def _xi_poly(ring: PresentedRing, i: int) -> Poly:
    acc = ring.c(i) * ring.c(i)
    for j in range(1, i + 1):
        term = ring.c(i + j) * ring.c(i - j) * 2
        acc = acc - term if j % 2 else acc + term
    return acc


def xi_generator_image_stable(k: int, i: int, ring: PresentedRing | None = None) -> RingElement:
    """Image of ``e_i(hbar_1^2, .., hbar_k^2)``: ``c_i^2 + 2 sum_j (-1)^j c_{i+j} c_{i-j}``."""
    if not 1 <= i <= k:
        raise ValueError(f"i must lie in 1..{k}")
    if ring is None:
        ring = build_ring(k, kind="stable", eager=False)
    if ring.k != k:
        raise ValueError("ring built for a different k")
    ring._check_truncation(2 * i)
    return ring.element(_xi_poly(ring, i))


def xi_generator_image_bar(k: int, i: int, ring: PresentedRing) -> RingElement:
    """The same image written on the generators ``d, c_p`` of the bar ring."""
    if ring.kind != "bar":
        raise ValueError("expected a bar ring")
    return xi_generator_image_stable(k, i, ring)


def restriction_map(k: int, n: int, elem: RingElement, target: PresentedRing | None = None) -> RingElement:
    """``phi_{k,n}``: stable ring to H*(OG(n-k, 2n)); ``tau_p -> tau_p``, zero for ``p >= n+k``."""
    src = elem.ring
    if src.kind != "stable" or src.k != k:
        raise ValueError("expected an element of the stable ring for this k")
    if target is None:
        target = build_ring(k, n, field_=src.field, eager=False)
    if target.kind != "finite" or target.k != k or target.n != n or target.field != src.field:
        raise ValueError("target must be the finite ring for (n, k) over the same field")
    images = []
    for name in src.names:
        images.append(target.poly_gen(name) if name in target.names else Poly.zero(target.names))
    out = Poly.zero(target.names)
    for e, c in elem.to_poly().terms.items():
        term = Poly.const(target.names, c)
        for img, a in zip(images, e):
            if a:
                term = term * img ** a
        out = out + term
    return target.element(out)


# --------------------------------------------------------------------------
# mod-2 injectivity

@dataclass
class Mod2Report:
    k: int
    truncation: int
    degrees: list[dict]
    generator_images_ok: bool
    parity_samples: int
    parity_ok: bool

    @property
    def injective(self) -> bool:
        return all(d["injective"] for d in self.degrees)

    @property
    def ok(self) -> bool:
        return self.injective and self.generator_images_ok and self.parity_ok

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "truncation": self.truncation,
            "degrees": self.degrees,
            "generator_images_ok": self.generator_images_ok,
            "parity_samples": self.parity_samples,
            "parity_ok": self.parity_ok,
            "injective": self.injective,
        }


def _source_monomials(k: int, w: int) -> Iterator[tuple[int, ...]]:
    # e_i has weight 2i
    if w % 2:
        return iter(())
    return _monomials([2 * i for i in range(1, k + 1)], w)


def mod2_injectivity_check(k: int, truncation: int | None = None, *, samples: int = 50,
                           seed: int = 0) -> Mod2Report:
    """Rank check of ``e_i -> c_i^2`` (``i < k``), ``e_k -> d^2`` in the GF(2) bar ring.

    Also confirms that the full images ``c_i^2 + 2(...)`` reduce to these mod 2,
    that ``d^2 = c_k^2`` there, and the parity core: ``deg_{e_k}`` of ``f^2`` is
    even while that of ``e_k g^2`` is odd.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    D = 4 * k if truncation is None else truncation
    ring = build_ring(k, kind="bar", truncation=max(D, 2 * k), field_="GF2", eager=False)
    d = ring.gen("d")
    images = []
    ok = True
    for i in range(1, k + 1):
        ci = ring.gen(f"c_{i}")
        target = ci * ci if i < k else d * d
        full = xi_generator_image_bar(k, i, ring)
        ok &= full == target
        if i == k:
            ok &= target == ci * ci
        images.append(target)
    degrees = []
    for w in range(D + 1):
        src = list(_source_monomials(k, w))
        vecs = []
        for a in src:
            img = ring.one()
            for gi, ai in zip(images, a):
                for _ in range(ai):
                    img = img * gi
            piece = ring.piece(w)
            vecs.append(piece.echelon.normal_form(ring._vector(piece, dict(img.parts.get(w, {})))))
        rank = _rank(vecs, "GF2")
        degrees.append({"weight": w, "source_dim": len(src), "target_dim": ring.dimension(w),
                        "rank": rank, "injective": rank == len(src)})
    parity_ok, count = _parity_core(k, samples, seed)
    return Mod2Report(k, D, degrees, ok, count, parity_ok)


def _parity_core(k: int, samples: int, seed: int) -> tuple[bool, int]:
    rng = random.Random(seed)
    names = tuple(f"e{i}" for i in range(1, k + 1))
    ek = Poly.var(names, f"e{k}")

    def rand_poly():
        terms = {}
        for _ in range(rng.randint(1, 4)):
            e = tuple(rng.randint(0, 3) for _ in names)
            terms[e] = rng.choice([-3, -2, -1, 1, 2, 3])
        p = Poly(names, terms)
        return p if p else Poly.one(names)

    def ek_degree(p: Poly) -> int:
        return max(e[-1] for e in p.terms)

    ok = True
    for _ in range(samples):
        f, g = rand_poly(), rand_poly()
        a, b = ek_degree(f * f), ek_degree(ek * g * g)
        ok &= a % 2 == 0 and b % 2 == 1 and a != b
    return ok, samples


def restriction_surjectivity(k: int, n: int, truncation: int | None = None) -> dict[int, tuple[int, int]]:
    """Per weight: (rank of the image of phi_{k,n}, dimension of the finite piece)."""
    stable = build_ring(k, kind="stable", truncation=truncation)
    finite = build_ring(k, n)
    top = min(stable.truncation, finite.top_weight)
    out = {}
    for m in range(top + 1):
        vecs = []
        for b in stable.basis(m):
            img = restriction_map(k, n, b, finite)
            vecs.append({i: c for i, c in enumerate(img.vector(m)) if c})
        out[m] = (_rank(vecs, "QQ"), finite.dimension(m))
    return out
