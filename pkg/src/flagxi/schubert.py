"""Schubert calculus on G/B and G/P.

Classes are stored as maps from Weyl group elements (interned by their
rho-image) to rational coefficients.  A class on G/P is the pullback to G/B,
so its support is restricted to minimal coset representatives and all
products can be taken in H*(G/B).

Three independent engines are available:

* ``chevalley``: multiplication by a degree-two class via the Chevalley rule
  ``eps_{s_i} . eps_w = sum (beta^vee)_i eps_{w s_beta}`` over the covers
  ``w -> w s_beta`` in Bruhat order;
* ``duan``: structure constants from Duan's operator ``T_A`` on subwords of a
  reduced word;
* ``bgg``: the coefficient of ``eps_w`` in ``beta(f)`` is the iterated divided
  difference of ``f`` along a reduced word of ``w``.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .polyalg import Poly
from .rootsys import RootDatum, WeylElement, weyl_group

__all__ = [
    "DuanMatrix",
    "SchubertClass",
    "ConstantCache",
    "DegreeMismatch",
    "NonReducedWordError",
    "CostGuardError",
    "SupportError",
    "SpaceMismatchError",
    "duan_matrix",
    "duan_operator",
    "structure_constant",
    "chevalley_multiply",
    "cup_product",
    "borel_image",
    "coinvariant_oracle",
    "EngineAgreement",
    "engine_agreement",
    "schubert_preimage",
    "class_from_words",
    "DEFAULT_LENGTH_CEILING",
]

# E7 on G/B is refused beyond this length unless the caller raises it
DEFAULT_LENGTH_CEILING = 14


class DegreeMismatch(ValueError):
    """``l(w) != l(u) + l(v)``: the constant is zero by grading, not by computation."""


class NonReducedWordError(ValueError):
    pass


class CostGuardError(RuntimeError):
    """A computation would exceed the configured length ceiling."""


class SupportError(ValueError):
    """A class that should live on G/P has support outside the minimal coset representatives."""


class SpaceMismatchError(ValueError):
    pass


def _ceiling_for(datum: RootDatum, ceiling: int | None) -> int | None:
    if ceiling is not None:
        return ceiling
    env = os.environ.get("FLAGXI_LENGTH_CEILING")
    if env:
        return int(env)
    return DEFAULT_LENGTH_CEILING if datum.label == "E7" else None


def _guard(datum: RootDatum, length: int, ceiling: int | None):
    c = _ceiling_for(datum, ceiling)
    if c is not None and length > c:
        raise CostGuardError(
            f"{datum.label}: length {length} exceeds ceiling {c}; raise the ceiling explicitly to proceed"
        )


# --------------------------------------------------------------------------
# classes

@dataclass(frozen=True)
class SchubertClass:
    """A rational combination of Schubert classes.

    ``space_tag`` is ``(type label, parabolic nodes)``; an empty node set
    means G/B.
    """

    space_tag: tuple
    support: Mapping[WeylElement, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {w: Fraction(c) for w, c in self.support.items() if c}
        object.__setattr__(self, "support", clean)

    @property
    def group(self) -> str:
        return self.space_tag[0]

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.space_tag[1])

    def coefficient(self, w: WeylElement) -> Fraction:
        return self.support.get(w, Fraction(0))

    def degrees(self) -> set[int]:
        return {w.length for w in self.support}

    def items_sorted(self):
        """Support in (length, canonical word) order."""
        return sorted(self.support.items(), key=lambda wc: (wc[0].length, wc[0].word))

    def to_rows(self) -> list[dict]:
        return [{"word": list(w.word), "coeff": str(c)} for w, c in self.items_sorted()]

    def to_text(self) -> str:
        if not self.support:
            return "0"
        parts = []
        for w, c in self.items_sorted():
            name = "eps_" + (w.word_str() or "e")
            parts.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other: "SchubertClass") -> "SchubertClass":
        _same_space(self, other)
        out = dict(self.support)
        for w, c in other.support.items():
            out[w] = out.get(w, 0) + c
        return SchubertClass(self.space_tag, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "SchubertClass":
        c = Fraction(c)
        return SchubertClass(self.space_tag, {w: c * v for w, v in self.support.items()})

    def __eq__(self, other):
        if not isinstance(other, SchubertClass):
            return NotImplemented
        return self.space_tag == other.space_tag and self.support == other.support

    def __hash__(self):
        return hash((self.space_tag, frozenset(self.support.items())))

    def __repr__(self):
        return f"SchubertClass({self.space_tag[0]}, {sorted(self.space_tag[1])}, {self.to_text()})"


def _same_space(a: SchubertClass, b: SchubertClass):
    if a.space_tag[0] != b.space_tag[0]:
        raise SpaceMismatchError(f"{a.space_tag} vs {b.space_tag}")


def _tag(datum: RootDatum, nodes: Iterable[int] = ()) -> tuple:
    return (datum.label, tuple(sorted(nodes)))


def _nodes_of(r) -> frozenset:
    if r is None or r == "B":
        return frozenset()
    if isinstance(r, int):
        return frozenset([r])
    return frozenset(r)


def class_from_words(datum: RootDatum, terms: Iterable[tuple[Sequence[int], object]], r=None) -> SchubertClass:
    """Build a class from (word, coefficient) pairs; words must be reduced."""
    W = weyl_group(datum)
    out: dict[WeylElement, Fraction] = {}
    for word, c in terms:
        w = W.from_word(word, require_reduced=True)
        out[w] = out.get(w, Fraction(0)) + Fraction(c)
    return SchubertClass(_tag(datum, _nodes_of(r)), out)


def _to_mu(cls: SchubertClass) -> dict[tuple, Fraction]:
    return {w.rho_image: c for w, c in cls.support.items()}


def _from_mu(datum: RootDatum, d: Mapping[tuple, Fraction], nodes=frozenset()) -> SchubertClass:
    W = weyl_group(datum)
    return SchubertClass(_tag(datum, nodes), {W.element(mu): c for mu, c in d.items() if c})


# --------------------------------------------------------------------------
# Chevalley engine

class _CoverTable:
    """Bruhat covers ``w -> w s_beta`` with ``l(w s_beta) = l(w) + 1``, keyed by rho-images."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.W = weyl_group(datum)
        self.roots_w = self.W.roots_w
        self.heights = tuple(sum(cv) for cv in datum.positive_coroots)
        self.coroots = datum.positive_coroots
        self._covers: dict[tuple, list[tuple[tuple, tuple]]] = {}

    def covers(self, mu: tuple):
        out = self._covers.get(mu)
        if out is not None:
            return out
        W = self.W
        el = W.element(mu)
        M = el.action
        target = el.length + 1
        n = len(mu)
        out = []
        for b, h, cv in zip(self.roots_w, self.heights, self.coroots):
            wb = [sum(M[r][k] * b[k] for k in range(n)) for r in range(n)]
            nu = tuple(m - h * x for m, x in zip(mu, wb))
            if W.length_of(nu) == target:
                out.append((nu, cv))
        self._covers[mu] = out
        return out

    def multiply(self, i0: int, cls: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
        """``eps_{s_{i0+1}} . cls`` on rho-image dictionaries."""
        out: dict[tuple, Fraction] = {}
        for mu, c in cls.items():
            for nu, cv in self.covers(mu):
                k = cv[i0]
                if k:
                    out[nu] = out.get(nu, 0) + c * k
        return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _cover_table(label_type: str, rank: int) -> _CoverTable:
    from .rootsys import build_root_datum

    return _CoverTable(build_root_datum(label_type, rank))


def _covers_for(datum: RootDatum) -> _CoverTable:
    return _cover_table(datum.type_label, datum.rank)


def chevalley_multiply(datum: RootDatum, i: int, cls: SchubertClass, *, ceiling: int | None = None) -> SchubertClass:
    """``eps_{s_i} . cls`` (1-based ``i``) by the Chevalley rule."""
    if not 1 <= i <= datum.rank:
        raise IndexError(f"reflection index {i} out of range")
    top = max(cls.degrees(), default=0) + 1
    _guard(datum, top, ceiling)
    res = _covers_for(datum).multiply(i - 1, _to_mu(cls))
    return _from_mu(datum, res, cls.nodes)


def _horner(table: _CoverTable, terms: Mapping[tuple, Fraction], start: dict[tuple, Fraction],
            memo: dict) -> dict[tuple, Fraction]:
    """beta(f) . start, where f is given by exponent-tuple terms.

    ``f = c0 + sum_i omega_i f_i`` with ``f_i`` free of omega_j for j < i.
    """
    key = frozenset(terms.items())
    hit = memo.get(key)
    if hit is not None:
        return hit
    c0 = Fraction(0)
    parts: dict[int, dict[tuple, Fraction]] = {}
    for e, c in terms.items():
        i = next((k for k, x in enumerate(e) if x), None)
        if i is None:
            c0 += c
            continue
        e2 = list(e)
        e2[i] -= 1
        parts.setdefault(i, {})[tuple(e2)] = c
    out: dict[tuple, Fraction] = {}
    if c0:
        for mu, c in start.items():
            out[mu] = c0 * c
    for i, sub in sorted(parts.items()):
        inner = _horner(table, sub, start, memo)
        for mu, c in table.multiply(i, inner).items():
            out[mu] = out.get(mu, 0) + c
    out = {k: v for k, v in out.items() if v}
    memo[key] = out
    return out


# --------------------------------------------------------------------------
# BGG engine

def _divided_difference(datum: RootDatum, i0: int, terms: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
    """``(f - s_i f) / alpha_i`` on polynomials in omega_1..omega_l.

    Division-free: ``d(omega_i^a r) = r * sum_j omega_i^j (omega_i - alpha_i)^(a-1-j)``
    since ``r`` does not involve omega_i.
    """
    n = datum.rank
    vars_ = tuple(f"w{k}" for k in range(n))
    col = [datum.cartan[r][i0] for r in range(n)]  # alpha_i in omega-coordinates
    wi = Poly.var(vars_, i0)
    shifted = wi - Poly.linear(vars_, col)  # s_i(omega_i)
    by_rest: dict[int, dict[tuple, Fraction]] = {}
    for e, c in terms.items():
        a = e[i0]
        if a == 0:
            continue
        rest = list(e)
        rest[i0] = 0
        by_rest.setdefault(a, {})[tuple(rest)] = c
    total = Poly.zero(vars_)
    for a, rest in by_rest.items():
        s = Poly.zero(vars_)
        for j in range(a):
            s = s + wi ** j * shifted ** (a - 1 - j)
        total = total + Poly(vars_, rest, _trusted=True) * s
    return dict(total.terms)


def _bgg_image(datum: RootDatum, terms: Mapping[tuple, Fraction], nodes: frozenset) -> dict[tuple, Fraction]:
    W = weyl_group(datum)
    n = datum.rank
    by_deg: dict[int, dict[tuple, Fraction]] = {}
    for e, c in terms.items():
        by_deg.setdefault(sum(e), {})[e] = c
    out: dict[tuple, Fraction] = {}
    levi = [j for j in range(n) if (j + 1) not in nodes] if nodes else []
    for d, part in by_deg.items():
        if nodes:
            for j in levi:
                if _divided_difference(datum, j, part):
                    raise SupportError(f"degree-{d} part is not invariant under s_{j + 1}")
        if d == 0:
            out[W.rho] = out.get(W.rho, 0) + part[(0,) * n]
            continue
        # g_{s_i v} = d_i g_v along left extensions, within W^P when parabolic
        layer = {W.rho: part}
        for _ in range(d):
            nxt: dict[tuple, dict] = {}
            for mu, g in layer.items():
                L = W.length_of(mu)
                for i0 in range(n):
                    # left multiplication: (s_i v)(rho) = s_i applied to the action of v
                    nu = _left_mult(W, i0, mu)
                    if nu in nxt or W.length_of(nu) != L + 1:
                        continue
                    if nodes and not W.is_min_coset_rep(nu, nodes):
                        continue
                    g2 = _divided_difference(datum, i0, g)
                    nxt[nu] = g2
            layer = {mu: g for mu, g in nxt.items() if g}
        for mu, g in layer.items():
            c = g.get((0,) * n, Fraction(0))
            if c:
                out[mu] = out.get(mu, 0) + c
    return out


def _left_mult(W, i0: int, mu: tuple) -> tuple:
    # s_i w (rho) = s_i(w(rho)) since w(rho) is the image vector
    return W.s(i0, mu)


# --------------------------------------------------------------------------
# Duan engine

@dataclass(frozen=True)
class DuanMatrix:
    size: int
    entries: tuple[tuple[int, ...], ...]
    word: tuple[int, ...] = ()

    def __post_init__(self):
        for p in range(self.size):
            for q in range(self.size):
                if p >= q and self.entries[p][q]:
                    raise ValueError("Duan matrix must be strictly upper triangular")

    def leading(self, k: int) -> "DuanMatrix":
        return DuanMatrix(k, tuple(row[:k] for row in self.entries[:k]), self.word[:k])


def duan_matrix(datum: RootDatum, word: Sequence[int]) -> DuanMatrix:
    """``a_{p,q} = -alpha_{i_q}(alpha_{i_p}^vee)`` for ``p < q``, zero otherwise.

    The pairing is taken with the coroot of the earlier letter.  The opposite
    orientation yields the cohomology of the Langlands dual flag variety (it
    swaps B_n and C_n, and gives G2/P_2 degree 2 instead of 18).
    """
    word = tuple(int(i) for i in word)
    W = weyl_group(datum)
    w = W.from_word(word)
    if w.length != len(word):
        raise NonReducedWordError(f"word {word} is not reduced")
    k = len(word)
    C = datum.cartan
    rows = tuple(
        tuple(-C[word[p] - 1][word[q] - 1] if p < q else 0 for q in range(k)) for p in range(k)
    )
    return DuanMatrix(k, rows, word)


class _DuanEvaluator:
    """Memoized ``T_A`` on monomials.

    ``T(c x_1) = c``; for ``k >= 2`` write ``h = sum_r h_r x_k^r`` and set
    ``T_A(h) = sum_{r >= 1} T_{A'}(h_r * L^(r-1))`` with
    ``L = sum_{p<k} a_{p,k} x_p`` and ``A'`` the leading (k-1)-block.
    """

    def __init__(self, A: DuanMatrix):
        self.A = A
        self.memo: dict[tuple, int] = {}
        self._lpow: dict[tuple[int, int], dict[tuple, int]] = {}

    def _L_power(self, k: int, r: int) -> dict[tuple, int]:
        key = (k, r)
        if key not in self._lpow:
            if r == 0:
                self._lpow[key] = {(0,) * (k - 1): 1}
            else:
                prev = self._L_power(k, r - 1)
                out: dict[tuple, int] = {}
                for p in range(k - 1):
                    a = self.A.entries[p][k - 1]
                    if not a:
                        continue
                    for e, c in prev.items():
                        e2 = list(e)
                        e2[p] += 1
                        e2 = tuple(e2)
                        out[e2] = out.get(e2, 0) + a * c
                self._lpow[key] = {e: c for e, c in out.items() if c}
        return self._lpow[key]

    def mono(self, e: tuple) -> int:
        k = len(e)
        if k == 1:
            return 1 if e[0] == 1 else 0
        hit = self.memo.get(e)
        if hit is not None:
            return hit
        r = e[-1]
        total = 0
        if r >= 1:
            head = e[:-1]
            for le, c in self._L_power(k, r - 1).items():
                total += c * self.mono(tuple(a + b for a, b in zip(head, le)))
        self.memo[e] = total
        return total

    def __call__(self, terms: Mapping[tuple, object]) -> Fraction:
        return sum((Fraction(c) * self.mono(tuple(e)) for e, c in terms.items()), Fraction(0))


def duan_operator(A: DuanMatrix, h) -> Fraction:
    """Evaluate ``T_A(h)`` for ``h`` homogeneous of degree ``A.size``.

    ``h`` is a :class:`Poly` in ``A.size`` variables or a dict of exponent tuples.
    """
    terms = h.terms if isinstance(h, Poly) else dict(h)
    for e in terms:
        if len(e) != A.size:
            raise ValueError(f"monomial {e} does not live in {A.size} variables")
        if sum(e) != A.size:
            raise DegreeMismatch(f"T_A needs degree {A.size}, got monomial of degree {sum(e)}")
    val = _DuanEvaluator(A)(terms)
    return int(val) if val.denominator == 1 else val


def _subword_sum(W, word: tuple, target: WeylElement) -> dict[tuple, int]:
    """``sum x_L`` over index sets ``L`` with ``|L| = l(target)`` and ``s_L = target``."""
    k = len(word)
    m = target.length
    out: dict[tuple, int] = {}
    goal = target.rho_image
    for L in combinations(range(k), m):
        if W.rho_image_of_word([word[j] for j in L]) == goal:
            e = [0] * k
            for j in L:
                e[j] = 1
            out[tuple(e)] = out.get(tuple(e), 0) + 1
    return out


_EVAL_CACHE: dict[tuple, _DuanEvaluator] = {}


def structure_constant(datum: RootDatum, u: WeylElement, v: WeylElement, w: WeylElement,
                       *, word: Sequence[int] | None = None, cache: "ConstantCache | None" = None,
                       ceiling: int | None = None) -> int:
    """``c^w_{u,v}`` by Duan's formula on a reduced word of ``w``."""
    if w.length != u.length + v.length:
        raise DegreeMismatch(f"l(w)={w.length} but l(u)+l(v)={u.length + v.length}")
    _guard(datum, w.length, ceiling)
    if cache is not None and word is None:
        hit = cache.get(datum, w, u, v)
        if hit is not None:
            return hit
    W = weyl_group(datum)
    word = tuple(word) if word is not None else w.word
    if W.from_word(word) != w or len(word) != w.length:
        raise NonReducedWordError(f"{word} is not a reduced word of {w.word}")
    if u.length == 0:
        val = 1 if v == w else 0
    elif v.length == 0:
        val = 1 if u == w else 0
    else:
        ekey = (datum.label, word)
        ev = _EVAL_CACHE.get(ekey)
        if ev is None:
            ev = _EVAL_CACHE[ekey] = _DuanEvaluator(duan_matrix(datum, word))
        xu = _subword_sum(W, word, u)
        xv = _subword_sum(W, word, v) if v != u else xu
        prod: dict[tuple, int] = {}
        for e1, c1 in xu.items():
            for e2, c2 in xv.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod[e] = prod.get(e, 0) + c1 * c2
        val = ev(prod)
        assert val.denominator == 1
        val = int(val)
    if val < 0:
        raise AssertionError(f"negative structure constant c^{w.word}_{u.word},{v.word} = {val}")
    if cache is not None:
        cache.put(datum, w, u, v, val)
    return val


class _DuanTable:
    """Multiplication by ``eps_{s_i}`` with every coefficient taken from Duan's formula.

    Only the candidate targets come from the Bruhat cover list (``c^w_{s_i,v}``
    vanishes unless ``w`` covers ``v``); the numbers themselves are ``T_A`` values.
    """

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.W = weyl_group(datum)
        self.covers = _covers_for(datum)
        self.memo: dict[tuple, int] = {}

    def coefficient(self, i0: int, mu: tuple, nu: tuple) -> int:
        key = (i0, mu, nu)
        c = self.memo.get(key)
        if c is None:
            W = self.W
            c = structure_constant(self.datum, W.from_word([i0 + 1]), W.element(mu), W.element(nu),
                                   ceiling=10 ** 6)
            self.memo[key] = c
        return c

    def multiply(self, i0: int, cls: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
        out: dict[tuple, Fraction] = {}
        for mu, c in cls.items():
            for nu, _ in self.covers.covers(mu):
                k = self.coefficient(i0, mu, nu)
                if k:
                    out[nu] = out.get(nu, 0) + c * k
        return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _duan_table_cached(t: str, rank: int) -> _DuanTable:
    from .rootsys import build_root_datum

    return _DuanTable(build_root_datum(t, rank))


def _duan_table(datum: RootDatum) -> _DuanTable:
    return _duan_table_cached(datum.type_label, datum.rank)


# --------------------------------------------------------------------------
# products and the Borel map

_PREIMAGE_CACHE: dict[tuple, dict] = {}


def schubert_preimage(datum: RootDatum, w: WeylElement) -> dict[tuple, Fraction]:
    """A polynomial ``f`` in the omega's (exponent dict) with ``beta(f) = eps_w``.

    Built once per degree by Gaussian elimination on the Chevalley images of
    the degree-d monomials (triangular re-expression over Q).
    """
    d = w.length
    key = (datum.label, d)
    if key not in _PREIMAGE_CACHE:
        _PREIMAGE_CACHE[key] = _preimage_table(datum, d)
    return _PREIMAGE_CACHE[key][w.rho_image]


def _monomials(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _monomials(n - 1, d - a):
            yield (a,) + rest


def _preimage_table(datum: RootDatum, d: int) -> dict[tuple, dict]:
    table = _covers_for(datum)
    W = weyl_group(datum)
    n = datum.rank
    targets = [mu for mu in W.rho_images_by_length(d)[d]]
    index = {mu: j for j, mu in enumerate(targets)}
    memo: dict = {}
    # rows: [image vector | preimage polynomial]
    pivots: dict[int, tuple[list[Fraction], dict]] = {}
    for e in _monomials(n, d):
        img = _horner(table, {e: Fraction(1)}, {W.rho: Fraction(1)}, memo)
        vec = [Fraction(0)] * len(targets)
        for mu, c in img.items():
            vec[index[mu]] = c
        poly = {e: Fraction(1)}
        for p, (pv, pp) in pivots.items():
            if vec[p]:
                f = vec[p]
                vec = [a - f * b for a, b in zip(vec, pv)]
                poly = _lin(poly, pp, -f)
        p = next((j for j, x in enumerate(vec) if x), None)
        if p is None:
            continue
        f = vec[p]
        vec = [x / f for x in vec]
        poly = {k: v / f for k, v in poly.items()}
        for q, (qv, qp) in list(pivots.items()):
            if qv[p]:
                g = qv[p]
                pivots[q] = ([a - g * b for a, b in zip(qv, vec)], _lin(qp, poly, -g))
        pivots[p] = (vec, poly)
        if len(pivots) == len(targets):
            break
    if len(pivots) != len(targets):
        raise AssertionError("Borel map is not surjective in this degree")
    return {targets[p]: poly for p, (_, poly) in pivots.items()}


def _lin(a: dict, b: dict, f: Fraction) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + f * v
    return {k: v for k, v in out.items() if v}


def cup_product(a: SchubertClass, b: SchubertClass, engine: str = "chevalley", *,
                cache: "ConstantCache | None" = None, ceiling: int | None = None) -> SchubertClass:
    """Product in H*(G/B); classes on G/P multiply through their pullbacks."""
    _same_space(a, b)
    from .rootsys import build_root_datum

    datum = build_root_datum(a.group[0], int(a.group[1:]))
    nodes = a.nodes | b.nodes
    if a.support and b.support:
        _guard(datum, max(a.degrees()) + max(b.degrees()), ceiling)
    if engine == "chevalley":
        table = _covers_for(datum)
        out: dict[tuple, Fraction] = {}
        bmu = _to_mu(b)
        for u, cu in a.support.items():
            pre = schubert_preimage(datum, u)
            prod = _horner(table, pre, bmu, {})
            for mu, c in prod.items():
                out[mu] = out.get(mu, 0) + cu * c
        res = _from_mu(datum, out, nodes)
    elif engine == "duan":
        W = weyl_group(datum)
        out_el: dict[WeylElement, Fraction] = {}
        levels = W.elements_by_length(min(W.max_length,
                                          max(a.degrees(), default=0) + max(b.degrees(), default=0)))
        for u, cu in a.support.items():
            for v, cv in b.support.items():
                L = u.length + v.length
                if L > W.max_length:
                    continue
                for w in levels[L]:
                    c = structure_constant(datum, u, v, w, cache=cache, ceiling=ceiling)
                    if c:
                        out_el[w] = out_el.get(w, 0) + cu * cv * c
        res = SchubertClass(_tag(datum, nodes), out_el)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if nodes:
        _check_support(datum, res, nodes)
    return res


def _check_support(datum: RootDatum, cls: SchubertClass, nodes: frozenset):
    W = weyl_group(datum)
    bad = [w for w in cls.support if not W.is_min_coset_rep(w.rho_image, nodes)]
    if bad:
        raise SupportError(
            f"support outside W^P for nodes {sorted(nodes)}: {[w.word_str() for w in bad[:5]]}"
        )


def borel_image(datum: RootDatum, f, r=None, *, engine: str = "chevalley",
                ceiling: int | None = None) -> SchubertClass:
    """``beta(f)`` for a polynomial ``f`` in omega_1..omega_l.

    With a parabolic target ``r`` (node or node set) the result must be
    supported on minimal coset representatives; otherwise ``SupportError``.
    """
    terms = f.terms if isinstance(f, Poly) else dict(f)
    n = datum.rank
    for e in terms:
        if len(e) != n:
            raise ValueError(f"expected polynomials in {n} variables")
    nodes = _nodes_of(r)
    top = max((sum(e) for e in terms), default=0)
    _guard(datum, top, ceiling)
    W = weyl_group(datum)
    if engine == "chevalley":
        res = _horner(_covers_for(datum), {e: Fraction(c) for e, c in terms.items()},
                      {W.rho: Fraction(1)}, {})
        cls = _from_mu(datum, res, nodes)
        if nodes:
            _check_support(datum, cls, nodes)
        return cls
    if engine == "bgg":
        res = _bgg_image(datum, {e: Fraction(c) for e, c in terms.items()}, nodes)
        return _from_mu(datum, res, nodes)
    if engine == "duan":
        res = _horner(_duan_table(datum), {e: Fraction(c) for e, c in terms.items()},
                      {W.rho: Fraction(1)}, {})
        cls = _from_mu(datum, res, nodes)
        if nodes:
            _check_support(datum, cls, nodes)
        return cls
    raise ValueError(f"unknown engine {engine!r}")


# --------------------------------------------------------------------------
# oracle

def coinvariant_oracle(datum: RootDatum) -> dict[tuple[WeylElement, WeylElement], SchubertClass]:
    """Full multiplication table of H*(G/B, Q) built from the Chevalley rule alone.

    Checks associativity on all triples of simple classes, commutativity, and
    unimodularity of the Poincare pairing before returning.
    """
    if datum.rank > 3:
        raise CostGuardError("coinvariant oracle is limited to rank <= 3")
    W = weyl_group(datum)
    elems = [w for level in W.elements_by_length() for w in level]
    tag = _tag(datum)
    table: dict[tuple[WeylElement, WeylElement], SchubertClass] = {}
    for u in elems:
        for v in elems:
            if (v, u) in table:
                table[(u, v)] = table[(v, u)]
                continue
            table[(u, v)] = cup_product(SchubertClass(tag, {u: 1}), SchubertClass(tag, {v: 1}), "chevalley")
    for (u, v), c in table.items():
        if table[(v, u)] != c:
            raise AssertionError("oracle table is not commutative")
    top_len = W.max_length
    top = [w for w in elems if w.length == top_len]
    assert len(top) == 1
    w0 = top[0]
    # Poincare duality: eps_u . eps_v has eps_{w0}-coefficient delta_{v, w0 u}
    for u in elems:
        partners = [v for v in elems if v.length == top_len - u.length and table[(u, v)].coefficient(w0)]
        if len(partners) != 1 or table[(u, partners[0])].coefficient(w0) != 1:
            raise AssertionError(f"Poincare pairing is not unimodular at {u.word}")
    simple = [W.from_word([i]) for i in range(1, datum.rank + 1)]
    for a in simple:
        for b in simple:
            for c in elems:
                left = _table_mul(table, tag, table[(a, b)], c)
                right = SchubertClass(tag, {})
                for u, cu in table[(b, c)].support.items():
                    right = right + table[(a, u)].scale(cu)
                if left != right:
                    raise AssertionError("oracle table is not associative")
    return table


def _table_mul(table, tag, x: SchubertClass, w: WeylElement) -> SchubertClass:
    out = SchubertClass(tag, {})
    for u, c in x.support.items():
        out = out + table[(u, w)].scale(c)
    return out


@dataclass
class EngineAgreement:
    group: str
    pairs: int
    disagreements: list[tuple[tuple[int, ...], tuple[int, ...]]]

    @property
    def ok(self) -> bool:
        return not self.disagreements


def engine_agreement(datum: RootDatum, *, cache: "ConstantCache | None" = None) -> EngineAgreement:
    """Duan products against Chevalley products for every ordered pair ``(u, v)`` in W."""
    W = weyl_group(datum)
    tag = _tag(datum)
    elems = [w for level in W.elements_by_length() for w in level]
    bad = []
    compared = 0
    for u in elems:
        a = SchubertClass(tag, {u: 1})
        for v in elems:
            if u.length + v.length > W.max_length:
                continue
            compared += 1
            b = SchubertClass(tag, {v: 1})
            if cup_product(a, b, "chevalley") != cup_product(a, b, "duan", cache=cache):
                bad.append((u.word, v.word))
    return EngineAgreement(datum.label, compared, bad)


# --------------------------------------------------------------------------
# persistent cache

class ConstantCache:
    """Append-only record file of structure constants.

    One line per record: ``type rank | w | u | v | value`` with words written
    as comma-separated reflection indices (``e`` for the identity).  The path
    comes from the argument or ``FLAGXI_CACHE``.  Writes take an exclusive
    advisory lock so several processes can share one file.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        path = path or os.environ.get("FLAGXI_CACHE")
        self.path = os.fspath(path) if path else None
        self._data: dict[tuple, int] = {}
        self._loaded = False

    @staticmethod
    def _w(word: Sequence[int]) -> str:
        return ",".join(map(str, word)) or "e"

    @staticmethod
    def _parse_w(s: str) -> tuple[int, ...]:
        s = s.strip()
        return () if s == "e" else tuple(int(x) for x in s.split(","))

    def _key(self, datum: RootDatum, w, u, v) -> tuple:
        return (datum.type_label, datum.rank, tuple(w.word), tuple(u.word), tuple(v.word))

    def load(self):
        self._loaded = True
        if not self.path or not os.path.exists(self.path):
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                head, w, u, v, val = (p.strip() for p in line.split("|"))
                t, rank = head.split()
                self._data[(t, int(rank), self._parse_w(w), self._parse_w(u), self._parse_w(v))] = int(val)

    def __len__(self):
        if not self._loaded:
            self.load()
        return len(self._data)

    def get(self, datum, w, u, v) -> int | None:
        if not self._loaded:
            self.load()
        return self._data.get(self._key(datum, w, u, v))

    def put(self, datum, w, u, v, value: int):
        if not self._loaded:
            self.load()
        key = self._key(datum, w, u, v)
        if key in self._data:
            if self._data[key] != value:
                raise AssertionError(f"cache conflict for {key}: {self._data[key]} vs {value}")
            return
        self._data[key] = value
        if self.path:
            line = f"{key[0]} {key[1]} | {self._w(key[2])} | {self._w(key[3])} | {self._w(key[4])} | {value}\n"
            with open(self.path, "a") as fh:
                try:
                    import fcntl

                    fcntl.flock(fh, fcntl.LOCK_EX)
                except (ImportError, OSError):
                    pass
                fh.write(line)

    def records(self):
        if not self._loaded:
            self.load()
        return dict(self._data)

    def verify(self, fraction: float = 0.01, seed: int = 0) -> list[tuple]:
        """Recompute a random sample of records; return the keys that disagree."""
        from .rootsys import build_root_datum

        if not self._loaded:
            self.load()
        keys = sorted(self._data)
        if not keys:
            return []
        rng = random.Random(seed)
        sample = rng.sample(keys, max(1, int(len(keys) * fraction)))
        bad = []
        for key in sample:
            t, rank, w, u, v = key
            datum = build_root_datum(t, rank)
            W = weyl_group(datum)
            val = structure_constant(datum, W.from_word(u), W.from_word(v), W.from_word(w), ceiling=10 ** 6)
            if val != self._data[key]:
                bad.append(key)
        return bad
