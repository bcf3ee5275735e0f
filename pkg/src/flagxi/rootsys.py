"""Root systems and Weyl groups in Bourbaki indexing.

Conventions
-----------
* ``cartan[i][j] = <alpha_j, alpha_i^vee>``.  With weights written in the
  fundamental-weight basis, ``alpha_j`` is column ``j`` of the Cartan matrix.
* A weight vector ``v`` (omega-coordinates) has ``v[i] = <v, alpha_i^vee>``.
* Indices exposed to users are 1-based (``s_1 .. s_l``); internally 0-based.

Weyl group elements are identified by their action matrix on the weight
lattice.  Enumeration runs over the orbit of ``rho`` (and, for parabolic
quotients, the orbit of a sum of fundamental weights), which is a faithful
model of ``W`` resp. ``W^P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "RootDatum",
    "WeylElement",
    "CosetSystem",
    "build_root_datum",
    "reflect",
    "enumerate_weyl",
    "minimal_coset_reps",
    "poincare_polynomial",
    "weyl_group",
    "WeylGroup",
    "invariant_degrees",
    "product_formula",
]

Vector = tuple  # tuple of ints (or Fractions) in omega-coordinates


def _cartan(type_label: str, n: int) -> list[list[int]]:
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, cij=-1, cji=-1):
        # 1-based nodes; cij = <alpha_j, alpha_i^vee>
        C[i - 1][j - 1] = cij
        C[j - 1][i - 1] = cji

    t = type_label
    if t == "A":
        for i in range(1, n):
            link(i, i + 1)
    elif t == "B":
        for i in range(1, n - 1):
            link(i, i + 1)
        if n >= 2:
            link(n - 1, n, -1, -2)  # alpha_n short
    elif t == "C":
        for i in range(1, n - 1):
            link(i, i + 1)
        if n >= 2:
            link(n - 1, n, -2, -1)  # alpha_n long
    elif t == "D":
        for i in range(1, n - 1):
            link(i, i + 1)
        link(n - 2, n)
    elif t == "E":
        link(1, 3)
        link(2, 4)
        for i in range(3, n):
            link(i, i + 1)
    elif t == "F":
        link(1, 2)
        link(2, 3, -1, -2)  # alpha_3, alpha_4 short
        link(3, 4)
    elif t == "G":
        link(1, 2, -3, -1)  # alpha_1 short
    return C


_VALID = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: 6 <= n <= 8,
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def invariant_degrees(type_label: str, n: int) -> list[int]:
    """Degrees of the basic polynomial invariants of the Weyl group."""
    t = type_label
    if t == "A":
        return list(range(2, n + 2))
    if t in "BC":
        return [2 * i for i in range(1, n + 1)]
    if t == "D":
        return sorted([2 * i for i in range(1, n)] + [n])
    return {
        ("E", 6): [2, 5, 6, 8, 9, 12],
        ("E", 7): [2, 6, 8, 10, 12, 14, 18],
        ("E", 8): [2, 8, 12, 14, 18, 20, 24, 30],
        ("F", 4): [2, 6, 8, 12],
        ("G", 2): [2, 6],
    }[(t, n)]


def product_formula(degrees: Iterable[int]) -> list[int]:
    """Coefficients of prod_i (1 + q + ... + q^(d_i - 1))."""
    poly = [1]
    for d in degrees:
        out = [0] * (len(poly) + d - 1)
        for i, c in enumerate(poly):
            for j in range(d):
                out[i + j] += c
        poly = out
    return poly


def _mat_inverse(M: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class RootDatum:
    """Cartan data of a simple root system.

    ``positive_roots`` are integer vectors in simple-root coordinates, sorted
    by height.  ``fundamental_weights[i]`` expresses omega_{i+1} in the
    simple-root basis.  ``root_lengths[i]`` is ``(alpha_i, alpha_i)/2`` with
    the short roots normalised to 1.
    """

    type_label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    fundamental_weights: tuple[tuple[Fraction, ...], ...]
    root_lengths: tuple[int, ...] = field(repr=False)
    positive_coroots: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def label(self) -> str:
        return f"{self.type_label}{self.rank}"

    def simple_root(self, j: int) -> Vector:
        """alpha_j (1-based) in omega-coordinates."""
        return tuple(self.cartan[i][j - 1] for i in range(self.rank))

    def root_to_weight(self, root: Sequence[int]) -> Vector:
        """Convert simple-root coordinates to omega-coordinates."""
        n = self.rank
        return tuple(sum(self.cartan[i][j] * root[j] for j in range(n)) for i in range(n))

    def weight_to_root(self, weight: Sequence) -> tuple[Fraction, ...]:
        n = self.rank
        F = self.fundamental_weights
        return tuple(sum(Fraction(weight[i]) * F[i][j] for i in range(n)) for j in range(n))

    def pairing(self, weight: Sequence, coroot: Sequence[int]):
        """<weight, coroot> with the coroot in simple-coroot coordinates."""
        return sum(w * c for w, c in zip(weight, coroot))

    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        """W-invariant form on weights (omega-coordinates), short roots of length^2 2."""
        bb = self.weight_to_root(b)
        return sum(Fraction(a[j]) * bb[j] * self.root_lengths[j] for j in range(self.rank))

    @property
    def rho(self) -> Vector:
        return (1,) * self.rank

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    def is_dominant(self, weight: Sequence) -> bool:
        return all(x >= 0 for x in weight)


@lru_cache(maxsize=None)
def build_root_datum(type_label: str, rank: int) -> RootDatum:
    t = str(type_label).upper()
    if t not in _VALID or not isinstance(rank, int) or not _VALID[t](rank):
        raise ValueError(f"no simple root system of type {type_label}{rank}")
    n = rank
    C = _cartan(t, n)

    # symmetrise: d_i C[i][j] = d_j C[j][i]
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and C[i][j] != 0 and d[j] is None:
                d[j] = d[i] * C[i][j] / C[j][i]
                stack.append(j)
    m = min(d)
    d = [x / m for x in d]
    assert all(x.denominator == 1 for x in d)
    lengths = tuple(int(x) for x in d)

    # positive roots by root-string closure
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            bw = [sum(C[i][j] * beta[j] for j in range(n)) for i in range(n)]
            for i in range(n):
                # alpha_i-string through beta: beta - p alpha_i, ..., beta + q alpha_i
                p = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    if tuple(cur) in roots:
                        p += 1
                    else:
                        break
                q = p - bw[i]
                if q > 0:
                    new = list(beta)
                    new[i] += 1
                    new = tuple(new)
                    if new not in roots:
                        roots.add(new)
                        nxt.append(new)
        layer = nxt
    pos = tuple(sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r))))

    # coroot of beta = sum c_j alpha_j is sum c_j d_j/|beta|^2 alpha_j^vee (|.|^2 halved)
    def norm(beta):
        return sum(beta[i] * beta[j] * d[i] * C[i][j] for i in range(n) for j in range(n)) / 2

    coroots = []
    for beta in pos:
        nb = norm(beta)
        cv = tuple(beta[j] * d[j] / nb for j in range(n))
        assert all(x.denominator == 1 for x in cv)
        coroots.append(tuple(int(x) for x in cv))

    Finv = _mat_inverse(C)  # columns: omega_i in simple-root coordinates
    F = tuple(tuple(Finv[j][i] for j in range(n)) for i in range(n))
    return RootDatum(
        type_label=t,
        rank=n,
        cartan=tuple(tuple(r) for r in C),
        positive_roots=pos,
        fundamental_weights=F,
        root_lengths=lengths,
        positive_coroots=tuple(coroots),
    )


def reflect(datum: RootDatum, i: int, weight_vector: Sequence) -> tuple:
    """s_i(v) = v - <v, alpha_i^vee> alpha_i, everything in omega-coordinates."""
    if not 1 <= i <= datum.rank:
        raise IndexError(f"simple reflection index {i} out of range 1..{datum.rank}")
    v = tuple(weight_vector)
    k = v[i - 1]
    if not k:
        return v
    col = i - 1
    return tuple(x - k * datum.cartan[r][col] for r, x in enumerate(v))


def _reflect0(C, i, v):
    k = v[i]
    if not k:
        return v
    return tuple(x - k * C[r][i] for r, x in enumerate(v))


@dataclass(frozen=True, eq=False)
class WeylElement:
    """A Weyl group element.

    ``action`` is the matrix of the element on the weight lattice in the
    omega-basis (rows indexed by output coordinate).  ``word`` is the
    lexicographically smallest reduced word, 1-based, read left to right as
    ``s_{word[0]} s_{word[1]} ...``.
    """

    action: tuple[tuple[int, ...], ...]
    length: int
    word: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.action)

    @property
    def rho_image(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.action)

    def word_str(self) -> str:
        return ",".join(map(str, self.word)) if self.word else "e"

    def __repr__(self):
        inner = "".join(f"s{i}" for i in self.word) or "e"
        return f"WeylElement({inner})"


@dataclass(frozen=True)
class CosetSystem:
    parabolic_node_set: frozenset[int]
    reps: tuple[WeylElement, ...]

    def __len__(self):
        return len(self.reps)

    def by_length(self) -> dict[int, list[WeylElement]]:
        out: dict[int, list[WeylElement]] = {}
        for w in self.reps:
            out.setdefault(w.length, []).append(w)
        return out


class WeylGroup:
    """Per-datum cache of Weyl group data.

    Elements are interned by their rho-image ``w(rho)``; this is what the
    Schubert calculus code keys on internally.
    """

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.rank = datum.rank
        self.C = datum.cartan
        n = self.rank
        self.coroots = datum.positive_coroots
        self.roots_w = tuple(datum.root_to_weight(b) for b in datum.positive_roots)
        self.rho = (1,) * n
        self._elements: dict[tuple, WeylElement] = {}
        self._levels: list[list[tuple]] = [[self.rho]]
        self._complete = False
        self._orbit_cache: dict[frozenset, tuple[list[list[tuple]], bool]] = {}
        self._length_cache: dict[tuple, int] = {self.rho: 0}
        self.max_length = len(datum.positive_roots)
        # reflection matrices (0-based)
        self._refl = []
        for i in range(n):
            S = [[int(r == c) for c in range(n)] for r in range(n)]
            for r in range(n):
                S[r][i] -= self.C[r][i]
            self._refl.append(S)

    # --- basic element operations on rho-images -------------------------
    def s(self, i0: int, v: tuple) -> tuple:
        return _reflect0(self.C, i0, v)

    def length_of(self, mu: tuple) -> int:
        """Length of the element with rho-image ``mu``."""
        L = self._length_cache.get(mu)
        if L is None:
            L = sum(1 for cv in self.coroots if sum(a * b for a, b in zip(mu, cv)) < 0)
            self._length_cache[mu] = L
        return L

    def word_of(self, mu: tuple) -> tuple[int, ...]:
        """Lexicographically smallest reduced word (1-based) of the element w with w(rho)=mu."""
        word = []
        v = mu
        while True:
            i = next((k for k, x in enumerate(v) if x < 0), None)
            if i is None:
                break
            word.append(i + 1)
            v = self.s(i, v)
        return tuple(word)

    def rho_image_of_word(self, word: Sequence[int]) -> tuple:
        v = self.rho
        for i in reversed(tuple(word)):
            v = self.s(i - 1, v)
        return v

    def action_of_word(self, word: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        M = [[int(r == c) for c in range(n)] for r in range(n)]
        for i in reversed(tuple(word)):
            # M <- S_i M
            S = self._refl[i - 1]
            M = [[sum(S[r][k] * M[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
        return tuple(tuple(r) for r in M)

    def element(self, mu: tuple) -> WeylElement:
        """Interned WeylElement with rho-image ``mu``."""
        el = self._elements.get(mu)
        if el is None:
            word = self.word_of(mu)
            el = WeylElement(self.action_of_word(word), len(word), word)
            self._elements[mu] = el
        return el

    def from_word(self, word: Sequence[int], *, require_reduced: bool = False) -> WeylElement:
        word = tuple(int(i) for i in word)
        for i in word:
            if not 1 <= i <= self.rank:
                raise IndexError(f"reflection index {i} out of range")
        mu = self.rho_image_of_word(word)
        el = self.element(mu)
        if require_reduced and el.length != len(word):
            raise ValueError(f"word {word} is not reduced (length {el.length})")
        return el

    def key(self, w: WeylElement) -> tuple:
        return w.rho_image

    def identity(self) -> WeylElement:
        return self.element(self.rho)

    def multiply(self, u: WeylElement, v: WeylElement) -> WeylElement:
        n = self.rank
        M = tuple(tuple(sum(u.action[r][k] * v.action[k][c] for k in range(n)) for c in range(n))
                  for r in range(n))
        mu = tuple(sum(row) for row in M)
        return self.element(mu)

    # --- enumeration ----------------------------------------------------
    def _orbit_levels(self, nodes: frozenset, max_length: int):
        """Orbit of lambda = sum_{r in nodes} omega_r by BFS, grouped by length.

        Returns a list of lists of (orbit vector, rho-image) pairs.
        """
        n = self.rank
        lam = tuple(1 if (i + 1) in nodes else 0 for i in range(n))
        levels, complete = self._orbit_cache.get(nodes, ([[(lam, self.rho)]], False))
        while len(levels) <= max_length and not complete:
            cur = levels[-1]
            seen = {}
            for vec, mu in cur:
                for i in range(n):
                    if vec[i] > 0:
                        nv = self.s(i, vec)
                        if nv not in seen:
                            seen[nv] = self.s(i, mu)
            if not seen:
                complete = True
                break
            levels.append(sorted(seen.items(), key=lambda kv: self.word_of(kv[1])))
        self._orbit_cache[nodes] = (levels, complete)
        return levels[: max_length + 1]

    def elements_by_length(self, max_length: int | None = None) -> list[list[WeylElement]]:
        if max_length is None:
            max_length = self.max_length
        nodes = frozenset(range(1, self.rank + 1))
        return [[self.element(mu) for _, mu in lvl] for lvl in self._orbit_levels(nodes, max_length)]

    def rho_images_by_length(self, max_length: int | None = None, nodes=None) -> list[list[tuple]]:
        if max_length is None:
            max_length = self.max_length
        if nodes is None:
            nodes = frozenset(range(1, self.rank + 1))
        return [[mu for _, mu in lvl] for lvl in self._orbit_levels(frozenset(nodes), max_length)]

    def coset_reps(self, nodes: Iterable[int], max_length: int | None = None) -> CosetSystem:
        nodes = frozenset(nodes)
        if not nodes or any(not 1 <= r <= self.rank for r in nodes):
            raise ValueError(f"invalid parabolic node set {sorted(nodes)}")
        if max_length is None:
            max_length = self.max_length
        reps = tuple(self.element(mu) for lvl in self._orbit_levels(nodes, max_length)
                     for _, mu in lvl)
        return CosetSystem(nodes, reps)

    def is_min_coset_rep(self, mu: tuple, nodes: Iterable[int]) -> bool:
        """w in W^P iff w(alpha_j) > 0 for every Levi simple root alpha_j."""
        nodes = set(nodes)
        el = self.element(mu)
        for j in range(1, self.rank + 1):
            if j in nodes:
                continue
            img = el.apply(self.datum.simple_root(j))
            if not self.is_positive_root_weight(img):
                return False
        return True

    def is_positive_root_weight(self, v: Sequence) -> bool:
        """Sign of a root given in omega-coordinates (via simple-root coordinates)."""
        r = self.datum.weight_to_root(v)
        nz = [x for x in r if x != 0]
        return bool(nz) and nz[0] > 0

    def order(self) -> int:
        return sum(len(l) for l in self.rho_images_by_length())


@lru_cache(maxsize=None)
def _weyl_group_cached(type_label: str, rank: int) -> WeylGroup:
    return WeylGroup(build_root_datum(type_label, rank))


def weyl_group(datum_or_type, rank: int | None = None) -> WeylGroup:
    if isinstance(datum_or_type, RootDatum):
        return _weyl_group_cached(datum_or_type.type_label, datum_or_type.rank)
    return _weyl_group_cached(str(datum_or_type).upper(), rank)


def enumerate_weyl(datum: RootDatum, max_length: int | None = None) -> list[list[WeylElement]]:
    """All elements of length <= max_length, grouped by length, sorted by canonical word."""
    W = weyl_group(datum)
    if max_length is not None and max_length > W.max_length:
        raise ValueError(f"max_length {max_length} exceeds l(w0) = {W.max_length}")
    return W.elements_by_length(max_length)


def minimal_coset_reps(datum: RootDatum, r, max_length: int | None = None) -> CosetSystem:
    """Minimal coset representatives W^P; ``r`` is a node or an iterable of nodes."""
    nodes = {r} if isinstance(r, int) else set(r)
    return weyl_group(datum).coset_reps(nodes, max_length)


def poincare_polynomial(datum: RootDatum) -> list[int]:
    W = weyl_group(datum)
    return [len(l) for l in W.rho_images_by_length()]


def weyl_order_formula(type_label: str, n: int) -> int:
    out = 1
    for d in invariant_degrees(type_label, n):
        out *= d
    return out
