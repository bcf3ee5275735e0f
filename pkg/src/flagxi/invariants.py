"""W_L-invariant generators, as polynomials in the fundamental weights.

The case library (``data/cases.json``) stores, per exceptional group and
maximal parabolic ``P_r``, the linear forms ``y_i`` in the Theta-coordinates,
the generator labels and the linear relations among the ``y_i``.  Theta_i is
the coordinate of theta(t) along alpha_i^vee, i.e. the pullback of omega_i,
so ``Theta_i`` and ``omega_i`` are interchangeable here.

Generator labels use a small expression language::

    e_2(y_1^2,y_2^2,y_3^2)    y_4    (Theta_2-3/2*Theta_1)^2    1/144*psi_2

which :func:`evaluate_label` turns into a :class:`Poly` in ``w1..wl``.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import permutations, product
from typing import Mapping, Sequence

from .polyalg import Poly, elementary_symmetric
from .rootsys import RootDatum, build_root_datum, weyl_group

__all__ = [
    "GeneratorFamily",
    "DnLeviGenerators",
    "InvarianceResult",
    "UnknownCaseError",
    "omega_vars",
    "load_cases",
    "case_generators",
    "evaluate_label",
    "e6_psi",
    "dn_levi_generators",
    "delta_in_omega",
    "check_invariance",
    "reflect_poly",
    "signed_permutation_check",
    "reynolds_dimension",
    "library_dimension",
    "PSI_DEGREES",
]

PSI_DEGREES = (2, 5, 6, 8, 9, 12)


class UnknownCaseError(KeyError):
    pass


def omega_vars(n: int) -> tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(n))


@dataclass(frozen=True)
class GeneratorFamily:
    group: str
    r: int
    y_defs: Mapping[str, Poly]
    generators: tuple[tuple[str, Poly], ...]
    relations: Mapping[str, Poly]
    scale_factors: Mapping[str, Fraction] = field(default_factory=dict)

    @property
    def datum(self) -> RootDatum:
        return build_root_datum(self.group[0], int(self.group[1:]))

    def generator(self, label: str) -> Poly:
        for name, p in self.generators:
            if name == label:
                return p
        raise KeyError(label)


@dataclass(frozen=True)
class InvarianceResult:
    ok: bool
    witness: int | None = None
    difference: Poly | None = None

    def __bool__(self):
        return self.ok


# --------------------------------------------------------------------------
# case library

@lru_cache(maxsize=None)
def load_cases() -> dict:
    text = resources.files("flagxi").joinpath("data/cases.json").read_text()
    return json.loads(text)["cases"]


def _linear(n: int, coeffs: Sequence) -> Poly:
    return Poly.linear(omega_vars(n), [Fraction(c) for c in coeffs])


def _alpha_to_omega(datum: RootDatum, coeffs_alpha: Sequence) -> Poly:
    # alpha_j = sum_i C[i][j] omega_i
    n = datum.rank
    out = [Fraction(0)] * n
    for j, a in enumerate(coeffs_alpha):
        if a:
            for i in range(n):
                out[i] += Fraction(a) * datum.cartan[i][j]
    return _linear(n, out)


@lru_cache(maxsize=None)
def _psi_cached(m: int) -> Poly:
    datum = build_root_datum("E", 7)
    data = load_cases()["E7/7"]["alpha_data"]
    xs = [_alpha_to_omega(datum, data[f"x_{i}"]) for i in range(1, 7)]
    x = _alpha_to_omega(datum, data["x"])
    summands = [xi + x for xi in xs] + [xi - x for xi in xs]
    summands += [-xs[i] - xs[j] for i in range(6) for j in range(i + 1, 6)]
    assert len(summands) == 27
    total = Poly.zero(omega_vars(7))
    for s in summands:
        total = total + s ** m
    return total


def e6_psi(m: int) -> Poly:
    """``psi_m = sum a_i^m + sum b_i^m + sum_{i<j} c_ij^m`` in omega-variables of E7."""
    if m not in PSI_DEGREES:
        raise ValueError(f"psi_m is defined for m in {PSI_DEGREES}, not {m}")
    return _psi_cached(m)


_NAME_RE = re.compile(r"^(y|Theta|omega|psi|x)_(\d+)$")


def evaluate_label(label: str, n: int, y_defs: Mapping[str, Poly] | None = None) -> Poly:
    """Polynomial in ``w1..wn`` named by a generator label."""
    y_defs = y_defs or {}
    src = label.replace("^", "**").replace("psi_{12}", "psi_12")
    src = re.sub(r"\{(\d+)\}", r"\1", src)
    tree = ast.parse(src, mode="eval")
    vars_ = omega_vars(n)

    def name(nm: str) -> Poly:
        m = _NAME_RE.match(nm)
        if not m:
            raise ValueError(f"unknown symbol {nm!r} in {label!r}")
        kind, idx = m.group(1), int(m.group(2))
        if kind == "y":
            return y_defs[nm]
        if kind in ("Theta", "omega"):
            return Poly.var(vars_, idx - 1)
        if kind == "psi":
            if n != 7:
                raise ValueError("psi_m lives in E7")
            return e6_psi(idx)
        if kind == "x":
            # G2 lattice basis x_1 = omega_1, x_2 = omega_2 - omega_1
            return Poly.var(vars_, 0) if idx == 1 else Poly.var(vars_, 1) - Poly.var(vars_, 0)
        raise ValueError(nm)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            return name(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(b, Poly):
                    raise ValueError("division by a polynomial")
                return a / b
            if isinstance(node.op, ast.Pow):
                if not isinstance(b, Fraction) or b.denominator != 1:
                    raise ValueError("exponent must be an integer")
                return a ** int(b)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            m = re.match(r"^e_(\d+)$", node.func.id)
            if not m:
                raise ValueError(f"unknown function {node.func.id!r}")
            args = [ev(a) for a in node.args]
            args = [a if isinstance(a, Poly) else Poly.const(vars_, a) for a in args]
            return elementary_symmetric(int(m.group(1)), args)
        raise ValueError(f"unsupported syntax in {label!r}")

    out = ev(tree)
    return out if isinstance(out, Poly) else Poly.const(vars_, out)


def case_generators(group: str, r: int) -> GeneratorFamily:
    key = f"{group.upper()}/{r}"
    cases = load_cases()
    if key not in cases:
        raise UnknownCaseError(f"no tabulated case {key}")
    c = cases[key]
    datum = build_root_datum(group[0].upper(), int(group[1:]))
    n = datum.rank
    y_defs = {name: _linear(n, v) for name, v in c["y_defs"].items()}
    gens = tuple((label, evaluate_label(label, n, y_defs)) for label in c["generators"])
    rels = {}
    for name, coeffs in c["relations"].items():
        p = Poly.zero(omega_vars(n))
        for y, a in coeffs.items():
            p = p + y_defs[y] * a
        rels[name] = p
    scales = {k: Fraction(v) for k, v in c.get("scales", {}).items()}
    return GeneratorFamily(group.upper(), r, y_defs, gens, rels, scales)


# --------------------------------------------------------------------------
# reflections

def reflect_poly(datum: RootDatum, j: int, p: Poly) -> Poly:
    """``s_j`` acting on a polynomial in omega-variables: ``omega_j -> omega_j - alpha_j``."""
    n = datum.rank
    j0 = j - 1
    col = [datum.cartan[r][j0] for r in range(n)]
    vars_ = p.variables
    # (omega_j - alpha_j) = (1 - C[j][j]) omega_j - sum_{r != j} C[r][j] omega_r = -omega_j - ...
    image = Poly.var(vars_, j0) - Poly.linear(vars_, col)
    powers = [Poly.one(vars_)]
    by_power: dict[int, dict[tuple, Fraction]] = {}
    for e, c in p.terms.items():
        a = e[j0]
        rest = list(e)
        rest[j0] = 0
        by_power.setdefault(a, {})[tuple(rest)] = c
    out = Poly.zero(vars_)
    for a in sorted(by_power):
        while len(powers) <= a:
            powers.append(powers[-1] * image)
        out = out + Poly(vars_, by_power[a], _trusted=True) * powers[a]
    return out


def check_invariance(datum: RootDatum, r, p: Poly) -> InvarianceResult:
    """Pass iff ``s_j p = p`` for every Levi node ``j`` (all ``j`` not in ``r``)."""
    nodes = {r} if isinstance(r, int) else set(r or ())
    for j in range(1, datum.rank + 1):
        if j in nodes:
            continue
        diff = reflect_poly(datum, j, p) - p
        if diff:
            return InvarianceResult(False, j, diff)
    return InvarianceResult(True)


# --------------------------------------------------------------------------
# type D

def delta_in_omega(n: int) -> list[list[Fraction]]:
    """Diagonal characters delta_1..delta_n of SO(2n) in omega-coordinates."""
    from .springer import type_d_diagonal_basis

    return [list(v) for v in type_d_diagonal_basis(n).characters]


@dataclass(frozen=True)
class DnLeviGenerators:
    """Generators for the Levi ``GL(n-k) x SO(2k)`` of ``P_{n-k}`` in ``D_n``.

    ``tbar`` holds the diagonal coordinates as linear forms in omega-variables.
    """

    n: int
    k: int
    tbar: tuple[Poly, ...]
    so_generators: tuple[tuple[str, Poly], ...]
    gl_generators: tuple[tuple[str, Poly], ...]

    @property
    def parabolic_node(self) -> int:
        return self.n - self.k

    def all_generators(self):
        return self.gl_generators + self.so_generators


def dn_levi_generators(n: int, k: int) -> DnLeviGenerators:
    if n < 4 or not 2 <= k <= n - 1:
        raise ValueError(f"need n >= 4 and 2 <= k <= n-1, got (n, k) = ({n}, {k})")
    tb = tuple(_linear(n, v) for v in delta_in_omega(n))
    so_vars = tb[n - k:]
    sq = [t * t for t in so_vars]
    so = [(f"e_{i}(tbar^2_{n - k + 1}..{n})", elementary_symmetric(i, sq)) for i in range(1, k + 1)]
    odd = so_vars[0]
    for t in so_vars[1:]:
        odd = odd * t
    so.append((f"tbar_{n - k + 1}..tbar_{n}", odd))
    gl_vars = tb[: n - k]
    gl = [(f"e_{i}(tbar_1..{n - k})", elementary_symmetric(i, gl_vars)) for i in range(1, n - k + 1)]
    return DnLeviGenerators(n, k, tb, tuple(so), tuple(gl))


def _omega_to_delta_poly(n: int, p: Poly) -> Poly:
    """Rewrite a polynomial in omega-variables in the delta-coordinates ``d1..dn``."""
    # omega_j = delta_1 + ... + delta_j (j <= n-2); omega_{n-1}, omega_n are half-spin
    dv = tuple(f"d{i + 1}" for i in range(n))
    D = [Poly.var(dv, i) for i in range(n)]
    om = []
    for j in range(1, n + 1):
        if j <= n - 2:
            s = Poly.zero(dv)
            for i in range(j):
                s = s + D[i]
            om.append(s)
        else:
            s = Poly.zero(dv)
            for i in range(n - 1):
                s = s + D[i]
            om.append((s - D[n - 1]) / 2 if j == n - 1 else (s + D[n - 1]) / 2)
    from .polyalg import substitute

    return substitute(p, dict(zip(p.variables, om)))


def signed_permutation_check(n: int, k: int, p: Poly) -> bool:
    """Independent check of W_L-invariance for ``P_{n-k}`` in ``D_n``.

    Acts by the signed-permutation model on delta-coordinates: every
    permutation of the first ``n-k`` coordinates, and on the last ``k`` every
    permutation combined with an even number of sign changes.
    """
    q = _omega_to_delta_poly(n, p)
    m = n - k
    base = {}
    for e, c in q.terms.items():
        base[e] = c
    for perm_a in permutations(range(m)):
        for perm_b in permutations(range(k)):
            for signs in product((1, -1), repeat=k):
                if signs.count(-1) % 2:
                    continue
                img: dict[tuple, Fraction] = {}
                for e, c in q.terms.items():
                    e2 = [0] * n
                    sign = 1
                    for i in range(m):
                        e2[perm_a[i]] = e[i]
                    for i in range(k):
                        e2[m + perm_b[i]] = e[m + i]
                        if signs[i] < 0 and e[m + i] % 2:
                            sign = -sign
                    img[tuple(e2)] = img.get(tuple(e2), 0) + sign * c
                img = {e: c for e, c in img.items() if c}
                if img != base:
                    return False
    return True


# --------------------------------------------------------------------------
# Reynolds fallback

def _levi_elements(datum: RootDatum, r: int) -> list:
    """All elements of W_L as action matrices, generated by the Levi reflections."""
    W = weyl_group(datum)
    n = datum.rank
    gens = [W._refl[j] for j in range(n) if j + 1 != r]
    ident = tuple(tuple(int(a == b) for b in range(n)) for a in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for S in gens:
                P = tuple(tuple(sum(S[a][c] * M[c][b] for c in range(n)) for b in range(n)) for a in range(n))
                if P not in seen:
                    seen.add(P)
                    nxt.append(P)
        frontier = nxt
    return list(seen)


def _rank(vectors: list[dict]) -> int:
    """Rank over Q of a list of sparse vectors."""
    pivots: dict = {}
    rank = 0
    for v in vectors:
        v = dict(v)
        while v:
            key = max(v)
            if key in pivots:
                pv = pivots[key]
                f = v[key] / pv[key]
                for kk, c in pv.items():
                    nv = v.get(kk, 0) - f * c
                    if nv:
                        v[kk] = nv
                    else:
                        v.pop(kk, None)
            else:
                pivots[key] = v
                rank += 1
                break
    return rank


def _monomials(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _monomials(n - 1, d - a):
            yield (a,) + rest


def reynolds_dimension(datum: RootDatum, r: int, degree: int) -> int:
    """``dim S^d(t*)^{W_L}`` by averaging every degree-d monomial over W_L.

    The group acts on omega-coordinates through the transpose of its action
    on weights; a linear form ``sum c_i omega_i`` is sent to ``sum c_i (w omega_i)``.
    """
    n = datum.rank
    vars_ = omega_vars(n)
    elements = _levi_elements(datum, r)
    images = []
    for M in elements:
        # w(omega_i) = column i of M, expressed in omega-coordinates
        images.append([Poly.linear(vars_, [M[a][i] for a in range(n)]) for i in range(n)])
    avgs = []
    for e in _monomials(n, degree):
        total: dict[tuple, Fraction] = {}
        for img in images:
            p = Poly.one(vars_)
            for i, k in enumerate(e):
                if k:
                    p = p * img[i] ** k
            for kk, c in p.terms.items():
                total[kk] = total.get(kk, 0) + c
        avgs.append({kk: c for kk, c in total.items() if c})
    return _rank(avgs)


def library_dimension(family: GeneratorFamily, degree: int) -> int:
    """Dimension of the degree-d span of products of the family's generators."""
    gens = [(p, min(p.degrees())) for _, p in family.generators if p.is_homogeneous() and p]
    n = family.datum.rank
    vars_ = omega_vars(n)
    out = []

    def rec(i, remaining, acc):
        if remaining == 0:
            out.append(dict(acc.terms))
            return
        if i == len(gens):
            return
        p, d = gens[i]
        k = 0
        cur = acc
        while k * d <= remaining:
            rec(i + 1, remaining - k * d, cur)
            cur = cur * p
            k += 1

    rec(0, degree, Poly.one(vars_))
    return _rank(out)
