"""Exact sparse multivariate (Laurent) polynomials over the rationals.

A polynomial lives in a fixed, ordered variable space.  Terms are stored as a
dict from exponent tuples to nonzero :class:`fractions.Fraction` coefficients.
``Poly`` forbids negative exponents; ``LaurentPoly`` allows them.  Both share
the arithmetic in :class:`_SparsePoly`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence, Union

Number = Union[int, Fraction]

__all__ = [
    "Poly",
    "LaurentPoly",
    "VariableSpaceError",
    "poly_arith",
    "elementary_symmetric",
    "complete_symmetric",
    "substitute",
    "parse_poly",
]


class VariableSpaceError(ValueError):
    """Raised when two operands live in different variable spaces."""


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class _SparsePoly:
    allow_negative = False
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Number] | None = None,
                 *, _trusted: bool = False):
        self.variables = tuple(variables)
        self._hash = None
        if _trusted:
            self.terms = terms  # type: ignore[assignment]
            return
        n = len(self.variables)
        clean: dict[tuple, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            if not self.allow_negative and any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}; use LaurentPoly")
            c = _frac(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables, {}, _trusted=True)

    @classmethod
    def const(cls, variables, c: Number):
        c = _frac(c)
        return cls(variables, {(0,) * len(tuple(variables)): c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, variables):
        return cls.const(variables, 1)

    @classmethod
    def var(cls, variables, name_or_index, power: int = 1):
        variables = tuple(variables)
        i = variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * len(variables)
        e[i] = power
        return cls(variables, {tuple(e): Fraction(1)})

    @classmethod
    def gens(cls, variables):
        return [cls.var(variables, i) for i in range(len(tuple(variables)))]

    @classmethod
    def linear(cls, variables, coeffs: Sequence[Number]):
        variables = tuple(variables)
        n = len(variables)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = _frac(c)
        return cls(variables, terms, _trusted=True)

    # basic protocol --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, _SparsePoly):
            if other.variables != self.variables:
                raise VariableSpaceError(f"{self.variables} vs {other.variables}")
            if type(other) is not type(self):
                # mixing Poly with LaurentPoly promotes to LaurentPoly
                if isinstance(self, LaurentPoly) or isinstance(other, LaurentPoly):
                    return LaurentPoly(other.variables, other.terms, _trusted=True)
            return other
        if isinstance(other, (int, Fraction)):
            return type(self).const(self.variables, other)
        return NotImplemented

    def _new(self, terms, other=None):
        cls = type(self)
        if other is not None and isinstance(other, LaurentPoly):
            cls = LaurentPoly
        return cls(self.variables, terms, _trusted=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self).const(self.variables, other)
        if not isinstance(other, _SparsePoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._new(out, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return self._new({})
            return self._new({e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, Fraction] = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return self._new({e: c for e, c in out.items() if c}, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _frac(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = type(self).one(self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # inspection ----------------------------------------------------------
    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def degree(self) -> int:
        """Total degree of the highest term (``-1`` for zero)."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, d: int):
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d})

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def evaluate(self, point: Sequence[Number]) -> Fraction:
        total = Fraction(0)
        pt = [_frac(p) for p in point]
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def map_coefficients(self, f):
        return self._new({e: f(c) for e, c in self.terms.items() if f(c)})

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    # serialization -------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!r})"


class Poly(_SparsePoly):
    """Polynomial with non-negative exponents."""

    allow_negative = False


class LaurentPoly(_SparsePoly):
    """Laurent polynomial: exponents may be negative."""

    allow_negative = True

    def invert_variables(self) -> "LaurentPoly":
        """Substitute ``t_i -> 1/t_i`` for every variable."""
        return LaurentPoly(self.variables, {tuple(-k for k in e): c for e, c in self.terms.items()},
                           _trusted=True)


def poly_arith(a, b, op: str):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def elementary_symmetric(i: int, exprs: Sequence[_SparsePoly]):
    """``e_i`` of the given expressions, all in one variable space."""
    exprs = list(exprs)
    if not exprs:
        raise ValueError("need at least one expression to fix the variable space")
    if not 0 <= i <= len(exprs):
        raise ValueError(f"e_{i} undefined for {len(exprs)} inputs")
    # e_j via the generating product prod(1 + z*y): dynamic programming over inputs
    cls = type(exprs[0])
    vars_ = exprs[0].variables
    e = [cls.one(vars_)] + [cls.zero(vars_)] * i
    for y in exprs:
        for j in range(min(i, len(exprs)), 0, -1):
            e[j] = e[j] + e[j - 1] * y
    return e[i]


def complete_symmetric(p: int, exprs: Sequence[_SparsePoly]):
    """Complete homogeneous symmetric polynomial ``h_p`` of the expressions."""
    exprs = list(exprs)
    if not exprs:
        raise ValueError("need at least one expression to fix the variable space")
    if p < 0:
        raise ValueError("p must be non-negative")
    cls = type(exprs[0])
    vars_ = exprs[0].variables
    h = [cls.one(vars_)] + [cls.zero(vars_)] * p
    for y in exprs:
        for j in range(1, p + 1):
            h[j] = h[j] + h[j - 1] * y
    return h[p]


def substitute(p: _SparsePoly, assignment: Mapping[str, _SparsePoly]):
    """Replace every variable of ``p`` by the assigned expression.

    All assigned expressions must share one target variable space.  Negative
    exponents are allowed only when the assigned expression is a monomial.
    """
    missing = [v for v in p.variables if v not in assignment]
    if missing:
        raise KeyError(f"unassigned variables: {missing}")
    images = [assignment[v] for v in p.variables]
    target_vars = images[0].variables if images else ()
    for im in images:
        if im.variables != target_vars:
            raise VariableSpaceError("assigned expressions live in different spaces")
    laurent = isinstance(p, LaurentPoly) or any(isinstance(im, LaurentPoly) for im in images)
    cls = LaurentPoly if laurent else Poly
    cache: dict[tuple[int, int], _SparsePoly] = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k >= 0:
                cache[key] = cls(target_vars, images[i].terms, _trusted=True) ** k
            else:
                if len(images[i].terms) != 1:
                    raise ValueError("negative power of a non-monomial")
                (e, c), = images[i].terms.items()
                inv = LaurentPoly(target_vars, {tuple(-a for a in e): 1 / c}, _trusted=True)
                cache[key] = inv ** (-k)
        return cache[key]

    total = cls.zero(target_vars)
    for e, c in p.terms.items():
        term = cls.const(target_vars, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        total = total + term
    return total


_TERM_RE = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_poly(text: str, variables: Sequence[str], laurent: bool = False):
    """Parse the canonical text form produced by :meth:`to_text`."""
    variables = tuple(variables)
    cls = LaurentPoly if laurent else Poly
    text = text.strip()
    if text == "0":
        return cls.zero(variables)
    # split on +/- that are not exponent signs
    tokens = re.split(r"(?<![\^*])\s*([+-])\s*", text)
    if tokens and tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    terms: dict[tuple, Fraction] = {}
    index = {v: i for i, v in enumerate(variables)}
    for sign, body in zip(tokens[::2], tokens[1::2]):
        coef = Fraction(1)
        exps = [0] * len(variables)
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor[0].isdigit():
                coef *= Fraction(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            exps[index[name]] += int(power) if power else 1
        if sign == "-":
            coef = -coef
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coef
    return cls(variables, terms)
