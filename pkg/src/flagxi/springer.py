"""Weight systems and the Springer morphism restricted to the maximal torus.

For an irreducible representation V(lambda) the trace form on the Cartan
subalgebra is ``B(x, y) = sum_mu mult(mu) mu(x) mu(y)``.  The torus map
``theta(t)`` is the unique element of the Cartan subalgebra with

    B(theta(t), h) = sum_mu mult(mu) t^mu mu(h)    for all h,

so its coordinates in the simple-coroot basis solve a linear system whose
matrix is the trace form.  Coordinates are Laurent polynomials in torus
variables ``t_1..t_l`` where ``t_k = t(x_k)`` for a chosen lattice basis
``x_1..x_l`` of the weight lattice (the "basis config").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyalg import LaurentPoly
from .rootsys import RootDatum, build_root_datum, _mat_inverse

__all__ = [
    "WeightSystem",
    "TorusMap",
    "BasisConfig",
    "weight_system",
    "weyl_dimension",
    "trace_form",
    "theta_torus",
    "standard_basis",
    "g2_basis",
    "type_d_diagonal_basis",
    "DegenerateFormError",
    "group_theta",
    "EXCEPTIONAL_CASES",
]


class DegenerateFormError(ValueError):
    """The trace form is singular (representation not almost faithful)."""


@dataclass(frozen=True)
class WeightSystem:
    datum: RootDatum
    highest_weight: tuple[int, ...]
    entries: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, mu) -> int:
        return dict(self.entries).get(tuple(mu), 0)


def weyl_dimension(datum: RootDatum, lam: Sequence[int]) -> int:
    lr = tuple(l + 1 for l in lam)
    num = Fraction(1)
    for cv in datum.positive_coroots:
        num *= Fraction(sum(a * b for a, b in zip(lr, cv)), sum(cv))
    assert num.denominator == 1
    return int(num)


def weight_system(datum: RootDatum, lam: Sequence[int]) -> WeightSystem:
    """Weights and multiplicities of V(lam) by Freudenthal's recursion."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != datum.rank or any(x < 0 for x in lam):
        raise ValueError(f"highest weight {lam} is not dominant integral")
    n = datum.rank
    rho = datum.rho
    roots_w = [datum.root_to_weight(b) for b in datum.positive_roots]
    lr = tuple(a + b for a, b in zip(lam, rho))
    top = datum.inner(lr, lr)

    mult: dict[tuple, int] = {lam: 1}
    layer = [lam]
    order = [lam]
    while layer:
        candidates = set()
        for mu in layer:
            for i in range(n):
                candidates.add(tuple(x - datum.cartan[r][i] for r, x in enumerate(mu)))
        nxt = []
        # candidates in one layer share the same depth below lam
        for mu in sorted(candidates):
            if mu in mult:
                continue
            mr = tuple(a + b for a, b in zip(mu, rho))
            denom = top - datum.inner(mr, mr)
            if denom <= 0:
                continue
            acc = Fraction(0)
            for a in roots_w:
                k = 1
                while True:
                    nu = tuple(x + k * y for x, y in zip(mu, a))
                    m = mult.get(nu)
                    if m is None:
                        break
                    acc += m * datum.inner(nu, a)
                    k += 1
            val = 2 * acc / denom
            assert val.denominator == 1, (mu, val)
            if val > 0:
                mult[mu] = int(val)
                nxt.append(mu)
                order.append(mu)
        layer = nxt
    entries = tuple((mu, mult[mu]) for mu in order)
    ws = WeightSystem(datum, lam, entries)
    expected = weyl_dimension(datum, lam)
    if ws.dimension != expected:
        raise AssertionError(f"Freudenthal dimension {ws.dimension} != Weyl dimension {expected}")
    return ws


def trace_form(ws: WeightSystem) -> list[list[Fraction]]:
    """Matrix ``B(alpha_i^vee, alpha_j^vee) = sum mult * mu_i * mu_j``."""
    n = ws.datum.rank
    B = [[Fraction(0)] * n for _ in range(n)]
    for mu, m in ws.entries:
        for i in range(n):
            if mu[i]:
                for j in range(n):
                    B[i][j] += m * mu[i] * mu[j]
    return B


@dataclass(frozen=True)
class BasisConfig:
    """Characters ``x_k`` (omega-coordinates) defining torus coordinates ``t_k = t(x_k)``."""

    name: str
    characters: tuple[tuple[Fraction, ...], ...]
    variables: tuple[str, ...]

    def to_dict(self):
        return {
            "name": self.name,
            "characters": [[str(c) for c in x] for x in self.characters],
            "variables": list(self.variables),
        }


def standard_basis(datum: RootDatum) -> BasisConfig:
    n = datum.rank
    chars = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    return BasisConfig("fundamental", chars, tuple(f"t{i + 1}" for i in range(n)))


def g2_basis() -> BasisConfig:
    return BasisConfig(
        "g2-short",
        ((Fraction(1), Fraction(0)), (Fraction(-1), Fraction(1))),
        ("t1", "t2"),
    )


def type_d_diagonal_basis(n: int) -> BasisConfig:
    """delta_1..delta_n (diagonal torus characters of SO(2n)) in omega-coordinates."""
    chars = []
    for j in range(1, n + 1):
        v = [Fraction(0)] * n
        if j == 1:
            v[0] = Fraction(1)
        elif j <= n - 2:
            v[j - 1] += 1
            v[j - 2] -= 1
        elif j == n - 1:
            v[n - 2] += 1
            v[n - 1] += 1
            v[n - 3] -= 1
        else:
            v[n - 1] += 1
            v[n - 2] -= 1
        chars.append(tuple(v))
    return BasisConfig("diagonal", tuple(chars), tuple(f"t{i + 1}" for i in range(n)))


@dataclass(frozen=True)
class TorusMap:
    """Coordinates of theta(t) in the simple-coroot basis."""

    coordinates: tuple[LaurentPoly, ...]
    basis_config: BasisConfig

    def to_text(self) -> list[str]:
        return [c.to_text() for c in self.coordinates]


def _solve(B, rhs):
    Binv = _mat_inverse(B)
    n = len(B)
    return [sum((rhs[j] * Binv[i][j] for j in range(n) if Binv[i][j]), rhs[0] * 0)
            for i in range(n)]


def theta_torus(ws: WeightSystem, basis_config: BasisConfig | None = None) -> TorusMap:
    datum = ws.datum
    n = datum.rank
    if basis_config is None:
        basis_config = standard_basis(datum)
    B = trace_form(ws)
    if _det(B) == 0:
        raise DegenerateFormError("trace form is singular; representation not almost faithful")
    # weight -> exponents in the chosen character basis
    X = [[basis_config.characters[k][i] for k in range(n)] for i in range(n)]  # columns x_k
    Xinv = _mat_inverse(X)
    vars_ = basis_config.variables
    rhs = [LaurentPoly.zero(vars_) for _ in range(n)]
    for mu, m in ws.entries:
        a = [sum(Xinv[k][i] * mu[i] for i in range(n)) for k in range(n)]
        if any(Fraction(x).denominator != 1 for x in a):
            raise ValueError(f"weight {mu} not in the lattice spanned by the basis config")
        mono = LaurentPoly(vars_, {tuple(int(x) for x in a): 1})
        for i in range(n):
            if mu[i]:
                rhs[i] = rhs[i] + mono * (m * mu[i])
    coords = _solve(B, rhs)
    return TorusMap(tuple(coords), basis_config)


def _det(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


# cases with the representation of minimal Dynkin index and their coordinate choice
EXCEPTIONAL_CASES = {
    "G2": ("G", 2, (1, 0), "g2"),
    "F4": ("F", 4, (0, 0, 0, 1), "fundamental"),
    "E6": ("E", 6, (1, 0, 0, 0, 0, 0), "fundamental"),
    "E7": ("E", 7, (0, 0, 0, 0, 0, 0, 1), "fundamental"),
}


def basis_for(name: str, datum: RootDatum) -> BasisConfig:
    if name == "g2":
        return g2_basis()
    if name == "diagonal":
        return type_d_diagonal_basis(datum.rank)
    return standard_basis(datum)


def group_theta(group: str, weight: Sequence[int] | None = None) -> TorusMap:
    """Torus map for a named group (``G2``, ``F4``, ``E6``, ``E7``, ``D5`` ...)."""
    group = group.upper()
    if group in EXCEPTIONAL_CASES:
        t, r, lam, basis = EXCEPTIONAL_CASES[group]
    else:
        t, r = group[0], int(group[1:])
        lam = tuple(int(i == 0) for i in range(r))
        basis = "diagonal" if t == "D" else "fundamental"
    datum = build_root_datum(t, r)
    if weight is not None:
        lam = tuple(weight)
    ws = weight_system(datum, lam)
    return theta_torus(ws, basis_for(basis, datum))
