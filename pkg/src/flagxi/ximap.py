"""The map xi: generators of the polynomial representation ring to Schubert classes.

A generator is already a W_L-invariant polynomial in the omega-variables
(Theta_i pulls back to omega_i), so xi is the Borel map followed by the check
that the image lives on G/P.  ``report_section`` runs every tabulated row of
a group and compares against the frozen transcription in
``data/paper_tables.json``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .invariants import case_generators, dn_levi_generators
from .polyalg import Poly, complete_symmetric, elementary_symmetric
from .rootsys import RootDatum, build_root_datum, weyl_group
from .schubert import (
    SchubertClass,
    SupportError,
    borel_image,
    class_from_words,
    cup_product,
)

__all__ = [
    "XiRow",
    "ThetaReport",
    "theta_report",
    "XiReport",
    "SectionReport",
    "FunctorialityResult",
    "HomomorphismResult",
    "homomorphism_check",
    "load_paper_tables",
    "CorpusChecksumError",
    "paper_tables_checksum_ok",
    "xi_image",
    "report_parabolic",
    "report_section",
    "chern_quotient_D",
    "verify_theorem_xi_D",
    "functoriality_check",
    "DEFAULT_CEILINGS",
    "STATUSES",
]

log = logging.getLogger(__name__)

# generator-degree ceilings applied unless the caller opts in to more
DEFAULT_CEILINGS = {"G2": None, "F4": None, "E6": 10, "E7": 6}
STATUSES = ("match", "mismatch(paper)", "mismatch", "skipped")


class CorpusChecksumError(RuntimeError):
    """The transcribed tables do not match their recorded SHA-256."""


def _corpus_files(directory) -> tuple[str, str]:
    if directory is None:
        base = resources.files("flagxi").joinpath("data")
        return (base.joinpath("paper_tables.json").read_text(),
                base.joinpath("paper_tables.sha256").read_text())
    d = Path(directory)
    return (d / "paper_tables.json").read_text(), (d / "paper_tables.sha256").read_text()


@lru_cache(maxsize=None)
def load_paper_tables(directory: str | None = None) -> dict:
    """The frozen golden corpus; refuses to load if the checksum does not match."""
    text, digest = _corpus_files(directory)
    if hashlib.sha256(text.encode()).hexdigest() != digest.split()[0]:
        raise CorpusChecksumError(f"golden corpus checksum mismatch in {directory or 'package data'}")
    return json.loads(text)


def paper_tables_checksum_ok(directory: str | None = None) -> bool:
    try:
        load_paper_tables(None if directory is None else str(directory))
    except CorpusChecksumError:
        return False
    return True


@dataclass
class ThetaReport:
    group: str
    coordinates: list[dict]

    @property
    def ok(self) -> bool:
        return all(c["status"] == "match" for c in self.coordinates)

    def to_dict(self) -> dict:
        return {"group": self.group, "ok": self.ok, "coordinates": self.coordinates}


def theta_report(group: str, tables: dict | None = None) -> ThetaReport:
    """Compare every Laurent coefficient of the torus map with the transcribed table.

    A mismatching coordinate records the ratio printed/computed when the two
    differ by a constant factor.
    """
    from .springer import group_theta

    group = group.upper()
    table = (load_paper_tables() if tables is None else tables)["thetas"][group]
    tm = group_theta(group, table["weight"])
    coords = []
    for i, (mine, printed) in enumerate(zip(tm.coordinates, table["coordinates"])):
        theirs = {tuple(e): Fraction(c, printed["denominator"]) for e, c in printed["terms"]}
        entry = {"coordinate": i + 1, "terms": len(theirs), "computed": mine.to_text()}
        if mine.terms == theirs:
            entry["status"] = "match"
        else:
            entry["status"] = "mismatch(paper)"
            ratios = {theirs.get(e, Fraction(0)) / c for e, c in mine.terms.items()}
            if len(ratios) == 1 and set(theirs) == set(mine.terms):
                entry["factor"] = str(ratios.pop())
            entry["differing_terms"] = sum(1 for e in set(mine.terms) | set(theirs)
                                           if mine.terms.get(e) != theirs.get(e))
        coords.append(entry)
    return ThetaReport(group, coords)


def _datum(group: str) -> RootDatum:
    return build_root_datum(group[0].upper(), int(group[1:]))


# --------------------------------------------------------------------------
# rows and reports

@dataclass
class XiRow:
    r: int
    generator: str
    degree: int
    expression: str
    paper: list[dict]
    status: str
    image: SchubertClass | None = None
    cross_image: SchubertClass | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "parabolic": self.r,
            "generator": self.generator,
            "degree": self.degree,
            "image": self.image.to_rows() if self.image is not None else None,
            "cross_image": self.cross_image.to_rows() if self.cross_image is not None else None,
            "paper": _paper_text(self.paper),
            "paper_terms": self.paper,
            "status": self.status,
            "note": self.note,
        }


@dataclass
class XiReport:
    group: str
    r: int
    weight: tuple[int, ...]
    rows: list[XiRow] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for row in self.rows:
            out[row.status] += 1
        return out


@dataclass
class SectionReport:
    group: str
    reports: list[XiReport]

    @property
    def rows(self) -> list[XiRow]:
        return [row for rep in self.reports for row in rep.rows]

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for row in self.rows:
            out[row.status] += 1
        return out

    def all_match(self) -> bool:
        return all(row.status == "match" for row in self.rows)

    def to_dict(self) -> dict:
        return {"group": self.group, "counts": self.counts(), "rows": [r.to_dict() for r in self.rows]}

    def to_text(self) -> str:
        lines = []
        for rep in self.reports:
            lines.append(f"{self.group} P_{rep.r}")
            for row in rep.rows:
                img = row.image.to_text() if row.image is not None else "-"
                lines.append(f"  [{row.status}] {row.generator} -> {img}")
                if row.status != "match" and row.status != "skipped":
                    lines.append(f"      printed: {_paper_text(row.paper)}")
                    if row.note:
                        lines.append(f"      note: {row.note}")
        return "\n".join(lines)


def _paper_text(terms: Sequence[dict]) -> str:
    parts = []
    for t in terms:
        w = ",".join(map(str, t["word"]))
        parts.append(f"{t['coeff']}*eps_{w}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


# --------------------------------------------------------------------------
# xi itself

def _generator_poly(group: str, r: int, generator: str | Poly) -> Poly:
    if isinstance(generator, Poly):
        return generator
    return case_generators(group, r).generator(generator)


def xi_image(group: str, r, generator: str | Poly, *, engine: str = "chevalley",
             ceiling: int | None = None) -> SchubertClass:
    """``xi^{P_r}`` of a case-library generator (label) or an invariant polynomial."""
    datum = _datum(group)
    rr = r if not isinstance(r, (list, tuple, set, frozenset)) else next(iter(r))
    p = _generator_poly(group, rr, generator)
    return borel_image(datum, p, r, engine=engine, ceiling=ceiling)


def _theta_text(p: Poly) -> str:
    names = tuple(f"Theta_{i + 1}" for i in range(len(p.variables)))
    return Poly(names, p.terms, _trusted=True).to_text()


def _run_row(args) -> XiRow:
    group, r, label, paper_terms, ceiling, engine, cross_engine, length_ceiling = args
    datum = _datum(group)
    fam = case_generators(group, r)
    p = fam.generator(label)
    degree = max(p.degrees())
    row = XiRow(r, label, degree, _theta_text(p) if len(p) <= 40 else f"<{len(p)} terms>", paper_terms,
                "skipped")
    if ceiling is not None and degree > ceiling:
        row.note = f"generator degree {degree} above ceiling {ceiling}"
        return row
    try:
        image = borel_image(datum, p, r, engine=engine, ceiling=length_ceiling)
    except SupportError as exc:
        row.status = "mismatch"
        row.note = f"image not supported on W^P: {exc}"
        return row
    row.image = image
    if any(w.length != degree for w in image.support):
        row.status = "mismatch"
        row.note = "degree bookkeeping violated"
        return row
    try:
        printed = class_from_words(datum, [(t["word"], Fraction(t["coeff"])) for t in paper_terms], r)
    except ValueError as exc:
        printed = None
        row.note = f"printed word rejected: {exc}"
    if printed is not None and printed == image:
        row.status = "match"
        return row
    cross = borel_image(datum, p, r, engine=cross_engine, ceiling=length_ceiling)
    row.cross_image = cross
    if cross == image:
        row.status = "mismatch(paper)"
    else:
        row.status = "mismatch"
        row.note = (row.note + "; " if row.note else "") + "engines disagree"
    return row


def report_parabolic(group: str, r: int, degree_ceiling: int | None = None, *, engine: str = "chevalley",
                     cross_engine: str = "duan", length_ceiling: int | None = None,
                     workers: int = 1, tables: dict | None = None) -> XiReport:
    group = group.upper()
    tables = load_paper_tables() if tables is None else tables
    key = f"{group}/{r}"
    rows = tables["xi"][key]
    weight = tuple(tables["thetas"][group]["weight"])
    jobs = [(group, r, row["generator"], row["image"], degree_ceiling, engine, cross_engine, length_ceiling)
            for row in rows]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_row, jobs))
    else:
        results = [_run_row(j) for j in jobs]
    for res in results:
        if res.status != "match":
            log.info("%s P_%d %s: %s", group, r, res.generator, res.status)
    return XiReport(group, r, weight, results)


def report_section(group: str, degree_ceiling: int | None = None, *, parabolics: Iterable[int] | None = None,
                   opt_in: bool = False, engine: str = "chevalley", cross_engine: str = "duan",
                   length_ceiling: int | None = None, workers: int = 1,
                   tables: dict | None = None) -> SectionReport:
    """Every tabulated row of a group, compared with the transcription.

    Without ``opt_in`` the group's default ceiling caps ``degree_ceiling``.
    """
    group = group.upper()
    if group not in DEFAULT_CEILINGS:
        raise ValueError(f"no tables for {group}")
    default = DEFAULT_CEILINGS[group]
    if not opt_in and default is not None:
        degree_ceiling = default if degree_ceiling is None else min(degree_ceiling, default)
    rank = _datum(group).rank
    rs = list(parabolics) if parabolics is not None else list(range(1, rank + 1))
    reports = [report_parabolic(group, r, degree_ceiling, engine=engine, cross_engine=cross_engine,
                                length_ceiling=length_ceiling, workers=workers, tables=tables) for r in rs]
    return SectionReport(group, reports)


# --------------------------------------------------------------------------
# type D

def _check_nk(n: int, k: int):
    if n < 4 or not 2 <= k <= n - 1:
        raise ValueError(f"need n >= 4 and 2 <= k <= n-1, got ({n}, {k})")


@lru_cache(maxsize=None)
def chern_quotient_D(n: int, k: int) -> tuple[SchubertClass, ...]:
    """Chern classes ``c_0..c_{n+k}`` of the tautological quotient on ``OG(n-k, 2n)``.

    ``c(Q) = 1 / prod_{p <= n-k} (1 - x_p)``, so ``c_p = beta(h_p(delta_1..delta_{n-k}))``.
    """
    _check_nk(n, k)
    datum = build_root_datum("D", n)
    gens = dn_levi_generators(n, k)
    first = list(gens.tbar[: n - k])
    r = n - k
    out = []
    for p in range(n + k + 1):
        h = complete_symmetric(p, first)
        out.append(borel_image(datum, h, r))
    return tuple(out)


def verify_theorem_xi_D(n: int, k: int, i: int) -> bool:
    """``beta(e_i(tbar^2_{n-k+1..n})) == c_i^2 + 2 sum_j (-1)^j c_{i+j} c_{i-j}`` in H*(OG)."""
    _check_nk(n, k)
    if not 0 <= i <= k:
        raise ValueError(f"i must lie in 0..{k}")
    datum = build_root_datum("D", n)
    gens = dn_levi_generators(n, k)
    sq = [t * t for t in gens.tbar[n - k:]]
    lhs = borel_image(datum, elementary_symmetric(i, sq), n - k)
    c = chern_quotient_D(n, k)

    def cc(p):
        return c[p] if p < len(c) else SchubertClass(c[0].space_tag, {})

    rhs = cup_product(cc(i), cc(i))
    for j in range(1, i + 1):
        term = cup_product(cc(i + j), cc(i - j)).scale(2 * (-1) ** j)
        rhs = rhs + term
    return lhs == rhs


# --------------------------------------------------------------------------
# functoriality

@dataclass
class FunctorialityResult:
    ok: bool
    checked: int
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def functoriality_check(group: str, p_nodes: Iterable[int] | None, q_nodes: Iterable[int],
                        generators: Sequence[tuple[str, Poly]] | None = None) -> FunctorialityResult:
    """xi^P and xi^Q agree on W_Q-invariant generators when ``P`` is inside ``Q``.

    Parabolics are named by their removed nodes, so ``P <= Q`` means
    ``nodes(P) >= nodes(Q)``; ``p_nodes=None`` is the Borel subgroup.
    """
    datum = _datum(group)
    all_nodes = frozenset(range(1, datum.rank + 1))
    P = all_nodes if p_nodes is None else frozenset(p_nodes)
    Q = frozenset(q_nodes)
    if not Q <= P:
        raise ValueError(f"parabolic with nodes {sorted(P)} is not contained in the one with nodes {sorted(Q)}")
    if generators is None:
        if len(Q) != 1:
            raise ValueError("generators must be supplied for non-maximal Q")
        (r,) = Q
        generators = case_generators(group, r).generators
    failures = []
    W = weyl_group(datum)
    for label, f in generators:
        on_p = borel_image(datum, f, P)
        on_q = borel_image(datum, f, Q)
        if on_p.support != on_q.support:
            failures.append(f"{label}: {on_p.to_text()} vs {on_q.to_text()}")
        elif any(not W.is_min_coset_rep(w.rho_image, Q) for w in on_p.support):
            failures.append(f"{label}: pullback not indexed by W^Q")
    return FunctorialityResult(not failures, len(generators), failures)


# --------------------------------------------------------------------------
# ring-homomorphism law

@dataclass
class HomomorphismResult:
    ok: bool
    pairs: list[tuple[str, str]]
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def homomorphism_check(group: str, samples: int = 20, *, seed: int = 0, max_degree: int = 6,
                       engine: str = "chevalley") -> HomomorphismResult:
    """``xi(f g) == xi(f) xi(g)`` on randomly drawn pairs of case-library generators.

    Pairs are drawn over all parabolics of the group with ``deg f + deg g``
    capped at ``max_degree``; the product is taken in H*(G/B) and compared
    with xi of the polynomial product.
    """
    group = group.upper()
    datum = _datum(group)
    pool = []
    for r in range(1, datum.rank + 1):
        fam = case_generators(group, r)
        for label, p in fam.generators:
            pool.append((r, label, p, max(p.degrees())))
    rng = random.Random(seed)
    pairs, failures = [], []
    candidates = [(a, b) for a in pool for b in pool
                  if a[0] == b[0] and a[3] + b[3] <= max_degree]
    if not candidates:
        raise ValueError(f"no generator pairs of total degree <= {max_degree} for {group}")
    picks = rng.sample(candidates, samples) if samples <= len(candidates) else \
        [rng.choice(candidates) for _ in range(samples)]
    for (r, la, pa, _), (_, lb, pb, _) in picks:
        lhs = borel_image(datum, pa * pb, r)
        rhs = cup_product(borel_image(datum, pa, r), borel_image(datum, pb, r), engine=engine)
        pairs.append((la, lb))
        if lhs != rhs:
            failures.append(f"P_{r}: {la} * {lb}: {lhs.to_text()} vs {rhs.to_text()}")
    return HomomorphismResult(not failures, pairs, failures)
