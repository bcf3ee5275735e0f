"""Command-line driver.

    flagxi theta   --group F4 [--weight omega4]
    flagxi duan    --group A3 --u 1 --v 2,1 --w 1,2,1
    flagxi xi      --group G2 [--parabolic 1] [--degree-ceiling N] [--opt-in]
    flagxi ogring  --k 2 --n 4 --hilbert
    flagxi ogring  --k 2 --stable --trunc 8 --mod2-injectivity
    flagxi verify  --suite rank3-engines
    flagxi selftest

Exit status: 0 when every compared item matches, 1 when something does not,
2 for usage errors and a corrupted golden corpus (nothing is computed then).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

log = logging.getLogger("flagxi")

COMMANDS = ("theta", "duan", "xi", "ogring", "verify", "selftest")
FORMATS = ("text", "json")
ENGINES = ("chevalley", "bgg", "duan")
TABLE_GROUPS = ("G2", "F4", "E6", "E7")
SUITES = ("rank3-engines", "golden", "theta-tables", "weyl", "type-d", "ogring", "invariance",
          "structure")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    weight: str | None = None
    parabolics: list[int] | None = None
    degree_ceiling: int | None = None
    length_ceiling: int | None = None
    opt_in: bool = False
    engine: str = "chevalley"
    cross_engine: str = "duan"
    cache: str | None = None
    fmt: str = "text"
    workers: int = 1
    # duan
    u: str | None = None
    v: str | None = None
    w: str | None = None
    word: str | None = None
    # ogring
    k: int | None = None
    n: int | None = None
    stable: bool = False
    trunc: int | None = None
    hilbert: bool = False
    mod2_injectivity: bool = False
    field_: str = "QQ"
    # verify
    suite: str | None = None
    corpus_dir: str | None = None

    def validate(self):
        """Reject bad selectors before any computation starts."""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise UsageError(f"unknown format {self.fmt!r}")
        for name in ("degree_ceiling", "length_ceiling", "trunc"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        for name in ("engine", "cross_engine"):
            if getattr(self, name) not in ENGINES:
                raise UsageError(f"unknown engine {getattr(self, name)!r}")
        if self.group is not None:
            self.group = self.group.upper()
            _parse_group(self.group)
        if self.command in ("theta", "xi", "duan") and self.group is None:
            raise UsageError(f"{self.command} needs --group")
        if self.command == "xi":
            if self.group not in TABLE_GROUPS:
                raise UsageError(f"no tables for {self.group}; choose from {', '.join(TABLE_GROUPS)}")
            rank = _parse_group(self.group)[1]
            for r in self.parabolics or ():
                if not 1 <= r <= rank:
                    raise UsageError(f"parabolic {r} out of range 1..{rank}")
        if self.command == "theta" and self.weight is not None:
            _parse_weight(self.weight, _parse_group(self.group)[1])
        if self.command == "duan":
            if self.word is None and None in (self.u, self.v, self.w):
                raise UsageError("duan needs --u, --v, --w or --word")
            for s in (self.u, self.v, self.w, self.word):
                if s is not None:
                    _parse_word(s)
        if self.command == "ogring":
            if self.k is None or self.k < 2:
                raise UsageError("ogring needs --k >= 2")
            if not self.stable and (self.n is None or self.n < self.k + 2):
                raise UsageError("ogring needs --n >= k + 2 or --stable")
            if self.field_ not in ("QQ", "GF2"):
                raise UsageError("--field must be QQ or GF2")
        if self.command == "verify" and self.suite not in SUITES:
            raise UsageError(f"--suite must be one of {', '.join(SUITES)}")


@dataclass
class RunResult:
    code: int
    payload: dict
    text: str = ""

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True)
        return self.text


# --------------------------------------------------------------------------
# parsing helpers

def _parse_group(g: str) -> tuple[str, int]:
    if len(g) < 2 or g[0] not in "ABCDEFG" or not g[1:].isdigit():
        raise UsageError(f"bad group {g!r}; expected e.g. G2, F4, E6, D5")
    from .rootsys import build_root_datum

    try:
        build_root_datum(g[0], int(g[1:]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return g[0], int(g[1:])


def _parse_weight(s: str, rank: int) -> tuple[int, ...]:
    s = s.strip().lower()
    if s.startswith("omega"):
        i = s[5:].lstrip("_")
        if not i.isdigit() or not 1 <= int(i) <= rank:
            raise UsageError(f"bad weight {s!r}")
        return tuple(int(j == int(i) - 1) for j in range(rank))
    try:
        vals = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"bad weight {s!r}") from None
    if len(vals) != rank or any(v < 0 for v in vals):
        raise UsageError(f"weight {s!r} must have {rank} nonnegative entries")
    return vals


def _parse_word(s: str) -> tuple[int, ...]:
    s = s.strip()
    if s in ("", "e"):
        return ()
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"bad word {s!r}; expected comma-separated indices") from None


def _datum(group: str):
    from .rootsys import build_root_datum

    t, r = _parse_group(group)
    return build_root_datum(t, r)


def _cache(cfg: RunConfig):
    path = cfg.cache or os.environ.get("FLAGXI_CACHE")
    if not path:
        return None
    from .schubert import ConstantCache

    return ConstantCache(path)


# --------------------------------------------------------------------------
# commands

def _cmd_theta(cfg: RunConfig) -> RunResult:
    from .springer import group_theta
    from .ximap import load_paper_tables, theta_report

    rank = _parse_group(cfg.group)[1]
    weight = _parse_weight(cfg.weight, rank) if cfg.weight else None
    tm = group_theta(cfg.group, weight)
    lines = [f"{cfg.group} torus map, basis {tm.basis_config.name}"]
    for i, c in enumerate(tm.to_text(), 1):
        lines.append(f"  Theta_{i} = {c}")
    payload = {"group": cfg.group, "basis": tm.basis_config.to_dict(), "coordinates": tm.to_text()}
    code = EXIT_OK
    if cfg.group in TABLE_GROUPS:
        tables = load_paper_tables(cfg.corpus_dir)
        table_weight = tuple(tables["thetas"][cfg.group]["weight"])
        if weight is None or weight == table_weight:
            rep = theta_report(cfg.group, tables)
            payload["comparison"] = rep.to_dict()
            for c in rep.coordinates:
                extra = f" (printed = {c['factor']} x computed)" if "factor" in c else ""
                lines.append(f"  [{c['status']}] coordinate {c['coordinate']}{extra}")
            code = EXIT_OK if rep.ok else EXIT_MISMATCH
    return RunResult(code, payload, "\n".join(lines))


def _cmd_duan(cfg: RunConfig) -> RunResult:
    from .rootsys import weyl_group
    from .schubert import DegreeMismatch, duan_matrix, structure_constant

    datum = _datum(cfg.group)
    W = weyl_group(datum)
    if cfg.word is not None:
        try:
            A = duan_matrix(datum, _parse_word(cfg.word))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        word = A.word
        rows = [list(r) for r in A.entries]
        text = "\n".join(" ".join(f"{x:3d}" for x in row) for row in rows)
        return RunResult(EXIT_OK, {"group": cfg.group, "word": list(word), "matrix": rows}, text)
    try:
        u, v, w = (W.from_word(_parse_word(s), require_reduced=True) for s in (cfg.u, cfg.v, cfg.w))
        c = structure_constant(datum, u, v, w, cache=_cache(cfg), ceiling=cfg.length_ceiling)
    except (DegreeMismatch, ValueError) as exc:
        raise UsageError(str(exc)) from None
    payload = {"group": cfg.group, "u": list(u.word), "v": list(v.word), "w": list(w.word), "value": int(c)}
    return RunResult(EXIT_OK, payload, f"c^{w.word_str()}_{{{u.word_str()},{v.word_str()}}} = {c}")


def _section_code(rows) -> int:
    return EXIT_OK if all(r.status in ("match", "skipped") for r in rows) else EXIT_MISMATCH


def _cmd_xi(cfg: RunConfig) -> RunResult:
    from .ximap import load_paper_tables, report_section

    tables = load_paper_tables(cfg.corpus_dir)
    rep = report_section(cfg.group, cfg.degree_ceiling, parabolics=cfg.parabolics, opt_in=cfg.opt_in,
                         engine=cfg.engine, cross_engine=cfg.cross_engine,
                         length_ceiling=cfg.length_ceiling, workers=cfg.workers, tables=tables)
    text = rep.to_text() + "\n" + " ".join(f"{k}={v}" for k, v in rep.counts().items())
    return RunResult(_section_code(rep.rows), rep.to_dict(), text)


def _cmd_ogring(cfg: RunConfig) -> RunResult:
    from .ogring import build_ring, coset_count_D, mod2_injectivity_check, tau_count

    k = cfg.k
    payload: dict = {"k": k}
    lines = []
    code = EXIT_OK
    if cfg.stable:
        if cfg.mod2_injectivity:
            rep = mod2_injectivity_check(k, cfg.trunc)
            payload["mod2_injectivity"] = rep.to_dict()
            for d in rep.degrees:
                lines.append(f"  weight {d['weight']:2d}: source {d['source_dim']}, target {d['target_dim']}, "
                             f"rank {d['rank']}{'' if d['injective'] else '  NOT INJECTIVE'}")
            lines.append(f"generator images mod 2: {'ok' if rep.generator_images_ok else 'FAIL'}; "
                         f"parity core on {rep.parity_samples} samples: {'ok' if rep.parity_ok else 'FAIL'}")
            code = EXIT_OK if rep.ok else EXIT_MISMATCH
        if cfg.hilbert or not cfg.mod2_injectivity:
            ring = build_ring(k, kind="stable", truncation=cfg.trunc, field_=cfg.field_)
            h = ring.hilbert()
            payload["hilbert"] = h
            lines.append(f"stable ring k={k} up to weight {ring.truncation}: {h}")
    else:
        n = cfg.n
        ring = build_ring(k, n, field_=cfg.field_)
        h = ring.hilbert()
        expected = [tau_count(k, n, m) for m in range(len(h))]
        relations_ok = all(not ring.element(p) for _, p in ring.relations)
        total_ok = sum(h) == coset_count_D(n, k)
        payload.update({"n": n, "hilbert": h, "tau_counts": expected, "total": sum(h),
                        "coset_count": coset_count_D(n, k), "relations_vanish": relations_ok})
        lines.append(f"H*(OG({n - k},{2 * n})) graded dimensions: {h}")
        lines.append(f"total {sum(h)}, |W^P| = {coset_count_D(n, k)}, relations vanish: {relations_ok}")
        code = EXIT_OK if h == expected and total_ok and relations_ok else EXIT_MISMATCH
    return RunResult(code, payload, "\n".join(lines))


# --------------------------------------------------------------------------
# verification suites

def golden_corpus_check(groups: Sequence[str] = TABLE_GROUPS, *, opt_in: bool = False, workers: int = 1,
                        corpus_dir: str | None = None) -> dict:
    """Every corpus row matched or listed as a cross-engine-stable discrepancy.

    The checksum is verified before any row is computed.
    """
    from .ximap import load_paper_tables, report_section, theta_report

    tables = load_paper_tables(corpus_dir)
    out = {"groups": {}, "ok": True}
    for g in groups:
        sec = report_section(g, opt_in=opt_in, workers=workers, tables=tables)
        th = theta_report(g, tables)
        discrepancies = [r.to_dict() for r in sec.rows if r.status == "mismatch(paper)"]
        unstable = [r.to_dict() for r in sec.rows if r.status == "mismatch"]
        out["groups"][g] = {"counts": sec.counts(), "theta": th.to_dict(),
                            "discrepancies": discrepancies, "unstable": unstable}
        out["ok"] &= not unstable
    return out


def _suite_rank3_engines(cfg):
    from .rootsys import build_root_datum
    from .schubert import engine_agreement

    res = {}
    lines = []
    for t, r in (("A", 2), ("B", 2), ("G", 2), ("A", 3), ("B", 3)):
        e = engine_agreement(build_root_datum(t, r), cache=_cache(cfg))
        res[e.group] = {"pairs": e.pairs, "disagreements": [list(map(list, d)) for d in e.disagreements]}
        lines.append(f"  {e.group}: {e.pairs} pairs, {len(e.disagreements)} disagreements")
    ok = all(not v["disagreements"] for v in res.values())
    return ok, res, lines


def _suite_golden(cfg):
    rep = golden_corpus_check(opt_in=cfg.opt_in, workers=cfg.workers, corpus_dir=cfg.corpus_dir)
    lines = []
    for g, d in rep["groups"].items():
        lines.append(f"  {g}: " + " ".join(f"{k}={v}" for k, v in d["counts"].items())
                     + f"; theta {'match' if d['theta']['ok'] else 'mismatch(paper)'}")
        for row in d["discrepancies"]:
            lines.append(f"    P_{row['parabolic']} {row['generator']}: computed "
                         f"{_rows_text(row['image'])}, printed {row['paper']}")
    return rep["ok"], rep, lines


def _rows_text(rows):
    return " + ".join(f"{r['coeff']}*eps_{','.join(map(str, r['word']))}" for r in rows).replace("+ -", "- ")


def _suite_theta(cfg):
    from .ximap import load_paper_tables, theta_report

    tables = load_paper_tables(cfg.corpus_dir)
    res, lines = {}, []
    for g in TABLE_GROUPS:
        rep = theta_report(g, tables)
        res[g] = rep.to_dict()
        factors = {c.get("factor") for c in rep.coordinates if c["status"] != "match"}
        lines.append(f"  {g}: {'match' if rep.ok else 'mismatch(paper), factors ' + str(sorted(factors))}")
    return all(v["ok"] for v in res.values()), res, lines


def _suite_weyl(cfg):
    from .rootsys import (build_root_datum, invariant_degrees, minimal_coset_reps, poincare_polynomial,
                          product_formula)

    res, lines = {}, []
    for t, r in (("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("D", 4), ("D", 5), ("F", 4), ("E", 6)):
        got = poincare_polynomial(build_root_datum(t, r))
        want = product_formula(invariant_degrees(t, r))
        res[f"{t}{r}"] = got == want
        lines.append(f"  {t}{r}: Poincare polynomial {'matches' if got == want else 'DIFFERS'}")
    e7 = build_root_datum("E", 7)
    count = len(minimal_coset_reps(e7, 7, max_length=27))
    res["E7/P7"] = count
    lines.append(f"  |W^P7(E7)| = {count}")
    ok = all(v is True for k, v in res.items() if k != "E7/P7") and count == 56
    return ok, res, lines


def _suite_type_d(cfg):
    from .ximap import verify_theorem_xi_D

    res, lines = {}, []
    for n, k in ((4, 2), (5, 2), (5, 3)):
        vals = [verify_theorem_xi_D(n, k, i) for i in range(1, k + 1)]
        res[f"{n},{k}"] = vals
        lines.append(f"  (n,k)=({n},{k}): {vals}")
    return all(all(v) for v in res.values()), res, lines


def _suite_ogring(cfg):
    from .ogring import build_ring, coset_count_D, mod2_injectivity_check

    res, lines = {}, []
    ok = True
    for n, k in ((4, 2), (5, 2), (5, 3)):
        ring = build_ring(k, n)
        h = ring.hilbert()
        rel = all(not ring.element(p) for _, p in ring.relations)
        good = sum(h) == coset_count_D(n, k) and rel
        ok &= good
        res[f"{n},{k}"] = {"hilbert": h, "relations_vanish": rel}
        lines.append(f"  (n,k)=({n},{k}): total {sum(h)} vs |W^P| {coset_count_D(n, k)}, relations vanish {rel}")
    for k in (2, 3):
        rep = mod2_injectivity_check(k)
        ok &= rep.ok
        res[f"mod2 k={k}"] = rep.to_dict()
        lines.append(f"  mod-2 injectivity k={k} up to weight {rep.truncation}: {rep.ok}")
    return ok, res, lines


def _suite_invariance(cfg):
    from .invariants import case_generators, check_invariance, load_cases

    res, lines = {}, []
    ok = True
    for key in sorted(load_cases()["cases"]):
        g, r = key.split("/")
        fam = case_generators(g, int(r))
        inv = all(check_invariance(fam.datum, fam.r, p).ok for _, p in fam.generators)
        rels = {name: not p for name, p in fam.relations.items()}
        ok &= inv and all(rels.values())
        res[key] = {"invariant": inv, "relations_zero": rels}
        bad = [n for n, v in rels.items() if not v]
        lines.append(f"  {key}: invariant {inv}" + (f"; nonzero relations {bad}" if bad else ""))
    return ok, res, lines


def _suite_structure(cfg):
    from .ximap import functoriality_check, homomorphism_check

    res, lines = {}, []
    ok = True
    for g in TABLE_GROUPS:
        h = homomorphism_check(g)
        ok &= h.ok
        res[f"{g} homomorphism"] = {"pairs": len(h.pairs), "failures": h.failures}
        lines.append(f"  {g}: ring law on {len(h.pairs)} pairs: {h.ok}")
    for g, rank in (("G2", 2), ("F4", 4)):
        for r in range(1, rank + 1):
            f = functoriality_check(g, None, [r])
            ok &= f.ok
            res[f"{g} B<P_{r}"] = {"checked": f.checked, "failures": f.failures}
            lines.append(f"  {g}: functoriality B < P_{r} on {f.checked} generators: {f.ok}")
    return ok, res, lines


_SUITES: dict[str, Callable] = {
    "rank3-engines": _suite_rank3_engines,
    "golden": _suite_golden,
    "theta-tables": _suite_theta,
    "weyl": _suite_weyl,
    "type-d": _suite_type_d,
    "ogring": _suite_ogring,
    "invariance": _suite_invariance,
    "structure": _suite_structure,
}


def _cmd_verify(cfg: RunConfig) -> RunResult:
    ok, res, lines = _SUITES[cfg.suite](cfg)
    text = "\n".join([f"suite {cfg.suite}: {'ok' if ok else 'FAIL'}"] + lines)
    return RunResult(EXIT_OK if ok else EXIT_MISMATCH, {"suite": cfg.suite, "ok": ok, "result": res}, text)


def _cmd_selftest(cfg: RunConfig) -> RunResult:
    """Fast internal consistency checks; printed-table discrepancies do not count here."""
    from .ogring import build_ring, coset_count_D
    from .rootsys import build_root_datum
    from .schubert import engine_agreement
    from .ximap import load_paper_tables, report_section, verify_theorem_xi_D

    checks = {}
    load_paper_tables(cfg.corpus_dir)
    checks["corpus checksum"] = True
    checks["engines A2/B2/G2"] = all(engine_agreement(build_root_datum(t, r)).ok
                                     for t, r in (("A", 2), ("B", 2), ("G", 2)))
    g2 = report_section("G2", tables=load_paper_tables(cfg.corpus_dir))
    checks["G2 rows cross-engine stable"] = all(r.status != "mismatch" for r in g2.rows)
    checks["type D (4,2)"] = all(verify_theorem_xi_D(4, 2, i) for i in (1, 2))
    checks["OG(2,8) ring"] = sum(build_ring(2, 4).hilbert()) == coset_count_D(4, 2)
    ok = all(checks.values())
    lines = [f"  {name}: {'ok' if v else 'FAIL'}" for name, v in checks.items()]
    return RunResult(EXIT_OK if ok else EXIT_MISMATCH, {"checks": checks, "ok": ok},
                     "\n".join([f"selftest: {'ok' if ok else 'FAIL'}"] + lines))


_COMMANDS = {
    "theta": _cmd_theta,
    "duan": _cmd_duan,
    "xi": _cmd_xi,
    "ogring": _cmd_ogring,
    "verify": _cmd_verify,
    "selftest": _cmd_selftest,
}


def run(cfg: RunConfig) -> RunResult:
    """Validate, then dispatch.  Usage errors never start a computation."""
    from .ximap import CorpusChecksumError

    try:
        cfg.validate()
    except UsageError as exc:
        return RunResult(EXIT_USAGE, {"error": str(exc)}, f"usage error: {exc}")
    try:
        return _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        return RunResult(EXIT_USAGE, {"error": str(exc)}, f"usage error: {exc}")
    except CorpusChecksumError as exc:
        return RunResult(EXIT_USAGE, {"error": str(exc)}, f"corpus error: {exc}")


# --------------------------------------------------------------------------
# argv

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", default="text", choices=FORMATS)
    common.add_argument("--cache", help="structure-constant cache file (default: $FLAGXI_CACHE)")
    common.add_argument("--workers", type=int, default=1, help="row-level parallelism")
    common.add_argument("--corpus-dir", help="directory holding paper_tables.json and its .sha256")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="flagxi", description="Schubert calculus for xi maps on G/P.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("theta", parents=[common], help="torus map of the Springer morphism")
    t.add_argument("--group", required=True)
    t.add_argument("--weight", help="omegaN or comma-separated highest weight")

    d = sub.add_parser("duan", parents=[common], help="structure constants by Duan's operator")
    d.add_argument("--group", required=True)
    d.add_argument("--u")
    d.add_argument("--v")
    d.add_argument("--w")
    d.add_argument("--word", help="print the Duan matrix of this reduced word")
    d.add_argument("--length-ceiling", type=int)

    x = sub.add_parser("xi", parents=[common], help="xi images against the transcribed tables")
    x.add_argument("--group", required=True)
    x.add_argument("--parabolic", type=int, action="append", dest="parabolics")
    x.add_argument("--degree-ceiling", type=int)
    x.add_argument("--length-ceiling", type=int)
    x.add_argument("--opt-in", action="store_true", help="lift the default E6/E7 degree ceilings")
    x.add_argument("--engine", default="chevalley", choices=ENGINES)
    x.add_argument("--cross-engine", default="duan", choices=ENGINES)

    o = sub.add_parser("ogring", parents=[common], help="presented rings of OG(n-k, 2n)")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--n", type=int)
    o.add_argument("--stable", action="store_true")
    o.add_argument("--trunc", type=int)
    o.add_argument("--hilbert", action="store_true")
    o.add_argument("--mod2-injectivity", action="store_true")
    o.add_argument("--field", dest="field_", default="QQ", choices=("QQ", "GF2"))

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--opt-in", action="store_true")

    sub.add_parser("selftest", parents=[common], help="fast internal checks")
    return p


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    verbose = ns.pop("verbose", False)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(name)s: %(message)s")
    known = {f for f in RunConfig.__dataclass_fields__}
    return RunConfig(**{k: v for k, v in ns.items() if k in known})


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    res = run(cfg)
    # usage and corpus errors go to stderr so stdout stays parseable
    print(res.render(cfg.fmt), file=sys.stderr if res.code == EXIT_USAGE else sys.stdout)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
