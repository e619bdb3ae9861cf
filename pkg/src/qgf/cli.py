"""Command line: ``qgf verify``, ``qgf list`` and ``qgf dump-tensor``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .checks import FAIL, NOT_APPLICABLE, PASS, CheckResult

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class Config:
    order: int | None = None
    s: tuple = (-1, 0, 1)

    def D(self, default: int) -> int:
        return default if self.order is None else self.order


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    run: Callable[[Config], list]
    tags: tuple = ()
    default_order: int | None = 3


# --------------------------------------------------------------------------
# suite bodies (imports are local so ``qgf list`` stays instant)


def _hopf_axioms(cfg: Config):
    from .hopfcore import CATALOG_KEYS, catalog_get, check_all_axioms

    return [check_all_axioms(catalog_get(k), cfg.D(3)) for k in CATALOG_KEYS]


def _casimir(cfg: Config):
    from .hopfcore import casimir_pk, check_centrality, uw_iso11_pk

    H = uw_iso11_pk()
    return [check_centrality(H, casimir_pk(H))]


def _antipode_conjugation(cfg: Config):
    from .hopfcore import check_antipode_conjugation

    return [check_antipode_conjugation()]


def _structure_tensor(cfg: Config):
    from .dualform import check_grading, compute_structure_tensor, structure_family, verify_recurrences

    D = cfg.D(4)
    F = compute_structure_tensor(D=D)
    family = compute_structure_tensor(D=6, sources=[(0, 0, k) for k in range(7)] + [(0, 1, 1)])
    return [verify_recurrences(F, ap_row_scope="q0"), check_grading(F), structure_family(family, 6)]


def _dual_product(cfg: Config):
    from .dualform import compute_structure_tensor, verify_dual_product

    D = cfg.D(4)
    return [verify_dual_product(compute_structure_tensor(D=D), D=D)]


def _dual_commutators(cfg: Config):
    from .dualform import compute_structure_tensor, extract_dual_commutators

    D = cfg.D(4)
    return [extract_dual_commutators(compute_structure_tensor(D=D), D=D)]


def _coordinate_lie_algebra(cfg: Config):
    from .dualform import coordinate_lie_algebra

    return [coordinate_lie_algebra()]


def _bialgebra_cybe(cfg: Config):
    from .liebialg import bialgebra_suite

    return [bialgebra_suite()]


def _bialgebra_duality(cfg: Config):
    from .liebialg import duality_suite

    return [duality_suite()]


def _t_specialization(cfg: Config):
    from .matrep import multiplicativity_suite, representation_suite

    return [multiplicativity_suite(), representation_suite()]


def _frt(cfg: Config):
    from .matrep import frt_suite

    return [frt_suite()]


def _basis_change(cfg: Config):
    from .matrep import basis_change_suite

    return [basis_change_suite()]


def _sklyanin(cfg: Config):
    from .poissonlie import sklyanin_suite

    return [sklyanin_suite()]


def _weyl(cfg: Config):
    from .poissonlie import weyl_suite

    return [weyl_suite()]


def _poisson_hopf(cfg: Config):
    from .poissonlie import poisson_hopf_suite

    return [poisson_hopf_suite()]


def _cayley_klein(cfg: Config):
    from .hopfcore import check_all_axioms, check_heisenberg_quadratic, funv_ck, verify_unit_substitution

    out = []
    for s in cfg.s:
        out.append(check_all_axioms(funv_ck(s), cfg.D(3)))
        out.append(verify_unit_substitution(s))
        if s == 0:
            out.append(check_heisenberg_quadratic())
    return out


def _coaction(cfg: Config):
    from .matrep import coaction_suite

    return [coaction_suite(cfg.s)]


def _contraction(cfg: Config):
    from .hopfcore import check_contraction

    return [check_contraction(cfg.D(2))]


SUITES = (
    Suite("hopf-axioms", "coassociativity, counit, antipode, compatibility for all catalog entries", _hopf_axioms, ("hopf",)),
    Suite("casimir", "centrality of the deformed Casimir", _casimir, ("hopf",), None),
    Suite("antipode-conjugation", "antipode of K as a conjugation by exp(w Pp)", _antipode_conjugation, ("hopf",), None),
    Suite("structure-tensor", "recurrences and grading of the structure tensor F", _structure_tensor, ("dual",), 4),
    Suite("dual-product", "coordinate products against the structure tensor", _dual_product, ("dual",), 4),
    Suite("dual-commutators", "coordinate commutators read off F", _dual_commutators, ("dual",), 4),
    Suite("coordinate-lie-algebra", "exponential coordinates close an infinite Lie algebra", _coordinate_lie_algebra, ("dual",), None),
    Suite("bialgebra-cybe", "Schouten brackets, cocycle and co-Jacobi, first-order coproducts", _bialgebra_cybe, ("bialgebra",), None),
    Suite("bialgebra-duality", "iso(1,1) against sb(2) with a solved pairing", _bialgebra_duality, ("bialgebra",), None),
    Suite("t-specialization", "T in matrix representations, coproduct multiplicativity", _t_specialization, ("matrix",), None),
    Suite("frt", "R T1 T2 = T2 T1 R", _frt, ("matrix",), None),
    Suite("basis-change", "two factorizations of T^Q and the induced change of basis", _basis_change, ("matrix",), None),
    Suite("sklyanin", "Sklyanin bracket tables, Jacobi, invariant fields", _sklyanin, ("poisson",), None),
    Suite("weyl-correspondence", "quantum commutators equal Poisson brackets", _weyl, ("poisson",), None),
    Suite("poisson-hopf", "coproducts are Poisson maps", _poisson_hopf, ("poisson",), None),
    Suite("cayley-klein", "Cayley-Klein family: axioms, unit substitution, quadratic case", _cayley_klein, ("hopf", "ck")),
    Suite("coaction", "quantum plane relations preserved by the coaction", _coaction, ("matrix", "ck"), None),
    Suite("contraction", "contraction of the s = +1 and s = -1 entries", _contraction, ("ck",), 2),
)

REGISTRY = {s.name: s for s in SUITES}


def list_suites(tag: str | None = None, registry=SUITES) -> list:
    return [s for s in registry if tag is None or tag in s.tags]


# --------------------------------------------------------------------------
# running and reporting


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def _check_record(r: CheckResult) -> dict:
    out = {"name": r.name, "status": r.status, "checked": r.checked}
    if r.witness is not None:
        out["witness"] = _plain(r.witness)
    elif r.status == FAIL:
        out["witness"] = {"note": "no witness recorded"}
    if r.details:
        out["details"] = _plain(r.details)
    return out


def run_suite(name: str, cfg: Config, timing: bool = False) -> dict:
    suite = REGISTRY[name]
    t0 = time.perf_counter()
    try:
        results = suite.run(cfg)
    except Exception as exc:  # a crash is a failed suite with the error as witness
        results = [CheckResult(name, FAIL, witness={"error": f"{type(exc).__name__}: {exc}"})]
    millis = round((time.perf_counter() - t0) * 1000) if timing else None
    checks = [_check_record(r) for r in results]
    statuses = {c["status"] for c in checks}
    if FAIL in statuses:
        status = FAIL
    elif statuses == {NOT_APPLICABLE}:
        status = NOT_APPLICABLE
    else:
        status = PASS
    return {
        "suite": name,
        "status": status,
        "checks": checks,
        "millis": millis,
        "config": {"order": cfg.D(suite.default_order) if suite.default_order else None, "s": list(cfg.s)},
    }


def _run_one(args):
    return run_suite(*args)


def run_suites(names, cfg: Config, jobs: int = 1, fail_fast: bool = False, timing: bool = False) -> dict:
    if names == "all" or not names or names == ["all"]:
        names = [s.name for s in SUITES]
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise KeyError(", ".join(unknown))
    names = list(dict.fromkeys(names))
    reports = []
    if jobs > 1 and not fail_fast and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, [(n, cfg, timing) for n in names]))
    else:
        for n in names:
            rep = run_suite(n, cfg, timing)
            reports.append(rep)
            if fail_fast and rep["status"] == FAIL:
                break
    reports.sort(key=lambda r: r["suite"])
    status = FAIL if any(r["status"] == FAIL for r in reports) else PASS
    return {
        "tool": "qgf",
        "status": status,
        "config": {"order": cfg.order, "s": list(cfg.s), "fail_fast": fail_fast},
        "suites": reports,
    }


def render_text(report: dict) -> str:
    lines = []
    for r in report["suites"]:
        n = sum(c["checked"] for c in r["checks"])
        t = f" {r['millis']} ms" if r["millis"] is not None else ""
        lines.append(f"{r['status'].upper():5} {r['suite']} ({n} identities){t}")
        for c in r["checks"]:
            if c["status"] == FAIL:
                lines.append(f"      {c['name']}: {json.dumps(c['witness'], sort_keys=True)}")
    lines.append(f"overall: {report['status']}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def schema_path() -> str:
    return os.path.join(os.path.dirname(__file__), "report.schema.json")


# --------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgf", description="exact verification of quantum ISO(1,1) structures")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suites", nargs="*", metavar="SUITE")
    v.add_argument("--order", type=int, default=None, help="truncation degree (overrides suite defaults)")
    v.add_argument("--format", choices=("json", "text"), default="text")
    v.add_argument("--fail-fast", action="store_true")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--s", type=int, choices=(-1, 0, 1), default=None, help="restrict Cayley-Klein suites to one s")
    v.add_argument("--timing", action="store_true", help="record wall time (reports then differ run to run)")

    ls = sub.add_parser("list", help="list suites")
    ls.add_argument("--tag", default=None)

    d = sub.add_parser("dump-tensor", help="print the structure tensor")
    d.add_argument("--cutoff", type=int, default=4)
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    if args.command == "list":
        for s in list_suites(args.tag):
            print(f"{s.name:24} {s.description}")
        return EXIT_OK

    if args.command == "dump-tensor":
        from .dualform import compute_structure_tensor, dump_tensor

        if args.cutoff < 0:
            print("qgf: cutoff must be >= 0", file=sys.stderr)
            return EXIT_USAGE
        sys.stdout.write(dump_tensor(compute_structure_tensor(D=args.cutoff)))
        return EXIT_OK

    if args.order is not None and args.order < 0:
        print("qgf: --order must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    cfg = Config(order=args.order, s=(args.s,) if args.s is not None else (-1, 0, 1))
    try:
        report = run_suites(args.suites or "all", cfg, max(args.jobs, 1), args.fail_fast, args.timing)
    except KeyError as exc:
        print(f"qgf: unknown suite {exc.args[0]} (see 'qgf list')", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render_json(report) if args.format == "json" else render_text(report))
    return EXIT_OK if report["status"] != FAIL else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
