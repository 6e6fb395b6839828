#!/usr/bin/env python3
"""
gfregular -- GF(q)-regular matroid toolkit

Main entry point.  Parses command-line arguments, loads matrix files and
dispatches to the generators, the decision procedure, the representability
search, the tangle kit and the acceptance suite.  Every command prints a
JSON report ending in a ``VERDICT: <token>`` line.

Usage examples::

    # Write PG(2,2) to a matrix file
    python main.py gen pg 3 2 -o fano.mat

    # Decide the structure of a matrix whose p-columns form PG(2,q)
    python main.py decide obstruction.mat --pg p1..p7

    # Representability over a list of fields
    python main.py representable fano.mat --fields 2,3,4

    # Tangle of order 3 on PG(2,2)
    python main.py tangle check fano.mat -k 3

    # Desk-scale acceptance checks
    python main.py verify-suite --quick
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from typing import Any, Optional

# ---------------------------------------------------------------------------
# Ensure the project root is on sys.path so that ``gfregular`` can be
# imported regardless of how the script is invoked.
# ---------------------------------------------------------------------------
_PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
if _PROJECT_ROOT not in sys.path:
    sys.path.insert(0, _PROJECT_ROOT)

from gfregular.core import limits
from gfregular.core.connectivity import is_round, kappa_witness, linking_minor, vertical_connectivity
from gfregular.core.errors import GFRegularError, InternalCheckError, PreconditionError, SizeBoundError
from gfregular.core.extension import confine_pg, realify_rows, subfield_vector_in_span, zero_rows_normalize
from gfregular.core.field import TowerField, field_of_order, prime_power
from gfregular.core.linalg import Mat, Subspace, matmul
from gfregular.core.matroid import RepMatroid
from gfregular.core.regularity import decide_structure, verify_certificate
from gfregular.core.representability import (
    ProfileEntry,
    RankOracle,
    find_representation,
    representability_profile,
    representable_orders,
)
from gfregular.core.tangles import is_tangle, t_k_sets, t_k_tangle, tangle_rank
from gfregular.core.types import FamilyKind
from gfregular.shell.services.family_factory import FamilyFactory
from gfregular.shell.services.matrix_file_service import MatrixFileService
from gfregular.shell.services.report_service import ReportService
from gfregular.shell.services.suite_service import SuiteService

logger = logging.getLogger("gfregular.main")

_EXIT_FAILED = 1
_EXIT_USAGE = 2
_EXIT_SIZE = 3


class CommandFailed(Exception):
    """A command finished with a negative verdict that must exit 1."""

    def __init__(self, report: str) -> None:
        super().__init__(report)
        self.report = report


# ---------------------------------------------------------------------------
# CLI definition
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    """Construct the argument parser."""
    parser = argparse.ArgumentParser(
        prog="gfregular",
        description=(
            "Exact finite-field matroid toolkit: GF(q) < GF(q^2) towers, "
            "projective geometries, the hat and bar families, q-badness "
            "decisions with certificates, representability and tangles."
        ),
    )
    parser.add_argument(
        "--verbose", "-v",
        action="count",
        default=0,
        help="Increase log verbosity (-v for INFO, -vv for DEBUG).",
    )
    parser.add_argument(
        "--max-classes",
        type=int,
        default=None,
        metavar="N",
        help="Bound on parallel classes for exponential searches (default 24, "
             "or GFREGULAR_MAX_CLASSES).",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    # gen
    kinds = [k.name.lower() for k in FamilyKind]
    gen = sub.add_parser("gen", help="Generate a family matrix.")
    gen.add_argument("kind", choices=kinds, help="Family kind.")
    gen.add_argument("params", type=int, nargs="+",
                     help="pg/hat/bar: n q; ag: h q; obstruction: q.")
    gen.add_argument("--apex", action="store_true", default=False,
                     help="hat only: prepend the apex column h0.")
    gen.add_argument("--index", type=int, default=0,
                     help="obstruction only: 0 for the canonical member, i > 0 for the "
                          "i-th enumerated triple.")
    gen.add_argument("--output", "-o", default=None, metavar="PATH",
                     help="Write the matrix file here instead of embedding it in the report.")

    # decide
    decide = sub.add_parser("decide", help="HAT / BAR / BAD decision with certificate.")
    decide.add_argument("matrix", help="Matrix file over a quadratic tower.")
    decide.add_argument("--pg", default=None, metavar="LABELS",
                        help="Labels of the PG block (default: every label outside role X).")

    # representable
    rep = sub.add_parser("representable", help="Brute-force representability search.")
    rep.add_argument("matrix", help="Matrix file whose matroid is searched for.")
    rep.add_argument("--fields", default=None, metavar="ORDERS",
                     help="Comma-separated field orders (default: every prime power up "
                          "to the search bound).")
    rep.add_argument("--no-prune", action="store_true", default=False,
                     help="Disable basis and support pruning.")

    # algebra
    alg = sub.add_parser("algebra", help="Constructive GF(q)/GF(q^2) algebra.")
    alg_sub = alg.add_subparsers(dest="operation", required=True, metavar="OPERATION")
    confine = alg_sub.add_parser("confine", help="Bring a PG representation into GF(q).")
    confine.add_argument("matrix")
    realify = alg_sub.add_parser("realify", help="Rows Q with Q(A + wB) over GF(q).")
    realify.add_argument("a")
    realify.add_argument("b")
    realify.add_argument("h", type=int)
    normalize = alg_sub.add_parser("normalize", help="Zero-row normalisation of (A + wB ; P).")
    normalize.add_argument("a")
    normalize.add_argument("b")
    normalize.add_argument("p")
    normalize.add_argument("h", type=int)
    span = alg_sub.add_parser("subfield-vector", help="A GF(q)-vector of V inside U.")
    span.add_argument("v", help="Rows spanning V, over GF(q).")
    span.add_argument("u", help="Rows spanning U, over GF(q^2).")

    # tangle
    tangle = sub.add_parser("tangle", help="Tangles T_k(M).")
    tangle.add_argument("action", choices=["sets", "check", "rank"])
    tangle.add_argument("matrix")
    tangle.add_argument("-k", type=int, required=True, help="Tangle order.")
    tangle.add_argument("--set", default="", metavar="LABELS", help="rank only: the set X.")

    # connectivity
    conn = sub.add_parser("connectivity", help="Connectivity queries.")
    conn.add_argument("matrix")
    query = conn.add_mutually_exclusive_group(required=True)
    query.add_argument("--lambda", dest="lam", metavar="X", help="lambda(X).")
    query.add_argument("--vertical", type=int, metavar="K", help="Vertical K-connectivity.")
    query.add_argument("--round", action="store_true", help="Roundness.")
    query.add_argument("--kappa", nargs=2, metavar=("A", "B"), help="kappa(A, B).")
    query.add_argument("--linking", nargs=2, metavar=("A", "B"), help="Tutte-linking minor on A u B.")

    # verify-suite
    suite = sub.add_parser("verify-suite", help="Run the acceptance checks.")
    mode = suite.add_mutually_exclusive_group()
    mode.add_argument("--quick", dest="quick", action="store_true", default=True,
                      help="Reduced sweep sizes (default).")
    mode.add_argument("--full", dest="quick", action="store_false",
                      help="Full sweep sizes.")
    suite.add_argument("--check", type=int, action="append", default=None, metavar="N",
                       help="Run only check N (repeatable).")

    return parser


# ---------------------------------------------------------------------------
# Logging setup
# ---------------------------------------------------------------------------

def _configure_logging(verbosity: int) -> None:
    """Set up the root logger based on requested verbosity."""
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity >= 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _labels(text: str) -> tuple[str, ...]:
    return MatrixFileService.expand_labels(text)


def _cmd_gen(args: argparse.Namespace) -> str:
    family = FamilyFactory.create(args.kind, args.params, apex=args.apex, index=args.index)
    payload: dict[str, Any] = {
        "kind": family.kind.name,
        "params": list(args.params),
        "columns": family.mat.cols,
        "rows": family.mat.rows,
        "field": family.mat.field.describe(),
    }
    if args.output:
        MatrixFileService.write(args.output, family.mat, family.roles)
        payload["output"] = args.output
    else:
        payload["matrix"] = MatrixFileService.format(family.mat, family.roles)
    return ReportService.render("gen", payload, "GENERATED")


def _cmd_decide(args: argparse.Namespace) -> str:
    parsed = MatrixFileService.read(args.matrix)
    mat = parsed.mat
    if args.pg:
        pg = _labels(args.pg)
    elif parsed.role("X"):
        pg = tuple(label for label in mat.label_list() if label not in set(parsed.role("X")))
    else:
        raise PreconditionError("no --pg labels given and the file has no X role")
    decision = decide_structure(mat, pg)

    # Re-audit in this process before asserting the verdict.
    others = [label for label in mat.label_list() if label not in set(pg)]
    basis = RepMatroid(mat).matrix()
    a_work = matmul(decision.confinement.transform, basis.select(others))
    if not verify_certificate(a_work, decision.confinement.confined, decision.certificate):
        raise InternalCheckError("certificate failed its in-process audit")
    return ReportService.render("decide", decision.to_report(), decision.verdict.name)


def _search_orders(text: Optional[str]) -> list[int]:
    if text:
        try:
            return [int(tok) for tok in text.split(",") if tok.strip()]
        except ValueError:
            raise PreconditionError(f"--fields expects comma-separated integers, got {text!r}") from None
    bound = limits.active().max_search_field
    return [q for q in range(2, bound + 1) if _is_prime_power(q)]


def _is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except GFRegularError:
        return False
    return True


def _cmd_representable(args: argparse.Namespace) -> str:
    parsed = MatrixFileService.read(args.matrix)
    oracle = RankOracle.from_matroid(RepMatroid(parsed.mat))
    fields = [field_of_order(q) for q in _search_orders(args.fields)]
    if args.no_prune:
        profile = [ProfileEntry(f, find_representation(oracle, f, prune=False)) for f in fields]
    else:
        profile = representability_profile(oracle, fields)
    orders = representable_orders(profile)
    payload = {
        "fields": [f.order for f in fields],
        "representable": orders,
        "witnesses": {
            str(entry.field.order): entry.witness.to_lists()
            for entry in profile if entry.witness is not None
        },
    }
    verdict = "REPRESENTABLE" if len(orders) == len(fields) else "NOT_REPRESENTABLE"
    return ReportService.render("representable", payload, verdict)


def _tower_matrix(path: str) -> Mat:
    mat = MatrixFileService.read(path).mat
    if not isinstance(mat.field, TowerField):
        raise PreconditionError(f"{path}: expected a matrix over a quadratic tower")
    return mat


def _cmd_algebra(args: argparse.Namespace) -> str:
    op = args.operation
    if op == "confine":
        mat = _tower_matrix(args.matrix)
        conf = confine_pg(mat, mat.rows, mat.field.q)
        payload = {
            "transform": conf.transform.to_lists(),
            "scalars": list(conf.scalars),
            "confined": conf.confined.to_lists(),
        }
    elif op == "realify":
        a = MatrixFileService.read(args.a).mat
        b = MatrixFileService.read(args.b).mat
        payload = {"q": realify_rows(a, b, args.h).to_lists()}
    elif op == "normalize":
        a = MatrixFileService.read(args.a).mat
        b = MatrixFileService.read(args.b).mat
        p = MatrixFileService.read(args.p).mat
        a2, b2 = zero_rows_normalize(a, b, p, args.h)
        payload = {"a": a2.to_lists(), "b": b2.to_lists()}
    else:
        v = MatrixFileService.read(args.v).mat
        u = _tower_matrix(args.u)
        vec = subfield_vector_in_span(Subspace.span(v.field, v.entries, v.cols),
                                      Subspace.span(u.field, u.entries, u.cols))
        payload = {"vector": vec.tolist()}
    payload["operation"] = op
    return ReportService.render("algebra", payload, "VERIFIED")


def _cmd_tangle(args: argparse.Namespace) -> str:
    m = RepMatroid(MatrixFileService.read(args.matrix).mat)
    if args.action == "sets":
        sets = t_k_sets(m, args.k)
        payload = {"k": args.k, "sets": ReportService.label_sets(sets)}
        return ReportService.render("tangle sets", payload, "LISTED")
    tangle = t_k_tangle(m, args.k)
    if args.action == "check":
        check = is_tangle(tangle)
        payload = {
            "k": args.k,
            "valid": check.valid,
            "axiom": check.axiom.name if check.axiom is not None else None,
            "witness": ReportService.label_sets(check.witness),
        }
        report = ReportService.render("tangle check", payload, "TANGLE" if check.valid else "NOT_TANGLE")
        if not check.valid:
            raise CommandFailed(report)
        return report
    x = _labels(args.set)
    payload = {"k": args.k, "set": sorted(x), "rank": tangle_rank(tangle, x)}
    return ReportService.render("tangle rank", payload, "RANK")


def _cmd_connectivity(args: argparse.Namespace) -> str:
    m = RepMatroid(MatrixFileService.read(args.matrix).mat)
    if args.lam is not None:
        x = _labels(args.lam)
        return ReportService.render("connectivity", {"set": sorted(x), "lambda": m.lam(x)}, "LAMBDA")
    if args.vertical is not None:
        result = vertical_connectivity(m, args.vertical)
        payload = {"k": args.vertical, "connected": result.connected,
                   "separation": sorted(result.separation or ()), "order": result.order}
        return ReportService.render("connectivity", payload,
                                    "CONNECTED" if result.connected else "SEPARATED")
    if args.round:
        result = is_round(m)
        payload = {"round": result.round,
                   "hyperplanes": ReportService.label_sets(result.hyperplanes or ())}
        return ReportService.render("connectivity", payload, "ROUND" if result.round else "NOT_ROUND")
    if args.kappa is not None:
        a, b = (_labels(s) for s in args.kappa)
        value, z = kappa_witness(m, a, b)
        payload = {"a": sorted(a), "b": sorted(b), "kappa": value, "witness": sorted(z)}
        return ReportService.render("connectivity", payload, "KAPPA")
    a, b = (_labels(s) for s in args.linking)
    result = linking_minor(m, a, b)
    payload = {
        "a": sorted(a),
        "b": sorted(b),
        "kappa": result.kappa,
        "deleted": list(result.deleted),
        "contracted": list(result.contracted),
        "minor": MatrixFileService.format(result.minor.matrix()),
    }
    return ReportService.render("connectivity", payload, "LINKED")


def _cmd_verify_suite(args: argparse.Namespace) -> str:
    results = SuiteService.run(quick=args.quick, only=args.check)
    passed = all(r.passed for r in results)
    payload = {"quick": args.quick, "checks": [r.to_report() for r in results]}
    report = ReportService.render("verify-suite", payload, "PASS" if passed else "FAIL")
    if not passed:
        raise CommandFailed(report)
    return report


_COMMANDS = {
    "gen": _cmd_gen,
    "decide": _cmd_decide,
    "representable": _cmd_representable,
    "algebra": _cmd_algebra,
    "tangle": _cmd_tangle,
    "connectivity": _cmd_connectivity,
    "verify-suite": _cmd_verify_suite,
}


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------

def main(argv: Optional[list[str]] = None) -> int:
    """Application entry point.

    Parameters
    ----------
    argv:
        Command-line arguments.  ``None`` to use ``sys.argv``.

    Returns
    -------
    int
        Exit code: 0 on success, 1 for a failed verification, 2 for usage
        and input errors, 3 when a size bound is exceeded.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    _configure_logging(args.verbose)

    previous = limits.active()
    try:
        bounds = limits.Limits.from_env()
        if args.max_classes is not None:
            bounds = dataclasses.replace(bounds, max_classes=args.max_classes)
        limits.configure(bounds)
        report = _COMMANDS[args.command](args)
    except CommandFailed as exc:
        sys.stdout.write(exc.report)
        return _EXIT_FAILED
    except SizeBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_SIZE
    except InternalCheckError as exc:
        logger.debug("internal check failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_FAILED
    except (GFRegularError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    finally:
        limits.configure(previous)

    sys.stdout.write(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
