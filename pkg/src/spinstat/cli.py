"""Command-line interface.

Three subcommands: ``analyze`` runs the full verdict pipeline on a theory
file, ``dkp-check`` exercises the wave-operator beta algebra, and ``fock``
evaluates vacuum expectations and Gram matrices over a relation table.
Every subcommand takes ``--json PATH`` to also write a machine-readable
report; output is deterministic, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .algebra import ExactMatrix, Scalar
from .fock import (
    UnknownSymbolError,
    gram_matrix,
    parse_relation_table,
    vacuum_expectation,
)
from .invariance import constraint_split
from .model import TheoryParseError, parse_theory
from .reduction import (
    duffin_kemmer_construct,
    dkp_minimal_polynomial_check,
    verify_dkp_algebra,
)
from .report import (
    AmbiguousKinematicError,
    analyze_theory,
    render_text,
    report_to_dict,
)

_EXIT_BY_STATUS = {
    "CONSISTENT": 0,
    "NO_KINEMATIC_TERM": 0,
    "CONTRADICTION": 2,
    "REJECTED_NEGATIVE_NORM": 3,
}

# Probe momenta for the minimal-polynomial check: timelike, spacelike,
# lightlike, and generic rational vectors.
_MOMENTA: tuple[tuple, ...] = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (2, 1, 1, 1),
    (1, 1, 0, 0),
    (Fraction(1, 2), Fraction(1, 3), 0, 1),
    (3, -2, 1, -1),
    (Fraction(-5, 2), 1, Fraction(3, 4), -2),
    (1, 1, 1, 1),
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")


def cmd_analyze(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(str(exc))
    base_dir = os.path.dirname(os.path.abspath(args.spec))
    try:
        spec = parse_theory(text, base_dir=base_dir)
        report = analyze_theory(spec)
    except (TheoryParseError, AmbiguousKinematicError) as exc:
        return _fail(str(exc))
    except ValueError as exc:
        return _fail(str(exc))
    sys.stdout.write(render_text(report))
    if args.json:
        _write_json(args.json, report_to_dict(report))
    return _EXIT_BY_STATUS[report.status]


def _parse_metric(text: str) -> ExactMatrix:
    if len(text) != 4 or set(text) - {"+", "-"}:
        raise ValueError(
            f"metric must be four signs like +---, got {text!r}")
    return ExactMatrix.diagonal([1 if c == "+" else -1 for c in text])


def _metric_signature(metric: ExactMatrix) -> str:
    one = Scalar(1)
    return "".join("+" if metric[i, i] == one else "-" for i in range(4))


def _check_json(check) -> dict:
    return {
        "indices": list(check.indices),
        "unweighted": check.unweighted,
        "weighted": check.weighted,
    }


_FAMILY_FORMS = (
    ("cube", "beta_mu^3 = beta_mu"),
    ("sandwich", "beta_mu beta_nu beta_mu = beta_mu"),
    ("square_sum", "beta_mu beta_nu^2 + beta_nu^2 beta_mu = beta_mu"),
    ("distinct_sum", "beta_mu beta_nu beta_lam + beta_lam beta_nu beta_mu = 0"),
)


def cmd_dkp_check(args) -> int:
    betas = duffin_kemmer_construct(1)
    if args.metric is not None:
        try:
            metric = _parse_metric(args.metric)
        except ValueError as exc:
            return _fail(str(exc))
        betas = dataclasses.replace(betas, metric=metric)

    algebra = verify_dkp_algebra(betas)
    momenta = [dkp_minimal_polynomial_check(betas, k) for k in _MOMENTA]
    split = constraint_split(betas.beta0, "bose")
    labels = betas.psi_components

    lines = [
        f"duffin-kemmer check (5x5 betas, metric "
        f"{_metric_signature(betas.metric)})"
    ]
    if algebra.standard_holds:
        lines.append("standard trilinear relation: PASS (64 of 64 triples)")
    else:
        n = len(algebra.standard_failures)
        lines.append(f"standard trilinear relation: FAIL ({n} of 64 triples)")

    if args.paper_relations:
        lines.append("shorthand relations, metric factors dropped vs restored:")
        for name, form in _FAMILY_FORMS:
            checks = getattr(algebra, name)
            raw = sum(1 for c in checks if c.unweighted)
            weighted = sum(1 for c in checks if c.weighted)
            total = len(checks)
            lines.append(
                f"  {name} ({form}): {raw}/{total} unweighted, "
                f"{weighted}/{total} weighted")
        mismatches = algebra.unweighted_mismatches
        lines.append(f"  unweighted mismatches: {len(mismatches)}")
        by_family: dict[str, list[str]] = {}
        for name, indices in mismatches:
            by_family.setdefault(name, []).append(
                "(" + ",".join(str(i) for i in indices) + ")")
        for name, entries in by_family.items():
            lines.append(f"    {name}: {' '.join(entries)}")

    bad = [c for c in momenta if not c.holds]
    if not bad:
        lines.append(
            f"minimal polynomial (beta.k)^3 = (k.k)(beta.k): PASS "
            f"({len(momenta)} of {len(momenta)} momenta)")
    else:
        lines.append(
            f"minimal polynomial (beta.k)^3 = (k.k)(beta.k): FAIL "
            f"({len(bad)} of {len(momenta)} momenta fail)")
    for c in bad:
        k_text = ", ".join(str(v) for v in c.k)
        lines.append(f"  fails at k = ({k_text}), k.k = {c.k_dot_k}")

    canon = ", ".join(labels[i] for i in split.canonical_indices)
    constr = ", ".join(labels[i] for i in split.constraint_indices)
    lines.append(
        f"constraint split of beta0 (bose): canonical {canon}; "
        f"constraints {constr}")
    print("\n".join(lines))

    if args.json:
        shorthand = None
        if args.paper_relations:
            shorthand = {
                name: [_check_json(c) for c in getattr(algebra, name)]
                for name, _ in _FAMILY_FORMS
            }
            shorthand["mismatches"] = [
                {"relation": name, "indices": list(indices)}
                for name, indices in algebra.unweighted_mismatches
            ]
        payload = {
            "metric": {
                "signature": _metric_signature(betas.metric),
                "diagonal": [str(betas.metric[i, i]) for i in range(4)],
            },
            "standard": {
                "holds": algebra.standard_holds,
                "failures": [list(t) for t in algebra.standard_failures],
            },
            "shorthand": shorthand,
            "minimal_polynomial": [
                {
                    "k": [str(v) for v in c.k],
                    "k_dot_k": str(c.k_dot_k),
                    "holds": c.holds,
                }
                for c in momenta
            ],
            "constraint_split": {
                "canonical": [labels[i] for i in split.canonical_indices],
                "constraints": [labels[i] for i in split.constraint_indices],
                "nonsingular_block":
                    split.nonsingular_block.to_nested_strings()
                    if split.nonsingular_block is not None else None,
            },
        }
        _write_json(args.json, payload)

    return 0 if algebra.standard_holds else 2


def _read_states(path: str) -> list[tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    states = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            states.append(tuple(line.split()))
    if not states:
        raise ValueError(f"no states found in {path}")
    return states


def cmd_fock(args) -> int:
    if args.word is None and args.gram is None:
        return _fail("fock needs --word and/or --gram")
    try:
        with open(args.table, encoding="utf-8") as fh:
            table = parse_relation_table(fh.read())
    except OSError as exc:
        return _fail(str(exc))
    except ValueError as exc:
        return _fail(str(exc))

    payload: dict = {
        "bracket": table.bracket,
        "symbols": sorted(table.symbols),
        "word": None,
        "gram": None,
    }
    try:
        if args.word is not None:
            symbols = tuple(args.word.split())
            value = vacuum_expectation(symbols, table)
            print(f"<0| {' '.join(symbols)} |0> = {value}")
            payload["word"] = {
                "symbols": list(symbols),
                "vacuum_expectation": str(value),
            }
        if args.gram is not None:
            states = _read_states(args.gram)
            result = gram_matrix(states, table)
            print(f"gram matrix ({len(states)} states):")
            for row in result.matrix.to_nested_strings():
                print("  " + "  ".join(row))
            p, n, z = result.signature
            print(f"signature: ({p}, {n}, {z})")
            payload["gram"] = {
                "states": [list(s) for s in states],
                "matrix": result.matrix.to_nested_strings(),
                "signature": [p, n, z],
            }
    except (UnknownSymbolError, OSError, ValueError) as exc:
        return _fail(str(exc))

    if args.json:
        _write_json(args.json, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spinstat",
        description="Exact spin-statistics analysis of first-order "
                    "field Lagrangians.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p_analyze = sub.add_parser(
        "analyze", help="derive the statistics verdict for a theory file")
    p_analyze.add_argument("spec", help="theory description file")
    p_analyze.add_argument("--json", metavar="PATH",
                           help="also write the report as JSON")
    p_analyze.set_defaults(func=cmd_analyze)

    p_dkp = sub.add_parser(
        "dkp-check", help="verify the wave-operator beta algebra")
    p_dkp.add_argument(
        "--paper-relations", action="store_true",
        help="also tabulate the metric-free shorthand relations")
    p_dkp.add_argument(
        "--metric", metavar="SIGNS",
        help="override the metric signature, e.g. +--- or -+++")
    p_dkp.add_argument("--json", metavar="PATH",
                       help="also write the results as JSON")
    p_dkp.set_defaults(func=cmd_dkp_check)

    p_fock = sub.add_parser(
        "fock", help="evaluate vacuum expectations over a relation table")
    p_fock.add_argument("table", help="relation table file")
    p_fock.add_argument("--word", metavar="SYMBOLS",
                        help="operator word, e.g. 'c ddag'")
    p_fock.add_argument("--gram", metavar="PATH",
                        help="file of creator words, one state per line")
    p_fock.add_argument("--json", metavar="PATH",
                        help="also write the results as JSON")
    p_fock.set_defaults(func=cmd_fock)

    return parser


def _normalize_argv(argv: list[str]) -> list[str]:
    """Join ``--metric -+++`` into one token so the leading dash of the
    signature is not mistaken for an option."""
    out = []
    tokens = iter(argv)
    for tok in tokens:
        if tok == "--metric":
            value = next(tokens, None)
            if value is None:
                out.append(tok)
            else:
                out.append(f"--metric={value}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(_normalize_argv(list(argv)))
    return args.func(args)
