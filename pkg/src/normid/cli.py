"""Command-line front end.

Exit codes: 0 success (verify: valid; refute: violation found), 1 verify
found the identity invalid, 2 usage or parse errors, 3 refute exhausted
its budget without finding a violation (which proves nothing).

With --json every subcommand prints a single report object conforming to
run_report.schema.json (shipped next to this module); exact rationals are
serialized as "p/q" strings so nothing is rounded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .algebra import (
    Certificate,
    ReducedForm,
    Verdict,
    Witness,
    expand_to_pairs,
    singleton_sums,
    verify,
)
from .core import IdentityError, indices_of
from .dsl import ParseError, identity_payload, parse, serialize
from .evaluate import degree_probe, find_counterexample, parse_norm
from .families import (
    alternating_identity,
    frechet,
    k_subset_identity,
    parallelepiped_identity,
    parallelogram,
    product_family_identity,
)
from .report import write_report
from .signed import ResourceLimitError, SignedIdentity, plain_as_signed, signed_to_plain

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3


class _UsageError(Exception):
    pass


def _read_input(location: str) -> tuple[str, str]:
    """(text, provenance) for a file path or '-' meaning stdin."""
    if location == "-":
        return sys.stdin.read(), "<stdin>"
    path = Path(location)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as exc:
        raise _UsageError(f"cannot read {location!r}: {exc}") from exc


def _load_identity(location: str) -> tuple[int, SignedIdentity, str]:
    text, provenance = _read_input(location)
    n, sid = parse(text, provenance)
    return n, sid, provenance


def _frac(value: Fraction) -> str:
    return str(value)


def _witness_json(witness: Witness) -> dict:
    return {
        "vectors": [[_frac(c) for c in vec] for vec in witness.vectors],
        "residual": _frac(witness.residual),
    }


def _certificate_json(cert: Certificate) -> dict:
    return {"kind": cert.kind, "indices": list(cert.indices), "value": _frac(cert.value)}


def _table_json(reduced: ReducedForm, sums: dict) -> dict:
    return {
        "pair_coeffs": [
            {"indices": list(indices_of(mask)), "coeff": _frac(reduced.pair_coeffs[mask])}
            for mask in sorted(reduced.pair_coeffs)
        ],
        "singleton_coeffs": [
            {"index": i, "coeff": _frac(reduced.singleton_coeffs[i])}
            for i in sorted(reduced.singleton_coeffs)
        ],
        "singleton_sums": [
            {"index": i, "sum": _frac(sums[i])} for i in sorted(sums)
        ],
    }


def _emit_json(report: dict) -> None:
    print(json.dumps({k: v for k, v in report.items() if v is not None}, indent=2))


def _describe_certificate(cert: Certificate) -> str:
    inside = ",".join(str(i) for i in cert.indices)
    return f"certificate: {cert.kind} {{{inside}}} = {cert.value}"


def _describe_witness(witness: Witness) -> str:
    vecs = "; ".join(
        f"x{i + 1} = ({vec[0]}, {vec[1]})" for i, vec in enumerate(witness.vectors)
    )
    return f"witness: {vecs}; residual = {witness.residual}"


def _print_table(reduced: ReducedForm, sums: dict) -> None:
    print("pair coefficients:")
    if reduced.pair_coeffs:
        for mask in sorted(reduced.pair_coeffs):
            i, j = indices_of(mask)
            print(f"  {{{i},{j}}}: {reduced.pair_coeffs[mask]}")
    else:
        print("  (all zero)")
    print("singleton coefficients:")
    if reduced.singleton_coeffs:
        for i in sorted(reduced.singleton_coeffs):
            print(f"  {{{i}}}: {reduced.singleton_coeffs[i]}")
    else:
        print("  (all zero)")
    print("singleton sums:")
    for i in sorted(sums):
        print(f"  s_{i} = {sums[i]}")


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    n, sid, provenance = _load_identity(args.input)
    plain = signed_to_plain(sid)
    verdict = verify(plain)
    elapsed = (time.perf_counter() - started) * 1000.0
    if args.json:
        report = {
            "command": "verify",
            "input": provenance,
            "verdict": "valid" if verdict.valid else "invalid",
            "certificate": _certificate_json(verdict.certificate)
            if verdict.certificate
            else None,
            "witness": _witness_json(verdict.witness) if verdict.witness else None,
            "table": _table_json(verdict.reduced, dict(verdict.singleton_sums))
            if args.full_table
            else None,
            "elapsed_ms": elapsed,
        }
        _emit_json(report)
    else:
        print("valid" if verdict.valid else "invalid")
        if verdict.certificate:
            print(_describe_certificate(verdict.certificate))
        if verdict.witness:
            print(_describe_witness(verdict.witness))
        if args.full_table:
            _print_table(verdict.reduced, dict(verdict.singleton_sums))
    return EXIT_OK if verdict.valid else EXIT_INVALID


def _cmd_reduce(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    n, sid, provenance = _load_identity(args.input)
    plain = signed_to_plain(sid)
    reduced = expand_to_pairs(plain)
    sums = singleton_sums(plain)
    elapsed = (time.perf_counter() - started) * 1000.0
    if args.json:
        _emit_json(
            {
                "command": "reduce",
                "input": provenance,
                "table": _table_json(reduced, sums),
                "elapsed_ms": elapsed,
            }
        )
    else:
        _print_table(reduced, sums)
    return EXIT_OK


def _parse_family(family: str, params: list[str]) -> tuple[int, SignedIdentity, str]:
    def want(count: int) -> None:
        if len(params) != count:
            raise _UsageError(
                f"family {family!r} takes {count} parameter(s), got {len(params)}"
            )

    if family == "frechet":
        want(0)
        ident = frechet()
        return ident.n, plain_as_signed(ident), "gen frechet"
    if family == "parallelogram":
        want(0)
        sid = parallelogram()
        return sid.n, sid, "gen parallelogram"
    if family == "ksubset":
        want(2)
        n, k = (int(p) for p in params)
        ident = k_subset_identity(n, k)
        return ident.n, plain_as_signed(ident), f"gen ksubset {n} {k}"
    if family == "alternating":
        want(1)
        n = int(params[0])
        ident = alternating_identity(n)
        return ident.n, plain_as_signed(ident), f"gen alternating {n}"
    if family == "ppd":
        want(1)
        n = int(params[0])
        sid = parallelepiped_identity(n)
        return sid.n, sid, f"gen ppd {n}"
    if family == "product":
        if len(params) < 2:
            raise _UsageError("family 'product' needs at least two rational scalars")
        scalars = [Fraction(p) for p in params]
        sid = product_family_identity(scalars)
        return sid.n, sid, "gen product " + " ".join(params)
    raise _UsageError(f"unknown family {family!r}")


def _cmd_gen(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    try:
        n, sid, label = _parse_family(args.family, args.params)
    except (ValueError, ZeroDivisionError) as exc:
        # int()/Fraction() failures on malformed parameters
        if isinstance(exc, IdentityError):
            raise
        raise _UsageError(f"bad parameter for family {args.family!r}: {exc}") from exc
    text = serialize(n, sid, args.format)
    verdict: Optional[Verdict] = None
    if args.verify:
        verdict = verify(signed_to_plain(sid))
    elapsed = (time.perf_counter() - started) * 1000.0
    if args.json:
        report = {
            "command": "gen",
            "input": label,
            "result": {
                "family": args.family,
                "params": args.params,
                "dsl": serialize(n, sid, "dsl"),
                "format": args.format,
                "rendered": text,
                "identity": identity_payload(n, sid),
            },
            "verdict": None
            if verdict is None
            else ("valid" if verdict.valid else "invalid"),
            "certificate": _certificate_json(verdict.certificate)
            if verdict and verdict.certificate
            else None,
            "elapsed_ms": elapsed,
        }
        _emit_json(report)
    else:
        print(text)
        if verdict is not None:
            print("valid" if verdict.valid else "invalid")
            if verdict.certificate:
                print(_describe_certificate(verdict.certificate))
    return EXIT_OK


def _cmd_refute(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    n, sid, provenance = _load_identity(args.input)
    plain = signed_to_plain(sid)
    verdict = verify(plain)
    if not verdict.valid:
        raise _UsageError(
            "refute needs an identity that is valid in inner-product spaces; "
            f"this one is invalid ({_describe_certificate(verdict.certificate)})"
        )
    norm = parse_norm(args.norm)
    hit = find_counterexample(sid, norm, budget=args.budget, seed=args.seed)
    elapsed = (time.perf_counter() - started) * 1000.0
    if args.json:
        result = {
            "norm": norm.label(),
            "found": hit is not None,
            "budget": args.budget,
        }
        if hit is not None:
            result.update(
                {
                    "trial": hit.trial,
                    "trial_kind": hit.kind,
                    "dim": hit.assignment.dim,
                    "assignment": [list(v) for v in hit.assignment.vectors],
                    "residual": hit.residual,
                    "scale": hit.scale,
                }
            )
        _emit_json(
            {
                "command": "refute",
                "input": provenance,
                "result": result,
                "seed": args.seed,
                "elapsed_ms": elapsed,
            }
        )
    else:
        if hit is None:
            print(
                f"no violation found under {norm.label()} within budget "
                f"{args.budget}, seed {args.seed} (not a proof of validity "
                "in that norm)"
            )
        else:
            print(
                f"violation under {norm.label()} at trial {hit.trial} "
                f"({hit.kind}, seed {args.seed}):"
            )
            for i, vec in enumerate(hit.assignment.vectors):
                print(f"  x{i + 1} = {tuple(round(c, 6) for c in vec)}")
            print(f"  residual = {hit.residual:.9g} (scale {hit.scale:.9g})")
    return EXIT_OK if hit is not None else EXIT_EXHAUSTED


def _parse_vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(Fraction(part)) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"malformed vector {text!r}: {exc}") from exc


def _cmd_fdprobe(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    norm = parse_norm(args.norm)
    x = _parse_vector(args.x)
    y = _parse_vector(args.y)
    probe = degree_probe(x, y, norm)
    elapsed = (time.perf_counter() - started) * 1000.0
    if args.json:
        _emit_json(
            {
                "command": "fdprobe",
                "input": f"fdprobe {norm.label()}",
                "result": {
                    "norm": norm.label(),
                    "x": list(x),
                    "y": list(y),
                    "max_abs_third_difference": probe.max_abs_third_difference,
                    "is_quadratic_on_grid": probe.is_quadratic_on_grid,
                    "samples": [
                        {"r": r, "s": s, "third_difference": d}
                        for r, s, d in probe.samples
                    ],
                },
                "elapsed_ms": elapsed,
            }
        )
    else:
        print(f"norm {norm.label()}, x = {x}, y = {y}")
        print(f"max |third difference| = {probe.max_abs_third_difference:.9g}")
        print(f"quadratic on grid: {'yes' if probe.is_quadratic_on_grid else 'no'}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    n, sid, provenance = _load_identity(args.input)
    artifacts = write_report(
        sid,
        Path(args.out),
        title=f"residual sweep: {provenance}",
        trials=args.trials,
        seed=args.seed,
    )
    elapsed = (time.perf_counter() - started) * 1000.0
    files = [
        str(artifacts.residuals_csv),
        str(artifacts.probe_csv),
        str(artifacts.residuals_figure),
        str(artifacts.probe_figure),
    ]
    if args.json:
        _emit_json(
            {
                "command": "report",
                "input": provenance,
                "result": {
                    "out_dir": str(Path(args.out)),
                    "files": files,
                    "sweep_rows": len(artifacts.sweep_rows),
                    "probe_rows": len(artifacts.probe_rows),
                },
                "seed": args.seed,
                "elapsed_ms": elapsed,
            }
        )
    else:
        print(f"wrote {len(files)} files to {args.out}:")
        for f in files:
            print(f"  {f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normid",
        description="Verify squared-norm identities exactly and hunt for "
        "violations under norms not induced by an inner product.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_input(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "input",
            nargs="?",
            default="-",
            help="identity file in the N{...} format, or - for stdin (default)",
        )

    p_verify = sub.add_parser("verify", help="decide validity in inner-product spaces")
    add_input(p_verify)
    p_verify.add_argument("--json", action="store_true", help="machine-readable report")
    p_verify.add_argument(
        "--full-table",
        action="store_true",
        help="include every reduced coefficient and per-index sum",
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_reduce = sub.add_parser(
        "reduce", help="print the pair/singleton reduction and per-index sums"
    )
    add_input(p_reduce)
    p_reduce.add_argument("--json", action="store_true")
    p_reduce.set_defaults(func=_cmd_reduce)

    p_gen = sub.add_parser("gen", help="emit a built-in identity family")
    p_gen.add_argument(
        "family",
        choices=["frechet", "parallelogram", "ksubset", "alternating", "ppd", "product"],
    )
    p_gen.add_argument(
        "params",
        nargs="*",
        help="family parameters: ksubset N K; alternating N; ppd N; "
        "product A1 A2 [...] (exact rationals like -1/2)",
    )
    p_gen.add_argument("--json", action="store_true")
    p_gen.add_argument("--verify", action="store_true", help="also run the verifier")
    p_gen.add_argument(
        "--format", choices=["dsl", "latex", "json"], default="dsl",
        help="text rendering for the identity itself",
    )
    # Rationals like -1/2 must be usable as product-family parameters.
    p_gen._negative_number_matcher = re.compile(r"^-\d")
    p_gen.set_defaults(func=_cmd_gen)

    p_refute = sub.add_parser(
        "refute",
        help="search for vectors violating a valid identity under another norm",
    )
    add_input(p_refute)
    p_refute.add_argument(
        "--norm", required=True, help="lp:P (1 <= P <= 64) or linf"
    )
    p_refute.add_argument("--budget", type=int, default=10000)
    p_refute.add_argument("--seed", type=int, default=0)
    p_refute.add_argument("--json", action="store_true")
    p_refute.set_defaults(func=_cmd_refute)

    p_probe = sub.add_parser(
        "fdprobe",
        help="third-difference probe of g(t) = ||x + t y||^2 under a norm",
    )
    p_probe.add_argument("--norm", required=True)
    p_probe.add_argument("--x", required=True, help="comma-separated components")
    p_probe.add_argument("--y", required=True, help="comma-separated components")
    p_probe.add_argument("--json", action="store_true")
    # Let values like "-1,1" pass as option values instead of being
    # mistaken for flags (fdprobe has no single-dash options).
    p_probe._negative_number_matcher = re.compile(r"^-\d")
    p_probe.set_defaults(func=_cmd_fdprobe)

    p_report = sub.add_parser(
        "report",
        help="write residual-sweep and degree-probe CSVs plus figures",
    )
    add_input(p_report)
    p_report.add_argument("--out", default="normid-report", help="output directory")
    p_report.add_argument("--trials", type=int, default=200)
    p_report.add_argument("--seed", type=int, default=0)
    p_report.add_argument("--json", action="store_true")
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (IdentityError, ResourceLimitError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
