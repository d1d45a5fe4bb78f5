"""Command-line front end.

Subcommands parse JSON documents (strict: unknown fields are rejected),
dispatch to the library, and emit either human-readable text or canonical
JSON (sorted keys, fixed separators, so identical inputs give byte-identical
output). Exit codes: 0 yes / verified / positive, 1 no / failed, 2
inconclusive or error.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from .isometries import (
    Isometry,
    IsometryError,
    TwistElement,
    matrix_from_json,
    matrix_to_json,
    power_to_integral,
    twist,
    twist_split_certificate,
)
from .lattices import (
    Lattice,
    LatticeError,
    NAMED_LATTICES,
    lattice_from_json,
    lattice_to_json,
    named_lattice,
)
from .polynomials import NotSalemError, is_salem, poly_from_json, poly_to_json
from .positivity import PositivityError, is_positive
from .realize import (
    RealizeError,
    Seed,
    build_k3_certificate,
    certificate_from_json,
    certificate_to_json,
    seed_for,
    stable_realizable,
    verify_certificate,
)


class InputError(ValueError):
    pass


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}")


def _strict_object(data, required, where):
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    unknown = set(data) - set(required)
    if unknown:
        raise InputError(f"{where}: unknown fields {sorted(unknown)}")
    missing = set(required) - set(data)
    if missing:
        raise InputError(f"{where}: missing fields {sorted(missing)}")
    return data


def _emit(payload, text_lines, fmt):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in text_lines:
            print(line)


def _load_poly(path):
    try:
        return poly_from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}")


def _load_pair(path):
    data = _strict_object(_load_json(path), ("lattice", "isometry"), path)
    try:
        L = lattice_from_json(data["lattice"])
        M = matrix_from_json(data["isometry"])
        return L, Isometry(L, M)
    except (ValueError, LatticeError, IsometryError) as exc:
        raise InputError(f"{path}: {exc}")


def cmd_certify_salem(args):
    poly = _load_poly(args.polynomial)
    try:
        cert = is_salem(poly)
    except NotSalemError as exc:
        _emit(
            {"accepted": False, "reason": exc.reason},
            [f"rejected: {exc.reason}"],
            args.format,
        )
        return 1
    lo, hi = cert.lambda_interval
    _emit(
        {
            "accepted": True,
            "degree": cert.degree,
            "trace_polynomial": poly_to_json(cert.trace_polynomial),
            "lambda_interval": [str(lo), str(hi)],
            "quadratic_degenerate": cert.quadratic_degenerate,
        },
        [
            f"Salem polynomial of degree {cert.degree}",
            f"trace polynomial: {cert.trace_polynomial}",
            f"lambda in ({lo}, {hi}]",
            f"quadratic degenerate: {cert.quadratic_degenerate}",
        ],
        args.format,
    )
    return 0


def cmd_realizable(args):
    poly = _load_poly(args.polynomial)
    try:
        decision = stable_realizable(poly, args.surface_class, projective=args.projective)
    except NotSalemError as exc:
        _emit({"error": f"not a Salem polynomial: {exc.reason}"},
              [f"error: not a Salem polynomial: {exc.reason}"], args.format)
        return 2
    payload = {
        "realizable": decision.answer,
        "reason": decision.reason,
        "clause": decision.clause,
        "class": args.surface_class,
        "projective": args.projective,
    }
    _emit(payload, [("yes: " if decision.answer else "no: ") + decision.reason], args.format)
    return 0 if decision.answer else 1


def _seed_from_json(path):
    data = _strict_object(
        _load_json(path), ("salem", "S", "f_S", "R_rest"), path
    )
    try:
        return Seed(
            salem=poly_from_json(data["salem"]),
            S=lattice_from_json(data["S"]),
            f_S=tuple(tuple(int(Fraction(x)) for x in row) for row in matrix_from_json(data["f_S"])),
            R_rest=lattice_from_json(data["R_rest"]),
        )
    except (ValueError, LatticeError) as exc:
        raise InputError(f"{path}: {exc}")


def cmd_build_certificate(args):
    poly = _load_poly(args.polynomial)
    seed = _seed_from_json(args.seed) if args.seed else seed_for(poly)
    try:
        cert = build_k3_certificate(
            poly,
            seed=seed,
            box=args.box,
            prime_cap=args.prime_cap,
            congruence_prime=args.congruence_prime,
        )
    except (RealizeError, NotSalemError) as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    doc = certificate_to_json(cert)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")
        _emit(
            {"written": args.output, "power": cert.power},
            [f"certificate written to {args.output} (power {cert.power})"],
            args.format,
        )
    else:
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    return 0


def cmd_verify(args):
    try:
        cert = certificate_from_json(_load_json(args.certificate))
    except ValueError as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    ok, items = verify_certificate(cert)
    payload = {
        "verified": ok,
        "items": [{"check": n, "passed": p, "detail": d} for n, p, d in items],
    }
    lines = [("verified" if ok else "FAILED")] + [
        f"  [{'ok' if p else 'FAIL'}] {n}: {d}" for n, p, d in items
    ]
    _emit(payload, lines, args.format)
    return 0 if ok else 1


def cmd_positivity(args):
    L, f = _load_pair(args.pair)
    start = time.perf_counter()
    try:
        report = is_positive(L, f, orbit_bound=args.orbit_bound)
    except (PositivityError, IsometryError, NotSalemError) as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    elapsed = time.perf_counter() - start
    payload = {
        "status": report.status,
        "method": report.method,
        "witnesses": [
            {"vector": [str(x) for x in v], "kind": kind} for v, kind in report.witnesses
        ],
        "search_bound": None if report.search_bound is None else str(report.search_bound),
        "candidate_count": report.candidate_count,
    }
    # timing goes to the text report only; JSON output stays byte-deterministic
    lines = [f"{report.status} (method: {report.method}, {elapsed:.3f}s)"] + [
        f"  witness {list(v)} [{kind}]" for v, kind in report.witnesses
    ]
    _emit(payload, lines, args.format)
    return 0 if report.status == "positive" else (1 if report.status == "not_positive" else 2)


def cmd_twist(args):
    data = _strict_object(_load_json(args.input), ("lattice", "isometry", "element"), args.input)
    try:
        L = lattice_from_json(data["lattice"])
        f = Isometry(L, matrix_from_json(data["isometry"]))
        element = TwistElement([int(c) for c in data["element"]])
        twisted, f2 = twist(L, f, element)
    except (ValueError, LatticeError, IsometryError) as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    payload = {
        "lattice": lattice_to_json(twisted),
        "isometry": matrix_to_json(f2.matrix),
        "determinant": str(twisted.determinant()),
    }
    _emit(payload, [f"twisted gram: {twisted.gram}", f"determinant: {twisted.determinant()}"], args.format)
    return 0


def cmd_power_integral(args):
    L, f = _load_pair(args.pair)
    try:
        n, fn = power_to_integral(L, f)
    except (IsometryError, ArithmeticError) as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    payload = {"power": n, "matrix": matrix_to_json(fn.matrix)}
    _emit(payload, [f"f^{n} is integral", f"matrix: {fn.matrix}"], args.format)
    return 0


def cmd_twist_split_check(args):
    data = _strict_object(
        _load_json(args.input),
        ("lattice", "isometry", "element", "exponent", "prime"),
        args.input,
    )
    try:
        L = lattice_from_json(data["lattice"])
        f = Isometry(L, matrix_from_json(data["isometry"]))
        element = TwistElement([int(c) for c in data["element"]])
        report = twist_split_certificate(L, f, element, int(data["exponent"]), int(data["prime"]))
    except (ValueError, LatticeError, IsometryError) as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    payload = {
        "passed": report.passed,
        "problems": list(report.problems),
        "determinant": str(report.determinant),
        "p_valuation": report.p_valuation,
        "p_part_orders": list(report.p_part_orders),
    }
    lines = [("pass" if report.passed else "fail")] + [f"  {p}" for p in report.problems]
    _emit(payload, lines, args.format)
    return 0 if report.passed else 1


def cmd_lattice(args):
    try:
        L = named_lattice(args.name)
    except LatticeError as exc:
        _emit({"error": str(exc)}, [f"error: {exc}"], args.format)
        return 2
    _emit(
        lattice_to_json(L),
        [f"{args.name}: rank {L.rank}, signature {L.signature()}, det {L.determinant()}"],
        args.format,
    )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="salemk3",
        description="Salem numbers as dynamical degrees: decisions and lattice certificates",
    )
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify-salem", help="certify a Salem polynomial")
    p.add_argument("polynomial")
    p.set_defaults(func=cmd_certify_salem)

    p = sub.add_parser("realizable", help="stable realizability decision")
    p.add_argument("polynomial")
    p.add_argument("--class", dest="surface_class", required=True,
                   choices=("torus", "k3", "enriques"))
    p.add_argument("--projective", action="store_true")
    p.set_defaults(func=cmd_realizable)

    p = sub.add_parser("build-certificate", help="construct a projective K3 certificate")
    p.add_argument("polynomial")
    p.add_argument("--seed", default=None, help="seed JSON path (defaults to the curated library)")
    p.add_argument("--box", type=int, default=30, help="norm-element search box")
    p.add_argument("--prime-cap", type=int, default=100000, help="split-prime search cap")
    p.add_argument("--congruence-prime", action="store_true",
                   help="restrict to primes p = 1 mod 8|det R| above |disc s| (can be very slow)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_build_certificate)

    p = sub.add_parser("verify", help="verify a realization certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("positivity", help="chamber-preservation report")
    p.add_argument("pair", help="JSON with fields lattice and isometry")
    p.add_argument("--orbit-bound", type=int, default=32)
    p.set_defaults(func=cmd_positivity)

    p = sub.add_parser("twist", help="twist a lattice by an element of Z[f + f^-1]")
    p.add_argument("input", help="JSON with fields lattice, isometry, element")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("power-integral", help="smallest integral power of a rational isometry")
    p.add_argument("pair")
    p.set_defaults(func=cmd_power_integral)

    p = sub.add_parser("twist-split-check", help="split-prime twist certificate")
    p.add_argument("input", help="JSON with lattice, isometry, element, exponent, prime")
    p.set_defaults(func=cmd_twist_split_check)

    p = sub.add_parser("lattice", help="emit a named lattice as JSON")
    p.add_argument("name", choices=NAMED_LATTICES)
    p.set_defaults(func=cmd_lattice)

    return parser


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": str(exc)}) if args.format == "json" else f"error: {exc}")
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
