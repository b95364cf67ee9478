#!/usr/bin/env python3
"""Exact computation in iterated central amalgamated free products.

Usage:
    python amalgam.py reduce "h1(7/5)"
    python amalgam.py eq "h0(1/5) h1(2)^-1" "h1(-2) h0(1/5)"
    python amalgam.py phi "[h1(1/5), h0(1/5)]" --json
    python amalgam.py witness derived --depth 5 --k 10 --out cert.json
    python amalgam.py check lemma21 --samples 10000 --seed 7
    python amalgam.py verify cert.json
"""

import argparse
import json
import sys
import time
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

import config
from modules.amalgam_core import FactorSystem, GroupElement, eq, reduce
from modules.errors import AmalgamError, InvalidParams, VerificationFailed
from modules.homomorphisms import make_hom, phi_eval, psi_eval
from modules.instances import INSTANCE_KINDS, make_instance
from modules.parsers import format_element, format_form, parse_word
from modules.suites import SUITES, run_suite
from modules.witnesses import (
    DerivedCertificate,
    SubnormalCertificate,
    certificate_from_json,
    certificate_to_json,
    commutator_witness,
    derived_escape,
    escape_witness,
    subnormal_witness,
    verify,
)

# status and errors; stdout carries results only
console = Console(stderr=True)
out = Console(highlight=False, emoji=False, soft_wrap=True)


def parse_args(argv: list[str] | None = None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--prime", type=int, help=f"Prime p (default: AMALGAM_PRIME or {config.PRIME})"
    )
    common.add_argument(
        "--instance",
        choices=INSTANCE_KINDS,
        help=f"Factor system (default: AMALGAM_INSTANCE or {config.INSTANCE})",
    )
    common.add_argument(
        "--exponent",
        type=int,
        help=f"Cyclic instance modulus p^L (default: AMALGAM_EXPONENT or {config.EXPONENT})",
    )
    common.add_argument(
        "--seed", type=int, help=f"Random seed (default: AMALGAM_SEED or {config.SEED})"
    )
    common.add_argument("--json", action="store_true", help="Machine-readable output")
    common.add_argument(
        "--no-timing",
        action="store_true",
        help="Report elapsed_ms as 0 so --json output is byte-stable",
    )

    parser = argparse.ArgumentParser(
        description="Normal forms, homomorphisms and escape certificates for iterated central amalgams",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Examples:\n"
            '  python amalgam.py reduce "h1(7/5)" --prime 5\n'
            '  python amalgam.py phi "[h1(1/5), h0(1/5)]"\n'
            "  python amalgam.py witness derived --depth 5 --k 10\n"
            "  python amalgam.py check axioms --instance heisenberg --prime 3\n"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="Canonical form of a word")
    p.add_argument("expr")
    p = sub.add_parser("eq", parents=[common], help="Compare two words (exit 1 when different)")
    p.add_argument("expr1")
    p.add_argument("expr2")
    for name, text in (
        ("level", "Least n with the element in G_n"),
        ("phi", "Image under the homomorphism phi"),
        ("psi", "Image under psi, a unipotent 2x2 matrix"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("expr")

    witness = sub.add_parser("witness", help="Generate a certificate")
    wsub = witness.add_subparsers(dest="kind", required=True)
    for name, text in (
        ("escape", "Conjugate of h above level k"),
        ("commutator", "Commutator [g, h] above level k"),
        ("subnormal", "Element of the depth-s normal-closure chain of h above level k"),
        ("derived", "Non-trivial depth-d iterated commutator above level k"),
    ):
        p = wsub.add_parser(name, parents=[common], help=text)
        if name == "derived":
            p.add_argument("--depth", type=int, required=True)
            p.add_argument("--within", help="Build every leaf as a conjugate of this element")
            p.add_argument(
                "--retry-limit",
                type=int,
                default=config.RETRY_LIMIT,
                help=f"Restarts before giving up (default: {config.RETRY_LIMIT})",
            )
        else:
            p.add_argument("--h", required=True, dest="h_expr", metavar="EXPR")
        if name == "subnormal":
            p.add_argument("--depth", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--out", help="Write the certificate to FILE instead of stdout")

    check = sub.add_parser("check", help="Run a randomized or exhaustive suite")
    csub = check.add_subparsers(dest="suite", required=True)
    for name in SUITES:
        p = csub.add_parser(name, parents=[common])
        p.add_argument(
            "--samples",
            type=int,
            default=config.SAMPLES,
            help=f"Random samples (default: AMALGAM_SAMPLES or {config.SAMPLES})",
        )
        p.add_argument("--max-level", type=int, default=config.MAX_LEVEL)
        p.add_argument("--max-length", type=int, default=config.MAX_WORD_LENGTH)
        if name == "exhaustive":
            p.add_argument("--length", type=int, default=4, help="Longest word enumerated")

    p = sub.add_parser("verify", parents=[common], help="Replay a certificate file")
    p.add_argument("file")
    return parser.parse_args(argv)


def build_instance(args) -> FactorSystem:
    # CLI arg > env var > default
    return make_instance(
        args.instance or config.INSTANCE,
        args.prime if args.prime is not None else config.PRIME,
        exponent=args.exponent if args.exponent is not None else config.EXPONENT,
    )


def resolve_seed(args) -> int:
    return args.seed if args.seed is not None else config.SEED


def element(src: str, sys: FactorSystem) -> GroupElement:
    return reduce(parse_word(src, sys), sys)


# ─── Subcommands ─────────────────────────────────────────────────
# Each returns (result dict for --json, text for the console, exit code).


def cmd_reduce(args, sys):
    g = element(args.expr, sys)
    form = format_form(g.cf, sys)
    result = {"form": form, "word": format_element(g, sys), "level": g.level}
    return result, f"{form}, level={g.level}", 0


def cmd_eq(args, sys):
    same = eq(element(args.expr1, sys), element(args.expr2, sys))
    return {"equal": same}, str(same).lower(), 0 if same else 1


def cmd_level(args, sys):
    g = element(args.expr, sys)
    return {"level": g.level}, str(g.level), 0


def cmd_phi(args, sys):
    hom = make_hom(sys, resolve_seed(args))
    value = hom.target.format(phi_eval(element(args.expr, sys), hom))
    return {"target": hom.target.name, "value": value}, value, 0


def cmd_psi(args, sys):
    hom = make_hom(sys, resolve_seed(args))
    rows = psi_eval(element(args.expr, sys), hom).rows()
    table = Table(show_header=False, box=None)
    for row in rows:
        table.add_row(*row)
    return {"matrix": rows}, table, 0


def cmd_witness(args, sys):
    seed = resolve_seed(args)
    if args.kind == "escape":
        cert = escape_witness(element(args.h_expr, sys), args.k, sys)
    elif args.kind == "commutator":
        cert = commutator_witness(element(args.h_expr, sys), args.k, sys)
    elif args.kind == "subnormal":
        cert = subnormal_witness(element(args.h_expr, sys), args.depth, args.k, sys)
    else:
        within = element(args.within, sys) if args.within else None
        cert = derived_escape(
            args.depth, args.k, sys, seed_element=within, retry_limit=args.retry_limit
        )
    data = certificate_to_json(cert, sys, seed)
    if args.out:
        try:
            Path(args.out).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            raise InvalidParams(f"cannot write {args.out}: {e}") from e
        console.print(
            f"[green]Certificate written:[/green] {args.out} "
            f"(result level {cert.result.level} > {cert.claimed_floor})"
        )
        summary = {"out": args.out, "type": data["type"], "level": cert.result.level}
        return (summary if args.json else None), None, 0
    # --json wraps the certificate in the envelope; plain output is the bare certificate
    if args.json:
        return data, None, 0
    return None, json.dumps(data, indent=2), 0


def cmd_check(args, sys):
    options = {"max_level": args.max_level, "max_length": args.max_length}
    if args.suite == "exhaustive":
        options["length"] = args.length
    report = run_suite(args.suite, sys, args.samples, resolve_seed(args), **options)
    return report, report_table(report), 0 if report["failures"] == 0 else 1


def cmd_verify(args, _sys):
    try:
        data = json.loads(Path(args.file).read_text(encoding="utf-8"))
    except OSError as e:
        raise VerificationFailed(f"cannot read {args.file}: {e}") from e
    except json.JSONDecodeError as e:
        raise VerificationFailed(f"{args.file} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise VerificationFailed(f"{args.file} does not hold a certificate object")
    # the certificate names its own instance
    try:
        sys = make_instance(
            data.get("instance", config.INSTANCE),
            data.get("prime", config.PRIME),
            exponent=data.get("exponent", config.EXPONENT),
        )
    except (AmalgamError, TypeError) as e:
        raise VerificationFailed(f"{args.file} names an unusable instance: {e}") from e
    cert = certificate_from_json(data, sys)
    valid = verify(cert, sys)
    result = {
        "type": data["type"],
        "instance": sys.describe(),
        "valid": valid,
        "level": cert.result.level if valid else None,
    }
    if isinstance(cert, (SubnormalCertificate, DerivedCertificate)):
        result["depth"] = cert.depth
    text = "[green]valid[/green]" if valid else "[red]INVALID[/red]"
    return result, text, 0 if valid else VerificationFailed.exit_code


COMMANDS = {
    "reduce": cmd_reduce,
    "eq": cmd_eq,
    "level": cmd_level,
    "phi": cmd_phi,
    "psi": cmd_psi,
    "witness": cmd_witness,
    "check": cmd_check,
    "verify": cmd_verify,
}


def report_table(report: dict) -> Table:
    passed = report["failures"] == 0
    table = Table(title=f"check {report['suite']}")
    table.add_column("Item", style="bold")
    table.add_column("Value")
    table.add_row("Instance", ", ".join(f"{k}={v}" for k, v in report["instance"].items()))
    table.add_row("Samples", str(report["samples"]))
    table.add_row(
        "Failures",
        f"[green]{report['failures']}[/green]" if passed else f"[red]{report['failures']}[/red]",
    )
    for example in report["examples"]:
        table.add_row("Example", example)
    return table


def command_name(args) -> str:
    if args.command == "witness":
        return f"witness {args.kind}"
    if args.command == "check":
        return f"check {args.suite}"
    return args.command


def run_from_cli(args) -> int:
    """Execute one subcommand and print its result."""
    started = time.perf_counter()
    try:
        sys_ = None if args.command == "verify" else build_instance(args)
        result, text, code = COMMANDS[args.command](args, sys_)
    except AmalgamError as e:
        console.print(f"[red]{type(e).__name__}: {e}[/red]")
        hypothesis = getattr(e, "hypothesis", "")
        if hypothesis:
            console.print(f"[dim]failed hypothesis: {hypothesis}[/dim]")
        return e.exit_code
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user.[/yellow]")
        return 130

    if result is None:
        if text is not None:
            out.print(text, markup=False)
        return code

    if args.json:
        info = sys_.describe() if sys_ is not None else result["instance"]
        envelope = {
            "command": command_name(args),
            "instance": info["kind"],
            "prime": info["prime"],
            "result": result,
            "elapsed_ms": 0 if args.no_timing else round((time.perf_counter() - started) * 1000),
        }
        out.print(json.dumps(envelope, indent=2), markup=False)
    elif isinstance(text, str) and args.command in ("reduce", "eq", "level", "phi"):
        out.print(text, markup=False)
    else:
        out.print(text)

    if args.command == "check" and not args.json:
        if code == 0:
            console.print(Panel("[bold green]Suite passed.[/bold green]", style="green"))
        else:
            console.print(Panel("[bold red]Suite failed.[/bold red]", style="red"))
    return code


def main():
    args = parse_args()
    return_code = run_from_cli(args)
    sys.exit(return_code)


if __name__ == "__main__":
    main()
