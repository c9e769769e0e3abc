"""Command-line front end: ``ssforms {table,graph,csidh,verify,hilbert}``.

Exit codes: 0 success, 1 input error, 2 theorem violation, 3 exhausted bound
or precision.  ``verify`` instead exits with the number of failing suites.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .errors import DomainError, SSFormsError
from .hilbert import CACHE_ENV, HilbertCache, hilbert_class_poly, set_default_cache


def _add_common(sp):
    sp.add_argument("--format", choices=("json", "csv", "dot", "text"), default="text")
    sp.add_argument("--cache-dir", help=f"Hilbert polynomial cache directory ({CACHE_ENV} overrides)")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes where supported")
    sp.add_argument("--out", help="write the main output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ssforms", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"ssforms {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("table", help="oriented correspondence table for one prime")
    sp.add_argument("--p", type=int, required=True)
    _add_common(sp)

    sp = sub.add_parser("graph", help="F_p-isogeny graph annotated with forms")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--plot", help="render the graph to this image file")
    _add_common(sp)

    sp = sub.add_parser("csidh", help="toy CSIDH exchange and form-side recovery")
    sp.add_argument("--ells", default="3,5,7", help="comma-separated odd primes, p = 4*prod - 1")
    sp.add_argument("--bound", type=int, default=1, help="private exponents drawn from [-bound, bound]")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--key-a", help="explicit exponent vector, e.g. 1,0,0")
    sp.add_argument("--key-b")
    _add_common(sp)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--p", type=int)
    sp.add_argument("--p-max", type=int)
    sp.add_argument("--suite", action="append", default=None,
                    help="counts, uniqueness, compatibility, vertical, classnumber, hilbert or all")
    sp.add_argument("--plot", help="render a summary figure to this image file")
    _add_common(sp)

    sp = sub.add_parser("hilbert", help="Hilbert class polynomial H_D")
    sp.add_argument("D", type=int)
    sp.add_argument("--mod", type=int, help="also reduce modulo this prime")
    _add_common(sp)
    return ap


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _setup_cache(args) -> None:
    directory = os.environ.get(CACHE_ENV) or args.cache_dir
    set_default_cache(HilbertCache(directory))


def cmd_table(args) -> int:
    from .correspondence import orient

    table = orient(args.p)
    if args.format == "json":
        _emit(args, table.to_json())
    elif args.format == "csv":
        _emit(args, table.to_csv())
    elif args.format == "text":
        _emit(args, table.to_text())
    else:
        raise DomainError("table supports json, csv and text")
    return 0


def cmd_graph(args) -> int:
    from .correspondence import graph_report, graph_to_dot

    report = graph_report(args.p, args.ell)
    if args.format == "json":
        _emit(args, json.dumps(report, indent=2))
    elif args.format == "csv":
        raise DomainError("graph supports dot, json and text")
    elif args.format == "dot":
        _emit(args, graph_to_dot(report))
    else:
        names = {v["id"]: f'{v["name"]} {tuple(v["form"])}' for v in report["vertices"]}
        lines = [f'{names[e["source"]]} -- {names[e["target"]]}' + (f'  [{e["annotation"]}]' if e["annotation"] else "")
                 for e in report["edges"]]
        _emit(args, "\n".join(lines))
    if args.plot:
        from .plotting import plot_graph

        plot_graph(report, args.plot)
    return 0


def _parse_key(text: str, n: int) -> tuple[int, ...]:
    key = tuple(int(x) for x in text.split(","))
    if len(key) != n:
        raise DomainError(f"key {text!r} needs {n} entries")
    return key


def cmd_csidh(args) -> int:
    from .correspondence import orient
    from .csidh import CsidhParams, exchange

    try:
        ells = tuple(int(x) for x in args.ells.split(","))
    except ValueError:
        raise DomainError(f"bad prime list {args.ells!r}") from None
    params = CsidhParams(ells, args.bound)
    table = orient(params.p)
    rng = random.Random(args.seed)
    transcripts = []
    for _ in range(args.trials):
        ka = _parse_key(args.key_a, len(ells)) if args.key_a else params.random_key(rng)
        kb = _parse_key(args.key_b, len(ells)) if args.key_b else params.random_key(rng)
        transcripts.append(exchange(params, ka, kb, table))
    if args.format == "json":
        _emit(args, json.dumps([t.as_dict() for t in transcripts], indent=2))
    else:
        out = []
        for t in transcripts:
            out.append(f"p = {t.p}  a = {t.key_a}  b = {t.key_b}")
            out.append(f"  public  j(E_A) = {t.j_a} form {t.form_a}   j(E_B) = {t.j_b} form {t.form_b}")
            out.append(f"  honest  j(E_AB) = {t.j_shared}")
            for i, (f, j) in enumerate(t.candidates):
                mark = "  <- match" if i == t.matched else ""
                out.append(f"  candidate {i}: (4,0,{t.p}) f_A^+- f_B^+- = {f}  j = {j}{mark}")
            out.append("  recovered" if t.ok else "  NOT recovered")
        _emit(args, "\n".join(out))
    return 0 if all(t.ok for t in transcripts) else 2


def cmd_verify(args) -> int:
    from .suites import expand_suites, prime_list, run_suite

    suites = expand_suites(args.suite or ["all"])
    needs_primes = any(s not in ("classnumber", "hilbert") for s in suites)
    primes = prime_list(args.p, args.p_max) if needs_primes else []
    results = [run_suite(s, primes, args.jobs) for s in suites]
    if args.format == "json":
        _emit(args, json.dumps([r.as_dict() for r in results], indent=2))
    elif args.format == "csv":
        rows = ["suite,checked,failed,seconds,passed"]
        rows += [f"{r.suite},{r.checked},{len(r.failures)},{r.seconds:.2f},{r.passed}" for r in results]
        _emit(args, "\n".join(rows))
    else:
        lines = []
        for r in results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.suite:<14} {r.checked:>6} checks  {r.seconds:7.2f}s")
            lines.extend(f"      {msg}" for msg in r.failures[:10])
        _emit(args, "\n".join(lines))
    if args.plot:
        from .plotting import plot_verify

        plot_verify([r.as_dict() for r in results], args.plot)
    return sum(not r.passed for r in results)


def cmd_hilbert(args) -> int:
    H = hilbert_class_poly(args.D)
    if args.format == "json":
        d = {"D": H.D, "coeffs": list(H.coeffs)}
        if args.mod:
            d["mod"] = args.mod
            d["coeffs_mod"] = list(H.mod_p(args.mod).coeffs)
        _emit(args, json.dumps(d))
    elif args.mod:
        from .numeric import is_prime

        if not is_prime(args.mod):
            raise DomainError(f"{args.mod} is not prime")
        _emit(args, str(H.mod_p(args.mod)))
    else:
        _emit(args, str(H))
    return 0


COMMANDS = {
    "table": cmd_table,
    "graph": cmd_graph,
    "csidh": cmd_csidh,
    "verify": cmd_verify,
    "hilbert": cmd_hilbert,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _setup_cache(args)
        return COMMANDS[args.command](args)
    except SSFormsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
