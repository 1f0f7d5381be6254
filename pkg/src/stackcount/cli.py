"""Command-line interface: ``stackcount <command> [options]``.

All reports go to stdout (or ``--out``) as JSON with sorted keys, embedding
the package version and the validated run configuration.  Exit codes: 0 ok,
1 identity violated, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .counting import BudgetExceeded, default_budget
from .quiver import CyclicQuiverError, Quiver, QuiverParseError, parse_dvec, parse_quiver
from .series import series_to_json
from .stacks import (
    ai_series,
    alpha_invariants,
    alpha_value,
    closed_form_oracles,
    extract_ai,
    h_series_numeric,
    h_series_symbolic,
    kac_polynomials,
    verify_main_theorem,
)
from .volume import NotPolynomialCount, is_prime_power

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

IDENTITIES = ("main-theorem", "feit-fine", "fine-herstein", "gauss", "qbinomial", "vector-spaces")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    quiver: Optional[str] = None
    dmax: Optional[list] = None
    s1: Optional[str] = None
    s2: Optional[str] = None
    fields: Optional[list] = None
    base_q: Optional[int] = None
    length: Optional[int] = None
    degree_bound: Optional[int] = None
    budget: int = 0
    threads: int = 1
    out: Optional[str] = None
    extra: dict = field(default_factory=dict)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _dvec(text: str) -> list[int]:
    try:
        return list(parse_dvec(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help="iteration budget (default $STACKCOUNT_BUDGET or 2^34)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker cap; results do not depend on it")
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--pretty", action="store_true", help="human-readable output")

    quiv = argparse.ArgumentParser(add_help=False)
    quiv.add_argument("--quiver", required=True, help="quiver file ('vertices N' then 'u v')")
    quiv.add_argument("--d", "--dmax", dest="dmax", type=_dvec, required=True,
                      help="maximal dimension vector, e.g. 2,2")
    quiv.add_argument("--s1", choices=["0", "*", "a"], default="0")
    quiv.add_argument("--s2", choices=["0", "*", "a"], default="0")
    quiv.add_argument("--fields", type=_int_list, default=None,
                      help="sample field sizes for polynomial fits")
    quiv.add_argument("--base-q", type=int, default=None, help="base field size (numeric mode)")
    quiv.add_argument("--length", type=int, default=None, help="entries per numeric coefficient")
    quiv.add_argument("--degree-bound", type=int, default=None)

    p = argparse.ArgumentParser(prog="stackcount", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"stackcount {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("alpha", parents=[common], help="fit alpha_n across fields")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--fields", type=_int_list, required=True)
    a.add_argument("--degree-bound", type=int, default=None)
    a.add_argument("--eval-only", action="store_true", help="raw values, no fit")

    sub.add_parser("hseries", parents=[common, quiv], help="H^{s1,s2} series")
    sub.add_parser("extract-ai", parents=[common, quiv], help="A(t) from H^{s1,s2}")

    v = sub.add_parser("verify", parents=[common], help="check an identity")
    v.add_argument("--identity", choices=IDENTITIES, required=True)
    v.add_argument("--quiver", default=None)
    v.add_argument("--d", "--dmax", dest="dmax", type=_dvec, default=None)
    v.add_argument("--fields", type=_int_list, default=None)
    v.add_argument("--nmax", type=int, default=3)
    v.add_argument("--k", type=int, default=2, help="q-binomial: a = q^k")
    v.add_argument("--mode", choices=["numeric", "symbolic"], default="numeric")
    v.add_argument("--degree-bound", type=int, default=None)

    k = sub.add_parser("kac", parents=[common], help="Kac polynomials from Hua's formula")
    k.add_argument("--quiver", required=True)
    k.add_argument("--bound", type=int, required=True)
    return p


def _load_quiver(path: str) -> Quiver:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_quiver(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read quiver file: {exc}") from None


def _config(args) -> RunConfig:
    budget = args.budget if args.budget is not None else default_budget()
    if budget <= 0:
        raise UsageError("--budget must be positive")
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise UsageError("--threads must be at least 1")
    cfg = RunConfig(command=args.command, budget=budget, threads=threads, out=args.out)
    for name in ("quiver", "dmax", "s1", "s2", "fields", "base_q", "length", "degree_bound"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    for name in ("n", "eval_only", "identity", "nmax", "k", "mode", "bound"):
        if hasattr(args, name):
            cfg.extra[name] = getattr(args, name)
    if cfg.fields is not None:
        bad = [f for f in cfg.fields if not is_prime_power(f)]
        if bad:
            raise UsageError(f"field sizes must be prime powers: {bad}")
        if len(set(cfg.fields)) != len(cfg.fields):
            raise UsageError("field sizes must be distinct")
    if cfg.base_q is not None and not is_prime_power(cfg.base_q):
        raise UsageError(f"--base-q {cfg.base_q} is not a prime power")
    return cfg


def _config_json(cfg: RunConfig) -> dict:
    out = asdict(cfg)
    # the worker count is not part of the result
    out.pop("threads")
    return out


def _check_dvec(quiver: Quiver, dmax):
    if len(dmax) != quiver.nvertices:
        raise UsageError(f"--dmax has {len(dmax)} entries, quiver has {quiver.nvertices} vertices")


def cmd_alpha(cfg: RunConfig) -> tuple[dict, int]:
    n = cfg.extra["n"]
    if n < 1:
        raise UsageError("--n must be positive")
    if cfg.extra.get("eval_only"):
        raw = {str(f): str(alpha_value(n, f, budget=cfg.budget)) for f in cfg.fields}
        return {"n": n, "raw": raw}, EXIT_OK
    poly, cert, raw = alpha_invariants(n, cfg.fields, cfg.degree_bound, budget=cfg.budget)
    return {
        "n": n,
        "polynomial": str(poly),
        "coefficients": poly.to_json(),
        "raw": {str(f): str(v) for f, v in raw.items()},
        "certificate": cert.to_json(),
    }, EXIT_OK


def _series_inputs(cfg: RunConfig):
    quiver = _load_quiver(cfg.quiver)
    _check_dvec(quiver, cfg.dmax)
    if (cfg.fields is None) == (cfg.base_q is None):
        raise UsageError("give exactly one of --fields (symbolic) or --base-q (numeric)")
    return quiver


def cmd_hseries(cfg: RunConfig) -> tuple[dict, int]:
    quiver = _series_inputs(cfg)
    if cfg.base_q is not None:
        rep = h_series_numeric(quiver, cfg.s1, cfg.s2, cfg.dmax, cfg.base_q, cfg.length, cfg.budget)
    else:
        rep = h_series_symbolic(quiver, cfg.s1, cfg.s2, cfg.dmax, cfg.fields,
                                "auto" if cfg.degree_bound is None else cfg.degree_bound,
                                cfg.budget)
    return rep.to_json(), EXIT_OK


def cmd_extract_ai(cfg: RunConfig) -> tuple[dict, int]:
    quiver = _series_inputs(cfg)
    if cfg.base_q is not None:
        h = h_series_numeric(quiver, cfg.s1, cfg.s2, cfg.dmax, cfg.base_q, cfg.length, cfg.budget)
        a = extract_ai(h, cfg.s1, cfg.s2)
        return {"quiver": quiver.to_json(), "s1": cfg.s1, "s2": cfg.s2, "mode": "numeric",
                "ai": series_to_json(a)}, EXIT_OK
    rep = ai_series(quiver, cfg.dmax, cfg.fields, cfg.s1, cfg.s2, cfg.degree_bound, cfg.budget)
    return rep.to_json(), EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    ident = cfg.extra["identity"]
    if ident == "main-theorem":
        if cfg.quiver is None or cfg.dmax is None or cfg.fields is None:
            raise UsageError("main-theorem needs --quiver, --dmax and --fields")
        quiver = _load_quiver(cfg.quiver)
        _check_dvec(quiver, cfg.dmax)
        rep = verify_main_theorem(quiver, cfg.dmax, cfg.fields, cfg.extra["mode"], cfg.budget,
                                  cfg.degree_bound)
        return rep.to_json(), EXIT_OK if rep.ok else EXIT_VIOLATION
    nmax = cfg.extra["nmax"]
    if ident == "feit-fine":
        res = closed_form_oracles("feit_fine", bound=nmax, fields=cfg.fields or (2, 3))
    elif ident == "fine-herstein":
        res = closed_form_oracles("fine_herstein", nmax=nmax, fields=cfg.fields or (2, 3, 4, 5))
    elif ident == "gauss":
        res = closed_form_oracles("gauss", rmax=nmax, primes=cfg.fields or (2, 3))
    elif ident == "qbinomial":
        res = closed_form_oracles("qbinomial", bound=nmax, k=cfg.extra["k"])
    else:
        res = closed_form_oracles("vector_spaces", bound=nmax)
    return res.to_json(), EXIT_OK if res.ok else EXIT_VIOLATION


def cmd_kac(cfg: RunConfig) -> tuple[dict, int]:
    quiver = _load_quiver(cfg.quiver)
    bound = cfg.extra["bound"]
    if bound < 0:
        raise UsageError("--bound must be nonnegative")
    a = kac_polynomials(quiver, bound)
    terms = [{"d": list(d), "polynomial": str(c)} for d, c in a.items()]
    return {"quiver": quiver.to_json(), "bound": bound, "acyclic": quiver.is_acyclic,
            "coefficients": terms}, EXIT_OK


COMMANDS = {
    "alpha": cmd_alpha,
    "hseries": cmd_hseries,
    "extract-ai": cmd_extract_ai,
    "verify": cmd_verify,
    "kac": cmd_kac,
}


def _render_pretty(report: dict) -> str:
    lines = []

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {v}")
        else:
            lines.append(f"{pad}{obj}")

    walk(report, 0)
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        body, code = COMMANDS[cfg.command](cfg)
    except (UsageError, QuiverParseError, CyclicQuiverError) as exc:
        print(f"stackcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        body = {"error": "budget", "needed": exc.needed, "budget": exc.budget, "message": str(exc)}
        code = EXIT_BUDGET
    except NotPolynomialCount as exc:
        body = {"error": "fit", "message": str(exc),
                "sample": [str(x) for x in exc.sample], "predicted": str(exc.predicted)}
        code = EXIT_VIOLATION
    except ValueError as exc:
        print(f"stackcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"version": __version__, "config": _config_json(cfg), "result": body}
    if getattr(args, "pretty", False):
        text = _render_pretty(report)
    else:
        text = json.dumps(report, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
