"""Command-line front end.

Exit status: 0 on success (and all audits passing), 1 on audit violations,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import axioms
from .coding import INVALID, decode, encode
from .constructions import DEFAULT_FORMULA_CAP, TauFamily, omission_family, stopping_disjunction, theta_chain
from .errors import CapExceeded, ParseError, TruthlabError
from .fixpoint import TemplateClass, build_universe, least_fixpoint, tr_construction, universe_cap
from .grammar import parse_formula, parse_term, unparse
from .semantics import BoundedStructure, Scheme, eval3, eval_classical
from .syntax import Formula, depth, height, mentions_p, numeral, size

USAGE_ERROR = 2
VIOLATION = 1

# codes of taller trees run to millions of digits; print them only below this
MAX_PRINTED_HEIGHT = 20


@dataclass(frozen=True)
class RunConfig:
    command: str
    bound: int = 5
    scheme: str = "sk"
    p_positive: frozenset = field(default_factory=frozenset)
    p_negative: frozenset = field(default_factory=frozenset)
    seed_path: Optional[str] = None
    output_format: str = "text"
    universe_cap: int = 10**6
    formula_cap: int = DEFAULT_FORMULA_CAP

    def validate(self) -> None:
        if self.bound < 0:
            raise ValueError("--domain must be a natural number")
        if self.universe_cap <= 0 or self.formula_cap <= 0:
            raise ValueError("caps must be positive")
        clash = self.p_positive & self.p_negative
        if clash:
            raise ValueError(f"--p-pos and --p-neg overlap on {sorted(clash)}")

    def structure(self) -> BoundedStructure:
        return BoundedStructure(self.bound, self.p_positive, self.p_negative)


def _int_list(text: str) -> frozenset:
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of naturals, got {text!r}")


def _assignment(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, value = part.partition("=")
        name = name.strip()
        if not name.startswith("v") or not name[1:].isdigit() or not value.strip().isdigit():
            raise argparse.ArgumentTypeError(f"bad assignment {part!r}; expected v<k>=<n>")
        out[int(name[1:])] = int(value)
    return out


def load_seed(path: str) -> List[Formula]:
    """One formula per line; blank lines and # comments are ignored."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if text:
                out.append(parse_formula(text, line=lineno))
    return out


def _check_size(phi, cap: int):
    n = size(phi)
    if n > cap:
        raise CapExceeded(f"formula has {n} nodes, cap is {cap}")


def _code_str(x) -> Optional[int]:
    return encode(x) if height(x) <= MAX_PRINTED_HEIGHT else None


def _sort_key(phi):
    code = _code_str(phi)
    return (code is None, code if code is not None else 0, unparse(phi))


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args, cfg: RunConfig, out) -> int:
    x = parse_term(args.text) if args.term else parse_formula(args.text)
    _check_size(x, cfg.formula_cap)
    print(unparse(x), file=out)
    return 0


def cmd_encode(args, cfg: RunConfig, out) -> int:
    x = parse_term(args.text) if args.term else parse_formula(args.text)
    _check_size(x, cfg.formula_cap)
    print(encode(x), file=out)
    return 0


def cmd_decode(args, cfg: RunConfig, out) -> int:
    x = decode(args.code)
    print("invalid" if x is INVALID else unparse(x), file=out)
    return 0


def cmd_eval(args, cfg: RunConfig, out) -> int:
    phi = parse_formula(args.formula)
    _check_size(phi, cfg.formula_cap)
    M = cfg.structure()
    sigma = args.assign or {}
    missing = phi._fv - set(sigma)
    if missing:
        raise ValueError(f"unassigned free variables: {', '.join(f'v{v}' for v in sorted(missing))}")
    if cfg.scheme == "classical":
        value = "True" if eval_classical(phi, M, sigma, p_ext=M.p_positive if args.total_p else None) else "False"
    else:
        value = str(eval3(phi, M, Scheme(cfg.scheme), sigma))
    print(value, file=out)
    return 0


def _seed(args) -> List[Formula]:
    if not args.seed:
        raise ValueError("--seed is required")
    seed = load_seed(args.seed)
    for phi in seed:
        if phi._fv:
            raise ValueError(f"seed formula {unparse(phi)} is not a sentence")
    return seed


def cmd_fixpoint(args, cfg: RunConfig, out) -> int:
    M = cfg.structure()
    U = build_universe(_seed(args), M, cap=cfg.universe_cap, negation_closed=args.negation_closed)
    fix, trace = least_fixpoint(U, M)
    entries = [
        {"formula": unparse(phi), "code": _code_str(phi), "stage": trace.entry_stage[phi]}
        for phi in sorted(fix, key=_sort_key)
    ]
    report = {
        "universe_size": len(U),
        "stages": trace.total_stages,
        "entries": entries,
        "fixpoint_size": len(fix),
    }
    if cfg.output_format == "json":
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        print(f"universe {len(U)}  fixpoint {len(fix)}  stages {trace.total_stages}", file=out)
        for e in entries:
            print(f"{e['stage']:>3}  {e['formula']}", file=out)
    return 0


def _print_formula(phi, out, fmt: str):
    code = _code_str(phi)
    if fmt == "json":
        print(json.dumps({"formula": unparse(phi), "code": code, "size": size(phi)}, sort_keys=True), file=out)
    else:
        print(unparse(phi), file=out)
        print(f"code: {code if code is not None else 'omitted (tree height > %d)' % MAX_PRINTED_HEIGHT}", file=out)


def cmd_gen(args, cfg: RunConfig, out) -> int:
    formulas = [parse_formula(f) for f in args.formula or []]
    kind = args.kind
    if kind == "stopping":
        half = len(formulas) // 2
        if len(formulas) % 2 or not half:
            raise ValueError("stopping needs an even, nonzero number of --formula (alphas, then betas)")
        phi = stopping_disjunction(formulas[:half], formulas[half:], args.start)
    elif kind == "tau":
        terms = [parse_term(t) for t in args.term or []]
        if len(formulas) != 1:
            raise ValueError("tau needs exactly one --formula")
        phi = TauFamily(args.b, args.c, cap=cfg.formula_cap).tau_at(formulas[0], terms)
    elif kind == "theta-chain":
        phi = theta_chain(formulas)
    elif kind == "omission":
        fam = omission_family(formulas, args.a)
        phi = fam.beta(args.index) if args.beta else fam.alpha(args.index)
    else:
        if len(formulas) != 1:
            raise ValueError("ind needs exactly one --formula")
        phi = axioms.induction_sentence(formulas[0])
    _check_size(phi, cfg.formula_cap)
    _print_formula(phi, out, cfg.output_format)
    return 0


def _truth_set(args, M, U):
    if args.truthset == "fixpoint":
        return least_fixpoint(U, M)[0]
    if args.truthset == "tr":
        bound = args.tr_depth if args.tr_depth is not None else max(depth(phi) for phi in U)
        return tr_construction(M, TemplateClass(bound, 2), U)
    if not args.truthset_file:
        raise ValueError("--truthset file needs --truthset-file")
    return frozenset(load_seed(args.truthset_file))


def cmd_check(args, cfg: RunConfig, out, err) -> int:
    M = cfg.structure()
    seed = _seed(args)
    extra = []
    phis = [parse_formula(f) for f in args.formula or []]
    if args.theory == "tind":
        if not phis:
            raise ValueError("--theory tind needs at least one --formula")
        extra = [axioms.induction_sentence(phi) for phi in phis]
    U = build_universe(seed + extra, M, cap=cfg.universe_cap, negation_closed=args.negation_closed)
    A = _truth_set(args, M, U)
    if not set(A) <= U.members:
        raise ValueError("the truth set is not contained in the universe")
    theory = args.theory
    if theory == "pt":
        report = axioms.check_pt_minus(M, A, U)
    elif theory == "wpt":
        report = axioms.check_wpt_minus(M, A, U)
    elif theory == "neg":
        report = axioms.check_neg(M, A, U)
    elif theory == "utb":
        templates = phis or [phi for phi in U if not phi._fv and not mentions_p(phi)]
        terms = [numeral(x) for x in M.domain]
        report = axioms.check_utb(M, A, templates, terms, U)
    elif theory == "int":
        report = axioms.check_int(M, A, U)
    elif theory == "int-tot":
        report = axioms.check_int_tot(M, A, U)
    elif theory == "cc":
        report = axioms.check_cc_all(M, A, U)
    elif theory == "gc":
        report = axioms.check_gc_all(M, A, U, phis or None)
    else:
        report = axioms.check_truth_of_induction(M, A, U, phis)
    if cfg.output_format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True), file=out)
        print(report.summary(), file=err)
    else:
        print(report.summary(), file=out)
    return 0 if report.passed else VIOLATION


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="truthlab", description="Partial truth over bounded arithmetic structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def structure_flags(p):
        p.add_argument("--domain", type=int, default=5, help="quantifier bound N (domain 0..N)")
        p.add_argument("--p-pos", type=_int_list, default=frozenset(), help="comma list where P is true")
        p.add_argument("--p-neg", type=_int_list, default=frozenset(), help="comma list where P is false")

    def common(p):
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--formula-cap", type=int, default=DEFAULT_FORMULA_CAP)

    p = sub.add_parser("parse", help="parse and print in canonical form")
    p.add_argument("text")
    p.add_argument("--term", action="store_true", help="parse a term instead of a formula")
    common(p)

    p = sub.add_parser("encode", help="print the code of a formula or term")
    p.add_argument("text")
    p.add_argument("--term", action="store_true")
    common(p)

    p = sub.add_parser("decode", help="print the formula or term with a given code")
    p.add_argument("code", type=int)
    common(p)

    p = sub.add_parser("eval", help="evaluate a formula on a bounded structure")
    p.add_argument("formula")
    p.add_argument("--scheme", choices=["sk", "wk", "classical"], default="sk")
    p.add_argument("--assign", type=_assignment, default=None, help='e.g. "v0=3,v1=5"')
    p.add_argument("--total-p", action="store_true", help="classical scheme: read P as its positive extension")
    structure_flags(p)
    common(p)

    def seeded(p):
        p.add_argument("--seed", help="file with one sentence per line")
        p.add_argument("--negation-closed", action="store_true", help="close the universe under negation")
        p.add_argument("--universe-cap", type=int, default=None)

    p = sub.add_parser("fixpoint", help="least fixpoint over the universe of a seed file")
    seeded(p)
    structure_flags(p)
    common(p)

    p = sub.add_parser("gen", help="generate a formula family member")
    p.add_argument("kind", choices=["stopping", "tau", "theta-chain", "omission", "ind"])
    p.add_argument("--formula", action="append", help="input formula (repeatable)")
    p.add_argument("--term", action="append", help="closed term for tau (repeatable)")
    p.add_argument("--start", type=int, default=0, help="stopping: first index")
    p.add_argument("-b", type=int, default=2, help="tau: bound b")
    p.add_argument("-c", type=int, default=2, help="tau: shape parameter c")
    p.add_argument("-a", type=int, default=3, help="omission: numeral bound")
    p.add_argument("--index", type=int, default=0, help="omission: family index")
    p.add_argument("--beta", action="store_true", help="omission: the beta member instead of alpha")
    common(p)

    p = sub.add_parser("check", help="audit a truth set against an axiom family")
    p.add_argument("--theory", required=True, choices=["pt", "wpt", "utb", "neg", "int", "int-tot", "cc", "gc", "tind"])
    p.add_argument("--truthset", choices=["fixpoint", "tr", "file"], default="fixpoint")
    p.add_argument("--truthset-file")
    p.add_argument(
        "--tr-depth", type=int, default=None, help="depth bound of the template class for --truthset tr (default: deepest seed)"
    )
    p.add_argument("--formula", action="append", help="tind/gc/utb: formula to check (repeatable)")
    seeded(p)
    structure_flags(p)
    common(p)
    return parser


def config_from_args(args) -> RunConfig:
    cap = getattr(args, "universe_cap", None)
    return RunConfig(
        command=args.command,
        bound=getattr(args, "domain", 5),
        scheme=getattr(args, "scheme", "sk"),
        p_positive=getattr(args, "p_pos", frozenset()),
        p_negative=getattr(args, "p_neg", frozenset()),
        seed_path=getattr(args, "seed", None),
        output_format=args.format,
        universe_cap=universe_cap() if cap is None else cap,
        formula_cap=args.formula_cap,
    )


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code else 0
    try:
        cfg = config_from_args(args)
        cfg.validate()
        if args.command == "check":
            return cmd_check(args, cfg, out, err)
        handler = {
            "parse": cmd_parse,
            "encode": cmd_encode,
            "decode": cmd_decode,
            "eval": cmd_eval,
            "fixpoint": cmd_fixpoint,
            "gen": cmd_gen,
        }[args.command]
        return handler(args, cfg, out)
    except ParseError as e:
        print(f"parse error: {e}", file=err)
    except (TruthlabError, ValueError, OSError) as e:
        print(f"error: {e}", file=err)
    return USAGE_ERROR


def main() -> None:
    sys.exit(run())
