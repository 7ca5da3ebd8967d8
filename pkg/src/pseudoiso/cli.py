"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 1 computation failure
(including a report with failing entries).

Classes are given as "a;b0,b1,..." strings, either positionally or with
--class.  A token "xK" repeats the previous class so that it occurs K times
in total, and "@path" reads one class per line from a file ('#' starts a
comment).  Classes starting with '-' must come after "--" or use --class=.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from .birational import (
    PseudoIsoData,
    btc_check,
    btc_classify,
    defect_cycle,
    make_jx,
    nic_check,
    nic_space,
    pullback11,
    pullback22,
    pushforward11,
    pushforward22,
)
from .cohomology import CurveCycle, DivisorClass, cone_probe, default_curves, pair, triple, wedge11
from .config import ConfigError, LabSettings, load_config
from .exact import format_rational
from .lab import envelope as lab_envelope
from .lab.grids import GridFunction, RadialProfile, load_csv, save_csv
from .lab.lelong import lelong_estimate, max_regularize
from .lab.mass import ddc_mass, default_epsilons, model_family, monotone_convergence_report
from .lab.oracles import model_mass_oracle
from .lab.probe import DegenerateProbe, jstar_singularity_probe
from .report import REPORT_KINDS, run_report

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of exiting so main() owns the exit code
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# --- input helpers -------------------------------------------------------------


def _expand_tokens(tokens: Sequence[str]) -> list[str]:
    out: list[str] = []
    for tok in tokens:
        tok = tok.strip()
        if tok.startswith("@"):
            try:
                with open(tok[1:], encoding="utf-8") as fh:
                    lines = [ln.split("#", 1)[0].strip() for ln in fh]
            except OSError as exc:
                raise UsageError(f"cannot read class file {tok[1:]!r}: {exc.strerror}") from None
            out.extend(_expand_tokens([ln for ln in lines if ln]))
        elif tok[:1] == "x" and tok[1:].isdigit():
            if not out:
                raise UsageError(f"repeat token {tok!r} has no class before it")
            k = int(tok[1:])
            if k < 1:
                raise UsageError("repeat count must be at least 1")
            out.extend([out[-1]] * (k - 1))
        else:
            out.append(tok)
    return out


def _parse_all(cls, tokens: list[str]) -> list:
    values = []
    for tok in tokens:
        try:
            values.append(cls.parse(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad class {tok!r}: {exc}") from None
    return values


def _classes(args, count: int | None = None, minimum: int = 1) -> list[DivisorClass]:
    tokens = _expand_tokens(list(args.classes_opt or []) + list(args.classes or []))
    if count is not None and len(tokens) != count:
        raise UsageError(f"expected {count} class(es), got {len(tokens)}")
    if len(tokens) < minimum:
        raise UsageError(f"expected at least {minimum} class(es), got {len(tokens)}")
    return _parse_all(DivisorClass, tokens)


def _curves(tokens) -> list[CurveCycle]:
    return _parse_all(CurveCycle, _expand_tokens(tokens or []))


def _load_map(spec: str) -> PseudoIsoData:
    if spec == "jx":
        return make_jx()
    try:
        return load_config(spec).to_map()
    except OSError as exc:
        raise UsageError(f"cannot read map file {spec!r}: {exc.strerror}") from None
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _lab_settings(path: str | None) -> LabSettings:
    if path is None:
        return LabSettings()
    try:
        return load_config(path).lab
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _load_lab_file(path: str):
    try:
        return load_csv(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


# --- output --------------------------------------------------------------------


def _plain(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.12g}")
    if isinstance(value, (DivisorClass, CurveCycle)):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


def _emit(args, value, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(_jsonable(value), indent=2))
    else:
        print(text if text is not None else _plain(value))


# --- subcommands ---------------------------------------------------------------


def cmd_ring(args) -> int:
    xs = _classes(args, minimum=1)
    curves = _curves(args.curve)
    if curves:
        if len(xs) != 1 or len(curves) != 1:
            raise UsageError("--curve pairs exactly one divisor class with one curve class")
        _emit(args, pair(xs[0], curves[0]))
    elif len(xs) == 2:
        _emit(args, wedge11(xs[0], xs[1]))
    elif len(xs) == 3:
        _emit(args, triple(*xs))
    else:
        raise UsageError("ring takes two classes (product), three (triple number) or one class with --curve")
    return EXIT_OK


def cmd_pullback(args) -> int:
    f = _load_map(args.map)
    if args.curve:
        fn = pushforward22 if args.push else pullback22
        values = [fn(f, c) for c in _curves(args.curve)]
    else:
        fn = pushforward11 if args.push else pullback11
        values = [fn(f, x) for x in _classes(args)]
    _emit(args, values, "\n".join(map(str, values)))
    return EXIT_OK


def cmd_defect(args) -> int:
    f = _load_map(args.map)
    a2, a3 = _classes(args, count=2)
    d = defect_cycle(f, a2, a3)
    doc = {
        "terms": [{"curve": t.curve, "class": t.cls, "lambda": t.coefficient} for t in d.terms],
        "total": d.total_class(),
    }
    lines = [f"{format_rational(t.coefficient)} * {t.curve} [{t.cls}]" for t in d.terms] or ["0"]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_nic(args) -> int:
    f = _load_map(args.map)
    tokens = list(args.classes_opt or []) + list(args.classes or [])
    if args.space or not tokens:
        basis = nic_space(f)
        _emit(args, basis, "\n".join(map(str, basis)) or "0")
        return EXIT_OK
    values = [nic_check(f, x) for x in _classes(args)]
    _emit(args, values if len(values) > 1 else values[0], "\n".join(map(_plain, values)))
    return EXIT_OK


def cmd_btc_check(args) -> int:
    f = _load_map(args.map)
    a2, a3 = _classes(args, count=2)
    _emit(args, btc_check(f, a2, a3))
    return EXIT_OK


def cmd_btc_classify(args) -> int:
    f = _load_map(args.map)
    comps = btc_classify(f)
    names = [e.source_name for e in f.ladder]
    doc = [
        {
            "dimension": c.dimension,
            "orthogonal_to_first": [n for n, s in zip(names, c.assignment) if s == 2],
            "orthogonal_to_second": [n for n, s in zip(names, c.assignment) if s == 3],
            "basis_first": [str(DivisorClass.from_vector(v)) for v in c.subspace2],
            "basis_second": [str(DivisorClass.from_vector(v)) for v in c.subspace3],
        }
        for c in comps
    ]
    text = "\n".join(
        f"dim {d['dimension']}: first _|_ {{{','.join(d['orthogonal_to_first'])}}}, "
        f"second _|_ {{{','.join(d['orthogonal_to_second'])}}}"
        for d in doc
    )
    _emit(args, doc, text)
    return EXIT_OK


def cmd_triple(args) -> int:
    xs = _classes(args, count=3)
    variety = _load_map(args.map).target if args.map else None
    _emit(args, triple(*xs, variety=variety))
    return EXIT_OK


def cmd_cone(args) -> int:
    (x,) = _classes(args, count=1)
    curves = _curves(args.curve) or None
    if curves is None:
        named = default_curves(x.n_points)
        detail = {name: pair(x, c) for name, c in named}
    else:
        detail = {str(c): pair(x, c) for c in curves}
    ok = cone_probe(x, curves, strict=args.strict)
    if args.json:
        _emit(args, {"result": ok, "strict": args.strict, "pairings": detail})
    else:
        print(_plain(ok))
    return EXIT_OK


def cmd_report(args) -> int:
    doc = run_report(args.kind, _lab_settings(args.config))
    text = doc.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json or not args.output:
        sys.stdout.write(text if args.json else "\n".join(doc.summary_lines()) + "\n")
    return EXIT_OK if doc.passed else EXIT_FAILURE


def cmd_lab(args) -> int:
    action = args.action
    if action == "mass":
        u = _load_lab_file(args.file)
        if not isinstance(u, GridFunction):
            raise UsageError("mass needs a grid file")
        _emit(args, ddc_mass(u, args.radius))
    elif action == "convergence":
        s = _lab_settings(args.config)
        eps = default_epsilons(s.n_min, s.n_max, s.eps_base)
        res = s.resolution_1d if args.dims == 1 else s.resolution_2d
        fam = model_family(eps, args.dims, s.extent, res)
        radius = args.radius if args.radius is not None else s.radius
        rep = monotone_convergence_report(fam, radius, eps,
                                          oracle=lambda n, e: model_mass_oracle(e, radius, args.dims))
        tol = s.mass_tol if args.dims == 1 else s.mass_2d_tol
        ok = rep.is_monotone(0.0 if args.dims == 1 else 0.02) and all(
            e["abs_err"] <= (tol * e["oracle"] if args.dims == 1 else tol) for e in rep.entries
        )
        text = "\n".join(
            f"n={e['n']} eps={e['epsilon']:.6g} mass={e['mass']:.10f} oracle={e['oracle']:.10f} "
            f"abs_err={e['abs_err']:.3g}" for e in rep.entries
        )
        _emit(args, {"entries": list(rep.entries), "limit": rep.limit, "pass": ok}, text)
        return EXIT_OK if ok else EXIT_FAILURE
    elif action == "lelong":
        _emit(args, lelong_estimate(_load_lab_file(args.file)))
    elif action == "regularize":
        u = _load_lab_file(args.file)
        if not isinstance(u, RadialProfile):
            raise UsageError("regularize needs a radial profile file")
        out = max_regularize(u, args.n)
        _write_or_print(args, out)
    elif action == "envelope":
        phi = _load_lab_file(args.file)
        if not isinstance(phi, RadialProfile):
            raise UsageError("envelope needs a radial profile file")
        _write_or_print(args, lab_envelope.minimal_pair_envelope(phi, args.n_omega))
    elif action == "probe":
        models = {
            "sum": lambda w, j, k: abs(w[j] + w[k]) ** 2,
            "product": lambda w, j, k: abs(w[j] * w[k]) ** 2,
            "single": lambda w, j, k: abs(w[j]) ** 2,
        }
        j, k = args.pair
        model = models[args.model]
        try:
            slope = jstar_singularity_probe(lambda w: model(w, j - 1, k - 1), (j, k), component=args.component)
        except DegenerateProbe as exc:
            print(f"degenerate probe: {exc}", file=sys.stderr)
            return EXIT_FAILURE
        _emit(args, slope)
    return EXIT_OK


def _write_or_print(args, profile: RadialProfile) -> None:
    from .lab.grids import dumps_csv

    if args.output:
        save_csv(profile, args.output)
    else:
        sys.stdout.write(dumps_csv(profile))


# --- parser --------------------------------------------------------------------


def _add_classes(p: argparse.ArgumentParser) -> None:
    p.add_argument("classes", nargs="*", metavar="CLASS", help='divisor class "a;b0,...", "xK" or "@file"')
    p.add_argument("--class", dest="classes_opt", action="append", metavar="CLASS", help="divisor class")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="pseudoiso", description="Intersection calculus for J_X and pluripotential lab checks.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("ring", parents=[common], help="products and pairings in the cohomology ring")
    _add_classes(p)
    p.add_argument("--curve", action="append", metavar="CURVE", help='curve class "c;d0,..." to pair with')
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("pullback", parents=[common], help="pullback (or pushforward) of classes")
    _add_classes(p)
    p.add_argument("--map", default="jx", help="'jx' or a config file")
    p.add_argument("--curve", action="append", metavar="CURVE", help="act on curve classes instead")
    p.add_argument("--push", action="store_true", help="pushforward instead of pullback")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("defect", parents=[common], help="defect cycle f*a2.f*a3 - f*(a2.a3)")
    _add_classes(p)
    p.add_argument("--map", default="jx")
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("nic", parents=[common], help="null intersection with the ladder curves")
    _add_classes(p)
    p.add_argument("--map", default="jx")
    p.add_argument("--space", action="store_true", help="print a basis of all such classes")
    p.set_defaults(func=cmd_nic)

    p = sub.add_parser("btc-check", parents=[common], help="does the defect cycle of two classes vanish")
    _add_classes(p)
    p.add_argument("--map", default="jx")
    p.set_defaults(func=cmd_btc_check)

    p = sub.add_parser("btc-classify", parents=[common], help="maximal linear components of the BTC locus")
    p.add_argument("--map", default="jx")
    p.set_defaults(func=cmd_btc_classify)

    p = sub.add_parser("triple", parents=[common], help="triple intersection number")
    _add_classes(p)
    p.add_argument("--map", default=None, help="check the classes against this map's variety")
    p.set_defaults(func=cmd_triple)

    p = sub.add_parser("cone", parents=[common], help="nonnegativity (or positivity) against test curves")
    _add_classes(p)
    p.add_argument("--curve", action="append", metavar="CURVE", help="test curve (default list if omitted)")
    p.add_argument("--strict", action="store_true", help="require strictly positive pairings")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("report", parents=[common], help="run a reproduction report")
    p.add_argument("kind", choices=REPORT_KINDS)
    p.add_argument("--config", help="config file whose [lab] section sets tolerances")
    p.add_argument("--output", "-o", help="write the JSON report here")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("lab", parents=[common], help="pluripotential lab operations")
    lab = p.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    lab.required = True
    q = lab.add_parser("mass", parents=[common], help="dd^c mass of a grid file on a disc/ball")
    q.add_argument("file")
    q.add_argument("--radius", type=float, default=0.5)
    q = lab.add_parser("convergence", parents=[common], help="masses of the model epsilon family")
    q.add_argument("--dims", type=int, choices=(1, 2), default=1)
    q.add_argument("--radius", type=float, default=None)
    q.add_argument("--config")
    q = lab.add_parser("lelong", parents=[common], help="Lelong number estimate at the origin")
    q.add_argument("file")
    q = lab.add_parser("regularize", parents=[common], help="max(u, -n) of a radial profile")
    q.add_argument("file")
    q.add_argument("--n", type=float, required=True)
    q.add_argument("--output", "-o")
    q = lab.add_parser("envelope", parents=[common], help="minimal-singularity envelope of a radial obstacle")
    q.add_argument("file")
    q.add_argument("--n-omega", type=float, default=0.0)
    q.add_argument("--output", "-o")
    q = lab.add_parser("probe", parents=[common], help="growth exponent of J^* dd^c u near a blown-up line")
    q.add_argument("--model", choices=("sum", "product", "single"), default="sum",
                   help="u = |w_j + w_k|^2, |w_j w_k|^2 or |w_j|^2")
    q.add_argument("--pair", type=int, nargs=2, default=(1, 2), metavar=("J", "K"))
    q.add_argument("--component", choices=("mixed", "full"), default="mixed")
    p.set_defaults(func=cmd_lab)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0) if isinstance(exc.code, int) else EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
