"""Command-line front end.

Every subcommand writes one JSON document (or a text / window rendering)
to stdout.  Exit codes: 0 success or holds, 1 refuted with a witness,
2 inconclusive, 64 usage error, 65 a precondition of the computation failed.
Big integers travel as decimal strings.

Defaults come from the JSON file named by LABSHIFT_CONFIG, then flags.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from . import analysis, labels, ordinals, subshift, zoo
from .expanding import (
    DEFAULT_PRESET,
    GrowthViolation,
    FirstDigitTooSmall,
    build_system,
    expand,
    ip_in_interval,
)
from .labels import NVector, encode, label_from_json

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_PRECONDITION = 64, 65
FORMATS = ("json", "text", "ascii-window", "pgm")
CONFIG_ENV = "LABSHIFT_CONFIG"


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        m = re.search(r"(--[\w-]+)", message)
        raise UsageError(m.group(1) if m else self.prog, message)


@dataclass(frozen=True)
class RunConfig:
    preset: str | None = DEFAULT_PRESET
    b: int | None = None
    base: int | None = None
    partition: str = "2-adic"
    N: int = 12
    horizon: int = 40
    format: str = "json"
    seed: int = 0

    def header(self) -> dict:
        out = {"partition": self.partition, "N": self.N, "horizon": self.horizon, "seed": self.seed}
        if self.b is not None:
            out.update(b=self.b, base=self.base)
        else:
            out["preset"] = self.preset
        return out

    def system(self):
        if self.b is not None:
            return build_system(b=self.b, base=self.base)
        return build_system(self.preset)

    def part(self):
        return subshift.partition_by_name(self.partition)


_CONFIG_KEYS = ("preset", "b", "base", "partition", "N", "horizon", "format", "seed")


def load_config(args: argparse.Namespace, env: dict) -> RunConfig:
    values: dict = {}
    path = env.get(CONFIG_ENV)
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(CONFIG_ENV, f"cannot read config {path!r}: {exc}") from None
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(CONFIG_ENV, f"unknown config keys {sorted(unknown)}")
        values.update(data)
    for key in _CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if values.get("b") is not None:
        values.setdefault("preset", None)
        if values.get("base") is None:
            raise UsageError("--base", "an explicit --b needs --base")
    cfg = RunConfig(**values)
    if cfg.format not in FORMATS:
        raise UsageError("--format", f"choose from {', '.join(FORMATS)}")
    if cfg.N < 0:
        raise UsageError("--N", "must be >= 0")
    if cfg.horizon < 2:
        raise UsageError("--horizon", "must be >= 2")
    if cfg.preset is not None and cfg.b is None and cfg.preset not in ("strict", "paper"):
        raise UsageError("--preset", f"unknown preset {cfg.preset!r}")
    try:
        cfg.part()
    except ValueError as exc:
        raise UsageError("--partition", str(exc)) from None
    return cfg


# ---------------------------------------------------------------------------
# argument decoding


def _json_arg(flag: str, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(flag, f"invalid JSON: {exc}") from None


def _label_arg(flag: str, text: str | None):
    if text is None:
        raise UsageError(flag, "required")
    try:
        return label_from_json(text)
    except json.JSONDecodeError as exc:
        raise UsageError(flag, f"invalid JSON: {exc}") from None
    except zoo.UnknownEntry as exc:
        raise UsageError(flag, str(exc)) from None
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(flag, f"bad label: {exc}") from None


def _vector_arg(flag: str, text: str) -> NVector:
    obj = _json_arg(flag, text)
    try:
        return NVector(obj)
    except (TypeError, ValueError) as exc:
        raise UsageError(flag, f"bad vector: {exc}") from None


def _int_arg(flag: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(flag, f"not an integer: {text!r}") from None


_AFFINE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?([ij])\s*(?:([+-])\s*(\d+))?\s*$")


def _affine(expr, var_values: dict) -> int:
    """An int, or "a*i+b" style expression in i or j."""
    if isinstance(expr, int):
        return expr
    m = _AFFINE.match(str(expr))
    if not m:
        raise UsageError("--sequence", f"cannot read index expression {expr!r}")
    a = int(m.group(1) or 1)
    c = int(m.group(4) or 0) * (-1 if m.group(3) == "-" else 1)
    if m.group(2) not in var_values:
        raise UsageError("--sequence", f"variable {m.group(2)} is not bound")
    return a * var_values[m.group(2)] + c


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, exit code)


def cmd_expand(cfg, args):
    system = cfg.system()
    rows, code = [], EXIT_OK
    for t in args.t:
        e = expand(system, _int_arg("--t", t))
        if e is None:
            rows.append({"t": str(int(t)), "expanding": False, "digits": None})
            code = EXIT_REFUTED
        else:
            rows.append({**e.to_json(), "expanding": True})
    return (rows[0] if len(rows) == 1 else rows), code


def cmd_ip(cfg, args):
    S = [int(s) for s in args.S.split(",")] if args.S else None
    listing = ip_in_interval(cfg.system(), _int_arg("--lo", args.lo), _int_arg("--hi", args.hi), args.mode, S)
    return listing.to_json(), EXIT_OK


def cmd_density(cfg, args):
    windows = [_int_arg("--windows", w) for w in args.windows]
    rep = analysis.density_report(cfg.system(), windows)
    ok = rep.all_within_bound and rep.decreasing
    return rep.to_json(), EXIT_OK if ok else EXIT_REFUTED


def cmd_label(cfg, args):
    M = _label_arg("--label", args.label)
    N = cfg.N
    op = args.op
    if op == "window":
        return {"window": N, "label": M.window(N).to_json(), "size": len(M.window(N))}, EXIT_OK
    if op == "roof":
        return {"window": N, "roof": labels.roof(M, N).to_json()}, EXIT_OK
    if op == "max":
        mx, complete = labels.max_elements(M, N)
        return {"window": N, "maxima": encode(mx), "complete": complete}, EXIT_OK
    if op == "supp":
        return {"window": N, "supports": sorted(sorted(s) for s in labels.Supp(M, N))}, EXIT_OK
    if op == "contains":
        r = _vector_arg("--r", args.r or "[]")
        inside = M.contains(r)
        return {"r": r.to_json(), "contains": inside}, EXIT_OK if inside else EXIT_REFUTED
    if op == "minus":
        r = _vector_arg("--r", args.r or "[]")
        return {"r": r.to_json(), "window": N, "label": labels.minus(M, r).window(N).to_json()}, EXIT_OK
    if op == "meet":
        return {"ell": args.ell, "window": N, "label": labels.meet_interval(M, args.ell).window(N).to_json()}, EXIT_OK
    raise UsageError("--op", f"unknown op {op!r}")


def cmd_window(cfg, args):
    M = _label_arg("--label", args.label)
    w = subshift.point_window(cfg.system(), cfg.part(), M, cfg.N, args.mode, _int_arg("--shift", args.shift))
    out = w.to_json()
    out["sym_zer"] = subshift.sym_zer_classify(w).to_json()
    return out, EXIT_OK, w


def cmd_metric(cfg, args):
    M1, M2 = _label_arg("--label", args.label), _label_arg("--other", args.other)
    d = labels.metric(M1, M2, cfg.N)
    return {
        "distance": f"{d.value.numerator}/{d.value.denominator}",
        "agree_up_to": d.agree,
        "exact": d.exact,
    }, EXIT_OK


def _sequence(spec):
    """{"base": label, "r": [[index, mult], ...]} with index/mult ints or affine in i (and j)."""
    try:
        template = spec["r"]
        base = spec["base"]
    except (KeyError, TypeError) as exc:
        raise UsageError("--sequence", f"bad sequence: {exc}") from None
    base = _label_arg("--sequence", base if isinstance(base, str) else json.dumps(base))

    def at(**vals):
        return labels.minus(base, NVector((_affine(e, vals), _affine(m, vals)) for e, m in template))

    return at, "j" in json.dumps(template)


def cmd_limit(cfg, args):
    if args.sequence is None:
        raise UsageError("--sequence", "required")
    at, double = _sequence(_json_arg("--sequence", args.sequence))
    if double:
        if args.outer == "j":
            f = lambda j, i: at(i=i, j=j)
        else:
            f = lambda i, j: at(i=i, j=j)
        try:
            res = zoo.double_limit(f, cfg.N, cfg.horizon)
        except ValueError as exc:
            return {"verdict": "inconclusive", "reason": str(exc)}, EXIT_INCONCLUSIVE
    else:
        res = labels.limit(lambda i: at(i=i), cfg.N, cfg.horizon)
    code = EXIT_OK if res.converged else (EXIT_REFUTED if res.verdict == labels.OSCILLATING else EXIT_INCONCLUSIVE)
    return res.to_json(), code


def _finite(flag, M):
    if not isinstance(M, labels.FiniteLabel):
        raise UsageError(flag, "this operation needs a finite (generated) label")
    return M


def cmd_theta(cfg, args):
    M = _label_arg("--label", args.label)
    th = labels.theta(M)
    members = sorted((N.to_json() for N in th), key=lambda j: json.dumps(j, sort_keys=True))
    out = {"size": len(th), "members": members}
    if args.contains:
        N = _label_arg("--contains", args.contains)
        out["contains"] = N in th
        return out, EXIT_OK if out["contains"] else EXIT_REFUTED
    return out, EXIT_OK


def cmd_height(cfg, args):
    if args.expr is not None:
        try:
            node = ordinals.expr_from_json(_json_arg("--expr", args.expr))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise UsageError("--expr", f"bad expression: {exc}") from None
        h = ordinals.composite_height(node)
        return {"height": str(h), **h.to_json()}, EXIT_OK
    M = _finite("--label", _label_arg("--label", args.label))
    rep = ordinals.height_report(M)
    out = {"height": str(rep.height), **rep.height.to_json(), "chain": [L.to_json() for L in rep.chain]}
    if args.star:
        hs = ordinals.height_star(M)
        out["height_star"] = str(hs)
    return out, EXIT_OK


def cmd_check(cfg, args):
    M = _label_arg("--label", args.label)
    props = labels.PROPERTIES if args.property == "all" else (args.property,)
    if args.property != "all" and args.property not in labels.PROPERTIES:
        raise UsageError("--property", f"choose from {', '.join(labels.PROPERTIES)} or all")
    out, codes = {}, []
    for p in props:
        v = labels.property_check(M, p, cfg.N, cfg.horizon)
        out[p] = v.to_json(encode)
        codes.append(v.exit_code)
    code = max(codes) if len(codes) == 1 else (EXIT_INCONCLUSIVE if EXIT_INCONCLUSIVE in codes else EXIT_OK)
    return (out[props[0]] if len(props) == 1 else out), code


def cmd_certify(cfg, args):
    M = _label_arg("--label", args.label)
    if args.flat is not None:
        L = [int(x) for x in args.flat.split(",")]
        res = analysis.flat_independence(M, L, cfg.N)
    else:
        if args.ex11a is not None:
            F, hints = zoo.ex11a_family(args.ex11a)
        elif args.F is not None:
            F = [NVector(v) for v in _json_arg("--F", args.F)]
            hints = [NVector(v) for v in _json_arg("--hints", args.hints)] if args.hints else ()
        else:
            raise UsageError("--F", "give --F, --ex11a or --flat")
        try:
            res = analysis.independence_certificate(M, F, args.search_bound, args.max_norm, hints)
        except analysis.PreconditionError as exc:
            raise UsageError("--F", str(exc)) from None
    if isinstance(res, analysis.IndependenceCertificate):
        out = res.to_json()
        out["validated"] = analysis.validate_certificate(M, res)
        return out, EXIT_OK if out["validated"] else EXIT_REFUTED
    return {"failure": res.to_json()}, EXIT_REFUTED


_SETS = {"evens-and-negative-odds": analysis.example_set, "even-naturals": analysis.even_naturals}


def cmd_tf(cfg, args):
    if args.set is not None:
        A = _SETS[args.set]
        cands = [analysis.TFCandidate(b, _SETS[b]) for b in (args.B or [])]
        cands += analysis.generic_candidates(A, args.radius)
        rep = analysis.tf_check(A, args.radius, cands, args.threshold)
    else:
        M = _label_arg("--label", args.label)
        rep = analysis.tf_check_label(cfg.system(), cfg.part(), M, args.radius, args.threshold)
    return rep.to_json(), rep.exit_code


def cmd_witness(cfg, args):
    system, part = cfg.system(), cfg.part()
    M = _label_arg("--label", args.label)
    kind = args.kind
    if kind == "locality":
        rep = subshift.locality_check(system, part, M, _int_arg("--t", args.t), cfg.N, args.rule)
        return rep.to_json(), EXIT_OK if rep.verified else EXIT_REFUTED
    if kind == "asymptotic":
        rep = subshift.asymptotic_check(system, part, M, _vector_arg("--r", args.r or "[]"), args.count, cfg.N)
        return rep.to_json(), EXIT_OK if rep.verified else EXIT_REFUTED
    M2 = _label_arg("--other", args.other)
    if kind == "nonasymptotic":
        w = subshift.nonasymptotic_witness(system, part, M, M2, cfg.N, args.count)
        if w is None:
            return {"witness": None, "reason": "the pair {∅, 0} is asymptotic"}, EXIT_INCONCLUSIVE
        return w.to_json(), EXIT_OK
    rep = subshift.injectivity_radius(system, part, M, M2, cfg.N)
    return rep.to_json(), EXIT_OK if rep.verified else EXIT_REFUTED


def cmd_zoo_verify(cfg, args):
    rows = zoo.verify_all(cfg.N, cfg.horizon)
    summary = {s: sum(r.status == s for r in rows) for s in ("pass", "fail", "inconclusive")}
    return {"summary": summary, "rows": [r.to_json(encode) for r in rows]}, zoo.report_exit_code(rows)


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--preset", choices=("strict", "paper"), help="expanding system preset (default strict: b=5, base 7)")
    g.add_argument("--b", type=int, help="growth constant b for an explicit system (needs --base)")
    g.add_argument("--base", type=int, help="k(n) = base**(n-1) for an explicit system")
    g.add_argument("--partition", help="partition of the digit indices into blocks (default 2-adic)")
    g.add_argument("--N", type=int, help="window radius / label window B_N (default 12)")
    g.add_argument("--horizon", type=int, help="horizon for limits of label sequences (default 40)")
    g.add_argument("--format", choices=FORMATS, help="output format (default json)")
    g.add_argument("--seed", type=int, help="seed recorded in the output header (default 0)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(
        prog="labshift",
        description="Labels, expanding times and their subshifts.",
        epilog=f"Environment: {CONFIG_ENV}=path.json supplies defaults for the configuration flags. "
        "Exit codes: 0 ok/holds, 1 refuted, 2 inconclusive, 64 usage error, 65 failed precondition.",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    p = add("expand", cmd_expand, "unique signed-digit expansion of t")
    p.add_argument("--t", action="append", required=True, help="integer (repeatable)")

    p = add("ip", cmd_ip, "expanding times in [lo, hi]")
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    p.add_argument("--mode", choices=("full", "positive", "restricted"), default="full")
    p.add_argument("--S", help="comma-separated digit indices for the restricted mode")

    p = add("density", cmd_density, "count of positive expanding times in [1, N] against the density bound")
    p.add_argument("--windows", nargs="+", required=True, help="window sizes N")

    p = add("label", cmd_label, "evaluate a label operation on B_N")
    p.add_argument("--label", help="label JSON or builtin name such as ex8a or units_L:L=odd")
    p.add_argument("--op", choices=("window", "roof", "max", "supp", "contains", "minus", "meet"), default="window")
    p.add_argument("--r", help="vector JSON [[index, mult], ...]")
    p.add_argument("--ell", type=int, default=1, help="index for the meet operation")

    p = add("window", cmd_window, "bits of the point x[M] on [shift-N, shift+N]")
    p.add_argument("--label")
    p.add_argument("--mode", choices=("full", "plus"), default="full")
    p.add_argument("--shift", default="0")

    p = add("metric", cmd_metric, "ultrametric distance between two labels")
    p.add_argument("--label")
    p.add_argument("--other")

    p = add("limit", cmd_limit, "limit of M - r(i) (or a double limit in i and j) on B_N")
    p.add_argument("--sequence", help='{"base": label, "r": [["i", 1]]}; entries may be "a*i+b"')
    p.add_argument("--outer", choices=("i", "j"), default="i", help="outer variable of a double limit")

    p = add("theta", cmd_theta, "orbit closure of a finite label")
    p.add_argument("--label")
    p.add_argument("--contains", help="label to look up in the orbit closure")

    p = add("height", cmd_height, "height of a finite label or of a composite expression")
    p.add_argument("--label")
    p.add_argument("--expr", help='{"leaf": label} | {"symbolic": "w+1", "support": [...]} | {"union": [...]} | {"oplus": [l, r]}')
    p.add_argument("--star", action="store_true", help="also compute height*")

    p = add("check", cmd_check, "window-honest structural property check")
    p.add_argument("--label")
    p.add_argument("--property", default="all", help=f"one of {', '.join(labels.PROPERTIES)} or all")

    p = add("certify", cmd_certify, "independence certificate for a finite antichain")
    p.add_argument("--label")
    p.add_argument("--F", help="antichain as JSON list of vectors")
    p.add_argument("--hints", help="candidate witnesses as JSON list of vectors")
    p.add_argument("--ex11a", type=int, help="use the block family A_n of the ex11a entry")
    p.add_argument("--flat", help="comma-separated indices: certify the units through the roof")
    p.add_argument("--search-bound", type=int, default=20)
    p.add_argument("--max-norm", type=int, default=2)

    p = add("tf", cmd_tf, "translation-finite test on [-radius, radius]")
    p.add_argument("--label")
    p.add_argument("--set", choices=sorted(_SETS), help="a named integer set instead of a label")
    p.add_argument("--B", action="append", choices=sorted(_SETS), help="candidate set B (repeatable)")
    p.add_argument("--radius", type=int, default=200)
    p.add_argument("--threshold", type=int, default=analysis.DEFAULT_THRESHOLD)

    p = add("witness", cmd_witness, "locality, asymptotic, non-asymptotic and injectivity witnesses")
    p.add_argument("--kind", choices=("locality", "asymptotic", "nonasymptotic", "injectivity"), required=True)
    p.add_argument("--label")
    p.add_argument("--other")
    p.add_argument("--t")
    p.add_argument("--r")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--rule", choices=("magnitude", "literal"), default="magnitude")

    add("zoo-verify", cmd_zoo_verify, "check every zoo entry against its expected properties")
    return parser


# ---------------------------------------------------------------------------
# output


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
        return lines
    if isinstance(obj, list):
        return [line for x in obj for line in _text(x, indent)]
    return [pad + json.dumps(obj, ensure_ascii=False)]


def render(cfg: RunConfig, command: str, payload, window=None) -> bytes:
    header = {"command": command, **cfg.header()}
    if cfg.format == "pgm":
        if window is None:
            raise UsageError("--format", "pgm output is only available for the window command")
        magic, rest = window.pgm().split(b"\n", 1)
        comment = "# " + json.dumps(header, sort_keys=True)
        return magic + b"\n" + comment.encode() + b"\n" + rest
    if cfg.format == "ascii-window":
        if window is None:
            raise UsageError("--format", "ascii-window output is only available for the window command")
        return ("# " + json.dumps(header, sort_keys=True) + "\n" + window.ascii() + "\n").encode()
    if cfg.format == "text":
        head = " ".join(f"{k}={v}" for k, v in header.items())
        return ("# " + head + "\n" + "\n".join(_text(payload)) + "\n").encode()
    doc = {"header": header, "result": payload}
    return (json.dumps(doc, ensure_ascii=False, sort_keys=False) + "\n").encode()


def main(argv=None, env=None, stdout=None, stderr=None) -> int:
    env = os.environ if env is None else env
    out = stdout if stdout is not None else sys.stdout.buffer
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args, env)
        res = args.func(cfg, args)
        payload, code = res[0], res[1]
        window = res[2] if len(res) > 2 else None
        out.write(render(cfg, args.command, payload, window))
        out.flush()
        return code
    except UsageError as exc:
        err.write(json.dumps({"error": "usage", "flag": exc.flag, "message": str(exc)}, ensure_ascii=False) + "\n")
        return EXIT_USAGE
    except (GrowthViolation, FirstDigitTooSmall, subshift.PreconditionError, analysis.PreconditionError,
            ordinals.EmptyLabelError, ordinals.NonDisjointSupports, labels.WindowExceeded) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        for k in ("n", "lhs", "rhs"):
            if hasattr(exc, k):
                payload[k] = str(getattr(exc, k))
        err.write(json.dumps(payload, ensure_ascii=False) + "\n")
        return EXIT_PRECONDITION
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
