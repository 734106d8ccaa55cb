"""Command-line front end.

Exit status: 0 for a definite answer, 1 for a rejected input (e.g. a word
outside the required subgroup), 2 for unparseable input, 3 for an Unknown
verdict and 4 when an internal consistency check fails.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .errors import FreikalkError, InternalInconsistency, ParseError
from .filtration import FiltrationSignature, LevelIndex
from .fox import derivative_vector, derive
from .freiheit import Bounds, freiheit_check, lcs_relative_criterion, derivative_residues
from .grammar import parse_ring, parse_word, parse_words
from .jacobian import select_generators
from .magnus import INF, expand, format_valuation, ideal_valuation, lcs_class
from .oracle import SampleSpec, cross_validate_criteria, falsify_freedom
from .ring import RingElement, parse_quotient
from .schreier import SchreierSystem
from .words import FreeGroup, format_word

EXIT_OK, EXIT_REJECTED, EXIT_PARSE, EXIT_UNKNOWN, EXIT_INTERNAL = 0, 1, 2, 3, 4


def default_trunc():
    raw = os.environ.get("FREIKALK_TRUNC")
    if raw is None:
        return 8
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"FREIKALK_TRUNC must be an integer, got {raw!r}", raw, 0) from None
    if value < 1:
        raise ParseError("FREIKALK_TRUNC must be positive", raw, 0)
    return value


def _index_set(text):
    if text is None or not text.strip():
        return set()
    try:
        return {int(x) for x in text.replace("{", "").replace("}", "").split(",") if x.strip()}
    except ValueError:
        raise ParseError(f"cannot read index set {text!r}", text, 0) from None


def _bounds(args):
    b = Bounds(seed=args.seed, trunc=args.trunc)
    if args.bounds:
        for part in args.bounds.split(","):
            if not part.strip():
                continue
            try:
                k, v = part.split("=")
                k = k.strip()
                if not hasattr(b, k):
                    raise ValueError
                setattr(b, k, int(v))
            except ValueError:
                raise ParseError(f"cannot read bound {part!r}", args.bounds, 0) from None
    return b


def _words(args, G):
    if args.word == "-":
        lines = [ln.strip() for ln in sys.stdin.read().splitlines()]
        return [G.check(parse_word(ln)) for ln in lines if ln]
    return [G.check(parse_word(args.word))]


def _val(v, d):
    return format_valuation(v, d)


# subcommands ---------------------------------------------------------------------


def cmd_derive(args, G):
    out = []
    for w in _words(args, G):
        if args.wrt is not None:
            d = derive(w, args.wrt, G.rank)
            out.append({"word": str(w), "wrt": args.wrt, "derivative": str(d), "terms": d.to_json()})
        else:
            vec = derivative_vector(w, G.rank)
            out.append({"word": str(w), "derivatives": [str(d) for d in vec]})
    text = []
    for item in out:
        text.append(item["derivative"] if "derivative" in item else "\n".join(item["derivatives"]))
    return out, "\n".join(text), EXIT_OK


def cmd_expand(args, G):
    d = args.trunc
    if args.ring:
        elems = [RingElement(parse_ring(args.ring)).check_rank(G.rank)]
    else:
        elems = [RingElement.coerce(w) for w in _words(args, G)]
    out = []
    for a in elems:
        s = expand(a, d)
        out.append({"element": str(a), "series": s.to_json(), "valuation": _val(s.valuation(), d)})
    return out, "\n".join(item["element"] + " -> " + str(expand(a, d)) for item, a in zip(out, elems)), EXIT_OK


def cmd_weight(args, G):
    d = args.trunc
    out = []
    for w in _words(args, G):
        if w.is_identity():
            out.append({"word": "1", "class": f">{d}"})
            continue
        c = lcs_class(w, d)
        derivs = [_val(ideal_valuation(derive(w, k), d - 1), d - 1) for k in range(1, G.rank + 1)]
        out.append({"word": str(w), "class": _val(c, d), "derivative_valuations": derivs})
    return out, "\n".join(str(item["class"]) for item in out), EXIT_OK


def cmd_rewrite(args, G):
    system = SchreierSystem(G.rank, _index_set(args.subgroup))
    out = []
    for w in _words(args, G):
        zw = system.rewrite_in_schreier(w)
        alpha = sorted(system.alpha_ids(zw.generators()))
        out.append(
            {
                "word": str(w),
                "schreier_word": format_word(zw, "z"),
                "spelled": str(system.spell(zw)),
                "alpha_generators": alpha,
            }
        )
    table = system.table_json()
    result = {"results": out, "generators": table}
    lines = [item["schreier_word"] for item in out]
    lines += [f"z{g['z']} = {g['word']}  (s={g['s']}, j={g['j']})" for g in table]
    return result, "\n".join(lines), EXIT_OK


def cmd_criterion(args, G):
    K = _index_set(args.subgroup)
    out = []
    for w in _words(args, G):
        if args.kind == "derivative":
            q = parse_quotient(args.quotient, G.rank)
            res = derivative_residues(w, K, q)
            ok = all(r.is_zero() for r in res.values())
            out.append(
                {
                    "word": str(w),
                    "criterion": "derivative",
                    "holds": ok,
                    "residues": {str(k): str(r) for k, r in sorted(res.items())},
                }
            )
        else:
            ok = lcs_relative_criterion(w, K, args.n, args.trunc)
            out.append({"word": str(w), "criterion": "lcs", "n": args.n, "holds": ok})
    return out, "\n".join(str(item["holds"]).lower() for item in out), EXIT_OK


def _targets(text, sig):
    if not text:
        return None
    return [LevelIndex.parse(t) for t in text.split(";") if t.strip()]


def cmd_freiheit(args, G):
    sig = FiltrationSignature.parse(args.signature)
    bounds = _bounds(args)
    words = _words(args, G)
    out = []
    code = EXIT_OK
    for w in words:
        v = freiheit_check(w, sig, _targets(args.targets, sig), bounds, G.rank, not args.no_oracle)
        out.append(v.to_json())
        if v.outcome == "Unknown":
            code = EXIT_UNKNOWN
    lines = []
    for item in out:
        lines.append(f"{item['relator']}: {item['outcome']}")
        for t in item["targets"]:
            extra = f" witness {t['witness']['word']}" if t["witness"] else ""
            lines.append(f"  ({t['level']['k']},{t['level']['l']}) {t['outcome']}{extra}")
    return out, "\n".join(lines), code


def cmd_gft(args, G):
    sig = FiltrationSignature.parse(args.signature)
    rels = [G.check(r) for r in parse_words(args.relators)]
    rep = select_generators(rels, sig, G.rank)
    text = (
        f"I_s = {{{', '.join(map(str, rep.in_pivots))}}}\n"
        f"selected = {{{', '.join(f'y{j}' for j in rep.selected)}}}\n"
        f"p = {rep.p}"
    )
    return rep.to_json(), text, EXIT_OK


def cmd_verify(args, G):
    if args.cross:
        rep = cross_validate_criteria(args.seed)
        return rep, "ok" if rep["ok"] else "disagreements found", EXIT_OK if rep["ok"] else EXIT_INTERNAL
    rels = [G.check(r) for r in parse_words(args.relators or "")]
    H = _index_set(args.subgroup) or set(range(1, G.rank))
    level = LevelIndex.parse(args.level)
    b = _bounds(args)
    spec = SampleSpec(rels, b.conj_len, b.factors, b.samples, args.seed, level)
    rep = falsify_freedom(spec, H, G.rank)
    out = rep.to_json()
    out["spec"] = spec.to_json()
    text = f"{out['result']} ({rep.hits} hits in {rep.samples} samples)"
    return out, text, EXIT_OK


COMMANDS = {
    "derive": cmd_derive,
    "expand": cmd_expand,
    "weight": cmd_weight,
    "rewrite": cmd_rewrite,
    "criterion": cmd_criterion,
    "freiheit": cmd_freiheit,
    "gft": cmd_gft,
    "verify": cmd_verify,
}


def build_parser(trunc_default=8):
    p = argparse.ArgumentParser(prog="freikalk", description="Fox calculus and freedom tests in free groups")
    p.add_argument("--version", action="version", version=f"freikalk {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, required=True)
    common.add_argument("--signature", default="gamma2;m=[2]")
    common.add_argument("--trunc", type=int, default=trunc_default)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--bounds", default="", help="comma list like conj=3,samples=10000")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("derive", parents=[common], help="Fox derivatives of a word")
    s.add_argument("--word", required=True, help="word, or - to read one per line from stdin")
    s.add_argument("--wrt", type=int)

    s = sub.add_parser("expand", parents=[common], help="truncated Magnus expansion")
    s.add_argument("--word", default=None)
    s.add_argument("--ring", default=None, help="group ring element instead of a word")

    s = sub.add_parser("weight", parents=[common], help="lower central class")
    s.add_argument("--word", required=True)

    s = sub.add_parser("rewrite", parents=[common], help="rewrite into Schreier generators")
    s.add_argument("--word", required=True)
    s.add_argument("--subgroup", default="", help="generator indices of H, e.g. 1,2")

    s = sub.add_parser("criterion", parents=[common], help="membership criteria")
    s.add_argument("--word", required=True)
    s.add_argument("--kind", choices=("derivative", "lcs"), default="derivative")
    s.add_argument("--subgroup", default="")
    s.add_argument("--quotient", default="gamma2")
    s.add_argument("--n", type=int, default=1)

    s = sub.add_parser("freiheit", parents=[common], help="one-relator freedom test")
    s.add_argument("--word", required=True)
    s.add_argument("--targets", default="", help="levels like (1,2);(1,3)")
    s.add_argument("--no-oracle", action="store_true")

    s = sub.add_parser("gft", parents=[common], help="select free generators for several relators")
    s.add_argument("--relators", required=True, help="semicolon separated words")

    s = sub.add_parser("verify", parents=[common], help="sampling falsifier and cross-checks")
    s.add_argument("--relators", default="")
    s.add_argument("--subgroup", default="")
    s.add_argument("--level", default="(1,2)")
    s.add_argument("--cross", action="store_true", help="cross-validate criteria instead")
    return p


def _emit(args, result, text, code):
    if args.format == "json":
        payload = {
            "tool": "freikalk",
            "version": __version__,
            "command": args.command,
            "rank": args.rank,
            "trunc": args.trunc,
            "seed": args.seed,
            "bounds": _bounds(args).to_json(),
            "result": result,
            "exit": code,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        print(json.dumps(payload, sort_keys=True, default=_json_default))
    else:
        print(text)


def _json_default(x):
    if x == INF:
        return "inf"
    return str(x)


def main(argv=None):
    try:
        trunc = default_trunc()
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    parser = build_parser(trunc)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.rank < 1:
            raise ParseError("--rank must be positive", str(args.rank), 0)
        if args.trunc < 1:
            raise ParseError("--trunc must be positive", str(args.trunc), 0)
        G = FreeGroup(args.rank)
        result, text, code = COMMANDS[args.command](args, G)
    except ParseError as e:
        print(f"parse error: {e.annotated()}", file=sys.stderr)
        return EXIT_PARSE
    except InternalInconsistency as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (FreikalkError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_REJECTED
    _emit(args, result, text, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
