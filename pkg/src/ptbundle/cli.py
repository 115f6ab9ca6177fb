"""
Command-line front end.

    ptbundle analyze --matrix "2,1,1,1"
    ptbundle volume --word "1,1;1,1" --json
    ptbundle batch inputs.txt

Exit codes: 0 success, 1 usage error, 2 domain error (non-hyperbolic input,
bad determinant, non-positive syllable, too many paths), 3 IO error.
"""
from __future__ import annotations

import argparse
import shlex
import sys

from .errors import ParseError, PTBundleError
from .report import (DEFAULT_MAX_PATHS, SECTIONS, Analysis, Tolerances, dumps,
                     parse_matrix, parse_word)

EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def error_doc(exc, line=None):
    doc = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if getattr(exc, "position", None) is not None:
        doc["error"]["position"] = exc.position
    if line is not None:
        doc["line"] = line
    return doc


def parse_input(matrix=None, word=None):
    if (matrix is None) == (word is None):
        raise ParseError("give exactly one of --matrix / --word")
    return parse_matrix(matrix) if matrix is not None else parse_word(word)


def _parse_batch_line(text):
    tokens = shlex.split(text)
    opts = {}
    it = iter(tokens)
    for tok in it:
        name, eq, val = tok.partition("=")
        if name not in ("--matrix", "--word"):
            raise ParseError(f"unexpected token {tok!r}")
        if not eq:
            val = next(it, None)
            if val is None:
                raise ParseError(f"{name} needs a value")
        opts[name[2:]] = val
    return parse_input(opts.get("matrix"), opts.get("word"))


def _text(section, value):
    if section == "factor":
        w = value["word"]
        return f"word: {'-' if w['sign'] < 0 else ''}{w['letters']}  syllables={w['syllables']}  n={w['n']}"
    if section == "strip":
        return "strip: " + "  ".join("{" + ",".join(t) + "}" for t in value["triangles"])
    if section == "surfaces":
        return "\n".join(
            f"path {' -> '.join(p['vertices'])}: k={p['k']} chi={p['chi']} {p['sidedness']}"
            + (f", boundary of neighbourhood chi={p['double']['chi']}" if p["double"] else "")
            for p in value) or "no minimal paths"
    if section == "guts":
        return "\n".join(
            f"k={g['k']} ({g['parity']}): squares={g['square_neighborhoods']} "
            f"solid tori={g['seifert_solid_tori']} handlebody={g['handlebody_ibundle']} "
            f"guts empty={g['guts_empty']} chi(S)={g['chi_surface']}" for g in value)
    if section == "triangulation":
        return f"triangulation: {value['n']} tetrahedra, edge degrees {value['edge_degrees']}"
    if section == "volume":
        return (f"volume {value['volume']:.12f} <= {value['n']} V3 = {value['bound']:.12f}"
                f"  (gap {value['equality_gap']:.3e}, residual {value['residual']:.1e})")
    return str(value)


def _build_parser():
    p = _Parser(prog="ptbundle", description="Once-punctured-torus bundle analysis")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--tolerance", type=float, default=None,
                        help="solver tolerance (default 1e-12, or $PTB_TOLERANCE)")
    common.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS,
                        help="error out if more minimal paths than this exist")
    for name in SECTIONS + ("analyze",):
        sp = sub.add_parser(name, parents=[common])
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--matrix", help='"a,b,c,d" for [[a,b],[c,d]]')
        src.add_argument("--word", help='"l1,m1;l2,m2;..." for R^l1 L^m1 ...')
    bp = sub.add_parser("batch", parents=[common])
    bp.add_argument("file", help="one --matrix/--word spec per line; '-' for stdin")
    return p


def _run_one(args, source, tol):
    a = Analysis(source, tol, args.max_paths)
    sections = SECTIONS if args.command in ("analyze", "batch") else (args.command,)
    return a, a.report(sections), sections


def _join_values(argv):
    # argparse takes "-3,-2,-1,-1" for an option; glue such values to their flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--matrix", "--word"):
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _build_parser().parse_args(_join_values(argv))
    try:
        tol = Tolerances.resolve(args.tolerance)
        if tol.solver <= 0:
            raise ValueError
    except ValueError:
        print("ptbundle: error: tolerance must be a positive number", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "batch":
        return _batch(args, tol)

    try:
        source = parse_input(args.matrix, args.word)
        _, doc, sections = _run_one(args, source, tol)
    except ParseError as exc:
        _emit_error(args, exc)
        return EXIT_USAGE
    except PTBundleError as exc:
        _emit_error(args, exc)
        return EXIT_DOMAIN
    if args.json:
        print(dumps(doc))
    else:
        for s in sections:
            print(_text(s, doc[s]))
    return 0


def _emit_error(args, exc):
    if args.json:
        print(dumps(error_doc(exc)))
    else:
        print(f"ptbundle: {type(exc).__name__}: {exc}", file=sys.stderr)


def _batch(args, tol):
    try:
        if args.file == "-":
            lines = sys.stdin.read().splitlines()
        else:
            with open(args.file, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
    except OSError as exc:
        print(dumps(error_doc(exc)))
        return EXIT_IO
    for lineno, text in enumerate(lines, 1):
        if not text.strip() or text.lstrip().startswith("#"):
            continue
        try:
            _, doc, _ = _run_one(args, _parse_batch_line(text), tol)
            doc["line"] = lineno
        except PTBundleError as exc:
            doc = error_doc(exc, lineno)
        print(dumps(doc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
