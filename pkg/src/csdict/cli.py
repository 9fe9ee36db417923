"""``csdict`` command line: gen, build, locate, extract, bench."""

import argparse
import sys

from . import bench, core
from .corpus import KINDS, generate
from .errors import BuildError, FormatError, ParameterError

# short family names accepted with --variant
_FAMILIES = {
    "Hash": {"DH": "HashDH", "LP": "HashLP"},
    "HashB": {"DH": "HashBDH", "LP": "HashBLP"},
    "HashBB": {"DH": "HashBBDH", "LP": "HashBBLP"},
    "FC": {"PFC": "PFC", "HTFC": "HTFC"},
    "FMIndex": {"SSA": "FMIndexSSA", "SSA*": "FMIndexSSA*"},
}


class CliError(Exception):
    pass


def read_lines(path):
    """Newline-delimited strings; a line with a zero byte or an empty line is an error."""
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror}")
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    for k, line in enumerate(lines, 1):
        if 0 in line:
            raise CliError(f"{path}: line {k} contains a 0x00 byte")
        if not line:
            raise CliError(f"{path}: line {k} is empty")
    return lines


def resolve_backend(name, variant):
    if name in _FAMILIES:
        choices = _FAMILIES[name]
        if variant is None:
            raise CliError(f"backend {name} needs --variant ({', '.join(choices)})")
        if variant not in choices:
            raise CliError(f"backend {name} has no variant {variant!r}; choose from {', '.join(choices)}")
        return choices[variant]
    if name not in core.BACKENDS:
        raise CliError(f"unknown backend {name!r}")
    if variant is not None:
        raise CliError(f"--variant does not apply to {name}")
    return name


def _open_out(path):
    return sys.stdout.buffer if path in (None, "-") else open(path, "wb")


def cmd_gen(args):
    if args.n < 1:
        raise CliError("--n must be at least 1")
    strings = generate(args.kind, args.n, args.seed)
    out = _open_out(args.output)
    try:
        out.write(b"".join(s + b"\n" for s in strings))
    finally:
        if out is not sys.stdout.buffer:
            out.close()
    return 0


def cmd_build(args):
    name = resolve_backend(args.backend, args.variant)
    params = {k: getattr(args, k) for k in ("alpha", "bucket", "x") if getattr(args, k) is not None}
    backend = core.get_backend(name)
    extra = set(params) - set(backend.params)
    if extra:
        raise CliError(f"{name} does not take {', '.join('--' + k for k in sorted(extra))}")
    strings = read_lines(args.input)
    d = core.build(strings, name, params)
    data = d.to_bytes()
    with open(args.output, "wb") as fh:
        fh.write(data)
    print(f"n={d.n} size={len(data)} bytes percent={100.0 * len(data) / d.original_plain_bytes:.2f}%")
    return 0


def _load(path):
    try:
        return core.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}")


def cmd_locate(args):
    d = _load(args.dict)
    queries = read_lines(args.queries) if args.queries else [s.encode() for s in args.strings]
    out = sys.stdout.buffer
    for q in queries:
        out.write(b"%d\n" % d.locate(q))
    return 0


def _parse_id(text):
    try:
        return int(text)
    except ValueError:
        return None


def cmd_extract(args):
    d = _load(args.dict)
    ids = read_lines(args.queries) if args.queries else args.ids
    out = sys.stdout.buffer
    for tok in ids:
        i = _parse_id(tok)
        s = d.extract(i) if i is not None else None
        out.write((s if s is not None else b"NULL") + b"\n")
    return 0


def cmd_bench(args):
    cfg = bench.BenchConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = bench.parse_config(fh.read())
        except OSError as exc:
            raise CliError(f"cannot read {args.config}: {exc.strerror}")
    if args.seed is not None:
        cfg.seed = args.seed
    strings = read_lines(args.input)
    rows = bench.run(strings, cfg, log=lambda m: print(m, file=sys.stderr))
    if args.output in (None, "-"):
        bench.write_csv(rows, sys.stdout, cfg)
    else:
        with open(args.output, "w", newline="") as fh:
            bench.write_csv(rows, fh, cfg)
    return 0


def make_parser():
    p = argparse.ArgumentParser(prog="csdict", description="Compressed string dictionaries.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic corpus")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build a dictionary file")
    b.add_argument("--backend", required=True,
                   help=f"one of {', '.join(core.BACKEND_NAMES)}, or a family "
                        f"({', '.join(_FAMILIES)}) with --variant")
    b.add_argument("--variant")
    b.add_argument("--alpha", type=float)
    b.add_argument("--bucket", type=int)
    b.add_argument("--x", type=float)
    b.add_argument("-i", "--input", required=True)
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=cmd_build)

    lo = sub.add_parser("locate", help="string -> id (-1 if absent)")
    lo.add_argument("dict")
    lo.add_argument("strings", nargs="*")
    lo.add_argument("-q", "--queries", help="file of newline-delimited queries")
    lo.set_defaults(func=cmd_locate)

    ex = sub.add_parser("extract", help="id -> string (NULL if out of range)")
    ex.add_argument("dict")
    ex.add_argument("ids", nargs="*")
    ex.add_argument("-q", "--queries", help="file of newline-delimited ids")
    ex.set_defaults(func=cmd_extract)

    be = sub.add_parser("bench", help="time every backend, write CSV")
    be.add_argument("-i", "--input", required=True)
    be.add_argument("--config")
    be.add_argument("--seed", type=int)
    be.add_argument("-o", "--output")
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, BuildError, ParameterError, FormatError) as exc:
        print(f"csdict {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
