"""Command-line front end.

Exit codes: 0 the command completed (a "not tight" verdict is still a
completed decision), 2 usage error, 3 invalid input, 4 method not applicable.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .complex import ComplexError, SimplicialComplex, build
from .decide import ANY, METHODS, decide_auto
from .generators import FixtureError, gen
from .homology import FieldSpec, Q, betti_numbers, integral_homology_all, orientable
from .oracle import mu1 as mu1_of, mu_vector, sigma_vector_bruteforce
from .report import Verdict, frac_str
from .sigma_fpt import sigma0_fpt
from .treewidth import decompose, make_nice
from .tight_fpt import augmented_dual_graph

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NA = 0, 2, 3, 4


class InputError(Exception):
    pass


def _label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_text(text: str) -> SimplicialComplex:
    """One facet per line, whitespace-separated labels, '#' starts a comment."""
    facets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        facet = [_label(t) for t in line.split()]
        if len(set(facet)) != len(facet):
            raise InputError(f"line {lineno}: facet repeats a vertex label")
        facets.append(facet)
    if not facets:
        raise InputError("no facets found")
    return build(facets)


def parse_json(text: str) -> SimplicialComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("facets"), list):
        raise InputError('JSON input needs a "facets" array')
    facets = doc["facets"]
    for i, f in enumerate(facets):
        if not isinstance(f, list) or not f:
            raise InputError(f"facet {i}: expected a non-empty array of labels")
        if len(set(map(json.dumps, f))) != len(f):
            raise InputError(f"facet {i}: repeats a vertex label")
    return build(facets)


def parse_complex(path: str) -> SimplicialComplex:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_json(text) if text.lstrip().startswith("{") else parse_text(text)
    except ComplexError as e:
        raise InputError(str(e)) from None


def render_text(C: SimplicialComplex, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [" ".join(str(x) for x in f) for f in C.labelled_facets()]
    return "\n".join(lines) + "\n"


def _neighbourliness(C: SimplicialComplex) -> int:
    k = 1
    while k <= C.dim and C.is_k_neighbourly(k + 1):
        k += 1
    return k


def summary(C: SimplicialComplex) -> dict:
    return {
        "vertices": C.n,
        "dim": C.dim,
        "f_vector": list(C.f_vector()),
        "neighbourly": _neighbourliness(C),
    }


def _field(text: str, allow_any: bool = False):
    if allow_any and text.lower() == ANY:
        return ANY
    try:
        return FieldSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _emit(doc: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        return
    for k, v in doc.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v)
        out.write(f"{k}: {v}\n")


# -- subcommands ---------------------------------------------------------------

def cmd_info(C, args) -> int:
    doc = summary(C)
    doc["euler_characteristic"] = C.euler_characteristic()
    doc["pure"] = C.is_pure()
    doc["weak_pseudomanifold"] = C.is_weak_pseudomanifold()
    doc["closed"] = C.is_closed_pseudomanifold()
    doc["connected"] = C.is_connected()
    if doc["closed"]:
        doc["orientable"] = orientable(C, 0)
    _emit(doc, args.json)
    return EXIT_OK


def cmd_homology(C, args) -> int:
    doc = summary(C)
    doc["field"] = args.field.name
    doc["betti"] = list(betti_numbers(C, args.field))
    if args.integral:
        doc["integral"] = [str(h) for h in integral_homology_all(C)]
    _emit(doc, args.json)
    return EXIT_OK


def cmd_sigma(C, args) -> int:
    doc = summary(C)
    if args.method == "fpt":
        doc["sigma0"] = frac_str(sigma0_fpt(C))
    else:
        doc["field"] = args.field.name
        doc["sigma"] = [frac_str(x) for x in sigma_vector_bruteforce(C, args.field)]
    _emit(doc, args.json)
    return EXIT_OK


def cmd_mu(C, args) -> int:
    doc = summary(C)
    if args.method == "fpt":
        doc["mu1"] = frac_str(mu1_of(C, sigma0_fpt))
    else:
        doc["field"] = args.field.name
        doc["mu"] = [frac_str(x) for x in mu_vector(C, args.field)]
    _emit(doc, args.json)
    return EXIT_OK


def cmd_treewidth(C, args) -> int:
    G = C.one_skeleton() if args.graph == "skeleton" else augmented_dual_graph(C)
    T = decompose(G, args.strategy)
    N = make_nice(T, G)
    doc = {"graph": args.graph, "strategy": args.strategy, "graph_vertices": G.n,
           "graph_edges": G.num_edges, "width": T.width(), "bags": len(T.bags),
           "nice_nodes": len(N.nodes)}
    _emit(doc, args.json)
    return EXIT_OK


def cmd_tight(C, args) -> int:
    t0 = time.perf_counter()
    rep = decide_auto(C, args.field, args.method, cross_check=args.cross_check)
    if args.timings:
        rep.timings["total_with_io"] = time.perf_counter() - t0
    doc = {"input": summary(C), **rep.to_dict(timings=args.timings)}
    if not args.certificate:
        doc.pop("certificate")
    _emit(doc, args.json)
    if rep.verdict is Verdict.NOT_APPLICABLE:
        for note in rep.notes:
            print(f"not applicable: {note}", file=sys.stderr)
        return EXIT_NA
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        C = gen(args.name, *args.params)
    except (ComplexError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FixtureError as e:  # pragma: no cover - construction bug
        print(f"internal error: {e}", file=sys.stderr)
        return 1
    params = " ".join(map(str, args.params))
    text = render_text(C, f"{args.name} {params}".strip() + f"  f={list(C.f_vector())}")
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tightness", description="Decide tightness of simplicial complexes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="facet list (text or JSON)")
        sp.add_argument("--json", action="store_true", help="print a JSON document")
        return sp

    with_file("info", "f-vector and basic properties")
    sp = with_file("homology", "Betti numbers")
    sp.add_argument("--field", type=_field, default=Q)
    sp.add_argument("--integral", action="store_true", help="also print integral homology")
    sp = with_file("sigma", "sigma-vector")
    sp.add_argument("--method", choices=("brute", "fpt"), default="brute")
    sp.add_argument("--field", type=_field, default=Q)
    sp = with_file("mu", "mu-vector")
    sp.add_argument("--method", choices=("brute", "fpt"), default="brute")
    sp.add_argument("--field", type=_field, default=Q)
    sp = with_file("treewidth", "tree decomposition widths")
    sp.add_argument("--graph", choices=("skeleton", "dual"), default="skeleton")
    sp.add_argument("--strategy", choices=("min_degree", "min_fill", "exact_small"), default="min_fill")
    sp = with_file("tight", "decide tightness")
    sp.add_argument("--field", type=lambda t: _field(t, allow_any=True), default=FieldSpec(2))
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.add_argument("--certificate", action="store_true", help="include the certificate")
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
    sp.add_argument("--cross-check", action="store_true", help="confirm with brute force on small inputs")

    sp = sub.add_parser("gen", help="write a named fixture complex")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*", type=int)
    sp.add_argument("-o", "--output")
    return p


COMMANDS = {"info": cmd_info, "homology": cmd_homology, "sigma": cmd_sigma, "mu": cmd_mu,
            "treewidth": cmd_treewidth, "tight": cmd_tight}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "gen":
        return cmd_gen(args)
    try:
        C = parse_complex(args.file)
        return COMMANDS[args.command](C, args)
    except InputError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ComplexError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
