"""Command line: build, query and benchmark compressed indexes.

    gcindex build text.txt -o text.gci [--balanced --epsilon 0.5]
    gcindex build --grammar-in text.gcs -o text.gci
    gcindex query text.gci rank a 5
    gcindex query text.gci --script queries.txt [--oracle]
    gcindex bench text.gci --workload extract --count 1000 --length 64 --seed 1
    gcindex pathcount build graph.dag -o graph.gci
    gcindex pathcount query graph.gci u s1
"""

from __future__ import annotations

import argparse
import csv
import random
import sys

from .balanced import DEFAULT_EPSILON
from .errors import CorruptIndex, DagError, GCIndexError
from .grammar import build_grammar, expand_naive, read_grammar
from .index import BalancedEngine, UnbalancedIndex, load_index, save_index
from .oracle import naive_access, naive_rank, naive_select
from .pathcount import read_dag
from .stats import QueryStats

BENCH_COLUMNS = ["op", "arg1", "arg2", "light_transitions", "probes", "jumps",
                 "decompress_nodes", "nodes_visited", "work"]

BENCH_HELP = """\
CSV columns, one row per query:
  op                 access | extract | rank | select
  arg1, arg2         access/extract: interval i, j; rank: symbol, i;
                     select: symbol, k
  light_transitions  heavy-path exits into a light child
  probes             jump-table lookups in heavy-path searches
  jumps              jump pointers / fringe pieces used on hanging sides
  decompress_nodes   nodes of the decompression tree
  nodes_visited      expanded nodes entered (balanced engine)
  work               probes + jumps + decompress_nodes + nodes_visited
"""


class QueryError(Exception):
    pass


# -- symbols ------------------------------------------------------------------

def byte_symbols(alphabet) -> bool:
    return len(alphabet) <= 256 and all(s < 256 for s in alphabet)


def parse_symbol(tok: str, as_bytes: bool) -> int:
    if not as_bytes:
        try:
            return int(tok)
        except ValueError:
            raise QueryError("symbol %r is not a decimal code" % tok) from None
    if len(tok) == 1 and ord(tok) < 256:
        return ord(tok)
    if len(tok) == 4 and tok.startswith("\\x"):
        try:
            return int(tok[2:], 16)
        except ValueError:
            pass
    if tok == "\\\\":
        return 92
    raise QueryError("symbol %r is not a single byte (use one character or \\xHH)" % tok)


def show_symbol(s: int, as_bytes: bool) -> str:
    if not as_bytes:
        return str(s)
    ch = chr(s)
    return ch if ch.isprintable() and ch not in " \\" else "\\x%02x" % s


def show_text(syms, as_bytes: bool) -> str:
    if not as_bytes:
        return " ".join(str(s) for s in syms)
    return "".join(show_symbol(s, True) for s in syms)


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise QueryError("%r is not an integer" % tok) from None


# -- query evaluation --------------------------------------------------------------

def answer(ix, words, as_bytes: bool, text=None) -> str:
    """Answer one query; ``text`` (the plain string) enables the oracle check."""
    if not words:
        raise QueryError("empty query")
    op, args = words[0], words[1:]
    if op == "pathcount":
        if len(args) != 2:
            raise QueryError("usage: pathcount <node> <sink>")
        if getattr(ix, "engine", "") != "pathcount":
            raise QueryError("not a path-count index")
        return str(ix.count_paths(args[0], args[1]))
    if getattr(ix, "engine", "") == "pathcount":
        raise QueryError("a path-count index only answers 'pathcount <node> <sink>'")
    if op == "access":
        if len(args) not in (1, 2):
            raise QueryError("usage: access <i> [<j>]")
        i = _int(args[0])
        j = _int(args[1]) if len(args) == 2 else i
        got = ix.extract(i, j)
        out = show_text(got, as_bytes)
        if text is not None:
            out += _oracle_note(got == naive_access(text, i, j), show_text(naive_access(text, i, j), as_bytes))
        return out
    if op == "rank":
        if len(args) != 2:
            raise QueryError("usage: rank <symbol> <i>")
        c, i = parse_symbol(args[0], as_bytes), _int(args[1])
        got = ix.rank(c, i)
        out = str(got)
        if text is not None:
            want = naive_rank(text, c, i)
            out += _oracle_note(got == want, str(want))
        return out
    if op == "select":
        if len(args) != 2:
            raise QueryError("usage: select <symbol> <k>")
        c, k = parse_symbol(args[0], as_bytes), _int(args[1])
        got = ix.select(c, k)
        out = str(got)
        if text is not None:
            want = naive_select(text, c, k)
            out += _oracle_note(got == want, str(want))
        return out
    raise QueryError("unknown query %r" % op)


def _oracle_note(ok: bool, want: str) -> str:
    return "  [oracle: agree]" if ok else "  [oracle: MISMATCH, expected %s]" % want


def run_queries(ix, lines, out, oracle=False) -> int:
    """Answer each line; returns the number of lines that failed."""
    as_bytes = byte_symbols(ix.g.alphabet)
    text = None
    if oracle and getattr(ix, "engine", "") != "pathcount":
        text = expand_naive(ix.g)
    failed = 0
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            res = answer(ix, line.split(), as_bytes, text)
        except (QueryError, GCIndexError) as e:
            msg = e.args[0] if e.args else e.__class__.__name__
            res = "error: %s: %s" % (e.__class__.__name__, msg)
            failed += 1
        print("%s -> %s" % (line, res), file=out)
    return failed


# -- commands -----------------------------------------------------------------

def cmd_build(args) -> int:
    if args.grammar_in:
        with open(args.grammar_in, encoding="utf-8") as fp:
            g = read_grammar(fp)
    else:
        if args.input is None:
            raise SystemExit("build: give an input file or --grammar-in")
        with open(args.input, "rb") as fp:
            g = build_grammar(fp.read())
    if args.balanced:
        ix = BalancedEngine(g, args.epsilon)
    else:
        ix = UnbalancedIndex(g)
    size = save_index(ix, args.output)
    stats = [("engine", ix.engine), ("n", g.n), ("N", g.N), ("sigma", g.sigma),
             ("height", g.height()), ("w", ix.w), ("bytes", size)]
    if args.balanced:
        stats += [("epsilon", ix.eps), ("depth", ix.depth)]
    for k, v in stats:
        print("%s=%s" % (k, v))
    return 0


def cmd_query(args) -> int:
    ix = load_index(args.index)
    if args.script:
        with open(args.script, encoding="utf-8") as fp:
            lines = fp.read().splitlines()
    else:
        if not args.words:
            raise SystemExit("query: give a query or --script")
        lines = [" ".join(args.words)]
    run_queries(ix, lines, sys.stdout, oracle=args.oracle)
    return 0


def bench_rows(ix, workload: str, count: int, length: int, seed: int):
    """Deterministic instrumented workload; yields CSV rows."""
    rng = random.Random(seed)
    g = ix.g
    N = g.N
    m = max(1, min(length, N))
    alphabet = g.alphabet
    for _ in range(count):
        st = QueryStats()
        if workload in ("access", "extract"):
            i = rng.randint(1, N - m + 1)
            j = i + m - 1
            if m == 1 and workload == "access":
                ix.access(i, st)
            else:
                ix.extract(i, j, st)
            a1, a2 = i, j
        elif workload == "rank":
            c = rng.choice(alphabet)
            i = rng.randint(0, N)
            ix.rank(c, i, st)
            a1, a2 = c, i
        else:
            c = rng.choice(alphabet)
            k = rng.randint(1, ix.count(c))
            ix.select(c, k, st)
            a1, a2 = c, k
        d = st.as_dict()
        yield [workload, a1, a2] + [d[k] for k in BENCH_COLUMNS[3:]]


def cmd_bench(args) -> int:
    ix = load_index(args.index)
    if getattr(ix, "engine", "") == "pathcount":
        raise SystemExit("bench: path-count indexes are not supported")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for row in bench_rows(ix, args.workload, args.count, args.length, args.seed):
        w.writerow(row)
    return 0


def cmd_pathcount_build(args) -> int:
    from .index import build_pathcount_index

    d = read_dag(args.dag)
    ix = build_pathcount_index(d, args.max_paths)
    size = save_index(ix, args.output)
    for k, v in [("engine", ix.engine), ("nodes", len(d.nodes)), ("edges", len(d.edges)),
                 ("sinks", len(ix.sink_symbol)), ("paths", ix.total_paths),
                 ("n", ix.g.n), ("bytes", size)]:
        print("%s=%s" % (k, v))
    return 0


def cmd_pathcount_query(args) -> int:
    ix = load_index(args.index)
    run_queries(ix, ["pathcount %s %s" % (args.node, args.sink)], sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gcindex",
        description="Query a string stored as a straight-line program.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="compress a file and write an index")
    p.add_argument("input", nargs="?", help="file to index (bytes)")
    p.add_argument("-o", "--output", required=True, help="index file to write")
    p.add_argument("--grammar-in", help="use this GCS1 grammar instead of compressing input")
    p.add_argument("--balanced", action="store_true",
                   help="use the shallow-traversal engine")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="expansion exponent of the balanced engine (default %(default)s)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer queries against an index",
                       description="Queries: 'access i [j]', 'rank c i', 'select c k', "
                                   "'pathcount u v'.  Symbols are single characters "
                                   "(or \\xHH) when the alphabet fits in a byte, decimal "
                                   "codes otherwise.")
    p.add_argument("index")
    p.add_argument("words", nargs="*", help="a single query, e.g. rank a 5")
    p.add_argument("--script", help="file with one query per line")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check every answer against a plain scan of the text")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="instrumented random workload as CSV",
                       epilog=BENCH_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("index")
    p.add_argument("--workload", choices=["access", "extract", "rank", "select"],
                   default="access")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--length", type=int, default=1,
                   help="interval length m for access/extract (clamped to N)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("pathcount", help="path counting in DAGs")
    psub = p.add_subparsers(dest="pc_command", required=True)
    q = psub.add_parser("build", help="index a DAG ('V id' / 'E from to' lines)")
    q.add_argument("dag")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--max-paths", type=int, default=None,
                   help="refuse DAGs with more source-to-sink paths "
                        "(default: $GCS_MAX_PATHS or 2**48)")
    q.set_defaults(func=cmd_pathcount_build)
    q = psub.add_parser("query", help="count paths from a node to a sink")
    q.add_argument("index")
    q.add_argument("node")
    q.add_argument("sink")
    q.set_defaults(func=cmd_pathcount_query)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CorruptIndex as e:
        print("gcindex: corrupt index: %s" % e, file=sys.stderr)
    except (OSError, GCIndexError, DagError) as e:
        print("gcindex: %s" % e, file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
