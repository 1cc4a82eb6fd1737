"""``torus`` command line.

Exit codes: 0 success, 2 verification failure, 3 resource cap, 4 bad flags.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import optimizer, reporting
from .candidates import candidate_gram, catalog_vectors, script_g
from .enumeration import EnumerationLimitError, Enumerator, enumerate_up_to, sign_normalize
from .lattice import IntGramMatrix, LatticeError, normalized_eigenvalue_from_form
from .reporting import Table

EXIT_OK, EXIT_VERIFY, EXIT_CAP, EXIT_FLAGS = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def int_range(text: str) -> list[int]:
    """``"3"``, ``"1:20"`` (inclusive) or ``"1,3,5"``."""
    try:
        out = []
        for part in text.split(","):
            if ":" in part:
                lo, hi = part.split(":")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError(f"range must be nonempty and positive: {text!r}")
    return out


def dim_range(text: str) -> list[int]:
    out = int_range(text)
    if max(out) > 8:
        raise argparse.ArgumentTypeError("dimensions are limited to d <= 8")
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_gram(path: str) -> IntGramMatrix:
    return IntGramMatrix.from_json(json.loads(Path(path).read_text()))


def _gram_arg(args) -> IntGramMatrix:
    if getattr(args, "gram", None):
        return _load_gram(args.gram)
    return candidate_gram(args.k, args.d).gram


def _render_json_or_table(obj, table: Table, fmt: str) -> str:
    return json.dumps(obj) + "\n" if fmt == "json" else table.render(fmt)


# -- subcommands --------------------------------------------------------------

def cmd_gram(args) -> int:
    g = script_g(args.k) if args.full else candidate_gram(args.k, args.d).gram
    tb = Table("gram", [f"c{j + 1}" for j in range(g.dim)], [list(r) for r in g.entries])
    _emit(_render_json_or_table(g.to_json(), tb, args.format), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = _gram_arg(args)
    if args.bound is not None:
        bound = args.bound
    else:
        bound, _ = Enumerator(g).kth_value(args.count)
    sp = enumerate_up_to(g, bound)
    rows = [[str(e.q_value), e.multiplicity, normalized_eigenvalue_from_form(g, e.q_value),
             json.dumps([list(v) for v in e.representatives])] for e in sp.entries]
    tb = Table("spectrum", ["q", "mult", "lambda", "reps"], rows, {"lambda": 6})
    _emit(_render_json_or_table(sp.to_json(), tb, args.format), args.out)
    return EXIT_OK


def cmd_shortvecs(args) -> int:
    g = _gram_arg(args)
    q, reps = Enumerator(g).kth_value(args.k)
    lam = normalized_eigenvalue_from_form(g, q)
    obj = {"k": args.k, "q": str(q), "lambda": lam, "mult": 2 * len(reps), "reps": [list(v) for v in reps]}
    if not args.gram:
        want = {sign_normalize(v) for v in catalog_vectors(args.k, args.d).vectors()}
        obj["catalog_match"] = want == {sign_normalize(v) for v in reps}
    tb = Table("shortvecs", ["vector", "q"], [[" ".join(map(str, v)), q] for v in reps])
    _emit(_render_json_or_table(obj, tb, args.format), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    d_range = args.d or None
    if args.name == "lam1":
        tb = reporting.table_lam1(d_range or range(1, 9))
    elif args.name == "eigtable":
        tb = reporting.table_eig(d_range or range(1, 9), k=(args.k or [3])[0])
    elif args.name == "lattvecs":
        tb = reporting.table_lattvecs((args.k or [None])[0], (d_range or [8])[-1])
    elif args.name == "lamkd":
        tb = reporting.table_lamkd(args.kmax, d_range or range(1, 9))
    else:
        tb = reporting.table_cvals(args.k or [3], [d for d in (d_range or range(2, 9)) if d >= 2])
    if not args.golden:
        _emit(tb.render(args.format), args.out)
        return EXIT_OK
    cells = reporting.golden_diff(tb)
    _emit(tb.render(args.format) + "\n" + reporting.golden_table(cells).render(args.format), args.out)
    bad = [c for c in cells if not c.ok and not c.note]
    sys.stderr.write(f"golden: {len(cells) - len(bad)}/{len(cells)} cells agree"
                     f" ({sum(1 for c in cells if not c.ok and c.note)} documented misprints)\n")
    return EXIT_OK if not bad else EXIT_VERIFY


def cmd_verify(args) -> int:
    if args.gram:
        if len(args.k) != 1 or len(args.d) != 1:
            raise argparse.ArgumentTypeError("--gram needs a single -k and -d")
        records = [reporting.verify_case(args.k[0], args.d[0], gram=_load_gram(args.gram),
                                         certificates=not args.no_certificates)]
    else:
        records = reporting.verify_sweep(args.k, args.d, certificates=not args.no_certificates)
    if args.format == "json":
        text = "".join(json.dumps(r.to_json()) + "\n" for r in records)
    else:
        cols = ["k", "d", "lambda_enumerated", "rel_error", "multiplicity", "catalog_match",
                "spanning_det", "residual_zero", "ok"]
        tb = Table("verify", cols, [[getattr(r, c) for c in cols] for r in records],
                   {"lambda_enumerated": 6})
        text = tb.render(args.format)
    _emit(text, args.out)
    failed = [r for r in records if not r.ok]
    sys.stderr.write(f"verify: {len(records) - len(failed)}/{len(records)} cases pass\n")
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_optimize(args) -> int:
    cfg = optimizer.OptConfig(tol=args.tol, max_iter=args.max_iter, window=args.window)
    runs = optimizer.multi_start(args.d, args.k, args.starts, args.seed, cfg)
    if args.trace_dir:
        path = Path(args.trace_dir)
        path.mkdir(parents=True, exist_ok=True)
        for i, run in enumerate(runs):
            (path / f"run_{i:03d}.jsonl").write_text(run.to_jsonl())
    best = max(runs, key=lambda r: r.lam)
    summary = {"d": args.d, "k": args.k, "starts": args.starts, "seed": args.seed,
               "best_lambda": best.lam, "best_gram": best.gram,
               "runs": [r.final_record() for r in runs]}
    if args.format == "json":
        text = json.dumps(summary) + "\n"
    else:
        tb = Table("optimize", ["seed", "lambda", "status", "iterations"],
                   [[r.seed, r.lam, r.status, r.iterations] for r in runs], {"lambda": 6})
        text = tb.render(args.format)
    _emit(text, args.out)
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    rep = reporting.degeneracy_report(args.d, args.kmax)
    obj = {"d": rep.d, "fitted_exponents": rep.fitted_exponents,
           "expected_exponents": rep.expected_exponents, "exponent_sum": rep.exponent_sum,
           "samples": [{"k": k, "mu": mu} for k, mu in rep.samples]}
    _emit(_render_json_or_table(obj, rep.to_table(), args.format), args.out)
    return EXIT_OK


def cmd_injectivity(args) -> int:
    rep = reporting.injectivity_report(args.d, args.kmax)
    obj = {"d": rep.d, "fitted_slope": rep.fitted_slope, "exact_slope": rep.exact_slope,
           "expected_slope": rep.expected_slope,
           "samples": [{"k": k, "inj_proxy": p, "inj_exact": e} for k, p, e in rep.samples]}
    _emit(_render_json_or_table(obj, rep.to_table(), args.format), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "markdown"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    p = _Parser(prog="torus", description="Spectra and optimal eigenvalues of flat tori (d <= 8).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kd(sp, k_default=1, d_required=True):
        sp.add_argument("-k", type=int, default=k_default)
        sp.add_argument("-d", type=int, required=d_required, choices=range(1, 9), metavar="D")

    s = sub.add_parser("gram", parents=[common], help="Gram matrix of a candidate torus")
    kd(s, d_required=False)
    s.add_argument("--full", action="store_true", help="the whole 8x8 matrix")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("spectrum", parents=[common], help="enumerated spectrum levels")
    kd(s, d_required=False)
    s.add_argument("--gram", help="JSON matrix file instead of a candidate torus")
    s.add_argument("--bound", type=int, help="largest form value to include")
    s.add_argument("--count", type=int, default=10, help="include eigenvalues 1..count")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("shortvecs", parents=[common], help="vectors of the k-th eigenvalue level")
    kd(s, d_required=False)
    s.add_argument("--gram", help="JSON matrix file instead of a candidate torus")
    s.set_defaults(func=cmd_shortvecs)

    s = sub.add_parser("table", parents=[common], help="recompute a published table")
    s.add_argument("--name", required=True, choices=["lam1", "eigtable", "lattvecs", "lamkd", "cvals"])
    s.add_argument("--kmax", type=int, default=20)
    s.add_argument("--k", type=int_range)
    s.add_argument("--d", type=dim_range)
    s.add_argument("--golden", action="store_true", help="diff against the published values")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("verify", parents=[common], help="check candidate tori against the closed forms")
    s.add_argument("-k", "--k", type=int_range, default=int_range("1:20"))
    s.add_argument("-d", "--d", type=dim_range, default=dim_range("1:8"))
    s.add_argument("--gram", help="verify this JSON matrix in place of the candidate (single k, d)")
    s.add_argument("--no-certificates", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("optimize", parents=[common], help="multi-start local optimization")
    s.add_argument("-d", type=int, required=True, choices=range(1, 9), metavar="D")
    s.add_argument("-k", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=500)
    s.add_argument("--starts", type=int, default=1)
    s.add_argument("--window", type=int, help="extra eigenvalue constraints K")
    s.add_argument("--trace-dir", help="directory for per-run JSONL traces")
    s.set_defaults(func=cmd_optimize)

    for name, func, helptext in [("degeneracy", cmd_degeneracy, "Gram eigenvalue scaling in k"),
                                 ("injectivity", cmd_injectivity, "injectivity radius scaling in k")]:
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("-d", type=int, required=True, choices=range(1, 9), metavar="D")
        s.add_argument("--kmax", type=int, default=10 ** 4)
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and isinstance(args.k, int) and args.k < 1:
        parser.error("-k must be >= 1")
    if args.command in ("spectrum", "shortvecs") and not args.gram and args.d is None:
        parser.error("-d is required unless --gram is given")
    if args.command == "gram" and not args.full and args.d is None:
        parser.error("-d is required unless --full is given")
    try:
        return args.func(args)
    except EnumerationLimitError as exc:
        sys.stderr.write(f"torus: resource cap reached: {exc}\n")
        return EXIT_CAP
    except (argparse.ArgumentTypeError, LatticeError, ValueError) as exc:
        sys.stderr.write(f"torus: {exc}\n")
        return EXIT_FLAGS


if __name__ == "__main__":
    sys.exit(main())
