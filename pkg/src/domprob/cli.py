"""Command-line front end.

Every subcommand writes one JSON report (stdout unless ``--output``) and a
short summary line on stderr.  Exit codes: 0 when the property holds or the
computation simply succeeded, 1 when the property is refuted (a witness is in
the report), 2 for usage or precondition errors.

The report embeds the argument vector that produced it, so
``domprob <report['config']['argv']...>`` reproduces it.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import injection, probability, tn
from ._parallel import default_threads
from .partitions import cover_pairs, dominates, dual, format_parts, parse_parts
from .series import format_rational, parse_rational

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2

PRESETS = ("sec5-uniform013", "sec5-qfamily", "lemma23-counterexamples")


class UsageError(Exception):
    pass


def _field(name: str, parse, text: str):
    try:
        return parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _seq(args) -> tn.SequenceView:
    coeffs = _field("seq", lambda s: [parse_rational(tok) for tok in s.split(",")], args.seq)
    return tn.SequenceView(coeffs, finite=not args.prefix_only)


def _dist(args) -> probability.Distribution:
    return _field("dist", probability.make_distribution, args.dist)


def _index(name: str, text: str) -> tuple[int, ...]:
    return _field(name, parse_parts, text)


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, result dict, summary line)


def cmd_dominance(args):
    lhs, rhs = _index("lhs", args.lhs), _index("rhs", args.rhs)
    holds = dominates(lhs, rhs)
    return (EXIT_OK if holds else EXIT_REFUTED,
            {"lhs": format_parts(lhs), "rhs": format_parts(rhs), "dominates": holds},
            f"dominates: {str(holds).lower()}")


def cmd_dual(args):
    lam = _index("shape", args.shape)
    out = format_parts(dual(lam))
    return EXIT_OK, {"shape": format_parts(lam), "dual": out}, f"dual: {out}"


def cmd_hasse(args):
    edges = [[format_parts(l), format_parts(m)] for l, m in cover_pairs(args.n)]
    return EXIT_OK, {"n": args.n, "cover_edges": edges}, f"{len(edges)} cover edges"


def cmd_prob(args):
    X = _dist(args)
    q = probability.EventQuery(_index("shape", args.shape), args.total, args.cap)
    value = probability.event_probability(X, q)
    return (EXIT_OK, {"distribution": X.to_json(), "query": q.to_json(),
                      "probability": format_rational(value)}, format_rational(value))


def cmd_condition(args):
    X = _dist(args)
    lam, mu = _index("lhs", args.lhs), _index("rhs", args.rhs)
    rep = probability.condition_C(lam, mu, X)
    return (EXIT_OK if rep.holds else EXIT_REFUTED,
            {"distribution": X.to_json(), "lhs": format_parts(lam), "rhs": format_parts(mu),
             "condition": rep.to_json()},
            f"condition: {str(rep.holds).lower()}")


def cmd_equivalence(args):
    X = _dist(args)
    rep = probability.verify_equivalence(args.n, X, threads=args.threads)
    summary = (f"{len(rep.rows)} pairs, {len(rep.discrepancies)} discrepancies"
               + ("" if rep.hypotheses_met else "; hypotheses not met"))
    return EXIT_OK if rep.consistent else EXIT_REFUTED, rep.to_json(), summary


def cmd_mc(args):
    X = _dist(args)
    q = probability.EventQuery(_index("shape", args.shape), args.total, args.cap)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    res = probability.monte_carlo(X, q, args.trials, args.seed)
    exact = probability.event_probability(X, q)
    return (EXIT_OK, {"distribution": X.to_json(), "query": q.to_json(), **res.to_json(),
                      "exact": format_rational(exact)},
            f"estimate {res.estimate:.6g} +- {res.stderr:.2g} (exact {format_rational(exact)})")


def cmd_tn_check(args):
    p = _seq(args)
    rows, cols = args.rows, args.cols
    if args.complete:
        if args.matrix.upper() != "T" or args.prefix_only:
            raise UsageError("--complete applies to the Toeplitz matrix of a finite-support sequence")
        rows, cols = tn.complete_toeplitz_window(len(p), args.k)
    rep = tn.check_tn(p, args.k, rows, cols, strict=args.strict, matrix=args.matrix)
    kind = "TP" if args.strict else "TN"
    return (EXIT_OK if rep.holds else EXIT_REFUTED, rep.to_json(),
            f"{kind}_{args.k} on {args.matrix.upper()} window {rows}x{cols}: {str(rep.holds).lower()}")


def cmd_tn2_char(args):
    p = _seq(args)
    rep = tn.tn2_via_char(p, args.bound)
    return EXIT_OK if rep.holds else EXIT_REFUTED, rep.to_json(), f"TN_2: {str(rep.holds).lower()}"


def cmd_shape(args):
    p = _seq(args)
    s = tn.shape(p)
    return EXIT_OK, s.to_json(), " ".join(f"{k}={str(v).lower()}" for k, v in s.to_json().items())


def cmd_transfer_identity(args):
    p = _seq(args)
    try:
        idx = tn.MinorIndex(_index("rows", args.rows), _index("cols", args.cols))
        res = tn.transfer_identity_check(p, idx)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return (EXIT_OK if res.equal else EXIT_REFUTED, {"index": idx.to_json(), **res.to_json()},
            f"equal: {str(res.equal).lower()}")


def cmd_conjecture(args):
    if args.cell:
        A, a, B, b = _field("cell", lambda s: tuple(int(x) for x in s.split(",")), args.cell)
        try:
            cell = injection.run_cell(A, a, B, b)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        result = cell.to_json(include_mapping=True)
        ok = cell.result.found and cell.verified
        _write_replay(args.replay, [cell])
        return EXIT_OK if ok else EXIT_REFUTED, result, f"found: {str(cell.result.found).lower()}"

    def progress(done, total, cell):
        r = cell.result.problem
        print(f"[{done}/{total}] A={r.A} B={r.B} a={r.a} b={r.b} found={cell.result.found}",
              file=sys.stderr)

    rep = injection.sweep(args.A, args.a, progress=progress if args.verbose else None,
                          threads=args.threads)
    _write_replay(args.replay, rep.counterexamples)
    summary = f"{len(rep.cells)} cells, {len(rep.counterexamples)} without injection"
    return EXIT_OK if rep.all_found else EXIT_REFUTED, rep.to_json(), summary


def _write_replay(path, cells):
    if not path:
        return
    data = [c.result.to_json(include_mapping=True) for c in cells]
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)


def cmd_preset(args):
    if args.name == "sec5-uniform013":
        Y = probability.uniform013()
        lam, mu = probability.GAP_LAM, probability.GAP_MU
        q = lambda shape: probability.EventQuery(shape, probability.GAP_QUERY_TOTAL, probability.GAP_QUERY_CAP)
        rep = probability.condition_C(lam, mu, Y)
        result = {"distribution": Y.to_json(), "lhs": format_parts(lam), "rhs": format_parts(mu),
                  "lhs_dominates_rhs": dominates(lam, mu),
                  "P_lhs": format_rational(probability.event_probability(Y, q(lam))),
                  "P_rhs": format_rational(probability.event_probability(Y, q(mu))),
                  "condition": rep.to_json()}
        return EXIT_OK if rep.holds else EXIT_REFUTED, result, f"condition: {str(rep.holds).lower()}"
    if args.name == "sec5-qfamily":
        rows = probability.scan_q_family(Fraction(k, 20) for k in range(1, 20))
        fine = probability.scan_q_family(Fraction(k, 100) for k in range(90, 100))
        thr = probability.q_threshold(rows + fine)
        lo, hi = probability.bracket_q_threshold(Fraction(9, 10), 1, steps=30)
        violated = [format_rational(r.q) for r in rows if r.violated]
        result = {"rows": [r.to_json() for r in rows],
                  "violated_at": violated,
                  "fine_rows": [r.to_json() for r in fine],
                  "fine_violated_at": [format_rational(r.q) for r in fine if r.violated],
                  "empirical_threshold": None if thr is None else format_rational(thr),
                  "crossing_bracket": [format_rational(lo), format_rational(hi)],
                  "crossing_bracket_float": [float(lo), float(hi)],
                  "exploratory": True}
        return (EXIT_OK, result,
                f"violations at {len(violated)} of {len(rows)} grid values; "
                f"crossing in [{float(lo):.6f}, {float(hi):.6f}]")
    if args.name == "lemma23-counterexamples":
        a = tn.SequenceView([2, 3, 5, 9, 17], finite=False)
        b = tn.SequenceView([1, 0, 0, 1, 1])
        tn2 = tn.tn2_via_char(b)
        result = {"2^n+1": {"seq": "2,3,5,9,17", **tn.shape(a).to_json()},
                  "1,0,0,1,1": {"seq": "1,0,0,1,1", **tn.shape(b).to_json(), "tn2": tn2.to_json()}}
        ok = (tn.shape(a).unimodal and not tn.shape(a).log_concave
              and tn.shape(b).log_concave and not tn2.holds)
        return EXIT_OK if ok else EXIT_REFUTED, result, f"reproduced: {str(ok).lower()}"
    raise UsageError(f"unknown preset {args.name!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="domprob", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes for sweeps (default: $DOMPROB_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        return p

    def seq_args(p):
        p.add_argument("--seq", required=True, help="comma-separated rationals p_0,p_1,...")
        p.add_argument("--prefix-only", action="store_true",
                       help="the sequence continues beyond the given terms (default: zero tail)")

    p = add("dominance", cmd_dominance, "does LHS dominate RHS")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)

    p = add("dual", cmd_dual, "conjugate partition")
    p.add_argument("--shape", required=True)

    p = add("hasse", cmd_hasse, "cover edges of the dominance order on partitions of n")
    p.add_argument("--n", type=int, required=True)

    for name, fn, help in (("prob", cmd_prob, "exact ball-filling probability"),
                           ("mc", cmd_mc, "Monte Carlo estimate of the same probability")):
        p = add(name, fn, help)
        p.add_argument("--dist", required=True)
        p.add_argument("--shape", required=True)
        p.add_argument("--total", type=int, required=True)
        p.add_argument("--cap", type=int, required=True)
        if name == "mc":
            p.add_argument("--trials", type=int, default=100000)
            p.add_argument("--seed", type=int, default=0)

    p = add("condition", cmd_condition, "decide C(LHS, RHS, X)")
    p.add_argument("--dist", required=True)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)

    p = add("equivalence", cmd_equivalence, "dominance vs C over all pairs of partitions of n")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("tn-check", cmd_tn_check, "windowed TN_k / TP_k check of T or S")
    seq_args(p)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--rows", type=int, default=6)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--matrix", default="T", choices=["T", "S", "t", "s"])
    p.add_argument("--strict", action="store_true", help="check TP_k instead of TN_k")
    p.add_argument("--complete", action="store_true",
                   help="use a window that certifies TN_k of T for a finite-support sequence")

    p = add("tn2-char", cmd_tn2_char, "TN_2 through p_a p_d <= p_b p_c")
    seq_args(p)
    p.add_argument("--bound", type=int, default=None)

    p = add("shape", cmd_shape, "unimodality and log-concavity")
    seq_args(p)

    p = add("transfer-identity", cmd_transfer_identity, "check the power-matrix minor expansion")
    seq_args(p)
    p.add_argument("--rows", required=True, help="strictly increasing row indices, first >= 1")
    p.add_argument("--cols", required=True, help="strictly increasing column indices")

    p = add("conjecture", cmd_conjecture, "search for dominance-compatible injections")
    p.add_argument("--A", type=int, default=2, dest="A", help="largest A in the sweep")
    p.add_argument("--a", type=int, default=2, dest="a", help="largest a in the sweep")
    p.add_argument("--cell", help="single problem 'A,a,B,b' (reports the mapping)")
    p.add_argument("--replay", help="write mappings / Hall violators of failing cells here")
    p.add_argument("--verbose", action="store_true", help="progress on stderr")

    p = add("preset", cmd_preset, "named demonstrations")
    p.add_argument("name", choices=PRESETS)
    return parser


def _canonical_argv(argv: list[str]) -> list[str]:
    """argv without the output destination, which does not affect the report."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--output", "-o"):
            skip = True
            continue
        if tok.startswith("--output="):
            continue
        out.append(tok)
    return out


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), None
    if args.threads is None:
        args.threads = default_threads()
    try:
        code, result, summary = args.fn(args)
    except (UsageError, probability.DistributionError, tn.InsufficientCoefficients) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    report = {"command": args.command, "config": {"argv": _canonical_argv(argv)},
              "exit_code": code, "result": result}
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(summary, file=sys.stderr)
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
