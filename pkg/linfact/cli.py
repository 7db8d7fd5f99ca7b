# -*- coding: utf-8 -*-

'''
    The `linfact` command line. Exit codes: 0 success, 2 bad input, 3 a
    verification failure, 4 numerical non-convergence. Results go to stdout
    or to files, logs to stderr.
'''

import argparse
import csv
import logging
import sys

import numpy as np

from . import __version__
from .balance import BalanceConfig, balance, probe_m
from .codec import (
    dump_chain, dump_factorization, dump_polynomial, load_ensemble,
    load_factorization, load_polynomial, decode_chain, decode_factorization,
    decode_file,
)
from .factor import (
    ReconstructionError, VerificationError, absorb_scalars, equalize_sizes,
    factor, multiply_chain, single_blockify, RECONSTRUCTION_TOL,
)
from .repnorm import (
    ConvergenceError, EnsembleSpec, NormMethod, evaluate, operator_norm,
    unitarity_defect,
)
from .selftest import run_selftest
from .transfer import (
    TransferConfig, run_probability_variant, run_transfer, write_csv,
    write_summary_csv,
)
from .word import MAX_GENERATORS

logger = logging.getLogger(__name__)

EXIT_INPUT = 2
EXIT_VERIFICATION = 3
EXIT_CONVERGENCE = 4


def fmt(value: float) -> str:
    return f"{value:.17g}"


def float_list(text: str):
    try:
        return tuple(float(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Not a list of numbers: {text!r}")


def int_list(text: str):
    try:
        return tuple(int(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Not a list of integers: {text!r}")


def add_ensemble_arguments(parser, samples: int = 1):
    parser.add_argument(
        "--ensemble", metavar="JSON",
        help="ensemble block {kind, dim, gen_count, seed, samples}",
    )
    parser.add_argument(
        "--kind", default="haar",
        help="haar, perm or shift (or the full kind names)",
    )
    parser.add_argument("--dim", type=int, help="matrix size N")
    parser.add_argument(
        "--gens", type=int,
        help="number of generators (default: as many as the input uses)",
    )
    parser.add_argument("--samples", type=int, default=samples)
    parser.add_argument("--seed", type=int, default=0)


def ensemble_from(args, gens=frozenset()) -> EnsembleSpec:
    if args.ensemble is not None:
        return load_ensemble(args.ensemble)
    if args.dim is None:
        raise ValueError("Either --ensemble or --dim is required")
    gen_count = args.gens if args.gens is not None else max(gens, default=1)
    return EnsembleSpec(args.kind, args.dim, gen_count, args.seed,
                        args.samples)


def cmd_factorize(args):
    p = load_polynomial(args.input, args.max_gen)
    f = factor(p)
    if args.single_block:
        f = single_blockify(f)
    if args.equal_sizes:
        f = equalize_sizes(f)
    f.verify(p)

    if args.absorb:
        chain = absorb_scalars(f)
        gap = multiply_chain(chain).max_difference(p)
        if gap > RECONSTRUCTION_TOL:
            raise ReconstructionError(
                f"Absorbed chain multiplies out to within {gap:.3e} "
                "of its source"
            )
        dump_chain(chain, f.out_rows, f.out_cols, args.out, f.cost())
    else:
        dump_factorization(f, args.out)
    print(f"m {f.m}")
    print(f"cost {fmt(f.cost())}")


def expand_data(data):
    '''A factorization or a P-chain, multiplied out'''
    if isinstance(data, dict) and "factors" in data:
        chain, _, _ = decode_chain(data)
        return multiply_chain(chain)
    return decode_factorization(data).expand()


def cmd_expand(args):
    p = decode_file(expand_data, args.input)
    dump_polynomial(p, args.out)
    print(f"terms {len(p.terms)}")
    print(f"degree {p.degree()}")


def cmd_eval(args):
    p = load_polynomial(args.poly, args.max_gen)
    rep = ensemble_from(args, p.generators()).sample(args.sample)
    matrix = evaluate(p, rep)
    estimate = operator_norm(matrix, rep.label, args.method)
    if args.save is not None:
        np.save(args.save, matrix)
    print(f"norm {fmt(estimate.value)}")
    print(f"representation {estimate.representation_label}")


def cmd_norm(args):
    p = load_polynomial(args.poly, args.max_gen)
    spec = ensemble_from(args, p.generators())
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["kind", "N", "sample_index", "norm"])
        for index, rep in enumerate(spec.representations()):
            estimate = operator_norm(evaluate(p, rep), rep.label, args.method)
            writer.writerow(
                [spec.kind.value, spec.dim, index, fmt(estimate.value)]
            )
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_balance(args):
    f = load_factorization(args.input)
    spec = ensemble_from(args, f.generators())
    cfg = BalanceConfig(spec, args.rounds, not args.no_search, args.tol)
    balanced, report = balance(f, cfg)
    dump_factorization(balanced, args.out)
    if args.report is not None:
        with open(args.report, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["round", "cost"])
            writer.writerow([0, fmt(report.initial_cost)])
            for number, cost in enumerate(report.trajectory, 1):
                writer.writerow([number, fmt(cost)])
    print(f"initial_cost {fmt(report.initial_cost)}")
    print(f"final_cost {fmt(report.final_cost)}")
    print(f"achieved_epsilon {fmt(report.achieved_epsilon)}")
    print(f"rounds {report.rounds}")


def cmd_probe_m(args):
    cfg = None
    if args.ensemble is not None or args.dim is not None:
        cfg = BalanceConfig(ensemble_from(args, {1, 2}))
    rows = probe_m(
        args.d, args.n, args.eps, args.seed, args.count, cfg,
        args.max_extra, args.threads,
    )
    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["d", "n", "eps", "instance", "achieved_m", "achieved_cost"]
        )
        for row in rows:
            writer.writerow([
                row.d, row.n, fmt(row.eps), row.instance,
                "" if row.achieved_m is None else row.achieved_m,
                fmt(row.achieved_cost),
            ])
    found = sum(1 for row in rows if row.achieved_m is not None)
    print(f"contractive {found}/{len(rows)}")


def cmd_transfer(args):
    p = load_polynomial(args.poly, args.max_gen)
    cfg = TransferConfig(
        p, args.kind, args.sizes, args.samples, args.seed,
        self_adjoint_mode=args.self_adjoint,
        epsilon=args.eps,
        references=args.references,
        poly_reference=args.poly_reference,
        threads=args.threads,
    )
    probability = args.probability or args.references is not None \
        or args.poly_reference is not None
    report = run_probability_variant(cfg) if probability \
        else run_transfer(cfg)

    with open(args.out, "w", newline="") as handle:
        write_csv(report, handle)
    if args.summary is not None:
        with open(args.summary, "w", newline="") as handle:
            write_summary_csv(report, handle)
    print(f"m {report.m}")
    print(f"cost {fmt(report.cost)}")
    if args.self_adjoint:
        print(f"cost_inflation {fmt(report.cost_inflation)}")
    for summary in report.summaries:
        print(
            f"N {summary.size} direct_max {fmt(summary.direct_max)} "
            f"bound_max {fmt(summary.bound_max)}"
        )


def cmd_sample(args):
    spec = ensemble_from(args)
    arrays = {}
    worst = 0.0
    for index, rep in enumerate(spec.representations()):
        for gen, matrix in sorted(rep.unitaries.items()):
            arrays[f"U{index}_{gen}"] = matrix
            worst = max(worst, unitarity_defect(matrix))
    np.savez(args.out, **arrays)
    print(f"matrices {len(arrays)}")
    print(f"max_unitarity_defect {worst:.3e}")


def cmd_selftest(args):
    return 1 if run_selftest(args.seed, args.threads) else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="-v for progress, -vv for per-round detail",
    )
    common.add_argument(
        "--threads", type=int, default=None,
        help="worker threads (default: all cores); never changes results",
    )

    parser = argparse.ArgumentParser(
        prog="linfact",
        description="Factorization of matrix-valued *-polynomials in free "
        "unitaries, with norm transfer across random matrix ensembles",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, help):
        sub = commands.add_parser(name, help=help, parents=[common])
        sub.set_defaults(handler=handler)
        return sub

    def method_argument(sub):
        sub.add_argument(
            "--method", type=NormMethod,
            choices=list(NormMethod), default=None,
            help="full_svd or power_iteration (default: by size)",
        )

    def max_gen_argument(sub):
        sub.add_argument("--max-gen", type=int, default=MAX_GENERATORS)

    sub = command("factorize", cmd_factorize, "factor a polynomial file")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--single-block", action="store_true")
    sub.add_argument("--equal-sizes", action="store_true")
    sub.add_argument(
        "--absorb", action="store_true",
        help="write the chain P1...Pm of degree-1 factors instead",
    )
    max_gen_argument(sub)

    sub = command("expand", cmd_expand, "multiply a factorization out")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", required=True)

    sub = command("eval", cmd_eval, "norm of one sampled evaluation")
    sub.add_argument("--poly", required=True)
    add_ensemble_arguments(sub)
    sub.add_argument("--sample", type=int, default=0)
    sub.add_argument("--save", metavar="NPY")
    method_argument(sub)
    max_gen_argument(sub)

    sub = command("norm", cmd_norm, "norms over an ensemble, as CSV")
    sub.add_argument("--poly", required=True)
    add_ensemble_arguments(sub, samples=10)
    sub.add_argument("--out")
    method_argument(sub)
    max_gen_argument(sub)

    sub = command("balance", cmd_balance, "balance a factorization")
    sub.add_argument("--in", dest="input", required=True)
    add_ensemble_arguments(sub, samples=2)
    sub.add_argument("--rounds", type=int, default=50)
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.add_argument(
        "--no-search", action="store_true",
        help="only rescale the blocks, no similarity descent",
    )
    sub.add_argument("--out", required=True)
    sub.add_argument("--report", metavar="CSV")

    sub = command("probe-m", cmd_probe_m, "empirical factor counts")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--eps", type=float, required=True)
    sub.add_argument("--count", type=int, default=10)
    sub.add_argument("--max-extra", type=int, default=2)
    add_ensemble_arguments(sub, samples=2)
    sub.add_argument("--out", required=True)

    sub = command("transfer", cmd_transfer, "norm transfer harness")
    sub.add_argument("--poly", required=True)
    sub.add_argument("--kind", default="haar")
    sub.add_argument("--sizes", type=int_list, default=(25, 50, 100, 200))
    sub.add_argument("--samples", type=int, default=20)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--self-adjoint", action="store_true")
    sub.add_argument("--eps", type=float, default=0.05)
    sub.add_argument(
        "--probability", action="store_true",
        help="report exceedance fractions against reference norms",
    )
    sub.add_argument("--references", type=float_list)
    sub.add_argument("--poly-reference", type=float)
    sub.add_argument("--out", required=True)
    sub.add_argument("--summary", metavar="CSV")
    max_gen_argument(sub)

    sub = command("sample", cmd_sample, "save sampled unitaries as .npz")
    add_ensemble_arguments(sub)
    sub.add_argument("--out", required=True)

    sub = command("selftest", cmd_selftest, "run the invariant suite")
    sub.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][
        min(args.verbose, 2)
    ]
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        code = args.handler(args)
    except VerificationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except ConvergenceError as e:
        print(f"no convergence: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
