"""Command-line entry point.

Exit codes: 0 converged, 1 input error, 2 an iteration hit its limit.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .bicm import decode
from .capacity import SolverConfig, solve_capacity
from .channel import BernoulliGaussianParams, discretize_bernoulli_gaussian
from .exceptions import ProxPointError
from .io import read_channel, read_instance, write_capacity_trace, write_channel, write_decoder_trace
from .toy import build_toy_instance, random_toy_instance

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2


def cmd_capacity(args):
    ch = read_channel(args.channel)
    cfg = SolverConfig(algorithm=args.algorithm, tol=args.tol, max_iter=args.max_iter, fixed_beta=args.fixed_beta)
    res = solve_capacity(ch, cfg)
    if args.bits:
        print(f"capacity: {res.capacity_bits:.12f} bits ({res.capacity_nats:.12f} nats)")
    else:
        print(f"capacity: {res.capacity_nats:.12f} nats ({res.capacity_bits:.12f} bits)")
    print(f"algorithm: {cfg.algorithm.value}")
    print(f"iterations: {res.iterations}")
    print(f"stop: {res.stop_reason}")
    print("optimal input: " + " ".join(f"{v:.10f}" for v in res.optimal_input))
    if args.trace:
        write_capacity_trace(args.trace, res.trace)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_channel_gen(args):
    params = BernoulliGaussianParams(args.p, args.sigma_b, args.sigma_g, args.inputs, args.outputs)
    ch = discretize_bernoulli_gaussian(params)
    comment = (
        f"Bernoulli-Gaussian channel p={args.p} sigma_b={args.sigma_b} sigma_g={args.sigma_g}\n"
        f"inputs evenly spaced on [-1, 1]; one row per input"
    )
    write_channel(args.out, ch, comment)
    print(f"wrote {ch.input_size}x{ch.output_size} channel to {args.out}")
    return EXIT_OK


def _trace_path(base, mode, both):
    if not both:
        return base
    base = Path(base)
    return base.with_name(f"{base.stem}.{mode}{base.suffix or '.csv'}")


def cmd_bicm_demo(args):
    if args.instance:
        fields = read_instance(args.instance)
        fields.setdefault("noise_std", args.noise_std)
        fields.setdefault("seed", args.seed)
        instance = build_toy_instance(**fields)
    else:
        instance = random_toy_instance(args.n_bits, args.noise_std, args.seed)

    modes = ["classic", "proximal"] if args.mode == "both" else [args.mode]
    results = {}
    for mode in modes:
        res = decode(
            instance.theta_m,
            instance.theta_c,
            mode=mode,
            max_iter=args.max_iter,
            conv_tol=args.conv_tol,
            mu_override=args.mu_override if mode == "proximal" else None,
        )
        results[mode] = res
        msg = instance.message_for(res.decisions)
        print(
            f"{mode}: iterations={res.iterations} converged={res.converged} "
            f"decisions={''.join(map(str, res.decisions))} "
            f"message={'-' if msg is None else ''.join(map(str, msg))}"
        )
        if args.trace:
            write_decoder_trace(_trace_path(args.trace, mode, len(modes) > 1), res.cost_trace)

    print(f"sent message={''.join(map(str, instance.message))} word={''.join(map(str, instance.transmitted))}")
    if len(results) == 2:
        c, p = results["classic"], results["proximal"]
        gap = max(np.max(np.abs(c.lambda1 - p.lambda1)), np.max(np.abs(c.lambda2 - p.lambda2)))
        agree = np.array_equal(c.decisions, p.decisions) and gap <= 1e-6
        print(f"fixed points agree: {agree} (max llr gap {gap:.3e})")
    return EXIT_OK if all(r.converged for r in results.values()) else EXIT_NOT_CONVERGED


def _positive_float(text):
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="proxpoint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="capacity of a channel file")
    p.add_argument("--channel", required=True)
    p.add_argument("--algorithm", choices=["classic", "matz", "proximal"], default="classic")
    p.add_argument("--tol", type=_positive_float, default=1e-11)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--fixed-beta", type=_positive_float, default=0.5, help="step weight for --algorithm matz")
    p.add_argument("--trace", help="write the per-iteration trace CSV here")
    p.add_argument("--bits", action="store_true", help="report bits first")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("channel-gen", help="discretized Bernoulli-Gaussian channel file")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--sigma-b", type=float, required=True)
    p.add_argument("--sigma-g", type=float, required=True)
    p.add_argument("--inputs", type=int, default=10)
    p.add_argument("--outputs", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_channel_gen)

    p = sub.add_parser("bicm-demo", help="classic vs proximal BICM-ID on a toy instance")
    p.add_argument("--n-bits", type=int, default=4)
    p.add_argument("--noise-std", type=_positive_float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["classic", "proximal", "both"], default="both")
    p.add_argument("--mu-override", type=float)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--conv-tol", type=_positive_float, default=1e-10)
    p.add_argument("--instance", help="instance description file (overrides --n-bits)")
    p.add_argument("--trace", help="decoder trace CSV; with --mode both, .classic/.proximal are inserted")
    p.set_defaults(func=cmd_bicm_demo)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProxPointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
