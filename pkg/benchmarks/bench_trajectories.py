"""Benchmark the compiled trajectory kernel against the pure-numpy fallback.

Both backends consume the same pregenerated uniforms, so outputs are
bit-identical and only the sampling loop speed differs.

Usage: python benchmarks/bench_trajectories.py [--d 8] [--rounds 16]
       [--trajectories 1000000] [--seed 0] [--repeats 3]
"""
import argparse
import time

import numpy as np

from qsteer import OrthonormalBasis, Protocol, exact_success, fourier_basis, maximally_mixed, trajectory_model
from qsteer.mc import available_backends


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=8)
    parser.add_argument("--rounds", type=int, default=16)
    parser.add_argument("--trajectories", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    ref = OrthonormalBasis.computational(args.d)
    proto = Protocol(ref, fourier_basis(ref), (0,), args.rounds)
    rho = maximally_mixed(args.d)
    model = trajectory_model(rho, proto)
    rng = np.random.default_rng(args.seed)
    uniforms = rng.random((args.trajectories, 2 * args.rounds + 1))

    print(f"d={args.d} rounds={args.rounds} trajectories={args.trajectories:,} seed={args.seed}")
    print(f"exact success probability: {exact_success(rho, proto):.6f}")

    backends = available_backends()
    timings = {}
    outputs = {}
    for name, kernel in sorted(backends.items()):
        best = float("inf")
        for _ in range(args.repeats):
            start = time.perf_counter()
            outputs[name] = kernel(
                uniforms,
                model.init_cdf,
                model.phi_to_theta_cdf,
                model.theta_to_phi_cdf,
                model.is_target,
                proto.rounds,
            )
            best = min(best, time.perf_counter() - start)
        timings[name] = best
        rate = args.trajectories / best
        success_rate = outputs[name][0].mean()
        print(f"{name:>8}: {best:8.3f} s  ({rate:12,.0f} traj/s)  success rate {success_rate:.6f}")

    if len(outputs) == 2:
        (a_succ, a_round), (b_succ, b_round) = outputs.values()
        identical = np.array_equal(a_succ, b_succ) and np.array_equal(a_round, b_round)
        print(f"outputs bit-identical: {identical}")
        slow, fast = max(timings.values()), min(timings.values())
        print(f"speedup: {slow / fast:.1f}x")
    else:
        print("only one backend available; build the extension for a comparison")


if __name__ == "__main__":
    main()
