"""Compare the solver with the cut oracle on many seeded random networks.

Wider than the test corpus: more layers, more levels, larger fields.  Runs
the solver in debug mode so every commit and rollback is self-checked, and
prints any disagreeing seed together with its generator parameters.
"""

import argparse
import random
import time

from adtcap.builder import GenParams, random_network
from adtcap.oracle import brute_force_capacity, verify_paths
from adtcap.solver import SolverConfig, capacity


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-layers", type=int, default=6)
    ap.add_argument("--primes", default="2,3,5,7")
    args = ap.parse_args(argv)

    primes = [int(p) for p in args.primes.split(",")]
    rng = random.Random(args.seed)
    bad = 0
    top = 0
    t0 = time.perf_counter()
    for _ in range(args.count):
        gp = GenParams(
            layers=rng.randint(2, args.max_layers),
            max_nodes_per_layer=rng.randint(1, 4),
            max_levels_per_node=rng.randint(1, 5),
            edge_density=rng.choice([0.2, 0.4, 0.5, 0.7, 0.9]),
            p=rng.choice(primes),
            seed=rng.getrandbits(32),
        )
        net = random_network(gp)
        if len(net.nodes) - 2 > 16:
            continue
        res = capacity(net, SolverConfig(debug=True))
        want = brute_force_capacity(net).capacity
        top = max(top, want)
        problems = verify_paths(net, res.paths.paths)
        if res.capacity != want or problems:
            bad += 1
            print(f"MISMATCH solver={res.capacity} oracle={want} {gp} {problems[:1]}")
    print(f"{args.count} networks, {bad} mismatches, max capacity {top}, {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
