"""Re-run the benchmark fleet across many seeds to gauge stability.

Prints per-seed quality plus a min/median/max summary, a quick check that
reconstruction quality is a property of the pipeline rather than of one
lucky fleet.

Usage: python3 scripts/scan_seeds.py [--seeds 20] [--first 0]
"""

import argparse
from statistics import median

from trackstitch.cbtr import run_cbtr
from trackstitch.metrics import correct_neighbor_rate, jumps_merges
from trackstitch.synth import generate_fleet, scenario_s1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=20,
                        help="how many consecutive seeds to run")
    parser.add_argument("--first", type=int, default=0, help="first seed")
    args = parser.parse_args()

    rates, errors = [], []
    print("seed,n,rate,jumps,merges,clusters")
    for seed in range(args.first, args.first + args.seeds):
        ds = generate_fleet(scenario_s1(seed))
        result = run_cbtr(ds)
        rate = correct_neighbor_rate(result.links.targets, ds.vids)
        jumps, merges = jumps_merges(result.assignment, ds.vids)
        rates.append(rate)
        errors.append(jumps + merges)
        print(f"{seed},{len(ds)},{rate:.6f},{jumps},{merges},"
              f"{result.assignment.n_clusters}")
    print(f"# rate min/median/max = {min(rates):.6f}/"
          f"{median(rates):.6f}/{max(rates):.6f}")
    print(f"# jumps+merges min/median/max = {min(errors)}/"
          f"{median(errors)}/{max(errors)}")


if __name__ == "__main__":
    main()
