"""Solve a random two-face instance and compare with brute force.

    python3 demos/two_face_demo.py [seed] [--save instance.json]
"""

import argparse
import json

import numpy as np

from twoface.graph_model import dump_instance
from twoface.oracle import random_two_face, shortest_disjoint_paths
from twoface.solver import solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("seed", nargs="?", type=int, default=0)
    ap.add_argument("--k1", type=int, default=3)
    ap.add_argument("--k2", type=int, default=1)
    ap.add_argument("--save")
    args = ap.parse_args()

    g, layout = random_two_face(np.random.default_rng(args.seed), args.k1, args.k2)
    if args.save:
        with open(args.save, "w") as fh:
            json.dump(dump_instance(g, layout), fh, indent=1)
    print(f"{g.n} vertices, {len(g.edges)} edges, pairs {layout.pairs}")

    rep = solve(g, layout, seed=args.seed)
    opt, optima = shortest_disjoint_paths(g, layout.pairs)
    print(f"solver: {rep.status} weight={rep.weight} trials={rep.trials}")
    for p in rep.paths or []:
        print("   ", " - ".join(map(str, p)))
    print(f"brute force: weight={opt} with {len(optima)} optimal systems")


if __name__ == "__main__":
    main()
