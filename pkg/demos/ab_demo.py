"""Shortest disjoint A-B paths with a prescribed number crossing between the sets.

    python3 demos/ab_demo.py [seed]
"""

import sys

import numpy as np

from twoface.oracle import random_plain_graph, shortest_disjoint_paths
from twoface.solver import ab_pairings, solve_ab


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    g = random_plain_graph(np.random.default_rng(seed), 12, 20, 3, 3)
    print(f"A = {g.A}, B = {g.B}")
    for q in (1, 3):
        rep = solve_ab(g, q, seed=seed)
        brute = min((shortest_disjoint_paths(g, p)[0] for p in ab_pairings(g, q)), default=float("inf"))
        print(f"q={q}: solver {rep.status} weight={rep.weight}, brute force {brute}")
        for p in rep.paths or []:
            print("   ", " - ".join(map(str, p)))


if __name__ == "__main__":
    main()
