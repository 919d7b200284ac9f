"""Compare the numba and pure-Python backends of the hot kernels.

Each backend runs in its own interpreter because the switch is read at import
time. Numba timings exclude the first (compiling) call.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("search", "forest", "canon")


def _workload(name: str, scale: int) -> dict:
    import numpy as np

    from mult123 import backend
    from mult123.canon import canonical_code
    from mult123.corpus import connected_graphs, random_connected_gnp, random_subcubic
    from mult123.oracle import chi_m, forest_two_labelling

    if name == "search":
        rng = np.random.default_rng(7)
        graphs = [random_connected_gnp(14 + 4 * scale, 0.5, rng) for _ in range(8)]
        run = lambda: [chi_m(g).value for g in graphs]
    elif name == "forest":
        rng = np.random.default_rng(11)
        graphs = [random_subcubic(200 * scale, rng) for _ in range(5)]
        run = lambda: [forest_two_labelling(g).found for g in graphs]
    else:
        graphs = connected_graphs(5 + min(scale, 2))
        run = lambda: [canonical_code(g.adjacency_matrix()) for g in graphs]

    run()  # warm-up, triggers compilation when numba is on
    t0 = time.perf_counter()
    run()
    return {"workload": name, "backend": backend(), "graphs": len(graphs),
            "seconds": time.perf_counter() - t0}


def _spawn(name: str, scale: int, disable: bool) -> dict:
    env = dict(os.environ)
    if disable:
        env["MULT123_DISABLE_NUMBA"] = "1"
    else:
        env.pop("MULT123_DISABLE_NUMBA", None)
    out = subprocess.run([sys.executable, __file__, "--child", name, "--scale", str(scale)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workload", choices=WORKLOADS + ("all",), default="all")
    parser.add_argument("--scale", type=int, default=1, help="grow the search workload")
    parser.add_argument("--child", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        print(json.dumps(_workload(args.child, args.scale)))
        return

    names = WORKLOADS if args.workload == "all" else (args.workload,)
    print(f"{'workload':<10}{'graphs':>8}{'numba s':>12}{'python s':>12}{'speedup':>10}")
    for name in names:
        fast = _spawn(name, args.scale, disable=False)
        slow = _spawn(name, args.scale, disable=True)
        ratio = slow["seconds"] / max(fast["seconds"], 1e-9)
        print(f"{name:<10}{fast['graphs']:>8}{fast['seconds']:>12.4f}{slow['seconds']:>12.4f}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
