"""Side-by-side transport of a box profile.

Runs the node scheme, cell scheme, and coupled scheme on the same
moving-box problem and prints their errors next to a text rendering of
the final profiles.  The point of the exercise: the node scheme smears
the two jumps, the cell scheme keeps them sharp, and the coupled scheme
matches the cell scheme at the jumps while staying a point-value method
everywhere else.
"""

from __future__ import annotations

import numpy as np

from slub.coupled import project_to_nodes
from slub.harness import run_scheme
from slub.problems import get_problem


def render(values: np.ndarray, width: int = 72, lo: float = -0.2, hi: float = 1.2) -> str:
    """One-line block rendering of a profile."""
    blocks = " .:-=+*#%@"
    idx = np.clip((values - lo) / (hi - lo) * (len(blocks) - 1), 0, len(blocks) - 1)
    cols = np.linspace(0, values.size - 1, width).round().astype(int)
    return "".join(blocks[int(i)] for i in idx[cols])


def main() -> None:
    problem = get_problem("adv-jump")
    m = 79
    print(f"box profile advected with constant velocity, m={m}, T={problem.T}")
    print()

    exact_drawn = False
    for scheme in ("sl", "ub", "coupled"):
        res = run_scheme(problem, scheme, m)
        values = res.values if scheme != "ub" else project_to_nodes(res.values)
        if not exact_drawn:
            exact = problem.exact(res.grid.nodes, res.t_final)
            print(f"{'exact':>8}  |{render(exact)}|")
            exact_drawn = True
        e = res.errors
        print(f"{scheme:>8}  |{render(values)}|  l1={e.l1:.3e}  linf_reg={e.linf_reg:.3e}")

    print()
    print("the node scheme decays at the square-root rate at jumps; the")
    print("cell scheme transports the box exactly; the coupled scheme is")
    print("first order with errors confined to one cell around each jump.")


if __name__ == "__main__":
    main()
