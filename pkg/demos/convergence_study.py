"""Refinement study across schemes on a smooth and a discontinuous problem.

Runs the grid ladder for each scheme and prints error tables with
observed orders.  The headline behavior: on smooth data every scheme
converges cleanly, while at jumps the node scheme degrades to the
square-root rate and the coupled scheme holds first order.
"""

from __future__ import annotations

from slub.harness import SCHEMES, convergence_table
from slub.problems import get_problem


def print_table(problem_name: str, scheme: str) -> None:
    problem = get_problem(problem_name)
    table = convergence_table(problem, scheme, ms=problem.m_ladder)
    print(f"{problem_name} / {scheme}")
    for line in table.format_text().splitlines():
        print(f"  {line}")
    print()


def main() -> None:
    for problem_name in ("adv-smooth", "adv-jump"):
        for scheme in SCHEMES:
            print_table(problem_name, scheme)
    print("smooth data: all three schemes converge; the interpolation")
    print("update is the accuracy bottleneck, so the coupled rate matches")
    print("the node scheme.  at jumps: the node scheme drops to order 1/2,")
    print("the cell scheme transports the jump exactly (errors at roundoff,")
    print("orders are noise), and the coupled scheme recovers order 1.")


if __name__ == "__main__":
    main()
