"""Erosion of a smooth bump and the birth of a kink.

Evolves v_t + |v_x| = 0 from a smooth bump.  The profile is eaten from
both sides at unit speed, so its two halves march toward the center and
meet in a kink at x = 0.  Nothing is singular at t = 0; the switching
indicator has to notice the kink as it forms.  This demo prints profile
snapshots together with the indicator strip, then the error comparison
against the pure node scheme.
"""

from __future__ import annotations

import numpy as np

from slub.diagnostics import error_norms
from slub.harness import run_scheme
from slub.problems import get_problem

BLOCKS = " .:-=+*#%@"


def render(values: np.ndarray, lo: float = -0.05, hi: float = 1.05) -> str:
    t = np.clip((values - lo) / (hi - lo), 0.0, 1.0)
    idx = np.minimum((t * len(BLOCKS)).astype(int), len(BLOCKS) - 1)
    return "".join(BLOCKS[i] for i in idx)


def main() -> None:
    problem = get_problem("hj-abs")
    m = 159
    stamps = (0, 8, 16, 24, 34)
    res = run_scheme(problem, "coupled", m, snapshot_steps=stamps)
    x = res.x
    print(f"bump eroded by v_t + |v_x| = 0, m={m}, dt={res.dt:.4f}, "
          f"{res.n_steps} steps")
    print()
    for k in stamps:
        v = res.snapshots[k]
        sigma = res.sigma_history[k]
        flagged = int((sigma == 0).sum())
        print(f"t={k * res.dt:5.3f}  |{render(v[::2])}|  flagged nodes: {flagged}")
    print()

    first_flag = next(
        k for k in range(res.n_steps + 1) if (res.sigma_history[k] == 0).any()
    )
    j_center = int(np.argmin(np.abs(x)))
    print(f"the indicator first fires at step {first_flag} "
          f"(t={first_flag * res.dt:.3f}), before the kink is fully formed;")
    print(f"from step 20 on the center node x={x[j_center]:+.3f} stays flagged.")
    print()

    exact = problem.exact(x, res.t_final)
    corner = float(problem.ic(res.t_final))
    ref_sl = run_scheme(problem, "sl", m)
    print(f"true corner height at t={res.t_final}: ic({res.t_final}) = {corner:.6f}")
    for label, vals in (("sl", ref_sl.values), ("coupled", res.values)):
        rep = error_norms(vals, exact, res.grid.dx, x=x,
                          singular_points=(0.0,))
        peak = float(vals.max())
        print(f"{label:>8s}  l1={rep.l1:.3e}  "
              f"linf away from kink={rep.linf_reg:.3e}  "
              f"peak={peak:.4f} (off by {abs(peak - corner):.1e})")
    print()
    print("both schemes agree away from the kink.  at the kink the coupled")
    print("run hands the center cells to the anti-dissipative update, which")
    print("holds the corner at its true height while the node scheme erodes")
    print("it; the price is that the held peak sits at the nearest node, a")
    print("half cell off the corner.")


if __name__ == "__main__":
    main()
