#!/usr/bin/env python3
"""BGK relaxation from two-Maxwellian mixtures, with and without matched energy.

Writes one trace CSV per run and prints the final distance next to the
floor predicted by the nearest-Maxwellian projection.
"""

import argparse
import math
from pathlib import Path

from boltzdist import MaxwellianParams, MomentClass, make_velocity_grid, moments, project
from boltzdist.collision import relax
from boltzdist.dist import DistributionField, local_maxwellian
from boltzdist.grid import make_domain


def get_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", type=Path, default=Path("relax_out"))
    parser.add_argument("--steps", type=int, default=80)
    parser.add_argument("--dt", type=float, default=0.25)
    parser.add_argument("--tau", type=float, default=1.0)
    return parser.parse_args()


def main():
    args = get_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    M = MaxwellianParams.at_rest(1.0, 1.0, 2)
    g = make_velocity_grid(2, 8 * math.sqrt(2.0), 64)
    for T_each in (0.5, 0.75, 1.0, 1.5):
        row = 0.5 * local_maxwellian(1.0, (1.0, 0.0), T_each, g) + 0.5 * local_maxwellian(1.0, (-1.0, 0.0), T_each, g)
        f0 = DistributionField(g, make_domain(1), row)
        tr = relax(f0, M, args.tau, args.dt, args.steps)
        tr.write_csv(args.outdir / f"trace_T{T_each:g}.csv")
        m = moments(f0)
        floor = project(MomentClass(m.rho_total, m.E_total, tuple(m.U)), M.T).dist_min
        print(f"T_each={T_each:<5g} E={m.E_total:.4f}  dist0={tr.dist_values[0]:.6f}  "
              f"dist_end={tr.dist_values[-1]:.6e}  floor={floor:.6e}")


if __name__ == "__main__":
    main()
