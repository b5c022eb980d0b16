"""Robustness of the multigrid solver to the fracture permeability.

A single vertical fracture crosses a 2:1 slab of unit-permeability rock;
flow is driven left to right by a unit pressure drop, and the fracture
carries its own pressure drop between its bottom (p = 0) and top (p = 1)
tips.  The fracture permeability K_f sweeps twelve orders of magnitude,
turning the fracture from a strong barrier into a strong conduit, while
the W(2,2) cycle count to a 1e-10 residual reduction barely moves.

Run:  python3 demos/one_fracture_permeability_sweep.py
"""

import dataclasses

from fracmg import preset, solve_problem

GRIDS = [(32, 16), (64, 32), (128, 64), (256, 128)]
PERMEABILITIES = [1e-6, 1e-4, 1e-2, 1e2, 1e4, 1e6]


def main():
    print(__doc__)
    header = "      K_f | " + " | ".join(f"{nx}x{ny}" for nx, ny in GRIDS)
    print(header)
    print("-" * len(header))
    for kf in PERMEABILITIES:
        counts = []
        for grid in GRIDS:
            cfg = preset("one_fracture_case1", kf=kf)
            cfg = dataclasses.replace(cfg, grid=grid, levels=None)
            _, report, _ = solve_problem(cfg.hierarchy(), cfg.cycle)
            counts.append(report.iterations)
        row = " | ".join(f"{c:5d}" for c in counts)
        print(f"  {kf:7.0e} | {row}")
    print()
    print("Iteration counts are flat in both the mesh size and K_f:")
    print("the coarse-grid correction and the three-stage block smoother")
    print("absorb the permeability contrast instead of the Krylov-free")
    print("outer iteration.")


if __name__ == "__main__":
    main()
