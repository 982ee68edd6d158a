"""Compare the exact kernel transform, the midpoint lattice and the RK4 oracle.

Prints the lattice error against the exact kernel as the oversampling grows,
and the unitarity residual of the exact kernel against the number of bins.
"""

from __future__ import annotations

import numpy as np

from resonator_modes import csfg
from resonator_modes.grid import make_grid
from resonator_modes.oracle import ode_oracle
from resonator_modes.pump import default_width, hermite_gauss_pump


def main() -> None:
    grid = make_grid(1.0, 32)
    pump = hermite_gauss_pump(grid, 2, default_width(grid))
    for iota in (0.0, 0.3):
        p = csfg.matched_params(grid, 0.05, pump, iota)
        exact = csfg.kernel_transfer(p)
        print(f"iota/gamma={iota}: kernel vs oracle {csfg.relative_deviation(exact, ode_oracle(p)):.2e}")
        for m in (1, 2, 4, 8, 16):
            lat = csfg.kernel_transfer_lattice(p, oversample=m)
            print(f"  lattice oversample={m:2d}: deviation {csfg.relative_deviation(lat, exact):.2e}")
    print("unitarity residual of the exact kernel (gamma/dw = 0.1, 0.05):")
    for n in (32, 64, 100, 200, 400):
        g = make_grid(1.0, n)
        pump = hermite_gauss_pump(g, 2, default_width(g))
        res = [csfg.kernel_transfer(csfg.matched_params(g, r, pump), check=False).unitarity_residual()
               for r in (0.1, 0.05)]
        print(f"  N={n:3d}: " + "  ".join(f"{v:.2e}" for v in res))


if __name__ == "__main__":
    np.set_printoptions(precision=3)
    main()
