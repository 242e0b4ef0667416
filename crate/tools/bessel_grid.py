"""Reference J_nu(z), Y_nu(z) on nu in {0, 0.5, ..., 50}, z = 0.1*1.2^n <= 200,
evaluated with mpmath at 40 digits. Writes crates/core/tests/data/bessel_grid.csv.

    python3 tools/bessel_grid.py [out.csv]
"""

import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parents[1] / "crates/core/tests/data/bessel_grid.csv"


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else OUT
    zs = []
    n = 0
    while 0.1 * 1.2**n <= 200:
        zs.append(0.1 * 1.2**n)
        n += 1
    rows = ["# J_nu(z), Y_nu(z) at 40 significant digits, rounded to nearest double", "nu,z,j,y"]
    for i in range(101):
        nu = 0.5 * i
        for z in zs:
            j = mp.besselj(mp.mpf(nu), mp.mpf(z))
            y = mp.bessely(mp.mpf(nu), mp.mpf(z))
            rows.append(f"{nu!r},{z!r},{float(j)!r},{float(y)!r}")
    out.write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
