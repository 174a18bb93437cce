"""Table of the extremal family: connectivity, largest regular subdigraph, bounds."""

import argparse
import math

from tourney.extremal import verify_extremal_claims


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-ell", type=int, default=6)
    ap.add_argument("--ham-limit", type=int, default=12, help="largest n for exhaustive Hamilton packing")
    args = ap.parse_args(argv)

    header = f"{'m':>3} {'ell':>4} {'n':>4} {'kappa':>6} {'max_r':>6} {'sqrt(4l)':>9} {'ham':>4}  ok"
    print(header)
    for ell in range(1, args.max_ell + 1):
        m = 2 * ell + 3
        rep = verify_extremal_claims(m, ell, ham_limit=args.ham_limit)
        ham = "-" if rep["ham_packing"] is None else rep["ham_packing"]
        ok = rep["kappa_lower_ok"] and rep["claim2_ok"] is not False and rep["ham_upper_ok"] is not False
        print(f"{m:>3} {ell:>4} {rep['n']:>4} {rep['kappa']:>6} {rep['max_r']:>6} "
              f"{math.sqrt(4 * ell):>9.3f} {ham!s:>4}  {ok}")


if __name__ == "__main__":
    main()
