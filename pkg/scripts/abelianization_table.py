"""Abelianizations of G_n(v) over a range of n, next to |Res(f_v, t^n - 1)|.

    python3 scripts/abelianization_table.py --word "x3 x0^-1" --n 4..12
"""

import argparse

from cycpres.abelian import abelianization
from cycpres.intpoly import associated_polynomial, classify_cyclotomic_type, resultant_with_cyclic
from cycpres.present import CyclicWordFamily, cyclic_presentation


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--word", default="x3 x0^-1")
    ap.add_argument("--n", default="4..12", help="range lo..hi")
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.n.split(".."))
    fam = CyclicWordFamily.parse(args.word)
    f = associated_polynomial(fam)
    print(f"v = {args.word}   f_v = {f}   ({classify_cyclotomic_type(f).kind})")
    print(f"{'n':>3}  {'abelianization':<28} |Res|")
    for n in range(lo, hi + 1):
        st = abelianization(cyclic_presentation(fam, n))
        print(f"{n:>3}  {str(st):<28} {abs(resultant_with_cyclic(f, n))}")


if __name__ == "__main__":
    main()
