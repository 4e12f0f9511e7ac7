"""Exhaustive hom scan of H_n(w) for the perfect family x1 x0 x1^-1 x0^-2.

Every homomorphism found kills x, so all images are cyclic.

    python3 scripts/bg_quotient_scan.py --n 4 5 6 --targets A5 S4 D4 C6
"""

import argparse
import time

from cycpres.abelian import abelianization
from cycpres.homsearch import scan_quotients
from cycpres.permgrp import group_from_name
from cycpres.present import CyclicWordFamily, cyclic_presentation, h_n_presentation, v_to_w


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--word", default="x1 x0 x1^-1 x0^-2")
    ap.add_argument("--n", type=int, nargs="+", default=[4, 5, 6])
    ap.add_argument("--targets", nargs="+", default=["A5", "S4", "D4", "C6"])
    args = ap.parse_args()
    fam = CyclicWordFamily.parse(args.word)
    w = v_to_w(fam)
    for n in args.n:
        ab = abelianization(cyclic_presentation(fam, n))
        print(f"n = {n}: G_n^ab = {ab}")
        for name in args.targets:
            t0 = time.perf_counter()
            rep = scan_quotients(h_n_presentation(w, n), group_from_name(name))
            dt = time.perf_counter() - t0
            print(f"  {name:<4} homs={rep.hom_count:<5} onto={rep.surjection_count:<3} "
                  f"cyclic_images={rep.all_images_cyclic} always_trivial={list(rep.generators_always_trivial)} "
                  f"[{dt:.2f}s]")


if __name__ == "__main__":
    main()
