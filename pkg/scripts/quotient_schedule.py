"""Common cover degree for a list of simple targets, verified at two members
of the arithmetic progression.

    python3 scripts/quotient_schedule.py --word "x3 x0^-1" --targets A5 A6
"""

import argparse

from cycpres.covers import lift_schedule_at, simple_quotient_schedule, verify_cover_surjection
from cycpres.permgrp import group_from_name
from cycpres.present import CyclicWordFamily, free_by_cyclic_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--word", default="x3 x0^-1")
    ap.add_argument("--targets", nargs="+", default=["A5", "A6"])
    ap.add_argument("--members", type=int, default=3, help="progression members to verify")
    args = ap.parse_args()
    fam = CyclicWordFamily.parse(args.word).normalized()
    fbc = free_by_cyclic_check(fam)
    if fbc is None:
        raise SystemExit(f"{args.word} is not free-by-cyclic")
    sched = simple_quotient_schedule(fam, fbc, [group_from_name(t) for t in args.targets])
    print(f"fiber rank {fbc.rank}; periods {[cs.period for cs in sched.surjections]}; step {sched.step}")
    for n in sched.progression(args.members):
        ok = all(verify_cover_surjection(cs, fbc) for cs in lift_schedule_at(sched, fam, fbc, n))
        print(f"  n = {n:<4} surjections onto {', '.join(args.targets)} verified: {ok}")


if __name__ == "__main__":
    main()
