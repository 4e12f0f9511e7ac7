"""Residual-finiteness certificate for a * theta with theta(a) = b, theta(b) = a^2,
the Grigorchuk mod-2 obstruction, and a census of pullback orbits.

    python3 scripts/rf_demo.py
"""

import json
from collections import Counter

from cycpres.rescert import (
    abelianized_matrix,
    enumerate_subgroups,
    mod_p_kernel,
    pullback_orbit,
    rf_certificate,
    verify_certificate,
)
from cycpres.words import parse_endomorphism, parse_word


def main():
    theta, names = parse_endomorphism("a->b; b->a^2")
    full = names + ("t",)
    witnesses = [parse_word(w, full) for w in ("t", "a", "t a t^-1 a^-1", "t^-3 a t^3 b^-1")]
    cert = rf_certificate(theta, witnesses, names)
    print(json.dumps(cert.to_json(), indent=2))
    print("independent re-check problems:", verify_certificate(cert))

    grig, gnames = parse_endomorphism("a->a c a; c->d c; d->c")
    M, det = abelianized_matrix(grig)
    print(f"\nGrigorchuk substitution: det = {det}; kernel mod 2 = {mod_p_kernel(M, 2)} over {gnames}")

    census = Counter()
    for H in enumerate_subgroups(2, 4):
        orb = pullback_orbit(theta, H)
        census[(H.index, orb.preperiod, orb.period)] += 1
    print("\n(index, preperiod, period) -> count over subgroups of index <= 4")
    for key in sorted(census):
        print(f"  {key}: {census[key]}")


if __name__ == "__main__":
    main()
