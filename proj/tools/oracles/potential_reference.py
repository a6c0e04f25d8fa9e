#!/usr/bin/env python3
"""Reference values for the mode-difference potential jets.

phi_m(r) = gP[m](t, r) - gS[m](t, r) for levels m = 3, 4, 5 together with the
first three radial derivatives.  Evaluated with mpmath at 60 digits so that
the catastrophic cancellation of the leading log/pole terms near r = 0 is
harmless; the frozen values exercise both branches (closed-form and series)
of the double-precision implementation, in particular ratios r/(cs t) down to
1e-6.  Derivatives are taken with mp.diff on the exact closed forms.
"""

import time

import mpmath as mp

from kernel_reference_values import mode_num

OUT = "../../tests/data/potential_reference.h"

MATERIALS = [
    ("2.0", "1.0", "1.5"),
    ("2.75", "1.32", "0.87"),
]
TIMES = ["0.8", "3.7"]
RATIOS = ["0.5", "0.05", "0.01", "0.003", "0.001", "0.0001", "0.000001"]
LEVELS = [2, 3, 4, 5]


def phi(m, t, r, cpv, csv):
    return mode_num(m, t, r, cpv) - mode_num(m, t, r, csv)


def jet(m, t, r, cpv, csv):
    f = lambda x: phi(m, t, x, cpv, csv)
    return (f(r), mp.diff(f, r), mp.diff(f, r, 2), mp.diff(f, r, 3))


def main():
    t0 = time.time()
    mp.mp.dps = 60
    rows = []
    for cp_s, cs_s, rho_s in MATERIALS:
        cpv, csv = mp.mpf(cp_s), mp.mpf(cs_s)
        for t_s in TIMES:
            t = mp.mpf(t_s)
            for q_s in RATIOS:
                r = mp.mpf(q_s) * csv * t
                for m in LEVELS:
                    vals = jet(m, t, r, cpv, csv)
                    rows.append((cp_s, cs_s, rho_s, t_s, r) + vals)
    with open(OUT, "w") as fh:
        fh.write("// Auto-generated reference data; do not edit by hand.\n")
        fh.write("#pragma once\n\nnamespace stbem::testdata {\n\n")
        fh.write("// cp, cs, rho, t, r, level, phi, dphi, ddphi, dddphi\n")
        fh.write("inline constexpr double kPotentialJetValues[][10] = {\n")
        idx = 0
        for cp_s, cs_s, rho_s in MATERIALS:
            cpv, csv = mp.mpf(cp_s), mp.mpf(cs_s)
            for t_s in TIMES:
                t = mp.mpf(t_s)
                for q_s in RATIOS:
                    r = mp.mpf(q_s) * csv * t
                    for m in LEVELS:
                        v = jet(m, t, r, cpv, csv)
                        fh.write("    {%s, %s, %s, %s, %s,\n" % (
                            cp_s, cs_s, rho_s, t_s, mp.nstr(r, 17)))
                        fh.write("     %d, %s, %s, %s, %s},\n" % (
                            m, mp.nstr(v[0], 17), mp.nstr(v[1], 17),
                            mp.nstr(v[2], 17), mp.nstr(v[3], 17)))
                        idx += 1
        fh.write("};\n\n}  // namespace stbem::testdata\n")
    print(f"wrote {OUT} ({idx} rows) in {time.time() - t0:.1f}s", flush=True)


if __name__ == "__main__":
    main()
