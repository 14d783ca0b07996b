#!/usr/bin/env python3
"""Search for a twist giving both stored curves root number -1.

Reproduces the simultaneous-parity computation: scans squarefree d until both
curves split multiplicatively at every bad prime of the other and the
quadratic root numbers come out -1, then prints the per-prime reduction data
behind the verdict.
"""

import argparse

from densdeg import fixtures, rootnumber


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e1", default="3872.f4")
    ap.add_argument("--e2", default="16928.c1")
    ap.add_argument("--bound", type=int, default=10_000)
    args = ap.parse_args()

    e1 = fixtures.curve_model(args.e1)
    e2 = fixtures.curve_model(args.e2)
    for e, label in ((e1, args.e1), (e2, args.e2)):
        print("%s: bad primes %s" % (label, rootnumber.bad_primes(e)))
        for p in rootnumber.bad_primes(e):
            print("    p=%-3d %s" % (p, rootnumber.reduction_type(e, p).kind))

    d = rootnumber.find_parity_twist(e1, e2, bound=args.bound)
    if d is None:
        print("no twist below %d" % args.bound)
        return
    print("first twist with odd parity for both: d = %d" % d)
    for e, label in ((e1, args.e1), (e2, args.e2)):
        w = rootnumber.splitting_quadratic_root_number(e, d)
        print("    %s over the d=%d quadratic field: root number %+d"
              % (label, d, w))


if __name__ == "__main__":
    main()
