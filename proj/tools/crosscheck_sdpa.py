#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) file with cvxpy as an independent check.

Reads the problem  min c^T y  s.t.  sum_i y_i F_i - F_0 PSD  (blocks with a
negative size are diagonal, i.e. nonnegative vectors) and prints the optimal
value, which equals the max-form primal value <F_0, X> at optimality. Compare
it against the raw value our solver reports for the same file.

    spc export --a a.json --b b.json --kind moment --order 2 --out m.dat-s
    python3 tools/crosscheck_sdpa.py m.dat-s [--expect VALUE] [--tol 1e-5]

Exit status is 1 when --expect is given and the values differ by more than
tol * (1 + |VALUE|), 2 when the solver does not report an optimum.
"""

import argparse
import re
import sys

import cvxpy as cp
import numpy as np


def parse(path):
    tokens = []
    with open(path) as f:
        for line in f:
            if line.startswith(("*", '"')):
                continue
            tokens.extend(t for t in re.split(r"[\s,(){}]+", line) if t)
    pos = 0

    def take(n):
        nonlocal pos
        out = tokens[pos : pos + n]
        if len(out) < n:
            raise ValueError("truncated SDPA file")
        pos += n
        return out

    m = int(take(1)[0])
    nblocks = int(take(1)[0])
    sizes = [int(float(s)) for s in take(nblocks)]
    c = np.array([float(s) for s in take(m)])
    mats = [[np.zeros((abs(s), abs(s))) for s in sizes] for _ in range(m + 1)]
    while pos < len(tokens):
        mat, blk, i, j = (int(float(t)) for t in take(4))
        v = float(take(1)[0])
        a = mats[mat][blk - 1]
        a[i - 1, j - 1] = v
        a[j - 1, i - 1] = v
    return sizes, c, mats


def solve(path):
    sizes, c, mats = parse(path)
    y = cp.Variable(len(c))
    cons = []
    for b, size in enumerate(sizes):
        expr = -mats[0][b]
        for i in range(len(c)):
            if np.any(mats[i + 1][b]):
                expr = expr + y[i] * mats[i + 1][b]
        if size > 0:
            cons.append(0.5 * (expr + expr.T) >> 0)
        else:
            cons.append(cp.diag(expr) >= 0)
    prob = cp.Problem(cp.Minimize(c @ y), cons)
    prob.solve(solver=cp.CLARABEL if "CLARABEL" in cp.installed_solvers() else cp.SCS)
    return prob.status, prob.value


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("file")
    ap.add_argument("--expect", type=float)
    ap.add_argument("--tol", type=float, default=1e-5)
    args = ap.parse_args()
    status, value = solve(args.file)
    print(f"{args.file}: status {status} value {value:.10g}")
    if status not in ("optimal", "optimal_inaccurate"):
        return 2
    if args.expect is not None:
        diff = abs(value - args.expect)
        ok = diff <= args.tol * (1.0 + abs(args.expect))
        print(f"expected {args.expect:.10g}, diff {diff:.2e}: {'ok' if ok else 'MISMATCH'}")
        return 0 if ok else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
