#!/usr/bin/env python3
"""External LP solver for ENPLAN_SOLVER: solves an MPS file with scipy's HiGHS.

Usage, as a command template:
    ENPLAN_SOLVER="python3 tools/mps_scipy_solve.py {mps} {solution}"
"""

import argparse
import csv
import math
import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

INF = 1e30


def read_mps(path):
    rows = {}  # name -> sense
    row_order = []
    obj_row = None
    cols = {}
    col_order = []
    coeffs = []  # (row, col, value)
    cost = {}
    rhs = {}
    lower = {}
    upper = {}
    offset = 0.0
    section = None
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                if section == "RANGES":
                    raise SystemExit("RANGES are not supported")
                continue
            tok = line.split()
            if section == "ROWS":
                sense, name = tok
                if sense == "N":
                    if obj_row is None:
                        obj_row = name
                    continue
                rows[name] = sense
                row_order.append(name)
            elif section == "COLUMNS":
                name = tok[0]
                if name not in cols:
                    cols[name] = len(col_order)
                    col_order.append(name)
                    lower[name] = 0.0
                    upper[name] = math.inf
                for r, v in zip(tok[1::2], tok[2::2]):
                    v = float(v)
                    if r == obj_row:
                        cost[name] = v
                    elif r in rows:
                        coeffs.append((r, name, v))
            elif section == "RHS":
                pairs = tok[1:] if len(tok) % 2 == 1 else tok
                for r, v in zip(pairs[0::2], pairs[1::2]):
                    if r == obj_row:
                        offset = -float(v)
                    else:
                        rhs[r] = float(v)
            elif section == "BOUNDS":
                kind, name = tok[0], tok[2]
                value = float(tok[3]) if len(tok) > 3 else 0.0
                if abs(value) >= INF:
                    value = math.copysign(math.inf, value)
                if kind == "FX":
                    lower[name] = upper[name] = value
                elif kind == "FR":
                    lower[name], upper[name] = -math.inf, math.inf
                elif kind == "MI":
                    lower[name] = -math.inf
                elif kind == "PL":
                    upper[name] = math.inf
                elif kind == "LO":
                    lower[name] = value
                elif kind == "UP":
                    upper[name] = value
                else:
                    raise SystemExit(f"unsupported bound type {kind}")
    return row_order, rows, obj_row, col_order, cols, coeffs, cost, rhs, lower, upper, offset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("mps")
    ap.add_argument("solution")
    args = ap.parse_args()
    row_order, rows, _, col_order, cols, coeffs, cost, rhs, lower, upper, offset = read_mps(args.mps)

    n = len(col_order)
    c = np.array([cost.get(name, 0.0) for name in col_order])
    bounds = [(lower[name] if math.isfinite(lower[name]) else None,
               upper[name] if math.isfinite(upper[name]) else None) for name in col_order]

    ub_map, eq_map = {}, {}
    for name in row_order:
        (eq_map if rows[name] == "E" else ub_map)[name] = len(eq_map if rows[name] == "E" else ub_map)
    ub_r, ub_c, ub_v, eq_r, eq_c, eq_v = [], [], [], [], [], []
    for r, col, v in coeffs:
        sense = rows[r]
        if sense == "E":
            eq_r.append(eq_map[r]); eq_c.append(cols[col]); eq_v.append(v)
        else:
            sign = 1.0 if sense == "L" else -1.0
            ub_r.append(ub_map[r]); ub_c.append(cols[col]); ub_v.append(sign * v)
    b_ub = np.array([rhs.get(r, 0.0) * (1.0 if rows[r] == "L" else -1.0) for r in ub_map])
    b_eq = np.array([rhs.get(r, 0.0) for r in eq_map])
    A_ub = csr_matrix((ub_v, (ub_r, ub_c)), shape=(len(ub_map), n)) if ub_map else None
    A_eq = csr_matrix((eq_v, (eq_r, eq_c)), shape=(len(eq_map), n)) if eq_map else None

    res = linprog(c, A_ub=A_ub, b_ub=b_ub if ub_map else None, A_eq=A_eq, b_eq=b_eq if eq_map else None,
                  bounds=bounds, method="highs")
    status = {0: "optimal", 1: "iteration-limit", 2: "infeasible", 3: "unbounded"}.get(res.status, "infeasible")
    with open(args.solution, "w", newline="") as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["name", "value"])
        w.writerow(["__status__", status])
        if res.status == 0:
            w.writerow(["__objective__", repr(float(res.fun + offset))])
            for name, v in zip(col_order, res.x):
                w.writerow([name, repr(float(v))])
    return 0


if __name__ == "__main__":
    sys.exit(main())
