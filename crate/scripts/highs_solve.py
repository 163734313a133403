#!/usr/bin/env python3
"""MPS backend for the planner: solves an MPS file with HiGHS and writes a
name/value solution file.

usage: highs_solve.py MPS SOL GAP TIMELIMIT [--format pairs|highs]

The default `pairs` output looks like

    solution status: optimal
    objective value: 12.5
    gap: 0.0001
    x 0.5
    ...

`--format highs` writes HiGHS' own raw solution file instead.
"""
import sys

try:
    import highspy
except ImportError:  # pragma: no cover
    sys.stderr.write("highspy is not installed (pip install highspy)\n")
    sys.exit(4)


def main(argv):
    if len(argv) < 5:
        sys.stderr.write(__doc__)
        return 1
    mps, sol, gap, limit = argv[1], argv[2], float(argv[3]), float(argv[4])
    fmt = "pairs"
    if len(argv) > 6 and argv[5] == "--format":
        fmt = argv[6]

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", gap)
    h.setOptionValue("time_limit", limit)
    h.setOptionValue("random_seed", 0)
    if h.readModel(mps) != highspy.HighsStatus.kOk:
        sys.stderr.write("failed to read %s\n" % mps)
        return 2
    h.run()

    if fmt == "highs":
        h.writeSolution(sol, 0)
        return 0

    status = h.getModelStatus()
    info = h.getInfo()
    has_primal = info.primal_solution_status == 2
    if status == highspy.HighsModelStatus.kOptimal:
        word = "optimal"
    elif status in (highspy.HighsModelStatus.kInfeasible,
                    highspy.HighsModelStatus.kUnboundedOrInfeasible):
        word = "infeasible"
    elif status == highspy.HighsModelStatus.kUnbounded:
        word = "unbounded"
    elif has_primal:
        word = "time limit reached"
    else:
        word = "error: " + h.modelStatusToString(status)

    lp = h.getLp()
    names = lp.col_names_
    with open(sol, "w") as out:
        out.write("solution status: %s\n" % word)
        if has_primal:
            out.write("objective value: %r\n" % info.objective_function_value)
            if lp.integrality_ and any(int(k) != 0 for k in lp.integrality_):
                out.write("gap: %r\n" % info.mip_gap)
            values = h.getSolution().col_value
            for name, value in zip(names, values):
                out.write("%s %r\n" % (name, value))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
