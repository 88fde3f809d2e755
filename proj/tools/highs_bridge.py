#!/usr/bin/env python3
# Copyright 2026 The treepart Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solver bridge: read an LP file with HiGHS, write `name value` lines.

Usage: highs_bridge.py MODEL SOLUTION [TIMEOUT_S] [GAP]
"""

import sys

import highspy


def main(argv):
    if len(argv) < 3:
        sys.stderr.write(__doc__)
        return 2
    model, solution = argv[1], argv[2]
    timeout = float(argv[3]) if len(argv) > 3 else None
    gap = float(argv[4]) if len(argv) > 4 else 0.0

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", 0)
    h.setOptionValue("mip_rel_gap", gap)
    h.setOptionValue("mip_abs_gap", 1e-7)
    if timeout is not None:
        h.setOptionValue("time_limit", timeout)
    if h.readModel(model) != highspy.HighsStatus.kOk:
        sys.stderr.write("HiGHS could not read %s\n" % model)
        return 3
    h.run()
    status = h.getModelStatus()
    names = {
        highspy.HighsModelStatus.kOptimal: "optimal",
        highspy.HighsModelStatus.kInfeasible: "infeasible",
        highspy.HighsModelStatus.kUnboundedOrInfeasible: "infeasible_or_unbounded",
        highspy.HighsModelStatus.kUnbounded: "unbounded",
        highspy.HighsModelStatus.kTimeLimit: "time_limit",
    }
    word = names.get(status, "other")
    info = h.getInfo()
    has_point = info.primal_solution_status == 2  # feasible
    with open(solution, "w") as out:
        out.write("# status %s\n" % word)
        if has_point:
            lp = h.getLp()
            values = h.getSolution().col_value
            for name, value in zip(lp.col_names_, values):
                out.write("%s %.17g\n" % (name, value))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
