"""Full place-and-route of the [[144,12,12]] bivariate bicycle code.

The code ships with square-lattice data/check positions. Two thirds of its
864 couplers connect nearest neighbours and stay on the qubit tier; the long
toric wrap-around couplers are pushed to higher routing tiers, crossing
between wiring layers through bump bonds and reaching the qubit plane
through TSVs. The resulting raw quantities feed the complexity score.

Takes a few minutes. Run: python demos/02_bicycle_code_layout.py [out_dir]
"""

import sys
import time

from qecplace.render import render_to_files
from qecplace.report import RunConfig, run_entry

cfg = RunConfig(code={"family": "gross"}, placement="square_grid")

t0 = time.time()
report, routed = run_entry(cfg)
print(f"routed {len(routed.routed_edges)} couplers in {time.time() - t0:.0f}s")

per_tier = {}
for re in routed.routed_edges.values():
    per_tier[re.tier_index] = per_tier.get(re.tier_index, 0) + 1
for tier in sorted(per_tier):
    print(f"  tier {tier}: {per_tier[tier]} couplers")

q = report.params
print(f"q = ({q.q_tiers} tiers, length {q.q_length:.2f}, "
      f"bumps {q.q_bumps:.2f}, TSVs {q.q_tsvs:.2f})")
print(f"C_hw = {report.c_hw:.2f}   eta = {report.efficiency:.2f}")

if len(sys.argv) > 1:
    import json
    paths = render_to_files(json.loads(routed.serialize()), sys.argv[1])
    print("rendered:", *paths, sep="\n  ")
