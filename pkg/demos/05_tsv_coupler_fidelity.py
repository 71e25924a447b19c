"""Do TSVs passing near a coupler ruin its coherence? A worst-case estimate.

Every higher-tier coupler reaches the qubit plane through through-substrate
vias. Each TSV the coupler touches loads it with a lossy parallel channel;
treating the TSVs as dominating the coupler's quality factor gives
Q_coupler = Q_TSV / n_TSV, hence a T1 limit and a two-qubit gate error
floor of (4/5) * t_gate / T1.

With 3 TSVs of Q = 750k on a 7 GHz coupler and a 70 ns gate, the coupler
still supports ~99% gate fidelity - TSV loading is not the bottleneck.

Run: python demos/05_tsv_coupler_fidelity.py
"""

import math

from qecplace.metrics import tsv_fidelity_estimate

print(f"{'n_TSV':>5} {'Q_coupler':>10} {'T1 (us)':>8} {'F_2qb':>7}")
for n_tsv in (1, 2, 3, 5, 10):
    est = tsv_fidelity_estimate(n_tsv, q_tsv=750e3,
                                omega_cplr=2 * math.pi * 7e9, t_g=70e-9)
    print(f"{n_tsv:>5} {est.q_cplr:>10.0f} {est.t1_cplr * 1e6:>8.2f} "
          f"{est.f_2qb:>7.4f}")
