"""Exact interval measures and seeded experiments for rational approximation
with randomly restricted numerators.

Everything numeric that matters is exact: rationals cross the boundary as
"num/den" strings (feed them to fractions.Fraction), probabilities act
through 64-bit integer thresholds, and reruns at a fixed seed reproduce bit
for bit.
"""

from ._core import (  # noqa: F401
    ConfigError,
    InputError,
    MembershipOracle,
    ResourceError,
    __version__,
    approx_set_arcs,
    approx_set_measure,
    eval_p,
    eval_psi,
    expected_measure_q,
    expected_overlap_q,
    partial_sum,
    phi_divisor_sum,
    prf_version,
    prob_spec,
    psi_spec,
    qia_experiment,
    run_cli,
    s_count_in_arc,
    s_set,
    set_worker_threads,
    sparse_sequence,
    window_coverage,
)
