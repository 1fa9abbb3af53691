"""Python bindings for the ulab tape-language laboratory."""

from ._ulab import (
    UlabError,
    berry_demo,
    cli,
    count_valid,
    enumerate_programs,
    execute,
    exhaustive_k,
    goldbach_witness,
    is_prime,
    literal_printer,
    minimal_genome_oracle,
    refutation_suite,
    run_evolution,
    search_space_size,
    self_apply,
)

__all__ = [
    "UlabError",
    "berry_demo",
    "cli",
    "count_valid",
    "enumerate_programs",
    "execute",
    "exhaustive_k",
    "goldbach_witness",
    "is_prime",
    "literal_printer",
    "minimal_genome_oracle",
    "refutation_suite",
    "run_evolution",
    "search_space_size",
    "self_apply",
]
