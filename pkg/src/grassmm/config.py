"""Shared numeric tolerances for factorizations and their consumers."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Single source for the kernel-level tolerances used across tests and audits.

    orthonormality: max deviation of a Gram matrix from the identity.
    reconstruction: relative error allowed when multiplying factors back.
    rank_cutoff:    relative singular-value threshold below which a column
                    counts as linearly dependent.
    """

    orthonormality: float = 1e-10
    reconstruction: float = 1e-9
    rank_cutoff: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()
