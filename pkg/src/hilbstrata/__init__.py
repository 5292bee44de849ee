"""Stratification of punctual Hilbert schemes of points by m-dimensional partitions."""
from .border_relations import (
    RelationSystem,
    StratumData,
    commutator_relations,
    formal_multiplication_matrices,
    hardrel_relations,
)
from .config import CountingConfig
from .motivic import MotivicPoly, MotivicSeries, euler_factorization, global_hilbert_series, power_structure_pow
from .partitions import MDPartition, border, enumerate_partitions, order_ideal, validate_partition
from .quotient_algebra import partition_from_matrices, round_trip, sample_points
from .stratum import eliminate, punctual_class, stratum_class

__version__ = "0.1.0"

__all__ = [
    "CountingConfig",
    "MDPartition",
    "MotivicPoly",
    "MotivicSeries",
    "RelationSystem",
    "StratumData",
    "border",
    "commutator_relations",
    "eliminate",
    "enumerate_partitions",
    "euler_factorization",
    "formal_multiplication_matrices",
    "global_hilbert_series",
    "hardrel_relations",
    "order_ideal",
    "partition_from_matrices",
    "power_structure_pow",
    "punctual_class",
    "round_trip",
    "sample_points",
    "stratum_class",
    "validate_partition",
]
