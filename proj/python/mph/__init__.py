# Copyright 2026 The mph Authors
# SPDX-License-Identifier: Apache-2.0

"""Multi-photon holonomies in coupled waveguide arrays."""

from ._core import (
    MphError,
    NotHolonomicError,
    ParticleType,
    Structure,
    Subspace,
    basis_labels,
    count_subspaces,
    enumerate_holonomic,
    evolve,
    extract_holonomy,
    fidelity,
    hom_dip,
    is_cyclic,
    jx_propagator,
    lift_unitary,
    permanent,
    plateau,
    reference_rows,
    scan,
    structure,
    success_probability,
    system_from_json,
)

__all__ = [
    "MphError",
    "NotHolonomicError",
    "ParticleType",
    "Structure",
    "Subspace",
    "basis_labels",
    "count_subspaces",
    "enumerate_holonomic",
    "evolve",
    "extract_holonomy",
    "fidelity",
    "hom_dip",
    "is_cyclic",
    "jx_propagator",
    "lift_unitary",
    "permanent",
    "plateau",
    "reference_rows",
    "scan",
    "structure",
    "success_probability",
    "system_from_json",
]
