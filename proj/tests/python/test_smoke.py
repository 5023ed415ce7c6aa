# Copyright 2026 The mph Authors
# SPDX-License-Identifier: Apache-2.0

import math

import numpy as np
import pytest

import mph


def test_double_flip():
    u = mph.evolve(mph.structure(84.9))
    assert np.allclose(u, 1j * np.fliplr(np.eye(4)), atol=1e-8)
    assert np.allclose(mph.jx_propagator(math.pi), u, atol=1e-8)


def test_permanent_and_lift():
    m = np.arange(9, dtype=complex).reshape(3, 3)
    assert mph.permanent(m) == pytest.approx(0 * 4 * 8 + 0 * 5 * 7 + 1 * 3 * 8 + 1 * 5 * 6 + 2 * 3 * 7 + 2 * 4 * 6)
    lifted = mph.lift_unitary(mph.jx_propagator(0.7), 2)
    assert lifted.shape == (10, 10)
    assert np.allclose(lifted.conj().T @ lifted, np.eye(10), atol=1e-12)
    assert mph.basis_labels(4, 2)[:3] == ["2000", "1100", "1010"]


def test_counts_and_enumeration():
    s = mph.structure()
    assert mph.count_subspaces(s, 1) == (14, 2)
    assert mph.count_subspaces(s, 2) == (1022, 62)
    r = mph.enumerate_holonomic(s, 2)
    assert (r["holonomic_multi"], r["scalar"], r["non_scalar"]) == (17, 1, 16)


def test_holonomy_and_errors():
    s = mph.structure()
    h = mph.extract_holonomy(mph.Subspace(["2000", "1001", "0002"]), s)
    assert h["class"] == "non_scalar"
    assert np.allclose(h["u"], -np.fliplr(np.eye(3)), atol=1e-8)
    assert mph.is_cyclic(mph.Subspace(["a1b3", "a2b1", "a3b4", "a4b2"], type="distinguishable"), s)
    with pytest.raises(mph.NotHolonomicError) as err:
        mph.extract_holonomy(mph.Subspace(["0200", "0020", "0110"]), s)
    assert err.value.code == "not-holonomic"
    with pytest.raises(mph.MphError) as err:
        mph.extract_holonomy(mph.Subspace(["2000", "0200"]), s)
    assert err.value.code == "not-cyclic"
    with pytest.raises(mph.MphError):
        mph.Subspace(["20x0"])


def test_scan_and_plateau():
    sub = mph.Subspace(["1000", "0001"])
    lengths = list(np.round(np.arange(60.0, 120.0 + 1e-9, 0.01), 10))
    curves = mph.scan(sub, lengths)
    assert set(curves) == {"1000", "0001"}
    p = curves["1000"]
    assert max(p) == pytest.approx(1.0, abs=1e-12)
    _, _, width = mph.plateau(lengths, p, anchor=84.9)
    assert width == pytest.approx(23.7, abs=0.01)
    assert mph.success_probability(sub, "1000", 84.9) == pytest.approx(1.0, abs=1e-12)


def test_experiment_helpers():
    assert mph.fidelity([1.0, 0.0], [0.9, 0.1]) == pytest.approx(0.9, abs=1e-15)
    assert mph.fidelity([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert min(mph.hom_dip([-1.0, 0.0, 1.0], 0.986)) == pytest.approx(0.014, abs=1e-12)
