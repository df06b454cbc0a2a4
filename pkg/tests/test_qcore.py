import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcqss.qcore import (
    ATOL, BASES, DECOY_STATES, BellSet, DeadPhotonError, MeasBasis, PairRegistry,
    RepresentationNotListed, StateVector, UnitaryCode, density_average, equal_up_to_phase,
    fidelity, is_density_matrix, member_name, prepare_decoy, representation_mismatches,
    representation_of, state_of, transition,
)
from dcqss.qcore.tables import CORRECTED_REPRESENTATIONS, DOCUMENTED_REPRESENTATION_MISMATCHES, tables_document

S2 = 1 / math.sqrt(2)
SETS = (BellSet.STANDARD, BellSet.ROTATED)


def _reg(state, ids):
    reg = PairRegistry()
    reg.add(state, ids)
    return reg


# --- StateVector --------------------------------------------------------------

def test_statevector_rejects_bad_input():
    with pytest.raises(ValueError):
        StateVector([1, 0, 0])
    with pytest.raises(ValueError):
        StateVector([1, 1])
    with pytest.raises(ValueError):
        StateVector([np.nan, 0])
    with pytest.raises(ValueError):
        StateVector(np.ones(2 ** 9) / math.sqrt(2 ** 9))
    with pytest.raises(ValueError):
        StateVector([0, 0], normalize=True)


def test_apply_is_msb_ordered():
    s = StateVector([1, 0, 0, 0]).apply(UnitaryCode.U2.matrix, 0)
    assert np.allclose(s.amps, [0, 0, 1, 0])
    s = StateVector([1, 0, 0, 0]).apply(UnitaryCode.U2.matrix, 1)
    assert np.allclose(s.amps, [0, 1, 0, 0])


complex_amps = st.lists(
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=2, max_size=16,
).filter(lambda v: len(v) in (2, 4, 8, 16) and sum(a * a + b * b for a, b in v) > 1e-3)


@given(complex_amps, st.integers(0, 3), st.sampled_from(list(UnitaryCode)))
def test_unitaries_preserve_norm(raw, qubit, u):
    s = StateVector([complex(a, b) for a, b in raw], normalize=True)
    q = qubit % s.n_qubits
    assert abs(s.apply(u.matrix, q).norm() - 1) <= 1e-12


@given(complex_amps, st.sampled_from(BASES), st.integers(0, 3))
def test_measurement_probabilities_sum_to_one(raw, basis, qubit):
    s = StateVector([complex(a, b) for a, b in raw], normalize=True)
    ids = list(range(s.n_qubits))
    reg = _reg(s, ids)
    p = reg.single_probabilities(ids[qubit % s.n_qubits], basis)
    assert abs(p.sum() - 1) <= 1e-12


# --- canonical states ----------------------------------------------------------

def test_standard_phi_plus_example():
    assert np.allclose(state_of(BellSet.STANDARD, 0).amps, [S2, 0, 0, S2], atol=ATOL)


def test_rotated_phi_plus_example():
    plus = np.array([S2, S2])
    minus = np.array([S2, -S2])
    want = (np.kron(plus, [1, 0]) + 1j * np.kron(minus, [0, 1])) * S2
    assert np.allclose(state_of(BellSet.ROTATED, 0).amps, want, atol=ATOL)


@pytest.mark.parametrize("bell_set", SETS)
def test_bell_sets_orthonormal(bell_set):
    m = bell_set.matrix
    assert np.allclose(m @ m.conj().T, np.eye(4), atol=ATOL)


def test_u3_matrix_and_codes():
    assert np.array_equal(UnitaryCode.U3.matrix, [[0, 1], [-1, 0]])
    assert [u.bits for u in UnitaryCode] == ["00", "01", "10", "11"]


def test_decoy_states_are_basis_eigenstates():
    for i, (basis, bit) in enumerate(DECOY_STATES):
        s = prepare_decoy(i)
        assert abs(abs(np.vdot(basis.eigenvector(bit), s.amps)) ** 2 - 1) <= ATOL
        other = [b for b in BASES if b is not basis]
        for b in other:
            # mutually unbiased
            assert abs(abs(np.vdot(b.eigenvector(0), s.amps)) ** 2 - 0.5) <= ATOL


def test_fidelity_and_phase_equality():
    a = state_of(BellSet.STANDARD, 1)
    b = StateVector(1j * a.amps)
    assert abs(fidelity(a, b) - 1) <= ATOL
    assert equal_up_to_phase(a, b)
    assert not equal_up_to_phase(a, state_of(BellSet.STANDARD, 2))


def test_density_average_of_bell_basis_is_identity():
    rho = density_average([state_of(BellSet.ROTATED, m) for m in range(4)])
    assert is_density_matrix(rho)
    assert np.allclose(rho, np.eye(4) / 4, atol=ATOL)


# --- registry ------------------------------------------------------------------

def test_born_rule_five_sigma():
    """|+y> measured in X: p(0) = 1/2, checked over 100000 samples at 5 sigma."""
    rng = np.random.default_rng(11)
    n, ones = 100_000, 0
    for _ in range(n):
        reg = _reg(prepare_decoy(4), ["p"])
        ones += reg.measure_single("p", MeasBasis.X, rng)
    sigma = math.sqrt(0.25 / n)
    assert abs(ones / n - 0.5) <= 5 * sigma


@pytest.mark.parametrize("bell_set,member", list(itertools.product(SETS, range(4))))
def test_collapse_consistency(bell_set, member):
    """Joint outcome distribution from sequential measurement equals |<ab|psi>|^2
    for all 9 basis pairs, and the partner collapses onto the conditional state."""
    psi = state_of(bell_set, member).amps
    for b1, b2 in itertools.product(BASES, repeat=2):
        for o1 in range(2):
            reg = _reg(StateVector(psi), ["B", "C"])
            p1 = reg.single_probabilities("B", b1)[o1]
            if p1 <= ATOL:
                continue
            reg.measure_single("B", b1, outcome=o1)
            p2 = reg.single_probabilities("C", b2)
            for o2 in range(2):
                direct = abs(np.vdot(np.kron(b1.eigenvector(o1), b2.eigenvector(o2)), psi)) ** 2
                assert abs(p1 * p2[o2] - direct) <= 1e-12
            assert not reg.is_live("B")


def test_bell_measurement_of_bell_state_is_certain():
    for bell_set, m in itertools.product(SETS, range(4)):
        reg = _reg(state_of(bell_set, m), ["B", "C"])
        p = reg.bell_probabilities("B", "C", bell_set)
        assert abs(p[m] - 1) <= ATOL
        assert reg.bell_measure("B", "C", bell_set, rng=np.random.default_rng(0)) == m
        assert len(reg) == 0


def test_bell_measure_reversed_order_on_product():
    reg = PairRegistry()
    reg.add(StateVector([1, 0]), ["x"])
    reg.add(StateVector([0, 1]), ["y"])
    # |1>_y |0>_x = (psi+ - psi-)/sqrt2 ordered (y, x)
    p = reg.bell_probabilities("y", "x", BellSet.STANDARD)
    assert np.allclose(p, [0, 0, 0.5, 0.5], atol=ATOL)


def test_dead_photon_errors():
    reg = _reg(prepare_decoy(0), ["p"])
    reg.measure_single("p", MeasBasis.Z, rng=np.random.default_rng(0))
    with pytest.raises(DeadPhotonError):
        reg.measure_single("p", MeasBasis.Z, rng=np.random.default_rng(0))
    with pytest.raises(DeadPhotonError):
        reg.apply_local(UnitaryCode.U1, "p")


def test_forced_zero_probability_outcome_rejected():
    reg = _reg(prepare_decoy(0), ["p"])
    with pytest.raises(ValueError):
        reg.measure_single("p", MeasBasis.Z, outcome=1)


def test_joint_state_refuses_partial_entangled_set():
    reg = _reg(state_of(BellSet.STANDARD, 0), ["B", "C"])
    with pytest.raises(ValueError):
        reg.joint_state(["B"])
    swapped = reg.joint_state(["C", "B"])
    assert equal_up_to_phase(swapped, state_of(BellSet.STANDARD, 0))


# --- tables --------------------------------------------------------------------

def test_representation_exceptions_are_exactly_documented():
    assert representation_mismatches() == set(DOCUMENTED_REPRESENTATION_MISMATCHES)
    assert len(DOCUMENTED_REPRESENTATION_MISMATCHES) == 1


def test_corrected_representation_matches():
    for rep in CORRECTED_REPRESENTATIONS:
        canon = state_of(rep.bell_set, rep.bell_set.member(rep.member))
        assert abs(fidelity(canon, rep.assemble()) - 1) <= ATOL


def test_unlisted_representation_raises():
    with pytest.raises(RepresentationNotListed):
        representation_of(BellSet.STANDARD, 0, (MeasBasis.Y, MeasBasis.Z))


@pytest.mark.parametrize("bell_set", SETS)
@pytest.mark.parametrize("side", ["B", "C"])
def test_transitions_are_permutations(bell_set, side):
    for u in UnitaryCode:
        targets = {transition(bell_set, m, u, side)[0] for m in range(4)}
        assert targets == {0, 1, 2, 3}


def test_transition_example_strings():
    doc = tables_document()
    assert "U2 on C: psi+ -> +phi+" in doc["transitions"]["standard/C"]
    assert len(doc["representation_mismatches"]) == 1
    assert member_name(BellSet.ROTATED, 0) == "Phi+"


def test_printed_global_phases_hold_outside_the_typo():
    from dcqss.qcore import check_representations
    wrong = {(c.rep.bell_set, c.rep.member, c.rep.bases) for c in check_representations() if not c.phase_matches}
    assert wrong == set(DOCUMENTED_REPRESENTATION_MISMATCHES)


def test_rotated_member_in_standard_set_is_uniform():
    for m in range(4):
        reg = _reg(state_of(BellSet.ROTATED, m), ["B", "C"])
        assert np.allclose(reg.bell_probabilities("B", "C", BellSet.STANDARD), 0.25, atol=ATOL)


def test_rotated_phi_plus_amplitudes():
    assert np.allclose(state_of(BellSet.ROTATED, 0).amps, np.array([1, 1j, 1, -1j]) / 2, atol=ATOL)
