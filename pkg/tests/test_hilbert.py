import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperanalysis.errors import NonCanonicalLabel, NotAProduct, ShapeMismatch
from hyperanalysis.hilbert import (
    BELL_LABELS,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    BellLabel,
    Branch,
    Dof,
    GhzLabel,
    HyperGhzLabel,
    ProbeUnit,
    PureState,
    Sign,
    bell_dof_state,
    bell_to_ghz,
    canonicalize_ghz,
    factor_dof,
    fidelity,
    ghz_labels,
    ghz_to_bell,
    hyper_bell_labels,
    hyper_ghz_labels,
    inner,
    make_hyper_bell,
    make_hyper_ghz,
)

from conftest import hb, hg

R = 1 / math.sqrt(2)
bit_strings = st.integers(2, 9).flatmap(lambda n: st.tuples(*[st.integers(0, 1)] * n))
signs = st.sampled_from(list(Sign))


class TestLabels:
    def test_bell_round_trip_through_text(self):
        for label in BELL_LABELS:
            assert BellLabel.parse(str(label)) == label
        assert [str(b) for b in BELL_LABELS] == ["Phi+", "Phi-", "Psi+", "Psi-"]

    @pytest.mark.parametrize("text", ["", "Phi", "Chi+", "Phi+-", "+:"])
    def test_bell_parse_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            BellLabel.parse(text)

    @pytest.mark.parametrize("text", ["+:0", "*:010", "+:012", "010", "+:"])
    def test_ghz_parse_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            GhzLabel.parse(text)

    def test_ghz_text_round_trip(self):
        label = GhzLabel(Sign.MINUS, (1, 0, 0))
        assert str(label) == "-:100"
        assert GhzLabel.parse("-:100") == label

    @pytest.mark.parametrize("sign,bits,expected", [
        ("-", "011", "-:100"),
        ("+", "000", "+:000"),
        ("+", "10", "+:01"),
        ("+", "110", "+:001"),
        ("+", "1100", "+:0011"),
    ])
    def test_canonicalize_examples(self, sign, bits, expected):
        label = canonicalize_ghz(Sign.parse(sign), [int(c) for c in bits])
        assert str(label) == expected

    @given(signs, bit_strings)
    def test_canonicalize_is_idempotent_and_complement_blind(self, sign, bits):
        once = canonicalize_ghz(sign, bits)
        assert once.is_canonical
        assert canonicalize_ghz(once.sign, once.bits) == once
        assert canonicalize_ghz(sign, tuple(1 - b for b in bits)) == once
        assert once.sign is sign

    @pytest.mark.parametrize("n", range(2, 7))
    def test_ghz_label_count(self, n):
        labels = ghz_labels(n)
        assert len(labels) == 2 ** n
        assert len(set(labels)) == 2 ** n
        assert all(label.is_canonical for label in labels)

    def test_canonical_rule_brute_force(self):
        # independent restatement: fewer ones wins; on a tie, smaller integer wins
        for n in range(2, 7):
            for bits in itertools.product((0, 1), repeat=n):
                comp = tuple(1 - b for b in bits)
                ones = sum(bits)
                value = int("".join(map(str, bits)), 2)
                comp_value = int("".join(map(str, comp)), 2)
                expected = ones < n - ones or (ones == n - ones and value < comp_value)
                assert GhzLabel(Sign.PLUS, bits).is_canonical is expected

    def test_hyper_label_counts(self):
        assert len(set(hyper_bell_labels())) == 16
        assert len(set(hyper_ghz_labels(3))) == 64

    def test_hyper_ghz_rejects_mixed_sizes(self):
        with pytest.raises(ValueError):
            HyperGhzLabel(GhzLabel.parse("+:000"), GhzLabel.parse("+:00"))

    def test_bell_ghz_correspondence(self):
        assert bell_to_ghz(PHI_PLUS) == GhzLabel(Sign.PLUS, (0, 0))
        assert bell_to_ghz(PSI_MINUS) == GhzLabel(Sign.MINUS, (0, 1))
        for label in BELL_LABELS:
            assert ghz_to_bell(bell_to_ghz(label)) == label

    def test_n2_ghz_states_equal_bell_states(self):
        for label in hyper_bell_labels():
            ghz = HyperGhzLabel(bell_to_ghz(label.pol), bell_to_ghz(label.spatial))
            a = make_hyper_bell(label, 2)
            b = make_hyper_ghz(ghz, probe_units=(ProbeUnit.THETA, ProbeUnit.THETA))
            assert a.amplitudes.keys() == b.amplitudes.keys()
            for key in a.amplitudes:
                assert abs(a.amplitudes[key] - b.amplitudes[key]) < 1e-12


class TestMakeHyperBell:
    def test_phi_plus_phi_plus_amplitudes(self):
        state = make_hyper_bell(hb("Phi+", "Phi+"), 0)
        expected = {
            Branch.from_bits((0, 0), (0, 0)): 0.5,
            Branch.from_bits((0, 0), (1, 1)): 0.5,
            Branch.from_bits((1, 1), (0, 0)): 0.5,
            Branch.from_bits((1, 1), (1, 1)): 0.5,
        }
        assert state.amplitudes == pytest.approx(expected)

    def test_psi_minus_sign_sits_on_vh_branches(self):
        state = make_hyper_bell(hb("Psi-", "Phi+"), 2)
        assert len(state) == 4
        for b, a in state:
            pa, pb = b.ket(2)[0][0], b.ket(2)[1][0]
            assert (pa, pb) in {(0, 1), (1, 0)}
            assert a == pytest.approx(-0.5 if (pa, pb) == (1, 0) else 0.5)
            assert b.tags == (0, 0)

    def test_phase_orthogonality(self):
        a = make_hyper_bell(hb("Phi-", "Psi-"))
        b = make_hyper_bell(hb("Phi+", "Psi-"))
        assert abs(inner(a, b)) < 1e-12

    def test_all_sixteen_orthonormal(self):
        states = [make_hyper_bell(label) for label in hyper_bell_labels()]
        gram = np.array([[inner(a, b) for b in states] for a in states])
        assert np.allclose(gram, np.eye(16), atol=1e-9)

    def test_negative_probe_count(self):
        with pytest.raises(ValueError):
            make_hyper_bell(hb("Phi+", "Phi+"), -1)


class TestMakeHyperGhz:
    def test_three_photon_all_zero_label(self):
        state = make_hyper_ghz(hg("+:000", "+:000"))
        assert state.probe_units == (ProbeUnit.THETA, ProbeUnit.THETA, ProbeUnit.PI)
        expected = {
            Branch.from_bits(p, s, (0, 0, 0)): 0.5
            for p in ((0, 0, 0), (1, 1, 1)) for s in ((0, 0, 0), (1, 1, 1))
        }
        assert state.amplitudes == pytest.approx(expected)

    @pytest.mark.parametrize("pol,spatial,canonical", [
        ("+:000", "+:110", "+:001"),
        ("-:1100", "+:0000", "-:0011"),
    ])
    def test_non_canonical_reports_canonical_form(self, pol, spatial, canonical):
        with pytest.raises(NonCanonicalLabel) as info:
            make_hyper_ghz(hg(pol, spatial))
        assert str(info.value.canonical) == canonical
        assert canonical in str(info.value)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_orthonormal_basis(self, n):
        states = [make_hyper_ghz(label) for label in hyper_ghz_labels(n)]
        gram = np.array([[inner(a, b) for b in states] for a in states])
        assert np.allclose(gram, np.eye(4 ** n), atol=1e-9)

    def test_probe_layout_options(self):
        label = hg("+:000", "+:000")
        assert make_hyper_ghz(label, 0).probe_units == ()
        assert make_hyper_ghz(label, 2).probe_units == (ProbeUnit.THETA,) * 2
        with pytest.raises(ValueError):
            make_hyper_ghz(label, 1, probe_units=(ProbeUnit.PI, ProbeUnit.PI))


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            PureState(2, (), {Branch(0, 0, ()): 0.5})

    def test_rejects_bad_shapes(self):
        with pytest.raises(ShapeMismatch):
            PureState(2, (ProbeUnit.THETA,), {Branch(0, 0, ()): 1.0})
        with pytest.raises(ShapeMismatch):
            PureState(2, (), {Branch(4, 0, ()): 1.0})
        with pytest.raises(ValueError):
            PureState(1, (), {Branch(0, 0, ()): 1.0})

    def test_prunes_tiny_amplitudes(self):
        state = PureState(2, (), {Branch(0, 0, ()): 1.0, Branch(1, 0, ()): 1e-12})
        assert len(state) == 1

    def test_canonical_branch_order(self):
        state = make_hyper_bell(hb("Psi+", "Psi+"))
        kets = [b.ket(2) for b, _ in state.branches()]
        assert kets == sorted(kets)


class TestFidelity:
    def test_self_and_global_phase(self):
        s = make_hyper_bell(hb("Psi-", "Phi-"))
        assert fidelity(s, s) == pytest.approx(1.0)
        assert fidelity(s, -s) == pytest.approx(1.0)

    def test_orthogonal_spatial(self):
        assert fidelity(make_hyper_bell(hb("Phi+", "Phi+")), make_hyper_bell(hb("Phi+", "Psi+"))) < 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            fidelity(make_hyper_bell(hb("Phi+", "Phi+"), 1), make_hyper_bell(hb("Phi+", "Phi+"), 2))
        with pytest.raises(ShapeMismatch):
            fidelity(make_hyper_bell(hb("Phi+", "Phi+")), bell_dof_state(PHI_PLUS, Dof.SPATIAL))


class TestFactorDof:
    def test_spatial_factor(self):
        state = make_hyper_bell(hb("Phi+", "Psi-"))
        factor = factor_dof(state, Dof.SPATIAL)
        target = {(0, 1): R, (1, 0): -R}
        assert abs(sum(np.conj(factor.amplitudes.get(k, 0)) * v for k, v in target.items())) == pytest.approx(1.0)

    def test_polarization_factor(self):
        state = make_hyper_bell(hb("Phi+", "Psi-"))
        factor = factor_dof(state, Dof.POLARIZATION)
        assert fidelity(factor, bell_dof_state(PHI_PLUS, Dof.POLARIZATION)) == pytest.approx(1.0)
        assert fidelity(factor, bell_dof_state(PHI_MINUS, Dof.POLARIZATION)) == pytest.approx(0.0, abs=1e-12)

    def test_each_label_factors_into_its_parts(self):
        for label in hyper_bell_labels():
            state = make_hyper_bell(label, 0)
            assert fidelity(factor_dof(state, Dof.POLARIZATION), bell_dof_state(label.pol, Dof.POLARIZATION)) == pytest.approx(1.0)
            assert fidelity(factor_dof(state, Dof.SPATIAL), bell_dof_state(label.spatial, Dof.SPATIAL)) == pytest.approx(1.0)

    def test_cross_dof_entangled_state_is_rejected(self):
        # each photon in (|H M1> + |V M2>)/sqrt2; brute-force Schmidt rank via numpy
        v = np.zeros((2, 2))
        v[0, 0] = v[1, 1] = R
        t = np.einsum("ab,cd->abcd", v, v)  # (pA, mA, pB, mB)
        mat = t.transpose(0, 2, 1, 3).reshape(4, 4)  # rows (pA, pB), cols (mA, mB)
        assert np.linalg.matrix_rank(mat, tol=1e-9) == 4
        rho = mat @ mat.conj().T
        assert np.trace(rho @ rho).real == pytest.approx(0.25)

        amps = {Branch.from_bits((p, q), (p, q)): 0.5 for p in (0, 1) for q in (0, 1)}
        state = PureState(2, (), amps)
        with pytest.raises(NotAProduct, match="rank 4"):
            factor_dof(state, Dof.SPATIAL)

    def test_requires_uniform_tags(self):
        amps = {Branch(0, 0, (1,)): R, Branch(3, 3, (0,)): R}
        with pytest.raises(ValueError):
            factor_dof(PureState(2, (ProbeUnit.THETA,), amps), Dof.SPATIAL)

    def test_psi_labels_distinct(self):
        assert fidelity(bell_dof_state(PSI_PLUS, Dof.SPATIAL), bell_dof_state(PSI_MINUS, Dof.SPATIAL)) < 1e-12
