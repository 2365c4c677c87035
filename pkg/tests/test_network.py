import numpy as np
import pytest

from dicert.exceptions import DimensionError
from dicert.network import (ROTATED_OBSERVABLES, STAR, MeasurementFamily, NetworkConfig,
                            canonical_config, conjugate_config, joint_probability,
                            probability_table, steering_operator)
from dicert.states import DensityMatrix, isotropic, phi_plus_projector, pauli_projector, random_density

from oracles import direct_joint_probability, random_config


def test_canonical_config_families(ideal_config):
    cfg = ideal_config
    assert cfg.dims == (2, 2, 2, 2, 2, 2)
    np.testing.assert_allclose(cfg.rho_CA0.matrix, phi_plus_projector())
    np.testing.assert_allclose(cfg.charlie.effect(2, +1), pauli_projector(1, 2))
    np.testing.assert_allclose(cfg.alice.effect(STAR, +1), phi_plus_projector())
    O = ROTATED_OBSERVABLES[2]
    np.testing.assert_allclose(cfg.alice.effect(3, -1), np.kron((np.eye(2) - O) / 2, np.eye(2)))
    np.testing.assert_allclose(cfg.bob.effect(3, -1), np.kron(np.eye(2), (np.eye(2) - O) / 2))


def test_visibility_zero_is_maximally_mixed():
    cfg = canonical_config(isotropic(1.0), 0.0)
    np.testing.assert_allclose(cfg.rho_B0D.matrix, np.eye(4) / 4)


def test_canonical_config_rejects_bad_visibility():
    with pytest.raises(ValueError):
        canonical_config(isotropic(1.0), 1.5)


def test_measurement_family_validation():
    bad = np.array([[np.eye(2), np.eye(2)]])
    with pytest.raises(ValueError):
        MeasurementFamily(bad, (2,), (1,), (1, -1))
    neg = np.array([[np.diag([2.0, 0]), np.diag([-1.0, 1])]])
    with pytest.raises(ValueError):
        MeasurementFamily(neg, (2,), (1,), (1, -1))


def test_config_dimension_mismatch(ideal_config):
    with pytest.raises(DimensionError):
        NetworkConfig(ideal_config.rho_CA0, DensityMatrix(np.eye(6) / 6, (2, 3)), ideal_config.rho_B0D,
                      ideal_config.charlie, ideal_config.alice, ideal_config.bob, ideal_config.daisy)


def test_conjugate_involution(ideal_config):
    twice = conjugate_config(conjugate_config(ideal_config, "charlie"), "charlie")
    for name in ("charlie", "alice", "bob", "daisy"):
        np.testing.assert_array_equal(getattr(twice, name).effects, getattr(ideal_config, name).effects)


def test_conjugate_relabels_axis_three(ideal_config):
    conj = conjugate_config(ideal_config, "charlie")
    # sigma_y -> -sigma_y swaps the outcome labels of setting 3 only
    np.testing.assert_allclose(conj.charlie.effect(3, +1), ideal_config.charlie.effect(3, -1))
    np.testing.assert_allclose(conj.charlie.effect(1, +1), ideal_config.charlie.effect(1, +1))
    np.testing.assert_allclose(conj.charlie.effect(2, -1), ideal_config.charlie.effect(2, -1))
    np.testing.assert_array_equal(conj.alice.effect(STAR, +1), ideal_config.alice.effect(STAR, +1))
    np.testing.assert_array_equal(conj.daisy.effects, ideal_config.daisy.effects)


def test_conjugate_leaves_wing_statistics(ideal_config, ideal_table):
    for wing in ("charlie", "daisy"):
        t = probability_table(conjugate_config(ideal_config, wing))
        left = slice(0, 6)
        np.testing.assert_allclose(t.values[:, left, left], ideal_table.values[:, left, left], atol=1e-12)


def test_conjugate_bad_wing(ideal_config):
    with pytest.raises(ValueError):
        conjugate_config(ideal_config, "alice")


@pytest.mark.parametrize("c", [1, -1])
@pytest.mark.parametrize("z", [1, 2, 3])
def test_steering_bell(z, c):
    pi = pauli_projector(c, z)
    got = steering_operator(isotropic(1.0), pi, measured=0)
    np.testing.assert_allclose(got, pi.T / 2, atol=1e-15)
    got = steering_operator(isotropic(1.0), pi, measured=1)
    np.testing.assert_allclose(got, pi.T / 2, atol=1e-15)


def test_steering_identity_gives_reduced_state():
    rho = random_density((2, 2), 3)
    red = steering_operator(rho, np.eye(2), measured=0)
    np.testing.assert_allclose(red, rho.matrix.reshape(2, 2, 2, 2).trace(axis1=0, axis2=2))


def test_steering_white_noise():
    got = steering_operator(isotropic(0.0), pauli_projector(1, 3), measured=0)
    np.testing.assert_allclose(got, np.eye(2) / 4, atol=1e-15)


def test_steering_family_sums_to_reduced_state():
    rho = random_density((2, 2), 9)
    parts = sum(steering_operator(rho, pauli_projector(c, 2), measured=1) for c in (1, -1))
    np.testing.assert_allclose(parts, steering_operator(rho, np.eye(2), measured=1), atol=1e-14)
    assert np.linalg.eigvalsh(steering_operator(rho, pauli_projector(1, 2), 1)).min() > -1e-12


def test_steering_dimension_mismatch():
    with pytest.raises(DimensionError):
        steering_operator(isotropic(1.0), np.eye(3))


def test_joint_probability_ideal_bell(ideal_config):
    assert abs(joint_probability(ideal_config, (1, STAR, STAR, 1), (1, 1, 1, 1)) - 1 / 32) < 1e-15


def test_joint_probability_white_target():
    cfg = canonical_config(isotropic(0.0), 1.0)
    for z in (1, 2, 3):
        for w in (1, 2, 3):
            for c in (1, -1):
                assert abs(joint_probability(cfg, (z, STAR, STAR, w), (c, 1, 1, -c)) - 1 / 64) < 1e-15


def test_joint_probability_invalid_labels(ideal_config):
    with pytest.raises(ValueError):
        joint_probability(ideal_config, (4, STAR, STAR, 1), (1, 1, 1, 1))
    with pytest.raises(ValueError):
        joint_probability(ideal_config, (1, STAR, STAR, 1), (0, 1, 1, 1))


def test_reduced_matches_direct_on_random_configs():
    rng = np.random.default_rng(12)
    for _ in range(10):
        cfg = random_config(rng)
        table = probability_table(cfg)
        S = table.settings
        for _ in range(10):
            idx = [rng.integers(len(S[k])) for k in range(4)]
            out = [rng.integers(2) for _ in range(4)]
            setting = tuple(S[k][idx[k]] for k in range(4))
            outcome = tuple((1, -1)[o] for o in out)
            ref = direct_joint_probability(cfg, setting, outcome)
            assert abs(joint_probability(cfg, setting, outcome) - ref) < 1e-12
            assert abs(table.values[tuple(idx) + tuple(out)] - ref) < 1e-12


def test_table_invariants_ideal(ideal_table):
    assert ideal_table.values.shape == (3, 7, 7, 3, 2, 2, 2, 2)
    assert ideal_table.normalization_error() < 1e-9
    assert ideal_table.positivity_ok()
    assert ideal_table.signaling() < 1e-9


def test_table_invariants_random_config():
    table = probability_table(random_config(np.random.default_rng(4)))
    assert table.normalization_error() < 1e-9
    assert table.positivity_ok()
    assert table.signaling() < 1e-9


def test_signaling_detector_notices_tampering(ideal_table):
    v = ideal_table.values.copy()
    v[0, 0, 0, 0, 0, 0, 0, 0] += 0.01
    v[0, 0, 0, 0, 0, 0, 0, 1] -= 0.01
    from dicert.network import ProbabilityTable
    t = ProbabilityTable(v, ideal_table.settings, ideal_table.outcomes, "x")
    assert t.signaling() > 1e-3


def test_star_block_closed_form():
    rho = isotropic(0.8)
    table = probability_table(canonical_config(rho))
    star = table.star_block()
    for z in (1, 2, 3):
        for w in (1, 2, 3):
            for ci, c in enumerate((1, -1)):
                for di, d in enumerate((1, -1)):
                    ref = np.trace(np.kron(pauli_projector(c, z), pauli_projector(d, w)) @ rho.matrix).real / 16
                    assert abs(star[z - 1, w - 1, ci, di] - ref) < 1e-12


def test_left_marginal_matches_two_party_computation(ideal_table):
    cfg = canonical_config(isotropic(1.0), 0.7)
    table = probability_table(cfg)
    marg = table.values.sum(axis=(6, 7))[:, :6, 0, 0]  # (z, x, c, a)
    for z in (1, 2, 3):
        for x in range(1, 7):
            O = ROTATED_OBSERVABLES[x - 1]
            for ci, c in enumerate((1, -1)):
                for ai, a in enumerate((1, -1)):
                    eff = np.kron(pauli_projector(c, z), (np.eye(2) + a * O) / 2)
                    ref = np.trace(eff @ cfg.rho_CA0.matrix).real
                    assert abs(marg[z - 1, x - 1, ci, ai] - ref) < 1e-10


def test_digest_is_stable(ideal_config):
    assert ideal_config.digest() == canonical_config(isotropic(1.0), 1.0).digest()
    assert ideal_config.digest() != canonical_config(isotropic(0.9), 1.0).digest()


def test_high_dimensional_config():
    cfg = canonical_config(isotropic(0.9, d=4))
    assert cfg.charlie.effects.shape == (9, 4, 4, 4)
    assert cfg.alice.settings == (STAR,)
    table = probability_table(cfg)
    assert table.normalization_error() < 1e-9 and table.signaling() < 1e-9
    p = table.values[0, 0, 0, 0, 0, 0, 0, 0]
    assert abs(p - direct_joint_probability(cfg, ((1, 1), STAR, STAR, (1, 1)), ((1, 1), 1, 1, (1, 1)))) < 1e-12
