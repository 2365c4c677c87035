"""Four-party network C - A0|A - B|B0 - D and its probability engine.

Global subsystem order is C, A0, A, B, B0, D. Alice's effects act on
(A0, A), Bob's on (B, B0). Charlie and Daisy measure their halves of the
auxiliary pairs ``rho_CA0`` and ``rho_B0D``.

Probabilities are computed by steering: Charlie's effect turns ``rho_CA0``
into an unnormalized conditional state on A0 (likewise Daisy on B0), so each
entry only needs a trace over A0 A B B0.
"""
import hashlib
from dataclasses import dataclass
from itertools import product

import numpy as np

from .exceptions import DimensionError
from .qmath import PAULI_X, PAULI_Y, PAULI_Z, check_dims, partial_trace, tensor
from .states import DensityMatrix, as_density, phi_plus_projector
from .witness import num_qubits, projector_family

STAR = "*"
PSD_FLOOR = -1e-7
COMPLETENESS_TOL = 1e-9
PROBABILITY_SLACK = 1e-12
SIGNALING_TOL = 1e-9

ROTATED_OBSERVABLES = tuple(o / np.sqrt(2) for o in (
    PAULI_Z + PAULI_X, PAULI_Z - PAULI_X,
    PAULI_Z + PAULI_Y, PAULI_Z - PAULI_Y,
    PAULI_X + PAULI_Y, PAULI_X - PAULI_Y,
))


@dataclass(frozen=True, eq=False)
class MeasurementFamily:
    """Indexed POVMs: ``effects[setting, outcome]`` acting on ``dims``."""

    effects: np.ndarray
    dims: tuple
    settings: tuple
    outcomes: tuple

    def __post_init__(self):
        eff = np.array(self.effects, dtype=complex)
        if eff.ndim != 4 or eff.shape[2] != eff.shape[3]:
            raise DimensionError(f"effects must have shape (settings, outcomes, D, D), got {eff.shape}")
        dims = check_dims(self.dims, eff.shape[2])
        if len(self.settings) != eff.shape[0] or len(self.outcomes) != eff.shape[1]:
            raise DimensionError("setting/outcome labels do not match the effect array")
        ident = np.eye(eff.shape[2])
        for s, povm in zip(self.settings, eff):
            if np.max(np.abs(povm.sum(axis=0) - ident)) > COMPLETENESS_TOL:
                raise ValueError(f"effects of setting {s!r} do not sum to identity")
            for E in povm:
                if np.max(np.abs(E - E.conj().T)) > COMPLETENESS_TOL:
                    raise ValueError(f"setting {s!r} has a non-Hermitian effect")
                if np.linalg.eigvalsh((E + E.conj().T) / 2)[0] < PSD_FLOOR:
                    raise ValueError(f"setting {s!r} has a non-positive effect")
        eff.setflags(write=False)
        object.__setattr__(self, "effects", eff)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))

    def setting_index(self, label):
        try:
            return self.settings.index(label)
        except ValueError:
            raise ValueError(f"unknown setting {label!r}; expected one of {self.settings}") from None

    def outcome_index(self, label):
        try:
            return self.outcomes.index(label)
        except ValueError:
            raise ValueError(f"unknown outcome {label!r}; expected one of {self.outcomes}") from None

    def effect(self, setting, outcome):
        return self.effects[self.setting_index(setting), self.outcome_index(outcome)]


@dataclass(frozen=True, eq=False)
class NetworkConfig:
    rho_CA0: DensityMatrix
    rho_AB: DensityMatrix
    rho_B0D: DensityMatrix
    charlie: MeasurementFamily
    alice: MeasurementFamily
    bob: MeasurementFamily
    daisy: MeasurementFamily

    def __post_init__(self):
        dC, dA0 = self.rho_CA0.dims
        dA, dB = self.rho_AB.dims
        dB0, dD = self.rho_B0D.dims
        expected = {"charlie": (dC,), "alice": (dA0, dA), "bob": (dB, dB0), "daisy": (dD,)}
        for name, dims in expected.items():
            got = getattr(self, name).dims
            if got != dims:
                raise DimensionError(f"{name} acts on dims {got}, network expects {dims}")

    @property
    def dims(self):
        """Dimensions of C, A0, A, B, B0, D."""
        return self.rho_CA0.dims + self.rho_AB.dims + self.rho_B0D.dims

    def parties(self):
        return (self.charlie, self.alice, self.bob, self.daisy)

    def digest(self):
        h = hashlib.sha256()
        for arr in (self.rho_CA0.matrix, self.rho_AB.matrix, self.rho_B0D.matrix,
                    *(f.effects for f in self.parties())):
            h.update(np.ascontiguousarray(np.round(arr, 12) + 0.0).tobytes())
        return h.hexdigest()[:16]


def _two_outcome(observables):
    ident = np.eye(observables[0].shape[0])
    return np.array([[(ident + O) / 2, (ident - O) / 2] for O in observables])


def _aux_state(d, visibility):
    if not 0 <= visibility <= 1:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility}")
    n = d * d
    return DensityMatrix(visibility * phi_plus_projector(d) + (1 - visibility) * np.eye(n) / n, (d, d))


def _source_family(d):
    """Charlie/Daisy: Pauli projectors, tensor products of them for d = 2^N."""
    n = num_qubits(d)
    fam = projector_family(d)
    if n == 1:
        return MeasurementFamily(fam, (d,), (1, 2, 3), (+1, -1))
    settings = tuple(product((1, 2, 3), repeat=n))
    outcomes = tuple(product((+1, -1), repeat=n))
    return MeasurementFamily(fam, (d,), settings, outcomes)


def _star_povm(d):
    bell = phi_plus_projector(d)
    return np.array([bell, np.eye(d * d) - bell])


def canonical_config(rho_AB, visibility_aux=1.0):
    """Ideal strategy with white noise of visibility ``visibility_aux`` on both pairs.

    For qubits Alice and Bob get the six rotated Pauli observables (settings
    1-6, on A0 / B0 only) plus the Bell-projector measurement ``STAR``. For
    local dimension 2^N (N > 1) only ``STAR`` is provided.
    """
    rho_AB = as_density(rho_AB)
    if len(rho_AB.dims) != 2:
        raise DimensionError("rho_AB must be bipartite")
    dA, dB = rho_AB.dims
    charlie, daisy = _source_family(dA), _source_family(dB)
    if dA == 2 and dB == 2:
        local = _two_outcome(ROTATED_OBSERVABLES)
        eye2 = np.eye(2)
        alice_eff = np.concatenate([np.einsum("xaij,kl->xaikjl", local, eye2).reshape(6, 2, 4, 4),
                                    _star_povm(2)[None]])
        bob_eff = np.concatenate([np.einsum("kl,xaij->xakilj", eye2, local).reshape(6, 2, 4, 4),
                                  _star_povm(2)[None]])
        settings = (1, 2, 3, 4, 5, 6, STAR)
    else:
        alice_eff, bob_eff = _star_povm(dA)[None], _star_povm(dB)[None]
        settings = (STAR,)
    return NetworkConfig(
        rho_CA0=_aux_state(dA, visibility_aux),
        rho_AB=rho_AB,
        rho_B0D=_aux_state(dB, visibility_aux),
        charlie=charlie,
        alice=MeasurementFamily(alice_eff, (dA, dA), settings, (+1, -1)),
        bob=MeasurementFamily(bob_eff, (dB, dB), settings, (+1, -1)),
        daisy=daisy,
    )


def conjugate_config(cfg, wing):
    """Swap a wing to the complex-conjugate strategy (sigma_y -> -sigma_y).

    ``wing="charlie"`` conjugates Charlie's effects and Alice's non-STAR
    effects; ``wing="daisy"`` does the same for Daisy and Bob. The wing's
    own statistics are unchanged on a real auxiliary state, while Alice (Bob)
    now receives transposed inputs.
    """
    if wing not in ("charlie", "daisy"):
        raise ValueError(f"wing must be 'charlie' or 'daisy', got {wing!r}")
    source = getattr(cfg, wing)
    partner_name = "alice" if wing == "charlie" else "bob"
    partner = getattr(cfg, partner_name)
    partner_eff = partner.effects.copy()
    for i, s in enumerate(partner.settings):
        if s != STAR:
            partner_eff[i] = partner_eff[i].conj()
    changes = {
        wing: MeasurementFamily(source.effects.conj(), source.dims, source.settings, source.outcomes),
        partner_name: MeasurementFamily(partner_eff, partner.dims, partner.settings, partner.outcomes),
    }
    fields = {k: getattr(cfg, k) for k in ("rho_CA0", "rho_AB", "rho_B0D", "charlie", "alice", "bob", "daisy")}
    fields.update(changes)
    return NetworkConfig(**fields)


def steering_operator(rho_aux, effect, measured=0):
    """tr_measured[(effect on the measured side) rho_aux]: unnormalized conditional state."""
    rho_aux = as_density(rho_aux)
    if len(rho_aux.dims) != 2 or measured not in (0, 1):
        raise DimensionError("steering needs a bipartite state and measured side 0 or 1")
    effect = np.asarray(effect)
    d = rho_aux.dims[measured]
    if effect.shape != (d, d):
        raise DimensionError(f"effect shape {effect.shape} does not match side dimension {d}")
    other = np.eye(rho_aux.dims[1 - measured])
    lifted = tensor(effect, other) if measured == 0 else tensor(other, effect)
    return partial_trace(lifted @ rho_aux.matrix, rho_aux.dims, keep=[1 - measured])


def joint_probability(cfg, setting, outcome):
    """p(c, a, b, d | z, x, y, w) for one setting/outcome tuple (party labels)."""
    z, x, y, w = setting
    c, a, b, d = outcome
    sigma = steering_operator(cfg.rho_CA0, cfg.charlie.effect(z, c), measured=0)
    tau = steering_operator(cfg.rho_B0D, cfg.daisy.effect(w, d), measured=1)
    state = tensor(sigma, cfg.rho_AB.matrix, tau)
    effect = tensor(cfg.alice.effect(x, a), cfg.bob.effect(y, b))
    return float(np.real(np.trace(effect @ state)))


def _steered_families(cfg):
    dC, dA0 = cfg.rho_CA0.dims
    dB0, dD = cfg.rho_B0D.dims
    R1 = cfg.rho_CA0.matrix.reshape(dC, dA0, dC, dA0)
    R2 = cfg.rho_B0D.matrix.reshape(dB0, dD, dB0, dD)
    sig = np.einsum("zcij,jkil->zckl", cfg.charlie.effects, R1)
    tau = np.einsum("wdij,kjli->wdkl", cfg.daisy.effects, R2)
    return sig, tau


def _probability_values(cfg):
    dA0, dA = cfg.alice.dims
    dB, dB0 = cfg.bob.dims
    sig, tau = _steered_families(cfg)
    EA = cfg.alice.effects.reshape(cfg.alice.effects.shape[:2] + (dA0, dA, dA0, dA))
    EB = cfg.bob.effects.reshape(cfg.bob.effects.shape[:2] + (dB, dB0, dB, dB0))
    # effective POVMs on A and B after conditioning on Charlie / Daisy
    a_eff = np.einsum("xaRrSs,zcSR->zcxars", EA, sig)
    b_eff = np.einsum("ybrRsS,wdSR->wdybrs", EB, tau)
    rho = cfg.rho_AB.matrix.reshape(dA, dB, dA, dB)
    p = np.einsum("zcxars,wdybuv,svru->zxywcabd", a_eff, b_eff, rho, optimize=True)
    return p.real


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """p(c,a,b,d|z,x,y,w), axes (z, x, y, w, c, a, b, d)."""

    values: np.ndarray
    settings: tuple  # per party: charlie, alice, bob, daisy
    outcomes: tuple
    digest: str

    def setting_axis(self, party):
        return self.settings[party]

    def star_block(self):
        """p(c, +, +, d | z, STAR, STAR, w) with axes (z, w, c, d)."""
        x = self.settings[1].index(STAR)
        y = self.settings[2].index(STAR)
        return self.values[:, x, y, :, :, 0, 0, :]

    def normalization_error(self):
        return float(np.max(np.abs(self.values.sum(axis=(4, 5, 6, 7)) - 1)))

    def positivity_ok(self):
        v = self.values
        return bool(v.min() >= -PROBABILITY_SLACK and v.max() <= 1 + PROBABILITY_SLACK)

    def signaling(self):
        """Largest dependence of any party subset's marginal on the others' settings."""
        worst = 0.0
        for keep in product((True, False), repeat=4):
            drop = [k for k in range(4) if not keep[k]]
            if not drop:
                continue
            marg = self.values.sum(axis=tuple(4 + k for k in drop), keepdims=True)
            ref = marg
            for k in drop:
                ref = np.take(ref, [0], axis=k)
            worst = max(worst, float(np.max(np.abs(marg - ref))))
        return worst

    def rows(self):
        """Yield (z, x, y, w, c, a, b, d, p) with party labels."""
        S, O = self.settings, self.outcomes
        for idx in np.ndindex(*self.values.shape):
            labels = [S[k][idx[k]] for k in range(4)] + [O[k][idx[4 + k]] for k in range(4)]
            yield (*labels, float(self.values[idx]))


def probability_table(cfg):
    values = _probability_values(cfg)
    parties = cfg.parties()
    return ProbabilityTable(
        values=values,
        settings=tuple(f.settings for f in parties),
        outcomes=tuple(f.outcomes for f in parties),
        digest=cfg.digest(),
    )
