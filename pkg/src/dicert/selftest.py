"""Chained triple-CHSH self-test on each wing of the network.

Correlators are indexed source-first: ``E[z, x]`` pairs Charlie's setting
``z`` with Alice's setting ``x`` (Daisy's ``w`` with Bob's ``y`` on the right
wing).
"""
from dataclasses import dataclass, asdict
from itertools import product

import numpy as np

from .exceptions import SignalingError
from .network import STAR

QUANTUM_VALUE = 6 * np.sqrt(2)
CLASSICAL_BOUND = 6
DEFAULT_TOLERANCE = 1e-6
SIGNALING_ERROR = 1e-7

# (sign, z, x) per line, 1-based labels
CHAINED_LINES = (
    ((+1, 1, 1), (+1, 1, 2), (+1, 2, 1), (-1, 2, 2)),
    ((+1, 1, 3), (+1, 1, 4), (-1, 3, 3), (+1, 3, 4)),
    ((+1, 2, 5), (+1, 2, 6), (-1, 3, 5), (+1, 3, 6)),
)


@dataclass(frozen=True, eq=False)
class WingMarginal:
    """p(source, partner | s, x) with axes (s in 1..3, x in 1..6, outcome, outcome)."""

    values: np.ndarray
    signaling: float = 0.0

    def correlators(self):
        signs = np.array([1, -1])
        return np.einsum("zxca,c,a->zx", self.values, signs, signs)


@dataclass(frozen=True)
class SelfTestReport:
    J_left: float
    J_right: float
    target: float
    tolerance: float
    passed: bool

    @property
    def deficit(self):
        """Shortfall of the weaker wing from the quantum value."""
        return self.target - min(self.J_left, self.J_right)

    def to_dict(self):
        return {**asdict(self), "deficit": self.deficit}


def wing_marginal(table, wing):
    """Two-party marginal of the left (Charlie-Alice) or right (Daisy-Bob) wing.

    Raises SignalingError if the marginal depends on the other wing's
    settings by more than 1e-7.
    """
    v = table.values
    if wing == "left":
        x_idx = [table.settings[1].index(x) for x in range(1, 7)]
        m = v.sum(axis=(6, 7))[:, x_idx]           # (z, x, y, w, c, a)
        m = m.transpose(2, 3, 0, 1, 4, 5)           # (y, w, z, x, c, a)
    elif wing == "right":
        y_idx = [table.settings[2].index(y) for y in range(1, 7)]
        m = v.sum(axis=(4, 5))[:, :, y_idx]         # (z, x, y, w, b, d)
        m = m.transpose(0, 1, 3, 2, 5, 4)           # (z, x, w, y, d, b)
    else:
        raise ValueError(f"wing must be 'left' or 'right', got {wing!r}")
    ref = m[0, 0]
    drift = float(np.max(np.abs(m - ref)))
    if drift > SIGNALING_ERROR:
        raise SignalingError(f"{wing} marginal depends on remote settings (drift {drift:.3g})")
    return WingMarginal(values=ref, signaling=drift)


def _line_values(E):
    return [sum(s * E[z - 1, x - 1] for s, z, x in line) for line in CHAINED_LINES]


def chained_chsh_lines(m):
    return _line_values(m.correlators())


def chained_chsh(m):
    """The twelve-correlator chained CHSH value J."""
    return float(sum(chained_chsh_lines(m)))


def classical_bound_bruteforce(lines=None):
    """Maximum of J over all 2^3 * 2^6 deterministic assignments.

    Returns ``(maximum, maximizing assignment)`` where the assignment is the
    pair (source outputs for z = 1..3, partner outputs for x = 1..6).
    ``lines`` restricts the functional to a subset of the three CHSH lines.
    """
    chosen = CHAINED_LINES if lines is None else [CHAINED_LINES[i] for i in lines]
    best, arg = -np.inf, None
    for src in product((1, -1), repeat=3):
        for dst in product((1, -1), repeat=6):
            val = sum(s * src[z - 1] * dst[x - 1] for line in chosen for s, z, x in line)
            if val > best:
                best, arg = val, (src, dst)
    return best, arg


def selftest_check(table, tolerance=DEFAULT_TOLERANCE):
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    J_left = chained_chsh(wing_marginal(table, "left"))
    J_right = chained_chsh(wing_marginal(table, "right"))
    passed = abs(J_left - QUANTUM_VALUE) <= tolerance and abs(J_right - QUANTUM_VALUE) <= tolerance
    return SelfTestReport(J_left, J_right, float(QUANTUM_VALUE), float(tolerance), bool(passed))


def supports_selftest(table):
    """Whether both wings carry the six rotated settings the functional needs."""
    need = set(range(1, 7))
    return need <= set(table.settings[1]) and need <= set(table.settings[2]) \
        and tuple(table.settings[0]) == (1, 2, 3) and tuple(table.settings[3]) == (1, 2, 3)
