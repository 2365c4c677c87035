"""scikit-learn style front end for network entanglement certification."""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .certify import DETECTION_MARGIN, certification_functional
from .exceptions import DimensionError
from .network import canonical_config, probability_table
from .selftest import DEFAULT_TOLERANCE, selftest_check, supports_selftest
from .validation import check_state_batch, check_visibility
from .witness import WitnessSpec, witness_from_state


class EntanglementCertifier(TransformerMixin, BaseEstimator):
    """Certify entanglement of bipartite states from simulated network statistics.

    ``fit`` takes the target state and builds its witness (unless one is
    given). ``transform`` maps states to the star-setting probabilities
    p(c, +, +, d | z, STAR, STAR, w) flattened in (c, d, z, w) order, so that
    ``decision_function`` is the linear functional I = features @ omega.
    ``predict`` flags a state as entangled when the self-test passes and
    I < -detection_margin.

    Parameters
    ----------
    visibility_aux : float
        White-noise visibility of both auxiliary Bell pairs.
    selftest_tolerance : float
        Allowed distance of each wing's chained CHSH value from 6 sqrt(2).
    witness : WitnessSpec, array or None
        Explicit witness. Needed for PPT-entangled targets.
    detection_margin : float
    """

    def __init__(self, visibility_aux=1.0, selftest_tolerance=DEFAULT_TOLERANCE, witness=None,
                 detection_margin=DETECTION_MARGIN):
        self.visibility_aux = visibility_aux
        self.selftest_tolerance = selftest_tolerance
        self.witness = witness
        self.detection_margin = detection_margin

    def fit(self, X, y=None):
        states = check_state_batch(X)
        if len(states) != 1:
            raise ValueError(f"fit expects a single target state, got {len(states)}")
        target = states[0]
        check_visibility(self.visibility_aux)
        if self.witness is None:
            ws = witness_from_state(target)
        elif isinstance(self.witness, WitnessSpec):
            ws = self.witness
        else:
            ws = WitnessSpec(np.asarray(self.witness), target.dims)
        if ws.dims != target.dims:
            raise DimensionError(f"witness dims {ws.dims} != state dims {target.dims}")
        self.witness_ = ws
        self.omega_ = ws.omega
        self.dims_ = target.dims
        table = probability_table(canonical_config(target, self.visibility_aux))
        self.selftest_ = selftest_check(table, self.selftest_tolerance) if supports_selftest(table) else None
        self.n_features_in_ = target.dim * target.dim
        return self

    def _tables(self, X):
        check_is_fitted(self, "witness_")
        for rho in check_state_batch(X, self.dims_):
            yield probability_table(canonical_config(rho, self.visibility_aux))

    def transform(self, X):
        feats = [t.star_block().transpose(2, 3, 0, 1).ravel() for t in self._tables(X)]
        return np.array(feats)

    def decision_function(self, X):
        return np.array([certification_functional(t, self.omega_) for t in self._tables(X)])

    def predict(self, X):
        check_is_fitted(self, "witness_")
        passed = self.selftest_ is None or self.selftest_.passed
        return (self.decision_function(X) < -self.detection_margin) & passed
