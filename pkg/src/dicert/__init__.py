"""Device-independent certification of bipartite entanglement in a four-party network."""
from .certify import (CertificationReport, SweepRecord, certification_functional,
                      detection_threshold, noise_sweep, run_pipeline, separable_baseline)
from .estimator import EntanglementCertifier
from .network import (STAR, MeasurementFamily, NetworkConfig, ProbabilityTable, canonical_config,
                      conjugate_config, joint_probability, probability_table, steering_operator)
from .selftest import QUANTUM_VALUE, SelfTestReport, chained_chsh, classical_bound_bruteforce, \
    selftest_check, wing_marginal
from .states import DensityMatrix, bell_phi_plus, is_entangled_ppt, isotropic, pauli_eigenstate, \
    random_separable
from .witness import WitnessSpec, decompose_pauli, verify_witness, witness_from_state

__version__ = "0.1.0"
