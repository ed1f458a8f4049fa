"""Proxy-qubit quantum clock synchronization: simulation and collapse-hypersurface inference."""

from .probs import JointCounts, JointProbs
from .protocol import (
    DirectMeasurement,
    HypersurfaceCollapse,
    ProtocolConfig,
    StandardQM,
    TrialRecord,
    analytic_joint,
    effective_collapse_time,
    model_joint,
    oracle_joint,
    run_trial,
    run_trials,
)

__version__ = "0.1.0"
