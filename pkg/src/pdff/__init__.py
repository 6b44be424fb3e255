"""Planar reaching with adaptive-exploration policy search.

An evolution strategy adapts one Gaussian search distribution per joint by
cost-weighted averaging.  Because the reach cost is far more sensitive to
proximal joints than to distal ones, exploration concentrates on the
shoulder-side joints first and wanders outward as learning proceeds, a
proximodistal freezing and freeing of the arm's degrees of freedom.  The
package provides the arm model, acceleration policies, the reaching cost,
the optimizer, campaign statistics with time-warped variance, two static
posture analyses, chart/CSV serialization, and a command-line front end.
"""

from .analysis import (
    DEFAULT_PERTURBATION,
    InteractionReport,
    SensitivityReport,
    interaction_ratios,
    sensitivity,
)
from .arm import (
    HUMAN_LINK_LENGTHS,
    MORPHOLOGIES,
    ArmModel,
    Morphology,
    TargetSet,
    default_targets,
    end_effector_positions,
    forward_kinematics,
    load_morphologies,
)
from .config import OUTPUT_DIR_ENV, ConfigError, RunConfig, load_config
from .cost import CostBreakdown, CostWeights, evaluate_cost, static_distance_cost
from .experiment import (
    AlignedVariance,
    CampaignResult,
    aligned_variance,
    dtw_align,
    dtw_distance,
    freeing_order,
    run_campaign,
)
from .optimizer import (
    BlackboxTrace,
    ExplorationState,
    OptimizerConfig,
    SampleBatch,
    SearchDistribution,
    SessionTrace,
    costs_to_weights,
    exploration_state,
    run_blackbox_session,
    run_session,
    sample_batch,
    update_distribution,
)
from .policy import (
    BasisFunctionSet,
    Trajectory,
    activation_matrix,
    basis_activations,
    rollout,
    time_grid,
)

__version__ = "0.1.0"
