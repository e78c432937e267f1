"""Variance-reduced evaluation-metric estimation from labeled outcomes plus
auxiliary pairwise-comparison signals."""

from .core import (AuxTriple, BenchRecord, MetricKind, SimRecord,
                   accuracy_metric, squared_error_metric)
from .errors import (AuxevalError, ContractError, DegenerateSignalError,
                     EmptyDatasetError, InvalidFoldsError, InvalidInputError,
                     MissingTauError, SingularDesignError, UndefinedVRError)
from .estimate import (EstimateReport, InfluenceBreakdown, confidence_interval,
                       empirical_vr, improvement_metric, influence_score,
                       integrated_regression_mc, naive_estimate,
                       one_step_crossfit, one_step_fixed, one_step_from_scores,
                       orthogonality_stat)
from .nuisance import (ClampCounter, CrossFitResult, FoldAssignment,
                       RegressorHandle, build_features, cross_fit_tau,
                       external_tau, fit_ols, make_folds)
from .ranking import (RankingSummary, exact_match, kendall_tau, rank_models,
                      run_ranking_experiment, sweep)
from .simulate import (OracleParams, SimConfig, SimDataset, as_sim_dataset,
                       child_stream, gen_sim_dataset, kappa, oracle_influence,
                       oracle_m, oracle_params_for, oracle_tau,
                       preference_label, r_squared, theoretical_variances)

__version__ = "0.1.0"
