"""Document-term matrices, LSA, correspondence analysis and nearest-group text categorization."""

from .ca import CaModel, CoordKind, chi2_distance, fit_ca, standardized_residuals
from .classify import GroupDistanceMethod, LabeledEmbedding, classify, group_distance
from .dtm import DocTermMatrix, PreprocessOptions, align_query, build_matrix, load_matrix, save_matrix
from .errors import DtmfError
from .evaluate import LOOCV, EvalReport, EvalSpec, KFold, TrainTest, run_eval, sweep_report
from .linalg import SvdResult, explained_proportions, reconstruct, svd, truncate
from .lsa import LsaModel, fit_lsa
from .persist import load_model, save_model
from .weighting import FittedWeights, WeightKind, WeightSpec, apply_weights, fit_weights, weight_query

__version__ = "0.1.0"
