"""Relational feature mining, GRASP feature selection and a subspace ensemble
of naive Bayes models."""

from .bayes import NBModel, SubsetScorer, discriminant, err, fit, posterior, predict
from .ensemble import Ensemble, rsm_fit, rsm_predict
from .errors import ConfigError, DataError, FitError, ParseError, RelpropError
from .evaluate import EvalReport, PipelineConfig, cross_validate
from .grasp import GraspConfig, Solution, construct, grasp_fs, local_search
from .logic import Atom, BiasDecl, Dataset, Example, Query, Term
from .metrics import auc_pr, auc_roc
from .miner import FeatureSet, MiningConfig, mine, refine
from .parsing import parse_dataset, parse_query
from .propmat import FeatureMatrix, build_matrix
from .subsume import oi_equivalent, oi_subsumes

__version__ = "0.1.0"
