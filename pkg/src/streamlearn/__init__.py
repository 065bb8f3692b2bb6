"""Incremental learning on data streams: generators, learners, drift detectors, evaluators."""

from .core import (ConfigError, DetectionStatus, Instance, ParseError, SchemaError, Stream,
                   StreamModel, StreamSchema, UndeclaredClassError, instances_to_arrays)
from .drift import ADWIN, DDM, EDDM, PageHinkley
from .evaluation import (EvalConfig, EvaluationError, EvaluationRecord, MetricSet,
                         holdout_run, kappa_compute, prequential_run)
from .generators import (ConceptDriftStream, CSVStream, DataStream, MultiLabelGenerator,
                         RandomRBFGenerator, SEAGenerator, WaveformGenerator)
from .learners import (GaussianNaiveBayes, HoeffdingTreeClassifier, KNNADWINClassifier,
                       KNNClassifier, LeverageBaggingClassifier, MajorityClassClassifier,
                       MultiOutputLearner, NoChangeClassifier, OzaBaggingClassifier,
                       hoeffding_bound)

__version__ = "0.1.0"
