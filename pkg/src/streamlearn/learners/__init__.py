from .bagging import LeverageBaggingClassifier, OzaBaggingClassifier
from .baselines import MajorityClassClassifier, NoChangeClassifier
from .hoeffding_tree import HoeffdingTreeClassifier, hoeffding_bound
from .knn import KNNADWINClassifier, KNNClassifier, WindowBuffer
from .multi_output import MultiOutputLearner
from .naive_bayes import GaussianNaiveBayes

LEARNERS = {
    "majority_class": MajorityClassClassifier,
    "no_change": NoChangeClassifier,
    "naive_bayes": GaussianNaiveBayes,
    "knn": KNNClassifier,
    "knn_adwin": KNNADWINClassifier,
    "hoeffding_tree": HoeffdingTreeClassifier,
    "oza_bagging": OzaBaggingClassifier,
    "leverage_bagging": LeverageBaggingClassifier,
    "multi_output": MultiOutputLearner,
}

__all__ = [
    "GaussianNaiveBayes", "HoeffdingTreeClassifier", "KNNADWINClassifier", "KNNClassifier",
    "LEARNERS", "LeverageBaggingClassifier", "MajorityClassClassifier", "MultiOutputLearner",
    "NoChangeClassifier", "OzaBaggingClassifier", "WindowBuffer", "hoeffding_bound",
]
