import logging

import numpy as np

from bofdb.errors import DimensionMismatch, SingleClassData
from bofdb.svm.binary_svm import BinarySvm, train_binary
from bofdb.svm.svm_config import SvmConfig

logger = logging.getLogger(__name__)


class SvmModel:
    """One-vs-rest set of binary SVMs

    Args:
        machines (list): one bofdb.BinarySvm per class, in class_labels
            order
        class_labels (list): the ordered class labels
        dictionary_id (int, optional): id of the dictionary the model was
            trained against. Defaults to None.
        config (bofdb.SvmConfig, optional): the training hyperparameters.
            Defaults to None.
    """

    def __init__(self, machines, class_labels, dictionary_id=None, config=None) -> None:
        self.machines = machines
        self.class_labels = list(class_labels)
        if len(self.class_labels) != len(self.machines):
            raise ValueError("one machine per class label is required")
        dims = {m.dim for m in self.machines}
        if len(dims) != 1:
            raise ValueError("all machines must share the same input dimension")
        self.dictionary_id = dictionary_id
        self.config = config

    @property
    def machines(self):
        return self._machines

    @machines.setter
    def machines(self, value):
        if not isinstance(value, list) or len(value) == 0:
            raise ValueError("machines must be a non-empty list")
        if not all(isinstance(m, BinarySvm) for m in value):
            raise TypeError("machines must be a list of bofdb.BinarySvm")
        self._machines = value

    @property
    def dim(self):
        return self._machines[0].dim

    def decision_values(self, x):
        """Decision value of every machine for the input x

        Raises:
            DimensionMismatch: if x has the wrong size

        Returns:
            np.ndarray: one value per class, in class_labels order
        """
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.dim:
            raise DimensionMismatch(
                "expected an input of size {}, got shape {}".format(self.dim, x.shape)
            )
        return np.array([m.decision_values(x)[0] for m in self._machines])


def train_one_vs_rest(X, labels, cfg=None, seed=0, dictionary_id=None):
    """Trains one binary SVM per class (that class +1, the rest -1)

    Args:
        X (np.ndarray): the inputs, shape (n, dim)
        labels (list): the class label of each input
        cfg (bofdb.SvmConfig, optional): hyperparameters. Defaults to
            SvmConfig().
        seed (int, optional): the seed passed to every machine. Defaults
            to 0.
        dictionary_id (int, optional): attached to the model. Defaults to
            None.

    Raises:
        SingleClassData: if fewer than two classes are present

    Returns:
        SvmModel: the trained model with class labels in sorted order
    """
    cfg = SvmConfig() if cfg is None else cfg
    labels = list(labels)
    class_labels = sorted(set(labels))
    if len(class_labels) < 2:
        raise SingleClassData("at least two classes are required")
    machines = []
    for label in class_labels:
        y = np.array([1.0 if l == label else -1.0 for l in labels])
        machines.append(train_binary(X, y, cfg, seed=seed, class_label=label))
    logger.info("trained %d one-vs-rest machines", len(machines))
    return SvmModel(machines, class_labels, dictionary_id=dictionary_id, config=cfg)


def predict_class(model, x):
    """Class whose machine gives the largest decision value

    Ties go to the first class in model.class_labels.

    Args:
        model (SvmModel): the model
        x (np.ndarray): the input

    Raises:
        DimensionMismatch: if x has the wrong size

    Returns:
        the predicted class label
    """
    values = model.decision_values(x)
    return model.class_labels[int(np.argmax(values))]
