import logging
import warnings

import numpy as np

from bofdb.errors import DimensionMismatch, SingleClassData
from bofdb.helpers import SplitMix64
from bofdb.svm.kernels import kernel_matrix
from bofdb.svm.svm_config import SvmConfig

logger = logging.getLogger(__name__)

# curvature floor for non positive definite pairs
TAU = 1e-12


class BinarySvm:
    """A trained two-class SVM

    f(x) = sum_i alphas_i K(support_vectors_i, x) + bias

    Args:
        support_vectors (np.ndarray): array of shape (n_sv, dim)
        alphas (np.ndarray): dual coefficients with the label sign folded
            in, one per support vector
        bias (float): the bias
        kernel (str, optional): "linear" or "rbf". Defaults to "linear".
        gamma (float, optional): RBF width. Defaults to None.
        class_label (str, optional): the class this machine recognises.
            Defaults to None.
        weights (np.ndarray, optional): cached primal weights for the
            linear kernel. Computed if None. Defaults to None.

    Attributes:
        train_alphas (np.ndarray): unsigned dual variables of every
            training point, only set by train_binary
        dual_objective_history (list): dual objective after every accepted
            SMO pair update, only set by train_binary
        converged (bool): True if SMO met the tolerance
    """

    def __init__(
        self,
        support_vectors,
        alphas,
        bias,
        kernel="linear",
        gamma=None,
        class_label=None,
        weights=None,
    ) -> None:
        support_vectors = np.asarray(support_vectors, dtype=np.float64)
        alphas = np.asarray(alphas, dtype=np.float64).reshape(-1)
        if support_vectors.ndim != 2:
            raise ValueError("support_vectors must be a 2D array")
        if support_vectors.shape[0] != alphas.shape[0]:
            raise ValueError("one alpha per support vector is required")
        self.support_vectors = support_vectors
        self.alphas = alphas
        self.bias = float(bias)
        self.kernel = kernel
        self.gamma = gamma
        self.class_label = class_label
        if weights is None and kernel == "linear":
            weights = alphas @ support_vectors if alphas.size else None
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        self.train_alphas = None
        self.dual_objective_history = []
        self.converged = True

    @property
    def dim(self):
        return self.support_vectors.shape[1]

    def decision_values(self, X):
        """Decision values for each row of X

        Raises:
            DimensionMismatch: if X rows don't have self.dim components

        Returns:
            np.ndarray: f(x) for every row
        """
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise DimensionMismatch(
                "expected inputs of size {}, got shape {}".format(self.dim, X.shape)
            )
        if self.weights is not None:
            return X @ self.weights + self.bias
        if self.alphas.size == 0:
            return np.full(X.shape[0], self.bias)
        K = kernel_matrix(self.kernel, X, self.support_vectors, self.gamma)
        return K @ self.alphas + self.bias

    def kkt_residuals(self, X, y, c, alphas=None):
        """Violation of the KKT conditions at each training point

        Args:
            X (np.ndarray): the training inputs
            y (np.ndarray): the labels (-1 or +1)
            c (float): the regularisation constant used for training
            alphas (np.ndarray, optional): unsigned dual variables of the
                training points. Defaults to self.train_alphas.

        Returns:
            np.ndarray: a non-negative residual per point
        """
        alphas = self.train_alphas if alphas is None else np.asarray(alphas)
        margins = np.asarray(y, dtype=np.float64) * self.decision_values(X)
        residuals = np.abs(margins - 1.0)
        at_zero = alphas <= 0
        at_c = alphas >= c
        residuals[at_zero] = np.maximum(0.0, 1.0 - margins[at_zero])
        residuals[at_c] = np.maximum(0.0, margins[at_c] - 1.0)
        return residuals


def decision_value(m, x):
    """f(x) = sum_i alpha_i K(sv_i, x) + bias

    Args:
        m (BinarySvm): the machine
        x (np.ndarray): the input vector

    Raises:
        DimensionMismatch: if x has the wrong size

    Returns:
        float: the decision value
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("decision_value expects a single vector")
    return float(m.decision_values(x)[0])


def _as_training_set(X, y):
    try:
        X = np.asarray(X, dtype=np.float64)
    except ValueError:
        raise DimensionMismatch("all inputs must have the same dimension")
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if X.ndim != 2:
        raise DimensionMismatch("all inputs must have the same dimension")
    if X.shape[0] != y.shape[0]:
        raise ValueError("one label per input is required")
    if not np.all(np.isfinite(X)):
        raise ValueError("inputs must be finite")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if np.all(y == 1) or np.all(y == -1):
        raise SingleClassData("both labels -1 and +1 are required")
    return X, y


def train_binary(X, y, cfg=None, seed=0, class_label=None):
    """Trains a binary SVM with sequential minimal optimisation

    The working pair is the maximal violating pair of the dual. Ties
    between equally violating points are broken by a permutation drawn
    from seed. Training stops when the violation gap is below
    cfg.tolerance, which bounds the KKT residual of every training point by
    the tolerance.

    Args:
        X (np.ndarray): the inputs, shape (n, dim)
        y (np.ndarray): the labels, -1 or +1
        cfg (SvmConfig, optional): hyperparameters. Defaults to
            SvmConfig().
        seed (int, optional): seed of the tie-breaking order. Defaults
            to 0.
        class_label (str, optional): attached to the machine. Defaults to
            None.

    Raises:
        SingleClassData: if only one label is present
        DimensionMismatch: if the inputs have different sizes

    Returns:
        BinarySvm: the trained machine
    """
    cfg = SvmConfig() if cfg is None else cfg
    X, y = _as_training_set(X, y)
    n = X.shape[0]
    C = cfg.c
    K = kernel_matrix(cfg.kernel, X, X, cfg.gamma)
    Q = (y[:, None] * y[None, :]) * K
    diag = np.diag(K).copy()

    # rank used to break ties: smaller rank wins
    rank = np.empty(n, dtype=np.float64)
    rank[SplitMix64(seed).permutation(n)] = np.arange(n)

    alphas = np.zeros(n)
    gradient = -np.ones(n)
    history = []
    converged = False
    max_updates = cfg.max_passes * n

    for update in range(max_updates):
        scores = -y * gradient
        up = ((y > 0) & (alphas < C)) | ((y < 0) & (alphas > 0))
        low = ((y > 0) & (alphas > 0)) | ((y < 0) & (alphas < C))
        m_up = np.max(scores[up])
        m_low = np.min(scores[low])
        if m_up - m_low <= cfg.tolerance:
            converged = True
            break
        candidates = np.flatnonzero(up & (scores == m_up))
        i = int(candidates[np.argmin(rank[candidates])])
        candidates = np.flatnonzero(low & (scores == m_low))
        j = int(candidates[np.argmin(rank[candidates])])

        gap = m_up - m_low
        eta = diag[i] + diag[j] - 2.0 * K[i, j]
        if eta <= 0:
            eta = TAU
        bound_i = C - alphas[i] if y[i] > 0 else alphas[i]
        bound_j = alphas[j] if y[j] > 0 else C - alphas[j]
        step = min(gap / eta, bound_i, bound_j)

        alphas[i] += y[i] * step
        alphas[j] -= y[j] * step
        if step == bound_i:
            alphas[i] = C if y[i] > 0 else 0.0
        if step == bound_j:
            alphas[j] = 0.0 if y[j] > 0 else C
        gradient += step * (y[i] * Q[:, i] - y[j] * Q[:, j])

        history.append(0.5 * alphas.sum() - 0.5 * alphas @ gradient)

    if not converged:
        warnings.warn(
            "SMO stopped after {} pair updates without reaching tolerance {}".format(
                max_updates, cfg.tolerance
            ),
            RuntimeWarning,
        )

    scores = -y * gradient
    free = (alphas > 0) & (alphas < C)
    if np.any(free):
        bias = float(np.mean(scores[free]))
    else:
        up = ((y > 0) & (alphas < C)) | ((y < 0) & (alphas > 0))
        low = ((y > 0) & (alphas > 0)) | ((y < 0) & (alphas < C))
        bias = 0.5 * (float(np.max(scores[up])) + float(np.min(scores[low])))

    support = alphas > 0
    machine = BinarySvm(
        X[support],
        (alphas * y)[support],
        bias,
        kernel=cfg.kernel,
        gamma=cfg.gamma,
        class_label=class_label,
    )
    machine.train_alphas = alphas
    machine.dual_objective_history = history
    machine.converged = converged
    logger.debug(
        "SMO for class %s: %d updates, %d support vectors, converged=%s",
        class_label,
        len(history),
        int(support.sum()),
        converged,
    )
    return machine
