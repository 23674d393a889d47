import numpy as np
from scipy.spatial.distance import cdist


def kernel_matrix(kernel, a, b, gamma=None):
    """Kernel values between the rows of a and the rows of b

    Args:
        kernel (str): "linear" or "rbf"
        a (np.ndarray): array of shape (n, d)
        b (np.ndarray): array of shape (m, d)
        gamma (float, optional): RBF width. Defaults to None.

    Returns:
        np.ndarray: array of shape (n, m)
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if kernel == "linear":
        return a @ b.T
    if kernel == "rbf":
        return np.exp(-gamma * cdist(a, b, metric="sqeuclidean"))
    raise ValueError("unknown kernel {}".format(kernel))
