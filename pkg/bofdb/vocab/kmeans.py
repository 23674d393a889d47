import logging
import warnings

import numpy as np

from bofdb.errors import InvalidK, TooFewDistinctPoints
from bofdb.helpers import SplitMix64
from bofdb.vocab.dictionary import Dictionary

logger = logging.getLogger(__name__)

# relative slack allowed on the per-iteration SSE monotonicity check
SSE_SLACK = 1e-9


def _squared_distances(data, sq_norms, centers):
    # expanded form, the batch assignment is dominated by this product
    d2 = sq_norms[:, None] - 2.0 * data @ centers.T + np.sum(centers * centers, axis=1)[None, :]
    np.maximum(d2, 0.0, out=d2)
    return d2


class KMeans:
    """Lloyd's algorithm with k-means++ seeding and restarts

    Restart r is seeded with a SplitMix64 generator seeded with seed + r.
    Each restart stops when no assignment changes or after max_iter
    iterations. The restart with the lowest SSE wins (ties go to the
    earliest restart). Empty clusters are reseeded to the point farthest
    from its centre.

    Args:
        k (int): number of clusters
        seed (int, optional): the seed. Defaults to 0.
        restarts (int, optional): number of restarts. Defaults to 3.
        max_iter (int, optional): maximum Lloyd iterations per restart.
            Defaults to 100.

    Attributes:
        sse_history (list): for each restart, the list of SSE values after
            every iteration
        best_restart (int): index of the winning restart
        n_iter (list): number of iterations performed by each restart
    """

    def __init__(self, k, seed=0, restarts=3, max_iter=100) -> None:
        self.k = k
        self.seed = seed
        self.restarts = restarts
        self.max_iter = max_iter
        self.sse_history = []
        self.n_iter = []
        self.best_restart = None

    @property
    def k(self):
        return self._k

    @k.setter
    def k(self, value):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise TypeError("k must be an int")
        if value < 1:
            raise InvalidK("k must be >= 1, got {}".format(value))
        self._k = int(value)

    @property
    def restarts(self):
        return self._restarts

    @restarts.setter
    def restarts(self, value):
        if value < 1:
            raise ValueError("restarts must be >= 1")
        self._restarts = int(value)

    @property
    def max_iter(self):
        return self._max_iter

    @max_iter.setter
    def max_iter(self, value):
        if value < 1:
            raise ValueError("max_iter must be >= 1")
        self._max_iter = int(value)

    def fit(self, data):
        """Trains the dictionary

        Args:
            data (np.ndarray): array of shape (n, dim)

        Raises:
            ValueError: if data is empty or not finite
            TooFewDistinctPoints: if data has fewer than k distinct rows

        Returns:
            bofdb.Dictionary: the cluster centres of the best restart
        """
        data = np.ascontiguousarray(data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] == 0:
            raise ValueError("data must be a non-empty 2D array")
        if not np.all(np.isfinite(data)):
            raise ValueError("data must be finite")
        distinct = np.unique(data, axis=0).shape[0]
        if distinct < self.k:
            raise TooFewDistinctPoints(
                "k={} but data only has {} distinct points".format(self.k, distinct)
            )

        sq_norms = np.sum(data * data, axis=1)
        self.sse_history = []
        self.n_iter = []
        best_centers, best_sse = None, None
        for restart in range(self.restarts):
            rng = SplitMix64(self.seed + restart)
            centers = self._init_centers(data, sq_norms, rng)
            centers, sse_value, history = self._lloyd(data, sq_norms, centers)
            self.sse_history.append(history)
            self.n_iter.append(len(history))
            logger.debug(
                "restart %d: SSE %.6g after %d iterations", restart, sse_value, len(history)
            )
            if best_sse is None or sse_value < best_sse:
                best_centers, best_sse = centers, sse_value
                self.best_restart = restart
        logger.info(
            "k-means k=%d on %d points: best SSE %.6g (restart %d)",
            self.k,
            data.shape[0],
            best_sse,
            self.best_restart,
        )
        return Dictionary(best_centers)

    def _init_centers(self, data, sq_norms, rng):
        """k-means++ seeding"""
        n = data.shape[0]
        chosen = [rng.next_below(n)]
        # exact differences so that duplicates of a chosen centre weigh 0
        closest = np.sum((data - data[chosen[0]]) ** 2, axis=1)
        for _ in range(1, self.k):
            cumulative = np.cumsum(closest)
            total = cumulative[-1]
            if total <= 0:
                # only duplicates of chosen centres remain
                candidates = np.flatnonzero(closest > 0)
                idx = int(candidates[0]) if candidates.size else rng.next_below(n)
            else:
                target = rng.next_float() * total
                idx = int(np.searchsorted(cumulative, target, side="right"))
                idx = min(idx, n - 1)
            chosen.append(idx)
            d_new = np.sum((data - data[idx]) ** 2, axis=1)
            np.minimum(closest, d_new, out=closest)
        return data[chosen].copy()

    def _assign(self, data, sq_norms, centers):
        d2 = _squared_distances(data, sq_norms, centers)
        labels = np.argmin(d2, axis=1)
        return labels

    def _sse(self, data, centers, labels):
        diff = data - centers[labels]
        return float(np.sum(diff * diff))

    def _lloyd(self, data, sq_norms, centers):
        history = []
        labels = self._assign(data, sq_norms, centers)
        previous_sse = self._sse(data, centers, labels)
        for iteration in range(self.max_iter):
            centers = self._update_centers(data, labels, centers)
            new_labels = self._assign(data, sq_norms, centers)
            new_labels = self._repair_empty(data, centers, new_labels)
            current_sse = self._sse(data, centers, new_labels)
            if current_sse > previous_sse * (1 + SSE_SLACK) + SSE_SLACK:
                warnings.warn(
                    "SSE increased from {} to {} at iteration {}".format(
                        previous_sse, current_sse, iteration
                    ),
                    RuntimeWarning,
                )
            history.append(current_sse)
            previous_sse = current_sse
            changed = not np.array_equal(new_labels, labels)
            labels = new_labels
            if not changed:
                break
        return centers, previous_sse, history

    def _update_centers(self, data, labels, centers):
        new_centers = centers.copy()
        for j in range(self.k):
            members = data[labels == j]
            if members.shape[0] > 0:
                # exact when all members coincide
                new_centers[j] = members[0] + (members - members[0]).mean(axis=0)
        return new_centers

    def _repair_empty(self, data, centers, labels):
        counts = np.bincount(labels, minlength=self.k)
        if np.all(counts > 0):
            return labels
        for j in np.flatnonzero(counts == 0):
            diff = data - centers[labels]
            distances = np.sum(diff * diff, axis=1)
            # never steal the last member of another cluster
            counts = np.bincount(labels, minlength=self.k)
            distances[counts[labels] <= 1] = -1.0
            farthest = int(np.argmax(distances))
            if distances[farthest] <= 0:
                break
            centers[j] = data[farthest]
            labels[farthest] = j
        return labels


def kmeans_train(data, k, seed=0, restarts=3, max_iter=100):
    """Learns a bag-of-features dictionary with k-means

    Args:
        data (np.ndarray): array of shape (n, dim) of descriptors
        k (int): number of visual words
        seed (int, optional): the seed. Defaults to 0.
        restarts (int, optional): number of k-means++ restarts. Defaults
            to 3.
        max_iter (int, optional): maximum Lloyd iterations. Defaults to
            100.

    Raises:
        InvalidK: if k < 1
        TooFewDistinctPoints: if data has fewer than k distinct points

    Returns:
        bofdb.Dictionary: the learned dictionary
    """
    return KMeans(k, seed=seed, restarts=restarts, max_iter=max_iter).fit(data)


def subsample(data, count, seed):
    """Uniform subsample of the rows of data without replacement

    Args:
        data (np.ndarray): array of shape (n, dim)
        count (int): number of rows to keep. If count >= n, data is
            returned unchanged.
        seed (int): the seed

    Returns:
        np.ndarray: the kept rows, in their original order
    """
    n = data.shape[0]
    if count is None or count >= n:
        return data
    order = SplitMix64(seed).permutation(n)
    return data[np.sort(order[:count])]
