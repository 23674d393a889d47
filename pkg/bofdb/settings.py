import logging

from bofdb.svm.svm_config import SvmConfig


class Settings:
    """
    Args:
        grid_step (int, optional): distance in pixels between dense grid
            keypoints. Defaults to 8.
        patch_size (int, optional): side of the square patch described
            around each keypoint, a multiple of 4. Defaults to 16.
        words_count (int, optional): dictionary size k. Defaults to 100.
        restarts (int, optional): number of k-means restarts. Defaults
            to 3.
        max_iter (int, optional): maximum Lloyd iterations per restart.
            Defaults to 100.
        subsample (int, optional): if set, k-means is trained on this many
            uniformly drawn descriptors. Defaults to None.
        seed (int, optional): seed of every random choice. Defaults to 0.
        svm (bofdb.SvmConfig, optional): SVM hyperparameters. Defaults to
            SvmConfig().
        test_fraction (float, optional): share of every class held out by
            the benchmark. Defaults to 0.15.
        log_level (int, optional): level of the "bofdb" logger when run
            from the command line. Defaults to logging.WARNING.

    Attributes:
        grid_step (int): keypoint spacing
        patch_size (int): patch side
        words_count (int): dictionary size
        restarts (int): k-means restarts
        max_iter (int): Lloyd iterations cap
        subsample (int): k-means training sample size
        seed (int): the seed
        svm (bofdb.SvmConfig): SVM hyperparameters
        test_fraction (float): benchmark hold-out share
        log_level (int): logging level
    """

    def __init__(
        self,
        grid_step=8,
        patch_size=16,
        words_count=100,
        restarts=3,
        max_iter=100,
        subsample=None,
        seed=0,
        svm=None,
        test_fraction=0.15,
        log_level=logging.WARNING,
    ):
        self.grid_step = grid_step
        self.patch_size = patch_size
        self.words_count = words_count
        self.restarts = restarts
        self.max_iter = max_iter
        self.subsample = subsample
        self.seed = seed
        self.svm = SvmConfig() if svm is None else svm
        self.test_fraction = test_fraction
        self.log_level = log_level

    @property
    def words_count(self):
        return self._words_count

    @words_count.setter
    def words_count(self, value):
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError("words_count must be an int")
        if value < 1:
            raise ValueError("words_count must be >= 1")
        self._words_count = value

    @property
    def subsample(self):
        return self._subsample

    @subsample.setter
    def subsample(self, value):
        if value is not None and value < 1:
            raise ValueError("subsample must be None or >= 1")
        self._subsample = value

    @property
    def svm(self):
        return self._svm

    @svm.setter
    def svm(self, value):
        if not isinstance(value, SvmConfig):
            raise TypeError("svm must be of type bofdb.SvmConfig")
        self._svm = value

    @property
    def test_fraction(self):
        return self._test_fraction

    @test_fraction.setter
    def test_fraction(self, value):
        if not 0 <= value < 1:
            raise ValueError("test_fraction must be in [0, 1)")
        self._test_fraction = float(value)
