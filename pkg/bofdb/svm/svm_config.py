KERNELS = ("linear", "rbf")


class SvmConfig:
    """Hyperparameters of the binary SVMs

    Args:
        c (float, optional): regularisation constant. Defaults to 10.
        kernel (str, optional): "linear" or "rbf". Defaults to "linear".
        gamma (float, optional): RBF width, required when kernel is
            "rbf". Defaults to None.
        tolerance (float, optional): KKT tolerance used as the SMO
            stopping criterion. Defaults to 1e-3.
        max_passes (int, optional): cap on SMO pair updates, in multiples
            of the number of training points. Defaults to 1000.
    """

    def __init__(
        self, c=10.0, kernel="linear", gamma=None, tolerance=1e-3, max_passes=1000
    ) -> None:
        self.c = c
        self.kernel = kernel
        self.gamma = gamma
        self.tolerance = tolerance
        self.max_passes = max_passes
        self.check()

    @property
    def c(self):
        return self._c

    @c.setter
    def c(self, value):
        if not isinstance(value, (float, int)) or isinstance(value, bool):
            raise TypeError("c must be a float or an int")
        if value <= 0:
            raise ValueError("c must be positive")
        self._c = float(value)

    @property
    def kernel(self):
        return self._kernel

    @kernel.setter
    def kernel(self, value):
        if value not in KERNELS:
            raise ValueError("Acceptable values for kernel are 'linear' and 'rbf'")
        self._kernel = value

    @property
    def tolerance(self):
        return self._tolerance

    @tolerance.setter
    def tolerance(self, value):
        if value <= 0:
            raise ValueError("tolerance must be positive")
        self._tolerance = float(value)

    @property
    def max_passes(self):
        return self._max_passes

    @max_passes.setter
    def max_passes(self, value):
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError("max_passes must be an int")
        if value < 1:
            raise ValueError("max_passes must be >= 1")
        self._max_passes = value

    def check(self):
        """Checks that gamma is given (and positive) for the rbf kernel

        Raises:
            ValueError: if gamma is missing or not positive
        """
        if self.kernel == "rbf":
            if self.gamma is None or not self.gamma > 0:
                raise ValueError("rbf kernel requires gamma > 0")
            self.gamma = float(self.gamma)

    @classmethod
    def from_string(cls, kernel, **kwargs):
        """Builds a config from a CLI kernel string ("linear" or "rbf:<gamma>")

        Args:
            kernel (str): the kernel description

        Returns:
            SvmConfig: the config
        """
        if kernel.startswith("rbf:"):
            return cls(kernel="rbf", gamma=float(kernel[4:]), **kwargs)
        return cls(kernel=kernel, **kwargs)

    def __eq__(self, other):
        if not isinstance(other, SvmConfig):
            return NotImplemented
        return (self.c, self.kernel, self.gamma, self.tolerance, self.max_passes) == (
            other.c,
            other.kernel,
            other.gamma,
            other.tolerance,
            other.max_passes,
        )

    def __repr__(self):
        return "SvmConfig(c={}, kernel={!r}, gamma={}, tolerance={}, max_passes={})".format(
            self.c, self.kernel, self.gamma, self.tolerance, self.max_passes
        )
