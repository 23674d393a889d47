import math


class Keypoint:
    """
    Args:
        x (float): sub-pixel column coordinate
        y (float): sub-pixel row coordinate
        scale (float): patch radius in pixels
        orientation (float, optional): orientation in radians, in
            [0, 2pi). Defaults to 0.
    """

    __slots__ = ("x", "y", "scale", "orientation")

    def __init__(self, x, y, scale, orientation=0.0) -> None:
        if not scale > 0:
            raise ValueError("scale must be positive")
        if not 0 <= orientation < 2 * math.pi:
            raise ValueError("orientation must be in [0, 2pi)")
        self.x = float(x)
        self.y = float(y)
        self.scale = float(scale)
        self.orientation = float(orientation)

    def as_tuple(self):
        return (self.x, self.y, self.scale, self.orientation)

    def __eq__(self, other):
        if not isinstance(other, Keypoint):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __repr__(self):
        return "Keypoint(x={}, y={}, scale={}, orientation={})".format(
            *self.as_tuple()
        )
