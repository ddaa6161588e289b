"""RingLab - constructive checks of unit-regularity for elements of finite rings."""

__version__ = "0.1.0"
