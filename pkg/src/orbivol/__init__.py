"""orbivol: volumes of the three smallest compact arithmetic hyperbolic 5-orbifolds."""

__version__ = "0.1.0"
