"""setlat - lattice calculus of closed convex upper sets."""

__version__ = "0.1.0"
__author__ = "setlat developers"
__description__ = "Set-valued functions with values in G(R^d, C): Dini derivatives, generalized convexity and Minty-type optimality checks"
