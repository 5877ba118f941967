"""exactcat: exact structures and functor-category correspondences over
finite-dimensional quiver algebras, verified at desk scale over GF(p)."""

__version__ = "0.1.0"
