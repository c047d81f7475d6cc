"""Graph layout on plane, torus and sphere with wrap-aware tooling."""

__version__ = "0.1.0"
