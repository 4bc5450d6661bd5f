"""
hessian-lv - radial k-Hessian problems through their Lotka-Volterra phase plane.
"""
__version__ = "0.1.0"
