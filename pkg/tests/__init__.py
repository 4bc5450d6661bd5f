"""
Test package for hessian-lv.
"""
