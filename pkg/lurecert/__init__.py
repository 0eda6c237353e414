"""
lurecert - robust stability certificates for linear systems in feedback with
sector-bounded nonlinearities
"""

__version__ = "0.1.0"
