"""
netfair - Network-centric fairness perception and visibility analysis.
"""

__version__ = '0.1.0'
