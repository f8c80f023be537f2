"""
Test package for strat_pi1
"""
