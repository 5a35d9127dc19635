"""
Newfluence: influence measures for regularized GLMs
"""
