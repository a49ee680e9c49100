"""Classification of a diagram: predictive direction, dataset shifts, selections and corrections.

``types`` holds the vocabulary; each other module implements one classification step.
"""
