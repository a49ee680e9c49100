"""Discrete Bayesian networks on a causal diagram.

Models are read from ``.cpt`` files (:mod:`~shiftdiag.bn.cpt_format`), queried exactly
(:mod:`~shiftdiag.bn.inference`), sampled (:mod:`~shiftdiag.bn.sampling`) and used to check
the taxonomy's findings (:mod:`~shiftdiag.bn.verification`).
"""
