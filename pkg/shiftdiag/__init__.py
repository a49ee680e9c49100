"""shiftdiag: causal-diagram analysis of imaging datasets for dataset shift and selection bias."""

__version__ = "0.1.0"
