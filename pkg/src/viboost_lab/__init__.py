"""Boosting laboratory: VIBoost, AdaBoost baselines, a Gibbs oracle, and
synthetic/real dataset harnesses with label-noise diagnostics."""

__version__ = "0.1.0"
