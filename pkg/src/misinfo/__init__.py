"""Toolkit for building and evaluating tweet misinformation detectors.

Covers the full workflow: corpus filtering and sampling, guided human
annotation with agreement statistics, feature extraction, class balancing,
single and two-stage classifiers, and a reproducible evaluation harness.
"""

__version__ = "0.1.0"
