"""Beam-ID drive-test analytics.

Spatial stationarity regions (the along-route distance served by one beam),
gamma SSR modelling, beam-transition statistics, loss-aware ECDFs and
spatially consistent synthetic beam traces.
"""

__version__ = "0.1.0"
