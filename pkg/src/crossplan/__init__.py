"""Coordinated multi-robot trajectory planning at road intersections.

The pipeline: per-robot lattice roadmaps built from reference polylines and
two shape parameters, a composite-space tree search that synchronizes robots
with free wait steps, and gradient-free optimizers that tune the roadmap
parameters against the total-trajectory-length objective. A benchmark layer
runs multi-instance protocols and pairwise Wilcoxon comparisons.
"""

__version__ = "0.1.0"
