"""scikit-learn style facade over the analysis pipeline.

``fit`` takes a Gram matrix (or a Lattice / LatticeSpec) and computes the
Voronoi cell and the requested checks.  ``predict`` maps points, given in
basis coordinates, to their nearest lattice point and ``transform``
reduces them into the cell around the origin.
"""

from __future__ import annotations

from math import floor

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .harness import CHECKS, analyze
from .io import LatticeSpec
from .lattice import points_in_ball
from .validation import as_lattice, check_points

__all__ = ["ParallelohedronAnalyzer"]


class ParallelohedronAnalyzer(TransformerMixin, BaseEstimator):
    def __init__(self, checks=("mv", "census", "venkov", "scaling"), name: str = ""):
        self.checks = checks
        self.name = name

    def fit(self, X, y=None):
        lat = as_lattice(X)
        spec = X if isinstance(X, LatticeSpec) else LatticeSpec.from_gram(
            self.name or lat.name, lat.gram)
        checks = [c for c in self.checks if c in CHECKS] if self.checks else []
        if len(checks) != len(self.checks or []):
            raise ValueError(f"unknown checks in {self.checks!r}")
        self.lattice_ = lat
        self.n_features_in_ = lat.dim
        self.report_ = analyze(spec, checks) if checks else None
        self.relevant_vectors_ = list(lat.relevant)
        return self

    def _nearest(self, p):
        lat = self.lattice_
        guess = [floor(c + 1 / 2) for c in p]
        r2 = lat.norm([g - c for g, c in zip(guess, p)])
        cands = points_in_ball(lat, p, r2)
        return min(cands, key=lambda x: (lat.norm([a - c for a, c in zip(x, p)]), x))

    def predict(self, X):
        """Nearest lattice point of each row; ties go to the lexicographically smallest."""
        check_is_fitted(self, "lattice_")
        return [self._nearest(p) for p in check_points(X, self.lattice_.dim)]

    def transform(self, X):
        """Each point minus its nearest lattice point, so it lands in the Voronoi cell."""
        check_is_fitted(self, "lattice_")
        pts = check_points(X, self.lattice_.dim)
        return [tuple(a - b for a, b in zip(p, self._nearest(p))) for p in pts]

    def score(self, X, y=None):
        """Fraction of passed checks (1 for a healthy lattice)."""
        check_is_fitted(self, "lattice_")
        if self.report_ is None:
            return 1.0
        return 0.0 if self.report_.failures else 1.0
