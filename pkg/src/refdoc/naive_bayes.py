"""Multinomial naive Bayes over TF-IDF mass.

Operating on TF-IDF weights rather than raw counts keeps the featurization
path identical across all algorithms; smoothing is Laplace with alpha = 1
by default. Scores are exact posteriors (softmax of log-joints), so they
sum to one.
"""

from __future__ import annotations

import numpy as np


class NaiveBayes:
    def __init__(self, alpha=1.0):
        self.alpha = float(alpha)
        self.log_prior = None
        self.log_theta = None  # classes x features

    def fit(self, X_csr, y_idx, n_classes):
        n, n_features = X_csr.shape
        mass = np.zeros((n_classes, n_features), dtype=np.float64)
        counts = np.zeros(n_classes, dtype=np.float64)
        for c in range(n_classes):
            rows = np.flatnonzero(y_idx == c)
            counts[c] = rows.size
            if rows.size:
                mass[c] = np.asarray(X_csr[rows].sum(axis=0)).ravel()
        smoothed = mass + self.alpha
        self.log_theta = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
        self.log_prior = np.log(counts / n)
        return self

    def log_joint_row(self, row):
        return self.log_prior + self.log_theta @ row

    def score_row(self, row):
        """Posterior over classes for one dense feature row."""
        log_joint = self.log_joint_row(row)
        shifted = log_joint - log_joint.max()
        p = np.exp(shifted)
        return p / p.sum()

    def to_dict(self):
        return {
            "log_prior": [float(v) for v in self.log_prior],
            "log_theta": [[float(v) for v in row] for row in self.log_theta],
        }

    @classmethod
    def from_dict(cls, d, hyper):
        model = cls(alpha=hyper["alpha"])
        model.log_prior = np.asarray(d["log_prior"], dtype=np.float64)
        model.log_theta = np.asarray(d["log_theta"], dtype=np.float64)
        return model
