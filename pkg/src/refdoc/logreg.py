"""One-vs-all L2-regularized logistic regression.

Each binary model minimizes sum_i log(1 + exp(z_i)) - y_i z_i plus
(l2_weight / 2) ||w||^2 (bias unregularized) by deterministic full-batch
gradient descent with Armijo backtracking, stopping when the gradient
infinity-norm falls below the optimization tolerance. The gradient lives in
its own function so it can be checked against finite differences.
"""

from __future__ import annotations

import numpy as np


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_loss(weights, bias, X, y, l2_weight):
    """Regularized negative log-likelihood (sum over the batch)."""
    z = X @ weights + bias
    nll = float(np.sum(np.logaddexp(0.0, z) - y * z))
    return nll + 0.5 * float(l2_weight) * float(weights @ weights)


def logreg_gradient(weights, bias, X, y, l2_weight):
    """Analytic gradient of logreg_loss: (d/dw, d/db).

    The L2 term contributes exactly l2_weight * weights to the weight
    gradient and nothing to the bias gradient.
    """
    z = X @ weights + bias
    r = _sigmoid(z) - y
    grad_w = X.T @ r + l2_weight * weights
    grad_b = float(np.sum(r))
    return np.asarray(grad_w).ravel(), grad_b


def fit_binary(X, y, l2_weight=1.0, tol=1e-7, max_iter=5000):
    """Gradient descent with backtracking line search on one binary problem."""
    n_features = X.shape[1]
    w = np.zeros(n_features, dtype=np.float64)
    b = 0.0
    step = 1.0
    loss = logreg_loss(w, b, X, y, l2_weight)
    for _ in range(max_iter):
        grad_w, grad_b = logreg_gradient(w, b, X, y, l2_weight)
        gnorm = max(float(np.max(np.abs(grad_w))) if grad_w.size else 0.0,
                    abs(grad_b))
        if gnorm <= tol:
            break
        sq = float(grad_w @ grad_w) + grad_b * grad_b
        step = min(step * 2.0, 1e6)
        accepted = False
        for _ in range(60):
            w_new = w - step * grad_w
            b_new = b - step * grad_b
            loss_new = logreg_loss(w_new, b_new, X, y, l2_weight)
            if loss_new <= loss - 1e-4 * step * sq:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break  # step underflow: numerically converged
        w, b, loss = w_new, b_new, loss_new
    return w, b


class LogisticOvA:
    def __init__(self, l2_weight=1.0, optimization_tolerance=1e-7,
                 max_iterations=5000):
        self.l2_weight = float(l2_weight)
        self.tol = float(optimization_tolerance)
        self.max_iter = int(max_iterations)
        self.weights = None  # classes x features
        self.bias = None

    def fit(self, X_csr, y_idx, n_classes):
        n_features = X_csr.shape[1]
        self.weights = np.zeros((n_classes, n_features), dtype=np.float64)
        self.bias = np.zeros(n_classes, dtype=np.float64)
        for c in range(n_classes):
            y = (y_idx == c).astype(np.float64)
            w, b = fit_binary(X_csr, y, self.l2_weight, self.tol, self.max_iter)
            self.weights[c] = w
            self.bias[c] = b
        return self

    def score_row(self, row):
        """Per-class OvA sigmoids normalized to sum to one."""
        z = self.weights @ row + self.bias
        p = _sigmoid(z)
        return p / p.sum()

    def to_dict(self):
        return {
            "weights": [[float(v) for v in row] for row in self.weights],
            "bias": [float(v) for v in self.bias],
        }

    @classmethod
    def from_dict(cls, d, hyper):
        model = cls(l2_weight=hyper["l2_weight"],
                    optimization_tolerance=hyper["optimization_tolerance"],
                    max_iterations=hyper["max_iterations"])
        model.weights = np.asarray(d["weights"], dtype=np.float64)
        model.bias = np.asarray(d["bias"], dtype=np.float64)
        return model
