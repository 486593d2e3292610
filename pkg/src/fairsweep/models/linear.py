"""Logistic regression trained by deterministic full-batch descent.

Minimizes the negative log-likelihood plus (1/C) * ||w||^2 when the
penalty is "l2"; with penalty "none" the objective has no penalty term
and C is ignored. The intercept is never penalized. Optimization is
gradient descent with Armijo backtracking from a zero start, capped at
1000 iterations with a gradient-norm tolerance of 1e-6; everything is
deterministic, so no seed is consumed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PENALTIES = ("l2", "none")

MAX_ITER = 1000
GRAD_TOL = 1e-6
ARMIJO_C = 1e-4
BACKTRACK = 0.5
STEP_GROW = 2.0
MAX_STEP = 1e4


@dataclass(frozen=True)
class LinearParams:
    weights: np.ndarray
    intercept: float
    n_features: int


def _objective(theta, X, sgn, penalty, c_inv):
    w, b = theta[:-1], theta[-1]
    z = X @ w + b
    margins = sgn * z
    loss = float(np.sum(np.logaddexp(0.0, -margins)))
    if penalty == "l2":
        loss += c_inv * float(w @ w)
    return loss


def _gradient(theta, X, sgn, penalty, c_inv):
    w, b = theta[:-1], theta[-1]
    z = X @ w + b
    # d/dz log(1 + exp(-s z)) = -s * sigmoid(-s z)
    coef = -sgn * _sigmoid(-sgn * z)
    grad_w = X.T @ coef
    grad_b = float(np.sum(coef))
    if penalty == "l2":
        grad_w = grad_w + 2.0 * c_inv * w
    return np.concatenate([grad_w, [grad_b]])


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def fit_logistic(X: np.ndarray, y: np.ndarray, c: float, penalty: str) -> LinearParams:
    n, p = X.shape
    sgn = np.where(y == 1, 1.0, -1.0)
    c_inv = 1.0 / c if penalty == "l2" else 0.0
    theta = np.zeros(p + 1)
    f = _objective(theta, X, sgn, penalty, c_inv)
    step = 1.0
    for _ in range(MAX_ITER):
        g = _gradient(theta, X, sgn, penalty, c_inv)
        gnorm2 = float(g @ g)
        if np.sqrt(gnorm2) <= GRAD_TOL:
            break
        accepted = False
        while step > 1e-16:
            cand = theta - step * g
            fc = _objective(cand, X, sgn, penalty, c_inv)
            if fc <= f - ARMIJO_C * step * gnorm2:
                theta, f = cand, fc
                accepted = True
                break
            step *= BACKTRACK
        if not accepted:
            break
        step = min(step * STEP_GROW, MAX_STEP)
    return LinearParams(weights=theta[:-1].copy(), intercept=float(theta[-1]), n_features=p)


def predict_logistic(m: LinearParams, X: np.ndarray) -> np.ndarray:
    z = X @ m.weights + m.intercept
    return (z > 0.0).astype(np.int8)
