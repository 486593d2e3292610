"""Kernel support vector classifier trained by seeded Pegasos descent.

Minimizes the kernelized hinge loss with regularization strength 1/C
(lambda = 1/(C n) in Pegasos terms) over a fixed budget of epochs. The
supported kernels are linear, poly (degree 3), rbf, and sigmoid; the
scale gamma defaults to 1/(p * var(X)) and the sigmoid offset is 0.
There is no intercept term. Training is deterministic given the seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KERNELS = ("linear", "poly", "rbf", "sigmoid")

EPOCHS = 20
POLY_DEGREE = 3


@dataclass(frozen=True)
class SvcParams:
    support: np.ndarray        # training rows, kept for kernel evaluation
    coef: np.ndarray           # alpha_j * s_j / (lambda * T)
    kernel: str
    gamma: float
    n_features: int


def scale_gamma(X: np.ndarray) -> float:
    var = float(np.var(X))
    p = X.shape[1]
    if var <= 0.0 or p == 0:
        return 1.0
    return 1.0 / (p * var)


def kernel_matrix(kernel: str, gamma: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if kernel == "linear":
        return A @ B.T
    if kernel == "poly":
        return (gamma * (A @ B.T)) ** POLY_DEGREE
    if kernel == "rbf":
        a2 = np.sum(A * A, axis=1)[:, None]
        b2 = np.sum(B * B, axis=1)[None, :]
        d2 = np.maximum(a2 + b2 - 2.0 * (A @ B.T), 0.0)
        return np.exp(-gamma * d2)
    if kernel == "sigmoid":
        return np.tanh(gamma * (A @ B.T))
    raise ValueError(f"unknown kernel: {kernel!r}")


def fit_svc(X: np.ndarray, y: np.ndarray, c: float, kernel: str, seed: int) -> SvcParams:
    n = len(y)
    sgn = np.where(y == 1, 1.0, -1.0)
    gamma = scale_gamma(X)
    K = kernel_matrix(kernel, gamma, X, X)
    lam = 1.0 / (c * n)
    rng = np.random.default_rng(seed)
    counts = np.zeros(n, dtype=np.float64)
    t = 0
    for _ in range(EPOCHS):
        picks = rng.integers(0, n, size=n)
        for i in picks:
            t += 1
            margin = sgn[i] * float(K[i] @ (counts * sgn)) / (lam * t)
            if margin < 1.0:
                counts[i] += 1.0
    coef = counts * sgn / (lam * t)
    return SvcParams(
        support=X.copy(),
        coef=coef,
        kernel=kernel,
        gamma=gamma,
        n_features=X.shape[1],
    )


def predict_svc(m: SvcParams, X: np.ndarray) -> np.ndarray:
    if len(X) == 0:
        return np.empty(0, dtype=np.int8)
    K = kernel_matrix(m.kernel, m.gamma, X, m.support)
    z = K @ m.coef
    return (z > 0.0).astype(np.int8)
