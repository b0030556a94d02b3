"""Reference computations used only by the tests.

None of these call into kfpls numerics; they are written from the textbook
definitions so they can catch errors in the library code.
"""

import numpy as np
from scipy.interpolate import BSpline


def centering_matrix(n):
    return np.eye(n) - np.ones((n, n)) / n


def fine_integral(f, n=100_001):
    """Composite Simpson on ``n`` (odd) uniform points of [0, 1]."""
    t = np.linspace(0.0, 1.0, n)
    v = f(t)
    h = t[1] - t[0]
    return h / 3 * (v[0] + v[-1] + 4 * v[1:-1:2].sum() + 2 * v[2:-1:2].sum())


def scipy_basis(order=4, n_breaks=21):
    """Clamped basis via scipy: returns a function t -> (len(t), n_basis)."""
    k = order - 1
    breaks = np.linspace(0, 1, n_breaks)
    knots = np.r_[[0.0] * k, breaks, [1.0] * k]
    nb = len(knots) - order

    def evaluate(t):
        t = np.atleast_1d(t)
        out = np.empty((t.size, nb))
        for l in range(nb):
            c = np.zeros(nb)
            c[l] = 1.0
            out[:, l] = BSpline(knots, c, k, extrapolate=False)(t)
        # scipy leaves the right endpoint at 0 for the last function
        out[t == 1.0] = 0.0
        out[t == 1.0, -1] = 1.0
        return np.nan_to_num(out)

    return evaluate


def nipals_pls1(X, y, X_new, n_components):
    """Classical NIPALS PLS1 on an explicit feature matrix.

    Returns ``(fitted, predicted)`` using the regression vector
    ``W (P'W)^{-1} c`` on mean-centered features and response.
    """
    X = np.asarray(X, float)
    y = np.asarray(y, float)
    xbar = X.mean(axis=0)
    ybar = y.mean()
    E = X - xbar
    f = y - ybar
    W, P, C = [], [], []
    for _ in range(n_components):
        w = E.T @ f
        w /= np.linalg.norm(w)
        t = E @ w
        tt = t @ t
        p = E.T @ t / tt
        c = f @ t / tt
        E = E - np.outer(t, p)
        f = f - c * t
        W.append(w)
        P.append(p)
        C.append(c)
    W = np.column_stack(W)
    P = np.column_stack(P)
    B = W @ np.linalg.solve(P.T @ W, np.array(C))
    return (X - xbar) @ B + ybar, (np.asarray(X_new, float) - xbar) @ B + ybar


def leading_eigvec(A):
    vals, vecs = np.linalg.eig(A)
    v = np.real(vecs[:, np.argmax(np.abs(vals))])
    return v / np.linalg.norm(v)


def same_up_to_sign(a, b):
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))
