"""Diversity-weight QP over the causal window.

Minimizes lam * w' A w subject to sum(w) = m and 0 <= w <= 1, where A is the
windowed affinity matrix. Spreading a fixed mass m across mutually similar
frames is expensive, so the minimizer concentrates weight on novel frames;
the last component (the current frame's weight) is the trigger score.

The solver is a deterministic projected-gradient kernel: at n <= W ~ 30 the
problem is small and dense, and a fixed-step method with an exact
box-simplex projection needs no external QP dependency. Kernels are compiled
with numba (no fastmath, no parallelism), so results are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InfeasibleBudget

DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_ITER = 10000

_PROJ_SUM_TOL = 1e-10
_PROJ_MAX_BISECT = 200


@dataclass(frozen=True)
class QpProblem:
    """One solve instance: affinity a (n x n), mass m in [0, n], scale lam > 0."""

    a: np.ndarray
    m: float
    lam: float = 1.0


@dataclass(frozen=True)
class QpSolution:
    w: np.ndarray
    objective: float
    kkt_residual: float
    iterations: int
    converged: bool


@njit(cache=True)
def _project_kernel(v, m, out):
    """Fill out with clip(v - mu, 0, 1), mu found by bisection so sum(out) = m.

    The map mu -> sum(clip(v - mu, 0, 1)) is continuous and monotone
    non-increasing, equal to n at mu = min(v) - 1 and 0 at mu = max(v), so a
    root exists in that bracket. Stops once |sum - m| <= 1e-10 or after 200
    halvings.
    """
    n = v.shape[0]
    lo = v[0]
    hi = v[0]
    for i in range(1, n):
        if v[i] < lo:
            lo = v[i]
        if v[i] > hi:
            hi = v[i]
    lo -= 1.0
    for _ in range(_PROJ_MAX_BISECT):
        mu = 0.5 * (lo + hi)
        s = 0.0
        for i in range(n):
            x = v[i] - mu
            if x < 0.0:
                x = 0.0
            elif x > 1.0:
                x = 1.0
            out[i] = x
            s += x
        if abs(s - m) <= _PROJ_SUM_TOL:
            break
        if s > m:
            lo = mu
        else:
            hi = mu


@njit(cache=True)
def _pgd_kernel(a, m, lam, tol, max_iter):
    """Projected gradient descent from the uniform start point (m/n) * 1.

    Step size 1/(2*lam*B) with B = max row sum of a (an eigenvalue upper
    bound since entries are non-negative); with gradient 2*lam*a*w the lam
    factors cancel in the iterate path, so the trajectory is scale-free.
    Convergence is declared when ||w - P(w - grad)||_inf <= tol, measured
    against the full (lam-scaled) gradient.
    """
    n = a.shape[0]
    b_max = 0.0
    for i in range(n):
        rs = 0.0
        for j in range(n):
            rs += a[i, j]
        if rs > b_max:
            b_max = rs
    w = np.full(n, m / n)
    g = np.empty(n)
    v = np.empty(n)
    cand = np.empty(n)
    res = np.inf
    iters = 0
    for it in range(1, max_iter + 1):
        iters = it
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += a[i, j] * w[j]
            g[i] = acc
        for i in range(n):
            v[i] = w[i] - 2.0 * lam * g[i]
        _project_kernel(v, m, cand)
        res = 0.0
        for i in range(n):
            d = abs(w[i] - cand[i])
            if d > res:
                res = d
        if res <= tol:
            break
        for i in range(n):
            v[i] = w[i] - g[i] / b_max
        _project_kernel(v, m, w)
    return w, iters, res


def project_box_simplex(v, m: float) -> np.ndarray:
    """Euclidean projection of v onto {w in [0,1]^n : sum(w) = m}.

    Realized as w_i = clip(v_i - mu, 0, 1) with mu found by bisection.
    Box bounds are exact on every return path; the sum matches m to 1e-10.

    Raises InfeasibleBudget when m < 0 or m > n.
    """
    v = np.ascontiguousarray(v, dtype=np.float64).reshape(-1)
    n = v.shape[0]
    m = float(m)
    if m < 0.0 or m > n:
        raise InfeasibleBudget(f"mass {m} outside [0, {n}]")
    out = np.empty(n)
    _project_kernel(v, m, out)
    return out


def solve_qp(
    problem: QpProblem,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> QpSolution:
    """Minimize lam * w' a w over {0 <= w <= 1, sum(w) = m}.

    Parameters
    ----------
    problem : QpProblem
        Affinity matrix (symmetric, PSD, entries in [0, 1]), target mass m,
        and positive scale lam.
    tolerance : float
        Projected-gradient residual at which the solve is declared converged.
    max_iter : int
        Iteration cap. On hitting it with residual above tolerance the best
        feasible iterate is still returned, flagged converged=False; a
        streaming caller must not halt on a slow solve.

    Since a is PSD the problem is convex and any KKT point is a global
    minimum. m = 0 and m = n pin the single feasible point and are returned
    exactly without iterating.
    """
    a = np.ascontiguousarray(problem.a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"affinity must be square, got shape {a.shape}")
    n = a.shape[0]
    m = float(problem.m)
    lam = float(problem.lam)
    if lam <= 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    if m < 0.0 or m > n:
        raise InfeasibleBudget(f"mass {m} outside [0, {n}]")

    if m == 0.0:
        w = np.zeros(n)
        return QpSolution(w=w, objective=0.0, kkt_residual=0.0, iterations=0, converged=True)
    if m == float(n):
        w = np.ones(n)
        obj = float(lam * (w @ a @ w))
        return QpSolution(w=w, objective=obj, kkt_residual=0.0, iterations=0, converged=True)

    w, iters, res = _pgd_kernel(a, m, lam, float(tolerance), int(max_iter))
    obj = float(lam * (w @ a @ w))
    return QpSolution(
        w=w,
        objective=obj,
        kkt_residual=float(res),
        iterations=int(iters),
        converged=bool(res <= tolerance),
    )


def current_score(solution: QpSolution) -> float:
    """Weight assigned to the newest frame (last window slot)."""
    return float(solution.w[-1])
