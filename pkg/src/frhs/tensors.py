"""Fundamental tensor and Cartan tensor of an (alpha, beta)-metric.

Closed forms are expanded in terms of the inner product ``a(., .)``, the
drift ``X`` and ``phi`` with its derivatives at ``r = a(X, y) / sqrt(a(y, y))``.
They are written once against broadcasting pairings, so the same expression
yields a scalar for vector arguments and a full tensor for stacked basis
arguments.

The ``*_fd`` functions are independent oracles: they only ever call
``F(y)^2`` and differentiate it numerically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .metric import AlphaBetaModel

# 4th-order central first-derivative stencil
_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0

G_FD_STEP = 1e-4
CARTAN_FD_STEP = 1e-3


@dataclass(frozen=True, eq=False)
class TensorSample:
    model: AlphaBetaModel
    y: np.ndarray
    alpha: float
    beta: float
    r: float
    phi: tuple[float, float, float, float]

    @classmethod
    def at(cls, model: AlphaBetaModel, y) -> "TensorSample":
        y = np.array(y, dtype=float)
        alpha = model.alpha(y)
        beta = model.beta(y)
        r = beta / alpha
        return cls(model, y, alpha, beta, r, model.phi.derivs(r))

    @property
    def F(self) -> float:
        return self.alpha * self.phi[0]

    @property
    def scale(self) -> float:
        """Magnitude used to turn absolute tolerances into relative ones."""
        return max(1.0, self.F**2)

    def _pair(self, u, v):
        # broadcasting a(u, v) over leading axes
        return np.sum((u @ self.model.A) * v, axis=-1)


def _g_form(s: TensorSample, u, v):
    a = s._pair
    X, y = s.model.X, s.y
    p, p1, p2, _ = s.phi
    yy = s.alpha**2
    al = s.alpha
    Xy = s.beta
    q = p1 * p1 + p * p2
    ds_v = a(X, v) / al - Xy * a(y, v) / yy**1.5
    return (
        a(u, v) * p * p
        + a(y, u) * p * p1 * ds_v
        + q * ds_v * (a(X, u) * al - a(y, u) * Xy / al)
        + p * p1 / al * (a(X, u) * a(y, v) - a(u, v) * Xy)
    )


def _cartan2_form(s: TensorSample, u, v, z):
    """``2 C_y(u, v, z)``, six blocks as in the expanded third derivative."""
    a = s._pair
    X, y = s.model.X, s.y
    p, p1, p2, p3 = s.phi
    yy = s.alpha**2
    al = s.alpha
    Xy = s.beta
    q = p1 * p1 + p * p2

    hv = a(X, v) - a(v, y) * Xy / yy
    hz = a(X, z) - a(z, y) * Xy / yy
    hu = a(X, u) * al - a(u, y) * Xy / al

    b1 = (3 * p1 * p2 + p * p3) / yy * hv * hu * hz
    b2 = q / yy * hv * (a(X, u) * a(z, y) - a(u, z) * Xy - a(u, y) * a(z, X) + a(z, y) * a(u, y) * Xy / yy)
    b3 = -q / (yy * al) * hu * (
        a(z, y) * a(X, v) + a(v, z) * Xy + a(v, y) * a(X, z) - 3 * a(v, y) * Xy * a(z, y) / yy
    )
    b4 = q / yy * hz * (a(X, u) * a(v, y) - a(u, v) * Xy + a(u, y) * a(X, v) - a(v, y) * a(u, y) * Xy / yy)
    b5 = p * p1 / al * (
        a(X, u) * a(v, z)
        + a(u, v) * a(X, z)
        + a(u, z) * a(X, v)
        - (a(z, y) * a(v, y) * a(X, u) + a(u, v) * Xy * a(z, y) + a(u, y) * a(X, v) * a(z, y)) / yy
        - (a(v, z) * a(u, y) * Xy + a(v, y) * a(u, z) * Xy + a(v, y) * a(u, y) * a(X, z)) / yy
        + 3 * a(z, y) * a(v, y) * a(u, y) * Xy / yy**2
    )
    return b1 + b2 + b3 + b4 + b5


def g_y(sample: TensorSample, u, v) -> float:
    return float(_g_form(sample, np.asarray(u, float), np.asarray(v, float)))


def g_y_matrix(sample: TensorSample) -> np.ndarray:
    eye = np.eye(sample.model.dim_m)
    return _g_form(sample, eye[:, None, :], eye[None, :, :])


def cartan(sample: TensorSample, z, u, v) -> float:
    """``C_y(z, u, v)``."""
    z, u, v = (np.asarray(t, float) for t in (z, u, v))
    return 0.5 * float(_cartan2_form(sample, z, u, v))


def cartan_tensor(sample: TensorSample) -> np.ndarray:
    eye = np.eye(sample.model.dim_m)
    return 0.5 * _cartan2_form(sample, eye[:, None, None, :], eye[None, :, None, :], eye[None, None, :, :])


def geodesic_term_closed(sample: TensorSample, w) -> float:
    """``g_y(y, w)`` through the reduced two-term expression."""
    p, p1, _, _ = sample.phi
    inner = sample.model.inner
    return inner(sample.y, w) * (p * p - p * p1 * sample.r) + inner(sample.model.X, w) * p1 * sample.F


@dataclass
class PDCheck:
    positive_definite: bool
    min_pivot: float


def cholesky_pivots(G: np.ndarray) -> np.ndarray:
    """Diagonal pivots of an unpivoted LDL^T elimination of a symmetric matrix."""
    M = np.array(G, dtype=float)
    n = M.shape[0]
    piv = np.empty(n)
    for k in range(n):
        piv[k] = M[k, k]
        if piv[k] == 0.0:
            piv[k + 1:] = np.nan
            break
        M[k + 1:, k + 1:] -= np.outer(M[k + 1:, k], M[k, k + 1:]) / piv[k]
    return piv


def is_positive_definite(sample: TensorSample) -> PDCheck:
    G = g_y_matrix(sample)
    G = 0.5 * (G + G.T)
    pivots = cholesky_pivots(G)
    try:
        np.linalg.cholesky(G)
        ok = True
    except np.linalg.LinAlgError:
        ok = False
    return PDCheck(ok, float(np.nanmin(pivots)))


def _fd_mixed(model: AlphaBetaModel, y, dirs, h):
    """Mixed partial of F^2 along ``dirs`` via a tensor-product central stencil."""
    total = 0.0
    for idx in itertools.product(range(len(_OFFSETS)), repeat=len(dirs)):
        w = np.prod(_WEIGHTS[list(idx)])
        point = y + h * sum(_OFFSETS[i] * d for i, d in zip(idx, dirs))
        total += w * model.F2(point)
    return total / h ** len(dirs)


def _stencil_step(sample: TensorSample, base: float) -> float:
    return base * max(1.0, sample.alpha)


def g_y_fd(sample: TensorSample, u, v) -> float:
    """``1/2 d^2/ds dt F^2(y + s u + t v)`` at zero, by finite differences."""
    h = _stencil_step(sample, G_FD_STEP)
    try:
        return 0.5 * _fd_mixed(sample.model, sample.y, [np.asarray(u, float), np.asarray(v, float)], h)
    except DomainError as exc:
        raise DomainError(f"finite-difference stencil left the domain: {exc}") from None


def cartan_fd(sample: TensorSample, z, u, v) -> float:
    """``1/4 d^3/ds dt dh F^2(y + s z + t u + h v)`` at zero."""
    h = _stencil_step(sample, CARTAN_FD_STEP)
    dirs = [np.asarray(t, float) for t in (z, u, v)]
    try:
        return 0.25 * _fd_mixed(sample.model, sample.y, dirs, h)
    except DomainError as exc:
        raise DomainError(f"finite-difference stencil left the domain: {exc}") from None


def first_derivative_fd(model: AlphaBetaModel, y, v, h: float = G_FD_STEP) -> float:
    """``1/2 d/dt F^2(y + t v)`` at zero."""
    return 0.5 * _fd_mixed(model, np.asarray(y, float), [np.asarray(v, float)], h)


def rel_err(value: float, reference: float, scale: float) -> float:
    return abs(value - reference) / max(abs(reference), scale)


def sample_unit_vectors(model: AlphaBetaModel, rng: np.random.Generator, count: int):
    """``count`` draws from the ``a``-unit sphere, together with how many were
    rejected because they fell outside the phi domain.

    Draws are attempted ``count`` times; rejected draws are not replaced so
    that the skip count reflects the domain geometry directly.
    """
    L = np.linalg.cholesky(model.A)
    kept, skipped = [], 0
    for _ in range(count):
        w = rng.standard_normal(model.dim_m)
        y = np.linalg.solve(L.T, w / np.linalg.norm(w))
        try:
            kept.append(TensorSample.at(model, y))
        except DomainError:
            skipped += 1
    return kept, skipped


@dataclass
class TensorVerification:
    samples: int
    skipped: int
    g_max_rel_err: float
    cartan_max_rel_err: float
    g_tol: float
    cartan_tol: float
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return bool(self.g_max_rel_err <= self.g_tol and self.cartan_max_rel_err <= self.cartan_tol)

    def to_dict(self, include_rows: bool = False) -> dict:
        out = {
            "samples": self.samples,
            "skipped": self.skipped,
            "g_max_rel_err": self.g_max_rel_err,
            "cartan_max_rel_err": self.cartan_max_rel_err,
            "g_tol": self.g_tol,
            "cartan_tol": self.cartan_tol,
            "passed": self.passed,
        }
        if include_rows:
            out["rows"] = self.rows
        return out


def verify_tensors(model: AlphaBetaModel, n_samples: int = 64, seed: int = 42) -> TensorVerification:
    """Compare closed forms against the finite-difference oracles.

    Each sample draws a unit flagpole ``y`` and Gaussian ``u, v, z``.  Samples
    whose ``y`` or stencil leaves the phi domain are skipped and counted.
    """
    rng = np.random.default_rng([seed, 1])
    tol = model.tol
    rows, skipped = [], 0
    g_worst = c_worst = 0.0
    for i in range(n_samples):
        w = rng.standard_normal(model.dim_m)
        u, v, z = rng.standard_normal((3, model.dim_m))
        y = w / model.inner.norm(w)
        try:
            s = TensorSample.at(model, y)
            g_ref = g_y_fd(s, u, v)
            c_ref = cartan_fd(s, z, u, v)
        except DomainError:
            skipped += 1
            continue
        g_e = rel_err(g_y(s, u, v), g_ref, s.scale)
        c_e = rel_err(cartan(s, z, u, v), c_ref, s.scale)
        g_worst, c_worst = max(g_worst, g_e), max(c_worst, c_e)
        rows.append({"index": i, "r": float(s.r), "g_rel_err": float(g_e), "cartan_rel_err": float(c_e)})
    return TensorVerification(len(rows), skipped, float(g_worst), float(c_worst), tol.g_fd_tol, tol.cartan_fd_tol, rows)
