"""Flag curvature of naturally reductive (alpha, beta)-metric spaces.

Two routes are offered: the defining quotient evaluated with the
fundamental tensor (``flag_curvature_general``), and the expanded formula for
an orthonormal flag (``flag_curvature_closed`` and its reduced form
``flag_curvature_corollary``).  Both rely on the naturally reductive
curvature operator, so they are gated on a verdict unless ``force`` is set.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import DegenerateFlag, DomainError, NotNaturallyReductive, ThetaNearZero
from .metric import AlphaBetaModel
from .reductivity import Verdict, reductivity_verdict
from .tensors import TensorSample, g_y, g_y_fd

FORCED_NOTE = "forced: curvature operator applied to a model not certified naturally reductive"

_certified: "weakref.WeakKeyDictionary[AlphaBetaModel, bool]" = weakref.WeakKeyDictionary()


def is_certified(model: AlphaBetaModel, config: RunConfig | None = None) -> bool:
    """Whether the model passed the reductivity verdict (cached per model)."""
    if model not in _certified:
        report = reductivity_verdict(model, config)
        _certified[model] = report.verdict is Verdict.NATURALLY_REDUCTIVE
    return _certified[model]


def _gate(model, force):
    if force:
        return [] if is_certified(model) else [FORCED_NOTE]
    if not is_certified(model):
        raise NotNaturallyReductive(
            f"model {model.name or '<unnamed>'} is not naturally reductive; pass force=True to override"
        )
    return []


def curvature_terms(model: AlphaBetaModel, u, y) -> tuple[np.ndarray, np.ndarray]:
    """The two pieces ``[y, [u, y]_m]_m`` and ``[y, [u, y]_h]_m`` in m-coordinates."""
    dec = model.decomposition
    alg = dec.algebra
    Y = dec.embed(y)
    uy = alg.bracket(dec.embed(u), Y)
    m_part = dec.m_coords(alg.bracket(Y, dec.proj_m(uy)))
    h_part = dec.m_coords(alg.bracket(Y, dec.proj_h(uy)))
    return m_part, h_part


def curvature_operator(model: AlphaBetaModel, u, y, force: bool = False) -> np.ndarray:
    """``R(u, y) y`` for the naturally reductive connection, in m-coordinates."""
    _gate(model, force)
    m_part, h_part = curvature_terms(model, np.asarray(u, float), np.asarray(y, float))
    return 0.25 * m_part + h_part


def orthonormalize(model: AlphaBetaModel, y, u, denom_floor: float | None = None):
    """Gram-Schmidt in the inner product, flagpole first."""
    floor = model.tol.denom_floor if denom_floor is None else denom_floor
    inner = model.inner
    y = np.asarray(y, float)
    u = np.asarray(u, float)
    yy, uu, yu = inner(y, y), inner(u, u), inner(y, u)
    if yy * uu - yu * yu <= floor:
        raise DegenerateFlag(f"flag is degenerate: Gram determinant {yy * uu - yu * yu:.3e}")
    y1 = y / math.sqrt(yy)
    w = u - inner(u, y1) * y1
    return y1, w / inner.norm(w)


def flag_curvature_general(model: AlphaBetaModel, y, u, force: bool = False, use_fd: bool = False) -> float:
    """``g_y(R(u,y)y, u) / (g_y(y,y) g_y(u,u) - g_y(y,u)^2)``.

    ``use_fd`` evaluates every fundamental-tensor value by finite differences
    of ``F^2`` instead of the closed form.
    """
    y = np.asarray(y, float)
    u = np.asarray(u, float)
    R = curvature_operator(model, u, y, force=force)
    s = TensorSample.at(model, y)
    g = g_y_fd if use_fd else g_y
    denom = g(s, y, y) * g(s, u, u) - g(s, y, u) ** 2
    if denom <= model.tol.denom_floor:
        raise DegenerateFlag(f"flag curvature denominator {denom:.3e} is below the floor")
    return g(s, R, u) / denom


@dataclass
class _ClosedParts:
    r: float
    theta: float
    block_u: float
    block_y: float
    block_X: float
    Xu: float
    phi: tuple


def _closed_parts(model, y, u, force):
    _gate(model, force)
    y1, u1 = orthonormalize(model, y, u)
    inner = model.inner
    X = model.X
    r = inner(X, y1)
    p, p1, p2, _ = model.phi.derivs(r)
    Xu = inner(X, u1)
    theta = p * p * (p * p + p * p2 * Xu * Xu - p * p1 * r)
    if abs(theta) <= model.tol.denom_floor:
        raise ThetaNearZero(f"theta = {theta:.3e}: strong convexity lost along this flag")
    m_part, h_part = curvature_terms(model, u1, y1)
    return _ClosedParts(
        r=r,
        theta=theta,
        block_u=0.25 * inner(m_part, u1) + inner(h_part, u1),
        block_y=0.25 * inner(m_part, y1) + inner(h_part, y1),
        block_X=0.25 * inner(m_part, X) + inner(h_part, X),
        Xu=Xu,
        phi=(p, p1, p2),
    )


def flag_curvature_closed(model: AlphaBetaModel, y, u, force: bool = False) -> float:
    c = _closed_parts(model, y, u, force)
    p, p1, p2 = c.phi
    q = p1 * p1 + p * p2
    num = (
        (p * p - p * p1 * c.r) * c.block_u
        + (p * p1 * c.Xu - q * c.Xu * c.r) * c.block_y
        + q * c.Xu * c.block_X
    )
    return num / c.theta


def flag_curvature_corollary(model: AlphaBetaModel, y, u, force: bool = False) -> float:
    """Closed form with the flagpole block dropped (it vanishes identically)."""
    c = _closed_parts(model, y, u, force)
    p, p1, p2 = c.phi
    q = p1 * p1 + p * p2
    num = (p * p - p * p1 * c.r) * c.block_u + q * c.Xu * c.block_X
    return num / c.theta


def riemannian_sectional(model: AlphaBetaModel, y, u) -> float:
    """``1/4 a([y,[u,y]_m]_m, u) + a([y,[u,y]_h], u)`` for an orthonormal pair."""
    y1, u1 = orthonormalize(model, y, u)
    m_part, h_part = curvature_terms(model, u1, y1)
    return 0.25 * model.inner(m_part, u1) + model.inner(h_part, u1)


@dataclass
class FlagCurvatureResult:
    y: np.ndarray
    u: np.ndarray
    r: float
    K_general: float
    K_closed: float | None
    theta: float
    K_corollary: float | None = None
    flags: list[str] = field(default_factory=list)

    @property
    def delta(self) -> float | None:
        if self.K_closed is None:
            return None
        return abs(self.K_general - self.K_closed)


def flag_curvature(model: AlphaBetaModel, y, u, force: bool = False) -> FlagCurvatureResult:
    """Both routes on one flag, expressed on the orthonormalized pair."""
    flags = _gate(model, force)
    y1, u1 = orthonormalize(model, y, u)
    k_gen = flag_curvature_general(model, y1, u1, force=True)
    parts = _closed_parts(model, y1, u1, True)
    return FlagCurvatureResult(
        y=y1,
        u=u1,
        r=parts.r,
        K_general=k_gen,
        K_closed=flag_curvature_closed(model, y1, u1, force=True),
        theta=parts.theta,
        K_corollary=flag_curvature_corollary(model, y1, u1, force=True),
        flags=flags,
    )


@dataclass
class ScanResult:
    rows: list[FlagCurvatureResult]
    skipped: int
    skip_reasons: dict
    flags: list[str]
    agree_tol: float

    @property
    def empty(self) -> bool:
        return not self.rows

    @property
    def max_delta(self) -> float:
        return max((r.delta for r in self.rows), default=0.0)

    @property
    def max_corollary_delta(self) -> float:
        return max((abs(r.K_closed - r.K_corollary) for r in self.rows), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_delta <= self.agree_tol

    def summary(self) -> dict:
        if self.empty:
            return {
                "empty": True, "rows": 0, "skipped": self.skipped, "skip_reasons": self.skip_reasons,
                "flags": self.flags, "passed": True,
            }
        ks = np.array([r.K_general for r in self.rows])
        return {
            "empty": False,
            "rows": len(self.rows),
            "skipped": self.skipped,
            "skip_reasons": self.skip_reasons,
            "K_min": float(ks.min()),
            "K_max": float(ks.max()),
            "K_mean": float(ks.mean()),
            "max_delta": self.max_delta,
            "max_corollary_delta": self.max_corollary_delta,
            "agree_tol": self.agree_tol,
            "passed": self.passed,
            "flags": self.flags,
        }


def scan_flagpoles(model: AlphaBetaModel, n_y: int, seed: int) -> np.ndarray:
    """The m basis vectors first, then seeded unit vectors, ``n_y`` in total."""
    k = model.dim_m
    rng = np.random.default_rng([seed, 4])
    out = []
    for i in range(n_y):
        if i < k:
            v = np.eye(k)[i]
        else:
            v = rng.standard_normal(k)
        out.append(v / model.inner.norm(v))
    return np.array(out).reshape(n_y, k)


def curvature_scan(model: AlphaBetaModel, n_y: int, n_planes: int, seed: int = 42, force: bool = False) -> ScanResult:
    flags = _gate(model, force)
    rng = np.random.default_rng([seed, 5])
    rows, skipped, reasons = [], 0, {}
    for y in scan_flagpoles(model, n_y, seed):
        mates = rng.standard_normal((n_planes, model.dim_m))
        for u in mates:
            try:
                rows.append(flag_curvature(model, y, u, force=True))
            except (DegenerateFlag, ThetaNearZero, DomainError) as exc:
                skipped += 1
                key = type(exc).__name__
                reasons[key] = reasons.get(key, 0) + 1
    return ScanResult(rows, skipped, reasons, flags, model.tol.curvature_agree_tol)
