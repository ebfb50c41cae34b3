"""Invariant (alpha, beta)-metrics on the tangent space ``m``.

The Riemannian part is an inner product matrix ``A`` on ``m``; the 1-form is
represented by its dual vector ``X`` so that ``beta(y) = <X, y>_A``.  The
Finsler norm is ``F(y) = alpha(y) * phi(beta(y) / alpha(y))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DomainError, MetricError, NearZeroVector
from .lie_algebra import ReductiveDecomposition

FAMILIES = ("randers", "kropina", "matsumoto", "polynomial")
DEFAULT_S_MIN = 0.05
_DEFAULT_B0 = {"randers": 1.0, "matsumoto": 0.5, "kropina": math.inf}


@dataclass(frozen=True)
class PhiFamily:
    """The profile function ``phi`` of an (alpha, beta)-metric.

    ``coeffs`` holds ascending polynomial coefficients and is only used by
    the ``polynomial`` family.  ``b0`` bounds the admissible ``|X|``;
    ``s_min`` guards the singular point of kropina (``s = 0``) and of
    matsumoto (``s = 1``).
    """

    family: str
    coeffs: tuple[float, ...] = ()
    b0: float = math.inf
    s_min: float = DEFAULT_S_MIN

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown phi family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "polynomial" and not self.coeffs:
            raise ValueError("polynomial phi needs at least one coefficient")
        if not self.b0 > 0:
            raise ValueError(f"b0 must be positive, got {self.b0}")
        if not self.s_min > 0:
            raise ValueError(f"s_min must be positive, got {self.s_min}")

    @classmethod
    def randers(cls) -> "PhiFamily":
        return cls("randers", b0=_DEFAULT_B0["randers"])

    @classmethod
    def matsumoto(cls, s_min: float = DEFAULT_S_MIN) -> "PhiFamily":
        return cls("matsumoto", b0=_DEFAULT_B0["matsumoto"], s_min=s_min)

    @classmethod
    def kropina(cls, s_min: float = DEFAULT_S_MIN) -> "PhiFamily":
        return cls("kropina", b0=_DEFAULT_B0["kropina"], s_min=s_min)

    @classmethod
    def polynomial(cls, coeffs, b0: float = math.inf) -> "PhiFamily":
        return cls("polynomial", coeffs=tuple(float(c) for c in coeffs), b0=b0)

    @classmethod
    def riemannian(cls) -> "PhiFamily":
        """``phi == 1``; the metric collapses to alpha."""
        return cls.polynomial([1.0])

    @classmethod
    def default_b0(cls, family: str) -> float:
        return _DEFAULT_B0.get(family, math.inf)

    def in_domain(self, s: float) -> bool:
        try:
            self.derivs(s)
        except DomainError:
            return False
        return True

    def derivs(self, s: float) -> tuple[float, float, float, float]:
        """``(phi, phi', phi'', phi''')`` at ``s``, evaluated analytically."""
        s = float(s)
        fam = self.family
        if fam == "randers":
            out = (1.0 + s, 1.0, 0.0, 0.0)
        elif fam == "kropina":
            if s < self.s_min:
                raise DomainError(f"kropina requires s >= s_min={self.s_min}, got s={s:.6g}")
            out = (1.0 / s, -1.0 / s**2, 2.0 / s**3, -6.0 / s**4)
        elif fam == "matsumoto":
            if s >= 1.0 - self.s_min:
                raise DomainError(f"matsumoto requires s < 1 - s_min={1.0 - self.s_min}, got s={s:.6g}")
            d = 1.0 - s
            out = (1.0 / d, 1.0 / d**2, 2.0 / d**3, 6.0 / d**4)
        else:
            out = _horner_derivs(self.coeffs, s)
        if out[0] <= 0.0:
            raise DomainError(f"{fam} phi({s:.6g}) = {out[0]:.6g} is not positive")
        return out

    def to_dict(self) -> dict:
        params: dict = {}
        if self.family == "polynomial":
            params["coeffs"] = list(self.coeffs)
        if self.family in ("kropina", "matsumoto"):
            params["s_min"] = self.s_min
        if self.b0 != self.default_b0(self.family) or self.family == "polynomial":
            params["b0"] = None if math.isinf(self.b0) else self.b0
        return {"family": self.family, "params": params}


def _horner_derivs(coeffs, s):
    # value and first three derivatives carried through one Horner sweep
    p = d1 = d2 = d3 = 0.0
    for c in reversed(coeffs):
        d3 = d3 * s + 3.0 * d2
        d2 = d2 * s + 2.0 * d1
        d1 = d1 * s + p
        p = p * s + c
    return (p, d1, d2, d3)


@dataclass(frozen=True, eq=False)
class InnerProduct:
    matrix: np.ndarray

    def __post_init__(self):
        A = np.array(self.matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise MetricError(f"metric must be a square matrix, got shape {A.shape}")
        if not np.array_equal(A, A.T):
            raise MetricError("metric matrix is not symmetric")
        try:
            np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            raise MetricError("metric matrix is not positive definite") from None
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, u, v) -> float:
        return float(np.asarray(u) @ self.matrix @ np.asarray(v))

    def norm(self, u) -> float:
        return math.sqrt(max(self(u, u), 0.0))


@dataclass(frozen=True, eq=False)
class AlphaBetaModel:
    """A complete workbench model: algebra split, inner product, drift, phi."""

    decomposition: ReductiveDecomposition
    inner: InnerProduct
    X: np.ndarray
    phi: PhiFamily
    tol: Tolerances = field(default=DEFAULT_TOL)
    name: str = ""

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.shape != (self.decomposition.dim_m,):
            raise MetricError(f"X must have {self.decomposition.dim_m} m-coordinates, got shape {X.shape}")
        if self.inner.dim != self.decomposition.dim_m:
            raise MetricError(
                f"metric is {self.inner.dim}x{self.inner.dim} but m has dimension {self.decomposition.dim_m}"
            )
        X.setflags(write=False)
        object.__setattr__(self, "X", X)

    @property
    def A(self) -> np.ndarray:
        return self.inner.matrix

    @property
    def dim_m(self) -> int:
        return self.decomposition.dim_m

    @cached_property
    def x_norm(self) -> float:
        return self.inner.norm(self.X)

    def alpha(self, y) -> float:
        a2 = self.inner(y, y)
        if a2 <= self.tol.alpha_floor**2:
            raise NearZeroVector(f"alpha(y)^2 = {a2:.3e} is below the floor")
        return math.sqrt(a2)

    def beta(self, y) -> float:
        return self.inner(self.X, y)

    def r_value(self, y) -> float:
        return self.beta(y) / self.alpha(y)

    def finsler_norm(self, y) -> float:
        a = self.alpha(y)
        return a * self.phi.derivs(self.beta(y) / a)[0]

    def F2(self, y) -> float:
        return self.finsler_norm(y) ** 2

    def phi_prime_nonzero(self, y) -> bool:
        return abs(self.phi.derivs(self.r_value(y))[1]) >= self.tol.phiprime_tol

    def sample(self, y):
        from .tensors import TensorSample

        return TensorSample.at(self, y)

    def with_tol(self, tol: Tolerances) -> "AlphaBetaModel":
        return AlphaBetaModel(self.decomposition, self.inner, self.X, self.phi, tol, self.name)


def phi_derivs(fam: PhiFamily, s: float) -> tuple[float, float, float, float]:
    return fam.derivs(s)


@dataclass
class AdmissibilityReport:
    x_norm: float
    b0: float
    norm_ok: bool
    b: float
    grid_min: float
    grid_argmin: float | None
    convex_ok: bool
    grid_points: int
    skipped_points: int

    def __post_init__(self):
        self.norm_ok = bool(self.norm_ok)
        self.convex_ok = bool(self.convex_ok)

    @property
    def passed(self) -> bool:
        return self.norm_ok and self.convex_ok

    def to_dict(self) -> dict:
        return {
            "x_norm": self.x_norm,
            "b0": None if math.isinf(self.b0) else self.b0,
            "norm_ok": self.norm_ok,
            "b": self.b,
            "convexity_min": self.grid_min,
            "convexity_witness_s": self.grid_argmin,
            "convexity_ok": self.convex_ok,
            "grid_points": self.grid_points,
            "skipped_points": self.skipped_points,
            "passed": self.passed,
        }


def convexity_value(fam: PhiFamily, s: float, b: float) -> float:
    """``phi(s) - s phi'(s) + (b^2 - s^2) phi''(s)``."""
    p, d1, d2, _ = fam.derivs(s)
    return p - s * d1 + (b * b - s * s) * d2


def check_admissibility(model: AlphaBetaModel, grid: int = 101, b: float | None = None) -> AdmissibilityReport:
    """Norm bound on ``X`` plus the convexity condition sampled on ``s in [-b, b]``.

    ``b`` defaults to ``|X|``; pass a larger value to probe the condition
    further out.  Grid points where phi is undefined are skipped and counted.
    """
    fam = model.phi
    xn = model.x_norm
    bb = xn if b is None else float(b)
    worst, where, skipped = math.inf, None, 0
    for s in np.linspace(-bb, bb, grid):
        try:
            val = convexity_value(fam, s, bb)
        except DomainError:
            skipped += 1
            continue
        if val < worst:
            worst, where = val, float(s)
    return AdmissibilityReport(
        x_norm=xn,
        b0=fam.b0,
        norm_ok=xn < fam.b0,
        b=bb,
        grid_min=float(worst) if where is not None else math.nan,
        grid_argmin=where,
        convex_ok=where is not None and worst > 0.0,
        grid_points=grid,
        skipped_points=skipped,
    )
