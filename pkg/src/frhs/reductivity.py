"""Natural reductivity checks and the combined verdict.

Every check returns a :class:`Check` carrying the worst residual and where
it was attained.  Residuals are absolute; sampled checks use flagpoles on the
unit sphere of the inner product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import RunConfig
from .lie_algebra import ReductiveDecomposition
from .metric import AlphaBetaModel, InnerProduct
from .tensors import (
    cartan_tensor,
    g_y_matrix,
    geodesic_term_closed,
    sample_unit_vectors,
)


class Verdict(str, Enum):
    NATURALLY_REDUCTIVE = "NaturallyReductive"
    NOT_NATURALLY_REDUCTIVE = "NotNaturallyReductive"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    tol: float
    witness: object = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.residual = float(self.residual)

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, np.ndarray):
            w = w.tolist()
        elif isinstance(w, tuple):
            w = list(w)
        return {"passed": self.passed, "residual": self.residual, "tol": self.tol, "witness": w, **self.extra}


def check_riemannian_nr(dec: ReductiveDecomposition, inner: InnerProduct, tol: float = 1e-10) -> Check:
    """``|<[x,y]_m, z> + <y, [x,z]_m>|`` over m-basis triples."""
    A = inner.matrix
    ad = dec.ad_on_m_tensor()  # ad[x] @ y = [x, y]_m
    # res[x, y, z] = <[x,y]_m, z> + <y, [x,z]_m>
    res = np.einsum("xky,kz->xyz", ad, A) + np.einsum("yk,xkz->xyz", A, ad)
    worst, witness = _argmax_first(np.abs(res))
    return Check("riemannian_nr", worst <= tol, worst, tol, witness)


def check_skew_adjoint(dec: ReductiveDecomposition, inner: InnerProduct, tol: float = 1e-10) -> Check:
    """Skew-adjointness of ``(ad x)_m`` for every basis vector ``x`` of g."""
    A = inner.matrix
    worst, witness = 0.0, None
    alg = dec.algebra
    for i in range(alg.dim):
        M = dec.ad_matrix_on_m(alg.basis(i))
        res = float(np.abs(M.T @ A + A @ M).max())
        if res > worst:
            worst, witness = res, i
    return Check("skew_adjoint_all_g", worst <= tol, worst, tol, witness)


def check_x_orthogonal(dec: ReductiveDecomposition, inner: InnerProduct, X, tol: float = 1e-10) -> Check:
    """``|<X, [u, v]_m>|`` over m-basis pairs."""
    ad = dec.ad_on_m_tensor()
    aX = inner.matrix @ np.asarray(X, float)
    res = np.abs(np.einsum("k,ukv->uv", aX, ad))
    worst, witness = _argmax_first(res)
    return Check("x_orthogonal_derived", worst <= tol, worst, tol, witness)


def _argmax_first(arr):
    """Largest entry and its index; ties resolve to the first in C order."""
    if arr.size == 0:
        return 0.0, None
    flat = int(np.argmax(arr))
    worst = float(arr.flat[flat])
    if worst == 0.0:
        return 0.0, None
    return worst, tuple(int(i) for i in np.unravel_index(flat, arr.shape))


def finsler_nr_residuals(sample, ad) -> np.ndarray:
    """Residual tensor ``R[x, u, v]`` of the Finsler natural reductivity identity
    at one flagpole, with ``x, u, v`` ranging over the m basis."""
    G = g_y_matrix(sample)
    C = cartan_tensor(sample)
    xy = np.einsum("xky,y->xk", ad, sample.y)  # [x, y]_m
    return (
        np.einsum("xku,kv->xuv", ad, G)
        + np.einsum("uk,xkv->xuv", G, ad)
        + 2.0 * np.einsum("xw,wuv->xuv", xy, C)
    )


def check_finsler_nr_def1(model: AlphaBetaModel, n_samples: int = 64, seed: int = 42) -> Check:
    tol = model.tol.nr_finsler_tol
    rng = np.random.default_rng([seed, 2])
    samples, skipped = sample_unit_vectors(model, rng, n_samples)
    ad = model.decomposition.ad_on_m_tensor()
    worst, witness = 0.0, None
    for s in samples:
        res = np.abs(finsler_nr_residuals(s, ad))
        val, idx = _argmax_first(res)
        if val > worst:
            worst, witness = val, {"y": s.y.tolist(), "x_u_v": list(idx)}
    return Check(
        "finsler_nr_def1", worst <= tol, worst, tol, witness,
        extra={"samples": len(samples), "skipped": skipped},
    )


def check_geodesic_vectors(model: AlphaBetaModel, n_samples: int = 64, seed: int = 42) -> Check:
    """``|g_y(y, [y, z]_m)|`` over sampled ``y`` and basis ``z``.

    The value comes from the reduced two-term expression; the full
    fundamental tensor is evaluated alongside and the largest disagreement is
    reported as ``route_delta``.
    """
    tol = model.tol.nr_finsler_tol
    rng = np.random.default_rng([seed, 3])
    samples, skipped = sample_unit_vectors(model, rng, n_samples)
    dec = model.decomposition
    eye = np.eye(model.dim_m)
    worst, witness, route_delta = 0.0, None, 0.0
    for s in samples:
        G = g_y_matrix(s)
        for zi in range(model.dim_m):
            w = dec.bracket_m(s.y, eye[zi])
            closed = geodesic_term_closed(s, w)
            generic = float(s.y @ G @ w)
            route_delta = max(route_delta, abs(closed - generic))
            if abs(closed) > worst:
                worst, witness = abs(closed), {"y": s.y.tolist(), "z": zi}
    return Check(
        "geodesic_vectors", worst <= tol, worst, tol, witness,
        extra={"samples": len(samples), "skipped": skipped, "route_delta": route_delta},
    )


def phi_prime_flags(model: AlphaBetaModel, n_samples: int = 64, seed: int = 42) -> dict:
    """How many sampled flagpoles have ``|phi'(r)|`` below tolerance."""
    rng = np.random.default_rng([seed, 2])
    samples, _ = sample_unit_vectors(model, rng, n_samples)
    small = sum(1 for s in samples if abs(s.phi[1]) < model.tol.phiprime_tol)
    return {"samples": len(samples), "phi_prime_small": small, "all_small": bool(samples) and small == len(samples)}


@dataclass
class ReductivityReport:
    riemannian_nr: Check
    skew_adjoint_all_g: Check
    x_orthogonal_derived: Check
    finsler_nr_def1: Check
    geodesic_vectors: Check
    phi_prime: dict
    verdict: Verdict
    reasons: list[str]
    assumptions: list[str]

    @property
    def checks(self) -> list[Check]:
        return [
            self.riemannian_nr,
            self.skew_adjoint_all_g,
            self.x_orthogonal_derived,
            self.finsler_nr_def1,
            self.geodesic_vectors,
        ]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "reasons": self.reasons,
            "assumptions": self.assumptions,
            "phi_prime": self.phi_prime,
            **{c.name: c.to_dict() for c in self.checks},
        }


def reductivity_verdict(model: AlphaBetaModel, config: RunConfig | None = None) -> ReductivityReport:
    config = config or RunConfig()
    tol = model.tol
    dec, inner = model.decomposition, model.inner
    riem = check_riemannian_nr(dec, inner, tol.nr_tol)
    skew = check_skew_adjoint(dec, inner, tol.nr_tol)
    xorth = check_x_orthogonal(dec, inner, model.X, tol.nr_tol)
    fins = check_finsler_nr_def1(model, config.n_samples, config.seed)
    geo = check_geodesic_vectors(model, config.n_samples, config.seed)
    pp = phi_prime_flags(model, config.n_samples, config.seed)

    reasons: list[str] = []
    assumptions = [
        "coincidence of the Chern connection of F with the Levi-Civita connection of a is not verified "
        "directly; the skew-adjoint + X-orthogonality certificate stands in for it",
        "equality of the geodesics of F and a (used by the converse direction) is assumed, not certified",
    ]
    certificate = skew.passed and xorth.passed
    if fins.extra["samples"] == 0:
        verdict = Verdict.INCONCLUSIVE
        reasons.append("no sampled flagpole lies in the phi domain")
    elif certificate and not fins.passed:
        verdict = Verdict.INCONCLUSIVE
        reasons.append(
            f"skew-adjoint and X-orthogonality certificate holds (residuals {skew.residual:.3e}, "
            f"{xorth.residual:.3e}) yet the Finsler identity residual is {fins.residual:.3e}; "
            "the implication forbids this, so the evaluation itself is suspect"
        )
    elif fins.passed:
        verdict = Verdict.NATURALLY_REDUCTIVE
        reasons.append(f"Finsler natural reductivity identity holds (max residual {fins.residual:.3e})")
        if certificate:
            reasons.append("algebraic certificate holds: (ad x)_m skew-adjoint for all x and a(X, [m, m]_m) = 0")
    else:
        verdict = Verdict.NOT_NATURALLY_REDUCTIVE
        reasons.append(f"Finsler natural reductivity identity fails (max residual {fins.residual:.3e})")
        if not riem.passed:
            reasons.append(
                f"underlying Riemannian metric is not naturally reductive: residual {riem.residual:.3e} "
                f"at m-basis triple {riem.witness}"
            )
        if not xorth.passed:
            reasons.append(f"a(X, [m, m]_m) != 0: {xorth.residual:.3e} at pair {xorth.witness}")

    if verdict is Verdict.NATURALLY_REDUCTIVE and dec.is_group_case:
        reasons.append("h is trivial: the metric is bi-invariant on the group")
    if pp["phi_prime_small"]:
        reasons.append(
            f"phi'(r) vanishes at {pp['phi_prime_small']} of {pp['samples']} samples; "
            "the converse direction (certificate from natural reductivity) does not apply there"
        )
    return ReductivityReport(riem, skew, xorth, fins, geo, pp, verdict, reasons, assumptions)
