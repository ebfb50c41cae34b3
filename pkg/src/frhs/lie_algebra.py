"""Finite-dimensional real Lie algebras given by structure constants.

An algebra of dimension ``n`` is described by sparse quadruples
``(i, j, k, c)`` meaning ``[e_i, e_j] = ... + c e_k``.  Only the ``i < j``
half is stored; the other half is synthesized by antisymmetry.  Vectors are
plain numpy arrays of basis coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL
from .errors import (
    AntisymmetryViolation,
    IndexOutOfRange,
    JacobiViolation,
    NotInvariant,
    NotSubalgebra,
    ValidationError,
)

DENSE_MAX_DIM = 32


@dataclass(frozen=True)
class StructureConstants:
    """Raw, unvalidated bracket data.

    ``entries`` is kept exactly as given so that conflicts can be reported
    against the user's own input.
    """

    dim: int
    entries: tuple[tuple[int, int, int, float], ...]

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[Sequence]) -> "StructureConstants":
        rows = []
        for e in entries:
            if len(e) != 4:
                raise ValidationError(f"bracket entry {list(e)!r} must have 4 items (i, j, k, value)")
            i, j, k, c = e
            if any(isinstance(t, bool) or int(t) != t for t in (i, j, k)):
                raise ValidationError(f"bracket entry {list(e)!r} has non-integer index")
            rows.append((int(i), int(j), int(k), float(c)))
        return cls(int(dim), tuple(rows))

    def normalized(self) -> dict[tuple[int, int, int], float]:
        """Map ``(i, j, k)`` with ``i < j`` to the coefficient.

        Raises on out-of-range indices and on explicit entries that disagree
        with antisymmetry.
        """
        n = self.dim
        if n < 1:
            raise ValidationError(f"dim must be >= 1, got {n}")
        table: dict[tuple[int, int, int], float] = {}
        origin: dict[tuple[int, int, int], tuple] = {}
        for entry in self.entries:
            i, j, k, c = entry
            for idx in (i, j, k):
                if not 0 <= idx < n:
                    raise IndexOutOfRange(f"index {idx} in entry {list(entry)} outside 0..{n - 1}")
            if i == j:
                if c != 0.0:
                    raise AntisymmetryViolation(f"entry {list(entry)} gives [e_{i}, e_{i}] != 0")
                continue
            key, val = ((i, j, k), c) if i < j else ((j, i, k), -c)
            if key in table and table[key] != val:
                raise AntisymmetryViolation(
                    f"entries {list(origin[key])} and {list(entry)} disagree on [e_{key[0]}, e_{key[1]}]"
                )
            table[key] = val
            origin[key] = entry
        return {key: val for key, val in table.items() if val != 0.0}


class LieAlgebra:
    """A validated Lie algebra.

    Use :func:`validate` to build one; the constructor assumes the data has
    already passed the antisymmetry and Jacobi checks.
    """

    def __init__(self, dim: int, table: dict, jacobi_residual: float):
        self.dim = dim
        self._table = dict(table)
        self.jacobi_residual = jacobi_residual
        keys = sorted(self._table)
        self._I = np.array([t[0] for t in keys], dtype=int)
        self._J = np.array([t[1] for t in keys], dtype=int)
        self._K = np.array([t[2] for t in keys], dtype=int)
        self._V = np.array([self._table[t] for t in keys], dtype=float)
        self._dense = _dense_tensor(dim, self._table) if dim <= DENSE_MAX_DIM else None

    @property
    def entries(self) -> list[tuple[int, int, int, float]]:
        """Nonzero structure constants with ``i < j`` in sorted order."""
        return [(i, j, k, self._table[(i, j, k)]) for (i, j, k) in sorted(self._table)]

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self._dense is not None:
            return np.einsum("i,j,ijk->k", x, y, self._dense)
        w = self._V * (x[self._I] * y[self._J] - x[self._J] * y[self._I])
        return np.bincount(self._K, weights=w, minlength=self.dim)

    def structure_tensor(self) -> np.ndarray:
        """Dense array ``c[i, j, k]`` with both antisymmetric halves filled."""
        if self._dense is not None:
            return self._dense.copy()
        return _dense_tensor(self.dim, self._table)

    def ad(self, x) -> np.ndarray:
        """Matrix of ``v -> [x, v]`` on the whole algebra (columns are images)."""
        c = self.structure_tensor()
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), c)


def _dense_tensor(n, table):
    c = np.zeros((n, n, n))
    for (i, j, k), v in table.items():
        c[i, j, k] = v
        c[j, i, k] = -v
    return c


def jacobi_residual(n: int, table: dict) -> tuple[float, tuple[int, int, int] | None]:
    """Worst cyclic-sum norm over basis triples ``i < j < k``.

    Triples with a repeated index vanish identically once the bracket is
    antisymmetric, so they are not visited.
    """
    c = _dense_tensor(n, table)
    # nested[i, j, k, :] = [e_i, [e_j, e_k]]
    nested = np.einsum("jkl,ilm->ijkm", c, c)
    cyc = nested + nested.transpose(1, 2, 0, 3) + nested.transpose(2, 0, 1, 3)
    norms = np.abs(cyc).max(axis=3) if n else np.zeros((0, 0, 0))
    worst, witness = 0.0, None
    for i, j, k in itertools.combinations(range(n), 3):
        if norms[i, j, k] > worst:
            worst, witness = float(norms[i, j, k]), (i, j, k)
    return worst, witness


def validate(sc: StructureConstants, jacobi_tol: float = DEFAULT_TOL.jacobi_tol) -> LieAlgebra:
    table = sc.normalized()
    residual, witness = jacobi_residual(sc.dim, table)
    if residual > jacobi_tol:
        raise JacobiViolation(residual, witness)
    return LieAlgebra(sc.dim, table, residual)


class ReductiveDecomposition:
    """Split ``g = h + m`` along coordinate subsets of the basis.

    Vectors of ``m`` are addressed in *m-coordinates*: a length ``len(m)``
    array indexed in the order of ``m_indices``.
    """

    def __init__(self, alg: LieAlgebra, h_indices: Sequence[int], m_indices: Sequence[int]):
        self.algebra = alg
        self.h_indices = tuple(h_indices)
        self.m_indices = tuple(m_indices)
        self._m = np.array(self.m_indices, dtype=int)
        self._h = np.array(self.h_indices, dtype=int)

    @property
    def dim_m(self) -> int:
        return len(self.m_indices)

    @property
    def is_group_case(self) -> bool:
        """True when ``h`` is trivial, i.e. the space is the group itself."""
        return not self.h_indices

    def proj_m(self, x) -> np.ndarray:
        out = np.zeros(self.algebra.dim)
        out[self._m] = np.asarray(x, dtype=float)[self._m]
        return out

    def proj_h(self, x) -> np.ndarray:
        out = np.zeros(self.algebra.dim)
        out[self._h] = np.asarray(x, dtype=float)[self._h]
        return out

    def embed(self, v_m) -> np.ndarray:
        out = np.zeros(self.algebra.dim)
        out[self._m] = v_m
        return out

    def m_coords(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float)[self._m].copy()

    def bracket_m(self, u_m, v_m) -> np.ndarray:
        """``[u, v]_m`` for ``u, v`` in m-coordinates, returned in m-coordinates."""
        return self.m_coords(self.algebra.bracket(self.embed(u_m), self.embed(v_m)))

    def ad_matrix_on_m(self, x) -> np.ndarray:
        """Matrix of ``v -> proj_m([x, v])`` on ``m``; ``x`` is in g-coordinates."""
        full = self.algebra.ad(x)
        return full[np.ix_(self._m, self._m)]

    def ad_on_m_tensor(self) -> np.ndarray:
        """``T[a, :, :]`` is the m-block of ``ad`` of the a-th m basis vector."""
        c = self.algebra.structure_tensor()
        return c[np.ix_(self._m, self._m, self._m)].transpose(0, 2, 1)


def decompose(alg: LieAlgebra, h_indices: Iterable[int], jacobi_tol: float = DEFAULT_TOL.jacobi_tol) -> ReductiveDecomposition:
    n = alg.dim
    h = sorted(int(i) for i in h_indices)
    if len(set(h)) != len(h):
        raise ValidationError(f"h_indices contains duplicates: {h}")
    for i in h:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"h index {i} outside 0..{n - 1}")
    hs = set(h)
    m = [i for i in range(n) if i not in hs]
    if not m:
        raise ValidationError("m is empty: h_indices cover the whole algebra")

    worst, pair = 0.0, None
    for a, b in itertools.combinations(h, 2):
        br = alg.bracket(alg.basis(a), alg.basis(b))
        res = float(np.abs(br[m]).max())
        if res > worst:
            worst, pair = res, (a, b)
    if worst > jacobi_tol:
        raise NotSubalgebra(worst, pair)

    worst, pair = 0.0, None
    for a in h:
        for b in m:
            br = alg.bracket(alg.basis(a), alg.basis(b))
            res = float(np.abs(br[h]).max())
            if res > worst:
                worst, pair = res, (a, b)
    if worst > jacobi_tol:
        raise NotInvariant(worst, pair)
    return ReductiveDecomposition(alg, h, m)
