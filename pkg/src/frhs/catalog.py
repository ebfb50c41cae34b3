"""Built-in example models.

Each entry records the verdict it must reproduce and a few curvature facts,
with the tolerance the fact was established at.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownId
from .lie_algebra import StructureConstants, decompose, validate
from .metric import AlphaBetaModel, InnerProduct, PhiFamily

SU2 = [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [2, 0, 1, 1.0]]
HEISENBERG = [[0, 1, 2, 1.0]]


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    dim: int
    brackets: list
    h_indices: list
    metric: list
    X: list
    phi: PhiFamily
    expected_verdict: str
    facts: dict = field(default_factory=dict)
    notes: str = ""

    def model(self) -> AlphaBetaModel:
        alg = validate(StructureConstants.from_entries(self.dim, self.brackets))
        dec = decompose(alg, self.h_indices)
        return AlphaBetaModel(dec, InnerProduct(np.array(self.metric, float)), np.array(self.X, float), self.phi, name=self.id)


def _eye(n):
    return np.eye(n).tolist()


_ENTRIES = [
    CatalogEntry(
        "su2_biinvariant",
        3, SU2, [], _eye(3), [0.0, 0.0, 0.0],
        PhiFamily.riemannian(),
        "NaturallyReductive",
        facts={"constant_flag_curvature": (0.25, 1e-10)},
        notes="su(2) with the bi-invariant inner product and phi = 1; round 3-sphere of curvature 1/4.",
    ),
    CatalogEntry(
        "u2_randers",
        4, SU2, [], _eye(4), [0.0, 0.0, 0.0, 0.5],
        PhiFamily.randers(),
        "NaturallyReductive",
        facts={"central_flag_curvature": (0.0, 1e-12), "K_e1_e0": (0.25, 1e-10)},
        notes="su(2) + centre e3, Randers with central drift; bi-invariant, central flags are flat.",
    ),
    CatalogEntry(
        "u2_matsumoto",
        4, SU2, [], _eye(4), [0.0, 0.0, 0.0, 0.3],
        PhiFamily.matsumoto(),
        "NaturallyReductive",
        facts={"admissible": (True, 0.0)},
        notes="u(2) with a Matsumoto metric, |X| = 0.3 inside the bound 1/2.",
    ),
    CatalogEntry(
        "u2_kropina",
        4, SU2, [], _eye(4), [0.0, 0.0, 0.0, 0.5],
        PhiFamily.kropina(s_min=0.05),
        "NaturallyReductive",
        facts={"domain_skips_positive": (True, 0.0)},
        notes="u(2) with a Kropina metric, evaluated on the cone s >= 0.05.",
    ),
    CatalogEntry(
        "heisenberg_randers",
        3, HEISENBERG, [], _eye(3), [0.0, 0.0, 0.5],
        PhiFamily.randers(),
        "NotNaturallyReductive",
        facts={"riemannian_nr_residual": (1.0, 1e-12), "riemannian_nr_witness": ((0, 1, 2), 0.0)},
        notes="Heisenberg algebra, left-invariant Randers metric; fails natural reductivity at (e0, e1, e2).",
    ),
    CatalogEntry(
        "so3_sphere",
        3, SU2, [2], _eye(2), [0.0, 0.0],
        PhiFamily.riemannian(),
        "NaturallyReductive",
        facts={"constant_flag_curvature": (1.0, 1e-10)},
        notes="SO(3)/SO(2) with the standard metric: unit 2-sphere, curvature 1.",
    ),
]

_BY_ID = {e.id: e for e in _ENTRIES}


def catalog_list() -> list[CatalogEntry]:
    return list(_ENTRIES)


def catalog_entry(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise UnknownId(f"unknown catalog id {entry_id!r}; known: {', '.join(_BY_ID)}") from None


def catalog_get(entry_id: str) -> AlphaBetaModel:
    return catalog_entry(entry_id).model()


def catalog_export(entry_id: str, path) -> None:
    from .modelfile import save_model

    save_model(catalog_get(entry_id), path)
