"""Genotypes of the contact singularities bundled for ell = 0, 1, 2.

Each row gives the catalog name, the displayed local algebra, the genotype
variables with their weights over the largest torus we use, and the
relations.  The catalog files under ``data/`` are generated from this table
by :func:`build_catalog`.
"""

from __future__ import annotations

from math import gcd

from .catalog import REFERENCE_MAX_CODIM, Catalog, GenotypeSpec, SingularityEntry
from .unfolding import derive_entry

XY = [("x", [1, 0]), ("y", [0, 1])]


def _a(k: int):
    if k == 0:
        return ("A0", "(0)", [], [])
    return (f"A{k}", f"(x^{k + 1})", [("x", [1])], [f"x^{k + 1}"])


def _i(a: int, b: int):
    if a == b == 2:
        return ("I22", "(xy,x^2+y^2)", XY, ["x^2", "y^2"])
    g = gcd(a, b)
    return (f"I{a}{b}", f"(xy,x^{a}+y^{b})", [("x", [b // g]), ("y", [a // g])], ["xy", f"x^{a}+y^{b}"])


def _iii(a: int, b: int):
    if a == b == 2:
        return ("III22", "(x^2,xy,y^2)", XY, ["x^2", "xy", "y^2"])
    return (f"III{a}{b}", f"(xy,x^{a},y^{b})", XY, ["xy", f"x^{a}", f"y^{b}"])


C1 = ("c1", "(x^2,xy^2,y^3)", XY, ["x^2", "xy^2", "y^3"])
C2 = ("c2", "(x^2,y^3)", XY, ["x^2", "y^3"])
C3 = ("c3", "(x^2+y^3,xy^2,y^4)", [("x", [3]), ("y", [2])], ["x^2+y^3", "xy^2", "y^4"])
C4 = ("c4", "(x^2+y^3,xy^2)", [("x", [3]), ("y", [2])], ["x^2+y^3", "xy^2"])
C5 = ("c5", "(x^2,xy^2,y^4)", XY, ["x^2", "xy^2", "y^4"])
D1 = ("d1", "(x^2+y^2+z^2,xy,xz,yz)", [("x", [1]), ("y", [1]), ("z", [1])],
      ["x^2+y^2+z^2", "xy", "xz", "yz"])
D2 = ("d2", "(x^2,y^2,z^2,xy+xz)", [("x", [1, 0]), ("y", [0, 1]), ("z", [0, 1])],
      ["x^2", "y^2", "z^2", "xy+xz"])
D3 = ("d3", "(x^2-y^2+z^3,xy,xz,yz)", [("x", [3]), ("y", [3]), ("z", [2])],
      ["x^2-y^2+z^3", "xy", "xz", "yz"])
D4 = ("d4", "(x^2+yz,xz,y^2,z^2)", [("x", [1, 0]), ("y", [1, 1]), ("z", [1, -1])],
      ["x^2+yz", "xz", "y^2", "z^2"])
# (x^2-y^2, x^2-z^2, xy, xz, yz) after a linear change making the torus visible
D = ("D", "(x^2-y^2,x^2-z^2,xy,xz,yz)", [("u", [1, 1]), ("v", [1, -1]), ("w", [1, 0])],
     ["u^2", "v^2", "uw", "vw", "uv-w^2"])

GENOTYPES: dict[int, list[tuple]] = {
    0: [_a(k) for k in range(9)]
    + [_i(a, b) for a, b in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4), (2, 6), (3, 5), (4, 4)]]
    + [C2, C4],
    1: [_a(k) for k in range(8)]
    + [_iii(a, b) for a, b in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4), (2, 6), (3, 5), (4, 4)]]
    + [_i(a, b) for a, b in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4)]]
    + [C1, C2, C3, C4, C5, D1, D2, D3, D4],
    2: [_a(k) for k in range(6)]
    + [_iii(2, 2), _i(2, 2), _iii(2, 3), _i(2, 3), _iii(2, 4), _iii(3, 3), C1, D],
}

NOTES = {
    "I22": "torus of rank 2 from the presentation (x^2,y^2)",
    "D": "presented as (u^2,v^2,uw,vw,uv-w^2) to expose a rank-2 torus",
}


def genotype(ell: int, name: str) -> GenotypeSpec:
    for n, _, variables, relations in GENOTYPES[ell]:
        if n == name:
            return GenotypeSpec.build(variables, relations)
    raise KeyError(name)


def build_entry(ell: int, row: tuple) -> SingularityEntry:
    name, presentation, variables, relations = row
    g = GenotypeSpec.build(variables, relations)
    provenance = "derived" + (f"; {NOTES[name]}" if name in NOTES else "")
    return derive_entry(g, ell, name=name, presentation=presentation, provenance=provenance)


def build_catalog(ell: int) -> Catalog:
    entries = sorted(
        (build_entry(ell, row) for row in GENOTYPES[ell]),
        key=lambda e: e.codim,
    )
    return Catalog(ell, REFERENCE_MAX_CODIM[ell], tuple(entries))
