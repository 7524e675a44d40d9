"""Prototype weight data from a genotype via the miniversal unfolding.

The unfolding parameters correspond to a basis of the normal space to the
extended contact tangent space of the genotype germ inside the jet space
of vector-valued germs.  Everything is graded by the torus weight, so the
computation splits into small independent buckets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .algebra import WeightVector
from .catalog import CatalogError, GenotypeSpec, SingularityEntry, format_polynomial
from .exact import echelon

Exponent = tuple[int, ...]


class UnfoldingError(ArithmeticError):
    pass


@dataclass(frozen=True, order=True)
class MonomialVector:
    """``x^exponent * e_component``; ``weight`` is the induced unfolding-parameter weight."""

    exponent: Exponent
    component: int
    weight: WeightVector

    @property
    def degree(self) -> int:
        return sum(self.exponent)

    def key(self) -> tuple:
        return (self.degree, self.component, self.exponent)

    def render(self, names: Sequence[str]) -> str:
        body = "".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, self.exponent) if k
        ) or "1"
        return f"{body}*e{self.component + 1}"


@dataclass(frozen=True)
class JetSpan:
    """Tangent directions per torus-weight bucket, as echelon rows over that bucket's columns."""

    jet_bound: int
    buckets: dict[WeightVector, tuple[list[tuple[Exponent, int]], list[list[int]]]]


def _monomials(nvars: int, lo: int, hi: int) -> list[Exponent]:
    out = []
    for deg in range(lo, hi + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _component_weights(g: GenotypeSpec) -> list[WeightVector]:
    """Target component weights over the full torus: base rank plus one coordinate per padding."""
    extra = g.padded
    r = g.rank + extra
    out = [tuple(rel.weight) + (0,) * extra for rel in g.relations]
    for j in range(g.padded):
        w = [0] * r
        w[g.rank + j] = 1
        out.append(tuple(w))
    return out


def _vector_weight(g: GenotypeSpec, comp_w: list[WeightVector], e: Exponent, k: int) -> WeightVector:
    mw = g.monomial_weight(e) + (0,) * g.padded
    return tuple(a - b for a, b in zip(comp_w[k], mw))


def _derivative(poly: dict[Exponent, int], i: int) -> dict[Exponent, int]:
    out = {}
    for e, c in poly.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = out.get(tuple(f), 0) + c * e[i]
    return out


def _shift(poly: dict[Exponent, int], h: Exponent, bound: int) -> dict[Exponent, int]:
    out = {}
    for e, c in poly.items():
        f = tuple(a + b for a, b in zip(e, h))
        if sum(f) <= bound:
            out[f] = c
    return out


def _generators(g: GenotypeSpec, bound: int) -> list[dict[tuple[Exponent, int], int]]:
    """Truncated spanning set of the extended tangent space (vectors as {(exp, comp): coeff})."""
    n = g.n_vars
    rels = [r.as_dict() for r in g.relations]
    gens = []
    hs = _monomials(n, 0, bound)
    for i in range(n):
        parts = [_derivative(r, i) for r in rels]
        for h in hs:
            vec = {}
            for j, p in enumerate(parts):
                for e, c in _shift(p, h, bound).items():
                    vec[(e, j)] = c
            if vec:
                gens.append(vec)
    for r in rels:
        for h in hs:
            shifted = _shift(r, h, bound)
            if not shifted:
                continue
            for k in range(g.n_components):
                gens.append({(e, k): c for e, c in shifted.items()})
    return gens


def tangent_span(g: GenotypeSpec, jet_bound: int) -> JetSpan:
    comp_w = _component_weights(g)
    gens = _generators(g, jet_bound)
    by_bucket: dict[WeightVector, list[dict]] = {}
    for vec in gens:
        (e, k) = next(iter(vec))
        by_bucket.setdefault(_vector_weight(g, comp_w, e, k), []).append(vec)
    columns: dict[WeightVector, list[tuple[Exponent, int]]] = {}
    for e in _monomials(g.n_vars, 1, jet_bound):
        for k in range(g.n_components):
            columns.setdefault(_vector_weight(g, comp_w, e, k), []).append((e, k))
    buckets = {}
    for w, cols in columns.items():
        # largest key first so that pivots land on large monomials
        cols = sorted(cols, key=lambda ek: (sum(ek[0]), ek[1], ek[0]), reverse=True)
        index = {c: i for i, c in enumerate(cols)}
        rows = []
        for vec in by_bucket.get(w, []):
            row = [0] * len(cols)
            for c, v in vec.items():
                row[index[c]] = v
            rows.append(row)
        ech, _ = echelon(rows, len(cols))
        buckets[w] = (cols, ech)
    return JetSpan(jet_bound, buckets)


def _raw_basis(g: GenotypeSpec, jet_bound: int) -> list[MonomialVector]:
    if jet_bound < 1:
        raise ValueError("jet bound must be at least 1")
    problems = g.check()
    if problems:
        raise CatalogError("; ".join(problems))
    comp_w = _component_weights(g)
    span = tangent_span(g, jet_bound)
    out = []
    for w, (cols, ech) in span.buckets.items():
        pivots = {next(i for i, v in enumerate(row) if v) for row in ech}
        for i, (e, k) in enumerate(cols):
            if i not in pivots:
                out.append(MonomialVector(e, k, _vector_weight(g, comp_w, e, k)))
    out.sort(key=MonomialVector.key)
    return out


def normal_basis(g: GenotypeSpec, jet_bound: int) -> list[MonomialVector]:
    """Monomial representatives of the unfolding directions, smallest key first.

    Raises :class:`UnfoldingError` when a representative sits in one of the
    two highest jet degrees, which means the truncation is not yet trusted.
    """
    basis = _raw_basis(g, jet_bound)
    high = [v for v in basis if v.degree >= jet_bound - 1]
    if high:
        raise UnfoldingError(
            f"jet bound too small: {high[0].render(g.names)} survives at jet bound {jet_bound}"
        )
    return basis


def check_stabilization(g: GenotypeSpec, jet_bound: int) -> bool:
    return _raw_basis(g, jet_bound) == _raw_basis(g, jet_bound + 1)


def stable_jet_bound(g: GenotypeSpec, start: int | None = None, cap: int | None = None) -> int:
    """Smallest bound from ``start`` at which the basis is trusted and unchanged one step up."""
    top = max((sum(e) for r in g.relations for e, _ in r.poly), default=0)
    n = start if start is not None else top + 2
    cap = cap if cap is not None else 2 * n + 4
    while n <= cap:
        raw = _raw_basis(g, n)
        if all(v.degree < n - 1 for v in raw) and raw == _raw_basis(g, n + 1):
            return n
        n += 1
    raise UnfoldingError(f"jet bound too small: no stabilization up to {cap}")


def derive_entry(
    g: GenotypeSpec,
    ell: int,
    jet_bound: int | None = None,
    name: str = "",
    presentation: str = "",
    provenance: str = "derived",
) -> SingularityEntry:
    """Prototype weight data for the genotype viewed in relative dimension ``ell``."""
    g = g.with_ell(ell)
    if jet_bound is None:
        jet_bound = stable_jet_bound(g)
    basis = normal_basis(g, jet_bound)
    extra = g.padded
    rank = g.rank + extra
    var_w = [tuple(w) + (0,) * extra for _, w in g.variables]
    unf = [v.weight for v in basis]
    source = var_w + unf
    for i, w in enumerate(source):
        if not any(w):
            what = g.variables[i][0] if i < len(var_w) else basis[i - len(var_w)].render(g.names)
            raise UnfoldingError(
                f"non-quasi-homogeneous weight assignment: direction {what} has weight zero"
            )
    target = _component_weights(g) + unf
    if not presentation:
        rels = [format_polynomial(r.as_dict(), g.names) for r in g.relations]
        presentation = "(" + ",".join(rels) + ")" if rels else "(0)"
    return SingularityEntry(
        name=name,
        presentation=presentation,
        ell=ell,
        codim=len(source),
        torus_rank=rank,
        genotype=g,
        source_weights=tuple(source),
        target_weights=tuple(target),
        provenance=provenance,
    )

