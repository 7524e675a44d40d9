"""Catalogs of contact singularities with prototype torus-weight data.

A catalog lists, for one relative dimension ``ell``, every contact
singularity up to some codimension together with the torus weights of its
prototype's source and target representations.  The JSON layout::

    {"ell": 0, "max_codim": 8, "entries": [
        {"name": "A2", "presentation": "(x^3)", "codim": 2, "torus_rank": 1,
         "genotype": {"variables": [{"name": "x", "weight": [1]}],
                      "relations": [{"poly": "x^3", "weight": [3]}],
                      "padded": 0},
         "source_weights": [[1], [2]], "target_weights": [[3], [2]],
         "provenance": "derived"}, ...]}
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .algebra import WeightVector, poly_mul, total_chern


class CatalogError(ValueError):
    """A catalog file failed to parse or violates an invariant."""


def mather_bound(ell: int) -> int:
    if ell < 0:
        raise ValueError("relative dimension must be non-negative")
    return 6 * ell + 8 if ell <= 3 else 6 * ell + 7


# ---------------------------------------------------------------------------
# polynomials in genotype variables

Exponent = tuple[int, ...]


def parse_polynomial(text: str, names: Sequence[str]) -> dict[Exponent, int]:
    """Parse ``"x^2+y^3"``, ``"2xz + yz"``, ``"x*y - z^3"`` over the given variable names."""
    by_len = sorted(names, key=len, reverse=True)
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise CatalogError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise CatalogError(f"cannot parse polynomial {text!r}")
    out: dict[Exponent, int] = {}
    for term in terms:
        sign = -1 if term[0] == "-" else 1
        body = term.lstrip("+-")
        m = re.match(r"\d+", body)
        coeff = 1
        if m:
            coeff = int(m.group())
            body = body[m.end():]
        exps = [0] * len(names)
        pos = 0
        while pos < len(body):
            if body[pos] == "*":
                pos += 1
                continue
            for name in by_len:
                if body.startswith(name, pos):
                    pos += len(name)
                    power = 1
                    pm = re.match(r"\^(\d+)", body[pos:])
                    if pm:
                        power = int(pm.group(1))
                        pos += pm.end()
                    exps[list(names).index(name)] += power
                    break
            else:
                raise CatalogError(f"unknown variable in {text!r} at {body[pos:]!r}")
        key = tuple(exps)
        out[key] = out.get(key, 0) + sign * coeff
        if out[key] == 0:
            del out[key]
    return out


def format_polynomial(poly: dict[Exponent, int], names: Sequence[str]) -> str:
    parts = []
    for e in sorted(poly, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = poly[e]
        body = "".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 and body else str(abs(c))
        parts.append(f"{sign}{mag}{body}")
    s = "".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------------------
# data model


def _weight(w: Iterable[int]) -> WeightVector:
    return tuple(int(x) for x in w)


@dataclass(frozen=True)
class Relation:
    poly: tuple[tuple[Exponent, int], ...]
    weight: WeightVector

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.poly)


@dataclass(frozen=True)
class GenotypeSpec:
    """Germ (x_1..x_a) -> (r_1..r_b, 0..0) with weights over a torus of rank ``rank``."""

    variables: tuple[tuple[str, WeightVector], ...]
    relations: tuple[Relation, ...]
    padded: int = 0

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.variables]

    @property
    def rank(self) -> int:
        ws = [w for _, w in self.variables] + [r.weight for r in self.relations]
        return len(ws[0]) if ws else 0

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_components(self) -> int:
        return len(self.relations) + self.padded

    def monomial_weight(self, e: Sequence[int]) -> WeightVector:
        r = self.rank
        acc = [0] * r
        for k, (_, w) in zip(e, self.variables):
            for i in range(r):
                acc[i] += k * w[i]
        return tuple(acc)

    def with_ell(self, ell: int) -> "GenotypeSpec":
        padded = self.n_vars + ell - len(self.relations)
        if padded < 0:
            raise CatalogError(
                f"relative dimension {ell} is too small for {len(self.relations)} relations "
                f"in {self.n_vars} variables"
            )
        return GenotypeSpec(self.variables, self.relations, padded)

    def check(self) -> list[str]:
        """Invariant violations (empty list when valid)."""
        problems = []
        r = self.rank
        for name, w in self.variables:
            if len(w) != r:
                problems.append(f"variable {name} weight has length {len(w)} != {r}")
        for rel in self.relations:
            poly = rel.as_dict()
            if len(rel.weight) != r:
                problems.append(f"relation weight {list(rel.weight)} has wrong length")
                continue
            for e in poly:
                if sum(e) < 2:
                    problems.append(
                        f"relation {format_polynomial(poly, self.names)} is not in the square "
                        "of the maximal ideal"
                    )
                    break
            for e in poly:
                if self.monomial_weight(e) != rel.weight:
                    problems.append(
                        f"relation {format_polynomial(poly, self.names)} is not weighted "
                        f"homogeneous of weight {list(rel.weight)}"
                    )
                    break
        if self.padded < 0:
            problems.append("negative padding")
        return problems

    @classmethod
    def build(
        cls,
        variables: Sequence[tuple[str, Sequence[int]]],
        relations: Sequence[str],
        padded: int = 0,
    ) -> "GenotypeSpec":
        """Relation weights are read off the first monomial of each relation."""
        vars_ = tuple((n, _weight(w)) for n, w in variables)
        names = [n for n, _ in vars_]
        tmp = cls(vars_, (), padded)
        rels = []
        for text in relations:
            poly = parse_polynomial(text, names)
            first = sorted(poly)[0]
            rels.append(Relation(tuple(sorted(poly.items())), tmp.monomial_weight(first)))
        return cls(vars_, tuple(rels), padded)

    def to_dict(self) -> dict:
        names = self.names
        return {
            "variables": [{"name": n, "weight": list(w)} for n, w in self.variables],
            "relations": [
                {"poly": format_polynomial(r.as_dict(), names), "weight": list(r.weight)}
                for r in self.relations
            ],
            "padded": self.padded,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenotypeSpec":
        try:
            vars_ = tuple((v["name"], _weight(v["weight"])) for v in data.get("variables", []))
            names = [n for n, _ in vars_]
            rels = tuple(
                Relation(
                    tuple(sorted(parse_polynomial(r["poly"], names).items())), _weight(r["weight"])
                )
                for r in data.get("relations", [])
            )
            return cls(vars_, rels, int(data.get("padded", 0)))
        except (KeyError, TypeError) as exc:
            raise CatalogError(f"malformed genotype: {exc}") from exc


@dataclass(frozen=True)
class SingularityEntry:
    name: str
    presentation: str
    ell: int
    codim: int
    torus_rank: int
    genotype: GenotypeSpec
    source_weights: tuple[WeightVector, ...]
    target_weights: tuple[WeightVector, ...]
    provenance: str = ""
    aliases: tuple[str, ...] = field(default=(), compare=False)

    def relation_and_padding_weights(self) -> list[WeightVector]:
        """Genotype target weights embedded in the full torus (padding = fresh parameters)."""
        r0 = self.genotype.rank
        extra = self.torus_rank - r0
        out = [tuple(r.weight) + (0,) * extra for r in self.genotype.relations]
        for j in range(self.genotype.padded):
            w = [0] * self.torus_rank
            if r0 + j < self.torus_rank:
                w[r0 + j] = 1
            out.append(tuple(w))
        return out

    def variable_weights(self) -> list[WeightVector]:
        extra = self.torus_rank - self.genotype.rank
        return [tuple(w) + (0,) * extra for _, w in self.genotype.variables]

    def check(self) -> list[str]:
        problems = [f"genotype: {p}" for p in self.genotype.check()]
        if self.codim != len(self.source_weights):
            problems.append(
                f"codim {self.codim} != number of source weights {len(self.source_weights)}"
            )
        if len(self.target_weights) != len(self.source_weights) + self.ell:
            problems.append(
                f"{len(self.target_weights)} target weights, expected codim + ell = "
                f"{len(self.source_weights) + self.ell}"
            )
        for w in self.source_weights + self.target_weights:
            if len(w) != self.torus_rank:
                problems.append(f"weight {list(w)} does not have length torus_rank={self.torus_rank}")
                break
        if self.genotype.n_components != self.genotype.n_vars + self.ell:
            problems.append(
                f"genotype has {self.genotype.n_components} target components, expected "
                f"{self.genotype.n_vars + self.ell}"
            )
        return problems

    def zero_source_weights(self) -> list[int]:
        return [i for i, w in enumerate(self.source_weights) if not any(w)]

    def reduced_quotient(self) -> tuple[Counter, Counter]:
        """Numerator/denominator weight multisets of c(target)/c(source) after cancellation."""
        num = Counter(self.target_weights)
        den = Counter(self.source_weights)
        common = num & den
        return num - common, den - common

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "presentation": self.presentation,
            "codim": self.codim,
            "torus_rank": self.torus_rank,
            "genotype": self.genotype.to_dict(),
            "source_weights": [list(w) for w in self.source_weights],
            "target_weights": [list(w) for w in self.target_weights],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict, ell: int) -> "SingularityEntry":
        try:
            return cls(
                name=str(data["name"]),
                presentation=str(data.get("presentation", "")),
                ell=ell,
                codim=int(data["codim"]),
                torus_rank=int(data["torus_rank"]),
                genotype=GenotypeSpec.from_dict(data["genotype"]),
                source_weights=tuple(_weight(w) for w in data["source_weights"]),
                target_weights=tuple(_weight(w) for w in data["target_weights"]),
                provenance=str(data.get("provenance", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CatalogError):
                raise
            name = data.get("name", "?") if isinstance(data, dict) else "?"
            raise CatalogError(f"entry {name}: malformed field ({exc})") from exc


def normalize_name(name: str) -> str:
    """Canonical entry name: ``A_2`` -> ``A2``, ``b'_{24}`` -> ``I24``, ``b24`` -> ``III24``."""
    s = name.strip().replace("_", "").replace("{", "").replace("}", "").replace(" ", "")
    m = re.fullmatch(r"b('?)(\d\d)", s)
    if m:
        return ("I" if m.group(1) else "III") + m.group(2)
    return s


@dataclass(frozen=True)
class Catalog:
    ell: int
    max_codim: int
    entries: tuple[SingularityEntry, ...]

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def get(self, name: str) -> SingularityEntry:
        key = normalize_name(name)
        flat = key.replace(" ", "")
        for e in self.entries:
            if normalize_name(e.name) == key or e.presentation.replace(" ", "") == flat:
                return e
        raise KeyError(f"unknown singularity {name!r} for ell={self.ell}")

    def __contains__(self, name: str) -> bool:
        try:
            self.get(name)
        except KeyError:
            return False
        return True

    def up_to(self, d: int) -> list[SingularityEntry]:
        return [e for e in self.entries if e.codim <= d]

    def restrict(self, names: Iterable[str]) -> "Catalog":
        keep = {self.get(n).name for n in names}
        return Catalog(self.ell, self.max_codim, tuple(e for e in self.entries if e.name in keep))

    def with_entries(self, entries: Iterable[SingularityEntry]) -> "Catalog":
        return Catalog(self.ell, self.max_codim, tuple(entries))

    def key(self) -> tuple:
        return (self.ell, self.max_codim, self.entries)

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "max_codim": self.max_codim,
            "entries": [e.to_dict() for e in self.entries],
        }

    def check(self) -> list[str]:
        problems = []
        if self.max_codim > mather_bound(self.ell):
            problems.append(
                f"max_codim {self.max_codim} exceeds the Mather bound {mather_bound(self.ell)}"
            )
        seen = set()
        for e in self.entries:
            key = normalize_name(e.name)
            if key in seen:
                problems.append(f"duplicate entry name {e.name}")
            seen.add(key)
            if e.ell != self.ell:
                problems.append(f"{e.name}: ell {e.ell} != catalog ell {self.ell}")
            for p in e.check():
                problems.append(f"{e.name}: {p}")
            if e.zero_source_weights():
                problems.append(f"{e.name}: zero source weight (Euler class vanishes)")
            if not _cancellation_holds(e):
                problems.append(f"{e.name}: unfolding-weight cancellation identity fails")
        opens = [e for e in self.entries if e.codim == 0]
        if len(opens) != 1:
            problems.append(f"expected exactly one codimension-0 entry, found {len(opens)}")
        return problems


def _cancellation_holds(e: SingularityEntry) -> bool:
    lhs = Counter(e.target_weights) + Counter(e.variable_weights())
    rhs = Counter(e.relation_and_padding_weights()) + Counter(e.source_weights)
    return lhs == rhs


# ---------------------------------------------------------------------------
# I/O


def catalog_from_dict(data: dict) -> Catalog:
    try:
        ell = int(data["ell"])
        max_codim = int(data["max_codim"])
        raw = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(f"catalog header malformed: {exc}") from exc
    entries = tuple(SingularityEntry.from_dict(d, ell) for d in raw)
    return Catalog(ell, max_codim, entries)


def load_catalog(path: str | Path) -> Catalog:
    """Read and fully check a catalog file; raises :class:`CatalogError`."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    cat = catalog_from_dict(data)
    problems = cat.check()
    if problems:
        raise CatalogError("; ".join(problems))
    return cat


def dump_catalog(cat: Catalog) -> str:
    """Deterministic JSON text (one weight list per line keeps diffs readable)."""
    text = json.dumps(cat.to_dict(), indent=1)
    text = re.sub(
        r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]",
        lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]",
        text,
    )
    return text + "\n"


_BUNDLED: dict[int, Catalog] = {}


def bundled_catalog(ell: int) -> Catalog:
    if ell not in _BUNDLED:
        ref = resources.files("ssmthom") / "data" / f"catalog_l{ell}.json"
        if not ref.is_file():
            raise CatalogError(f"no bundled catalog for ell={ell}")
        with resources.as_file(ref) as p:
            _BUNDLED[ell] = load_catalog(p)
    return _BUNDLED[ell]


# ---------------------------------------------------------------------------
# reference classification (names and codimensions from the published tables)

REFERENCE_CODIMS: dict[int, dict[str, int]] = {
    0: {
        **{f"A{i}": i for i in range(9)},
        "I22": 4, "I23": 5, "I24": 6, "I33": 6, "I25": 7, "I34": 7,
        "I26": 8, "I35": 8, "I44": 8, "c2": 7, "c4": 8,
    },
    1: {
        **{f"A{i}": 2 * i for i in range(8)},
        "III22": 6, "I22": 7, "III23": 8, "I23": 9, "III24": 10, "III33": 10,
        "I24": 11, "I33": 11, "c1": 11, "III25": 12, "III34": 12, "c2": 12, "d1": 12,
        "I25": 13, "I34": 13, "c3": 13, "d2": 13,
        "III26": 14, "III35": 14, "III44": 14, "c4": 14, "c5": 14, "d3": 14, "d4": 14,
    },
    2: {
        **{f"A{i}": 3 * i for i in range(6)},
        "III22": 8, "I22": 10, "III23": 11, "I23": 13, "III24": 14, "III33": 14,
        "c1": 15, "D": 15,
    },
}
REFERENCE_MAX_CODIM = {0: 8, 1: 14, 2: 15}


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    entry: str
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    ell: int
    degree: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def summary(self, n_entries: int) -> str:
        if self.passed:
            return f"{n_entries} entries, all checks pass"
        return f"{n_entries} entries, {len(self.failures())} failed checks"

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if c.passed else 'FAIL'} {c.entry} {c.name}" + (f": {c.detail}" if c.detail else "")
            for c in self.checks
        ]


def validate_catalog(cat: Catalog, d: int) -> ValidationReport:
    """Per-entry Euler, count, cancellation checks plus coverage and duplicates."""
    checks: list[Check] = []
    for e in cat.entries:
        zeros = e.zero_source_weights()
        checks.append(
            Check(e.name, "euler", not zeros, f"zero source weights at {zeros}" if zeros else "")
        )
        problems = e.check()
        checks.append(Check(e.name, "counts", not problems, "; ".join(problems)))
        checks.append(Check(e.name, "cancellation", _cross_multiplied(e, d)))
    cover = []
    if d > cat.max_codim:
        cover.append(f"degree {d} exceeds catalog max_codim {cat.max_codim}")
    if d > mather_bound(cat.ell):
        cover.append(f"degree {d} exceeds the Mather bound {mather_bound(cat.ell)}")
    ref = REFERENCE_CODIMS.get(cat.ell)
    if ref is not None:
        if d > REFERENCE_MAX_CODIM[cat.ell]:
            cover.append(
                f"bundled classification for ell={cat.ell} only reaches codim "
                f"{REFERENCE_MAX_CODIM[cat.ell]}"
            )
        for name, codim in ref.items():
            if codim > d:
                continue
            if name not in cat:
                cover.append(f"missing {name} (codim {codim})")
            elif cat.get(name).codim != codim:
                cover.append(f"{name} has codim {cat.get(name).codim}, expected {codim}")
    checks.append(Check("*", "coverage", not cover, "; ".join(cover)))
    dups = duplicate_scan(cat)
    checks.append(
        Check("*", "duplicates", not dups, ", ".join(f"{a}~{b}" for a, b in dups))
    )
    return ValidationReport(cat.ell, d, checks)


def _cross_multiplied(e: SingularityEntry, d: int) -> bool:
    r = e.torus_rank
    try:
        lhs = poly_mul(
            total_chern(e.target_weights, r, d)._coeffs, total_chern(e.variable_weights(), r, d)._coeffs, d
        )
        rhs = poly_mul(
            total_chern(e.relation_and_padding_weights(), r, d)._coeffs,
            total_chern(e.source_weights, r, d)._coeffs,
            d,
        )
    except ValueError:
        return False
    return lhs == rhs


# ---------------------------------------------------------------------------
# duplicate detection


def _restriction_data(e: SingularityEntry):
    num, den = e.reduced_quotient()
    return Counter(e.source_weights), num, den


def _apply(mat, w):
    return tuple(sum(Fraction(m) * x for m, x in zip(row, w)) for row in mat)


def _frac(ws: Counter) -> Counter:
    out: Counter = Counter()
    for w, k in ws.items():
        out[tuple(Fraction(x) for x in w)] += k
    return out


def _inverse(rows: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(rows)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


def _independent(vectors: list[WeightVector], r: int) -> list[WeightVector]:
    basis: list[WeightVector] = []
    reduced: list[tuple[int, list[Fraction]]] = []
    for w in vectors:
        v = [Fraction(x) for x in w]
        for piv, row in reduced:
            if v[piv]:
                f = v[piv] / row[piv]
                v = [a - f * b for a, b in zip(v, row)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is not None:
            reduced.append((lead, v))
            basis.append(w)
        if len(basis) == r:
            break
    return basis


def _mapped(M, data: Counter) -> Counter:
    out: Counter = Counter()
    for w, k in data.items():
        out[_apply(M, w)] += k
    return out


def _equivalent(e: SingularityEntry, f: SingularityEntry) -> bool:
    if e.codim != f.codim or e.torus_rank != f.torus_rank:
        return False
    src_e, num_e, den_e = _restriction_data(e)
    src_f, num_f, den_f = _restriction_data(f)
    for x, y in ((src_e, src_f), (num_e, num_f), (den_e, den_f)):
        if sorted(x.values()) != sorted(y.values()):
            return False
    r = e.torus_rank
    if r == 0:
        return num_e == num_f and den_e == den_f
    # a basis of source weights must land on source weights of equal multiplicity
    basis = _independent(list(src_e), r)
    pool = list(src_f)
    if len(basis) < r:
        basis = _independent(list(src_e) + list(num_e) + list(den_e), r)
        pool = list(set(src_f) | set(num_f) | set(den_f))
    if len(basis) < r:
        return False
    binv = _inverse([[Fraction(x) for x in b] for b in basis])
    want = (_frac(src_f), _frac(num_f), _frac(den_f))
    for images in product(pool, repeat=r):
        if any(src_e[b] != src_f.get(im, 0) for b, im in zip(basis, images)):
            continue
        # M sends basis[k] to images[k]
        M = [
            [sum(Fraction(images[k][i]) * binv[j][k] for k in range(r)) for j in range(r)]
            for i in range(r)
        ]
        got = tuple(
            Counter(_mapped(M, data)) for data in (src_e, num_e, den_e)
        )
        if got == want:
            return True
    return False


def duplicate_scan(cat: Catalog) -> list[tuple[str, str]]:
    """Pairs of entries whose restriction data agree up to a change of torus coordinates.

    Such pairs would impose contradictory interpolation conditions, so the
    algebras must be isomorphic and only one may appear in a catalog.
    """
    out = []
    es = list(cat.entries)
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            if _equivalent(es[i], es[j]):
                out.append((es[i].name, es[j].name))
    return out
