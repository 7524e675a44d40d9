"""Interpolation of SSM-Thom polynomials from prototype restriction data.

Unknowns are the coefficients v_lambda of the Chern monomials c_lambda with
|lambda| <= d.  Each catalog entry contributes one scalar row per torus
monomial per degree: equality rows ``psi(T) = e/c`` for the target entry in
degrees 0..d, and vanishing rows for the degree s..d parts of
``psi(T) * c(source)`` for every other entry of codimension s <= d.

A degree-j row only involves unknowns of weight <= j, so the system is block
lower triangular by degree and is solved block by block.  Every row is
re-checked against the final solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from operator import mul
from typing import Sequence

from .algebra import (
    AlgebraError,
    ChernSeries,
    Partition,
    TorusPolynomial,
    chern_images,
    enumerate_partitions,
    euler_class,
    image_pieces,
    monomials_of_degree,
    poly_mul,
    substitute,
    total_chern,
)
from .catalog import Catalog, CatalogError, SingularityEntry, bundled_catalog, mather_bound
from .exact import bareiss_solve, echelon, integer_row, modular_pivots, rank


class SolverError(ArithmeticError):
    """Base class for failures of the interpolation solve."""


class InconsistentSystem(SolverError):
    pass


class Underdetermined(SolverError):
    def __init__(self, msg: str, free: list[Partition]):
        super().__init__(msg)
        self.free = free


# ---------------------------------------------------------------------------
# constraint systems


# 1: the target restricts to e(source)/c(source); 2: every other entry restricts to zero
AXIOM_NAMES = {1: "normalization", 2: "vanishing"}


@dataclass(frozen=True)
class RowTag:
    entry: str
    axiom: int
    degree: int
    monomial: str

    def __str__(self):
        kind = AXIOM_NAMES.get(self.axiom, f"axiom {self.axiom}")
        return f"{kind} condition for {self.entry} at degree {self.degree}, monomial {self.monomial}"


@dataclass
class ConstraintSystem:
    unknowns: list[Partition]
    rows: list[list[int]] = field(default_factory=list)
    rhs: list[Fraction | int] = field(default_factory=list)
    tags: list[RowTag] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return max((sum(p) for p in self.unknowns), default=0)

    def add_row(self, coeffs: Sequence, rhs, tag: RowTag) -> None:
        if len(coeffs) != len(self.unknowns):
            raise ValueError("row length does not match the unknowns")
        self.rows.append(list(coeffs))
        self.rhs.append(rhs)
        self.tags.append(tag)

    def row_dict(self, i: int) -> dict[Partition, object]:
        return {p: c for p, c in zip(self.unknowns, self.rows[i]) if c}

    def without(self, entry: str) -> "ConstraintSystem":
        keep = [i for i, t in enumerate(self.tags) if t.entry != entry]
        return ConstraintSystem(
            list(self.unknowns),
            [self.rows[i] for i in keep],
            [self.rhs[i] for i in keep],
            [self.tags[i] for i in keep],
        )

    def __len__(self):
        return len(self.rows)


def _mono_str(e: Sequence[int]) -> str:
    if not any(e):
        return "1"
    return str(TorusPolynomial(len(e), sum(e), {tuple(e): 1}))


def axiom_rhs(entry: SingularityEntry, d: int) -> TorusPolynomial:
    """e(source)/c(source) truncated at ``d``."""
    r = entry.torus_rank
    e = euler_class(entry.source_weights, r)
    c = total_chern(entry.source_weights, r, d)
    return TorusPolynomial(r, d, poly_mul(e._coeffs, c.inverse(d)._coeffs, d))


@lru_cache(maxsize=256)
def _image_table(src: tuple, tgt: tuple, r: int, d: int) -> dict[Partition, dict]:
    """psi(c_lambda) for every |lambda| <= d; each is homogeneous of degree |lambda|."""
    pieces = image_pieces(src, tgt, r, d)
    table: dict[Partition, dict] = {(): {(0,) * r: 1}}
    for lam in enumerate_partitions(d):
        if not lam:
            continue
        rest = table[lam[1:]]
        g = pieces[lam[0]]
        table[lam] = poly_mul(g, rest, d) if g and rest else {}
    return table


@lru_cache(maxsize=256)
def _multiplied_table(src: tuple, tgt: tuple, r: int, d: int) -> dict[Partition, dict]:
    """psi(c_lambda) * c(source), truncated at d."""
    c = total_chern(src, r, d)._coeffs
    return {lam: poly_mul(p, c, d) for lam, p in _image_table(src, tgt, r, d).items()}


def _entry_rows(entry: SingularityEntry, d: int, target: bool, unknowns: list[Partition]):
    r = entry.torus_rank
    src = tuple(sorted(entry.source_weights))
    tgt = tuple(sorted(entry.target_weights))
    if target:
        table = _image_table(src, tgt, r, d)
        rhs_poly = axiom_rhs(entry, d)._coeffs
        degrees = range(0, d + 1)
    else:
        table = _multiplied_table(src, tgt, r, d)
        rhs_poly = {}
        degrees = range(entry.codim, d + 1)
    cols = [table[lam] for lam in unknowns]
    weights = [sum(lam) for lam in unknowns]
    for j in degrees:
        for m in monomials_of_degree(r, j):
            row = [col.get(m, 0) if w <= j else 0 for col, w in zip(cols, weights)]
            rhs = rhs_poly.get(m, 0)
            if not rhs and not any(row):
                continue
            yield row, rhs, RowTag(entry.name, 1 if target else 2, j, _mono_str(m))


def _check_catalog(cat: Catalog, d: int) -> None:
    if d < 0:
        raise ValueError("degree must be non-negative")
    if d > mather_bound(cat.ell):
        raise CatalogError(f"degree {d} exceeds the Mather bound {mather_bound(cat.ell)} for ell={cat.ell}")
    if d > cat.max_codim:
        raise CatalogError(f"degree {d} exceeds the catalog range (max_codim {cat.max_codim})")


def build_system(target: str, cat: Catalog, d: int) -> ConstraintSystem:
    _check_catalog(cat, d)
    t = cat.get(target)
    unknowns = enumerate_partitions(d)
    sys = ConstraintSystem(list(unknowns))
    for e in cat.up_to(d):
        for row, rhs, tag in _entry_rows(e, d, e.name == t.name, sys.unknowns):
            sys.add_row(row, rhs, tag)
    if t.codim > d:
        for row, rhs, tag in _entry_rows(t, d, True, sys.unknowns):
            sys.add_row(row, rhs, tag)
    return sys


# ---------------------------------------------------------------------------
# solving


def _int_system(sys: ConstraintSystem):
    rows, rhs = [], []
    for row, b in zip(sys.rows, sys.rhs):
        if all(isinstance(v, int) for v in row) and isinstance(b, int):
            rows.append(row)
            rhs.append(b)
        else:
            ir, ib = integer_row(row, b)
            rows.append(ir)
            rhs.append(ib)
    return rows, rhs


def _diagnose(sys: ConstraintSystem, rows, rhs) -> SolverError:
    n = len(sys.unknowns)
    aug = [row + [b] for row, b in zip(rows, rhs)]
    ech, cols = echelon(aug, n + 1)
    if n in cols:
        # find the first row whose inclusion breaks consistency
        for k in range(1, len(aug) + 1):
            _, c = echelon(aug[:k], n + 1)
            if n in c:
                return InconsistentSystem(f"inconsistent: {sys.tags[k - 1]} contradicts earlier rows")
    free = [sys.unknowns[j] for j in range(n) if j not in set(cols)]
    names = ", ".join("v_" + ("".join(map(str, p)) or "0") for p in free)
    return Underdetermined(f"underdetermined: free unknowns {names}", free)


_PIVOT_CACHE: dict[tuple, list[int] | None] = {}


def _pivot_rows(block: list[list[int]]) -> list[int] | None:
    """Rows of a nonsingular square submatrix, or None without full column rank (cached)."""
    key = tuple(tuple(b) for b in block)
    if key in _PIVOT_CACHE:
        return _PIVOT_CACHE[key]
    ncols = len(block[0])
    prow, _ = modular_pivots(block, ncols)
    if len(prow) < ncols:
        prow = _exact_pivot_rows(block, ncols) if rank(block, ncols) == ncols else None
    out = sorted(prow) if prow is not None else None
    if len(_PIVOT_CACHE) > 4096:
        _PIVOT_CACHE.clear()
    _PIVOT_CACHE[key] = out
    return out


def _exact_pivot_rows(block, ncols):
    chosen, basis = [], []
    for i, row in enumerate(block):
        if rank(basis + [row], ncols) > len(basis):
            basis.append(row)
            chosen.append(i)
        if len(chosen) == ncols:
            break
    return chosen


def solve_exact(sys: ConstraintSystem) -> list[Fraction]:
    """The unique solution; raises :class:`InconsistentSystem` or :class:`Underdetermined`."""
    rows, rhs = _int_system(sys)
    n = len(sys.unknowns)
    weights = [sum(p) for p in sys.unknowns]
    by_deg: dict[int, list[int]] = {}
    for j, w in enumerate(weights):
        by_deg.setdefault(w, []).append(j)
    row_deg = []
    for row in rows:
        nz = [weights[j] for j, v in enumerate(row) if v]
        row_deg.append(max(nz) if nz else -1)
    x: list[Fraction] = [Fraction(0)] * n
    for deg in sorted(by_deg):
        cols = by_deg[deg]
        ridx = [i for i, rd in enumerate(row_deg) if rd == deg]
        block = [[rows[i][j] for j in cols] for i in ridx]
        prow = _pivot_rows(block) if block else None
        if prow is None:
            raise _diagnose(sys, rows, rhs)
        lower = [j for j in range(n) if weights[j] < deg]
        b = []
        for i in prow:
            ri = ridx[i]
            s = Fraction(rhs[ri])
            row = rows[ri]
            for j in lower:
                if row[j]:
                    s -= row[j] * x[j]
            b.append(s)
        den = 1
        for v in b:
            den = den * v.denominator // _gcd(den, v.denominator)
        sol = bareiss_solve([block[i] for i in prow], [int(v * den) for v in b])
        for j, v in zip(cols, sol):
            x[j] = v / den
    bad = first_violation(rows, rhs, x)
    if bad is not None:
        raise InconsistentSystem(f"inconsistent: {sys.tags[bad]} is violated by the unique candidate")
    return x


def first_violation(rows, rhs, x: Sequence[Fraction]) -> int | None:
    """Index of the first row not satisfied by ``x`` (exact integer check)."""
    den = 1
    for v in x:
        den = den * v.denominator // _gcd(den, v.denominator)
    xi = [int(v * den) for v in x]
    for i, (row, b) in enumerate(zip(rows, rhs)):
        if sum(map(mul, row, xi)) != b * den:
            return i
    return None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# packaged results


@dataclass(frozen=True)
class SsmPolynomial:
    series: ChernSeries
    entry: str
    ell: int
    degree: int
    codim: int

    def lowest_part(self) -> ChernSeries:
        return self.series.homogeneous_part(self.codim)


def _catalog(ell: int, cat: Catalog | None) -> Catalog:
    cat = bundled_catalog(ell) if cat is None else cat
    if cat.ell != ell:
        raise CatalogError(f"catalog is for ell={cat.ell}, not ell={ell}")
    return cat


def ssm_thom(target: str, ell: int, d: int, cat: Catalog | None = None) -> SsmPolynomial:
    cat = _catalog(ell, cat)
    entry = cat.get(target)
    sys = build_system(target, cat, d)
    x = solve_exact(sys)
    series = ChernSeries({p: v for p, v in zip(sys.unknowns, x)}, d)
    low = series.lowest_degree()
    if entry.codim <= d and low != entry.codim:
        raise SolverError(
            f"lowest nonzero degree of T({entry.name}) is {low}, expected codim {entry.codim}"
        )
    if entry.codim > d and low is not None:
        raise SolverError(f"T({entry.name}) must vanish below degree {entry.codim}")
    return SsmPolynomial(series, entry.name, ell, d, entry.codim)


def thom_polynomial(target: str, ell: int, cat: Catalog | None = None) -> ChernSeries:
    cat = _catalog(ell, cat)
    s = cat.get(target).codim
    return ssm_thom(target, ell, s, cat).series.homogeneous_part(s)


# ---------------------------------------------------------------------------
# independent re-check


@dataclass
class AxiomCheck:
    entry: str
    axiom: int
    passed: bool
    detail: str = ""


@dataclass
class AxiomReport:
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]


def restrict(series: ChernSeries, entry: SingularityEntry, d: int | None = None) -> TorusPolynomial:
    """psi_entry applied to a Chern series."""
    d = series.degree if d is None else min(d, series.degree)
    r = entry.torus_rank
    images = chern_images(entry.source_weights, entry.target_weights, r, d)
    return substitute(series.truncate(d), images, TorusPolynomial.one(r, d))


def verify_axioms(T: SsmPolynomial, cat: Catalog) -> AxiomReport:
    d = T.degree
    checks = []
    for e in cat.up_to(d):
        img = restrict(T.series, e, d)
        if e.name == T.entry:
            try:
                want = axiom_rhs(e, d)
            except AlgebraError as exc:
                checks.append(AxiomCheck(e.name, 1, False, str(exc)))
                continue
            diff = img - want
            ok = diff.is_zero()
            checks.append(AxiomCheck(e.name, 1, ok, "" if ok else f"difference {diff}"))
        else:
            prod = img * total_chern(e.source_weights, e.torus_rank, d)
            bad = [k for k in range(e.codim, d + 1) if not prod.homogeneous_part(k).is_zero()]
            checks.append(
                AxiomCheck(e.name, 2, not bad, f"nonzero in degrees {bad}" if bad else "")
            )
    return AxiomReport(checks)
