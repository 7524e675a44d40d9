"""Applications: classes of singularity loci of maps between projective spaces,
Euler characteristics through the Aluffi involution, hierarchy tests and the
sum rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .algebra import (
    AlgebraError,
    ChernSeries,
    Param,
    TorusPolynomial,
    enumerate_partitions,
    normalize,
    substitute,
)
from .bases import TILDE_MAX_DEGREE, to_schur_tilde
from .catalog import Catalog, bundled_catalog
from .solver import SsmPolynomial, restrict, ssm_thom

Scalar = Union[Fraction, Param]


def _scalar(x) -> Scalar:
    if isinstance(x, str):
        return Param.var(x)
    return normalize(x)


def _factored(c) -> str:
    c = normalize(c)
    if isinstance(c, Param):
        return c.factored()
    return str(c)


# ---------------------------------------------------------------------------
# classes in H*(P^m)


@dataclass(frozen=True)
class ProjectiveClass:
    """sum a_k h^k modulo h^(m+1)."""

    m: int
    coeffs: tuple

    def __post_init__(self):
        cs = [normalize(c) for c in self.coeffs][: self.m + 1]
        cs += [Fraction(0)] * (self.m + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def one(cls, m: int) -> "ProjectiveClass":
        return cls(m, (1,))

    @classmethod
    def monomial(cls, m: int, k: int, c=1) -> "ProjectiveClass":
        cs = [0] * (m + 1)
        if k <= m:
            cs[k] = c
        return cls(m, tuple(cs))

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _lift(self, other) -> "ProjectiveClass":
        if isinstance(other, ProjectiveClass):
            if other.m != self.m:
                raise ValueError("ambient dimensions differ")
            return other
        return ProjectiveClass(self.m, (other,))

    def __add__(self, other):
        other = self._lift(other)
        return ProjectiveClass(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return ProjectiveClass(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        if not isinstance(other, ProjectiveClass):
            if isinstance(other, (int, Fraction, Param)):
                return ProjectiveClass(self.m, tuple(a * other for a in self.coeffs))
            return NotImplemented
        other = self._lift(other)
        out = [Fraction(0)] * (self.m + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(self.m + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return ProjectiveClass(self.m, tuple(out))

    __rmul__ = __mul__

    def evaluate(self, values) -> "ProjectiveClass":
        return ProjectiveClass(
            self.m,
            tuple(c.evaluate(values) if isinstance(c, Param) else c for c in self.coeffs),
        )

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            h = "" if k == 0 else ("h" if k == 1 else f"h^{k}")
            text = _factored(c)
            neg = text.startswith("-")
            body = text[1:] if neg else text
            if h:
                if body == "1":
                    body = h
                elif isinstance(c, Param) and not _is_product(body):
                    body = f"({body})*{h}"
                else:
                    body = f"{body}*{h}"
            parts.append(("-" if neg else "+", body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _is_product(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0:
            return False
    return True


def _power_series(m: int, base: Scalar, exponent: int) -> list:
    """Coefficients of (1 + base*h)^exponent up to h^m (exponent may be negative)."""
    out = [Fraction(1)]
    coef = Fraction(1)
    for k in range(1, m + 1):
        coef = coef * (exponent - k + 1) / k
        out.append(base ** k * coef if isinstance(base, Param) else coef * Fraction(base) ** k)
    return out


def chern_of_map(m: int, n: int, deg) -> list[ProjectiveClass]:
    """c_1(F)..c_m(F) for a degree ``deg`` map P^m -> P^n."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    d = _scalar(deg)
    num = ProjectiveClass(m, tuple(_power_series(m, d, n + 1)))
    den = ProjectiveClass(m, tuple(_power_series(m, Fraction(1), -(m + 1))))
    total = num * den
    return [ProjectiveClass.monomial(m, k, total[k]) for k in range(1, m + 1)]


def total_class(chern: Sequence[ProjectiveClass]) -> ProjectiveClass:
    m = chern[0].m
    acc = ProjectiveClass.one(m)
    for c in chern:
        acc = acc + c
    return acc


def ssm_of_locus(T: SsmPolynomial | ChernSeries, chern: Sequence[ProjectiveClass], m: int) -> ProjectiveClass:
    series = T.series if isinstance(T, SsmPolynomial) else T
    if series.degree < m:
        raise AlgebraError(
            f"series is only known through degree {series.degree}; need degree {m} for P^{m}"
        )
    images = list(chern) + [ProjectiveClass(m, ())] * max(0, series.degree - len(chern))
    return substitute(series.truncate(m), images, ProjectiveClass.one(m))


def csm_from_ssm(s: ProjectiveClass) -> ProjectiveClass:
    m = s.m
    return s * ProjectiveClass(m, tuple(_power_series(m, Fraction(1), m + 1)))


# ---------------------------------------------------------------------------
# Aluffi involution


def _poly_strip(p: list) -> list:
    p = [normalize(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def aluffi_involution(p: Sequence) -> list:
    """(t p(-t-1) + p(0)) / (t+1) on coefficient lists (index = power of t)."""
    p = _poly_strip(list(p))
    if not p:
        return []
    n = len(p)
    # p(-t-1) = sum p_i (-1)^i (1+t)^i
    shifted = [Fraction(0)] * n
    for i, c in enumerate(p):
        if not c:
            continue
        binom = 1
        for k in range(i + 1):
            term = c * binom * (-1) ** i
            shifted[k] = shifted[k] + term
            binom = binom * (i - k) // (k + 1)
    q = [p[0]] + shifted  # t * shifted + p(0)
    # synthetic division by (t + 1), from the top
    n = len(q) - 1
    quot = [Fraction(0)] * n
    quot[n - 1] = q[n]
    for k in range(n - 1, 0, -1):
        quot[k - 1] = q[k] - quot[k]
    if q[0] - quot[0]:
        raise AlgebraError("division by t+1 is not exact")
    return _poly_strip(quot)


def format_tpoly(p: Sequence, var: str = "t") -> str:
    parts = []
    for k, c in enumerate(p):
        if not c:
            continue
        text = _factored(c)
        neg = text.startswith("-")
        body = text[1:] if neg else text
        if k:
            v = var if k == 1 else f"{var}^{k}"
            if body == "1":
                body = v
            elif isinstance(normalize(c), Param) and not _is_product(body):
                body = f"({body})*{v}"
            else:
                body = f"{body}*{v}"
        parts.append(("-" if neg else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class EulerProfile:
    chi: tuple
    degree: Scalar
    dimension: int

    @property
    def euler_characteristic(self) -> Scalar:
        return self.chi[0] if self.chi else Fraction(0)


def euler_profile(c: ProjectiveClass) -> EulerProfile:
    N = c.m
    gamma = [Fraction(0)] * (N + 1)
    for i, a in enumerate(c.coeffs):
        gamma[N - i] = a
    chi = aluffi_involution(gamma)
    nonzero = [a for a in c.coeffs if a]
    return EulerProfile(tuple(chi), nonzero[0] if nonzero else Fraction(0), N)


@dataclass
class LocusReport:
    chern: list[ProjectiveClass]
    ssm: ProjectiveClass
    csm: ProjectiveClass
    profile: EulerProfile

    def lines(self) -> list[str]:
        out = [f"c{k + 1}(F) = {c}" for k, c in enumerate(self.chern)]
        out.append(f"ssm = {self.ssm}")
        out.append(f"csm = {self.csm}")
        out.append(f"degree = {_factored(self.profile.degree)}")
        out.append(f"chi(t) = {format_tpoly(self.profile.chi)}")
        out.append(f"euler characteristic = {_factored(self.profile.euler_characteristic)}")
        return out


def locus_report(T: SsmPolynomial, m: int, n: int, deg) -> LocusReport:
    chern = chern_of_map(m, n, deg)
    s = ssm_of_locus(T, chern, m)
    c = csm_from_ssm(s)
    return LocusReport(chern, s, c, euler_profile(c))


# ---------------------------------------------------------------------------
# hierarchy


def _strictly_positive_functional(weights: Sequence[Sequence[int]]) -> bool:
    """Is there phi with <phi, w> > 0 for every w?  Exact Fourier-Motzkin on <phi,w> >= 1."""
    ineqs = {tuple(Fraction(x) for x in w) + (Fraction(1),) for w in weights}
    if not ineqs:
        return True
    r = len(next(iter(ineqs))) - 1
    rows = list(ineqs)
    for var in range(r):
        pos, neg, zero = [], [], []
        for row in rows:
            (pos if row[var] > 0 else neg if row[var] < 0 else zero).append(row)
        new = list(zero)
        for p in pos:
            for q in neg:
                a, b = p[var], -q[var]
                new.append(tuple(b * x + a * y for x, y in zip(p, q)))
        rows = list({_normalize_ineq(row) for row in new})
    # remaining rows read 0 >= rhs
    return all(row[-1] <= 0 for row in rows)


def _normalize_ineq(row: tuple) -> tuple:
    scale = max((abs(x) for x in row[:-1]), default=0) or abs(row[-1]) or 1
    return tuple(x / scale for x in row)


@dataclass(frozen=True)
class HierarchyVerdict:
    verdict: str
    witness: TorusPolynomial

    def __str__(self):
        return f"{self.verdict} (witness {self.witness})"


def hierarchy_test(lower: str, upper: str, ell: int, d: int, cat: Catalog | None = None) -> HierarchyVerdict:
    cat = bundled_catalog(ell) if cat is None else cat
    lo = cat.get(lower)
    up = cat.get(upper)
    if d < up.codim:
        raise ValueError(f"degree {d} is below the codimension {up.codim} of {up.name}")
    tp = ssm_thom(up.name, ell, up.codim, cat).series.homogeneous_part(up.codim)
    w = restrict(tp, lo, up.codim)
    if not w.is_zero():
        return HierarchyVerdict("below", w)
    if _strictly_positive_functional(lo.source_weights):
        return HierarchyVerdict("not-below", w)
    return HierarchyVerdict("inconclusive", w)


# ---------------------------------------------------------------------------
# sum rule


@dataclass
class SumReport:
    ell: int
    degree: int
    chern_ok: bool
    tilde_ok: bool | None
    detail: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.chern_ok and self.tilde_ok is not False


def sum_check(cat: Catalog, d: int, tilde: bool | None = None) -> SumReport:
    """Sum of all T(entry) must be 1; its tilde expansion must be all ones."""
    total = ChernSeries({}, d)
    for e in cat.up_to(d):
        total = total + ssm_thom(e.name, cat.ell, d, cat).series
    detail = []
    chern_ok = total == ChernSeries.one(d)
    if not chern_ok:
        detail.append(f"sum is {total}, expected 1")
    if tilde is None:
        tilde = d <= TILDE_MAX_DEGREE
    tilde_ok = None
    if tilde:
        exp = to_schur_tilde(total, d)
        bad = [p for p in enumerate_partitions(d) if exp.coefficient(p) != 1]
        extra = [p for p, _ in exp.items() if sum(p) > d]
        tilde_ok = not bad and not extra
        if not tilde_ok:
            detail.append(f"tilde coefficients differ from 1 at {bad[:5]}")
    return SumReport(cat.ell, d, chern_ok, tilde_ok, detail)
