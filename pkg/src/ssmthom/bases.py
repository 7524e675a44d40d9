"""Schur and Schur-tilde expansions of Chern series.

Chern monomials are complete-homogeneous-like: c_k plays the role of s_(k),
so c_lambda expands in Schur functions with Kostka numbers (computed by the
Pieri rule) and the inverse is unitriangular.  Determinants
det(c_{mu_i+j-i}) on arbitrary integer vectors straighten to +-s_nu or 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import (
    ChernSeries,
    Partition,
    _join_terms,
    _signed_term,
    coefficient_str,
    enumerate_partitions,
    partitions_of,
)

BASES = ("chern", "schur", "schur_tilde")

# tilde expansions expand a product in d variables; beyond this they get slow
TILDE_MAX_DEGREE = 10


class BasisError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Kostka data


def _horizontal_strips(mu: Partition, k: int) -> list[Partition]:
    """Shapes nu containing mu with nu/mu a horizontal strip of size k."""
    out = []
    parts = list(mu) + [0]

    def rec(i: int, left: int, acc: list[int]):
        if i == len(parts):
            if left == 0:
                out.append(tuple(p for p in acc if p))
            return
        cap = left if i == 0 else min(left, parts[i - 1] - parts[i])
        for add in range(cap, -1, -1):
            rec(i + 1, left - add, acc + [parts[i] + add])

    rec(0, k, [])
    return out


@lru_cache(maxsize=None)
def chern_monomial_in_schur(lam: Partition) -> dict[Partition, int]:
    """c_lambda = sum K_{mu,lambda} s_mu."""
    if not lam:
        return {(): 1}
    rest = chern_monomial_in_schur(lam[1:])
    out: dict[Partition, int] = {}
    for mu, c in rest.items():
        for nu in _horizontal_strips(mu, lam[0]):
            out[nu] = out.get(nu, 0) + c
    return out


@lru_cache(maxsize=None)
def schur_in_chern(lam: Partition) -> dict[Partition, int]:
    """s_lambda as an integer combination of Chern monomials of the same weight."""
    out = {lam: 1}
    for mu, k in chern_monomial_in_schur(lam).items():
        if mu == lam:
            continue
        # mu dominates lam, hence is lex-larger and already resolved
        for p, c in schur_in_chern(mu).items():
            out[p] = out.get(p, 0) - k * c
    return {p: c for p, c in out.items() if c}


def straighten(mu: Sequence[int]) -> tuple[int, Partition]:
    """det(c_{mu_i+j-i}) = sign * s_nu; sign 0 when the determinant vanishes."""
    k = len(mu)
    beta = [m - i for i, m in enumerate(mu)]
    if len(set(beta)) < k:
        return 0, ()
    # sort descending, tracking the permutation sign by counting inversions
    inv = sum(1 for i in range(k) for j in range(i + 1, k) if beta[i] < beta[j])
    beta.sort(reverse=True)
    nu = [b + i for i, b in enumerate(beta)]
    if nu and nu[-1] < 0:
        return 0, ()
    return (-1 if inv % 2 else 1), tuple(p for p in nu if p)


def jacobi_trudi(mu: Sequence[int], d: int) -> ChernSeries:
    sign, nu = straighten(list(mu))
    if not sign or sum(nu) > d:
        return ChernSeries({}, d)
    return ChernSeries({p: sign * c for p, c in schur_in_chern(nu).items()}, d)


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True)
class BasisExpansion:
    basis: str
    degree: int
    coeffs: Mapping[Partition, object]

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        clean = {tuple(p): c for p, c in self.coeffs.items() if c and sum(p) <= self.degree}
        object.__setattr__(self, "coeffs", clean)

    def coefficient(self, p: Iterable[int]):
        return self.coeffs.get(tuple(p), 0)

    def items(self):
        return self.coeffs.items()

    def homogeneous_part(self, k: int) -> dict[Partition, object]:
        return {p: c for p, c in self.coeffs.items() if sum(p) == k}

    def ordered(self) -> list[tuple[Partition, object]]:
        """Degree-major, lex-descending within a degree."""
        return [
            (p, self.coeffs[p])
            for p in sorted(self.coeffs, key=lambda p: (sum(p), tuple(-x for x in p)))
        ]

    def __eq__(self, other):
        if not isinstance(other, BasisExpansion):
            return NotImplemented
        return (self.basis, self.degree, dict(self.coeffs)) == (
            other.basis,
            other.degree,
            dict(other.coeffs),
        )

    def __str__(self):
        return format_expansion(self)


def _label(p: Partition) -> str:
    if not p:
        return "0"
    if max(p) >= 10:
        return "(" + ",".join(map(str, p)) + ")"
    return "".join(map(str, p))


def format_expansion(e: BasisExpansion) -> str:
    if e.basis == "chern":
        from .algebra import format_chern

        return format_chern(ChernSeries(dict(e.coeffs), e.degree))
    prefix = "s~" if e.basis == "schur_tilde" else "s"
    items = e.ordered()
    if not items:
        return "0"
    out = ""
    for i, (p, c) in enumerate(items):
        if e.basis == "schur" and not p:
            body, term = "", coefficient_str(c)
        else:
            body = prefix + _label(p)
            term = _signed_term(c, body)
            term = term[1:] if term.startswith("+") else term
        if i == 0:
            out = term
        elif term.startswith("-"):
            out += f" - {term[1:]}"
        else:
            out += f" + {term}"
    return out


def _latex_coefficient(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _latex_symbol(basis: str, p: Partition) -> str:
    if basis == "chern":
        return "".join(
            f"c_{{{k}}}" + (f"^{{{p.count(k)}}}" if p.count(k) > 1 else "")
            for k in sorted(set(p))
        )
    label = "".join(map(str, p)) if p and max(p) < 10 else ",".join(map(str, p))
    head = "\\tilde{s}" if basis == "schur_tilde" else "s"
    if basis == "schur" and not p:
        return ""
    return f"{head}_{{{label or 0}}}"


def latex_expansion(e: BasisExpansion) -> str:
    """LaTeX rendering in the style ``-3\\,s_{2}-2\\,s_{11}``; Chern monomials as ``c_{1}^{2}``."""
    if e.basis == "chern":
        keys = sorted(
            e.coeffs,
            key=lambda p: (sum(p), [-p.count(i) for i in range(1, sum(p) + 1)]),
        )
    else:
        keys = [p for p, _ in e.ordered()]
    out = []
    for i, p in enumerate(keys):
        c = Fraction(e.coeffs[p])
        sym = _latex_symbol(e.basis, p)
        sign = "-" if c < 0 else ("+" if i else "")
        a = abs(c)
        if not sym:
            body = _latex_coefficient(a)
        elif a == 1:
            body = sym
        else:
            body = f"{_latex_coefficient(a)}\\,{sym}"
        out.append(sign + body)
    return "".join(out) or "0"


def to_schur(a: ChernSeries) -> BasisExpansion:
    out: dict[Partition, object] = {}
    for lam, c in a.items():
        for mu, k in chern_monomial_in_schur(lam).items():
            v = out.get(mu, 0) + c * k
            if v:
                out[mu] = v
            else:
                out.pop(mu, None)
    return BasisExpansion("schur", a.degree, out)


def from_schur(e: BasisExpansion) -> ChernSeries:
    if e.basis != "schur":
        raise ValueError("expected a Schur expansion")
    out: dict[Partition, object] = {}
    for lam, c in e.items():
        for p, k in schur_in_chern(lam).items():
            out[p] = out.get(p, 0) + c * k
    return ChernSeries(out, e.degree)


# ---------------------------------------------------------------------------
# Schur-tilde


class _GradedIndex:
    """Monomials of degree <= D in n variables, graded so every degree bound is a prefix."""

    def __init__(self, n: int, D: int):
        exps = [(0,) * n]
        frontier = [(0,) * n]
        for _ in range(D):
            nxt = []
            for e in frontier:
                # extend only at or after the last nonzero slot so each monomial appears once
                last = max((i for i, x in enumerate(e) if x), default=0)
                for i in range(last, n):
                    f = list(e)
                    f[i] += 1
                    nxt.append(tuple(f))
            exps.extend(nxt)
            frontier = nxt
        self.n, self.D = n, D
        self.exps = np.array(exps, dtype=np.int64).reshape(len(exps), n)
        pos = {e: k for k, e in enumerate(exps)}
        deg = self.exps.sum(axis=1)
        self.prefix = [int(np.searchsorted(deg, k, side="right")) for k in range(D + 1)]
        self.up = []
        self.levels = []
        for i in range(n):
            up = np.full(len(exps), -1, dtype=np.int64)
            for k, e in enumerate(exps):
                f = list(e)
                f[i] += 1
                up[k] = pos.get(tuple(f), -1)
            self.up.append(up)
            down = np.full(len(exps), -1, dtype=np.int64)
            has = up >= 0
            down[up[has]] = np.nonzero(has)[0]
            col = self.exps[:, i]
            # by exponent of z_i: (indices, their index with z_i lowered by one)
            self.levels.append(
                [(np.nonzero(col == k)[0], down[col == k]) for k in range(1, D + 1)]
            )

    def times_linear(self, p: np.ndarray, i: int, j: int) -> np.ndarray:
        """p * (1 + z_i - z_j)."""
        out = p.copy()
        for var, sign in ((i, 1), (j, -1)):
            up = self.up[var][: len(p)]
            ok = (up >= 0) & (up < len(p))
            out[up[ok]] += sign * p[ok]
        return out

    def divide(self, p: np.ndarray, i: int, times: int) -> np.ndarray:
        """p / (1 + z_i)^times, truncated to the prefix p lives on."""
        q = p.copy()
        for _ in range(times):
            for idx, low in self.levels[i]:
                keep = idx < len(q)
                if not keep.any():
                    break
                q[idx[keep]] -= q[low[keep]]
        return q


@lru_cache(maxsize=8)
def _graded_index(n: int, D: int) -> _GradedIndex:
    return _GradedIndex(n, D)


@lru_cache(maxsize=8)
def _tilde_kernel(n: int, D: int) -> np.ndarray:
    """prod_{i<j} (1+z_i-z_j) / prod_i (1+z_i)^(n-i) in n variables, through degree D."""
    ix = _graded_index(n, D)
    p = np.zeros(len(ix.exps), dtype=object)
    p[:] = 0
    p[0] = 1
    for j in range(n):
        for i in range(j):
            p = ix.times_linear(p, i, j)
    for i in range(n):
        p = ix.divide(p, i, n - i)
    p.setflags(write=False)
    return p


def _straighten_rows(mu: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`straighten`: signs (0 where the determinant vanishes) and partitions."""
    n = mu.shape[1]
    beta = mu - np.arange(n)
    inv = (beta[:, :, None] < beta[:, None, :]) & np.triu(np.ones((n, n), dtype=bool), 1)
    sign = np.where(inv.sum(axis=(1, 2)) % 2, -1, 1)
    srt = -np.sort(-beta, axis=1)
    if n > 1:
        sign[(np.diff(srt, axis=1) == 0).any(axis=1)] = 0
    nu = srt + np.arange(n)
    sign[(nu < 0).any(axis=1)] = 0
    return sign, nu


def _schur_tilde_schur(lam: Partition, d: int, n: int) -> dict[Partition, int]:
    """s~_lambda in the Schur basis through degree d, using n expansion variables.

    Setting z_j = 0 for j > n turns every factor involving z_j into 1, and a
    monomial involving z_k straightens to s_nu with at least k rows, so the
    coefficients of all s_nu with at most n rows are exact.
    """
    if len(lam) > n:
        raise BasisError(f"need at least {len(lam)} expansion variables for {lam}")
    k = sum(lam)
    if k > d:
        return {}
    room = d - k
    ix = _graded_index(n, d)
    q = np.array(_tilde_kernel(n, d)[: ix.prefix[room]], dtype=object)
    for i, part in enumerate(lam):
        q = ix.divide(q, i, part)
    live = np.nonzero(q != 0)[0]
    mu = ix.exps[live] + np.array(list(lam) + [0] * (n - len(lam)), dtype=np.int64)
    sign, nu = _straighten_rows(mu)
    out: dict[Partition, int] = {}
    for row, sg, c in zip(nu.tolist(), sign.tolist(), q[live].tolist()):
        if sg:
            key = tuple(x for x in row if x)
            out[key] = out.get(key, 0) + sg * c
    return {p: c for p, c in out.items() if c}


@lru_cache(maxsize=None)
def _schur_tilde_cached(lam: Partition, d: int, n: int) -> tuple:
    return tuple(sorted(_schur_tilde_schur(lam, d, n).items()))


def schur_tilde_expansion(lam: Sequence[int], d: int, n: int | None = None) -> BasisExpansion:
    """s~_lambda through degree d in the Schur basis.

    The default n = max(d, len(lambda)) expansion variables is exact through
    degree d (see :func:`_schur_tilde_schur`); the test suite confirms that
    n + 1 variables give the same answer.
    """
    lam = tuple(lam)
    n = max(d, len(lam), 1) if n is None else n
    return BasisExpansion("schur", d, dict(_schur_tilde_cached(lam, d, n)))


def schur_tilde(lam: Sequence[int], d: int, n: int | None = None) -> ChernSeries:
    return from_schur(schur_tilde_expansion(lam, d, n))


def to_schur_tilde(a: ChernSeries, d: int | None = None) -> BasisExpansion:
    """Greedy triangular peeling in the Schur basis."""
    d = a.degree if d is None else min(d, a.degree)
    residual = dict(to_schur(a.truncate(d)).coeffs)
    out: dict[Partition, object] = {}
    for k in range(d + 1):
        for lam in partitions_of(k):
            c = residual.get(lam, 0)
            if not c:
                continue
            out[lam] = c
            for mu, v in schur_tilde_expansion(lam, d).items():
                r = residual.get(mu, 0) - c * v
                if r:
                    residual[mu] = r
                else:
                    residual.pop(mu, None)
    return BasisExpansion("schur_tilde", d, out)


def from_schur_tilde(e: BasisExpansion) -> ChernSeries:
    if e.basis != "schur_tilde":
        raise ValueError("expected a Schur-tilde expansion")
    acc: dict[Partition, object] = {}
    for lam, c in e.items():
        for mu, v in schur_tilde_expansion(lam, e.degree).items():
            acc[mu] = acc.get(mu, 0) + c * v
    return from_schur(BasisExpansion("schur", e.degree, acc))


def expand(a: ChernSeries, basis: str) -> BasisExpansion:
    if basis == "chern":
        return BasisExpansion("chern", a.degree, dict(a.items()))
    if basis == "schur":
        return to_schur(a)
    if basis in ("schur_tilde", "tilde"):
        return to_schur_tilde(a)
    raise ValueError(f"unknown basis {basis!r}")


# ---------------------------------------------------------------------------
# parsing (text and LaTeX)

_TERM = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(?:\\,)?\s*(?:\\tilde\{s\}|s~|s)\s*_?\s*\{?\s*(\(\d+(?:,\d+)*\)|\d*)\s*\}?"
)


def parse_expansion(text: str, basis: str, degree: int) -> BasisExpansion:
    """Parse ``"s1 - 3s2 - 2s11"``, ``"s~0 + s~1"`` or LaTeX ``-3\\,s_{2}`` / ``\\tilde{s}_{21}``.

    A bare number is the s_0 coefficient.  Multi-digit labels without
    parentheses are read one digit per part.
    """
    t = text.replace("\\hfill", " ").replace("\\ ", " ").replace("$", "").replace("−", "-")
    t = t.replace("\n", " ").strip()
    out: dict[Partition, Fraction] = {}
    pos = 0
    while pos < len(t):
        if t[pos].isspace():
            pos += 1
            continue
        m = _TERM.match(t, pos)
        if m and m.end() > pos and ("s" in m.group(0)):
            sign, num, label = m.group(1), m.group(2), m.group(3)
            if label.startswith("("):
                p = tuple(int(x) for x in label[1:-1].split(","))
            else:
                p = tuple(int(ch) for ch in label if ch != "0")
            pos = m.end()
        else:
            n = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)").match(t, pos)
            if not n or n.end() == pos:
                raise ValueError(f"cannot parse expansion near {t[pos:pos + 20]!r}")
            sign, num, p = n.group(1), n.group(2), ()
            pos = n.end()
        c = Fraction(num) if num else Fraction(1)
        if sign == "-":
            c = -c
        p = tuple(sorted(p, reverse=True))
        out[p] = out.get(p, 0) + c
    return BasisExpansion(basis, degree, {p: c for p, c in out.items() if c})


def all_partitions(d: int) -> list[Partition]:
    return enumerate_partitions(d)
