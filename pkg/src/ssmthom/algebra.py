"""Exact graded algebra: partitions, Chern series, torus polynomials.

Coefficients are ``fractions.Fraction`` or :class:`Param` (polynomials in
named formal parameters, used for a symbolic map degree).  Every series
carries its truncation degree; binary operations truncate to the smaller
of the two degrees.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping, Sequence, Union

Partition = tuple[int, ...]
WeightVector = tuple[int, ...]


class AlgebraError(ValueError):
    """Raised on invalid algebraic input (non-invertible series, zero Euler class...)."""


# ---------------------------------------------------------------------------
# parametric scalars


class Param:
    """Polynomial in named parameters with rational coefficients.

    Terms are stored as ``{monomial: Fraction}`` where a monomial is a sorted
    tuple of ``(name, exponent)`` pairs.  The zero polynomial has no terms.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(mono))] = clean.get(tuple(sorted(mono)), 0) + c
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def var(cls, name: str) -> "Param":
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, value) -> "Param":
        return cls({(): value})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def parameters(self) -> set[str]:
        return {name for m in self._terms for name, _ in m}

    def __bool__(self):
        return bool(self._terms)

    @staticmethod
    def _lift(other) -> "Param":
        if isinstance(other, Param):
            return other
        if isinstance(other, (int, Fraction)):
            return Param.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Param(out)

    __radd__ = __add__

    def __neg__(self):
        return Param({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                exps = dict(m1)
                for name, e in m2:
                    exps[name] = exps.get(name, 0) + e
                key = tuple(sorted(exps.items()))
                out[key] = out.get(key, 0) + c1 * c2
        return Param(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Param) and other.is_constant() and other:
            return self * (Fraction(1) / other.constant())
        raise AlgebraError("division by a non-constant parameter polynomial")

    def __pow__(self, n: int):
        out = Param.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash(tuple(sorted(self._terms.items())))

    def evaluate(self, values: Mapping[str, object]) -> Union["Param", Fraction]:
        """Substitute numbers for (some of) the parameters."""
        out: dict = {}
        for m, c in self._terms.items():
            rest = []
            for name, e in m:
                if name in values:
                    c = c * Fraction(values[name]) ** e
                else:
                    rest.append((name, e))
            out[tuple(rest)] = out.get(tuple(rest), 0) + c
        p = Param(out)
        return p.constant() if p.is_constant() else p

    def to_sympy(self):
        import sympy

        expr = sympy.Integer(0)
        for m, c in self._terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for name, e in m:
                term *= sympy.Symbol(name) ** e
            expr += term
        return expr

    def factored(self) -> str:
        import sympy

        return _sympy_str(sympy.factor(self.to_sympy()))

    def _sort_key(self, mono):
        return (-sum(e for _, e in mono), mono)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, key=self._sort_key):
            c = self._terms[m]
            body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)
            parts.append(_signed_term(c, body, sep="*"))
        return _join_terms(parts)

    def __repr__(self):
        return f"Param({self})"


def _sympy_str(expr) -> str:
    return str(expr).replace("**", "^")


Coefficient = Union[Fraction, Param]


def normalize(c) -> Coefficient:
    """Canonical coefficient: constants become ``Fraction``."""
    if isinstance(c, Param):
        return c.constant() if c.is_constant() else c
    return Fraction(c)


def coefficient_str(c) -> str:
    c = normalize(c)
    if isinstance(c, Param):
        return str(c)
    return str(c)


def parse_coefficient(text: str) -> Coefficient:
    """Inverse of :func:`coefficient_str` (accepts ``3/4`` or parameter polynomials)."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    import sympy

    expr = sympy.expand(sympy.sympify(text.replace("^", "**")))
    poly = sympy.Poly(expr, *sorted(expr.free_symbols, key=str))
    terms = {}
    for exps, c in poly.terms():
        mono = tuple((str(g), e) for g, e in zip(poly.gens, exps) if e)
        terms[mono] = Fraction(int(c.p), int(c.q))
    return normalize(Param(terms))


def _signed_term(c, body: str, sep: str = "") -> str:
    """Render ``c*body`` with an explicit sign, omitting a unit coefficient."""
    if isinstance(c, Param):
        inner = str(c)
        return "+(" + inner + ")" + (sep + body if body else "")
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not body:
        return f"{sign}{a}"
    if a == 1:
        return f"{sign}{body}"
    return f"{sign}{a}{sep}{body}"


def _join_terms(parts: list[str]) -> str:
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------------------
# partitions


def enumerate_partitions(d: int) -> list[Partition]:
    """All partitions of weight <= d, by weight, lex-descending within a weight."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    out: list[Partition] = []
    for n in range(d + 1):
        out.extend(partitions_of(n))
    return out


@lru_cache(maxsize=None)
def partitions_of(n: int, largest: int | None = None) -> tuple[Partition, ...]:
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def merge(a: Partition, b: Partition) -> Partition:
    return tuple(sorted(a + b, reverse=True))


def partition_str(p: Partition) -> str:
    if not p:
        return "0"
    if max(p) >= 10:
        return "{" + ",".join(map(str, p)) + "}"
    return "".join(map(str, p))


# ---------------------------------------------------------------------------
# Chern series


def _add_into(acc: dict, key, value) -> None:
    v = acc.get(key, 0) + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class ChernSeries:
    """Truncated graded series in c_1, c_2, ... with ``deg(c_i) = i``.

    A monomial c_{l1} c_{l2} ... is keyed by the partition ``(l1, l2, ...)``.
    """

    __slots__ = ("degree", "_coeffs")

    def __init__(self, coeffs: Mapping[Partition, object] | None = None, degree: int = 0):
        if degree < 0:
            raise ValueError("truncation degree must be non-negative")
        self.degree = degree
        clean: dict = {}
        for p, c in (coeffs or {}).items():
            p = tuple(sorted((int(x) for x in p), reverse=True))
            if any(x <= 0 for x in p):
                raise ValueError(f"invalid partition {p}")
            if sum(p) > degree:
                continue
            c = normalize(c)
            if c:
                _add_into(clean, p, c)
        self._coeffs = clean

    # -- constructors
    @classmethod
    def one(cls, degree: int) -> "ChernSeries":
        return cls({(): 1}, degree)

    @classmethod
    def c(cls, k: int, degree: int) -> "ChernSeries":
        if k < 0:
            return cls({}, degree)
        if k == 0:
            return cls.one(degree)
        return cls({(k,): 1}, degree)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "ChernSeries":
        """Parse strings like ``"(c1^2+c2) + (-3c_1^3 - 6 c_1 c_2 - 3c_3)"``."""
        terms = parse_chern_terms(text)
        if degree is None:
            degree = max((sum(p) for p in terms), default=0)
        return cls(terms, degree)

    # -- access
    def items(self):
        return self._coeffs.items()

    def coefficient(self, p: Iterable[int]) -> Coefficient:
        return self._coeffs.get(tuple(sorted(p, reverse=True)), Fraction(0))

    def __getitem__(self, p):
        return self.coefficient(p)

    def support(self) -> list[Partition]:
        return sorted(self._coeffs, key=lambda p: (sum(p), p))

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def lowest_degree(self) -> int | None:
        return min((sum(p) for p in self._coeffs), default=None)

    def homogeneous_part(self, k: int) -> "ChernSeries":
        if k > self.degree:
            raise ValueError(f"degree {k} exceeds truncation degree {self.degree}")
        return ChernSeries({p: c for p, c in self._coeffs.items() if sum(p) == k}, self.degree)

    def truncate(self, d: int) -> "ChernSeries":
        return ChernSeries(self._coeffs, min(d, self.degree))

    def with_degree(self, d: int) -> "ChernSeries":
        """Same coefficients viewed with truncation degree ``d`` (drops terms above ``d``)."""
        return ChernSeries(self._coeffs, d)

    def map_coefficients(self, f: Callable) -> "ChernSeries":
        return ChernSeries({p: f(c) for p, c in self._coeffs.items()}, self.degree)

    # -- arithmetic
    def _coerce(self, other) -> "ChernSeries":
        if isinstance(other, ChernSeries):
            return other
        if isinstance(other, (int, Fraction, Param)):
            return ChernSeries({(): other}, self.degree)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = min(self.degree, other.degree)
        out = {p: c for p, c in self._coeffs.items() if sum(p) <= d}
        for p, c in other._coeffs.items():
            if sum(p) <= d:
                _add_into(out, p, c)
        return ChernSeries(out, d)

    __radd__ = __add__

    def __neg__(self):
        return ChernSeries({p: -c for p, c in self._coeffs.items()}, self.degree)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Param)):
            return ChernSeries({p: c * other for p, c in self._coeffs.items()}, self.degree)
        if not isinstance(other, ChernSeries):
            return NotImplemented
        return series_mul(self, other, min(self.degree, other.degree))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ChernSeries({(): other}, self.degree)
        if not isinstance(other, ChernSeries):
            return NotImplemented
        return self.degree == other.degree and self._coeffs == other._coeffs

    def equals_up_to(self, other: "ChernSeries", d: int) -> bool:
        return self.truncate(d).with_degree(d) == other.truncate(d).with_degree(d)

    def __hash__(self):
        return hash((self.degree, frozenset(self._coeffs.items())))

    def __repr__(self):
        return f"ChernSeries({format_chern(self)!r}, degree={self.degree})"

    def __str__(self):
        return format_chern(self)


def series_mul(a: ChernSeries, b: ChernSeries, d: int) -> ChernSeries:
    """Product truncated at degree ``d``."""
    out: dict = {}
    bitems = [(q, sum(q), c) for q, c in b.items()]
    for p, ca in a.items():
        wp = sum(p)
        if wp > d:
            continue
        for q, wq, cb in bitems:
            if wp + wq <= d:
                _add_into(out, merge(p, q), ca * cb)
    return ChernSeries(out, d)


def series_invert(a: ChernSeries, d: int | None = None) -> ChernSeries:
    """Multiplicative inverse up to degree ``d`` (constant term must be a nonzero scalar)."""
    if d is None:
        d = a.degree
    d = min(d, a.degree)
    a0 = normalize(a.coefficient(()))
    if isinstance(a0, Param) or not a0:
        raise AlgebraError("not invertible: constant term must be a nonzero scalar")
    inv0 = 1 / a0
    pieces = [a.homogeneous_part(k) for k in range(d + 1)]
    result = [ChernSeries({(): inv0}, d)]
    for k in range(1, d + 1):
        acc = ChernSeries({}, d)
        for j in range(1, k + 1):
            if pieces[j].is_zero() or result[k - j].is_zero():
                continue
            acc = acc + series_mul(pieces[j], result[k - j], d)
        result.append(acc * (-inv0))
    total = ChernSeries({}, d)
    for r in result:
        total = total + r
    return total


def homogeneous_part(a: ChernSeries, k: int) -> ChernSeries:
    return a.homogeneous_part(k)


_CHERN_TERM = re.compile(
    r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(?:\\,)?\s*\*?\s*((?:c_?\{?\d+\}?(?:\^\{?\d+\}?)?\s*\*?\s*)*)"
)
_CHERN_FACTOR = re.compile(r"c_?\{?(\d+)\}?(?:\^\{?(\d+)\}?)?")


def parse_chern_terms(text: str) -> dict[Partition, Fraction]:
    """Parse a sum of Chern monomials into ``{partition: coefficient}``.

    Accepts ``c1^2``, ``c_1^2``, ``c_{1}^{2}``, optional ``*``, and ignores
    parentheses and a trailing ``h.o.t.``.
    """
    text = text.replace("h.o.t.", "").replace("(", " ").replace(")", " ")
    text = text.replace("−", "-").replace("\\,", " ")
    out: dict[Partition, Fraction] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _CHERN_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Chern expression near {text[pos:pos + 20]!r}")
        sign, num, body = m.group(1), m.group(2), m.group(3)
        if not num and not body.strip():
            if sign:
                pos = m.end()
                continue
            raise ValueError(f"cannot parse Chern expression near {text[pos:pos + 20]!r}")
        coeff = Fraction(num) if num else Fraction(1)
        if sign == "-":
            coeff = -coeff
        parts: list[int] = []
        for f in _CHERN_FACTOR.finditer(body):
            parts.extend([int(f.group(1))] * int(f.group(2) or 1))
        key = tuple(sorted((x for x in parts if x != 0), reverse=True))
        _add_into(out, key, coeff)
        pos = m.end()
    return out


def _chern_monomial_str(p: Partition) -> str:
    if not p:
        return ""
    out = []
    for k in sorted(set(p)):
        e = p.count(k)
        out.append(f"c{k}" if e == 1 else f"c{k}^{e}")
    return "".join(out)


def format_chern(a: ChernSeries) -> str:
    """Degree-grouped text rendering, e.g. ``(c1^2+c2) + (-3c1^3-6c1c2-3c3)``."""
    groups: list[tuple[str, bool]] = []
    for k in range(a.degree + 1):
        keys = sorted(
            (p for p in a._coeffs if sum(p) == k),
            key=lambda p: [p.count(i) for i in range(1, k + 1)],
            reverse=True,
        )
        if not keys:
            continue
        parts = []
        for p in keys:
            c = a._coeffs[p]
            body = _chern_monomial_str(p)
            parts.append(_signed_term(c, body) if body else _signed_term(c, ""))
        text = _join_terms(parts)
        if text.startswith("+"):
            text = text[1:]
        groups.append((text, len(parts) > 1))
    if not groups:
        return "0"
    out = ""
    for i, (text, multi) in enumerate(groups):
        if multi and len(groups) > 1:
            piece = f"({text})"
            out += piece if i == 0 else f" + {piece}"
        elif i == 0:
            out += text
        elif text.startswith("-"):
            out += f" - {text[1:]}"
        else:
            out += f" + {text}"
    return out


# ---------------------------------------------------------------------------
# torus polynomials


class TorusPolynomial:
    """Truncated polynomial in torus variables a_1..a_r (all of degree 1)."""

    __slots__ = ("rank", "degree", "_coeffs")

    NAMES = "abcdefgh"

    def __init__(self, rank: int, degree: int, coeffs: Mapping[tuple, object] | None = None):
        self.rank = rank
        self.degree = degree
        clean: dict = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != rank:
                raise ValueError(f"exponent {e} does not match rank {rank}")
            if sum(e) > degree:
                continue
            if c:
                _add_into(clean, e, c if isinstance(c, (int, Param)) else Fraction(c))
        self._coeffs = clean

    @classmethod
    def one(cls, rank: int, degree: int) -> "TorusPolynomial":
        return cls(rank, degree, {(0,) * rank: 1})

    @classmethod
    def linear(cls, w: Sequence[int], degree: int) -> "TorusPolynomial":
        r = len(w)
        coeffs = {}
        for i, wi in enumerate(w):
            if wi:
                e = [0] * r
                e[i] = 1
                coeffs[tuple(e)] = wi
        return cls(r, degree, coeffs)

    def items(self):
        return self._coeffs.items()

    def coefficient(self, e: Sequence[int]):
        return self._coeffs.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def homogeneous_part(self, k: int) -> "TorusPolynomial":
        return TorusPolynomial(
            self.rank, self.degree, {e: c for e, c in self._coeffs.items() if sum(e) == k}
        )

    def truncate(self, d: int) -> "TorusPolynomial":
        return TorusPolynomial(self.rank, min(d, self.degree), self._coeffs)

    def lowest_degree(self) -> int | None:
        return min((sum(e) for e in self._coeffs), default=None)

    def _check(self, other: "TorusPolynomial"):
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch {self.rank} != {other.rank}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TorusPolynomial(self.rank, self.degree, {(0,) * self.rank: other})
        if not isinstance(other, TorusPolynomial):
            return NotImplemented
        self._check(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            _add_into(out, e, c)
        return TorusPolynomial(self.rank, min(self.degree, other.degree), out)

    __radd__ = __add__

    def __neg__(self):
        return TorusPolynomial(self.rank, self.degree, {e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Param)):
            return TorusPolynomial(
                self.rank, self.degree, {e: c * other for e, c in self._coeffs.items()}
            )
        if not isinstance(other, TorusPolynomial):
            return NotImplemented
        self._check(other)
        d = min(self.degree, other.degree)
        return TorusPolynomial(self.rank, d, poly_mul(self._coeffs, other._coeffs, d))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TorusPolynomial(self.rank, self.degree, {(0,) * self.rank: other})
        if not isinstance(other, TorusPolynomial):
            return NotImplemented
        return (self.rank, self.degree, self._coeffs) == (other.rank, other.degree, other._coeffs)

    def __hash__(self):
        return hash((self.rank, self.degree, frozenset(self._coeffs.items())))

    def inverse(self, d: int | None = None) -> "TorusPolynomial":
        d = self.degree if d is None else min(d, self.degree)
        return TorusPolynomial(self.rank, d, poly_invert(self._coeffs, self.rank, d))

    def variable_names(self) -> list[str]:
        if self.rank <= len(self.NAMES):
            return list(self.NAMES[: self.rank])
        return [f"a{i + 1}" for i in range(self.rank)]

    def __str__(self):
        if not self._coeffs:
            return "0"
        names = self.variable_names()
        parts = []
        for e in sorted(self._coeffs, key=lambda e: (sum(e), tuple(-x for x in e))):
            body = "".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            parts.append(_signed_term(self._coeffs[e], body))
        return _join_terms(parts)

    def __repr__(self):
        return f"TorusPolynomial(rank={self.rank}, degree={self.degree}, {self})"


def poly_mul(a: Mapping[tuple, object], b: Mapping[tuple, object], d: int) -> dict:
    """Truncated product of exponent-dict polynomials (same rank)."""
    out: dict = {}
    bl = [(e, sum(e), c) for e, c in b.items()]
    for e1, c1 in a.items():
        s1 = sum(e1)
        if s1 > d:
            continue
        for e2, s2, c2 in bl:
            if s1 + s2 <= d:
                key = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def poly_invert(a: Mapping[tuple, object], rank: int, d: int) -> dict:
    zero = (0,) * rank
    a0 = a.get(zero, 0)
    if not a0:
        raise AlgebraError("not invertible: zero constant term")
    inv0 = Fraction(1) / a0 if a0 not in (1, -1) else int(a0)
    by_deg: list[dict] = [dict() for _ in range(d + 1)]
    for e, c in a.items():
        s = sum(e)
        if s <= d:
            by_deg[s][e] = c
    res: list[dict] = [{zero: inv0}]
    for k in range(1, d + 1):
        acc: dict = {}
        for j in range(1, k + 1):
            if not by_deg[j] or not res[k - j]:
                continue
            for e, c in poly_mul(by_deg[j], res[k - j], d).items():
                _add_into(acc, e, c)
        res.append({e: -c * inv0 for e, c in acc.items()})
    out: dict = {}
    for part in res:
        out.update(part)
    return out


def _homogeneous_pieces(poly: Mapping[tuple, object], d: int) -> list[dict]:
    pieces: list[dict] = [dict() for _ in range(d + 1)]
    for e, c in poly.items():
        s = sum(e)
        if s <= d:
            pieces[s][e] = c
    return pieces


def monomials_of_degree(rank: int, k: int) -> list[tuple]:
    """Exponent vectors of total degree ``k``, lex-descending (a^k first)."""
    out = []
    for combo in combinations_with_replacement(range(rank), k):
        e = [0] * rank
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _check_weights(weights: Sequence[Sequence[int]], r: int) -> list[WeightVector]:
    out = []
    for w in weights:
        w = tuple(int(x) for x in w)
        if len(w) != r:
            raise ValueError(f"weight {w} does not have length {r}")
        out.append(w)
    return out


@lru_cache(maxsize=4096)
def _total_chern_cached(weights: tuple, r: int, d: int) -> tuple:
    poly: dict = {(0,) * r: 1}
    for w in weights:
        lin = {(0,) * r: 1}
        for i, wi in enumerate(w):
            if wi:
                e = [0] * r
                e[i] = 1
                lin[tuple(e)] = wi
        poly = poly_mul(poly, lin, d)
    return tuple(sorted(poly.items()))


def total_chern(weights: Sequence[Sequence[int]], r: int, d: int) -> TorusPolynomial:
    """Product of (1 + <w, a>) over the weights, truncated at ``d``."""
    ws = tuple(sorted(_check_weights(weights, r)))
    return TorusPolynomial(r, d, dict(_total_chern_cached(ws, r, d)))


def euler_class(weights: Sequence[Sequence[int]], r: int) -> TorusPolynomial:
    """Product of the linear forms <w, a>; a zero weight is an error."""
    ws = _check_weights(weights, r)
    n = len(ws)
    poly: dict = {(0,) * r: 1}
    for w in ws:
        if not any(w):
            raise AlgebraError("zero Euler class: a source weight is zero")
        poly = poly_mul(poly, TorusPolynomial.linear(w, n)._coeffs, n)
    return TorusPolynomial(r, n, poly)


@lru_cache(maxsize=1024)
def _chern_images_cached(src: tuple, tgt: tuple, r: int, d: int) -> tuple:
    num = dict(_total_chern_cached(tgt, r, d))
    den = dict(_total_chern_cached(src, r, d))
    quot = poly_mul(num, poly_invert(den, r, d), d)
    pieces = _homogeneous_pieces(quot, d)
    return tuple(tuple(sorted(p.items())) for p in pieces)


def chern_images(
    source_weights: Sequence[Sequence[int]],
    target_weights: Sequence[Sequence[int]],
    r: int,
    d: int,
) -> list[TorusPolynomial]:
    """Images of c_1..c_d under 1 + c_1 + c_2 + ... -> c(target)/c(source)."""
    src = tuple(sorted(_check_weights(source_weights, r)))
    tgt = tuple(sorted(_check_weights(target_weights, r)))
    pieces = _chern_images_cached(src, tgt, r, d)
    return [TorusPolynomial(r, d, dict(p)) for p in pieces[1:]]


def image_pieces(src: tuple, tgt: tuple, r: int, d: int) -> list[dict]:
    """Raw homogeneous images [psi(c_0)=1, psi(c_1), ..., psi(c_d)] as exponent dicts."""
    return [dict(p) for p in _chern_images_cached(tuple(sorted(src)), tuple(sorted(tgt)), r, d)]


def substitute(a: ChernSeries, images: Sequence, one) -> object:
    """Ring homomorphism c_k -> images[k-1], evaluated on a truncated series.

    ``one`` is the unit of the target ring; target elements must support
    ``+`` and ``*`` (truncation is the target ring's business).
    """
    needed = max((max(p) for p, _ in a.items() if p), default=0)
    if needed > len(images):
        raise AlgebraError(f"missing image for c_{len(images) + 1}")
    cache: dict[Partition, object] = {(): one}

    def mono(p: Partition):
        if p not in cache:
            cache[p] = images[p[0] - 1] * mono(p[1:])
        return cache[p]

    total = one * 0
    for p in sorted(dict(a.items()), key=lambda p: (sum(p), p)):
        total = total + mono(p) * a.coefficient(p)
    return total


def split_to_roots(a: ChernSeries, m: int, ell: int, d: int | None = None) -> TorusPolynomial:
    """Image under c -> prod(1+b_j, j<=m+ell) / prod(1+a_i, i<=m).

    The result lives in a rank ``2m+ell`` polynomial ring: the first ``m``
    variables are the a_i, the rest the b_j.
    """
    if m < 1 or ell < 0:
        raise ValueError("need m >= 1 and ell >= 0")
    d = a.degree if d is None else min(d, a.degree)
    r = 2 * m + ell
    src = [tuple(1 if k == i else 0 for k in range(r)) for i in range(m)]
    tgt = [tuple(1 if k == m + j else 0 for k in range(r)) for j in range(m + ell)]
    images = chern_images(src, tgt, r, d)
    return substitute(a.truncate(d), images, TorusPolynomial.one(r, d))
