"""Exact arithmetic in q and t.

Three coefficient kinds are used throughout the package:

* :class:`QTLaurent` -- finitely supported Laurent polynomials in ``q, t`` with
  :class:`~fractions.Fraction` coefficients.
* :class:`RationalQT` -- a Laurent numerator over a product of quantum brackets
  ``[k] = q^k - q^-k``.  These are the only denominators the pipeline creates.
* :class:`QTSeries` -- a q-truncated expansion, either around ``q = 0``
  (regime ``"qlt1"``) or around ``q = infinity`` (regime ``"qgt1"``).

All values are immutable.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "NotDivisible",
    "NotExpressible",
    "QTLaurent",
    "BracketDenominator",
    "RationalQT",
    "QTSeries",
    "REGIMES",
    "bracket",
    "exact_divide",
    "reduce",
    "series_expand",
    "geometric_inverse_bracket",
    "z_basis_expand",
    "z_basis_sum",
    "n_basis_convert",
    "n_basis_sum",
    "parse_fraction",
]

REGIMES = ("qlt1", "qgt1")
Scalar = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """A bracket does not divide a Laurent polynomial exactly."""


class NotExpressible(ValueError):
    """A polynomial is outside the span of the requested basis."""

    def __init__(self, message: str, beta: int | None = None, residual=None):
        super().__init__(message)
        self.beta = beta
        self.residual = residual


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str) and "." not in s and "e" not in s.lower():
        return Fraction(s.strip())
    raise ValueError(f"expected an exact rational string like '3/4', got {s!r}")


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v != 0}


# ----------------------------------------------------------------------------
# Laurent polynomials


class QTLaurent:
    """Laurent polynomial ``sum c[a, b] q^a t^b`` over the rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        self._terms = {(int(a), int(b)): Fraction(c) for (a, b), c in (terms or {}).items() if c != 0}
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms: dict) -> "QTLaurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "QTLaurent":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c: Scalar = 1) -> "QTLaurent":
        return cls({(a, b): c})

    @classmethod
    def coerce(cls, x) -> "QTLaurent":
        if isinstance(x, QTLaurent):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QTLaurent")

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QTLaurent.constant(other)
        if isinstance(other, RationalQT):
            return other == self
        if not isinstance(other, QTLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ring structure
    def __add__(self, other):
        if isinstance(other, (RationalQT, QTSeries)):
            return other + self
        other = QTLaurent.coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return QTLaurent._raw(_clean(out))

    __radd__ = __add__

    def __neg__(self) -> "QTLaurent":
        return QTLaurent._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QTLaurent()
            return QTLaurent._raw({k: v * other for k, v in self._terms.items()})
        if isinstance(other, (RationalQT, QTSeries)):
            return other * self
        if not isinstance(other, QTLaurent):
            return NotImplemented
        out: dict = defaultdict(Fraction)
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                out[(a1 + a2, b1 + b2)] += c1 * c2
        return QTLaurent._raw(_clean(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "QTLaurent":
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        result, base = QTLaurent.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # substitutions
    def negate_t(self) -> "QTLaurent":
        return QTLaurent._raw({(a, b): (-c if b % 2 else c) for (a, b), c in self._terms.items()})

    def adams(self, d: int) -> "QTLaurent":
        if d < 1:
            raise ValueError("Adams operations need d >= 1")
        return QTLaurent._raw({(a * d, b * d): c for (a, b), c in self._terms.items()})

    def invert_q(self) -> "QTLaurent":
        return QTLaurent._raw({(-a, b): c for (a, b), c in self._terms.items()})

    def negate_invert_q(self) -> "QTLaurent":
        """Substitute ``q -> -1/q``."""
        return QTLaurent._raw({(-a, b): (-c if a % 2 else c) for (a, b), c in self._terms.items()})

    # slicing
    def t_slices(self) -> dict[int, dict[int, Fraction]]:
        out: dict[int, dict[int, Fraction]] = defaultdict(dict)
        for (a, b), c in self._terms.items():
            out[b][a] = c
        return dict(out)

    @classmethod
    def from_slices(cls, slices: Mapping[int, Mapping[int, Scalar]]) -> "QTLaurent":
        return cls({(a, b): c for b, sl in slices.items() for a, c in sl.items()})

    def q_range(self) -> tuple[int, int] | None:
        if not self._terms:
            return None
        qs = [a for a, _ in self._terms]
        return min(qs), max(qs)

    def evaluate(self, q, t):
        return sum(float(c) * q**a * t**b for (a, b), c in self._terms.items())

    # serialization
    def to_json(self) -> list:
        return [[a, b, str(c)] for (a, b), c in sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    @classmethod
    def from_json(cls, data) -> "QTLaurent":
        if not isinstance(data, list):
            raise ValueError(f"QTLaurent JSON must be a list of [a, b, coeff] triples, got {type(data).__name__}")
        terms: dict = defaultdict(Fraction)
        for entry in data:
            if not (isinstance(entry, list) and len(entry) == 3):
                raise ValueError(f"bad QTLaurent term {entry!r}")
            a, b, c = entry
            if not (isinstance(a, int) and isinstance(b, int)):
                raise ValueError(f"exponents must be integers in {entry!r}")
            terms[(a, b)] += parse_fraction(c)
        return cls(terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self._terms.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
            mono = "".join(s for s in (_power("q", a), _power("t", b)) if s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if e > 0 else f"{var}^({e})"


def bracket(n: int) -> QTLaurent:
    """Quantum integer ``q^n - q^-n``."""
    if n < 1:
        raise ValueError("brackets are indexed by positive integers")
    return QTLaurent({(n, 0): 1, (-n, 0): -1})


# univariate helpers on {exponent: coefficient} dicts

def _divide_slice(poly: dict[int, Fraction], k: int) -> dict[int, Fraction] | None:
    """Divide a univariate Laurent polynomial by q^k - q^-k, or None."""
    rem = dict(poly)
    if not rem:
        return {}
    lo = min(rem)
    quo: dict[int, Fraction] = {}
    while rem:
        a = max(rem)
        if a < lo + 2 * k:
            return None
        c = rem.pop(a)
        quo[a - k] = c
        low = a - 2 * k
        v = rem.get(low, 0) + c
        if v:
            rem[low] = v
        else:
            rem.pop(low, None)
    return quo


def exact_divide(f: QTLaurent, k: int) -> QTLaurent:
    """Return ``g`` with ``g * [k] == f``; raise :class:`NotDivisible` otherwise."""
    out = {}
    for b, sl in f.t_slices().items():
        quo = _divide_slice(sl, k)
        if quo is None:
            raise NotDivisible(f"[{k}] does not divide the t^{b} slice of {f!r}")
        out[b] = quo
    return QTLaurent.from_slices(out)


# ----------------------------------------------------------------------------
# Bracket denominators and ratios


@dataclass(frozen=True)
class BracketDenominator:
    """Product ``prod [k]^e`` stored as sorted ``(k, e)`` pairs.

    Rational scalars are never stored here; they are folded into the numerator
    coefficients, so the empty product is the only unit denominator.
    """

    factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple[int, int]]) -> "BracketDenominator":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: dict[int, int] = defaultdict(int)
        for k, e in items:
            if k < 1 or e < 0:
                raise ValueError(f"bad bracket factor [{k}]^{e}")
            acc[k] += e
        return cls(tuple(sorted((k, e) for k, e in acc.items() if e)))

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "BracketDenominator":
        return cls.of((p, 1) for p in parts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def is_one(self) -> bool:
        return not self.factors

    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def __mul__(self, other: "BracketDenominator") -> "BracketDenominator":
        return BracketDenominator.of(list(self.factors) + list(other.factors))

    def adams(self, d: int) -> "BracketDenominator":
        return BracketDenominator.of((k * d, e) for k, e in self.factors)

    def as_laurent(self) -> QTLaurent:
        out = QTLaurent.constant(1)
        for k, e in self.factors:
            out = out * bracket(k) ** e
        return out

    def to_json(self) -> list:
        return [[k, e] for k, e in self.factors]

    @classmethod
    def from_json(cls, data) -> "BracketDenominator":
        return cls.of((int(k), int(e)) for k, e in data)


class RationalQT:
    """Ratio ``numerator / prod [k]^e`` kept in partially reduced form.

    Equality is decided by cross-multiplication, so it does not depend on which
    cancellations :func:`reduce` happened to find.
    """

    __slots__ = ("numerator", "denominator")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, numerator, denominator: BracketDenominator | None = None, *, _reduce: bool = True):
        num = QTLaurent.coerce(numerator)
        den = denominator or BracketDenominator()
        if _reduce:
            num, den = _reduce_pair(num, den)
        self.numerator = num
        self.denominator = den

    @classmethod
    def coerce(cls, x) -> "RationalQT":
        if isinstance(x, RationalQT):
            return x
        return cls(QTLaurent.coerce(x), _reduce=False)

    @classmethod
    def inverse_brackets(cls, parts: Iterable[int], numerator=1) -> "RationalQT":
        return cls(numerator, BracketDenominator.from_parts(parts))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_laurent(self) -> bool:
        return self.denominator.is_one()

    def to_laurent(self) -> QTLaurent:
        if not self.denominator.is_one():
            raise NotDivisible(f"{self!r} is not a Laurent polynomial")
        return self.numerator

    def _common(self, other: "RationalQT") -> tuple[QTLaurent, QTLaurent, BracketDenominator]:
        d1, d2 = self.denominator.as_dict(), other.denominator.as_dict()
        common = {k: max(d1.get(k, 0), d2.get(k, 0)) for k in set(d1) | set(d2)}
        m1 = BracketDenominator.of({k: e - d1.get(k, 0) for k, e in common.items()}).as_laurent()
        m2 = BracketDenominator.of({k: e - d2.get(k, 0) for k, e in common.items()}).as_laurent()
        return self.numerator * m1, other.numerator * m2, BracketDenominator.of(common)

    def __add__(self, other):
        if isinstance(other, QTSeries):
            return other + self
        other = RationalQT.coerce(other)
        if self.denominator == other.denominator:
            return RationalQT(self.numerator + other.numerator, self.denominator)
        n1, n2, den = self._common(other)
        return RationalQT(n1 + n2, den)

    __radd__ = __add__

    def __neg__(self) -> "RationalQT":
        return RationalQT(-self.numerator, self.denominator, _reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalQT(self.numerator * other, self.denominator, _reduce=False)
        if isinstance(other, QTSeries):
            return other * self
        other = RationalQT.coerce(other)
        return RationalQT(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def divide_brackets(self, parts: Iterable[int]) -> "RationalQT":
        return RationalQT(self.numerator, self.denominator * BracketDenominator.from_parts(parts))

    def multiply_brackets(self, parts: Iterable[int]) -> "RationalQT":
        return RationalQT(self.numerator * BracketDenominator.from_parts(parts).as_laurent(), self.denominator)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, QTLaurent)):
            other = RationalQT.coerce(other)
        if not isinstance(other, RationalQT):
            return NotImplemented
        if self.denominator == other.denominator:
            return self.numerator == other.numerator
        n1, n2, _ = self._common(other)
        return n1 == n2

    def negate_t(self) -> "RationalQT":
        return RationalQT(self.numerator.negate_t(), self.denominator, _reduce=False)

    def adams(self, d: int) -> "RationalQT":
        return RationalQT(self.numerator.adams(d), self.denominator.adams(d), _reduce=False)

    def invert_q(self) -> "RationalQT":
        sign = -1 if self.denominator.degree() % 2 else 1
        return RationalQT(self.numerator.invert_q() * sign, self.denominator, _reduce=False)

    def to_json(self) -> dict:
        return {"num": self.numerator.to_json(), "den": self.denominator.to_json()}

    @classmethod
    def from_json(cls, data) -> "RationalQT":
        if isinstance(data, list):
            return cls(QTLaurent.from_json(data))
        if not isinstance(data, dict) or "num" not in data:
            raise ValueError("RationalQT JSON must be {'num': [...], 'den': [[k, e], ...]}")
        return cls(QTLaurent.from_json(data["num"]), BracketDenominator.from_json(data.get("den", [])))

    def __repr__(self) -> str:
        if self.denominator.is_one():
            return repr(self.numerator)
        den = "*".join(f"[{k}]" + (f"^{e}" if e > 1 else "") for k, e in self.denominator.factors)
        return f"({self.numerator!r})/({den})"


def _reduce_pair(num: QTLaurent, den: BracketDenominator) -> tuple[QTLaurent, BracketDenominator]:
    if num.is_zero():
        return num, BracketDenominator()
    remaining = den.as_dict()
    # larger brackets first: [k] | [mk], so trying [mk] early cancels more
    for k in sorted(remaining, reverse=True):
        while remaining[k]:
            try:
                num = exact_divide(num, k)
            except NotDivisible:
                break
            remaining[k] -= 1
    return num, BracketDenominator.of(remaining)


def reduce(r: RationalQT) -> RationalQT:
    """Cancel every bracket factor that divides the numerator exactly."""
    num, den = _reduce_pair(r.numerator, r.denominator)
    return RationalQT(num, den, _reduce=False)


# ----------------------------------------------------------------------------
# Truncated series


class QTSeries:
    """q-truncated series in one of two expansion regimes.

    In regime ``"qlt1"`` every coefficient of ``q^a`` with ``a < order`` is
    exact; in regime ``"qgt1"`` the same holds for ``-a < order``.  Writing
    ``s = +1`` (resp. ``-1``), the tracked quantity is the valuation ``s*a``.
    """

    __slots__ = ("_terms", "regime", "order")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None, regime: str, order: int):
        if regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
        self.regime = regime
        self.order = int(order)
        s = self.direction
        self._terms = {(int(a), int(b)): Fraction(c) for (a, b), c in (terms or {}).items()
                       if c != 0 and s * a < self.order}

    @property
    def direction(self) -> int:
        return 1 if self.regime == "qlt1" else -1

    @classmethod
    def zero(cls, regime: str, order: int) -> "QTSeries":
        return cls({}, regime, order)

    @classmethod
    def from_laurent(cls, f: QTLaurent, regime: str, order: int) -> "QTSeries":
        return cls(f.terms, regime, order)

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> int:
        """Smallest ``s*a`` present, capped at the order."""
        s = self.direction
        return min([s * a for a, _ in self._terms] + [self.order])

    def truncate(self, order: int) -> "QTSeries":
        return QTSeries(self._terms, self.regime, min(order, self.order))

    def as_laurent(self) -> QTLaurent:
        """The stored (exact) part as a Laurent polynomial."""
        return QTLaurent(self._terms)

    def _check(self, other: "QTSeries") -> None:
        if other.regime != self.regime:
            raise ValueError(f"regime mismatch: {self.regime} vs {other.regime}")

    def _lift(self, other) -> "QTSeries":
        if isinstance(other, QTSeries):
            self._check(other)
            return other
        if isinstance(other, RationalQT):
            return series_expand(other, self.regime, self.order)
        f = QTLaurent.coerce(other)
        return QTSeries(f.terms, self.regime, self.order)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return QTSeries(out, self.regime, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "QTSeries":
        return QTSeries({k: -v for k, v in self._terms.items()}, self.regime, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QTSeries({k: v * other for k, v in self._terms.items()}, self.regime, self.order)
        s = self.direction
        if isinstance(other, QTLaurent):
            if other.is_zero():
                return QTSeries.zero(self.regime, self.order)
            v_other = min(s * a for a, _ in other.terms)
            order = self.order + v_other
        else:
            if isinstance(other, RationalQT):
                # expand far enough that the product is good to self.order
                v_num = min((s * a for a, _ in other.numerator.terms), default=0)
                shift = sum(k * e for k, e in other.denominator.factors)
                need = self.order - self.valuation() + v_num + shift
                other = series_expand(other, self.regime, max(need, 1))
            else:
                other = self._lift(other)
            order = min(self.order + other.valuation(), other.order + self.valuation())
        out: dict = defaultdict(Fraction)
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other.items():
                if s * (a1 + a2) < order:
                    out[(a1 + a2, b1 + b2)] += c1 * c2
        return QTSeries(out, self.regime, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def divide_brackets(self, parts: Iterable[int]) -> "QTSeries":
        parts = list(parts)
        if not parts:
            return self
        return self * RationalQT.inverse_brackets(parts)

    def negate_t(self) -> "QTSeries":
        return QTSeries({(a, b): (-c if b % 2 else c) for (a, b), c in self._terms.items()},
                        self.regime, self.order)

    def adams(self, d: int) -> "QTSeries":
        if d < 1:
            raise ValueError("Adams operations need d >= 1")
        return QTSeries({(a * d, b * d): c for (a, b), c in self._terms.items()}, self.regime, self.order * d)

    def invert_q(self) -> "QTSeries":
        other = "qgt1" if self.regime == "qlt1" else "qlt1"
        return QTSeries({(-a, b): c for (a, b), c in self._terms.items()}, other, self.order)

    def agrees_with(self, other: "QTSeries", order: int | None = None) -> bool:
        return not self.discrepancies(other, order)

    def discrepancies(self, other: "QTSeries", order: int | None = None) -> list[tuple[tuple[int, int], Fraction, Fraction]]:
        self._check(other)
        cap = min(self.order, other.order) if order is None else min(order, self.order, other.order)
        s = self.direction
        keys = {k for k in list(self._terms) + list(other._terms) if s * k[0] < cap}
        out = []
        for k in sorted(keys):
            x, y = self._terms.get(k, Fraction(0)), other._terms.get(k, Fraction(0))
            if x != y:
                out.append((k, x, y))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, QTSeries):
            return NotImplemented
        return self.regime == other.regime and self.order == other.order and self._terms == other._terms

    def to_json(self) -> dict:
        return {"regime": self.regime, "order": self.order, "terms": QTLaurent(self._terms).to_json()}

    @classmethod
    def from_json(cls, data) -> "QTSeries":
        if not isinstance(data, dict) or not {"regime", "order", "terms"} <= set(data):
            raise ValueError("QTSeries JSON must be {'regime', 'order', 'terms'}")
        return cls(QTLaurent.from_json(data["terms"]).terms, data["regime"], int(data["order"]))

    def __repr__(self) -> str:
        big_o = f"O(q^{self.order})" if self.regime == "qlt1" else f"O(q^-{self.order})"
        return f"{QTLaurent(self._terms)!r} + {big_o}"


def geometric_inverse_bracket(k: int, regime: str, order: int) -> QTSeries:
    """Expansion of ``1/[k]``: ``-sum q^(k+2km)`` or ``sum q^-(k+2km)``."""
    if regime == "qlt1":
        terms = {(k + 2 * k * m, 0): -1 for m in range(0, max(order, 0) // (2 * k) + 1)}
    elif regime == "qgt1":
        terms = {(-(k + 2 * k * m), 0): 1 for m in range(0, max(order, 0) // (2 * k) + 1)}
    else:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
    return QTSeries(terms, regime, order)


def series_expand(r, regime: str, order: int) -> QTSeries:
    """Expand a ratio with bracket denominators, exact below ``order``."""
    if order < 1:
        raise ValueError("series order must be positive")
    if isinstance(r, QTSeries):
        if r.regime != regime:
            raise ValueError("cannot re-expand a series in the other regime")
        return r.truncate(order)
    r = RationalQT.coerce(r)
    if r.is_zero():
        return QTSeries.zero(regime, order)
    s = 1 if regime == "qlt1" else -1
    num = r.numerator
    v_num = min(s * a for a, _ in num.terms)
    target = order - v_num
    factors = [k for k, e in r.denominator.factors for _ in range(e)]
    total_val = sum(factors)
    den = QTSeries({(0, 0): 1}, regime, target)
    for k in factors:
        den = den * geometric_inverse_bracket(k, regime, target - total_val + k)
    return den.truncate(target) * num


# ----------------------------------------------------------------------------
# Basis changes


def _laurent_span_peel(poly: dict[int, Fraction], basis, stop_below: int = 0):
    """Peel ``poly`` from its top q-degree downward against a monic basis."""
    rem = dict(poly)
    coeffs: dict[int, Fraction] = {}
    while rem:
        top = max(rem)
        if top < stop_below:
            break
        c = rem[top]
        coeffs[top] = c
        for a, v in basis(top).items():
            nv = rem.get(a, 0) - c * v
            if nv:
                rem[a] = nv
            else:
                rem.pop(a, None)
    return coeffs, rem


def _binomial_row(g: int) -> dict[int, Fraction]:
    from math import comb
    return {g - 2 * j: Fraction((-1) ** j * comb(g, j)) for j in range(g + 1)}


def _n_basis(g: int) -> dict[int, Fraction]:
    return {g - 2 * k: Fraction(1) for k in range(g + 1)}


def z_basis_sum(coeffs: Mapping[tuple[int, int], Scalar]) -> QTLaurent:
    """``sum N[g, beta] (q - 1/q)^g t^beta`` as a Laurent polynomial."""
    out: dict = defaultdict(Fraction)
    for (g, beta), c in coeffs.items():
        for a, v in _binomial_row(g).items():
            out[(a, beta)] += Fraction(c) * v
    return QTLaurent(out)


def z_basis_expand(f: QTLaurent) -> dict[tuple[int, int], Fraction]:
    """Write ``f`` as ``sum N[g, beta] (q - 1/q)^g t^beta``.

    Each t-slice must be invariant under ``q -> -1/q``; otherwise
    :class:`NotExpressible` is raised with the offending ``beta`` and the
    anti-invariant part as residual.
    """
    f = QTLaurent.coerce(f)
    bad = (f - f.negate_invert_q()).t_slices()
    if bad:
        beta = min(bad, key=abs)
        residual = QTLaurent.from_slices({beta: bad[beta]}) / 2
        raise NotExpressible(f"t^{beta} slice is not invariant under q -> -1/q", beta, residual)
    out: dict[tuple[int, int], Fraction] = {}
    for beta, sl in f.t_slices().items():
        coeffs, rem = _laurent_span_peel(sl, _binomial_row)
        if rem:  # unreachable for invariant slices
            raise NotExpressible(f"t^{beta} slice left a residual", beta, QTLaurent.from_slices({beta: rem}))
        out.update({(g, beta): c for g, c in coeffs.items()})
    return out


def n_basis_sum(coeffs: Mapping[int, Scalar]) -> dict[int, Fraction]:
    out: dict = defaultdict(Fraction)
    for g, c in coeffs.items():
        for a, v in _n_basis(g).items():
            out[a] += Fraction(c) * v
    return _clean(out)


def n_basis_convert(N: Mapping[int, Scalar]) -> dict[int, Fraction]:
    """Change a g-profile from the ``(q - 1/q)^g`` basis to ``sum_k q^(g-2k)``.

    Both bases are monic at the top, so the solve peels from the highest
    q-degree down.  Odd powers of ``q - 1/q`` are anti-symmetric under
    ``q -> 1/q`` while every ``sum_k q^(g-2k)`` is symmetric, so a profile with
    a nonzero anti-symmetric part raises :class:`NotExpressible`.
    """
    poly: dict = defaultdict(Fraction)
    for g, c in N.items():
        if g < 0:
            raise ValueError("genus index must be nonnegative")
        for a, v in _binomial_row(g).items():
            poly[a] += Fraction(c) * v
    coeffs, rem = _laurent_span_peel(_clean(poly), _n_basis)
    if rem:
        raise NotExpressible("g-profile has a q -> 1/q anti-symmetric part", None,
                             QTLaurent({(a, 0): c for a, c in rem.items()}))
    return {g: c for g, c in coeffs.items() if c}
