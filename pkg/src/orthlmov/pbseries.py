"""Formal series in the power-sum basis ``pb_mu``.

A :class:`PbSeries` is a finitely supported map from partition vectors to
coefficients, truncated at total degree ``D``.  Power sums multiply by
concatenating parts, so key multiplication is :func:`union_concat`.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping

from .partitions import PartitionVector, scale, union_concat
from .qt import BracketDenominator, QTLaurent, QTSeries, RationalQT, REGIMES, series_expand

__all__ = ["PbSeries", "MODES"]

MODES = ("laurent", "rational", "series")

_COEFF_TYPE = {"laurent": QTLaurent, "rational": RationalQT, "series": QTSeries}


class PbSeries:
    """Truncated series ``sum_mu c_mu pb_mu`` with one coefficient kind.

    ``mode`` is one of ``"laurent"``, ``"rational"`` or ``"series"``; in series
    mode every coefficient shares ``regime`` and the series carries ``order``.
    """

    __slots__ = ("L", "D", "mode", "regime", "order", "_coeffs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, coeffs: Mapping, L: int, D: int, mode: str = "laurent",
                 regime: str | None = None, order: int | None = None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if L < 1 or D < 0:
            raise ValueError("need L >= 1 and D >= 0")
        if mode == "series":
            if regime not in REGIMES or order is None:
                raise ValueError("series mode needs a regime and an order")
        self.L, self.D, self.mode = L, D, mode
        self.regime, self.order = (regime, int(order)) if mode == "series" else (None, None)
        out = {}
        for mu, c in coeffs.items():
            mu = mu if isinstance(mu, PartitionVector) else PartitionVector(mu)
            if mu.L != L:
                raise ValueError(f"key {mu!r} has {mu.L} components, expected {L}")
            if mu.degree > D:
                continue
            c = self._coerce(c)
            if not c.is_zero():
                out[mu] = c
        self._coeffs = out

    def _coerce(self, c):
        kind = _COEFF_TYPE[self.mode]
        if self.mode == "series":
            if isinstance(c, QTSeries):
                if c.regime != self.regime:
                    raise ValueError(f"coefficient regime {c.regime} does not match {self.regime}")
                return c.truncate(self.order)
            if isinstance(c, (RationalQT, QTLaurent, int, Fraction)):
                return series_expand(RationalQT.coerce(c), self.regime, self.order)
        elif self.mode == "rational":
            if isinstance(c, (RationalQT, QTLaurent, int, Fraction)):
                return RationalQT.coerce(c)
        elif isinstance(c, (QTLaurent, int, Fraction)):
            return QTLaurent.coerce(c)
        raise TypeError(f"{type(c).__name__} coefficient in a {self.mode}-mode series (expected {kind.__name__})")

    # constructors
    def _like(self, coeffs, D: int | None = None, mode: str | None = None) -> "PbSeries":
        return PbSeries(coeffs, self.L, self.D if D is None else D, mode or self.mode, self.regime, self.order)

    @classmethod
    def one(cls, L: int, D: int, mode: str = "laurent", regime=None, order=None) -> "PbSeries":
        return cls({PartitionVector.zero(L): 1}, L, D, mode, regime, order)

    @classmethod
    def zero(cls, L: int, D: int, mode: str = "laurent", regime=None, order=None) -> "PbSeries":
        return cls({}, L, D, mode, regime, order)

    def zero_coeff(self):
        if self.mode == "series":
            return QTSeries.zero(self.regime, self.order)
        return RationalQT(0) if self.mode == "rational" else QTLaurent()

    # access
    def __getitem__(self, mu):
        mu = mu if isinstance(mu, PartitionVector) else PartitionVector(mu)
        return self._coeffs.get(mu, self.zero_coeff())

    def keys(self):
        return sorted(self._coeffs, key=PartitionVector.sort_key)

    def items(self):
        return [(k, self._coeffs[k]) for k in self.keys()]

    def __len__(self) -> int:
        return len(self._coeffs)

    def constant_term(self):
        return self[PartitionVector.zero(self.L)]

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check(self, other: "PbSeries") -> None:
        if other.L != self.L:
            raise ValueError(f"component count mismatch: {self.L} vs {other.L}")
        if other.mode != self.mode:
            raise ValueError(f"coefficient mode mismatch: {self.mode} vs {other.mode}; promote explicitly")
        if self.mode == "series" and other.regime != self.regime:
            raise ValueError(f"regime mismatch: {self.regime} vs {other.regime}")

    # arithmetic
    def __add__(self, other: "PbSeries") -> "PbSeries":
        self._check(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out[k] + v if k in out else v
        return PbSeries(out, self.L, min(self.D, other.D), self.mode, self.regime,
                        None if self.order is None else min(self.order, other.order))

    def __neg__(self) -> "PbSeries":
        return self._like({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "PbSeries") -> "PbSeries":
        return self + (-other)

    def scalar_mul(self, c) -> "PbSeries":
        return self._like({k: v * c for k, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(other)
        if not isinstance(other, PbSeries):
            return NotImplemented
        return self.multiply(other)

    __rmul__ = __mul__

    def multiply(self, other: "PbSeries") -> "PbSeries":
        """Cauchy product truncated at ``min(D_A, D_B)``."""
        self._check(other)
        D = min(self.D, other.D)
        acc: dict = {}
        right = list(other._coeffs.items())
        for k1, v1 in self._coeffs.items():
            d1 = k1.degree
            for k2, v2 in right:
                if d1 + k2.degree > D:
                    continue
                key = union_concat(k1, k2)
                prod = v1 * v2
                acc[key] = acc[key] + prod if key in acc else prod
        order = None if self.order is None else min(self.order, other.order)
        return PbSeries(acc, self.L, D, self.mode, self.regime, order)

    def log(self) -> "PbSeries":
        """Formal logarithm; the constant term must be exactly 1."""
        const = self.constant_term()
        if not _is_one(const):
            raise ValueError(f"log needs constant term 1, got {const!r}")
        x = self - PbSeries.one(self.L, self.D, self.mode, self.regime, self.order)
        result = self._like({})
        power = x
        for k in range(1, self.D + 1):
            if power.is_zero():
                break
            result = result + power.scalar_mul(Fraction((-1) ** (k + 1), k))
            power = power.multiply(x)
        return result

    def exp(self) -> "PbSeries":
        """Formal exponential; the constant term must be 0."""
        if not self.constant_term().is_zero():
            raise ValueError("exp needs a zero constant term")
        result = PbSeries.one(self.L, self.D, self.mode, self.regime, self.order)
        power = result
        for k in range(1, self.D + 1):
            power = power.multiply(self)
            if power.is_zero():
                break
            result = result + power.scalar_mul(Fraction(1, factorial(k)))
        return result

    # substitutions
    def map_coeffs(self, fn: Callable, mode: str | None = None) -> "PbSeries":
        return self._like({k: fn(k, v) for k, v in self._coeffs.items()}, mode=mode)

    def adams_series(self, d: int) -> "PbSeries":
        """``pb_mu -> pb_{d mu}`` together with ``q -> q^d, t -> t^d``."""
        if d < 1:
            raise ValueError("Adams operations need d >= 1")
        out = {scale(k, d): v.adams(d) for k, v in self._coeffs.items() if k.degree * d <= self.D}
        order = None if self.order is None else self.order * d
        return PbSeries(out, self.L, self.D, self.mode, self.regime, order)

    def flip_t(self) -> "PbSeries":
        return self._like({k: v.negate_t() for k, v in self._coeffs.items()})

    def w_specialize(self) -> "PbSeries":
        """Divide the coefficient of ``pb_mu`` by ``[mu] = prod_i [mu_i]``."""
        if self.mode == "series":
            return self._like({k: v.divide_brackets(_parts(k)) for k, v in self._coeffs.items()})
        return self._like({k: RationalQT.coerce(v).divide_brackets(_parts(k)) for k, v in self._coeffs.items()},
                          mode="rational")

    def w_unspecialize(self) -> "PbSeries":
        """Multiply the coefficient of ``pb_mu`` by ``[mu]``."""
        out = {}
        for k, v in self._coeffs.items():
            factor = BracketDenominator.from_parts(_parts(k)).as_laurent()
            out[k] = v * factor
        return self._like(out)

    def promote(self, mode: str, regime: str | None = None, order: int | None = None) -> "PbSeries":
        """Convert to a richer coefficient kind (laurent -> rational -> series)."""
        if mode == self.mode and (mode != "series" or (regime == self.regime and order == self.order)):
            return self
        if MODES.index(mode) < MODES.index(self.mode):
            raise ValueError(f"cannot demote {self.mode} to {mode}; use as_laurent()")
        if mode == "series" and self.mode == "series" and regime != self.regime:
            raise ValueError("cannot change the regime of a truncated series")
        return PbSeries(dict(self._coeffs), self.L, self.D, mode, regime, order)

    def as_laurent(self) -> "PbSeries":
        """Demote rational coefficients with trivial denominators."""
        if self.mode == "laurent":
            return self
        if self.mode != "rational":
            raise ValueError("series coefficients cannot be demoted")
        return PbSeries({k: v.to_laurent() for k, v in self._coeffs.items()}, self.L, self.D, "laurent")

    def truncate(self, D: int) -> "PbSeries":
        return self._like(dict(self._coeffs), D=min(D, self.D))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PbSeries):
            return NotImplemented
        if self.L != other.L or self.D != other.D:
            return False
        keys = set(self._coeffs) | set(other._coeffs)
        return all(self[k] == other[k] for k in keys)

    # serialization
    def to_json(self) -> dict:
        data = {"L": self.L, "D": self.D, "mode": self.mode}
        if self.mode == "series":
            data["regime"], data["order"] = self.regime, self.order
        data["terms"] = [{"mu": [list(c) for c in k], "coeff": v.to_json()} for k, v in self.items()]
        return data

    @classmethod
    def from_json(cls, data) -> "PbSeries":
        if not isinstance(data, dict):
            raise ValueError("PbSeries JSON must be an object")
        missing = {"L", "D", "terms"} - set(data)
        if missing:
            raise ValueError(f"PbSeries JSON is missing {sorted(missing)}")
        mode = data.get("mode", "laurent")
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        parse = {"laurent": QTLaurent.from_json, "rational": RationalQT.from_json,
                 "series": QTSeries.from_json}[mode]
        coeffs: dict = defaultdict(lambda: None)
        for i, term in enumerate(data["terms"]):
            if not isinstance(term, dict) or "mu" not in term or "coeff" not in term:
                raise ValueError(f"terms[{i}] must have 'mu' and 'coeff'")
            mu = PartitionVector(term["mu"])
            c = parse(term["coeff"])
            coeffs[mu] = c if coeffs[mu] is None else coeffs[mu] + c
        return cls(dict(coeffs), int(data["L"]), int(data["D"]), mode, data.get("regime"), data.get("order"))

    def __repr__(self) -> str:
        body = ", ".join(f"{[list(c) for c in k]}: {v!r}" for k, v in self.items())
        return f"PbSeries(L={self.L}, D={self.D}, mode={self.mode}, {{{body}}})"


def _parts(mu: PartitionVector) -> list[int]:
    return [p for c in mu for p in c]


def _is_one(c) -> bool:
    if isinstance(c, QTSeries):
        return c.agrees_with(QTSeries({(0, 0): 1}, c.regime, c.order))
    return c == 1
