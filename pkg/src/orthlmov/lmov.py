"""Orthogonal LMOV pipeline: free energy to integer BPS tables and back.

The forward chain is::

    Z --log--> F --Moebius--> g --LHS--> N --basis change--> n

and :func:`reconstruct_difference` rebuilds ``F(q,t;w) - F(q,-t;w)`` from an
``n`` table, which :func:`verify_product` compares against the chain input.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Any, Mapping

from .partitions import (
    Partition,
    PartitionVector,
    common_divisors,
    moebius,
    quotient,
    scale,
    z_factor,
)
from .pbseries import PbSeries
from .qt import (
    NotDivisible,
    NotExpressible,
    QTLaurent,
    QTSeries,
    RationalQT,
    bracket,
    n_basis_convert,
    reduce,
    series_expand,
    z_basis_expand,
)

__all__ = [
    "BpsTable",
    "VerificationReport",
    "free_energy",
    "reformulated_invariants",
    "free_energy_from_invariants",
    "conjecture_lhs",
    "extract_N",
    "convert_N_to_n",
    "unknot_free_energy",
    "unknot_N_table",
    "unknot_n_table",
    "difference_series",
    "reconstruct_difference",
    "verify_product",
    "verify_q_inversion",
    "numeric_product_check",
    "odd_sum_coefficients",
    "log_ratio_coefficients",
    "run_pipeline",
]

Key = tuple[PartitionVector, int, int]


def _vec(mu) -> PartitionVector:
    if isinstance(mu, PartitionVector):
        return mu
    if isinstance(mu, Partition):
        return PartitionVector([mu])
    return PartitionVector(mu)


@dataclass
class BpsTable:
    """Coefficients keyed by ``(mu, g, beta)``; ``kind`` is ``"N"`` or ``"n"``."""

    kind: str
    entries: dict[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("N", "n"):
            raise ValueError(f"kind must be 'N' or 'n', got {self.kind!r}")
        self.entries = {(_vec(mu), int(g), int(b)): Fraction(v)
                        for (mu, g, b), v in self.entries.items() if v != 0}

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.values())

    @property
    def L(self) -> int | None:
        return next(iter(self.entries))[0].L if self.entries else None

    def keys(self) -> list[Key]:
        return sorted(self.entries, key=lambda k: (k[0].sort_key(), k[1], k[2]))

    def get(self, mu, g: int, beta: int) -> Fraction:
        return self.entries.get((_vec(mu), g, beta), Fraction(0))

    def by_partition(self) -> dict[PartitionVector, dict[tuple[int, int], Fraction]]:
        out: dict = defaultdict(dict)
        for (mu, g, b), v in self.entries.items():
            out[mu][(g, b)] = v
        return dict(out)

    def support_bounds(self) -> dict:
        if not self.entries:
            return {"max_g": None, "max_abs_beta": None}
        return {"max_g": max(g for _, g, _ in self.entries),
                "max_abs_beta": max(abs(b) for _, _, b in self.entries)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BpsTable):
            return NotImplemented
        return self.kind == other.kind and self.entries == other.entries

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "entries": [{"mu": [list(c) for c in mu], "g": g, "beta": b, "value": str(self.entries[(mu, g, b)])}
                            for mu, g, b in self.keys()],
                "integral": self.integral}

    @classmethod
    def from_json(cls, data) -> "BpsTable":
        if not isinstance(data, dict) or "kind" not in data or "entries" not in data:
            raise ValueError("BpsTable JSON needs 'kind' and 'entries'")
        entries: dict = defaultdict(Fraction)
        from .qt import parse_fraction
        for i, e in enumerate(data["entries"]):
            try:
                key = (PartitionVector(e["mu"]), int(e["g"]), int(e["beta"]))
                entries[key] += parse_fraction(e["value"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"entries[{i}] is malformed: {exc}") from None
            if key[1] < 0:
                raise ValueError(f"entries[{i}]: g must be nonnegative")
        return cls(data["kind"], dict(entries))


@dataclass
class VerificationReport:
    check: str
    truncation: dict
    status: str = "pass"
    discrepancies: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, **disc) -> None:
        self.status = "fail"
        self.discrepancies.append({k: _jsonable(v) for k, v in disc.items()})

    def to_json(self) -> dict:
        return {"check": self.check, "truncation": self.truncation, "status": self.status,
                "discrepancy_count": len(self.discrepancies), "discrepancies": self.discrepancies[:200],
                "notes": {k: _jsonable(v) for k, v in self.notes.items()}}


def _jsonable(v: Any):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, PartitionVector):
        return [list(c) for c in v]
    if isinstance(v, (QTLaurent, RationalQT, QTSeries)):
        return v.to_json()
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _mu_json(mu: PartitionVector):
    return [list(c) for c in mu]


# ----------------------------------------------------------------------------
# forward chain


def free_energy(Z: PbSeries) -> PbSeries:
    return Z.log()


def _adams_coeff(c, k: int):
    return c if k == 1 else c.adams(k)


def reformulated_invariants(F: PbSeries) -> dict[PartitionVector, Any]:
    """``g_mu = sum_{k | mu} moebius(k)/k * F_{mu/k}(q^k, t^k)``."""
    if not F.constant_term().is_zero():
        raise ValueError("free energy must have zero constant term")
    candidates = {scale(mu, k) for mu in F.keys() for k in range(1, F.D // max(mu.degree, 1) + 1)}
    out = {}
    for mu in sorted(candidates, key=PartitionVector.sort_key):
        total = F.zero_coeff()
        for k in common_divisors(mu):
            mk = moebius(k)
            if mk == 0:
                continue
            c = F[quotient(mu, k)]
            if c.is_zero():
                continue
            total = total + _adams_coeff(c, k) * Fraction(mk, k)
        if not total.is_zero():
            out[mu] = total
    return out


def free_energy_from_invariants(g: Mapping, L: int, D: int, mode: str = "rational",
                                regime: str | None = None, order: int | None = None) -> PbSeries:
    """Inverse of :func:`reformulated_invariants`: ``F_mu = sum_{k|mu} adams_k(g_{mu/k}) / k``."""
    acc: dict = {}
    for mu, c in g.items():
        mu = _vec(mu)
        for k in range(1, D // max(mu.degree, 1) + 1):
            key = scale(mu, k)
            term = _adams_coeff(c, k) * Fraction(1, k)
            acc[key] = acc[key] + term if key in acc else term
    return PbSeries(acc, L, D, mode, regime, order)


def conjecture_lhs(g: Mapping, mu, require_laurent: bool = False):
    """``z_mu [1]^2 (g_mu(q,t) - g_mu(q,-t)) / (2 [mu])``.

    Exact inputs give a reduced :class:`RationalQT`; with ``require_laurent`` a
    leftover bracket denominator raises :class:`NotDivisible` naming ``mu``.
    Series inputs give a :class:`QTSeries`.
    """
    mu = _vec(mu)
    c = g.get(mu)
    parts = [p for comp in mu for p in comp]
    scalar = Fraction(z_factor(mu), 2)
    if c is None:
        return RationalQT(0)
    diff = c - c.negate_t()
    if isinstance(diff, QTSeries):
        return (diff * bracket(1) ** 2).divide_brackets(parts) * scalar
    r = RationalQT.coerce(diff) * (bracket(1) ** 2 * scalar)
    r = reduce(r.divide_brackets(parts))
    if require_laurent and not r.is_laurent():
        raise NotDivisible(f"conjecture LHS at mu={_mu_json(mu)} keeps denominator {r.denominator.factors}")
    return r


def _window_laurent(s: QTSeries, window: int) -> QTLaurent | None:
    bound = s.order - window
    if bound < 0:
        return None
    if any(abs(a) > bound for a, _ in s.terms):
        return None
    return s.as_laurent()


def extract_N(lhs: Mapping, D: int | None = None, order: int | None = None,
              regime: str | None = None, window: int | None = None) -> tuple[BpsTable, VerificationReport]:
    """Expand each LHS in ``(q - 1/q)^g t^beta`` and report integrality.

    Series-mode inputs are only accepted when their support sits inside
    ``[-(O - W), O - W]`` (default ``W = 2 D``); otherwise the key is marked
    inconclusive at this truncation.
    """
    report = VerificationReport("extract_N", {"D": D, "O": order, "regime": regime})
    entries: dict = {}
    inconclusive = []
    for mu in sorted((_vec(m) for m in lhs), key=PartitionVector.sort_key):
        val = lhs[mu]
        if isinstance(val, QTSeries):
            w = window if window is not None else 2 * (D or mu.degree)
            poly = _window_laurent(val, w)
            if poly is None:
                inconclusive.append(_mu_json(mu))
                continue
        else:
            r = reduce(RationalQT.coerce(val))
            if not r.is_laurent():
                report.fail(mu=mu, reason="not divisible", denominator=[list(f) for f in r.denominator.factors])
                continue
            poly = r.numerator
        try:
            coeffs = z_basis_expand(poly)
        except NotExpressible as exc:
            report.fail(mu=mu, reason="not expressible", beta=exc.beta, residual=exc.residual)
            continue
        for (g, b), v in coeffs.items():
            entries[(mu, g, b)] = v
    table = BpsTable("N", entries)
    for key in table.keys():
        v = table.entries[key]
        if v.denominator != 1:
            report.fail(mu=key[0], g=key[1], beta=key[2], reason="non-integral", value=v)
    if inconclusive and report.status == "pass":
        report.status = "inconclusive"
    report.notes.update({"integral": table.integral, "support": table.support_bounds(),
                         "inconclusive_keys": inconclusive, "entries": len(table.entries)})
    return table, report


def convert_N_to_n(N: BpsTable) -> tuple[BpsTable, VerificationReport]:
    """Per ``(mu, beta)``, rewrite the g-profile in the ``sum_k q^(g-2k)`` basis."""
    report = VerificationReport("convert_N_to_n", {})
    profiles: dict = defaultdict(dict)
    for (mu, g, b), v in N.entries.items():
        profiles[(mu, b)][g] = v
    entries: dict = {}
    for (mu, b) in sorted(profiles, key=lambda k: (k[0].sort_key(), k[1])):
        try:
            conv = n_basis_convert(profiles[(mu, b)])
        except NotExpressible as exc:
            report.fail(mu=mu, beta=b, reason="g-profile not expressible", residual=exc.residual)
            continue
        entries.update({(mu, g, b): v for g, v in conv.items()})
    table = BpsTable("n", entries)
    for key in table.keys():
        v = table.entries[key]
        if v.denominator != 1:
            report.fail(mu=key[0], g=key[1], beta=key[2], reason="non-integral", value=v)
    report.notes.update({"integral": table.integral, "support": table.support_bounds()})
    return table, report


# ----------------------------------------------------------------------------
# unknot


def unknot_free_energy(D: int) -> PbSeries:
    """``sum_k (1/k) (1 + (t^k - t^-k)/[k]) pb_k`` truncated at degree D."""
    if D < 1:
        raise ValueError("D must be >= 1")
    coeffs = {}
    for k in range(1, D + 1):
        tk = QTLaurent({(0, k): 1, (0, -k): -1})
        coeffs[PartitionVector([[k]])] = (RationalQT.inverse_brackets([k], tk) + 1) * Fraction(1, k)
    return PbSeries(coeffs, 1, D, "rational")


def unknot_N_table() -> BpsTable:
    one = PartitionVector([[1]])
    return BpsTable("N", {(one, 0, 1): 1, (one, 0, -1): -1})


def unknot_n_table() -> BpsTable:
    one = PartitionVector([[1]])
    return BpsTable("n", {(one, 0, 1): 1, (one, 0, -1): -1})


# ----------------------------------------------------------------------------
# reconstruction and verification


def difference_series(F: PbSeries, order: int, regime: str = "qlt1", specialized: bool = False) -> PbSeries:
    """Expand ``F(q,t;w) - F(q,-t;w)`` in the ``pb(z)`` basis to q-order ``order``."""
    Fw = F if specialized else F.w_specialize()
    diff = Fw - Fw.flip_t()
    if diff.mode == "series":
        if diff.regime != regime:
            raise ValueError("free energy was expanded in the other regime")
        return diff.truncate(diff.D)
    out = {k: series_expand(v, regime, order) for k, v in diff.items()}
    return PbSeries(out, F.L, F.D, "series", regime, order)


def _m_limit(g: int, d: int, order: int) -> int:
    # smallest exponent for given m is (2m - g) d; keep those below order
    m = 0
    while (2 * (m + 1) - g) * d < order:
        m += 1
    return m


def reconstruct_difference(n: BpsTable, D: int, order: int, regime: str = "qlt1",
                           L: int | None = None) -> PbSeries:
    """Rebuild ``F(q,t;w) - F(q,-t;w)`` from an ``n`` table.

    Sums ``(2/(d z_mu)) m n q^((g-2k +/- 2m) d) t^(d beta) pb_{d mu}`` over odd
    ``d`` with ``d |mu| <= D``; the sign of ``2m`` is ``+`` for ``qlt1`` and
    ``-`` for ``qgt1``.  Every m contributing below the order is included.
    """
    L = L or n.L or 1
    sign = 1 if regime == "qlt1" else -1
    acc: dict = defaultdict(lambda: defaultdict(Fraction))
    for (mu, g, beta), val in n.entries.items():
        if mu.is_zero():
            continue
        zmu = z_factor(mu)
        for d in range(1, D // mu.degree + 1, 2):
            key = scale(mu, d)
            base = Fraction(2, d * zmu) * val
            for m in range(1, _m_limit(g, d, order) + 1):
                for k in range(g + 1):
                    a = (g - 2 * k + sign * 2 * m) * d
                    if sign * a < order:
                        acc[key][(a, d * beta)] += base * m
    coeffs = {k: QTSeries(v, regime, order) for k, v in acc.items()}
    return PbSeries(coeffs, L, D, "series", regime, order)


def _compare(check: str, got: PbSeries, expected: PbSeries, truncation: dict) -> VerificationReport:
    report = VerificationReport(check, truncation)
    keys = sorted(set(got.keys()) | set(expected.keys()), key=PartitionVector.sort_key)
    for mu in keys:
        for (a, b), x, y in got[mu].discrepancies(expected[mu], truncation.get("O")):
            report.fail(mu=mu, q=a, t=b, expected=y, got=x)
    report.notes["keys_compared"] = len(keys)
    return report


def verify_product(F: PbSeries, n: BpsTable, D: int, order: int, regime: str = "qlt1",
                   specialized: bool = False) -> VerificationReport:
    """Compare ``F(w) - F(-t;w)`` with the reconstruction from ``n`` key by key."""
    F = F.truncate(D)
    got = difference_series(F, order, regime, specialized)
    expected = reconstruct_difference(n, D, order, regime, L=F.L)
    return _compare("verify_product", got, expected, {"D": D, "O": order, "regime": regime})


def verify_q_inversion(n: BpsTable, D: int, order: int, L: int | None = None) -> VerificationReport:
    """The ``|q| > 1`` reconstruction equals the ``|q| < 1`` one under ``q -> 1/q``."""
    small = reconstruct_difference(n, D, order, "qlt1", L)
    large = reconstruct_difference(n, D, order, "qgt1", L)
    mirrored = PbSeries({k: v.invert_q() for k, v in small.items()}, small.L, D, "series", "qgt1", order)
    return _compare("verify_q_inversion", large, mirrored, {"D": D, "O": order, "regime": "qgt1 vs inverted qlt1"})


def numeric_product_check(n: BpsTable, sample: Mapping, m_max: int, d_max: int,
                          tolerance: float = 1e-12) -> VerificationReport:
    """Evaluate both sides of the product formula at a numeric point.

    ``sample`` holds ``q``, ``t`` and ``z``: a list of alphabet values per
    component (a flat list is read as a knot).  The literal side is the log of
    the truncated product of symmetric products; the sum side truncates the
    odd-d series at ``d_max``.
    """
    q, t = complex(sample["q"]), complex(sample["t"])
    z = sample["z"]
    if z and not isinstance(z[0], (list, tuple)):
        z = [z]
    z = [[complex(x) for x in comp] for comp in z]
    if abs(q) >= 1:
        raise ValueError("numeric check needs |q| < 1")
    report = VerificationReport("numeric_product_check",
                                {"m_max": m_max, "d_max": d_max, "tolerance": tolerance})
    literal = 0j
    summed = 0j
    tail = 0.0
    d0 = d_max + 1 if d_max % 2 == 0 else d_max + 2
    for (mu, g, beta), val in n.entries.items():
        if mu.L != len(z):
            raise ValueError(f"table has {mu.L} components but the sample has {len(z)}")
        weight = float(val) / z_factor(mu)
        monos = _symmetric_monomials(mu, z)
        for m in range(1, m_max + 1):
            for k in range(g + 1):
                x = q ** (g - 2 * k + 2 * m) * t ** beta
                for Zm in monos:
                    arg = x * Zm
                    if abs(arg) >= 1 or arg == 1 or arg == -1:
                        raise ValueError(f"divergent sample: |q^{g - 2 * k + 2 * m} t^{beta} z^mu| = {abs(arg):.3g} at mu={_mu_json(mu)}")
                    literal += m * weight * (cmath.log(1 + arg) - cmath.log(1 - arg))
                    r = abs(arg)
                    tail += abs(m * weight) * 2 * r ** d0 / (d0 * (1 - r * r))
                for d in range(1, d_max + 1, 2):
                    summed += m * weight * (2 / d) * x ** d * _power_sum(mu, z, d)
    diff = abs(literal - summed)
    report.notes.update({"literal_log": _num(literal), "sum_formula": _num(summed),
                         "abs_difference": diff, "tail_bound": tail})
    if not diff < tolerance:
        report.fail(reason="numeric mismatch", abs_difference=diff, tolerance=tolerance)
    return report


def _num(c: complex):
    return c.real if c.imag == 0 else [c.real, c.imag]


def _symmetric_monomials(mu: PartitionVector, z) -> list[complex]:
    per_comp = []
    for comp, alphabet in zip(mu, z):
        vals = [1 + 0j]
        for part in comp:
            vals = [v * x ** part for v in vals for x in alphabet]
        per_comp.append(vals)
    return [math.prod(c) for c in cartesian(*per_comp)]


def _power_sum(mu: PartitionVector, z, d: int) -> complex:
    out = 1 + 0j
    for comp, alphabet in zip(mu, z):
        for part in comp:
            out *= sum(x ** (d * part) for x in alphabet)
    return out


def odd_sum_coefficients(n: int) -> list[Fraction]:
    """Coefficients of ``x^0 .. x^n`` in ``sum_{d odd} (2/d) x^d``."""
    return [Fraction(2, d) if d % 2 else Fraction(0) for d in range(n + 1)]


def log_ratio_coefficients(n: int) -> list[Fraction]:
    """Coefficients of ``log((1+x)/(1-x))`` by formal division and integration."""
    f = [Fraction(1)] + [Fraction(2)] * n          # (1+x)/(1-x)
    df = [f[i + 1] * (i + 1) for i in range(n)]    # f'
    h: list[Fraction] = []                         # f'/f
    for i in range(n):
        h.append(df[i] - sum(h[j] * f[i - j] for j in range(i)))
    return [Fraction(0)] + [h[i] / (i + 1) for i in range(n)]


# ----------------------------------------------------------------------------
# end-to-end


def run_pipeline(Z: PbSeries | None = None, F: PbSeries | None = None,
                 order: int | None = None, regime: str = "qlt1", window: int | None = None) -> dict:
    """Run ``Z -> F -> g -> LHS -> N -> n`` and collect the reports."""
    if F is None:
        if Z is None:
            raise ValueError("need Z or F")
        F = free_energy(Z)
    g = reformulated_invariants(F)
    series = F.mode == "series"
    lhs = {}
    for mu in g:
        lhs[mu] = conjecture_lhs(g, mu)
    N, rep_N = extract_N(lhs, D=F.D, order=F.order if series else order,
                         regime=F.regime if series else regime, window=window)
    n, rep_n = convert_N_to_n(N)
    return {"F": F, "g": g, "lhs": lhs, "N": N, "n": n, "reports": [rep_N, rep_n]}
