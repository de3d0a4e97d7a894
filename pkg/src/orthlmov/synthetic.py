"""Seeded synthetic BPS tables and the free energies they come from.

:func:`forward_free_energy` builds ``F`` from an ``n`` table without touching
the basis-change routines the pipeline uses to go back, so running the
pipeline on its output is an independent roundtrip check.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .lmov import BpsTable, free_energy_from_invariants
from .partitions import PartitionVector, enumerate_vectors, z_factor
from .pbseries import PbSeries
from .qt import BracketDenominator, QTLaurent, RationalQT

__all__ = ["random_n_table", "forward_invariants", "forward_free_energy"]


def random_n_table(rng: random.Random, D: int, L: int = 1, max_abs: int = 5, max_entries: int = 4,
                   max_g: int = 4, max_beta: int = 5, recoverable: bool = True) -> BpsTable:
    """Random integer ``n`` table with ``1 <= |entry| <= max_abs``.

    With ``recoverable`` only even ``g`` and odd ``beta`` are drawn: the LHS of
    the integrality statement is odd in ``t`` and the ``sum_k q^(g-2k)`` basis
    meets the ``(q - 1/q)^g`` basis only in even ``g``, so other entries cannot
    come back out of the pipeline.
    """
    keys = enumerate_vectors(L, D, include_zero=False)
    entries: dict = {}
    for _ in range(rng.randint(1, max_entries)):
        mu = rng.choice(keys)
        if recoverable:
            g = 2 * rng.randint(0, max_g // 2)
            beta = 2 * rng.randint(-(max_beta + 1) // 2, (max_beta - 1) // 2) + 1
        else:
            g = rng.randint(0, max_g)
            beta = rng.randint(-max_beta, max_beta)
        value = rng.choice([v for v in range(-max_abs, max_abs + 1) if v])
        entries[(mu, g, beta)] = value
    return BpsTable("n", entries)


def _lhs_polynomial(profile: dict[tuple[int, int], Fraction]) -> QTLaurent:
    terms: dict = {}
    for (g, beta), v in profile.items():
        for k in range(g + 1):
            key = (g - 2 * k, beta)
            terms[key] = terms.get(key, 0) + v
    return QTLaurent(terms)


def forward_invariants(n: BpsTable, rng: random.Random | None = None) -> dict[PartitionVector, RationalQT]:
    """``g_mu = [mu] P_mu / (z_mu [1]^2)`` plus optional t-even noise.

    ``P_mu = sum n_{mu,g,beta} sum_k q^(g-2k) t^beta``.  The noise is a random
    Laurent polynomial in ``q`` and even powers of ``t``; it drops out of every
    ``t``-difference.
    """
    out = {}
    for mu, profile in n.by_partition().items():
        parts = [p for c in mu for p in c]
        num = _lhs_polynomial(profile) * BracketDenominator.from_parts(parts).as_laurent()
        g = RationalQT(num * Fraction(1, z_factor(mu)), BracketDenominator.of({1: 2}))
        if rng is not None:
            noise = QTLaurent({(rng.randint(-3, 3), 2 * rng.randint(-2, 2)): rng.randint(-4, 4) for _ in range(3)})
            g = g + noise
        out[mu] = g
    return out


def forward_free_energy(n: BpsTable, D: int, L: int | None = None, rng: random.Random | None = None) -> PbSeries:
    g = forward_invariants(n, rng)
    return free_energy_from_invariants(g, L or n.L or 1, D, "rational")

