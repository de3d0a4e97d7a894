"""Characters needed to assemble the orthogonal partition function.

Symmetric-group characters come from the Murnaghan-Nakayama rule.  Brauer
algebra characters of the irreducibles labelled by partitions of ``n - 2k``
(``k >= 1``) are not computed: they are read from a JSON table.  Those values
depend on the loop parameter of the Brauer algebra, which the caller fixes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from typing import Mapping

from .partitions import Partition, PartitionVector, enumerate_partitions, enumerate_vectors, z_factor
from .pbseries import PbSeries
from .qt import QTLaurent, RationalQT, parse_fraction

__all__ = [
    "CharacterIntegrityError",
    "AssemblyError",
    "CharacterTable",
    "mn_character",
    "char_table",
    "load_brauer_table",
    "assemble_partition_function",
    "assembly_coverage",
]


class CharacterIntegrityError(ValueError):
    """Supplied character data contradicts a known value."""


class AssemblyError(ValueError):
    """A character value or invariant needed for assembly is missing."""


@lru_cache(maxsize=None)
def _mn(shape: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1 if not shape else 0
    r, rest = cycles[0], cycles[1:]
    ell = len(shape)
    beta = [shape[i] + ell - 1 - i for i in range(ell)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in beta_set:
            continue
        sign = -1 if sum(1 for x in beta if nb < x < b) % 2 else 1
        new_beta = sorted((x if x != b else nb for x in beta), reverse=True)
        m = len(new_beta)
        new_shape = tuple(p for p in (new_beta[i] - (m - 1 - i) for i in range(m)) if p > 0)
        total += sign * _mn(new_shape, rest)
    return total


def mn_character(A, lam) -> int:
    """``chi_A`` of S_n on the class of cycle type ``lam`` (border-strip recursion)."""
    A, lam = Partition(A), Partition(lam)
    if A.degree != lam.degree:
        raise ValueError(f"|A| = {A.degree} but |lambda| = {lam.degree}")
    return _mn(tuple(A), tuple(lam))


ClassLabel = tuple[int, Partition]  # (number of e-factors, cycle type of the rest)


@dataclass
class CharacterTable:
    """Character values of Br_n, keyed by ``(rep, (k, lambda))``.

    Reps are partitions of ``n - 2k``; the class ``(k, lambda)`` is
    ``e^k (x) gamma_lambda`` with ``lambda`` a partition of ``n - 2k``.
    """

    n: int
    entries: dict[tuple[Partition, ClassLabel], Fraction] = field(default_factory=dict)

    @property
    def rep_labels(self) -> list[Partition]:
        return [A for k in range(self.n // 2 + 1) for A in enumerate_partitions(self.n - 2 * k)]

    @property
    def class_labels(self) -> list[ClassLabel]:
        return [(k, lam) for k in range(self.n // 2 + 1) for lam in enumerate_partitions(self.n - 2 * k)]

    def brauer_reps(self) -> list[Partition]:
        return [A for A in self.rep_labels if A.degree < self.n]

    def has_brauer_data(self) -> bool:
        return any(A.degree < self.n for A, _ in self.entries)

    def value(self, rep, cls: ClassLabel) -> Fraction:
        key = (Partition(rep), (cls[0], Partition(cls[1])))
        try:
            return self.entries[key]
        except KeyError:
            raise AssemblyError(f"Br_{self.n}: no character value for rep {list(key[0])} "
                                f"on class e^{key[1][0]} x {list(key[1][1])}") from None

    def coverage(self) -> dict:
        total = len(self.rep_labels) * len(self.class_labels)
        return {"n": self.n, "entries": len(self.entries), "possible": total,
                "complete": len(self.entries) == total, "s_block_only": not self.has_brauer_data()}

    def s_block(self) -> list[list[int]]:
        """Rows: reps of S_n in reverse-lex order. Columns: classes in lex order, (1^n) first."""
        reps = enumerate_partitions(self.n)
        classes = list(reversed(reps))
        return [[int(self.entries[(A, (0, lam))]) for lam in classes] for A in reps]

    def to_json(self) -> dict:
        rows = sorted(self.entries.items(), key=lambda kv: (kv[0][1][0], -kv[0][0].degree, kv[0][0], kv[0][1][1]))
        return {"n": self.n, "entries": [{"rep": list(A), "e": k, "class": list(lam), "value": str(v)}
                                         for (A, (k, lam)), v in rows]}


def char_table(n: int) -> CharacterTable:
    """The S_n block, plus the zeros forced on e-classes for reps of size n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    table = CharacterTable(n)
    for A in enumerate_partitions(n):
        for lam in enumerate_partitions(n):
            table.entries[(A, (0, lam))] = Fraction(mn_character(A, lam))
        for k in range(1, n // 2 + 1):
            for lam in enumerate_partitions(n - 2 * k):
                table.entries[(A, (k, lam))] = Fraction(0)
    return table


def load_brauer_table(source) -> CharacterTable:
    """Merge supplied Br_n character values with the computed S_n block.

    ``source`` is a dict, a JSON string, or a path-like to a JSON file of the
    form ``{"n": int, "entries": [{"rep", "e", "class", "value"}, ...]}``.
    """
    if isinstance(source, (str, bytes)) and not str(source).lstrip().startswith("{"):
        with open(source) as fh:
            source = json.load(fh)
    elif isinstance(source, (str, bytes)):
        source = json.loads(source)
    elif hasattr(source, "read_text"):
        source = json.loads(source.read_text())
    if not isinstance(source, dict) or "n" not in source:
        raise ValueError("character table JSON needs an 'n' field")
    n = int(source["n"])
    table = char_table(n)
    for i, entry in enumerate(source.get("entries", [])):
        try:
            A, k, lam = Partition(entry["rep"]), int(entry["e"]), Partition(entry["class"])
            value = parse_fraction(entry["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"entries[{i}] is malformed: {exc}") from None
        if (n - A.degree) % 2 or A.degree > n:
            raise ValueError(f"entries[{i}]: rep {list(A)} is not a partition of n - 2k for n = {n}")
        if k < 0 or lam.degree != n - 2 * k:
            raise ValueError(f"entries[{i}]: class e^{k} x {list(lam)} does not live in Br_{n}")
        key = (A, (k, lam))
        if A.degree == n:
            expected = table.entries[key]
            if value != expected:
                raise CharacterIntegrityError(
                    f"entries[{i}]: chi_{list(A)}(e^{k} x {list(lam)}) = {value} but the known value is {expected}")
        table.entries[key] = value
    return table


def assembly_coverage(tables: Mapping[int, CharacterTable], D: int) -> str:
    used = [tables[n] for n in range(2, D + 1) if n in tables]
    return "full" if used and all(t.has_brauer_data() for t in used) else "S-block only"


def _reps_for(table: CharacterTable) -> list[Partition]:
    s_reps = enumerate_partitions(table.n)
    return s_reps + table.brauer_reps() if table.has_brauer_data() else s_reps


def assemble_partition_function(W: Mapping, tables: Mapping[int, CharacterTable] | None, D: int, L: int) -> PbSeries:
    """Build ``Z = sum_mu pb_mu / z_mu * sum_A chi_A(gamma_mu) W_A``.

    ``W`` maps rep-label vectors (L-tuples of partitions) to invariants.  A
    table without Brauer data contributes its S_n reps only.
    """
    tables = dict(tables or {})
    for n in range(D + 1):
        if n not in tables:
            tables[n] = char_table(n)
        elif tables[n].n != n:
            raise ValueError(f"table registered for n={n} describes Br_{tables[n].n}")
    values = {PartitionVector(k): v for k, v in W.items()}
    rational = any(isinstance(v, RationalQT) for v in values.values())
    zero = RationalQT(0) if rational else QTLaurent()
    coeffs: dict = {PartitionVector.zero(L): 1}
    for mu in enumerate_vectors(L, D, include_zero=False):
        per_comp = [_reps_for(tables[c.degree]) for c in mu]
        total = zero
        for A in product(*per_comp):
            chi = prod((tables[c.degree].value(a, (0, c)) for a, c in zip(A, mu)), start=Fraction(1))
            if chi == 0:
                continue
            key = PartitionVector(A)
            if key not in values:
                raise AssemblyError(f"missing invariant W for rep labels {[list(a) for a in A]} "
                                    f"(needed at pb key {[list(c) for c in mu]})")
            total = total + values[key] * chi
        coeffs[mu] = total * Fraction(1, z_factor(mu))
    return PbSeries(coeffs, L, D, "rational" if rational else "laurent")
