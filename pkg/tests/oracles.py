"""Brute-force references used only by the tests."""

from fractions import Fraction
from itertools import permutations, product


def standard_tableaux(shape):
    n = sum(shape)
    out = []

    def grow(rows, k):
        if k > n:
            out.append([list(r) for r in rows])
            return
        for i, length in enumerate(shape):
            r = len(rows[i])
            if r < length and (i == 0 or len(rows[i - 1]) > r):
                rows[i].append(k)
                grow(rows, k + 1)
                rows[i].pop()

    grow([[] for _ in shape], 1)
    return out


def _tabloid(rows):
    return tuple(frozenset(r) for r in rows)


def _polytabloid(tab):
    cols = [[row[j] for row in tab if len(row) > j] for j in range(len(tab[0]))]
    vec = {}
    for choice in product(*(list(permutations(c)) for c in cols)):
        mapping, sign = {}, 1
        for col, perm in zip(cols, choice):
            for a, b in zip(col, perm):
                mapping[a] = b
            sign *= _sign([col.index(x) for x in perm])
        key = _tabloid([[mapping[x] for x in row] for row in tab])
        vec[key] = vec.get(key, 0) + sign
    return {k: v for k, v in vec.items() if v}


def _sign(perm):
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _solve(columns, target):
    """Exact least-squares-free solve of sum c_j columns[j] = target."""
    keys = sorted(set().union(*columns, target), key=repr)
    rows = [[Fraction(col.get(k, 0)) for col in columns] + [Fraction(target.get(k, 0))] for k in keys]
    m, piv_row, pivots = len(columns), 0, []
    for c in range(m):
        p = next((r for r in range(piv_row, len(rows)) if rows[r][c] != 0), None)
        if p is None:
            continue
        rows[piv_row], rows[p] = rows[p], rows[piv_row]
        pv = rows[piv_row][c]
        rows[piv_row] = [x / pv for x in rows[piv_row]]
        for r in range(len(rows)):
            if r != piv_row and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[piv_row])]
        pivots.append(c)
        piv_row += 1
    assert all(row[-1] == 0 for row in rows[piv_row:]), "target outside the span"
    sol = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def cycle_representative(cycle_type):
    perm, start = {}, 1
    for length in cycle_type:
        for i in range(length):
            perm[start + i] = start + (i + 1) % length
        start += length
    return perm


def specht_character(shape, cycle_type):
    """Trace of a permutation of the given cycle type acting on polytabloids."""
    tabs = standard_tableaux(shape)
    basis = [_polytabloid(t) for t in tabs]
    sigma = cycle_representative(cycle_type)
    trace = Fraction(0)
    for i, tab in enumerate(tabs):
        image = _polytabloid([[sigma[x] for x in row] for row in tab])
        trace += _solve(basis, image)[i]
    return trace


def permutation_character(cycle_type):
    """Fixed points of the natural permutation representation."""
    return sum(1 for c in cycle_type if c == 1)


def centralizer_size(cycle_type):
    n = sum(cycle_type)
    sigma = cycle_representative(cycle_type)
    s = [sigma[i + 1] - 1 for i in range(n)]
    count = 0
    for p in permutations(range(n)):
        if all(p[s[i]] == s[p[i]] for i in range(n)):
            count += 1
    return count


def partitions_by_multisets(n):
    """All partitions of n from brute-force multiset search."""
    from itertools import combinations_with_replacement
    out = set()
    for k in range(1, n + 1):
        for combo in combinations_with_replacement(range(1, n + 1), k):
            if sum(combo) == n:
                out.add(tuple(sorted(combo, reverse=True)))
    return out if n else {()}


def brauer2_regular_traces(loop):
    """Traces of left multiplication on Br_2 = span{1, s, e}."""
    basis = ["1", "s", "e"]

    def mul(a, b):
        if a == "1":
            return {b: 1}
        if b == "1":
            return {a: 1}
        if a == "s" and b == "s":
            return {"1": 1}
        if a == "e" and b == "e":
            return {"e": loop}
        return {"e": 1}  # se = es = e

    return {g: sum(Fraction(mul(g, b).get(b, 0)) for b in basis) for g in basis}
