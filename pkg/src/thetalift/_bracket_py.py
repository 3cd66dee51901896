"""Pure-Python bracket state-sum kernel.

Enumerates all 2^n smoothing states of an n-crossing diagram and tallies
them by (number of B-smoothings, number of loops).  Loop counting is
union-find over the 2n strand arcs; each crossing contributes two joins per
state.  Result is exact integer counts, bit-identical to the compiled
kernel in _bracket_c.
"""

from __future__ import annotations


def bracket_counts(
    n: int,
    joins_a: list[tuple[int, int, int, int]],
    joins_b: list[tuple[int, int, int, int]],
) -> list[list[int]]:
    """counts[b][loops] over all states; state bit i set means B-smoothing."""
    m = 2 * n
    counts = [[0] * (m + 2) for _ in range(n + 1)]
    if n == 0:
        return counts
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mask in range(1 << n):
        for i in range(m):
            parent[i] = i
        unions = 0
        pc = 0
        for i in range(n):
            if (mask >> i) & 1:
                pc += 1
                p0, q0, p1, q1 = joins_b[i]
            else:
                p0, q0, p1, q1 = joins_a[i]
            a, b = find(p0), find(q0)
            if a != b:
                parent[a] = b
                unions += 1
            a, b = find(p1), find(q1)
            if a != b:
                parent[a] = b
                unions += 1
        counts[pc][m - unions] += 1
    return counts
