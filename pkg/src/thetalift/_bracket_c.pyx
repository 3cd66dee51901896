# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled bracket state-sum kernel; see _bracket_py for the reference
semantics.  Same inputs, same exact integer counts, much faster inner loop."""

from libc.stdlib cimport free, malloc


cdef inline int find(int *parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def bracket_counts(int n, joins_a, joins_b):
    cdef int m = 2 * n
    counts = [[0] * (m + 2) for _ in range(n + 1)]
    if n == 0:
        return counts
    if n > 62:
        raise ValueError("state-sum kernel supports at most 62 crossings")

    cdef int *ja = <int *> malloc(4 * n * sizeof(int))
    cdef int *jb = <int *> malloc(4 * n * sizeof(int))
    cdef int *parent = <int *> malloc(m * sizeof(int))
    cdef long long *tally = <long long *> malloc((n + 1) * (m + 2) * sizeof(long long))
    if ja == NULL or jb == NULL or parent == NULL or tally == NULL:
        free(ja); free(jb); free(parent); free(tally)
        raise MemoryError()

    cdef int i, k
    for i in range(n):
        for k in range(4):
            ja[4 * i + k] = joins_a[i][k]
            jb[4 * i + k] = joins_b[i][k]
    for i in range((n + 1) * (m + 2)):
        tally[i] = 0

    cdef unsigned long long mask, total = (<unsigned long long> 1) << n
    cdef int pc, unions, a, b
    cdef int *row
    with nogil:
        for mask in range(total):
            for i in range(m):
                parent[i] = i
            unions = 0
            pc = 0
            for i in range(n):
                if (mask >> i) & 1:
                    pc += 1
                    row = jb + 4 * i
                else:
                    row = ja + 4 * i
                a = find(parent, row[0]); b = find(parent, row[1])
                if a != b:
                    parent[a] = b
                    unions += 1
                a = find(parent, row[2]); b = find(parent, row[3])
                if a != b:
                    parent[a] = b
                    unions += 1
            tally[pc * (m + 2) + (m - unions)] += 1

    for i in range(n + 1):
        for k in range(m + 2):
            counts[i][k] = tally[i * (m + 2) + k]
    free(ja); free(jb); free(parent); free(tally)
    return counts
