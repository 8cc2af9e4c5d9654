"""Pure-Python fraction-free row reduction (reference backend)."""


def fraction_free_echelon(rows, ncols):
    """Reduce the integer matrix ``rows`` to Bareiss row echelon form in place.

    Pivots are chosen as the first nonzero entry at or below the current row,
    scanning columns left to right, so the result is deterministic.  Every
    division is exact.  Returns the list of pivot columns.
    """
    m = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = r
        while p < m and not rows[p][c]:
            p += 1
        if p == m:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        a = prow[c]
        for i in range(r + 1, m):
            row = rows[i]
            b = row[c]
            if b:
                for j in range(c + 1, ncols):
                    row[j] = (a * row[j] - b * prow[j]) // prev
            elif a != prev:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (a * row[j]) // prev
            row[c] = 0
        prev = a
        pivots.append(c)
        r += 1
    return pivots
