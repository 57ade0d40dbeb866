"""Pure-Python fraction-free elimination kernels.

Reference implementation of the integer elimination routines; the Cython
module ``apw._kernel`` exposes the same two functions and must agree with
these bit for bit.

Pivoting rule (both kernels): scan columns left to right; in each column take
the entry of largest absolute value among the rows not yet used as pivots,
ties going to the lowest row index.
"""

BACKEND = "python"


def _pick_pivot(rows, r, c):
    best = -1
    best_abs = 0
    for i in range(r, len(rows)):
        a = rows[i][c]
        if a:
            aa = -a if a < 0 else a
            if aa > best_abs:
                best, best_abs = i, aa
    return best


def rank_int(rows, ncols):
    """Rank of an integer matrix by one-sided Bareiss elimination.

    ``rows`` is consumed (rows are replaced in place).
    """
    m = len(rows)
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = _pick_pivot(rows, r, c)
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        tail = prow[c:]
        for i in range(r + 1, m):
            row = rows[i]
            f = row[c]
            # entries left of column c are already zero below the pivot
            if f:
                rows[i] = row[:c] + [(piv * a - f * b) // prev for a, b in zip(row[c:], tail)]
            else:
                rows[i] = row[:c] + [piv * a // prev for a in row[c:]]
        prev = piv
        r += 1
    return r


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(echelon, pivots)`` where ``echelon`` holds only the nonzero
    rows, ordered by pivot column, and every pivot entry equals the same
    integer (the last pivot used). Entries in pivot columns other than the
    row's own pivot are zero.
    """
    m = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = _pick_pivot(rows, r, c)
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        tail = prow[c:]
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if i > r:
                if f:
                    rows[i] = row[:c] + [(piv * a - f * b) // prev for a, b in zip(row[c:], tail)]
                else:
                    rows[i] = row[:c] + [piv * a // prev for a in row[c:]]
            elif f:
                rows[i] = [(piv * a - f * b) // prev for a, b in zip(row, prow)]
            else:
                rows[i] = [piv * a // prev for a in row]
        prev = piv
        pivots.append(c)
        r += 1
    return rows[:r], pivots
