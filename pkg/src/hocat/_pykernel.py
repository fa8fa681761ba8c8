"""Pure-Python fraction-free elimination kernel.

Used when the compiled ``_ckernel`` extension is unavailable.  Both modules
expose the same function with the same semantics so results are bit-identical.
"""


def ff_gauss_jordan(rows, ncols):
    """Fraction-free Gauss-Jordan elimination on integer rows, in place.

    After the call every pivot row carries the same pivot value ``det`` at its
    pivot column and zeros in all other pivot columns; rows below the rank are
    zero.  Returns ``(pivot_columns, det)``.  Dividing the first
    ``len(pivot_columns)`` rows by ``det`` gives the reduced row echelon form.
    """
    nrows = len(rows)
    prev = 1
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and rows[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = rows[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            if a == 0:
                if piv != prev:
                    for j in range(ncols):
                        if row[j]:
                            row[j] = (piv * row[j]) // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - a * prow[j]) // prev
        pivots.append(c)
        prev = piv
        r += 1
    return pivots, prev
