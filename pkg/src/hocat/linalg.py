"""Exact dense linear algebra over the rationals.

Matrices are lists of rows.  Entries are ``int`` or ``Fraction``; results keep
plain ints wherever the value is integral.  The elimination itself runs on
integers through a fraction-free kernel, compiled when available.
"""

from fractions import Fraction
from math import lcm

try:  # compiled kernel, built from _ckernel.pyx when Cython was available
    from ._ckernel import ff_gauss_jordan

    KERNEL = "compiled"
except ImportError:  # pragma: no cover - exercised when the extension is absent
    from ._pykernel import ff_gauss_jordan

    KERNEL = "python"

from . import _pykernel

__all__ = [
    "KERNEL",
    "q",
    "format_q",
    "parse_q",
    "rational_str",
    "zeros",
    "identity",
    "transpose",
    "matmul",
    "matvec",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "solve_rows",
    "is_zero",
]


def q(x):
    """Normalise a rational: ints stay ints, integral Fractions become ints."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    return x


def format_q(x):
    """JSON-friendly exact value: an int, or a ``"p/q"`` string."""
    x = q(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return int(x)


def rational_str(x):
    """Exact value as a string: ``"3"`` or ``"-1/2"``."""
    return str(Fraction(x))


def parse_q(value):
    if isinstance(value, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return q(Fraction(value))
    if isinstance(value, Fraction):
        return q(value)
    raise ValueError(f"not an exact rational: {value!r}")


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a, b, inner=None, ncols=None):
    """Product ``a @ b``; ``inner``/``ncols`` disambiguate empty shapes."""
    m = len(a)
    k = inner if inner is not None else (len(a[0]) if a else len(b))
    n = ncols if ncols is not None else (len(b[0]) if b else 0)
    out = zeros(m, n)
    for i in range(m):
        row = a[i]
        orow = out[i]
        for t in range(k):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(n):
                    y = brow[j]
                    if y:
                        orow[j] += x * y
        for j in range(n):
            orow[j] = q(orow[j])
    return out


def matvec(a, v):
    return [q(sum(x * y for x, y in zip(row, v) if x and y)) for row in a]


def is_zero(a):
    return all(not x for row in a for x in row)


def _integer_rows(a):
    rows = []
    for row in a:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        if den == 1:
            rows.append([int(x) for x in row])
        else:
            rows.append([int(x * den) for x in row])
    return rows


def _eliminate(a, ncols, kernel=None):
    rows = _integer_rows(a)
    fn = kernel or ff_gauss_jordan
    pivots, det = fn(rows, ncols)
    return rows, pivots, det


def rref(a, ncols=None, kernel=None):
    """Reduced row echelon form: returns ``(rows, pivot_columns)``.

    Only the nonzero rows are returned.
    """
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    rows, pivots, det = _eliminate(a, n, kernel)
    out = []
    for r in range(len(pivots)):
        out.append([q(Fraction(x, det)) if x else 0 for x in rows[r]])
    return out, pivots


def rank(a, ncols=None, kernel=None):
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a or n == 0:
        return 0
    _, pivots, _ = _eliminate(a, n, kernel)
    return len(pivots)


def nullspace(a, ncols):
    """Basis of ``{x : a x = 0}`` as a list of vectors of length ``ncols``."""
    if not a:
        return identity(ncols)
    red, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, c in enumerate(pivots):
            x = red[r][free]
            if x:
                v[c] = q(-x)
        basis.append(v)
    return basis


def solve(a, b, ncols):
    """One solution of ``a x = b`` (``a`` is m x ncols), or ``None``."""
    m = len(a)
    if m == 0:
        return [0] * ncols
    aug = [list(a[i]) + [b[i]] for i in range(m)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return x


def solve_rows(a, targets, nvars):
    """Solve ``x a = t`` for every target row ``t``.

    ``a`` is nvars x m.  Returns ``(solutions, unique)`` where ``solutions`` holds
    one solution per target (``None`` when inconsistent) and ``unique`` says
    whether the homogeneous system only has the zero solution.
    """
    at = transpose(a) if a else []
    m = len(at)
    if m == 0:
        sols = [[0] * nvars if not any(t) else None for t in targets]
        return sols, nvars == 0
    k = len(targets)
    aug = [list(at[i]) + [targets[j][i] for j in range(k)] for i in range(m)]
    red, pivots = rref(aug, nvars + k)
    main = [c for c in pivots if c < nvars]
    unique = len(main) == nvars
    sols = []
    for j in range(k):
        col = nvars + j
        if any(red[r][col] for r in range(len(main), len(red))):
            sols.append(None)
            continue
        x = [0] * nvars
        for r, c in enumerate(main):
            x[c] = red[r][col]
        sols.append(x)
    return sols, unique


def python_kernel():
    """The pure-Python kernel, exposed for benchmarks and cross-checks."""
    return _pykernel.ff_gauss_jordan


def sparse_solve(equations, nvars):
    """Solve a sparse system exactly.

    ``equations`` is an iterable of ``(row, rhs)`` with ``row`` a dict from
    variable index to coefficient.  Returns ``(solution, nullity)`` where
    ``solution`` is a list of values (free variables set to zero) or ``None``
    when the system is inconsistent.
    """
    rhs_col = nvars
    pivots = {}
    for row, rhs in equations:
        r = {j: x for j, x in row.items() if x}
        if rhs:
            r[rhs_col] = rhs
        while r:
            c = min(r)
            if c == rhs_col:
                return None, None
            prow = pivots.get(c)
            if prow is None:
                a = r[c]
                if a != 1:
                    r = {j: q(Fraction(x) / a) for j, x in r.items()}
                pivots[c] = r
                break
            a = r[c]
            for j, x in prow.items():
                v = r.get(j, 0) - a * x
                if v:
                    r[j] = q(v)
                else:
                    r.pop(j, None)
    x = [0] * nvars
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        val = row.get(rhs_col, 0)
        for j, a in row.items():
            if j != c and j != rhs_col:
                val -= a * x[j]
        x[c] = q(val)
    return x, nvars - len(pivots)
