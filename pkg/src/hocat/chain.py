"""Chain complexes of finite-dimensional rational vector spaces.

The model structure is the projective one over a field: weak equivalences
are quasi-isomorphisms, fibrations are degreewise surjections and
cofibrations are degreewise injections.  Complexes are bounded and every
differential lowers degree by one.
"""

import json
import random
from itertools import product

from .base import Base
from .linalg import (
    identity,
    matmul,
    nullspace,
    parse_q,
    rational_str,
    q,
    rank,
    rref,
    solve_rows,
    sparse_solve,
    zeros,
)


class ChainComplex:
    """A bounded complex: ``dims[n]`` and ``d[n]`` of shape ``dims[n-1] x dims[n]``."""

    def __init__(self, dims, d=None, check=True):
        self.dims = {int(n): int(k) for n, k in dims.items() if k}
        self.d = {}
        for n, mat in (d or {}).items():
            n = int(n)
            if self.dim(n) and self.dim(n - 1):
                self.d[n] = [[q(x) for x in row] for row in mat]
        if check:
            self.validate()

    def dim(self, n):
        return self.dims.get(n, 0)

    @property
    def degrees(self):
        return sorted(self.dims)

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def diff(self, n):
        return self.d.get(n) or zeros(self.dim(n - 1), self.dim(n))

    def validate(self):
        for n, mat in self.d.items():
            if len(mat) != self.dim(n - 1) or any(len(row) != self.dim(n) for row in mat):
                raise ValueError(f"differential in degree {n} has the wrong shape")
        for n in self.d:
            if n - 1 in self.d:
                prod = matmul(self.d[n - 1], self.d[n], self.dim(n - 1), self.dim(n))
                if any(x for row in prod for x in row):
                    raise ValueError(f"d o d != 0 at degree {n}")

    def __eq__(self, other):
        return isinstance(other, ChainComplex) and self.dims == other.dims and all(
            self.diff(n) == other.diff(n) for n in set(self.dims) | set(other.dims)
        )

    def __repr__(self):
        return f"ChainComplex({self.dims})"

    def to_json(self):
        return {
            "degrees": {str(n): k for n, k in sorted(self.dims.items())},
            "d": {str(n): [[rational_str(x) for x in row] for row in mat] for n, mat in sorted(self.d.items())},
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        dims = {int(n): int(k) for n, k in data.get("degrees", {}).items()}
        d = {int(n): [[parse_q(x) for x in row] for row in mat] for n, mat in data.get("d", {}).items()}
        return cls(dims, d)


def zero_complex():
    return ChainComplex({})


def unit_complex():
    """The monoidal unit: Q in degree 0."""
    return ChainComplex({0: 1})


# --- homology ---------------------------------------------------------------

def homology(c):
    """Betti numbers by degree (zeros omitted)."""
    out = {}
    for n in c.degrees:
        dn = c.diff(n)
        rk_out = rank(dn, c.dim(n)) if c.dim(n - 1) else 0
        up = c.diff(n + 1)
        rk_in = rank(up, c.dim(n + 1)) if c.dim(n + 1) else 0
        b = c.dim(n) - rk_out - rk_in
        if b:
            out[n] = b
    return out


def cycles(c, n):
    if not c.dim(n - 1):
        return identity(c.dim(n))
    return nullspace(c.diff(n), c.dim(n))


def boundaries(c, n):
    up = c.diff(n + 1)
    if not c.dim(n + 1):
        return []
    cols = [[up[i][j] for i in range(c.dim(n))] for j in range(c.dim(n + 1))]
    red, _ = rref(cols, c.dim(n))
    return red


def homology_basis(c, n):
    """Cycle representatives completing a basis of boundaries to one of cycles."""
    bnd = boundaries(c, n)
    reps = []
    current = list(bnd)
    base_rank = rank(current, c.dim(n)) if current else 0
    for z in cycles(c, n):
        trial = current + [z]
        r = rank(trial, c.dim(n))
        if r > base_rank:
            reps.append(z)
            current = trial
            base_rank = r
    return reps


def homology_coordinates(c, n, vec):
    """Coordinates of the class of cycle ``vec`` in the basis of :func:`homology_basis`."""
    reps = homology_basis(c, n)
    bnd = boundaries(c, n)
    rows = reps + bnd
    if not rows:
        return []
    sols, _ = solve_rows(rows, [vec], len(rows))
    sol = sols[0]
    if sol is None:
        raise ValueError("vector is not a cycle")
    return sol[: len(reps)]


# --- chain maps ----------------------------------------------------------------

class ChainMap:
    """Degree-preserving map; ``maps[n]`` has shape ``target.dim(n) x source.dim(n)``."""

    def __init__(self, source, target, maps=None):
        self.source = source
        self.target = target
        self.maps = {}
        for n, mat in (maps or {}).items():
            if source.dim(n) and target.dim(n):
                self.maps[int(n)] = [[q(x) for x in row] for row in mat]

    def at(self, n):
        return self.maps.get(n) or zeros(self.target.dim(n), self.source.dim(n))

    def is_chain_map(self):
        for n in set(self.source.degrees) | set(self.target.degrees) | {k + 1 for k in self.target.degrees}:
            lhs = matmul(self.target.diff(n), self.at(n), self.target.dim(n), self.source.dim(n))
            rhs = matmul(self.at(n - 1), self.source.diff(n), self.source.dim(n - 1), self.source.dim(n))
            if lhs != rhs:
                return False
        return True

    def compose(self, first):
        """``self o first``."""
        maps = {}
        for n in first.source.degrees:
            maps[n] = matmul(self.at(n), first.at(n), self.source.dim(n), first.source.dim(n))
        return ChainMap(first.source, self.target, maps)

    def __eq__(self, other):
        degs = set(self.source.degrees) | set(other.source.degrees)
        return all(self.at(n) == other.at(n) for n in degs)

    def rank_at(self, n):
        if not self.source.dim(n) or not self.target.dim(n):
            return 0
        return rank(self.at(n), self.source.dim(n))

    def is_injective(self):
        return all(self.rank_at(n) == self.source.dim(n) for n in self.source.degrees)

    def is_surjective(self):
        return all(self.rank_at(n) == self.target.dim(n) for n in self.target.degrees)

    def homology_matrix(self, n):
        src = homology_basis(self.source, n)
        out = []
        for z in src:
            img = [q(sum(a * b for a, b in zip(row, z))) for row in self.at(n)] if self.target.dim(n) else []
            out.append(homology_coordinates(self.target, n, img) if img else [])
        return out

    def is_quasi_iso(self):
        hs, ht = homology(self.source), homology(self.target)
        if hs != ht:
            return False
        for n, b in hs.items():
            mat = self.homology_matrix(n)
            if rank(mat, b) != b:
                return False
        return True

    def to_json(self):
        return {str(n): [[rational_str(x) for x in row] for row in m] for n, m in sorted(self.maps.items())}


def identity_map(c):
    return ChainMap(c, c, {n: identity(c.dim(n)) for n in c.degrees})


def zero_map(a, b):
    return ChainMap(a, b, {})


# --- monoidal structure and colimits ----------------------------------------------

def tensor(a, b):
    """Tensor product with Koszul signs.

    The basis in degree ``n`` lists pairs ``(i, j)`` with ``deg i + deg j = n``
    ordered by the degree of the left factor.  Returns ``(complex, pairs)``
    where ``pairs[n]`` lists ``((p, i), (r, j))``.
    """
    pairs = {}
    for p in a.degrees:
        for r in b.degrees:
            for i in range(a.dim(p)):
                for j in range(b.dim(r)):
                    pairs.setdefault(p + r, []).append(((p, i), (r, j)))
    dims = {n: len(v) for n, v in pairs.items()}
    index = {n: {pr: k for k, pr in enumerate(v)} for n, v in pairs.items()}
    d = {}
    for n, basis in pairs.items():
        if n - 1 not in pairs:
            continue
        mat = zeros(dims[n - 1], dims[n])
        for col, ((p, i), (r, j)) in enumerate(basis):
            da = a.diff(p)
            for k in range(a.dim(p - 1)):
                x = da[k][i]
                if x:
                    mat[index[n - 1][((p - 1, k), (r, j))]][col] += x
            db = b.diff(r)
            sign = -1 if p % 2 else 1
            for k in range(b.dim(r - 1)):
                x = db[k][j]
                if x:
                    mat[index[n - 1][((p, i), (r - 1, k))]][col] += sign * x
        d[n] = mat
    return ChainComplex(dims, d), pairs


def direct_sum(a, b):
    """``a (+) b`` with inclusions; the basis lists ``a`` before ``b``."""
    degs = set(a.degrees) | set(b.degrees)
    dims = {n: a.dim(n) + b.dim(n) for n in degs}
    d = {}
    for n in degs:
        mat = zeros(dims.get(n - 1, 0), dims[n])
        da, db = a.diff(n), b.diff(n)
        for r in range(a.dim(n - 1)):
            for c in range(a.dim(n)):
                mat[r][c] = da[r][c]
        for r in range(b.dim(n - 1)):
            for c in range(b.dim(n)):
                mat[a.dim(n - 1) + r][a.dim(n) + c] = db[r][c]
        d[n] = mat
    s = ChainComplex(dims, d)
    ia = ChainMap(a, s, {n: [[1 if r == c else 0 for c in range(a.dim(n))] for r in range(dims[n])] for n in a.degrees})
    ib = ChainMap(
        b, s, {n: [[1 if r == a.dim(n) + c else 0 for c in range(b.dim(n))] for r in range(dims[n])] for n in b.degrees}
    )
    return s, ia, ib


def cokernel(f):
    """Cokernel of a chain map with its projection.

    The basis of the cokernel is chosen among the target basis vectors not
    hit by pivots: the least target elements survive.
    """
    t = f.target
    dims = {}
    proj = {}
    keep = {}
    for n in t.degrees:
        img = f.at(n)
        cols = [[img[r][c] for r in range(t.dim(n))] for c in range(f.source.dim(n))] if img else []
        # pivot on the largest coordinate so the least coordinates survive
        rev = [list(reversed(col)) for col in cols]
        red, piv = rref(rev, t.dim(n)) if rev else ([], [])
        pivots = {t.dim(n) - 1 - p for p in piv}
        rows = [list(reversed(r)) for r in red]
        survivors = [k for k in range(t.dim(n)) if k not in pivots]
        keep[n] = survivors
        dims[n] = len(survivors)
        pos = {k: i for i, k in enumerate(survivors)}
        mat = zeros(len(survivors), t.dim(n))
        for k in survivors:
            mat[pos[k]][k] = 1
        by_pivot = {}
        for r in rows:
            lead = max(k for k, x in enumerate(r) if x)
            by_pivot[lead] = r
        for p, r in by_pivot.items():
            for k in survivors:
                if r[k]:
                    mat[pos[k]][p] = q(-r[k])
        proj[n] = mat
    d = {}
    for n in t.degrees:
        if not dims.get(n) or not dims.get(n - 1):
            continue
        incl = [[1 if r == keep[n][c] else 0 for c in range(dims[n])] for r in range(t.dim(n))]
        d[n] = matmul(proj[n - 1], matmul(t.diff(n), incl, t.dim(n), dims[n]), t.dim(n - 1), dims[n])
    c = ChainComplex(dims, d)
    return c, ChainMap(t, c, proj)


def pushout(f, g):
    """Pushout of ``B <-f- A -g-> C``; returns ``(P, B -> P, C -> P)``."""
    s, ib, ic = direct_sum(f.target, g.target)
    diff = {}
    for n in f.source.degrees:
        top = ib.compose(f).at(n)
        bot = ic.compose(g).at(n)
        diff[n] = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(top, bot)]
    p, proj = cokernel(ChainMap(f.source, s, diff))
    return p, proj.compose(ib), proj.compose(ic)


def coequalizer(f, g):
    diff = {n: [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(f.at(n), g.at(n))] for n in f.source.degrees}
    return cokernel(ChainMap(f.source, f.target, diff))


# --- generating cofibrations -----------------------------------------------------

def sphere(n):
    """``S^n``: Q in degree ``n``."""
    return ChainComplex({n: 1})


def disk(n):
    """``D^n``: Q in degrees ``n`` and ``n - 1`` with identity differential."""
    return ChainComplex({n: 1, n - 1: 1}, {n: [[1]]})


def sphere_to_disk(n):
    """The generating cofibration ``S^{n-1} -> D^n``."""
    return ChainMap(sphere(n - 1), disk(n), {n - 1: [[1]]})


def generating_cofibrations(bound):
    """``S^{n-1} -> D^n`` for ``|n| <= bound`` (the degree bound of a run)."""
    return [(n, sphere_to_disk(n)) for n in range(-bound, bound + 1)]


def generating_trivial_cofibrations(bound):
    """``0 -> D^n`` for ``|n| <= bound``."""
    return [(n, ChainMap(zero_complex(), disk(n))) for n in range(-bound, bound + 1)]


# --- lifting -----------------------------------------------------------------------

class _Unknowns:
    """Bookkeeping for unknown matrices in exact linear systems."""

    def __init__(self):
        self.blocks = {}
        self.count = 0

    def add(self, name, rows, cols):
        self.blocks[name] = (self.count, rows, cols)
        self.count += rows * cols

    def var(self, name, r, c):
        start, _, cols = self.blocks[name]
        return start + r * cols + c

    def matrix(self, name, values):
        start, rows, cols = self.blocks[name]
        return [[values[start + r * cols + c] for c in range(cols)] for r in range(rows)]


def _chain_condition(eqs, unk, name, source, target, n_src, n_tgt):
    """Equations ``d_T X_n = X_{n-1} d_S`` for an unknown chain map ``X``."""
    for n in set(source.degrees) | {k + 1 for k in source.degrees}:
        rows_t = target.dim(n - 1)
        cols_s = source.dim(n)
        if not rows_t or not cols_s:
            continue
        dt = target.diff(n)
        ds = source.diff(n)
        for r in range(rows_t):
            for c in range(cols_s):
                eq = {}
                for k in range(target.dim(n)):
                    if dt[r][k] and (name, n) in n_src:
                        v = unk.var((name, n), k, c)
                        eq[v] = eq.get(v, 0) + dt[r][k]
                for k in range(source.dim(n - 1)):
                    if ds[k][c] and (name, n - 1) in n_src:
                        v = unk.var((name, n - 1), r, k)
                        eq[v] = eq.get(v, 0) - ds[k][c]
                eqs.append((eq, 0))


def solve_strict_lift(i, p, top, bottom):
    """A chain map ``l: B -> X`` with ``l i = top`` and ``p l = bottom``, or ``None``.

    ``i: A -> B``, ``p: X -> Y``, ``top: A -> X``, ``bottom: B -> Y``.
    """
    b, x = i.target, p.source
    unk = _Unknowns()
    present = set()
    for n in b.degrees:
        if x.dim(n):
            unk.add(("l", n), x.dim(n), b.dim(n))
            present.add(("l", n))
    eqs = []
    _chain_condition(eqs, unk, "l", b, x, present, present)
    a = i.source
    for n in a.degrees:
        im = i.at(n)
        tp = top.at(n)
        for r in range(x.dim(n)):
            for c in range(a.dim(n)):
                eq = {}
                for k in range(b.dim(n)):
                    if im[k][c] and ("l", n) in present:
                        v = unk.var(("l", n), r, k)
                        eq[v] = eq.get(v, 0) + im[k][c]
                eqs.append((eq, tp[r][c]))
    y = p.target
    for n in b.degrees:
        pm = p.at(n)
        bt = bottom.at(n)
        for r in range(y.dim(n)):
            for c in range(b.dim(n)):
                eq = {}
                for k in range(x.dim(n)):
                    if pm[r][k] and ("l", n) in present:
                        v = unk.var(("l", n), k, c)
                        eq[v] = eq.get(v, 0) + pm[r][k]
                eqs.append((eq, bt[r][c]))
    sol, _ = sparse_solve(eqs, unk.count)
    if sol is None:
        return None
    maps = {n: unk.matrix(("l", n), sol) for n in b.degrees if ("l", n) in present}
    return ChainMap(b, x, maps)


def chain_map_space(source, target):
    """A basis of the space of chain maps ``source -> target``."""
    unk = _Unknowns()
    present = set()
    for n in source.degrees:
        if target.dim(n):
            unk.add(("f", n), target.dim(n), source.dim(n))
            present.add(("f", n))
    eqs = []
    _chain_condition(eqs, unk, "f", source, target, present, present)
    rows = []
    for eq, _ in eqs:
        row = [0] * unk.count
        for v, c in eq.items():
            row[v] += c
        rows.append(row)
    basis = nullspace(rows, unk.count) if rows else identity(unk.count)
    return [ChainMap(source, target, {n: unk.matrix(("f", n), v) for n in source.degrees if ("f", n) in present}) for v in basis]


def random_chain_map(source, target, rng):
    basis = chain_map_space(source, target)
    maps = {}
    for f in basis:
        c = rng.randint(-2, 2)
        for n, m in f.maps.items():
            acc = maps.setdefault(n, zeros(target.dim(n), source.dim(n)))
            for r in range(len(m)):
                for k in range(len(m[r])):
                    acc[r][k] += c * m[r][k]
    return ChainMap(source, target, maps)


# --- the segment ----------------------------------------------------------------

class SegmentH:
    """The interval object ``H``: ``v0, v1`` in degree 0 and ``e`` in degree 1.

    ``d e = v1 - v0``; ``v0`` is the unit, ``v1`` is absorbing on ``v1`` and
    kills ``e``, and ``e e = 0``.  Multiplication is a chain map ``H (x) H -> H``.
    """

    V0, V1, E = "v0", "v1", "e"
    basis = ("v0", "v1", "e")
    degree = {"v0": 0, "v1": 0, "e": 1}
    boundary = {"v0": {}, "v1": {}, "e": {"v1": 1, "v0": -1}}
    _table = {
        ("v0", "v0"): {"v0": 1},
        ("v0", "v1"): {"v1": 1},
        ("v1", "v0"): {"v1": 1},
        ("v1", "v1"): {"v1": 1},
        ("v0", "e"): {"e": 1},
        ("e", "v0"): {"e": 1},
        ("v1", "e"): {},
        ("e", "v1"): {},
        ("e", "e"): {},
    }
    counit = {"v0": 1, "v1": 1, "e": 0}

    @classmethod
    def mul(cls, a, b):
        return dict(cls._table[(a, b)])

    @classmethod
    def complex(cls):
        # degree 0 basis: v0, v1; degree 1 basis: e
        return ChainComplex({0: 2, 1: 1}, {1: [[-1], [1]]})

    @classmethod
    def check(cls):
        """Unit, associativity and the Leibniz rule hold."""
        def d(x):
            return cls.boundary[x]

        for a, b in product(cls.basis, repeat=2):
            lhs = {}
            for t, c in cls.mul(a, b).items():
                for u, k in d(t).items():
                    lhs[u] = lhs.get(u, 0) + c * k
            rhs = {}
            for t, c in d(a).items():
                for u, k in cls.mul(t, b).items():
                    rhs[u] = rhs.get(u, 0) + c * k
            sign = -1 if cls.degree[a] % 2 else 1
            for t, c in d(b).items():
                for u, k in cls.mul(a, t).items():
                    rhs[u] = rhs.get(u, 0) + sign * c * k
            if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                return False
        for a, b, c in product(cls.basis, repeat=3):
            left = {}
            for t, x in cls.mul(a, b).items():
                for u, y in cls.mul(t, c).items():
                    left[u] = left.get(u, 0) + x * y
            right = {}
            for t, x in cls.mul(b, c).items():
                for u, y in cls.mul(a, t).items():
                    right[u] = right.get(u, 0) + x * y
            if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
                return False
        return all(cls.mul("v0", a) == {a: 1} == cls.mul(a, "v0") for a in cls.basis)


# --- the base ----------------------------------------------------------------------

class ChainBase(Base):
    name = "chainQ"

    def unit(self):
        return unit_complex()

    def initial(self):
        return zero_complex()

    def tensor(self, a, b):
        return tensor(a, b)[0]

    def coproduct(self, a, b):
        return direct_sum(a, b)

    def pushout(self, f, g):
        return pushout(f, g)

    def coequalizer(self, f, g):
        return coequalizer(f, g)

    def generating_cofibrations(self, bound):
        return generating_cofibrations(bound)

    def solve_strict_lift(self, i, p, top, bottom):
        return solve_strict_lift(i, p, top, bottom)

    def is_cofibration(self, f):
        return f.is_injective()

    def is_weak_equivalence(self, f):
        return f.is_quasi_iso()

    def is_fibration(self, f):
        return f.is_surjective()

    def random_map(self, source, target, seed=0):
        return random_chain_map(source, target, random.Random(seed))


CHAIN_BASE = ChainBase()


# --- bridges to presented spaces -----------------------------------------------------------

def complex_of_space(space, p=None):
    """The weight-``p`` part of a presented space as a :class:`ChainComplex`.

    Returns ``(complex, positions)`` where ``positions[n]`` lists the space
    basis indices of degree ``n`` in complex order.
    """
    positions = space.basis_by_degree(p)
    local = {n: {j: k for k, j in enumerate(v)} for n, v in positions.items()}
    dims = {n: len(v) for n, v in positions.items()}
    d = {}
    for n, idx in positions.items():
        if n - 1 not in positions:
            continue
        mat = zeros(dims[n - 1], dims[n])
        for c, j in enumerate(idx):
            for i, x in space.d[j].items():
                mat[local[n - 1][i]][c] = x
        d[n] = mat
    return ChainComplex(dims, d), positions


def map_of_linear(f, p=None):
    """A :class:`~hocat.spaces.Linear` restricted to weight ``p`` as a :class:`ChainMap`."""
    src, spos = complex_of_space(f.source, p)
    tgt, tpos = complex_of_space(f.target, p)
    maps = {}
    for n, idx in spos.items():
        mat, _, _ = f.matrix(n, p)
        maps[n] = mat
    return ChainMap(src, tgt, maps)


def space_of_complex(c, weight=0, tag=0, stage=None):
    """A presented space whose basis terms are ``(tag, degree, index)``."""
    from .spaces import CHAIN, free_space

    items = []
    for n in c.degrees:
        dn = c.diff(n)
        for j in range(c.dim(n)):
            dv = {(tag, n - 1, i): dn[i][j] for i in range(c.dim(n - 1)) if dn[i][j]}
            items.append(((tag, n, j), weight, n, dv))
    return free_space(CHAIN, weight if stage is None else stage, items, "complex")
