"""Lifting solvers over the chain base.

Every lift is one exact sparse linear system in the entries of the unknown
maps.  Homotopies are degree ``+1`` maps ``h`` with ``f1 - f0 = d h + h d``;
:meth:`Homotopy.cylinder` packages them as the chain map out of the cylinder
``B (x) H`` whose ``e``-component is ``h`` up to the Koszul sign.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chain import (
    ChainComplex,
    ChainMap,
    SegmentH,
    _Unknowns,
    direct_sum,
    disk,
    identity_map,
    random_chain_map,
    solve_strict_lift,
    sphere,
    tensor,
    zero_complex,
    zero_map,
)
from .linalg import identity, matmul, q, rank, rational_str, sparse_solve, zeros


class LiftingError(ValueError):
    """A precondition fails or the lifting system is inconsistent."""


# --- matrix helpers ---------------------------------------------------------------------------

def _sub(a, b):
    return [[q(x - y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _add(a, b):
    return [[q(x + y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _max_abs(mat):
    return max((abs(Fraction(x)) for row in mat for x in row), default=Fraction(0))


def map_difference(f, g):
    """Largest absolute entry of ``f - g``; zero exactly when the maps agree."""
    degs = set(f.source.degrees) | set(g.source.degrees)
    return max((_max_abs(_sub(f.at(n), g.at(n))) for n in degs), default=Fraction(0))


def chain_defect(f):
    """Largest absolute entry of ``d f - f d``."""
    worst = Fraction(0)
    for n in set(f.source.degrees) | {k + 1 for k in f.source.degrees}:
        lhs = matmul(f.target.diff(n), f.at(n), f.target.dim(n), f.source.dim(n))
        rhs = matmul(f.at(n - 1), f.source.diff(n), f.source.dim(n - 1), f.source.dim(n))
        worst = max(worst, _max_abs(_sub(lhs, rhs)))
    return worst


def map_sum(f, g, coef=1):
    degs = set(f.source.degrees)
    return ChainMap(f.source, f.target, {n: [[q(x + coef * y) for x, y in zip(ra, rb)] for ra, rb in zip(f.at(n), g.at(n))] for n in degs})


@dataclass
class Homotopy:
    """Degree ``+1`` maps ``maps[n]: source_n -> target_(n+1)``."""

    source: ChainComplex
    target: ChainComplex
    maps: dict = field(default_factory=dict)

    def at(self, n):
        return self.maps.get(n) or zeros(self.target.dim(n + 1), self.source.dim(n))

    def boundary(self):
        """``d h + h d`` as a chain map."""
        out = {}
        for n in self.source.degrees:
            first = matmul(self.target.diff(n + 1), self.at(n), self.target.dim(n + 1), self.source.dim(n))
            second = matmul(self.at(n - 1), self.source.diff(n), self.source.dim(n - 1), self.source.dim(n))
            out[n] = _add(first, second)
        return ChainMap(self.source, self.target, out)

    def is_zero(self):
        return all(not any(x for row in m for x in row) for m in self.maps.values())

    def precompose(self, f):
        """``h o f`` for a chain map ``f`` into the source."""
        maps = {n: matmul(self.at(n), f.at(n), self.source.dim(n), f.source.dim(n)) for n in f.source.degrees}
        return Homotopy(f.source, self.target, maps)

    def cylinder(self, f0, f1):
        """The map ``source (x) H -> target`` restricting to ``f0`` on ``v0`` and ``f1`` on ``v1``."""
        cyl, pairs = tensor(self.source, SegmentH.complex())
        maps = {}
        for n, basis in pairs.items():
            mat = zeros(self.target.dim(n), len(basis))
            for col, ((p, i), (r, j)) in enumerate(basis):
                if r == 0:
                    src = (f0 if j == 0 else f1).at(p)
                    column = [src[k][i] for k in range(self.target.dim(n))]
                else:
                    sign = -1 if p % 2 else 1
                    h = self.at(p)
                    column = [sign * h[k][i] for k in range(self.target.dim(n))]
                for k, x in enumerate(column):
                    mat[k][col] = x
            maps[n] = mat
        return ChainMap(cyl, self.target, maps)

    def to_json(self):
        return {str(n): [[rational_str(x) for x in row] for row in m] for n, m in sorted(self.maps.items())}


def zero_homotopy(source, target):
    return Homotopy(source, target, {})


# --- linear systems in unknown maps -----------------------------------------------------------

class _System:
    """Equations ``sum coef * L X R = rhs`` in unknown matrices ``X``."""

    def __init__(self):
        self.unk = _Unknowns()
        self.eqs = []

    def unknown(self, key, rows, cols):
        if rows and cols:
            self.unk.add(key, rows, cols)

    def equation(self, terms, rows, cols, rhs=None):
        if not rows or not cols:
            return
        prepared = []
        for coef, left, key, right in terms:
            if key not in self.unk.blocks:
                continue
            _, krows, kcols = self.unk.blocks[key]
            lrows = [[(i, left[r][i]) for i in range(krows) if left[r][i]] for r in range(rows)] if left is not None else None
            rcols = [[(j, right[j][c]) for j in range(kcols) if right[j][c]] for c in range(cols)] if right is not None else None
            prepared.append((coef, key, lrows, rcols))
        for r in range(rows):
            for c in range(cols):
                eq = {}
                for coef, key, lrows, rcols in prepared:
                    lterms = lrows[r] if lrows is not None else [(r, 1)]
                    rterms = rcols[c] if rcols is not None else [(c, 1)]
                    for i, a in lterms:
                        for j, b in rterms:
                            v = self.unk.var(key, i, j)
                            eq[v] = eq.get(v, 0) + coef * a * b
                self.eqs.append((eq, rhs[r][c] if rhs is not None else 0))

    def solve(self):
        sol, _ = sparse_solve(self.eqs, self.unk.count)
        return sol

    def matrix(self, sol, key, rows, cols):
        if key in self.unk.blocks:
            return self.unk.matrix(key, sol)
        return zeros(rows, cols)


def _require(flag, message):
    if not flag:
        raise LiftingError(message)


def _commutes(f, g):
    return map_difference(f, g) == 0


# --- weak lifting -----------------------------------------------------------------------------

@dataclass
class WeakLift:
    phi: ChainMap
    homotopy: Homotopy
    residuals: dict

    @property
    def exact(self):
        return all(v == 0 for v in self.residuals.values())

    def as_dict(self):
        return {
            "phi": self.phi.to_json(),
            "homotopy": self.homotopy.to_json(),
            "residuals": {k: rational_str(v) for k, v in self.residuals.items()},
        }


def weak_lift_residuals(gamma, w, top, bottom, phi, h):
    cyl = h.cylinder(bottom, w.compose(phi))
    return {
        "phi is a chain map": chain_defect(phi),
        "phi gamma = top": map_difference(phi.compose(gamma), top),
        "w phi - bottom = dh + hd": map_difference(map_sum(w.compose(phi), bottom, -1), h.boundary()),
        "h gamma = 0": max((_max_abs(m) for m in h.precompose(gamma).maps.values()), default=Fraction(0)),
        "cylinder map is a chain map": chain_defect(cyl),
    }


def weak_lift(gamma, w, top, bottom):
    """Fill ``gamma: A -> B``, ``w: X -> Y`` with ``phi: B -> X`` and a homotopy.

    ``phi gamma = top`` holds exactly and ``h`` is a homotopy from ``bottom`` to
    ``w phi`` vanishing on ``A``.  A strict lift is returned with ``h = 0``
    whenever one exists.
    """
    A, B = gamma.source, gamma.target
    X, Y = w.source, w.target
    _require(gamma.is_chain_map() and gamma.is_injective(), "gamma is not a cofibration")
    _require(w.is_chain_map() and w.is_quasi_iso(), "w is not a weak equivalence")
    _require(top.is_chain_map() and bottom.is_chain_map(), "square sides are not chain maps")
    _require(_commutes(w.compose(top), bottom.compose(gamma)), "the square does not commute")
    strict = solve_strict_lift(gamma, w, top, bottom)
    if strict is not None:
        h = zero_homotopy(B, Y)
        return WeakLift(strict, h, weak_lift_residuals(gamma, w, top, bottom, strict, h))
    system = _System()
    for n in B.degrees:
        system.unknown(("phi", n), X.dim(n), B.dim(n))
        system.unknown(("h", n), Y.dim(n + 1), B.dim(n))
    for n in B.degrees:
        system.equation([(1, X.diff(n), ("phi", n), None), (-1, None, ("phi", n - 1), B.diff(n))], X.dim(n - 1), B.dim(n))
        system.equation(
            [(1, w.at(n), ("phi", n), None), (-1, Y.diff(n + 1), ("h", n), None), (-1, None, ("h", n - 1), B.diff(n))],
            Y.dim(n),
            B.dim(n),
            bottom.at(n),
        )
    for n in A.degrees:
        system.equation([(1, None, ("phi", n), gamma.at(n))], X.dim(n), A.dim(n), top.at(n))
        system.equation([(1, None, ("h", n), gamma.at(n))], Y.dim(n + 1), A.dim(n))
    sol = system.solve()
    _require(sol is not None, "lifting system is inconsistent")
    phi = ChainMap(B, X, {n: system.matrix(sol, ("phi", n), X.dim(n), B.dim(n)) for n in B.degrees})
    h = Homotopy(B, Y, {n: system.matrix(sol, ("h", n), Y.dim(n + 1), B.dim(n)) for n in B.degrees})
    return WeakLift(phi, h, weak_lift_residuals(gamma, w, top, bottom, phi, h))


# --- parallel lifting -------------------------------------------------------------------------

@dataclass
class ParallelLift:
    Phi: ChainMap
    Psi: ChainMap
    steps: dict
    residuals: dict

    @property
    def exact(self):
        return all(v == 0 for v in self.residuals.values())

    def as_dict(self):
        return {
            "Phi": self.Phi.to_json(),
            "Psi": self.Psi.to_json(),
            "residuals": {k: rational_str(v) for k, v in self.residuals.items()},
        }


def _pushout_corner_injective(gamma, gamma_p, delta, a):
    """``B u_A A' -> B'`` is injective: ``(delta, gamma')`` has kernel exactly ``A``."""
    A, B, Ap = gamma.source, gamma.target, gamma_p.source
    for n in set(B.degrees) | set(Ap.degrees):
        joined = [list(r1) + list(r2) for r1, r2 in zip(delta.at(n), gamma_p.at(n))]
        width = B.dim(n) + Ap.dim(n)
        r = rank(joined, width) if joined and width else 0
        if r != width - A.dim(n):
            return False
    return True


def parallel_lift_residuals(gamma, gamma_p, delta, w, j, l, Phi, Psi):
    return {
        "Phi is a chain map": chain_defect(Phi),
        "Psi is a chain map": chain_defect(Psi),
        "Phi gamma = j": map_difference(Phi.compose(gamma), j),
        "Psi gamma' = l": map_difference(Psi.compose(gamma_p), l),
        "Psi delta = w Phi": map_difference(Psi.compose(delta), w.compose(Phi)),
    }


def _extend_homotopy(h, delta, gamma_p):
    """``K: B' -> Y`` of degree ``+1`` with ``K delta = h`` and ``K gamma' = 0``."""
    Bp, Y = delta.target, h.target
    B, Ap = delta.source, gamma_p.source
    system = _System()
    for n in Bp.degrees:
        system.unknown(("K", n), Y.dim(n + 1), Bp.dim(n))
    for n in B.degrees:
        system.equation([(1, None, ("K", n), delta.at(n))], Y.dim(n + 1), B.dim(n), h.at(n))
    for n in Ap.degrees:
        system.equation([(1, None, ("K", n), gamma_p.at(n))], Y.dim(n + 1), Ap.dim(n))
    sol = system.solve()
    _require(sol is not None, "homotopy does not extend along B u_A A' -> B'")
    return Homotopy(Bp, Y, {n: system.matrix(sol, ("K", n), Y.dim(n + 1), Bp.dim(n)) for n in Bp.degrees})


def parallel_lift(a, gamma, gamma_p, delta, w, j, l):
    """Lifts ``Phi: B -> X`` and ``Psi: B' -> Y`` for the parallel lifting diagram.

    ``a: A -> A'``, ``gamma: A -> B``, ``gamma_p: A' -> B'``, ``delta: B -> B'``,
    ``w: X -> Y``, ``j: A -> X`` and ``l: A' -> Y`` with ``delta gamma = gamma_p a``
    and ``w j = l a``.  The result satisfies ``Phi gamma = j``,
    ``Psi gamma_p = l`` and ``Psi delta = w Phi``.
    """
    _require(gamma.is_chain_map() and gamma.is_injective(), "gamma is not a cofibration")
    _require(
        gamma_p.is_chain_map() and gamma_p.is_injective() and gamma_p.is_quasi_iso(),
        "gamma' is not a trivial cofibration",
    )
    _require(w.is_chain_map() and w.is_quasi_iso(), "w is not a weak equivalence")
    for f in (a, delta, j, l):
        _require(f.is_chain_map(), "diagram maps must be chain maps")
    _require(_commutes(delta.compose(gamma), gamma_p.compose(a)), "delta gamma != gamma' a")
    _require(_commutes(w.compose(j), l.compose(a)), "w j != l a")
    _require(_pushout_corner_injective(gamma, gamma_p, delta, a), "B u_A A' -> B' is not a cofibration")
    Y = w.target
    # lift l along the trivial cofibration gamma'
    psi_tilde = solve_strict_lift(gamma_p, zero_map(Y, zero_complex()), l, zero_map(gamma_p.target, zero_complex()))
    _require(psi_tilde is not None, "no extension of l along gamma'")
    lifted = weak_lift(gamma, w, j, psi_tilde.compose(delta))
    # correct psi_tilde by a homotopy extended along B u_A A' -> B'
    K = _extend_homotopy(lifted.homotopy, delta, gamma_p)
    Psi = map_sum(psi_tilde, K.boundary())
    Phi = lifted.phi
    steps = {"psi_tilde": psi_tilde, "weak_lift": lifted, "correction": K}
    return ParallelLift(Phi, Psi, steps, parallel_lift_residuals(gamma, gamma_p, delta, w, j, l, Phi, Psi))


# --- seeded instances -------------------------------------------------------------------------

def _elementary_change(dim, rng, moves=6):
    """A random invertible integer matrix with its inverse."""
    P, Pinv = identity(dim), identity(dim)
    for _ in range(moves if dim > 1 else 0):
        i, k = rng.sample(range(dim), 2)
        c = rng.choice([-2, -1, 1, 2])
        # row_i += c row_k on P; col_k -= c col_i on the inverse
        P[i] = [x + c * y for x, y in zip(P[i], P[k])]
        for r in range(dim):
            Pinv[r][k] -= c * Pinv[r][i]
    return P, Pinv


class _BaseChange:
    """Random chain isomorphism ``C -> C'`` transporting maps into and out of ``C``."""

    def __init__(self, c, rng):
        self.old = c
        self.P, self.Pinv = {}, {}
        for n in c.degrees:
            self.P[n], self.Pinv[n] = _elementary_change(c.dim(n), rng)
        d = {}
        for n in c.degrees:
            if c.dim(n - 1):
                d[n] = matmul(matmul(self.P[n - 1], c.diff(n), c.dim(n - 1), c.dim(n)), self.Pinv[n], c.dim(n), c.dim(n))
        self.new = ChainComplex(dict(c.dims), d)

    def into(self, f):
        maps = {n: matmul(self.P[n], f.at(n), self.old.dim(n), f.source.dim(n)) for n in f.source.degrees if self.old.dim(n)}
        return ChainMap(f.source, self.new, maps)

    def out_of(self, f):
        maps = {n: matmul(f.at(n), self.Pinv[n], self.old.dim(n), self.old.dim(n)) for n in self.old.degrees}
        return ChainMap(self.new, f.target, maps)


def _random_complex(rng, contractible=False, low=-1, high=2, pieces=3):
    c = zero_complex()
    for _ in range(rng.randint(1, pieces)):
        n = rng.randint(low, high)
        piece = disk(n + 1) if contractible or rng.random() < 0.5 else sphere(n)
        c = direct_sum(c, piece)[0]
    return c


def _blocks(source_parts, target_parts, blocks, source, target):
    """Block map; ``blocks[(i, k)]`` sends source part ``k`` to target part ``i``."""
    maps = {}
    for n in source.degrees:
        mat = zeros(target.dim(n), source.dim(n))
        roff = 0
        for i, tp in enumerate(target_parts):
            coff = 0
            for k, sp in enumerate(source_parts):
                f = blocks.get((i, k))
                if f is not None:
                    m = f.at(n)
                    for r in range(tp.dim(n)):
                        for c in range(sp.dim(n)):
                            mat[roff + r][coff + c] = m[r][c]
                coff += sp.dim(n)
            roff += tp.dim(n)
        maps[n] = mat
    return ChainMap(source, target, maps)


def _sum(*parts):
    c = zero_complex()
    for p in parts:
        c = direct_sum(c, p)[0]
    return c


def cone(c):
    """The cone of the identity: ``C_n (+) C_(n-1)`` with ``d(x, y) = (dx + y, -dy)``."""
    degs = set(c.degrees) | {n + 1 for n in c.degrees}
    dims = {n: c.dim(n) + c.dim(n - 1) for n in degs}
    d = {}
    for n in degs:
        mat = zeros(dims.get(n - 1, 0), dims[n])
        dn, dm = c.diff(n), c.diff(n - 1)
        for r in range(c.dim(n - 1)):
            for k in range(c.dim(n)):
                mat[r][k] = dn[r][k]
            mat[r][c.dim(n) + r] = 1
        for r in range(c.dim(n - 2)):
            for k in range(c.dim(n - 1)):
                mat[c.dim(n - 1) + r][c.dim(n) + k] = -dm[r][k]
        d[n] = mat
    return ChainComplex(dims, d)


def _cone_inclusion(c, cn):
    return ChainMap(c, cn, {n: [[1 if r == k else 0 for k in range(c.dim(n))] for r in range(cn.dim(n))] for n in c.degrees})


def _weak_equivalence(rng):
    """``w = id (+) 0: Y (+) E -> Y (+) E'`` with ``E``, ``E'`` contractible."""
    Y = _random_complex(rng)
    E, E2 = _random_complex(rng, True), _random_complex(rng, True)
    X, Yt = _sum(Y, E), _sum(Y, E2)
    w = _blocks([Y, E], [Y, E2], {(0, 0): identity_map(Y)}, X, Yt)
    return X, Yt, w


@dataclass
class WeakLiftInstance:
    gamma: ChainMap
    w: ChainMap
    top: ChainMap
    bottom: ChainMap
    seed: int


def random_weak_lift_instance(seed):
    """A seeded square with ``gamma`` a cofibration and ``w`` a weak equivalence."""
    rng = random.Random(seed)
    A, C = _random_complex(rng), _random_complex(rng)
    B = _sum(A, C)
    gamma = _blocks([A], [A, C], {(0, 0): identity_map(A)}, A, B)
    X, Y, w = _weak_equivalence(rng)
    top = random_chain_map(A, X, rng)
    rest = random_chain_map(C, Y, rng)
    bottom = _blocks([A, C], [Y], {(0, 0): w.compose(top), (0, 1): rest}, B, Y)
    bB, bX, bY = _BaseChange(B, rng), _BaseChange(X, rng), _BaseChange(Y, rng)
    gamma = bB.into(gamma)
    top = bX.into(top)
    w = bY.into(bX.out_of(w))
    bottom = bY.into(bB.out_of(bottom))
    return WeakLiftInstance(gamma, w, top, bottom, seed)


@dataclass
class ParallelLiftInstance:
    a: ChainMap
    gamma: ChainMap
    gamma_p: ChainMap
    delta: ChainMap
    w: ChainMap
    j: ChainMap
    l: ChainMap
    seed: int

    def solve(self):
        return parallel_lift(self.a, self.gamma, self.gamma_p, self.delta, self.w, self.j, self.l)


def random_parallel_lift_instance(seed):
    """A seeded diagram meeting every precondition of :func:`parallel_lift`.

    ``A' = A (+) E`` with ``E`` contractible, ``B = A (+) C`` and
    ``B' = A (+) E (+) cone(C)``, all transported by random base changes.
    """
    rng = random.Random(seed)
    A, C = _random_complex(rng), _random_complex(rng)
    E = _random_complex(rng, True)
    Ap, B = _sum(A, E), _sum(A, C)
    cC = cone(C)
    Bp = _sum(A, E, cC)
    a = _blocks([A], [A, E], {(0, 0): identity_map(A)}, A, Ap)
    gamma = _blocks([A], [A, C], {(0, 0): identity_map(A)}, A, B)
    gamma_p = _blocks([A, E], [A, E, cC], {(0, 0): identity_map(A), (1, 1): identity_map(E)}, Ap, Bp)
    delta = _blocks([A, C], [A, E, cC], {(0, 0): identity_map(A), (2, 1): _cone_inclusion(C, cC)}, B, Bp)
    X, Y, w = _weak_equivalence(rng)
    j = random_chain_map(A, X, rng)
    l = _blocks([A, E], [Y], {(0, 0): w.compose(j), (0, 1): random_chain_map(E, Y, rng)}, Ap, Y)
    bAp, bB, bBp, bX, bY = (_BaseChange(c, rng) for c in (Ap, B, Bp, X, Y))
    a = bAp.into(a)
    gamma = bB.into(gamma)
    gamma_p = bBp.into(bAp.out_of(gamma_p))
    delta = bBp.into(bB.out_of(delta))
    w = bY.into(bX.out_of(w))
    j = bX.into(j)
    l = bY.into(bAp.out_of(l))
    return ParallelLiftInstance(a, gamma, gamma_p, delta, w, j, l, seed)
