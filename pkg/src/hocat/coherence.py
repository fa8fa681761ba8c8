"""Extending a homotopy equivalence to a map out of the cubical resolution.

Given an arrow ``alpha0: x -> y`` of a chain-enriched category ``A`` whose class
is invertible in ``pi0(A)``, the cubes of ``W(H, I)`` are sent to ``A`` one pair
at a time.  Step ``j`` produces the cube ``alpha_j`` of the string ``0 1 ... ``
with ``j + 1`` arrows together with the cube ``beta_(j-1)`` of the string
``1 0 ...`` with ``j`` arrows.  The face of ``alpha_j`` where the first inner
vertex waits time ``1`` is ``beta_(j-1)`` precomposed with ``alpha0``;
precomposition is a weak equivalence and the pair comes out of
:func:`~hocat.lifting.parallel_lift`.
"""

from dataclasses import dataclass, field
from itertools import product

from .chain import ChainComplex, ChainMap, complex_of_space, direct_sum, disk, sphere
from .enriched import VCategory, unit_interval
from .homotopy import HomologyAt, YES, homotopy_equivalent, inverse_class, pi0
from .lifting import parallel_lift
from .linalg import rational_str, zeros
from .spaces import CHAIN, present, vadd
from .wconstruct import E, V0, V1, cube_basis, cube_boundary, face_value, letter_name, parse_letter, string_of


class NotAnEquivalence(ValueError):
    """The arrow is not invertible in the homotopy category."""


# --- the dg category of finite complexes ------------------------------------------------------

def _hom_terms(src, tgt):
    for p in src.degrees:
        for n in sorted({m - p for m in tgt.degrees}):
            for r in range(tgt.dim(p + n)):
                for c in range(src.dim(p)):
                    yield (1, n, p, r, c)


def dg_category(complexes, stage=0, name="dg"):
    """Finite complexes with their internal hom complexes.

    A basis element ``(1, n, p, r, c)`` of ``Hom(C_i, C_j)`` sends basis vector
    ``c`` of ``C_i`` in degree ``p`` to basis vector ``r`` of ``C_j`` in degree
    ``p + n``.  The identity is the extra term ``(0,)``.  The differential is
    ``d f = d f - (-1)^n f d``.
    """
    objects = tuple(range(len(complexes)))
    homs, units = {}, {}
    for i, j in product(objects, repeat=2):
        src, tgt = complexes[i], complexes[j]
        terms = list(_hom_terms(src, tgt))
        spanning = [(t, 0, t[1]) for t in terms]
        relations = []
        if i == j:
            spanning.insert(0, ((0,), 0, 0))
            ident = {(1, 0, p, r, r): 1 for p in src.degrees for r in range(src.dim(p))}
            relations.append(({(0,): 1}, ident))

        def boundary(term, src=src, tgt=tgt):
            if term == (0,):
                return {}
            _, n, p, r, c = term
            out = {}
            dt = tgt.diff(p + n)
            for k in range(tgt.dim(p + n - 1)):
                if dt[k][r]:
                    vadd(out, {(1, n - 1, p, k, c): dt[k][r]})
            ds = src.diff(p + 1)
            sign = -1 if n % 2 else 1
            for b in range(src.dim(p + 1)):
                if ds[c][b]:
                    vadd(out, {(1, n - 1, p + 1, r, b): -sign * ds[c][b]})
            return out

        homs[(i, j)] = present(CHAIN, stage, spanning, relations, boundary, f"Hom({i},{j})")
        if i == j:
            units[i] = {homs[(i, j)].index[(0,)]: 1}

    def compose(gslot, fslot, g, f):
        gterm = homs[gslot].terms[g]
        fterm = homs[fslot].terms[f]
        target = homs[(fslot[0], gslot[1])]
        if gterm == (0,):
            return target.reduce({fterm: 1})
        if fterm == (0,):
            return target.reduce({gterm: 1})
        _, ng, pg, rg, cg = gterm
        _, nf, pf, rf, cf = fterm
        if pg != pf + nf or cg != rf:
            return {}
        return target.reduce({(1, ng + nf, pf, rg, cf): 1})

    return VCategory(CHAIN, stage, objects, homs, units, compose, name)


def chain_map_vector(cat, slot, matrices):
    """A degree-zero chain map given per degree as a vector of ``cat.homs[slot]``."""
    space = cat.homs[slot]
    raw = {}
    for p, mat in matrices.items():
        for r, row in enumerate(mat):
            for c, x in enumerate(row):
                if x:
                    raw[(1, 0, p, r, c)] = x
    return space.reduce(raw)


# --- cubes as complexes -----------------------------------------------------------------------

def _cube(n, keep=None):
    """The subcomplex of ``H^(x)n`` spanned by the basis tensors satisfying ``keep``."""
    positions = {deg: [ts for ts in tss if keep is None or keep(ts)] for deg, tss in cube_basis(n).items()}
    positions = {deg: v for deg, v in positions.items() if v}
    index = {deg: {ts: k for k, ts in enumerate(v)} for deg, v in positions.items()}
    d = {}
    for deg, tss in positions.items():
        if deg - 1 not in positions:
            continue
        mat = zeros(len(positions[deg - 1]), len(tss))
        for c, ts in enumerate(tss):
            for face, x in cube_boundary(ts).items():
                mat[index[deg - 1][face]][c] = x
        d[deg] = mat
    return ChainComplex({deg: len(v) for deg, v in positions.items()}, d), positions


def _tensor_map(src, spos, tgt, tpos, send):
    """The map of cube complexes sending the tensor ``ts`` to ``send(ts)``."""
    tindex = {deg: {ts: k for k, ts in enumerate(v)} for deg, v in tpos.items()}
    maps = {}
    for deg, tss in spos.items():
        mat = zeros(tgt.dim(deg), len(tss))
        for c, ts in enumerate(tss):
            mat[tindex[deg][send(ts)]][c] = 1
        maps[deg] = mat
    return ChainMap(src, tgt, maps)


class _HomComplex:
    """A hom space of ``A`` as a :class:`ChainComplex` with coordinate conversions."""

    def __init__(self, space):
        self.space = space
        self.complex, self.positions = complex_of_space(space)
        self.local = {i: (n, k) for n, idx in self.positions.items() for k, i in enumerate(idx)}

    def column(self, vec, degree):
        col = [0] * self.complex.dim(degree)
        for i, x in vec.items():
            n, k = self.local[i]
            if n != degree:
                raise ValueError(f"value of degree {n} on a cube cell of degree {degree}")
            col[k] = x
        return col

    def vector(self, matrix, degree, c):
        return {self.positions[degree][r]: row[c] for r, row in enumerate(matrix) if row[c]}

    def map_from(self, src, spos, values):
        maps = {}
        for deg, tss in spos.items():
            mat = zeros(self.complex.dim(deg), len(tss))
            for c, ts in enumerate(tss):
                for r, x in enumerate(self.column(values(ts), deg)):
                    mat[r][c] = x
            maps[deg] = mat
        return ChainMap(src, self.complex, maps)


# --- the extension ----------------------------------------------------------------------------

@dataclass
class CoherentExtension:
    k: int
    objects: tuple
    cubes: dict
    lifts: list
    residuals: dict
    detail: dict = field(default_factory=dict)

    @property
    def exact(self):
        return all(v == 0 for v in self.residuals.values())

    def values(self, start, length):
        return self.cubes[(start, length)]

    def as_dict(self):
        names = {}
        for (start, length), table in sorted(self.cubes.items()):
            label = ("alpha" if start == 0 else "beta") + str(length - 1)
            names[label] = {
                "letter": letter_name(start, length),
                "cells": len(table),
                "nonzero": sum(1 for v in table.values() if v),
            }
        return {
            "k": self.k,
            "objects": list(self.objects),
            "cubes": names,
            "residuals": {k: rational_str(v) for k, v in self.residuals.items()},
            "detail": self.detail,
        }


class _Extender:
    def __init__(self, cat, x, y, alpha):
        self.cat = cat
        self.obj = {0: x, 1: y}
        self.alpha = alpha
        self.cubes = {(0, 1): {(): dict(alpha)}}
        self._complexes = {}

    def hom(self, slot):
        if slot not in self._complexes:
            self._complexes[slot] = _HomComplex(self.cat.homs[slot])
        return self._complexes[slot]

    def slot(self, start, length):
        string = string_of(start, length)
        return (self.obj[string[0]], self.obj[string[-1]])

    def value(self, start, length, times):
        known = self.cubes.get((start, length))
        if known is not None:
            return known[times]
        if all(t == E for t in times):
            raise KeyError(f"interior cell of {letter_name(start, length)} is not constructed")
        return self.evaluate(face_value(start, length, times), start)

    def evaluate(self, combination, start):
        out = {}
        for word, coef in combination.items():
            if not word:
                out = vadd(out, self.cat.unit(self.obj[start]), coef)
                continue
            slot, vec = None, None
            for name in reversed(word):
                s, m, ts = parse_letter(name)
                lslot, lvec = self.slot(s, m), self.value(s, m, ts)
                if vec is None:
                    slot, vec = lslot, lvec
                else:
                    vec = self.cat.compose(lslot, lvec, slot, vec)
                    slot = (slot[0], lslot[1])
            out = vadd(out, vec, coef)
        return out

    def step(self, j):
        """Construct ``alpha_j`` and ``beta_(j-1)`` by parallel lifting."""
        cat = self.cat
        cube, cpos = _cube(j)
        rest, lpos = _cube(j, lambda ts: ts[0] == V0 or any(t != E for t in ts[1:]))
        face, fpos = _cube(j - 1)
        fbound, bpos = _cube(j - 1, lambda ts: any(t != E for t in ts))
        gamma = _tensor_map(fbound, bpos, face, fpos, lambda ts: ts)
        gamma_p = _tensor_map(rest, lpos, cube, cpos, lambda ts: ts)
        delta = _tensor_map(face, fpos, cube, cpos, lambda ts: (V1,) + ts)
        a = _tensor_map(fbound, bpos, rest, lpos, lambda ts: (V1,) + ts)
        aslot, bslot = self.slot(0, j + 1), self.slot(1, j)
        target_x, target_y = self.hom(aslot), self.hom(bslot)
        xy = (self.obj[0], self.obj[1])
        # precomposition with alpha0
        pre = {}
        for deg, idx in target_y.positions.items():
            mat = zeros(target_x.complex.dim(deg), len(idx))
            for c, m in enumerate(idx):
                for r, x in enumerate(target_x.column(cat.compose(bslot, {m: 1}, xy, self.alpha), deg)):
                    mat[r][c] = x
            pre[deg] = mat
        w = ChainMap(target_y.complex, target_x.complex, pre)
        jmap = target_y.map_from(fbound, bpos, lambda ts: self.value(1, j, ts))
        lmap = target_x.map_from(rest, lpos, lambda ts: self.value(0, j + 1, ts))
        lift = parallel_lift(a, gamma, gamma_p, delta, w, jmap, lmap)
        self.cubes[(1, j)] = {
            ts: target_y.vector(lift.Phi.at(deg), deg, c) for deg, tss in fpos.items() for c, ts in enumerate(tss)
        }
        self.cubes[(0, j + 1)] = {
            ts: target_x.vector(lift.Psi.at(deg), deg, c) for deg, tss in cpos.items() for c, ts in enumerate(tss)
        }
        return lift

    def residuals(self):
        """Largest defect of the chain-map and face equations over all constructed cubes."""
        chain, faces = 0, 0
        for (start, length), table in self.cubes.items():
            space = self.cat.homs[self.slot(start, length)]
            for ts, vec in table.items():
                expected = {}
                for f, c in cube_boundary(ts).items():
                    vadd(expected, table[f], c)
                diff = vadd(dict(space.apply_d(vec)), expected, -1)
                chain = max([chain] + [abs(x) for x in diff.values()])
                if any(t != E for t in ts):
                    diff = vadd(dict(vec), self.evaluate(face_value(start, length, ts), start), -1)
                    faces = max([faces] + [abs(x) for x in diff.values()])
        return {"cube values are chain maps": chain, "faces match the attaching maps": faces}


def coherent_extension(cat, x, y, alpha, k=2, budget=10**4):
    """Send ``W_k(H, I)`` to ``cat`` extending ``alpha: x -> y``.

    Refuses with :class:`NotAnEquivalence` unless ``alpha`` is invertible in
    ``pi0(cat)``.  All cubes on strings with at most ``k + 1`` arrows are
    constructed; the last step also yields the cube ``alpha_(k+1)``.
    """
    if cat.base != CHAIN:
        raise ValueError("coherent extension needs the chain base")
    space = cat.homs[(x, y)]
    if space.apply_d(alpha) or any(space.degrees[i] != 0 for i in alpha):
        raise NotAnEquivalence("alpha is not a degree 0 cycle")
    P = pi0(cat)
    verdict = homotopy_equivalent(cat, x, y, P=P, budget=budget)
    coords = list(HomologyAt(space, cat.stage, 0).coords(alpha))
    inverse = inverse_class(P, coords, x, y)
    detail = {"homotopy_equivalent": verdict.verdict, "class": [rational_str(c) for c in coords]}
    if verdict.verdict != YES or inverse is None or inverse is False:
        raise NotAnEquivalence(f"alpha is not invertible in pi0: {detail}")
    detail["inverse_class"] = [rational_str(c) for c in inverse]
    ext = _Extender(cat, x, y, alpha)
    lifts = [ext.step(j) for j in range(1, k + 2)]
    residuals = ext.residuals()
    for j, lift in enumerate(lifts, 1):
        residuals[f"step {j} lifting equations"] = max(lift.residuals.values())
    return CoherentExtension(k, (x, y), ext.cubes, lifts, residuals, detail)


# --- named instances --------------------------------------------------------------------------

def interval_instance(stage=3):
    """``I`` with its canonical arrow ``0 -> 1``; every hom is the unit."""

    return unit_interval(CHAIN, stage), 0, 1, {0: 1}


def contractible_instance():
    """``D^1`` and ``D^1 (+) D^1`` with the inclusion of the first summand.

    Both complexes are contractible, so every chain map between them is a
    homotopy equivalence; the projection is an explicit inverse.
    """

    one = disk(1)
    two = direct_sum(one, one)[0]
    cat = dg_category([one, two], name="End(D1, D1+D1)")
    alpha = chain_map_vector(cat, (0, 1), {1: [[1], [0]], 0: [[1], [0]]})
    return cat, 0, 1, alpha


def zero_arrow_instance():
    """The zero map ``S^0 -> S^0``: its composites with anything vanish in ``pi0``."""

    cat = dg_category([sphere(0), sphere(0)], name="End(S0, S0)")
    return cat, 0, 1, {}


INSTANCES = {
    "interval": interval_instance,
    "contractible": contractible_instance,
    "zero-arrow": zero_arrow_instance,
}
