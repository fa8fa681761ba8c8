"""Amalgamation of two-object categories along a shared object.

``H`` keeps its objects ``0, 1`` and ``K`` is shifted to ``1, 2``; the glued
three-object category ``L`` has as basis of ``L(a, b)`` the alternating strings
of non-unit basis arrows, adjacent arrows coming from different factors and
meeting at the shared object ``1``.  Composition concatenates and then
composes neighbours from the same factor, contracting whenever a unit
appears.  The amalgam ``H * K`` is the restriction of ``L`` to ``0, 2``.

The hom formulas of the amalgamation lemma are checked against this model:
for instance ``L(0, 2) = L(1, 2) (x)_{L1} L(0, 1)`` is formed with
:func:`~hocat.spaces.tensor_over` and compared by composition.
"""

from dataclasses import dataclass, field
from itertools import product

from .base import check_universal_property
from .certificates import Certificate
from .enriched import BeyondStage, TwoObjectCategory, VCategory
from .spaces import CHAIN, Linear, free_space, restrict, tensor_over, vadd

H_TAG, K_TAG = 0, 1


class AmalgamError(ValueError):
    pass


class Amalgam:
    """The glued category ``L`` and its restriction ``H * K``."""

    def __init__(self, H, K, stage=None):
        if H.base != K.base:
            raise AmalgamError("factors live over different bases")
        self.base = H.base
        self.stage = min(H.stage, K.stage) if stage is None else stage
        if self.stage > min(H.stage, K.stage):
            raise AmalgamError("factors are not materialised to the requested stage")
        self.factors = {H_TAG: H, K_TAG: K}
        self.shift = {H_TAG: 0, K_TAG: 1}
        for tag, x in ((H_TAG, 1), (K_TAG, 0)):
            space = self.factors[tag].homs[(x, x)]
            unit = space.unit_index
            if any(w == 0 and i != unit for i, w in enumerate(space.weights)):
                raise AmalgamError("the shared endomorphisms must be the unit in weight 0")
        self._letters = self._letter_table()
        self.L = self._glued()
        self.amalgam = self._restricted()

    # letters are (tag, slot in the factor, basis index)
    def _letter_table(self):
        out = {}
        for tag, cat in self.factors.items():
            for slot, space in cat.homs.items():
                unit = getattr(space, "unit_index", None) if slot[0] == slot[1] else None
                for i in range(space.dim):
                    if i == unit or space.weights[i] > self.stage:
                        continue
                    s, t = (x + self.shift[tag] for x in slot)
                    out[(tag, slot, i)] = (s, t, space.weights[i], space.degrees[i])
        return out

    def _is_unit(self, tag, slot, i):
        space = self.factors[tag].homs[slot]
        return slot[0] == slot[1] and getattr(space, "unit_index", None) == i

    def normal(self, word):
        """Normal form of a word of letters as ``{word: coefficient}``."""
        for k in range(len(word) - 1):
            a, b = word[k], word[k + 1]
            if a[0] != b[0]:
                continue
            cat = self.factors[a[0]]
            prod = cat.compose_basis(a[1], b[1], a[2], b[2])
            if prod is None:
                raise BeyondStage("amalgam composite beyond stage")
            slot = (b[1][0], a[1][1])
            out = {}
            for i, c in prod.items():
                mid = () if self._is_unit(a[0], slot, i) else ((a[0], slot, i),)
                vadd(out, self.normal(word[:k] + mid + word[k + 2:]), c)
            return out
        return {word: 1}

    def differential(self, word):
        out = {}
        sign = 1
        for k, (tag, slot, i) in enumerate(word):
            space = self.factors[tag].homs[slot]
            for j, c in space.d[i].items():
                mid = () if self._is_unit(tag, slot, j) else ((tag, slot, j),)
                vadd(out, self.normal(word[:k] + mid + word[k + 1:]), sign * c)
            if space.degrees[i] % 2:
                sign = -sign
        return out

    def _strings(self):
        """Normal words by ``L`` slot: ``{(a, b): {word: (weight, degree)}}``."""
        found = {(x, x): {(): (0, 0)} for x in range(3)}
        frontier = [((), x, x, 0, 0) for x in range(3)]
        ordered = sorted(self._letters.items())
        while frontier:
            nxt = []
            for word, src, tgt, w, g in frontier:
                for letter, (s, t, lw, lg) in ordered:
                    if s != tgt or w + lw > self.stage or (word and word[0][0] == letter[0]):
                        continue
                    new = (letter,) + word
                    found.setdefault((src, t), {})[new] = (w + lw, g + lg)
                    nxt.append((new, src, t, w + lw, g + lg))
            frontier = nxt
        return found

    def _glued(self):
        strings = self._strings()
        homs = {}
        for slot in product(range(3), repeat=2):
            words = strings.get(slot, {})
            items = []
            for word, (w, g) in words.items():
                dvec = self.differential(word) if self.base == CHAIN else {}
                items.append((word, w, g, dvec))
            space = free_space(self.base, self.stage, items, f"L{slot}")
            if slot[0] == slot[1]:
                space.unit_index = space.index[()]
            homs[slot] = space

        def comp(gslot, fslot, g, f):
            gw, fw = homs[gslot].terms[g], homs[fslot].terms[f]
            target = homs[(fslot[0], gslot[1])]
            return {target.index[w]: c for w, c in self.normal(gw + fw).items()}

        units = {x: {homs[(x, x)].unit_index: 1} for x in range(3)}
        return VCategory(self.base, self.stage, (0, 1, 2), homs, units, comp, "L")

    def _restricted(self):
        L = self.L
        relabel = {0: 0, 1: 2}
        homs = {(a, b): L.homs[(relabel[a], relabel[b])] for a, b in product((0, 1), repeat=2)}

        def comp(gslot, fslot, g, f):
            return L.compose_basis((relabel[gslot[0]], relabel[gslot[1]]), (relabel[fslot[0]], relabel[fslot[1]]), g, f)

        units = {a: L.unit(relabel[a]) for a in (0, 1)}
        return TwoObjectCategory(self.base, self.stage, homs, units, comp, "H*K")

    # --- embeddings of the factors ---------------------------------------------------------

    def embed(self, tag, slot, i):
        """Image of basis element ``i`` of ``factor(slot)`` in ``L``."""
        s, t = (x + self.shift[tag] for x in slot)
        word = () if self._is_unit(tag, slot, i) else ((tag, slot, i),)
        return {self.L.homs[(s, t)].index[word]: 1}


# --- hom formulas ---------------------------------------------------------------------------

def _restrict_to_stage(space, stage):
    if space.stage <= stage:
        return space
    out = restrict(space, stage)
    if hasattr(space, "unit_index"):
        out.unit_index = space.unit_index
    return out


@dataclass
class FormulaCheck:
    name: str
    map: Linear
    certificate: Certificate


def _formula_map(am, name, left_space, left_slot, right_space, right_slot, monoid, right_act, left_act, left_to_l, right_to_l):
    """Form ``left (x)_R right`` and compare it with ``L`` by composition."""
    L = am.L
    tensor = tensor_over([left_space, right_space], [(monoid, right_act, left_act)], am.stage, name)
    target_slot = (right_slot[0], left_slot[1])
    target = L.homs[target_slot]
    cols = []
    for a, b in tensor.terms:
        cols.append(L.compose(left_slot, left_to_l(a), right_slot, right_to_l(b)))
    f = Linear(tensor, target, cols, name)
    stages = {q: f.is_iso(q) for q in range(am.stage + 1)}
    ok = all(stages.values()) and (am.base != CHAIN or f.is_chain_map())
    return FormulaCheck(name, f, Certificate(f"{name} formula", ok, stages, {"dims": [tensor.dim, target.dim]}))


def formula_checks(am):
    """The six hom formulas for ``L(i, j)`` with ``i != j``."""
    H, K, L = am.factors[H_TAG], am.factors[K_TAG], am.L
    N = am.stage
    H1, H01, H10 = (_restrict_to_stage(H.homs[s], N) for s in [(1, 1), (0, 1), (1, 0)])
    K0, K01, K10 = (_restrict_to_stage(K.homs[s], N) for s in [(0, 0), (0, 1), (1, 0)])
    L1 = L.homs[(1, 1)]
    ident = lambda i: {i: 1}

    def l1_times(tag, fslot):
        """Right action ``m o r`` of a factor endomorphism ``r`` on ``L1``."""
        return lambda m, r: L.compose((1, 1), {m: 1}, (1, 1), am.embed(tag, fslot, r))

    def times_l1(tag, gslot):
        return lambda r, m: L.compose((1, 1), am.embed(tag, gslot, r), (1, 1), {m: 1})

    def in_factor(tag, gslot, fslot):
        cat = am.factors[tag]
        return lambda g, f: cat.compose_basis(gslot, fslot, g, f)

    checks = []
    # L(0, 1) = L1 (x)_{H1} H(0, 1)
    checks.append(
        _formula_map(
            am, "L(0,1)", L1, (1, 1), H01, (0, 1), H1,
            l1_times(H_TAG, (1, 1)), in_factor(H_TAG, (1, 1), (0, 1)),
            ident, lambda b: am.embed(H_TAG, (0, 1), b),
        )
    )
    # L(1, 0) = H(1, 0) (x)_{H1} L1
    checks.append(
        _formula_map(
            am, "L(1,0)", H10, (1, 0), L1, (1, 1), H1,
            in_factor(H_TAG, (1, 0), (1, 1)), times_l1(H_TAG, (1, 1)),
            lambda a: am.embed(H_TAG, (1, 0), a), ident,
        )
    )
    # L(1, 2) = K(0, 1) (x)_{K0} L1
    checks.append(
        _formula_map(
            am, "L(1,2)", K01, (1, 2), L1, (1, 1), K0,
            in_factor(K_TAG, (0, 1), (0, 0)), times_l1(K_TAG, (0, 0)),
            lambda a: am.embed(K_TAG, (0, 1), a), ident,
        )
    )
    # L(2, 1) = L1 (x)_{K0} K(1, 0)
    checks.append(
        _formula_map(
            am, "L(2,1)", L1, (1, 1), K10, (2, 1), K0,
            l1_times(K_TAG, (0, 0)), in_factor(K_TAG, (0, 0), (1, 0)),
            ident, lambda b: am.embed(K_TAG, (1, 0), b),
        )
    )

    def l_right(left_slot):
        return lambda m, r: L.compose(left_slot, {m: 1}, (1, 1), {r: 1})

    def l_left(right_slot):
        return lambda r, m: L.compose((1, 1), {r: 1}, right_slot, {m: 1})

    # L(0, 2) = L(1, 2) (x)_{L1} L(0, 1) and L(2, 0) = L(1, 0) (x)_{L1} L(2, 1)
    for name, ls, rs in (("L(0,2)", (1, 2), (0, 1)), ("L(2,0)", (1, 0), (2, 1))):
        checks.append(
            _formula_map(am, name, L.homs[ls], ls, L.homs[rs], rs, L1, l_right(ls), l_left(rs), ident, ident)
        )
    return checks


def _boundary_square(am, tag, test_cones, seed):
    """``dF -> F_x`` pushed out along ``dF -> L(..) (x)_{L1} L(..)`` gives ``L_y``."""
    L = am.L
    cat = am.factors[tag]
    N = am.stage
    if tag == H_TAG:
        x, out_slot, in_slot, y = 0, (1, 0), (0, 1), 0
    else:
        x, out_slot, in_slot, y = 1, (0, 1), (1, 0), 2
    mid = 1 - x
    monoid = _restrict_to_stage(cat.homs[(mid, mid)], N)
    fo, fi = _restrict_to_stage(cat.homs[out_slot], N), _restrict_to_stage(cat.homs[in_slot], N)
    boundary = tensor_over(
        [fo, fi],
        [(monoid, lambda a, r: cat.compose_basis(out_slot, (mid, mid), a, r), lambda r, b: cat.compose_basis((mid, mid), in_slot, r, b))],
        N,
        "dF",
    )
    endo = _restrict_to_stage(cat.homs[(x, x)], N)
    c = Linear(boundary, endo, [cat.compose(out_slot, {a: 1}, in_slot, {b: 1}) for a, b in boundary.terms])
    lo = tuple(s + am.shift[tag] for s in out_slot)
    li = tuple(s + am.shift[tag] for s in in_slot)
    L1 = L.homs[(1, 1)]
    big = tensor_over(
        [L.homs[lo], L.homs[li]],
        [(L1, lambda a, r: L.compose(lo, {a: 1}, (1, 1), {r: 1}), lambda r, b: L.compose((1, 1), {r: 1}, li, {b: 1}))],
        N,
        "dL",
    )
    cols = []
    for a, b in boundary.terms:
        ea, eb = am.embed(tag, out_slot, a), am.embed(tag, in_slot, b)
        cols.append(big.reduce({(i, j): 1 for i in ea for j in eb}))
    inc = Linear(boundary, big, cols)
    cL = Linear(big, L.homs[(y, y)], [L.compose(lo, {a: 1}, li, {b: 1}) for a, b in big.terms])
    emb = Linear(endo, L.homs[(y, y)], [am.embed(tag, (x, x), i) for i in range(endo.dim)])
    diagram = ([boundary, endo, big], [(0, 1, c), (0, 2, inc)])
    candidate = (L.homs[(y, y)], [emb.compose(c), emb, cL])
    verdict = check_universal_property(f"L{y} square", diagram, candidate, test_cones, seed)
    return Certificate(f"L{y} bimodule pushout", verdict.holds, {}, verdict.as_dict())


# --- the amalgam and its checks ------------------------------------------------------------

@dataclass
class AmalgamResult:
    amalgam: Amalgam
    certificates: list = field(default_factory=list)

    @property
    def category(self):
        return self.amalgam.amalgam

    def homs(self):
        """The nine homs of ``L`` keyed ``"a->b"``."""
        return {f"{a}->{b}": s for (a, b), s in sorted(self.amalgam.L.homs.items())}


def amalgamate(H, K, stage=None, test_cones=3, seed=0):
    """Glue ``H`` and ``K`` along ``1 = 0`` and certify the hom formulas."""
    am = Amalgam(H, K, stage)
    certs = [c.certificate for c in formula_checks(am)]
    certs.append(_boundary_square(am, H_TAG, test_cones, seed))
    certs.append(_boundary_square(am, K_TAG, test_cones, seed + 1))
    failures = am.L.check_axioms()
    certs.append(Certificate("L category axioms", not failures, {}, {"failures": len(failures)}))
    return AmalgamResult(am, certs)


def isomorphic_to_interval(cat):
    """Every hom is one-dimensional in degree 0 with unit-like composition."""
    for slot, space in cat.homs.items():
        if space.dims_by_degree() != {0: 1} or any(space.d):
            return False
    for (x, y), (y2, z) in product(cat.homs, repeat=2):
        if y == y2 and cat.compose_basis((y, z), (x, y), 0, 0) != {0: 1}:
            return False
    return True
