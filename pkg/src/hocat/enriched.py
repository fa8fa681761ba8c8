"""Enriched graphs and categories on finite object sets.

Hom objects are presented spaces truncated at a common stage.  A slot
``(i, j)`` names the hom of maps ``i -> j``; composition ``g o f`` takes
``f`` in slot ``(i, j)`` and ``g`` in slot ``(j, k)``.  Tensor words are
written in composition order, so ``m (x) n`` stands for ``m o n``.
"""

from itertools import product

from .spaces import CHAIN, SET, Linear, free_space, present, tensor_over, tuple_boundary, tuple_grading, vadd


class BeyondStage(LookupError):
    """A composite would leave the materialised stage."""


def empty_space(base, stage, name=""):
    return present(base, stage, [], name=name)


def unit_space(base, stage, name="unit"):
    space = free_space(base, stage, [((0,), 0, 0, {})], name)
    space.unit_index = 0
    return space


class VGraph:
    def __init__(self, base, stage, objects, homs):
        self.base = base
        self.stage = stage
        self.objects = tuple(objects)
        self.homs = dict(homs)

    def hom(self, s, t):
        if (s, t) not in self.homs:
            self.homs[(s, t)] = empty_space(self.base, self.stage, f"0({s},{t})")
        return self.homs[(s, t)]


class VCategory:
    """A category enriched in the base, presented hom by hom.

    ``compose_basis(gslot, fslot, g, f)`` returns the composite of basis
    element ``g`` of ``gslot`` with basis element ``f`` of ``fslot`` as a
    sparse vector, or ``None`` when the composite lies beyond the stage.
    """

    def __init__(self, base, stage, objects, homs, units, compose_basis, name="", letters=None):
        self.base = base
        self.stage = stage
        self.objects = tuple(objects)
        self.homs = dict(homs)
        self.units = dict(units)
        self._compose_basis = compose_basis
        self._cache = {}
        self.name = name
        self.letters = dict(letters or {})
        self.certificates = []
        self.provenance = {}
        for (s, t) in product(self.objects, repeat=2):
            if (s, t) not in self.homs:
                self.homs[(s, t)] = empty_space(base, stage, f"0({s},{t})")
        for s, u in self.units.items():
            (idx,) = u
            self.homs[(s, s)].unit_index = idx

    def hom(self, s, t):
        return self.homs[(s, t)]

    def unit(self, s):
        return dict(self.units[s])

    def compose_basis(self, gslot, fslot, g, f):
        key = (gslot, fslot, g, f)
        if key not in self._cache:
            if gslot[0] != fslot[1]:
                raise ValueError(f"slots {gslot} and {fslot} are not composable")
            left, right = self.homs[gslot], self.homs[fslot]
            if left.weights[g] + right.weights[f] > self.stage:
                self._cache[key] = None
            else:
                self._cache[key] = self._compose_basis(gslot, fslot, g, f)
        return self._cache[key]

    def compose(self, gslot, gvec, fslot, fvec):
        """Bilinear composite; raises :class:`BeyondStage` if a term overflows."""
        acc = {}
        for g, a in gvec.items():
            for f, b in fvec.items():
                v = self.compose_basis(gslot, fslot, g, f)
                if v is None:
                    raise BeyondStage(f"{self.name}: composite beyond stage {self.stage}")
                vadd(acc, v, a * b)
        return acc

    def try_compose(self, gslot, gvec, fslot, fvec):
        try:
            return self.compose(gslot, gvec, fslot, fvec)
        except BeyondStage:
            return None

    def evaluate_word(self, word, start=None):
        """Evaluate a word in generator letters (leftmost letter applied last).

        ``word`` is a list of letter names; the empty word needs ``start``.
        Returns ``(slot, vector)``.
        """
        if not word:
            if start is None:
                raise ValueError("empty word needs an object")
            return (start, start), self.unit(start)
        for name in word:
            if self.letters[name][1] is None:
                raise BeyondStage(f"generator {name} lies beyond stage {self.stage}")
        slot, vec = self.letters[word[-1]]
        for name in reversed(word[:-1]):
            lslot, lvec = self.letters[name]
            vec = self.compose(lslot, lvec, slot, vec)
            slot = (slot[0], lslot[1])
        return slot, vec

    def dims(self, p=None):
        return {slot: space.dims_by_degree(p) for slot, space in sorted(self.homs.items())}

    def check_axioms(self, max_checks=20000):
        """Unit laws and associativity on basis elements within the stage."""
        failures = []
        for (s, t), space in self.homs.items():
            for i in range(space.dim):
                v = {i: 1}
                if self.compose((t, t), self.unit(t), (s, t), v) != v:
                    failures.append(("left unit", (s, t), i))
                if self.compose((s, t), v, (s, s), self.unit(s)) != v:
                    failures.append(("right unit", (s, t), i))
        checks = 0
        for a, b, c, d in product(self.objects, repeat=4):
            hf, hg, hh = self.homs[(a, b)], self.homs[(b, c)], self.homs[(c, d)]
            for f in range(hf.dim):
                for g in range(hg.dim):
                    wfg = hf.weights[f] + hg.weights[g]
                    if wfg > self.stage:
                        continue
                    gf = self.compose_basis((b, c), (a, b), g, f)
                    for h in range(hh.dim):
                        if wfg + hh.weights[h] > self.stage:
                            continue
                        checks += 1
                        if checks > max_checks:
                            return failures
                        left = self.compose((c, d), {h: 1}, (a, c), gf)
                        hg_ = self.compose_basis((c, d), (b, c), h, g)
                        right = self.compose((b, d), hg_, (a, b), {f: 1})
                        if left != right:
                            failures.append(("associativity", (a, b, c, d), (f, g, h)))
        return failures


class TwoObjectCategory(VCategory):
    """A category on objects ``{0, 1}``: the sixtuple of monoids and bimodules."""

    def __init__(self, base, stage, homs, units, compose_basis, name="", letters=None):
        super().__init__(base, stage, (0, 1), homs, units, compose_basis, name, letters)
        self.structure = {}

    @property
    def H0(self):
        return self.homs[(0, 0)]

    @property
    def H1(self):
        return self.homs[(1, 1)]

    @property
    def H01(self):
        return self.homs[(0, 1)]

    @property
    def H10(self):
        return self.homs[(1, 0)]


def _sign(base, a, b):
    return -1 if base == CHAIN and (a % 2) and (b % 2) else 1


# --- small categories ------------------------------------------------------------

def initial_category(base, stage):
    """The initial two-object category: units only, empty cross homs."""
    homs = {(0, 0): unit_space(base, stage, "H0"), (1, 1): unit_space(base, stage, "H1")}

    def comp(gslot, fslot, g, f):
        return {0: 1}

    cat = TwoObjectCategory(base, stage, homs, {0: {0: 1}, 1: {0: 1}}, comp, "initial")
    return cat


def unit_interval(base, stage):
    """The category representing a single isomorphism: every hom is the unit."""
    homs = {slot: unit_space(base, stage, f"I{slot}") for slot in product((0, 1), repeat=2)}
    cat = TwoObjectCategory(base, stage, homs, {0: {0: 1}, 1: {0: 1}}, lambda *a: {0: 1}, "interval")
    return cat


def arrow_category(base, stage):
    """The category representing one arrow ``0 -> 1``."""
    homs = {slot: unit_space(base, stage, f"J{slot}") for slot in [(0, 0), (1, 1), (0, 1)]}
    return TwoObjectCategory(base, stage, homs, {0: {0: 1}, 1: {0: 1}}, lambda *a: {0: 1}, "arrow")


def opposite(cat):
    """Reverse all arrows: ``op(i, j) = cat(j, i)`` with Koszul-signed composition."""
    homs = {(i, j): cat.homs[(j, i)] for (i, j) in cat.homs}

    def comp(gslot, fslot, g, f):
        (j, k), (i, _) = gslot, fslot
        gdeg = cat.homs[(k, j)].degrees[g]
        fdeg = cat.homs[(j, i)].degrees[f]
        v = cat.compose_basis((j, i), (k, j), f, g)
        if v is None:
            return None
        return {t: c * _sign(cat.base, gdeg, fdeg) for t, c in v.items()}

    op = TwoObjectCategory(cat.base, cat.stage, homs, cat.units, comp, f"op({cat.name})", _op_letters(cat))
    op.provenance = {"opposite_of": cat}
    return op


def _op_letters(cat):
    return {name: ((t, s), vec) for name, ((s, t), vec) in cat.letters.items()}


def swap_objects(cat):
    """Relabel objects ``0 <-> 1``."""
    sw = lambda slot: (1 - slot[0], 1 - slot[1])
    homs = {sw(slot): space for slot, space in cat.homs.items()}

    def comp(gslot, fslot, g, f):
        return cat.compose_basis(sw(gslot), sw(fslot), g, f)

    units = {1 - s: u for s, u in cat.units.items()}
    letters = {name: (sw(slot), vec) for name, (slot, vec) in cat.letters.items()}
    out = TwoObjectCategory(cat.base, cat.stage, homs, units, comp, f"swap({cat.name})", letters)
    out.provenance = {"swap_of": cat}
    return out


def opposite_structure(cat, structure):
    """Transport a structure-map dictionary along :func:`opposite`."""
    return {(j, i): f for (i, j), f in structure.items()}


def swap_structure(structure):
    return {(1 - i, 1 - j): f for (i, j), f in structure.items()}


# --- tensors inside one category ---------------------------------------------------

def hom_tensor(cat, slots, stage=None, name=""):
    """``cat(slot_1) (x)_{e} cat(slot_2) (x) ...`` over the intermediate endo-monoids.

    ``slots`` are listed in composition order: ``slots[k] = (j_k, j_{k-1})`` so
    the tensor maps to ``cat(j_n, j_0)`` by composing.
    """
    stage = cat.stage if stage is None else stage
    factors = [cat.homs[s] for s in slots]
    actions = []
    for k in range(len(slots) - 1):
        mid = slots[k][0]
        if slots[k + 1][1] != mid:
            raise ValueError("slots are not composable")
        endo = (mid, mid)
        ls, rs = slots[k], slots[k + 1]
        right = lambda m, r, ls=ls, endo=endo: cat.compose_basis(ls, endo, m, r)
        left = lambda r, n, rs=rs, endo=endo: cat.compose_basis(endo, rs, r, n)
        actions.append((cat.homs[endo], right, left))
    return tensor_over(factors, actions, stage, name)


def composite_map(cat, space, slots, target=None):
    """The composition map from a :func:`hom_tensor` space into the composite hom."""
    src = slots[-1][0]
    dst = slots[0][1]
    tgt = cat.homs[(src, dst)] if target is None else target

    def image(term):
        vec = {term[-1]: 1}
        slot = slots[-1]
        for k in range(len(slots) - 2, -1, -1):
            vec = cat.compose(slots[k], {term[k]: 1}, slot, vec)
            slot = (slot[0], slots[k][1])
        return vec

    cols = []
    for term in space.terms:
        cols.append(image(term))
    return Linear(space, tgt, cols)


def boundary(cat, i, stage=None):
    """``dH_1 = H(0,1) (x)_{H0} H(1,0)`` or ``dH_0 = H(1,0) (x)_{H1} H(0,1)`` with ``c_i``."""
    other = 1 - i
    slots = [(other, i), (i, other)]
    space = hom_tensor(cat, slots, stage, f"d{cat.name}{i}")
    return space, composite_map(cat, space, slots)


def check_compatibility(cat):
    """The four compatibility squares of the sixtuple, on basis elements.

    They say composites of three alternating cross elements do not depend on
    which pair is composed first.
    """
    failures = []
    for a, b in [(0, 1), (1, 0)]:
        h1, h2, h3 = cat.homs[(a, b)], cat.homs[(b, a)], cat.homs[(a, b)]
        for x in range(h1.dim):
            for y in range(h2.dim):
                for z in range(h3.dim):
                    if h1.weights[x] + h2.weights[y] + h3.weights[z] > cat.stage:
                        continue
                    yz = cat.compose_basis((b, a), (a, b), y, z)
                    left = cat.compose((a, b), {x: 1}, (a, a), yz)
                    xy = cat.compose_basis((a, b), (b, a), x, y)
                    right = cat.compose((b, b), xy, (a, b), {z: 1})
                    if left != right:
                        failures.append(((a, b), (x, y, z)))
    return failures


# --- free constructions on graphs --------------------------------------------------------

def free_category(graph, name="free"):
    """Free category: hom(r, t) is spanned by paths, composition concatenates.

    Basis terms are ``(vertices, edges)`` with ``vertices`` the visited objects
    from source to target and ``edges`` the edge basis indices in
    composition order.  Edge basis elements of weight 0 are not allowed.
    """
    base, stage = graph.base, graph.stage
    objs = graph.objects
    for (s, t), e in graph.homs.items():
        if any(w == 0 for w in e.weights):
            raise ValueError("free category needs edges of positive weight")
    paths = {}
    frontier = [((s,), (), 0, 0) for s in objs]
    for path in frontier:
        paths.setdefault((path[0][0], path[0][-1]), []).append(path)
    while frontier:
        nxt = []
        for verts, edges, w, deg in frontier:
            last = verts[-1]
            for t in objs:
                e = graph.homs.get((last, t))
                if e is None:
                    continue
                for i in range(e.dim):
                    w2 = w + e.weights[i]
                    if w2 > stage:
                        continue
                    p = (verts + (t,), (i,) + edges, w2, deg + e.degrees[i])
                    nxt.append(p)
                    paths.setdefault((verts[0], t), []).append(p)
        frontier = nxt

    def edge_spaces(verts):
        return [graph.homs[(verts[k - 1], verts[k])] for k in range(len(verts) - 1, 0, -1)]

    homs = {}
    for (s, t) in product(objs, repeat=2):
        items = []
        for verts, edges, w, deg in paths.get((s, t), []):
            dv = {}
            if base == CHAIN and edges:
                for tup, c in tuple_boundary(edge_spaces(verts), edges).items():
                    dv[(verts, tup)] = c
            items.append(((verts, edges), w, deg, dv))
        homs[(s, t)] = free_space(base, stage, items, f"{name}({s},{t})")

    def comp(gslot, fslot, g, f):
        gv, ge = homs[gslot].terms[g]
        fv, fe = homs[fslot].terms[f]
        term = (fv + gv[1:], ge + fe)
        return {homs[(fslot[0], gslot[1])].index[term]: 1}

    units = {s: {homs[(s, s)].index[((s,), ())]: 1} for s in objs}
    cls = TwoObjectCategory if tuple(objs) == (0, 1) else None
    if cls is None:
        return VCategory(base, stage, objs, homs, units, comp, name)
    return TwoObjectCategory(base, stage, homs, units, comp, name)


def representable(base, stage, s, t, x_space, objects=(0, 1)):
    """``J_{s,t}[X]``: the free category on a single edge object ``X`` at ``(s, t)``."""
    return free_category(VGraph(base, stage, objects, {(s, t): x_space}), f"J{s}{t}")


def circle_product(b, a):
    """``(B o A)(r, t) = coproduct over s of B(s, t) (x) A(r, s)``."""
    if b.objects != a.objects:
        raise ValueError("graphs on different object sets")
    base, stage = a.base, min(a.stage, b.stage)
    homs = {}
    for r, t in product(a.objects, repeat=2):
        items = []
        for s in a.objects:
            bs, as_ = b.hom(s, t), a.hom(r, s)
            for i in range(bs.dim):
                for j in range(as_.dim):
                    w, g = tuple_grading([bs, as_], (i, j))
                    dv = {}
                    if base == CHAIN:
                        for tup, c in tuple_boundary([bs, as_], (i, j)).items():
                            dv[(s, tup[0], tup[1])] = c
                    items.append(((s, i, j), w, g, dv))
        homs[(r, t)] = free_space(base, stage, items, f"circ({r},{t})")
    return VGraph(base, stage, a.objects, homs)


def graph_of(cat):
    return VGraph(cat.base, cat.stage, cat.objects, cat.homs)


def unit_graph(base, stage, objects):
    return VGraph(base, stage, objects, {(s, s): unit_space(base, stage) for s in objects})


__all__ = [
    "BeyondStage",
    "VGraph",
    "VCategory",
    "TwoObjectCategory",
    "initial_category",
    "unit_interval",
    "arrow_category",
    "opposite",
    "swap_objects",
    "hom_tensor",
    "composite_map",
    "boundary",
    "check_compatibility",
    "free_category",
    "representable",
    "circle_product",
    "graph_of",
    "unit_graph",
    "empty_space",
    "unit_space",
    "SET",
    "CHAIN",
]
