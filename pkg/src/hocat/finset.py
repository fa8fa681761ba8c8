"""Finite sets as a model base.

Cofibrations are injections, fibrations surjections and weak equivalences
bijections.  Elements are atoms (strings or ints); the order of the element
list is the deterministic atom order used for canonical representatives.
"""

import json
from itertools import product

from .base import Base


class FinSetObj:
    def __init__(self, elements):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise ValueError("finite set has duplicate elements")
        self.elements = elements
        self.position = {e: i for i, e in enumerate(elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.position

    def __eq__(self, other):
        return isinstance(other, FinSetObj) and self.elements == other.elements

    def __repr__(self):
        return f"FinSetObj({self.elements})"

    def to_json(self):
        return {"elements": list(self.elements)}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["elements"])


class FinSetMap:
    def __init__(self, source, target, assignment):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        for x in source:
            if x not in self.assignment:
                raise ValueError(f"map undefined on {x!r}")
            if self.assignment[x] not in target:
                raise ValueError(f"image of {x!r} outside target")

    def __call__(self, x):
        return self.assignment[x]

    def compose(self, first):
        return FinSetMap(first.source, self.target, {x: self(first(x)) for x in first.source})

    def __eq__(self, other):
        return self.source == other.source and self.target == other.target and self.assignment == other.assignment

    def is_injective(self):
        return len({self(x) for x in self.source}) == len(self.source)

    def is_surjective(self):
        return {self(x) for x in self.source} == set(self.target.elements)

    def is_bijective(self):
        return self.is_injective() and self.is_surjective()

    def to_json(self):
        return {str(k): v for k, v in self.assignment.items()}

    @classmethod
    def from_json(cls, source, target, data):
        return cls(source, target, data)


def identity_map(s):
    return FinSetMap(s, s, {x: x for x in s})


def set_model_predicates(f):
    """``(is_cofibration, is_weak_equivalence, is_fibration)``."""
    return f.is_injective(), f.is_bijective(), f.is_surjective()


def cartesian(a, b):
    return FinSetObj([(x, y) for x, y in product(a, b)])


def disjoint_union(a, b):
    s = FinSetObj([(0, x) for x in a] + [(1, y) for y in b])
    return s, FinSetMap(a, s, {x: (0, x) for x in a}), FinSetMap(b, s, {y: (1, y) for y in b})


def _quotient(s, pairs):
    parent = {x: x for x in s}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if s.position[ra] < s.position[rb]:
                parent[rb] = ra
            else:
                parent[ra] = rb
    reps = [x for x in s if find(x) == x]
    q = FinSetObj(reps)
    return q, FinSetMap(s, q, {x: find(x) for x in s})


def pushout(f, g):
    s, ib, ic = disjoint_union(f.target, g.target)
    q, proj = _quotient(s, [(ib(f(a)), ic(g(a))) for a in f.source])
    return q, proj.compose(ib), proj.compose(ic)


def coequalizer(f, g):
    return _quotient(f.target, [(f(a), g(a)) for a in f.source])


def solve_strict_lift(i, p, top, bottom):
    """A lift ``B -> X`` in a commuting square, or ``None``."""
    assign = {i(a): top(a) for a in i.source}
    for b in i.target:
        if b in assign:
            if p(assign[b]) != bottom(b):
                return None
            continue
        fibre = [x for x in p.source if p(x) == bottom(b)]
        if not fibre:
            return None
        assign[b] = fibre[0]
    return FinSetMap(i.target, p.source, assign)


class SetBase(Base):
    name = "finset"

    def unit(self):
        return FinSetObj(["*"])

    def initial(self):
        return FinSetObj([])

    def tensor(self, a, b):
        return cartesian(a, b)

    def coproduct(self, a, b):
        return disjoint_union(a, b)

    def pushout(self, f, g):
        return pushout(f, g)

    def coequalizer(self, f, g):
        return coequalizer(f, g)

    def generating_cofibrations(self, bound=None):
        return [FinSetMap(FinSetObj([]), FinSetObj(["*"]), {})]

    def solve_strict_lift(self, i, p, top, bottom):
        return solve_strict_lift(i, p, top, bottom)

    def is_cofibration(self, f):
        return f.is_injective()

    def is_weak_equivalence(self, f):
        return f.is_bijective()

    def is_fibration(self, f):
        return f.is_surjective()


SET_BASE = SetBase()


# --- bridges to presented spaces --------------------------------------------------------

def set_of_space(space, p=None):
    n = space.dim if p is None else space.prefix(p)
    return FinSetObj(list(range(n)))


def map_of_linear(f, p=None):
    src, tgt = set_of_space(f.source, p), set_of_space(f.target, p)
    return FinSetMap(src, tgt, {i: next(iter(f.cols[i])) for i in src})
