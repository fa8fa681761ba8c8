"""Presented spaces: the quotient engine behind every hom object.

A :class:`Space` is a finite object of the base (a graded rational vector
space with differential, or a finite set) given by a spanning family of
hashable *terms* and a family of relations between them.  The engine computes
an ordered canonical basis made of the least surviving terms, a normal form for
every spanning term, and, over the chain base, the induced differential.

Terms are nested tuples of ints.  They are ordered by ``(weight, term)`` so the
weight-``p`` part of a space is always a prefix of its basis.
"""

from fractions import Fraction
from itertools import product

from .base import BudgetExceeded, current_budget
from .linalg import q

CHAIN = "chain"
SET = "set"


def term_key(term):
    """Total order on nested int tuples, robust to mixed int/tuple positions."""
    if isinstance(term, tuple):
        return (1, tuple(term_key(t) for t in term))
    return (0, term)


# --- sparse vectors: dict index -> nonzero coefficient ---------------------

def vadd(acc, vec, coef=1):
    for k, x in vec.items():
        v = acc.get(k, 0) + coef * x
        if v:
            acc[k] = q(v)
        else:
            acc.pop(k, None)
    return acc


def vscale(vec, coef):
    if not coef:
        return {}
    return {k: q(coef * x) for k, x in vec.items()}


def vsum(pairs):
    acc = {}
    for vec, coef in pairs:
        vadd(acc, vec, coef)
    return acc


def tensor_vecs(vecs):
    """Multilinear expansion of vectors over terms into a vector over tuples."""
    out = {}
    for combo in product(*(v.items() for v in vecs)):
        coef = 1
        for _, c in combo:
            coef *= c
        key = tuple(t for t, _ in combo)
        v = out.get(key, 0) + coef
        if v:
            out[key] = q(v)
        else:
            out.pop(key, None)
    return out


class Space:
    """A finite presented object with ordered canonical basis.

    ``terms[i]`` is the canonical term of basis element ``i``; ``weights`` and
    ``degrees`` are parallel tuples.  ``d[i]`` is the differential of basis
    element ``i`` as a sparse vector (always empty over the set base).
    """

    def __init__(self, base, stage, terms, weights, degrees, normal, d, name=""):
        self.base = base
        self.stage = stage
        self.terms = tuple(terms)
        self.weights = tuple(weights)
        self.degrees = tuple(degrees)
        self.index = {t: i for i, t in enumerate(self.terms)}
        self._normal = normal
        self.d = tuple(d)
        self.name = name

    def __len__(self):
        return len(self.terms)

    @property
    def dim(self):
        return len(self.terms)

    def __repr__(self):
        return f"Space({self.name!r}, dim={self.dim}, stage={self.stage})"

    def knows(self, term):
        return term in self._normal

    def vec(self, term):
        """Normal form of a spanning term as a sparse vector over the basis."""
        return self._normal[term]

    def reduce(self, raw):
        """Normal form of a sparse vector over spanning terms."""
        acc = {}
        for t, c in raw.items():
            vadd(acc, self._normal[t], c)
        return acc

    def try_reduce(self, raw):
        """Like :meth:`reduce` but returns ``None`` if a term lies beyond the stage."""
        acc = {}
        for t, c in raw.items():
            v = self._normal.get(t)
            if v is None:
                return None
            vadd(acc, v, c)
        return acc

    def spanning_terms(self):
        return self._normal.keys()

    def apply_d(self, vec):
        acc = {}
        for i, c in vec.items():
            vadd(acc, self.d[i], c)
        return acc

    def weight_of(self, vec):
        return max((self.weights[i] for i in vec), default=0)

    def degree_of(self, vec):
        degs = {self.degrees[i] for i in vec}
        if len(degs) > 1:
            raise ValueError("inhomogeneous vector")
        return degs.pop() if degs else None

    def prefix(self, p):
        """Number of basis elements of weight at most ``p``."""
        n = 0
        for w in self.weights:
            if w > p:
                break
            n += 1
        return n

    def dims_by_degree(self, p=None):
        n = self.dim if p is None else self.prefix(p)
        out = {}
        for i in range(n):
            out[self.degrees[i]] = out.get(self.degrees[i], 0) + 1
        return dict(sorted(out.items()))

    def basis_by_degree(self, p=None):
        n = self.dim if p is None else self.prefix(p)
        out = {}
        for i in range(n):
            out.setdefault(self.degrees[i], []).append(i)
        return out

    def signature(self, p=None):
        """Exact fingerprint of the first stages, used for prefix assertions."""
        n = self.dim if p is None else self.prefix(p)
        return (
            self.terms[:n],
            self.weights[:n],
            self.degrees[:n],
            tuple(tuple(sorted(self.d[i].items())) for i in range(n)),
        )


def _key(term, weight):
    return (weight, term_key(term))


def present(base, stage, spanning, relations=(), boundary=None, name="", check=True):
    """Build the quotient of the span of ``spanning`` by ``relations``.

    ``spanning`` yields ``(term, weight, degree)``; entries of weight above
    ``stage`` are discarded.  ``relations`` yields pairs ``(lhs, rhs)`` of
    sparse vectors over spanning terms, meaning ``lhs = rhs``.  ``boundary``
    maps a spanning term to a sparse vector over spanning terms.
    """
    relations = list(relations)
    info = {}
    for term, w, deg in spanning:
        if w > stage:
            continue
        old = info.get(term)
        if old is not None:
            if old != (w, deg):
                raise ValueError(f"term {term!r} listed with two gradings")
            continue
        info[term] = (w, deg)
    budget = current_budget()
    if len(info) > budget:
        raise BudgetExceeded(f"{name or 'space'}: {len(info)} spanning terms exceed budget {budget}")
    order = sorted(info, key=lambda t: _key(t, info[t][0]))
    col = {t: i for i, t in enumerate(order)}

    if base == SET:
        normal_cols = _union_find(order, col, relations)
    else:
        normal_cols = _linear_quotient(order, col, info, relations)

    survivors = [i for i in range(len(order)) if normal_cols[i] is None]
    new_index = {c: k for k, c in enumerate(survivors)}
    terms = [order[c] for c in survivors]
    weights = [info[t][0] for t in terms]
    degrees = [info[t][1] for t in terms]
    normal = {}
    for c, t in enumerate(order):
        nc = normal_cols[c]
        if nc is None:
            normal[t] = {new_index[c]: 1}
        else:
            normal[t] = {new_index[j]: x for j, x in nc.items()}
    d = [{} for _ in terms]
    space = Space(base, stage, terms, weights, degrees, normal, d, name)
    if base == CHAIN and boundary is not None:
        for k, t in enumerate(terms):
            raw = boundary(t)
            v = space.reduce(raw) if raw else {}
            for j in v:
                if degrees[j] != degrees[k] - 1:
                    raise ValueError(f"{name}: differential of {t!r} has wrong degree")
            d[k] = v
        space.d = tuple(d)
        if check:
            for k in range(len(terms)):
                if space.apply_d(d[k]):
                    raise AssertionError(f"{name}: d o d != 0 at {terms[k]!r}")
    if check and base == CHAIN and boundary is not None:
        _check_relations_closed(space, relations, boundary)
    return space


def _union_find(order, col, relations):
    parent = list(range(len(order)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for lhs, rhs in relations:
        if len(lhs) != 1 or len(rhs) != 1:
            raise ValueError("set relations must identify single elements")
        (a, ca), = lhs.items()
        (b, cb), = rhs.items()
        if ca != 1 or cb != 1:
            raise ValueError("set relations carry coefficient 1")
        ra, rb = find(col[a]), find(col[b])
        if ra != rb:
            # least term stays representative
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    out = []
    for i in range(len(order)):
        r = find(i)
        out.append(None if r == i else {r: 1})
    return out


def _linear_quotient(order, col, info, relations):
    pivots = {}
    for lhs, rhs in relations:
        row = {}
        for t, c in lhs.items():
            vadd(row, {col[t]: 1}, c)
        for t, c in rhs.items():
            vadd(row, {col[t]: 1}, -c)
        if not row:
            continue
        degs = {info[order[j]][1] for j in row}
        if len(degs) != 1:
            raise ValueError("relation mixes degrees")
        while row:
            c = max(row)
            prow = pivots.get(c)
            if prow is None:
                a = row[c]
                if a != 1:
                    row = {j: q(Fraction(x) / a) for j, x in row.items()}
                pivots[c] = row
                break
            vadd(row, prow, -row[c])
    for c in sorted(pivots):
        row = pivots[c]
        for j in [j for j in row if j != c and j in pivots]:
            x = row.get(j)
            if x:
                vadd(row, pivots[j], -x)
    out = [None] * len(order)
    for c, row in pivots.items():
        out[c] = {j: q(-x) for j, x in row.items() if j != c}
    return out


def _check_relations_closed(space, relations, boundary):
    """The relation span must be a subcomplex for the quotient differential."""
    for lhs, rhs in relations:
        acc = {}
        for t, c in lhs.items():
            vadd(acc, space.reduce(boundary(t)), c)
        for t, c in rhs.items():
            vadd(acc, space.reduce(boundary(t)), -c)
        if acc:
            raise AssertionError(f"{space.name}: relations are not closed under d")


# --- linear maps between spaces -------------------------------------------

class Linear:
    """A degree-0 map of spaces given by the images of the source basis."""

    def __init__(self, source, target, cols, name=""):
        self.source = source
        self.target = target
        self.cols = list(cols)
        self.name = name
        if len(self.cols) != source.dim:
            raise ValueError("map needs one image per source basis element")

    @classmethod
    def from_terms(cls, source, target, image, name=""):
        """Map defined by ``image(term) -> sparse vector over target terms``."""
        cols = [target.reduce(image(t)) for t in source.terms]
        return cls(source, target, cols, name)

    @classmethod
    def identity(cls, space):
        return cls(space, space, [{i: 1} for i in range(space.dim)], "id")

    def apply(self, vec):
        acc = {}
        for i, c in vec.items():
            vadd(acc, self.cols[i], c)
        return acc

    def __call__(self, vec):
        return self.apply(vec)

    def compose(self, first):
        """``self o first``."""
        return Linear(first.source, self.target, [self.apply(c) for c in first.cols])

    def equals(self, other):
        return self.cols == other.cols

    def is_identity(self):
        return all(c == {i: 1} for i, c in enumerate(self.cols)) and self.source.dim == self.target.dim

    def is_chain_map(self):
        s, t = self.source, self.target
        for i in range(s.dim):
            if self.apply(s.d[i]) != t.apply_d(self.cols[i]):
                return False
            for j in self.cols[i]:
                if t.degrees[j] != s.degrees[i]:
                    return False
        return True

    def is_filtered(self):
        s, t = self.source, self.target
        return all(t.weight_of(c) <= s.weights[i] for i, c in enumerate(self.cols))

    def matrix(self, degree, p=None):
        """Dense matrix of the degree-``degree`` component restricted to weight <= p."""
        src = self.source.basis_by_degree(p).get(degree, [])
        tgt = self.target.basis_by_degree(p).get(degree, [])
        pos = {j: r for r, j in enumerate(tgt)}
        mat = [[0] * len(src) for _ in tgt]
        for c, i in enumerate(src):
            for j, x in self.cols[i].items():
                if j in pos:
                    mat[pos[j]][c] = x
                elif p is None or self.target.weights[j] <= p:
                    raise ValueError("image leaves the degree block")
        return mat, src, tgt

    def rank(self, p=None):
        from .linalg import rank

        total = 0
        for deg in self.source.basis_by_degree(p):
            mat, src, tgt = self.matrix(deg, p)
            if src and tgt:
                total += rank(mat, len(src))
        return total

    def is_injective(self, p=None):
        n = self.source.dim if p is None else self.source.prefix(p)
        if self.source.base == SET:
            seen = set()
            for c in self.cols[:n]:
                (j,) = c
                if j in seen:
                    return False
                seen.add(j)
            return True
        return self.rank(p) == n

    def is_surjective(self, p=None):
        n = self.target.dim if p is None else self.target.prefix(p)
        if self.source.base == SET:
            m = self.source.dim if p is None else self.source.prefix(p)
            return len({next(iter(c)) for c in self.cols[:m]}) == n
        return self.rank(p) == n

    def is_iso(self, p=None):
        return self.is_injective(p) and self.is_surjective(p)


# --- standard constructions -----------------------------------------------

def free_space(base, stage, items, name=""):
    """A space with no relations; ``items`` yields ``(term, weight, degree, dvec)``."""
    items = [it for it in items if it[1] <= stage]
    dmap = {it[0]: it[3] for it in items}
    return present(
        base,
        stage,
        [(t, w, g) for t, w, g, _ in items],
        (),
        (lambda t: dmap[t]) if base == CHAIN else None,
        name,
    )


def _weighted_tuples(spaces, stage, fixed_weight=0):
    """All basis tuples of the given spaces with total weight at most ``stage``."""
    orders = [sorted(range(s.dim), key=lambda i, s=s: s.weights[i]) for s in spaces]
    mins = [min(s.weights) if s.dim else None for s in spaces]
    if any(m is None for m in mins):
        return []
    suffix_min = [0] * (len(spaces) + 1)
    for k in range(len(spaces) - 1, -1, -1):
        suffix_min[k] = suffix_min[k + 1] + mins[k]
    out = []

    def rec(k, acc, w):
        if k == len(spaces):
            out.append(tuple(acc))
            return
        budget = stage - w - suffix_min[k + 1]
        s = spaces[k]
        for i in orders[k]:
            wi = s.weights[i]
            if wi > budget:
                break
            acc.append(i)
            rec(k + 1, acc, w + wi)
            acc.pop()

    rec(0, [], fixed_weight)
    return out


def tuple_grading(spaces, tup, extra_weight=0):
    w = extra_weight + sum(s.weights[i] for s, i in zip(spaces, tup))
    g = sum(s.degrees[i] for s, i in zip(spaces, tup))
    return w, g


def tuple_boundary(spaces, tup):
    """Koszul differential of a basis tuple, as a vector over tuples."""
    out = {}
    sign = 1
    for k, (s, i) in enumerate(zip(spaces, tup)):
        for j, c in s.d[i].items():
            t = tup[:k] + (j,) + tup[k + 1:]
            vadd(out, {t: 1}, sign * c)
        if s.degrees[i] % 2:
            sign = -sign
    return out


def tensor(spaces, stage, name=""):
    """Plain tensor product; basis terms are tuples of factor indices."""
    base = spaces[0].base
    tuples = _weighted_tuples(spaces, stage)
    items = []
    for t in tuples:
        w, g = tuple_grading(spaces, t)
        items.append((t, w, g, tuple_boundary(spaces, t) if base == CHAIN else {}))
    return free_space(base, stage, items, name)


def tensor_over(factors, actions, stage, name=""):
    """Iterated tensor product over monoids.

    ``factors`` are spaces ``M_1 .. M_n``.  ``actions[k]`` describes how
    ``M_k`` and ``M_{k+1}`` are glued: ``None`` for a plain tensor, otherwise a
    triple ``(R, right, left)`` with ``R`` the monoid space, ``right(m, r)`` the
    right action on ``M_k`` and ``left(r, m)`` the left action on ``M_{k+1}``,
    both returning sparse vectors over basis indices.  Basis terms of the result
    are tuples of factor indices.
    """
    base = factors[0].base
    tuples = _weighted_tuples(factors, stage)
    spanning = []
    for t in tuples:
        w, g = tuple_grading(factors, t)
        spanning.append((t, w, g))
    relations = []
    for k, act in enumerate(actions):
        if act is None:
            continue
        monoid, right, left = act
        unit_terms = _unit_indices(monoid)
        mid = factors[:k + 1] + [monoid] + factors[k + 1:]
        for t in _weighted_tuples(mid, stage):
            r = t[k + 1]
            if r in unit_terms:
                continue
            head, m1, m2, tail = t[:k], t[k], t[k + 2], t[k + 3:]
            lhs = tensor_vecs([_single(x) for x in head] + [right(m1, r), {m2: 1}] + [_single(x) for x in tail])
            rhs = tensor_vecs([_single(x) for x in head] + [{m1: 1}, left(r, m2)] + [_single(x) for x in tail])
            if lhs != rhs:
                relations.append((lhs, rhs))
    bd = (lambda t: tuple_boundary(factors, t)) if base == CHAIN else None
    return present(base, stage, spanning, relations, bd, name)


def _single(i):
    return {i: 1}


def _unit_indices(monoid):
    unit = getattr(monoid, "unit_index", None)
    return {unit} if unit is not None else set()


def colimit(objects, arrows, stage, name="", sources=None):
    """Colimit of a finite diagram of spaces.

    ``arrows`` is a list of ``(source_position, target_position, Linear)``.
    Basis terms of the result are ``(position, term)`` pairs.  Objects listed
    in ``sources`` get tags above all others so their terms are eliminated
    first when weights tie.
    """
    base = objects[0].base
    n = len(objects)
    sources = set(sources or ())
    order = [k for k in range(n) if k not in sources] + [k for k in range(n) if k in sources]
    tag = {k: pos for pos, k in enumerate(order)}
    spanning = []
    for k, obj in enumerate(objects):
        for i, w, g in zip(range(obj.dim), obj.weights, obj.degrees):
            spanning.append(((tag[k], i), w, g))
    relations = []
    for s, t, f in arrows:
        for i, col in enumerate(f.cols):
            if objects[s].weights[i] > stage:
                continue
            relations.append(({(tag[s], i): 1}, {(tag[t], j): c for j, c in col.items()}))
    inv = {v: k for k, v in tag.items()}

    def bd(term):
        k = inv[term[0]]
        return {(term[0], j): c for j, c in objects[k].d[term[1]].items()}

    space = present(base, stage, spanning, relations, bd if base == CHAIN else None, name)
    legs = [
        Linear(obj, space, [space.vec((tag[k], i)) for i in range(obj.dim)])
        for k, obj in enumerate(objects)
    ]
    return space, legs


def restrict(space, p):
    """The weight-``p`` part of a space as a space in its own right."""
    n = space.prefix(p)
    terms = space.terms[:n]
    normal = {t: {i: 1} for i, t in enumerate(terms)}
    return Space(space.base, p, terms, space.weights[:n], space.degrees[:n], normal, space.d[:n], space.name)
